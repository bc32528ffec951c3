// Published arithmetic data of the complex quadratic fields with 3-class
// rank three: loading, the accumulated IPAD classification and the
// non-isomorphism report.
//
// data/table1.csv   no,d,cl3_type,cl_type          one row per discriminant
// data/table2.csv   no,d,i,kappa,o_kappa,tau,tau0  13 rows per (3,3,3) field
// data/table3.csv   no,d,<six ATI columns>,polarization,state
// ATI fields use the logarithmic grammar ("2^21^2") or power form ("(9,3,3)").
#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "pgt/ati.hpp"
#include "pgt/ipad.hpp"

namespace pgt {

struct FieldDataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ClassGroupRow {
  int no = 0;
  long long d = 0;
  Ati cl3_type;
  std::vector<long long> cl_type;  // full class group invariants
};

struct FieldRecord {
  int no = 0;
  long long d = 0;
  Ati cl3_type;
  std::vector<long long> cl_type;
  Tkt kappa;
  std::vector<int> o_kappa;  // as published
  std::vector<Ati> tau;
  std::vector<Ati> tau0;
};

std::vector<ClassGroupRow> load_table1(const std::string& path);
std::vector<FieldRecord> load_table2(const std::string& path);
std::vector<ClassGroupRow> read_table1(std::istream& in);
std::vector<FieldRecord> read_table2(std::istream& in);
// Fills cl3_type/cl_type of the records from the class group rows by d.
void attach_class_groups(std::vector<FieldRecord>& recs, const std::vector<ClassGroupRow>& rows);

// Problems found in a record: kernel range, published vs recomputed
// occupation numbers, entry counts, and the pairing of large tau entries with
// tau0 of type 21 or 31.
std::vector<std::string> validate_record(const FieldRecord& r);

struct Rank3Classification {
  long long d = 0;
  std::map<std::string, int> counts;  // ATI (log form) -> multiplicity
  int polarization = 0;               // components of order > 3^6
  std::string polarization_name;      // uni | bi | tri | tetra
  std::string state;                  // ground | excited
};

// Column order of the accumulated table.
const std::vector<std::string>& table3_columns();
Rank3Classification classify_record(const FieldRecord& r);

struct Table3Row {
  int no = 0;
  long long d = 0;
  std::vector<int> counts;  // in table3_columns() order
  std::string polarization;
  std::string state;
};
std::vector<Table3Row> load_table3(const std::string& path);
std::vector<Table3Row> regenerate_table3(const std::vector<FieldRecord>& recs);
// One message per differing cell; also rows present on one side only.
std::vector<std::string> compare_table3(const std::vector<Table3Row>& expected, const std::vector<Table3Row>& computed);

struct Fingerprint3 {
  std::vector<std::pair<std::string, int>> accumulated;
  std::vector<int> occupation;  // sorted decreasing
  int max_occupation = 0;
  bool operator==(const Fingerprint3& o) const = default;
  bool operator<(const Fingerprint3& o) const;
};

struct NonIsomorphismReport {
  std::vector<std::pair<long long, Fingerprint3>> fingerprints;
  bool all_distinct = false;
  // groups of discriminants sharing the accumulated IPAD
  std::vector<std::vector<long long>> critical;
  std::vector<std::string> problems;
};

Fingerprint3 fingerprint(const FieldRecord& r);
NonIsomorphismReport nonisomorphism_report(const std::vector<FieldRecord>& recs);

nlohmann::json to_json(const Rank3Classification& c);
nlohmann::json to_json(const NonIsomorphismReport& r);
std::string describe(const NonIsomorphismReport& r);

}  // namespace pgt
