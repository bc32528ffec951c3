// Recognizes IPADs with abelianization of type (3,3) against the first- and
// second-layer patterns of 3-groups of small and large class, and sifts
// batches of IPADs for malformed records.
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "pgt/ati.hpp"
#include "pgt/ipad.hpp"

namespace pgt {

struct UnsupportedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One group pattern: accumulated first layer and second layer for a given
// coclass r, class c and defect k.
struct Template {
  enum class Source { Sporadic, Sequence };
  Source source = Source::Sequence;
  int coclass = 0, cls = 0, defect = 0;
  std::vector<Ati> tau1;   // accumulated
  std::vector<Ati> tau2;   // one component
  std::optional<Ati> polarized;  // component that moves with the class
  std::vector<std::string> candidates;
  std::string tree;
  std::vector<std::string> notes;
  int epsilon() const;  // number of rank-3 first-layer components
};

// Every template whose component orders stay within 3^bound.
std::vector<Template> templates(int bound);

struct Match {
  Template tmpl;
  std::optional<int> polarized_index;  // 0-based, ordered input only
};

struct Classification {
  enum class Verdict { Matched, Malformed };
  Verdict verdict = Verdict::Malformed;
  std::vector<Match> matches;
  std::optional<Ati> offending;           // unique offending first-layer component
  std::vector<Ati> offending_candidates;  // all components whose removal fits a pattern
  bool second_layer_conflict = false;     // first layer fits, supplied tau2 does not
  bool heuristic = false;
  std::string reason;
};

// tau0 must be 1^2 and tau1 must have four components; otherwise throws
// UnsupportedError.
Classification classify_ipad(const Ipad& ip, bool ordered = true);

// tau0 = (9,3): the first layer must complete to {(9,3,3),(27,3),(27,3),X}
// with X in {(9,3,3),(9,9,9),(81,27,3)}. Heuristic.
Classification check_93(const Ipad& ip);

nlohmann::json to_json(const Classification& c);
std::string describe(const Classification& c);

struct SiftRecord {
  std::string id;
  std::string d;
  std::optional<Ipad> ipad;
  std::string parse_error;
};
struct SiftResult {
  SiftRecord record;
  std::optional<Classification> classification;
  std::string status;  // "ok", "malformed", "unsupported", "error"
  std::string message;
};
struct SiftReport {
  std::vector<SiftResult> results;
  int ok = 0, malformed = 0, unsupported = 0, errors = 0;
};

// CSV with header id,d,tau0,tau1_1,tau1_2,tau1_3,tau1_4[,tau2]; fields use
// the ATI grammar (quote power forms that contain commas).
std::vector<SiftRecord> read_sift_csv(std::istream& in);
std::vector<SiftRecord> load_sift_csv(const std::string& path);
SiftReport sift(const std::vector<SiftRecord>& records);
nlohmann::json to_json(const SiftReport& r);

// Minimal RFC 4180 reader: rows of fields, quotes and doubled quotes honored.
std::vector<std::vector<std::string>> read_csv(std::istream& in);

}  // namespace pgt
