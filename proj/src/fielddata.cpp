#include "pgt/fielddata.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "pgt/classifier.hpp"

namespace pgt {

namespace {

std::ifstream open(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FieldDataError("cannot open " + path);
  return in;
}

long long to_ll(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw FieldDataError("bad " + what + " '" + s + "'");
  }
}

std::vector<long long> parse_invariants(const std::string& s) {
  std::string t;
  for (char c : s)
    if (c != '(' && c != ')' && c != ' ') t += c;
  std::vector<long long> out;
  std::stringstream ss(t);
  std::string part;
  while (std::getline(ss, part, ',')) out.push_back(to_ll(part, "class group invariant"));
  if (out.empty()) throw FieldDataError("empty class group type");
  return out;
}

Ati ati_field(const std::string& s, const std::string& where) {
  try {
    return parse_ati(s);
  } catch (const AtiError& e) {
    throw FieldDataError(where + ": " + e.what());
  }
}

std::vector<std::vector<std::string>> body(std::istream& in, const std::vector<std::string>& header) {
  auto rows = read_csv(in);
  if (rows.empty() || rows[0] != header) {
    std::string h;
    for (const auto& x : header) h += (h.empty() ? "" : ",") + x;
    throw FieldDataError("expected header " + h);
  }
  rows.erase(rows.begin());
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (rows[i].size() != header.size())
      throw FieldDataError("row " + std::to_string(i + 2) + ": expected " + std::to_string(header.size()) + " fields");
  return rows;
}

}  // namespace

std::vector<ClassGroupRow> read_table1(std::istream& in) {
  std::vector<ClassGroupRow> out;
  for (const auto& r : body(in, {"no", "d", "cl3_type", "cl_type"})) {
    ClassGroupRow c;
    c.no = static_cast<int>(to_ll(r[0], "row number"));
    c.d = to_ll(r[1], "discriminant");
    c.cl3_type = ati_field(r[2], "d=" + r[1]);
    c.cl_type = parse_invariants(r[3]);
    out.push_back(c);
  }
  return out;
}

std::vector<FieldRecord> read_table2(std::istream& in) {
  std::vector<FieldRecord> out;
  for (const auto& r : body(in, {"no", "d", "i", "kappa", "o_kappa", "tau", "tau0"})) {
    int no = static_cast<int>(to_ll(r[0], "row number"));
    long long d = to_ll(r[1], "discriminant");
    int i = static_cast<int>(to_ll(r[2], "component index"));
    if (out.empty() || out.back().d != d) {
      FieldRecord f;
      f.no = no;
      f.d = d;
      out.push_back(f);
    }
    auto& f = out.back();
    if (i != static_cast<int>(f.tau.size()) + 1)
      throw FieldDataError("d=" + r[1] + ": component " + r[2] + " out of sequence");
    f.kappa.kappa.push_back(static_cast<int>(to_ll(r[3], "kernel index")));
    f.o_kappa.push_back(static_cast<int>(to_ll(r[4], "occupation number")));
    f.tau.push_back(ati_field(r[5], "d=" + r[1]));
    f.tau0.push_back(ati_field(r[6], "d=" + r[1]));
  }
  return out;
}

std::vector<ClassGroupRow> load_table1(const std::string& path) {
  auto in = open(path);
  return read_table1(in);
}

std::vector<FieldRecord> load_table2(const std::string& path) {
  auto in = open(path);
  return read_table2(in);
}

void attach_class_groups(std::vector<FieldRecord>& recs, const std::vector<ClassGroupRow>& rows) {
  for (auto& r : recs) {
    auto it = std::find_if(rows.begin(), rows.end(), [&](const ClassGroupRow& c) { return c.d == r.d; });
    if (it == rows.end()) throw FieldDataError("d=" + std::to_string(r.d) + " missing from the class group table");
    r.cl3_type = it->cl3_type;
    r.cl_type = it->cl_type;
  }
}

std::vector<std::string> validate_record(const FieldRecord& r) {
  std::vector<std::string> out;
  const std::string at = "d=" + std::to_string(r.d) + ": ";
  const std::size_t n = 13;
  if (r.kappa.kappa.size() != n || r.tau.size() != n || r.tau0.size() != n || r.o_kappa.size() != n) {
    out.push_back(at + "expected 13 components");
    return out;
  }
  for (std::size_t i = 0; i < n; ++i)
    if (r.kappa.kappa[i] < 1 || r.kappa.kappa[i] > 13)
      out.push_back(at + "kernel index " + std::to_string(r.kappa.kappa[i]) + " at " + std::to_string(i + 1));
  if (!out.empty()) return out;
  auto o = occupation_numbers(r.kappa);
  for (std::size_t i = 0; i < n; ++i)
    if (o[i] != r.o_kappa[i])
      out.push_back(at + "occupation number " + std::to_string(i + 1) + " published " + std::to_string(r.o_kappa[i]) +
                    ", recomputed " + std::to_string(o[i]));
  const Ati t21({2, 1}, 3), t31({3, 1}, 3);
  for (std::size_t i = 0; i < n; ++i)
    if (r.tau[i].order_log() > 6 && r.tau0[i] != t21 && r.tau0[i] != t31)
      out.push_back(at + "component " + std::to_string(i + 1) + " of order 3^" + std::to_string(r.tau[i].order_log()) +
                    " pairs with tau0 " + show_ati(r.tau0[i]));
  return out;
}

const std::vector<std::string>& table3_columns() {
  static const std::vector<std::string> cols{"2^21^2", "21^4", "1^6", "32^21", "321^3", "431^3"};
  return cols;
}

Rank3Classification classify_record(const FieldRecord& r) {
  Rank3Classification c;
  c.d = r.d;
  int top = 0;
  for (const auto& a : r.tau) {
    c.counts[format_ati(a)]++;
    if (a.order_log() > 6) ++c.polarization;
    top = std::max(top, a.order_log());
  }
  static const char* names[] = {"none", "uni", "bi", "tri", "tetra"};
  c.polarization_name = c.polarization <= 4 ? names[c.polarization] : std::to_string(c.polarization) + "-fold";
  c.state = top >= 10 ? "excited" : "ground";
  return c;
}

std::vector<Table3Row> load_table3(const std::string& path) {
  auto in = open(path);
  std::vector<std::string> header{"no", "d"};
  for (const auto& c : table3_columns()) header.push_back(c);
  header.push_back("polarization");
  header.push_back("state");
  std::vector<Table3Row> out;
  for (const auto& r : body(in, header)) {
    Table3Row t;
    t.no = static_cast<int>(to_ll(r[0], "row number"));
    t.d = to_ll(r[1], "discriminant");
    for (std::size_t k = 0; k < table3_columns().size(); ++k) t.counts.push_back(static_cast<int>(to_ll(r[2 + k], "count")));
    t.polarization = r[2 + table3_columns().size()];
    t.state = r[3 + table3_columns().size()];
    out.push_back(t);
  }
  return out;
}

std::vector<Table3Row> regenerate_table3(const std::vector<FieldRecord>& recs) {
  std::vector<Table3Row> out;
  for (const auto& r : recs) {
    auto c = classify_record(r);
    Table3Row t;
    t.no = r.no;
    t.d = r.d;
    int covered = 0;
    for (const auto& col : table3_columns()) {
      auto key = format_ati(parse_ati(col));
      int v = c.counts.count(key) ? c.counts.at(key) : 0;
      t.counts.push_back(v);
      covered += v;
    }
    if (covered != 13) throw FieldDataError("d=" + std::to_string(r.d) + ": IPAD components outside the table columns");
    t.polarization = c.polarization_name;
    t.state = c.state;
    out.push_back(t);
  }
  return out;
}

std::vector<std::string> compare_table3(const std::vector<Table3Row>& expected, const std::vector<Table3Row>& computed) {
  std::vector<std::string> out;
  for (const auto& e : expected) {
    auto it = std::find_if(computed.begin(), computed.end(), [&](const Table3Row& c) { return c.d == e.d; });
    const std::string at = "d=" + std::to_string(e.d) + ": ";
    if (it == computed.end()) {
      out.push_back(at + "not computed");
      continue;
    }
    if (it->no != e.no) out.push_back(at + "row number " + std::to_string(it->no) + " vs " + std::to_string(e.no));
    for (std::size_t k = 0; k < table3_columns().size(); ++k)
      if (k >= it->counts.size() || it->counts[k] != e.counts[k])
        out.push_back(at + table3_columns()[k] + " expected " + std::to_string(e.counts[k]) + ", computed " +
                      (k < it->counts.size() ? std::to_string(it->counts[k]) : "-"));
    if (it->polarization != e.polarization)
      out.push_back(at + "polarization expected " + e.polarization + ", computed " + it->polarization);
    if (it->state != e.state) out.push_back(at + "state expected " + e.state + ", computed " + it->state);
  }
  for (const auto& c : computed)
    if (std::none_of(expected.begin(), expected.end(), [&](const Table3Row& e) { return e.d == c.d; }))
      out.push_back("d=" + std::to_string(c.d) + ": not in the published table");
  return out;
}

bool Fingerprint3::operator<(const Fingerprint3& o) const {
  return std::tie(accumulated, occupation, max_occupation) < std::tie(o.accumulated, o.occupation, o.max_occupation);
}

Fingerprint3 fingerprint(const FieldRecord& r) {
  Fingerprint3 f;
  auto c = classify_record(r);
  f.accumulated.assign(c.counts.begin(), c.counts.end());
  f.occupation = occupation_numbers(r.kappa);
  std::sort(f.occupation.rbegin(), f.occupation.rend());
  f.max_occupation = f.occupation.empty() ? 0 : f.occupation.front();
  return f;
}

NonIsomorphismReport nonisomorphism_report(const std::vector<FieldRecord>& recs) {
  NonIsomorphismReport rep;
  for (const auto& r : recs) {
    if (r.cl3_type.logs.size() && r.cl3_type != Ati({1, 1, 1}, 3))
      rep.problems.push_back("d=" + std::to_string(r.d) + ": 3-class group is not of type (3,3,3)");
    for (auto& p : validate_record(r)) rep.problems.push_back(p);
    rep.fingerprints.push_back({r.d, fingerprint(r)});
  }
  std::set<Fingerprint3> seen;
  for (const auto& [d, f] : rep.fingerprints) seen.insert(f);
  rep.all_distinct = seen.size() == rep.fingerprints.size();
  std::map<std::vector<std::pair<std::string, int>>, std::vector<long long>> by_acc;
  for (const auto& [d, f] : rep.fingerprints) by_acc[f.accumulated].push_back(d);
  for (auto& [acc, ds] : by_acc)
    if (ds.size() > 1) rep.critical.push_back(ds);
  return rep;
}

nlohmann::json to_json(const Rank3Classification& c) {
  nlohmann::json j;
  j["d"] = c.d;
  j["counts"] = c.counts;
  j["polarization"] = c.polarization_name;
  j["state"] = c.state;
  return j;
}

nlohmann::json to_json(const NonIsomorphismReport& r) {
  nlohmann::json j;
  j["fields"] = nlohmann::json::array();
  for (const auto& [d, f] : r.fingerprints) {
    nlohmann::json e;
    e["d"] = d;
    e["accumulated"] = nlohmann::json::object();
    for (const auto& [a, n] : f.accumulated) e["accumulated"][a] = n;
    e["occupation"] = f.occupation;
    e["max_occupation"] = f.max_occupation;
    j["fields"].push_back(e);
  }
  j["all_distinct"] = r.all_distinct;
  j["critical"] = r.critical;
  j["problems"] = r.problems;
  return j;
}

std::string describe(const NonIsomorphismReport& r) {
  std::ostringstream s;
  for (const auto& [d, f] : r.fingerprints) {
    s << d << "  ";
    bool first = true;
    for (const auto& [a, n] : f.accumulated) s << (first ? "" : ", ") << a << ":" << n, first = false;
    s << "  max o = " << f.max_occupation << "\n";
  }
  for (const auto& g : r.critical) {
    s << "same accumulated IPAD:";
    for (auto d : g) s << " " << d;
    s << "; max o =";
    for (auto d : g)
      for (const auto& [e, f] : r.fingerprints)
        if (e == d) s << " " << f.max_occupation;
    s << "\n";
  }
  for (const auto& p : r.problems) s << "problem: " << p << "\n";
  s << (r.all_distinct ? "all " + std::to_string(r.fingerprints.size()) + " fingerprints are pairwise distinct\n"
                       : "duplicate fingerprints found\n");
  return s.str();
}

}  // namespace pgt
