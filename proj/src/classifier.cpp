#include "pgt/classifier.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace pgt {

namespace {

Ati A(int n) { return nearly_homocyclic(n); }
Ati L(std::vector<int> logs) { return Ati(std::move(logs), 3); }

const Ati kOne = L({1});
const Ati kOne2 = L({1, 1});
const Ati kOne3 = L({1, 1, 1});
const Ati kTwoOne = L({2, 1});

int max_order_log(const std::vector<Ati>& v) {
  int m = 0;
  for (const auto& a : v) m = std::max(m, a.order_log());
  return m;
}

bool is_submultiset(const std::vector<Ati>& small, const std::vector<Ati>& big) {
  std::map<std::vector<int>, int> count;
  for (const auto& a : big) ++count[a.logs];
  for (const auto& a : small)
    if (--count[a.logs] < 0) return false;
  return true;
}

Template sporadic(int r, int c, int k, std::vector<Ati> tau1, Ati tau2, std::vector<std::string> cands,
                  std::vector<std::string> notes = {}) {
  Template t;
  t.source = Template::Source::Sporadic;
  t.coclass = r;
  t.cls = c;
  t.defect = k;
  t.tau1 = accumulate(std::move(tau1));
  t.tau2 = {std::move(tau2)};
  t.candidates = std::move(cands);
  t.notes = std::move(notes);
  return t;
}

const char* kMetabelianNote = "label identifies G/G''; G'' = 1 is warranted only for <243,5> and <243,7>";

}  // namespace

int Template::epsilon() const {
  return static_cast<int>(std::count_if(tau1.begin(), tau1.end(), [](const Ati& a) { return a.rank() == 3; }));
}

std::vector<Template> templates(int bound) {
  std::vector<Template> out;
  // small class
  out.push_back(sporadic(1, 1, 0, {kOne, kOne, kOne, kOne}, Ati({}, 3), {"<9,2>"}));
  out.push_back(sporadic(1, 2, 0, {kOne2, kOne2, kOne2, kOne2}, kOne, {"<27,3>"}));
  out.push_back(sporadic(1, 2, 0, {kOne2, L({2}), L({2}), L({2})}, kOne, {"<27,4>"}));
  out.push_back(sporadic(1, 3, 0, {kOne3, kOne2, kOne2, kOne2}, kOne2, {"<81,7>"}));
  out.push_back(sporadic(1, 3, 0, {kTwoOne, kOne2, kOne2, kOne2}, kOne2, {"<81,8>", "<81,9>", "<81,10>"}));
  out.push_back(sporadic(2, 3, 0, {kTwoOne, kTwoOne, kOne3, kTwoOne}, kOne3, {"<243,5>", "<243,6>"},
                         {"<243,6> identifies G/G'' only"}));
  out.push_back(sporadic(2, 3, 0, {kTwoOne, kTwoOne, kOne3, kOne3}, kOne3, {"<243,3>", "<243,7>"},
                         {"<243,3> identifies G/G'' only"}));
  out.push_back(sporadic(2, 3, 0, {kOne3, kOne3, kTwoOne, kOne3}, kOne3, {"<243,4>"}, {kMetabelianNote}));
  out.push_back(sporadic(2, 3, 0, {kTwoOne, kTwoOne, kTwoOne, kTwoOne}, kOne3, {"<243,8>", "<243,9>"},
                         {kMetabelianNote}));
  const Ati two_one2 = L({2, 1, 1}), one4 = L({1, 1, 1, 1});
  out.push_back(sporadic(2, 4, 1, {kTwoOne, kTwoOne, kOne3, kOne3}, two_one2, {"<729,37>", "<729,38>", "<729,39>"},
                         {kMetabelianNote}));
  out.push_back(sporadic(2, 4, 1, {kTwoOne, kTwoOne, kOne3, kOne3}, one4, {"<729,34>", "<729,35>", "<729,36>"},
                         {kMetabelianNote}));
  out.push_back(sporadic(2, 4, 1, {kOne3, kOne3, kTwoOne, kOne3}, two_one2,
                         {"<729,44>", "<729,45>", "<729,46>", "<729,47>"}, {kMetabelianNote}));
  out.push_back(sporadic(2, 4, 1, {kTwoOne, kTwoOne, kTwoOne, kTwoOne}, one4, {"<729,56>", "<729,57>"},
                         {kMetabelianNote}));

  // coclass 1, class >= 4
  for (int c = 4; c <= bound + 1; ++c)
    for (int k = 0; k <= 1; ++k) {
      if (c - k > bound) continue;
      Template t;
      t.coclass = 1;
      t.cls = c;
      t.defect = k;
      t.polarized = A(c - k);
      t.tau1 = accumulate({A(c - k), kOne2, kOne2, kOne2});
      t.tau2 = {A(c - 1)};
      t.tree = "T1(<9,2>)";
      if (c == 4 && k == 1)
        t.notes.push_back("first layer coincides with <81,8|9|10>; the second layer (21 here, 1^2 there) separates them");
      out.push_back(std::move(t));
    }

  // coclass 2, class >= 5 or class 4 with k = 0
  for (int c = 4; c <= bound + 1; ++c)
    for (int k = 0; k <= 1; ++k) {
      if (c - k > bound || (c == 4 && k == 1)) continue;
      const std::vector<std::pair<std::vector<Ati>, std::string>> shapes = {
          {{kTwoOne, kOne3, kOne3}, "T2(<729,40>)"},
          {{kTwoOne, kOne3, kTwoOne}, "T2(<729,49>)"},
          {{kTwoOne, kTwoOne, kTwoOne}, "T2(<729,54>)"},
      };
      for (const auto& [rest, tree] : shapes) {
        Template t;
        t.coclass = 2;
        t.cls = c;
        t.defect = k;
        t.polarized = A(c - k);
        std::vector<Ati> v{A(c - k)};
        v.insert(v.end(), rest.begin(), rest.end());
        t.tau1 = accumulate(v);
        t.tau2 = {A(c - 1) * A(1)};
        t.tree = tree;
        out.push_back(std::move(t));
      }
    }

  // coclass r >= 3, class >= r + 1
  for (int r = 3; r + 1 <= bound; ++r)
    for (int c = r + 1; c <= bound + 1; ++c)
      for (int k = 0; k <= 1; ++k) {
        if (c - k > bound || c - k < r + 1) continue;
        Template t;
        t.coclass = r;
        t.cls = c;
        t.defect = k;
        bool small = c == r + 1 || (c == r + 2 && k == 1);
        t.source = small ? Template::Source::Sporadic : Template::Source::Sequence;
        if (c - k != r + 1) t.polarized = A(c - k);
        t.tau1 = accumulate({A(c - k), A(r + 1), kOne3, kOne3});
        t.tau2 = {A(c - 1) * A(r - 1)};
        if (c == r + 2 && k == 1) {
          t.notes.push_back("regular case");
          out.push_back(t);
          if (c % 2 == 0) {
            t.tau2 = {A(r) * A(r)};
            t.notes = {"irregular case (relational parameter -1, even class only)"};
            out.push_back(t);
          }
          continue;
        }
        out.push_back(std::move(t));
      }
  return out;
}

Classification classify_ipad(const Ipad& ip, bool ordered) {
  if (ip.tau0 != kOne2)
    throw UnsupportedError("only abelianization of type (3,3) is covered; got " + show_ati(ip.tau0));
  if (ip.tau1.size() != 4)
    throw UnsupportedError("expected four first-layer components, got " + std::to_string(ip.tau1.size()));
  Classification out;
  const auto S = accumulate(ip.tau1);
  bool tau1_fits = false;
  for (auto& t : templates(std::max(1, max_order_log(S)))) {
    if (t.tau1 != S) continue;
    tau1_fits = true;
    if (ip.tau2 && accumulate(*ip.tau2) != t.tau2) continue;
    Match m{std::move(t), std::nullopt};
    if (ordered && m.tmpl.polarized) {
      int hits = 0;
      for (int i = 0; i < 4; ++i)
        if (ip.tau1[i] == *m.tmpl.polarized) m.polarized_index = i, ++hits;
      if (hits != 1) m.polarized_index.reset();
    }
    out.matches.push_back(std::move(m));
  }
  if (!out.matches.empty()) {
    out.verdict = Classification::Verdict::Matched;
    return out;
  }
  out.verdict = Classification::Verdict::Malformed;
  if (tau1_fits) {
    out.second_layer_conflict = true;
    out.reason = "first layer fits a pattern but the second layer does not";
    return out;
  }
  out.reason = "first layer not covered by any pattern";
  for (std::size_t i = 0; i < S.size(); ++i) {
    if (i > 0 && S[i] == S[i - 1]) continue;
    std::vector<Ati> rest = S;
    rest.erase(rest.begin() + static_cast<long>(i));
    for (const auto& t : templates(max_order_log(rest) + 2))
      if (is_submultiset(rest, t.tau1)) {
        out.offending_candidates.push_back(S[i]);
        break;
      }
  }
  if (out.offending_candidates.size() == 1) out.offending = out.offending_candidates.front();
  return out;
}

Classification check_93(const Ipad& ip) {
  if (ip.tau0 != kTwoOne) throw UnsupportedError("expected abelianization of type (9,3)");
  if (ip.tau1.size() != 4)
    throw UnsupportedError("expected four first-layer components, got " + std::to_string(ip.tau1.size()));
  const std::vector<Ati> base{L({2, 1, 1}), L({3, 1}), L({3, 1})};
  std::vector<std::vector<Ati>> shapes;
  for (const auto& x : {L({2, 1, 1}), L({2, 2, 2}), L({4, 3, 1})}) {
    auto v = base;
    v.push_back(x);
    shapes.push_back(accumulate(v));
  }
  Classification out;
  out.heuristic = true;
  const auto S = accumulate(ip.tau1);
  if (std::find(shapes.begin(), shapes.end(), S) != shapes.end()) {
    out.verdict = Classification::Verdict::Matched;
    out.reason = "first layer has an observed well-formed shape";
    return out;
  }
  out.verdict = Classification::Verdict::Malformed;
  out.reason = "first layer differs from the observed well-formed shapes";
  for (std::size_t i = 0; i < S.size(); ++i) {
    if (i > 0 && S[i] == S[i - 1]) continue;
    std::vector<Ati> rest = S;
    rest.erase(rest.begin() + static_cast<long>(i));
    for (const auto& sh : shapes)
      if (is_submultiset(rest, sh)) {
        out.offending_candidates.push_back(S[i]);
        break;
      }
  }
  if (out.offending_candidates.size() == 1) out.offending = out.offending_candidates.front();
  return out;
}

namespace {

nlohmann::json match_json(const Match& m) {
  nlohmann::json j;
  j["source"] = m.tmpl.source == Template::Source::Sporadic ? "sporadic" : "sequence";
  j["coclass"] = m.tmpl.coclass;
  j["class"] = m.tmpl.cls;
  j["defect"] = m.tmpl.defect;
  j["epsilon"] = m.tmpl.epsilon();
  j["tau1"] = format_layer(m.tmpl.tau1);
  j["tau2"] = format_layer(m.tmpl.tau2);
  if (!m.tmpl.tree.empty()) j["tree"] = m.tmpl.tree;
  j["candidates"] = m.tmpl.candidates;
  if (m.tmpl.polarized) j["polarized"] = show_ati(*m.tmpl.polarized);
  if (m.polarized_index) j["polarized_index"] = *m.polarized_index + 1;
  j["notes"] = m.tmpl.notes;
  return j;
}

}  // namespace

nlohmann::json to_json(const Classification& c) {
  nlohmann::json j;
  j["verdict"] = c.verdict == Classification::Verdict::Matched ? "matched" : "malformed";
  j["heuristic"] = c.heuristic;
  j["matches"] = nlohmann::json::array();
  for (const auto& m : c.matches) j["matches"].push_back(match_json(m));
  if (c.offending) {
    j["offending"] = show_ati(*c.offending);
    j["offending_power"] = format_ati(*c.offending, AtiNotation::Power);
  }
  if (c.offending_candidates.size() > 1) {
    j["offending_candidates"] = nlohmann::json::array();
    for (const auto& a : c.offending_candidates) j["offending_candidates"].push_back(show_ati(a));
  }
  if (c.second_layer_conflict) j["second_layer_conflict"] = true;
  if (!c.reason.empty()) j["reason"] = c.reason;
  return j;
}

std::string describe(const Classification& c) {
  std::ostringstream out;
  if (c.verdict == Classification::Verdict::Malformed) {
    out << "malformed" << (c.heuristic ? " (heuristic)" : "") << ": " << c.reason << "\n";
    if (c.offending)
      out << "  offending component " << show_ati(*c.offending) << " = "
          << format_ati(*c.offending, AtiNotation::Power) << "\n";
    else if (!c.offending_candidates.empty()) {
      out << "  offending component is one of";
      for (const auto& a : c.offending_candidates) out << " " << show_ati(a);
      out << "\n";
    }
    return out.str();
  }
  out << "matched" << (c.heuristic ? " (heuristic)" : "") << "\n";
  for (const auto& m : c.matches) {
    const auto& t = m.tmpl;
    out << "  " << (t.source == Template::Source::Sporadic ? "sporadic" : "sequence") << ": coclass " << t.coclass
        << ", class " << t.cls << ", defect " << t.defect << " (c-k=" << t.cls - t.defect << ")"
        << ", epsilon " << t.epsilon() << ", tau2 " << format_layer(t.tau2);
    if (!t.tree.empty()) out << ", tree " << t.tree;
    if (!t.candidates.empty()) {
      out << ", candidates {";
      for (std::size_t i = 0; i < t.candidates.size(); ++i) out << (i ? "," : "") << t.candidates[i];
      out << "}";
    }
    if (m.polarized_index) out << ", polarized position " << *m.polarized_index + 1;
    out << "\n";
    for (const auto& n : t.notes) out << "    note: " << n << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------- sifting

std::vector<std::vector<std::string>> read_csv(std::istream& in) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false, any = false;
  char ch;
  auto end_field = [&] {
    row.push_back(field);
    field.clear();
  };
  auto end_row = [&] {
    end_field();
    bool blank = row.size() == 1 && row[0].empty();
    if (!blank) rows.push_back(row);
    row.clear();
  };
  while (in.get(ch)) {
    any = true;
    if (quoted) {
      if (ch == '"') {
        if (in.peek() == '"') {
          field += '"';
          in.get();
        } else {
          quoted = false;
        }
      } else {
        field += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      end_field();
    } else if (ch == '\n') {
      end_row();
    } else if (ch != '\r') {
      field += ch;
    }
  }
  if (quoted) throw std::runtime_error("unterminated quoted CSV field");
  if (any && (!field.empty() || !row.empty())) end_row();
  return rows;
}

std::vector<SiftRecord> read_sift_csv(std::istream& in) {
  auto rows = read_csv(in);
  if (rows.empty()) throw std::runtime_error("empty CSV");
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < rows[0].size(); ++i) col[rows[0][i]] = i;
  for (const char* need : {"id", "tau0", "tau1_1", "tau1_2", "tau1_3", "tau1_4"})
    if (!col.count(need)) throw std::runtime_error(std::string("CSV header lacks column ") + need);
  std::vector<SiftRecord> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    auto get = [&](const std::string& name) -> std::string {
      auto it = col.find(name);
      if (it == col.end() || it->second >= row.size()) return "";
      return row[it->second];
    };
    SiftRecord rec;
    rec.id = get("id");
    rec.d = get("d");
    try {
      Ipad ip;
      ip.tau0 = parse_ati(get("tau0"));
      for (int i = 1; i <= 4; ++i) {
        auto f = get("tau1_" + std::to_string(i));
        if (f.empty()) throw AtiError("missing tau1_" + std::to_string(i));
        ip.tau1.push_back(parse_ati(f));
      }
      if (auto t2 = get("tau2"); !t2.empty()) ip.tau2 = std::vector<Ati>{parse_ati(t2)};
      rec.ipad = ip;
    } catch (const std::exception& e) {
      rec.parse_error = e.what();
    }
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<SiftRecord> load_sift_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  return read_sift_csv(f);
}

SiftReport sift(const std::vector<SiftRecord>& records) {
  SiftReport rep;
  for (const auto& rec : records) {
    SiftResult res;
    res.record = rec;
    if (!rec.ipad) {
      res.status = "error";
      res.message = rec.parse_error;
      ++rep.errors;
    } else {
      try {
        if (rec.ipad->tau0 == kTwoOne)
          res.classification = check_93(*rec.ipad);
        else
          res.classification = classify_ipad(*rec.ipad);
        bool ok = res.classification->verdict == Classification::Verdict::Matched;
        res.status = ok ? "ok" : "malformed";
        ++(ok ? rep.ok : rep.malformed);
      } catch (const UnsupportedError& e) {
        res.status = "unsupported";
        res.message = e.what();
        ++rep.unsupported;
      }
    }
    rep.results.push_back(std::move(res));
  }
  return rep;
}

nlohmann::json to_json(const SiftReport& r) {
  nlohmann::json j;
  j["records"] = nlohmann::json::array();
  for (const auto& res : r.results) {
    nlohmann::json x;
    x["id"] = res.record.id;
    x["d"] = res.record.d;
    x["status"] = res.status;
    if (!res.message.empty()) x["message"] = res.message;
    if (res.classification) {
      x["heuristic"] = res.classification->heuristic;
      if (res.classification->offending) {
        x["offending"] = format_ati(*res.classification->offending, AtiNotation::Power);
      }
      x["matches"] = res.classification->matches.size();
    }
    j["records"].push_back(x);
  }
  j["summary"] = {{"ok", r.ok}, {"malformed", r.malformed}, {"unsupported", r.unsupported}, {"errors", r.errors}};
  return j;
}

}  // namespace pgt
