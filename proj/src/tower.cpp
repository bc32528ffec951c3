#include "pgt/tower.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "pgt/catalog.hpp"
#include "pgt/pc.hpp"
#include "pgt/transfers.hpp"

namespace pgt {

std::string family_name(TowerFamily f) {
  switch (f) {
    case TowerFamily::Capitulation: return "capitulation";
    case TowerFamily::E6: return "E6";
    case TowerFamily::E8: return "E8";
    case TowerFamily::H4: return "H4";
  }
  return "?";
}

TowerFamily parse_family(const std::string& s) {
  if (s == "capitulation") return TowerFamily::Capitulation;
  if (s == "E6") return TowerFamily::E6;
  if (s == "E8") return TowerFamily::E8;
  if (s == "H4") return TowerFamily::H4;
  throw TowerError("unknown tower family '" + s + "'");
}

// ------------------------------------------------------------------ tables

const Ipad& TowerTables::outer_of(TowerFamily f) const {
  for (const auto& [g, ip] : outer)
    if (g == f) return ip;
  throw TowerError("no outer IPAD stored for " + family_name(f));
}

const TowerFallback* TowerTables::fallback_of(TowerFamily f) const {
  for (const auto& [g, fb] : fallback)
    if (g == f) return &fb;
  return nullptr;
}

std::vector<const TowerPattern*> TowerTables::of(TowerFamily f) const {
  std::vector<const TowerPattern*> out;
  for (const auto& p : patterns)
    if (p.family == f) out.push_back(&p);
  return out;
}

TowerTables parse_tower_tables(const nlohmann::json& j) {
  TowerTables t;
  try {
    for (const auto& [name, fam] : j.at("families").items()) {
      auto f = parse_family(name);
      t.outer.push_back({f, parse_ipad(fam.at("outer").get<std::string>())});
      if (fam.contains("kappa") && f == TowerFamily::H4) t.h4_kappa = parse_tkt(fam.at("kappa").get<std::string>());
      const auto& fb = fam.at("fallback");
      if (fb.is_null()) continue;
      TowerFallback x;
      if (fb.at("length").is_array()) x.length = fb.at("length").get<std::vector<int>>();
      x.note = fb.value("note", "");
      t.fallback.push_back({f, x});
    }
    for (const auto& p : j.at("patterns")) {
      TowerPattern tp;
      tp.tag = p.at("tag").get<std::string>();
      tp.family = parse_family(p.at("family").get<std::string>());
      tp.decision = p.at("decision").get<std::string>();
      for (const auto& c : p.at("children")) tp.children.push_back(parse_ipad(c.get<std::string>()));
      tp.candidates = p.at("candidates").get<std::vector<std::string>>();
      if (p.contains("candidate_lengths")) tp.candidate_lengths = p.at("candidate_lengths").get<std::vector<int>>();
      tp.length = p.at("length").get<std::vector<int>>();
      if (p.contains("kappa")) tp.kappa = parse_tkt(p.at("kappa").get<std::string>());
      t.patterns.push_back(std::move(tp));
    }
  } catch (const nlohmann::json::exception& e) {
    throw TowerError(std::string("bad tower table: ") + e.what());
  }
  return t;
}

TowerTables load_tower_tables(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw TowerError("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw TowerError(path + ": " + e.what());
  }
  return parse_tower_tables(j);
}

const TowerTables& default_tower_tables() {
  static const TowerTables t = load_tower_tables(default_data_dir() + "/tower/patterns.json");
  return t;
}

namespace {

// Number of subgroups of index p^n in an abelian group of the given type.
int abelian_layer_size(const Ati& a, int n) {
  int total = a.order_log();
  if (n < 0 || n > total) return 0;
  std::ostringstream s;
  s << a.p << " " << total << "\n";
  int g = 1;
  for (int e : a.logs) {
    for (int i = 0; i + 1 < e; ++i) s << "P " << g + i << " : g" << g + i + 1 << "\n";
    g += e;
  }
  auto P = std::make_shared<const PcPresentation>(parse_presentation(s.str()));
  return static_cast<int>(layer(whole_group(P), n).size());
}

}  // namespace

std::vector<std::string> lint_tables(const TowerTables& t) {
  std::vector<std::string> out;
  for (const auto& p : t.patterns) {
    const auto& outer = t.outer_of(p.family);
    if (p.children.size() != outer.tau1.size())
      out.push_back(p.tag + ": " + std::to_string(p.children.size()) + " children for " +
                    std::to_string(outer.tau1.size()) + " first-layer subgroups");
    std::vector<Ati> heads;
    for (const auto& c : p.children) heads.push_back(c.tau0);
    if (accumulate(heads) != accumulate(outer.tau1))
      out.push_back(p.tag + ": child heads " + format_layer(heads) + " differ from the outer layer " +
                    format_layer(outer.tau1));
    for (std::size_t i = 0; i < p.children.size(); ++i) {
      const auto& c = p.children[i];
      std::string where = p.tag + " child " + std::to_string(i + 1) + ": ";
      int n1 = abelian_layer_size(c.tau0, 1);
      if (static_cast<int>(c.tau1.size()) != n1)
        out.push_back(where + "tau1 has " + std::to_string(c.tau1.size()) + " entries, expected " + std::to_string(n1));
      if (c.tau2) {
        int n2 = abelian_layer_size(c.tau0, 2);
        if (static_cast<int>(c.tau2->size()) != n2)
          out.push_back(where + "tau2 has " + std::to_string(c.tau2->size()) + " entries, expected " +
                        std::to_string(n2));
      }
    }
    if (p.family == TowerFamily::H4)
      for (std::size_t i = 0; i < p.children.size(); ++i)
        if (!p.children[i].tau2) out.push_back(p.tag + " child " + std::to_string(i + 1) + ": missing tau2");
    if (!p.candidate_lengths.empty() && p.candidate_lengths.size() != p.candidates.size())
      out.push_back(p.tag + ": candidate_lengths and candidates differ in size");
  }
  return out;
}

// ---------------------------------------------------------------- matching

namespace {

struct Key {
  Ati tau0;
  std::vector<Ati> tau1;
  std::optional<std::vector<Ati>> tau2;
  bool operator==(const Key& o) const = default;
};

Key key_of(const Ipad& c, bool with_tau2) {
  Key k{c.tau0, accumulate(c.tau1), std::nullopt};
  if (with_tau2 && c.tau2) k.tau2 = accumulate(*c.tau2);
  return k;
}

// Multiset difference of two accumulated lists.
void multiset_diff(const std::vector<Ati>& want, const std::vector<Ati>& have, std::vector<Ati>& missing,
                   std::vector<Ati>& unexpected) {
  std::vector<Ati> a = want, b = have;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(missing));
  std::set_difference(b.begin(), b.end(), a.begin(), a.end(), std::back_inserter(unexpected));
}

std::vector<ChildDiff> child_diff(const Ipad& in, int ii, const Ipad& pat, int pi, bool with_tau2) {
  std::vector<ChildDiff> out;
  auto add = [&](const char* field, const std::vector<Ati>& want, const std::vector<Ati>& have) {
    ChildDiff d{ii, pi, field, {}, {}};
    multiset_diff(want, have, d.missing, d.unexpected);
    if (!d.missing.empty() || !d.unexpected.empty()) out.push_back(std::move(d));
  };
  add("tau0", {pat.tau0}, {in.tau0});
  add("tau1", pat.tau1, in.tau1);
  if (with_tau2 && pat.tau2) add("tau2", *pat.tau2, in.tau2 ? *in.tau2 : std::vector<Ati>{});
  return out;
}

std::size_t diff_cost(const std::vector<ChildDiff>& d) {
  std::size_t c = 0;
  for (const auto& x : d) c += x.missing.size() + x.unexpected.size();
  return c;
}

// Assignment input child i -> pattern child perm[i] that matches exactly, if any.
std::optional<std::vector<int>> exact_assignment(const std::vector<Ipad>& in, const std::vector<Ipad>& pat,
                                                 bool with_tau2) {
  if (in.size() != pat.size()) return std::nullopt;
  std::vector<int> perm(in.size());
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool ok = true;
    for (std::size_t i = 0; i < in.size() && ok; ++i) ok = key_of(in[i], with_tau2) == key_of(pat[perm[i]], with_tau2);
    if (ok) return perm;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::nullopt;
}

std::vector<ChildDiff> nearest_diff(const std::vector<Ipad>& in, const std::vector<Ipad>& pat, bool with_tau2) {
  std::vector<ChildDiff> best;
  std::size_t best_cost = SIZE_MAX;
  if (in.size() != pat.size()) return best;
  std::vector<int> perm(in.size());
  std::iota(perm.begin(), perm.end(), 0);
  do {
    std::vector<ChildDiff> d;
    for (std::size_t i = 0; i < in.size(); ++i) {
      auto x = child_diff(in[i], static_cast<int>(i), pat[perm[i]], perm[i], with_tau2);
      d.insert(d.end(), x.begin(), x.end());
    }
    auto c = diff_cost(d);
    if (c < best_cost) best_cost = c, best = std::move(d);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

void check_outer(const Ipad2& t2, const Ipad& outer, const std::string& what) {
  std::vector<Ati> heads;
  for (const auto& c : t2.children) heads.push_back(c.tau0);
  if (t2.tau0 != outer.tau0 || accumulate(heads) != accumulate(outer.tau1))
    throw TowerError(what + " requires the outer IPAD " + format_ipad(outer) + ", got [" + show_ati(t2.tau0) +
                     ";" + format_layer(accumulate(heads)) + "]");
}

TowerDecision run(const Ipad2& t2, TowerFamily f, const TowerTables& tables, bool with_tau2) {
  TowerDecision d;
  d.family = f;
  auto pats = tables.of(f);
  for (const auto* p : pats) {
    auto perm = exact_assignment(t2.children, p->children, with_tau2);
    if (!perm) continue;
    d.status = TowerDecision::Status::Decided;
    d.matched_pattern = p->tag;
    d.candidates = p->candidates;
    d.candidate_lengths = p->candidate_lengths;
    d.length = p->length;
    if (p->kappa) {
      // relabel the stored kernel type into the input order
      const auto& pk = p->kappa->kappa;
      std::vector<int> inv(perm->size());
      for (std::size_t i = 0; i < perm->size(); ++i) inv[(*perm)[i]] = static_cast<int>(i);
      Tkt k;
      k.kappa.resize(perm->size());
      for (std::size_t i = 0; i < perm->size(); ++i) {
        int v = pk[(*perm)[i]];
        k.kappa[i] = v == 0 ? 0 : inv[v - 1] + 1;
      }
      d.kappa = k;
    }
    return d;
  }
  std::size_t best = SIZE_MAX;
  for (const auto* p : pats) {
    auto diff = nearest_diff(t2.children, p->children, with_tau2);
    auto c = diff_cost(diff);
    if (c < best) best = c, d.nearest_pattern = p->tag, d.diff = std::move(diff);
  }
  if (const auto* fb = tables.fallback_of(f)) {
    d.length = fb->length;
    d.length_unbounded = fb->length.empty();
    d.notes.push_back(fb->note);
  }
  return d;
}

}  // namespace

bool children_match(const std::vector<Ipad>& a, const std::vector<Ipad>& b, bool compare_tau2) {
  return exact_assignment(a, b, compare_tau2).has_value();
}

TowerDecision decide_capitulation(const Ipad2& t2, const TowerTables& tables) {
  check_outer(t2, tables.outer_of(TowerFamily::Capitulation), "capitulation decision");
  auto d = run(t2, TowerFamily::Capitulation, tables, false);
  if (d.status == TowerDecision::Status::Undecided) {
    d.length = {2};  // the outer IPAD alone forces a metabelian group of coclass 1
    d.candidates = {"<81,8>", "<81,9>", "<81,10>"};
    d.notes.push_back("inner IPADs match no stored pattern");
  }
  return d;
}

TowerDecision decide_length_E(const Ipad2& t2, std::optional<TowerFamily> tree, const std::optional<Tkt>& kappa,
                              const TowerTables& tables) {
  if (!tree) {
    std::vector<Ati> heads;
    for (const auto& c : t2.children) heads.push_back(c.tau0);
    auto acc = accumulate(heads);
    if (acc == accumulate(tables.outer_of(TowerFamily::E6).tau1)) tree = TowerFamily::E6;
    else if (acc == accumulate(tables.outer_of(TowerFamily::E8).tau1)) tree = TowerFamily::E8;
    else throw TowerError("outer IPAD fits neither coclass-2 tree");
  }
  if (*tree != TowerFamily::E6 && *tree != TowerFamily::E8) throw TowerError("tree must be E6 or E8");
  check_outer(t2, tables.outer_of(*tree), "length decision for tree " + family_name(*tree));
  std::vector<std::string> pre;
  if (kappa) {
    const auto& k = kappa->kappa;
    if (std::find(k.begin(), k.end(), 0) != k.end()) pre.push_back("kernel type contains a total principalization");
    auto cyc = cycle_lengths(*kappa);
    if (std::find(cyc.begin(), cyc.end(), 2) != cyc.end()) pre.push_back("kernel type contains a 2-cycle");
  }
  if (!pre.empty()) {
    std::string msg = "precondition violated:";
    for (const auto& s : pre) msg += " " + s + ";";
    throw TowerError(msg);
  }
  auto d = run(t2, *tree, tables, false);
  if (!kappa) d.notes.push_back("kernel type not given; assumed free of total principalization and 2-cycles");
  return d;
}

TowerDecision decide_length_H4(const Ipad2& t2s, const TowerTables& tables) {
  check_outer(t2s, tables.outer_of(TowerFamily::H4), "H.4 length decision");
  if (!t2s.starred()) throw TowerError("H.4 length decision needs the second layer tau2 of every child");
  auto d = run(t2s, TowerFamily::H4, tables, true);
  return d;
}

TowerDecision decide_tower(const Ipad2& t2, std::optional<TowerFamily> family, const TowerTables& tables) {
  if (family) {
    switch (*family) {
      case TowerFamily::Capitulation: return decide_capitulation(t2, tables);
      case TowerFamily::H4: return decide_length_H4(t2, tables);
      default: return decide_length_E(t2, family, std::nullopt, tables);
    }
  }
  std::vector<Ati> heads;
  for (const auto& c : t2.children) heads.push_back(c.tau0);
  auto acc = accumulate(heads);
  for (auto f : {TowerFamily::Capitulation, TowerFamily::E6, TowerFamily::E8, TowerFamily::H4})
    if (t2.tau0 == tables.outer_of(f).tau0 && acc == accumulate(tables.outer_of(f).tau1))
      return decide_tower(t2, f, tables);
  throw TowerError("outer IPAD [" + show_ati(t2.tau0) + ";" + format_layer(acc) + "] fits no tower family");
}

std::vector<std::string> consistent_patterns(const std::vector<ChildObservation>& obs, TowerFamily f,
                                             const TowerTables& tables) {
  std::vector<std::string> out;
  auto fits = [](const ChildObservation& o, const Ipad& c) {
    if (o.tau0 && *o.tau0 != c.tau0) return false;
    if (o.tau1 && accumulate(*o.tau1) != accumulate(c.tau1)) return false;
    if (o.tau2 && (!c.tau2 || accumulate(*o.tau2) != accumulate(*c.tau2))) return false;
    return true;
  };
  for (const auto* p : tables.of(f)) {
    if (obs.size() > p->children.size()) continue;
    std::vector<int> perm(p->children.size());
    std::iota(perm.begin(), perm.end(), 0);
    bool any = false;
    do {
      bool ok = true;
      for (std::size_t i = 0; i < obs.size() && ok; ++i) ok = fits(obs[i], p->children[perm[i]]);
      any = any || ok;
    } while (!any && std::next_permutation(perm.begin(), perm.end()));
    if (any) out.push_back(p->tag);
  }
  return out;
}

// ------------------------------------------------------------------ output

nlohmann::json to_json(const TowerDecision& d) {
  nlohmann::json j;
  j["status"] = d.status == TowerDecision::Status::Decided ? "decided" : "undecided";
  j["family"] = family_name(d.family);
  if (!d.matched_pattern.empty()) j["matched_pattern"] = d.matched_pattern;
  j["group_candidates"] = d.candidates;
  if (!d.candidate_lengths.empty()) j["candidate_lengths"] = d.candidate_lengths;
  if (d.length_unbounded) j["length"] = ">=2 unbounded";
  else j["length"] = d.length;
  if (d.kappa) j["kappa"] = format_tkt(*d.kappa);
  if (!d.nearest_pattern.empty()) {
    j["nearest_pattern"] = d.nearest_pattern;
    j["diff"] = nlohmann::json::array();
    for (const auto& x : d.diff) {
      nlohmann::json e;
      e["input_child"] = x.input_index + 1;
      e["pattern_child"] = x.pattern_index + 1;
      e["field"] = x.field;
      e["missing"] = nlohmann::json::array();
      for (const auto& a : x.missing) e["missing"].push_back(show_ati(a));
      e["unexpected"] = nlohmann::json::array();
      for (const auto& a : x.unexpected) e["unexpected"].push_back(show_ati(a));
      j["diff"].push_back(e);
    }
  }
  j["notes"] = d.notes;
  return j;
}

std::string describe(const TowerDecision& d) {
  std::ostringstream s;
  s << "family: " << family_name(d.family) << "\n";
  if (d.status == TowerDecision::Status::Decided) s << "pattern: " << d.matched_pattern << "\n";
  else s << "pattern: none (nearest " << d.nearest_pattern << ")\n";
  if (!d.candidates.empty()) {
    s << "group candidates:";
    for (std::size_t i = 0; i < d.candidates.size(); ++i) {
      s << " " << d.candidates[i];
      if (i < d.candidate_lengths.size()) s << " (length " << d.candidate_lengths[i] << ")";
    }
    s << "\n";
  }
  s << "tower length: ";
  if (d.length_unbounded) s << ">= 2, unbounded";
  else if (d.length.size() == 1) s << d.length[0];
  else {
    s << "one of {";
    for (std::size_t i = 0; i < d.length.size(); ++i) s << (i ? "," : "") << d.length[i];
    s << "}";
  }
  s << "\n";
  if (d.kappa) s << "kernel type: " << format_tkt(*d.kappa) << "\n";
  for (const auto& x : d.diff) {
    s << "  child " << x.input_index + 1 << " " << x.field << ":";
    if (!x.missing.empty()) s << " missing " << format_layer(x.missing);
    if (!x.unexpected.empty()) s << " unexpected " << format_layer(x.unexpected);
    s << "\n";
  }
  for (const auto& n : d.notes) s << "note: " << n << "\n";
  return s.str();
}

}  // namespace pgt
