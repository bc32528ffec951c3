#include "pgt/correspondence.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "pgt/classifier.hpp"

namespace pgt {

// ------------------------------------------------------------------ solver

int FiniteCsp::add_variable(std::vector<int> domain, std::string name) {
  domains_.push_back(std::move(domain));
  names_.push_back(std::move(name));
  return static_cast<int>(domains_.size()) - 1;
}

void FiniteCsp::add_unary(int v, std::function<bool(int)> ok, std::string why) {
  unary_.push_back({v, std::move(ok), std::move(why)});
}

void FiniteCsp::add_binary(int a, int b, std::function<bool(int, int)> ok, std::string why) {
  binary_.push_back({a, b, std::move(ok), std::move(why)});
}

bool FiniteCsp::ac3(std::vector<std::vector<int>>& dom) const {
  // arcs in both directions
  std::vector<std::pair<std::size_t, bool>> queue;
  for (std::size_t c = 0; c < binary_.size(); ++c) {
    queue.push_back({c, false});
    queue.push_back({c, true});
  }
  while (!queue.empty()) {
    auto [c, flip] = queue.back();
    queue.pop_back();
    const auto& con = binary_[c];
    int x = flip ? con.b : con.a, y = flip ? con.a : con.b;
    auto& dx = dom[x];
    auto before = dx.size();
    dx.erase(std::remove_if(dx.begin(), dx.end(),
                            [&](int vx) {
                              return std::none_of(dom[y].begin(), dom[y].end(), [&](int vy) {
                                return flip ? con.ok(vy, vx) : con.ok(vx, vy);
                              });
                            }),
             dx.end());
    if (dx.empty()) return false;
    if (dx.size() != before)
      for (std::size_t d = 0; d < binary_.size(); ++d) {
        if (d == c) continue;
        if (binary_[d].b == x) queue.push_back({d, false});
        if (binary_[d].a == x) queue.push_back({d, true});
      }
  }
  return true;
}

void FiniteCsp::search(std::vector<std::vector<int>>& dom, std::vector<int>& cur, std::size_t i,
                       std::vector<std::vector<int>>& out) const {
  if (i == dom.size()) {
    out.push_back(cur);
    return;
  }
  for (int v : dom[i]) {
    bool ok = true;
    for (const auto& con : binary_) {
      if (con.a == static_cast<int>(i) && con.b < static_cast<int>(i)) ok = ok && con.ok(v, cur[con.b]);
      if (con.b == static_cast<int>(i) && con.a < static_cast<int>(i)) ok = ok && con.ok(cur[con.a], v);
      if (con.a == static_cast<int>(i) && con.b == static_cast<int>(i)) ok = ok && con.ok(v, v);
    }
    if (!ok) continue;
    cur[i] = v;
    search(dom, cur, i + 1, out);
  }
}

std::vector<std::vector<int>> FiniteCsp::solve() const {
  auto dom = domains_;
  for (const auto& u : unary_) {
    auto& d = dom[u.v];
    d.erase(std::remove_if(d.begin(), d.end(), [&](int x) { return !u.ok(x); }), d.end());
    if (d.empty()) return {};
  }
  if (!ac3(dom)) return {};
  std::vector<std::vector<int>> out;
  std::vector<int> cur(dom.size(), 0);
  search(dom, cur, 0, out);
  return out;
}

std::vector<std::string> FiniteCsp::explain() const {
  std::vector<std::string> out;
  auto dom = domains_;
  for (const auto& u : unary_) {
    auto& d = dom[u.v];
    d.erase(std::remove_if(d.begin(), d.end(), [&](int x) { return !u.ok(x); }), d.end());
    if (d.empty()) out.push_back(u.why);
  }
  if (!out.empty()) return out;
  for (const auto& b : binary_) {
    bool any = false;
    for (int x : dom[b.a])
      for (int y : dom[b.b]) any = any || b.ok(x, y);
    if (!any) out.push_back(b.why);
  }
  if (out.empty()) out.push_back("no consistent assignment");
  return out;
}

// ----------------------------------------------------------- tree shapes

namespace {

const Ati kOne3({1, 1, 1}, 3);
const Ati kTwoOne({2, 1}, 3);

bool nearly_homocyclic_rank2(const Ati& a) {
  return a.rank() == 2 && a.logs[0] - a.logs[1] <= 1 && a.order_log() >= 3;
}

}  // namespace

std::vector<Roles> role_assignments(const std::vector<Ati>& tau1) {
  if (tau1.size() != 4) throw CorrespondenceError("expected four first-layer components");
  std::vector<int> r3, t21, other;
  for (int i = 0; i < 4; ++i) {
    if (tau1[i] == kOne3) r3.push_back(i);
    else if (tau1[i] == kTwoOne) t21.push_back(i);
    else if (nearly_homocyclic_rank2(tau1[i])) other.push_back(i);
    else throw CorrespondenceError("component " + std::to_string(i + 1) + " (" + show_ati(tau1[i]) +
                                   ") fits neither tree shape");
  }
  std::vector<Roles> out;
  auto make = [&](TreeShape s, int pol, int rank3) {
    Roles r{s, pol, rank3, {}};
    for (int i : t21)
      if (i != pol) r.twenty_one.push_back(i);
    out.push_back(r);
  };
  if (r3.size() == 1 && t21.size() + other.size() == 3) {
    if (other.size() == 1 && t21.size() == 2) make(TreeShape::Root6, other[0], r3[0]);
    else if (other.empty())
      for (int p : t21) make(TreeShape::Root6, p, r3[0]);
  } else if (r3.empty() && t21.size() + other.size() == 4) {
    if (other.size() == 1) make(TreeShape::Root8, other[0], -1);
    else if (other.empty())
      for (int p : t21) make(TreeShape::Root8, p, -1);
  }
  if (out.empty())
    throw CorrespondenceError("first layer " + format_layer(tau1) +
                              " is not of the shape [A(3,c),1^3,(21)^2] or [21,A(3,c),(21)^2]");
  return out;
}

PartialTkt parse_partial_tkt(const std::string& text) {
  std::string s;
  for (char c : text)
    if (c != '(' && c != ')' && c != ' ' && c != ',') s += c;
  PartialTkt out;
  for (char c : s) {
    if (c == '*' || c == '?') out.push_back(std::nullopt);
    else if (c >= '0' && c <= '9') out.push_back(c - '0');
    else throw CorrespondenceError("bad partial kernel type '" + text + "'");
  }
  if (out.empty()) throw CorrespondenceError("empty partial kernel type");
  return out;
}

namespace {

std::string pos(int i) { return std::to_string(i + 1); }

// Builds the kernel constraint system for one role assignment.
FiniteCsp kernel_csp(const Roles& r, const PartialTkt& partial, std::vector<int> fixed_pair = {}) {
  FiniteCsp csp;
  for (int i = 0; i < 4; ++i) csp.add_variable({0, 1, 2, 3, 4}, "kappa(" + pos(i) + ")");
  for (int i = 0; i < 4 && i < static_cast<int>(partial.size()); ++i)
    if (partial[i]) {
      int v = *partial[i];
      csp.add_unary(i, [v](int x) { return x == v; }, "given kappa(" + pos(i) + ")=" + std::to_string(v));
    }
  const int P = r.polarized + 1;
  if (r.shape == TreeShape::Root6) {
    csp.add_unary(r.rank3, [P](int x) { return x == P; },
                  "kappa(" + pos(r.rank3) + ")=" + std::to_string(P) +
                      ": the polarized class becomes principal in the rank-3 extension");
    for (int a : r.twenty_one)
      csp.add_unary(a, [R = r.rank3 + 1](int x) { return x == R; },
                    "kappa(" + pos(a) + ")=" + std::to_string(r.rank3 + 1) +
                        ": the rank-3 class becomes principal in both (21) extensions");
  } else {
    // fixed_pair: the two (21) components with fixed-point kernels
    for (int f : fixed_pair)
      csp.add_unary(f, [F = f + 1](int x) { return x == F; },
                    "kappa(" + pos(f) + ")=" + std::to_string(f + 1) + ": fixed-point kernel at a (21) component");
    for (int b : r.twenty_one)
      if (std::find(fixed_pair.begin(), fixed_pair.end(), b) == fixed_pair.end())
        csp.add_unary(b, [P](int x) { return x == P; },
                      "kappa(" + pos(b) + ")=" + std::to_string(P) +
                          ": the polarized class becomes principal in the remaining (21) extension");
  }
  return csp;
}

std::vector<std::vector<int>> fixed_pairs(const Roles& r) {
  std::vector<std::vector<int>> out;
  const auto& t = r.twenty_one;
  for (std::size_t i = 0; i < t.size(); ++i)
    for (std::size_t j = i + 1; j < t.size(); ++j) out.push_back({t[i], t[j]});
  return out;
}

std::string name_for(const Roles& r, const std::vector<int>& k, const std::vector<int>& fixed) {
  int v = k[r.polarized];
  const int P = r.polarized + 1;
  if (r.shape == TreeShape::Root6) {
    if (v == 0) return "c.18";
    if (v == P) return "E.6";
    if (v == r.rank3 + 1) return "H.4";
    return "E.14";
  }
  if (v == 0) return "c.21";
  if (v == P) return "E.8";
  if (std::find(fixed.begin(), fixed.end(), v - 1) != fixed.end()) return "E.9";
  return "G.16";
}

struct Solution {
  std::vector<int> kappa;
  std::string name;
};

std::vector<Solution> solve_all(const PartialTkt& partial, const std::vector<Roles>& roles,
                                std::vector<std::string>* why) {
  std::vector<Solution> out;
  for (const auto& r : roles) {
    std::vector<std::vector<int>> variants = {{}};
    if (r.shape == TreeShape::Root8) variants = fixed_pairs(r);
    for (const auto& fp : variants) {
      auto csp = kernel_csp(r, partial, fp);
      auto sols = csp.solve();
      if (sols.empty() && why)
        for (auto& w : csp.explain())
          if (std::find(why->begin(), why->end(), w) == why->end()) why->push_back(w);
      for (auto& s : sols) {
        bool dup = false;
        for (const auto& o : out) dup = dup || o.kappa == s;
        if (!dup) out.push_back({s, name_for(r, s, fp)});
      }
    }
  }
  return out;
}

}  // namespace

CompletionResult complete_kappa(const PartialTkt& partial, const Ipad& ip) {
  if (partial.size() != 4) throw CorrespondenceError("partial kernel type needs four entries");
  for (const auto& e : partial)
    if (e && (*e < 0 || *e > 4)) throw CorrespondenceError("kernel indices must lie in 0..4");
  auto roles = role_assignments(ip.tau1);
  auto cl = classify_ipad(ip);
  if (cl.verdict != Classification::Verdict::Matched)
    throw CorrespondenceError("IPAD is not covered by the class/coclass patterns");
  std::vector<std::string> why;
  auto sols = solve_all(partial, roles, &why);
  if (sols.empty()) {
    std::string msg = "partial kernel type contradicts the tree constraints:";
    for (const auto& w : why) msg += " " + w + ";";
    throw CorrespondenceError(msg);
  }
  CompletionResult res;
  std::set<std::string> names;
  for (const auto& s : sols) {
    res.completions.push_back(Tkt{s.kappa});
    names.insert(s.name);
  }
  res.tkt_name = names.size() == 1 ? *names.begin() : "ambiguous";
  if (names.size() > 1) {
    std::string all;
    for (const auto& n : names) all += (all.empty() ? "" : ", ") + n;
    res.notes.push_back("completions carry different names: " + all);
  }
  for (const auto& m : cl.matches) {
    std::pair<int, int> ck{m.tmpl.cls, m.tmpl.defect};
    if (std::find(res.class_defect_options.begin(), res.class_defect_options.end(), ck) ==
        res.class_defect_options.end())
      res.class_defect_options.push_back(ck);
  }
  const auto& n = res.tkt_name;
  if (n == "E.8" || n == "E.14") {
    auto& o = res.class_defect_options;
    bool had_k1 = std::any_of(o.begin(), o.end(), [](auto p) { return p.second == 1; });
    o.erase(std::remove_if(o.begin(), o.end(), [](auto p) { return p.second == 1; }), o.end());
    if (had_k1) res.notes.push_back("k=1 is impossible for TKT " + n);
  } else if (n == "H.4") {
    if (res.class_defect_options.size() > 1)
      res.notes.push_back("weak leaf conjecture: TKT H.4 suggests the arrangement with k=1");
  } else if (res.class_defect_options.size() > 1) {
    res.notes.push_back("no restriction on (c,k) is known for TKT " + n);
  }
  return res;
}

std::string tkt_name(const Tkt& k, const Ipad& ip) {
  if (k.kappa.size() != 4) throw CorrespondenceError("kernel type needs four entries");
  PartialTkt partial;
  for (int v : k.kappa) {
    if (v < 0 || v > 4) throw CorrespondenceError("kernel indices must lie in 0..4");
    partial.push_back(v);
  }
  std::vector<std::string> why;
  auto sols = solve_all(partial, role_assignments(ip.tau1), &why);
  if (sols.empty()) {
    std::string msg = "kernel type " + format_tkt(k) + " violates the tree constraints:";
    for (const auto& w : why) msg += " " + w + ";";
    throw CorrespondenceError(msg);
  }
  std::set<std::string> names;
  for (const auto& s : sols) names.insert(s.name);
  if (names.size() != 1) throw CorrespondenceError("kernel type admits several names");
  return *names.begin();
}

std::string taussky_annotations(const Tkt& k) {
  std::string out;
  for (std::size_t i = 0; i < k.kappa.size(); ++i) {
    int v = k.kappa[i];
    out += (v == 0 || v == static_cast<int>(i) + 1) ? 'A' : 'B';
  }
  return out;
}

std::vector<int> resistant_classes(const Tkt& k) {
  std::vector<int> out;
  for (int j = 1; j <= static_cast<int>(k.kappa.size()); ++j)
    if (std::find(k.kappa.begin(), k.kappa.end(), j) == k.kappa.end()) out.push_back(j);
  return out;
}

nlohmann::json to_json(const CompletionResult& r) {
  nlohmann::json j;
  j["completions"] = nlohmann::json::array();
  for (const auto& t : r.completions) j["completions"].push_back(format_tkt(t));
  j["tkt_name"] = r.tkt_name;
  j["class_defect_options"] = nlohmann::json::array();
  for (auto [c, k] : r.class_defect_options) j["class_defect_options"].push_back({{"c", c}, {"k", k}});
  j["notes"] = r.notes;
  return j;
}

}  // namespace pgt
