#include "pgt/pc.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

namespace pgt {

namespace {

int mod(long a, int p) {
  long r = a % p;
  return static_cast<int>(r < 0 ? r + p : r);
}

int inv_mod(int a, int p) {
  for (int b = 1; b < p; ++b)
    if ((a * b) % p == 1) return b;
  throw PcError("no inverse mod p");
}

}  // namespace

int leading_index(const Exps& x) {
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] != 0) return static_cast<int>(i);
  return -1;
}

PcPresentation::PcPresentation(int p, int n) : p_(p), n_(n) {
  if (p < 2) throw PcError("prime must be >= 2");
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0) throw PcError("relative order " + std::to_string(p) + " is not prime");
  if (n < 0 || n > kMaxGens)
    throw PcError("number of generators must be in [0, " + std::to_string(kMaxGens) + "]");
  power_.assign(n, Exps(n, 0));
  comm_.assign(n, std::vector<Exps>(n, Exps(n, 0)));
}

void PcPresentation::set_power(int i, Exps rhs) {
  if (static_cast<int>(rhs.size()) != n_) throw PcError("relation length mismatch");
  for (int k = 0; k <= i; ++k)
    if (rhs[k] != 0) throw PcError("power relation of g" + std::to_string(i + 1) + " uses a lower generator");
  power_[i] = std::move(rhs);
}

void PcPresentation::set_comm(int i, int j, Exps rhs) {
  if (j >= i) throw PcError("commutator relation needs j < i");
  if (static_cast<int>(rhs.size()) != n_) throw PcError("relation length mismatch");
  for (int k = 0; k <= i; ++k)
    if (rhs[k] != 0)
      throw PcError("commutator [g" + std::to_string(i + 1) + ",g" + std::to_string(j + 1) +
                    "] uses a generator of index <= " + std::to_string(i + 1));
  comm_[i][j] = std::move(rhs);
}

Exps PcPresentation::gen(int i) const {
  Exps e(n_, 0);
  e[i] = 1;
  return e;
}

bool PcPresentation::is_identity(const Exps& a) const {
  return std::all_of(a.begin(), a.end(), [](int v) { return v == 0; });
}

// x * g_j. Writing x = u * g_j^e * t with t in <g_{j+1},...>, the product is
// u * g_j^(e+1) * t^(g_j), and t^(g_j) is the product of the conjugates
// g_k^(g_j) = g_k [g_k, g_j].
Exps PcPresentation::mul_gen(Exps x, int j) const {
  bool tail_empty = true;
  for (int k = j + 1; k < n_; ++k)
    if (x[k]) { tail_empty = false; break; }

  Exps carry(n_, 0);
  x[j] += 1;
  if (x[j] == p_) {
    x[j] = 0;
    carry = power_[j];
  }
  if (tail_empty) {
    for (int k = j + 1; k < n_; ++k) x[k] = carry[k];
    return x;
  }

  Exps conj_tail(n_, 0);
  for (int k = j + 1; k < n_; ++k) {
    if (!x[k]) continue;
    Exps c = comm_[k][j];
    c[k] = 1;
    for (int r = 0; r < x[k]; ++r) conj_tail = multiply(conj_tail, c);
  }
  Exps u = multiply(carry, conj_tail);
  for (int k = j + 1; k < n_; ++k) x[k] = u[k];
  return x;
}

Exps PcPresentation::multiply(const Exps& a, const Exps& b) const {
  if (static_cast<int>(a.size()) != n_ || static_cast<int>(b.size()) != n_)
    throw PcError("element does not belong to this presentation");
  Exps x = a;
  int lb = leading_index(b);
  if (lb < 0) return x;
  // fast path: a lives strictly below b's support start
  bool a_low = true;
  for (int k = lb; k < n_; ++k)
    if (x[k]) { a_low = false; break; }
  if (a_low) {
    for (int k = lb; k < n_; ++k) x[k] = b[k];
    return x;
  }
  for (int i = lb; i < n_; ++i)
    for (int r = 0; r < b[i]; ++r) x = mul_gen(std::move(x), i);
  return x;
}

Exps PcPresentation::inverse(const Exps& a) const {
  Exps z = a;
  Exps y(n_, 0);
  for (int i = 0; i < n_; ++i) {
    int e = mod(p_ - z[i], p_);
    y[i] = e;
    for (int r = 0; r < e; ++r) z = mul_gen(std::move(z), i);
  }
  return y;
}

Exps PcPresentation::power(const Exps& a, long e) const {
  Exps base = e < 0 ? inverse(a) : a;
  unsigned long k = static_cast<unsigned long>(e < 0 ? -e : e);
  Exps acc(n_, 0);
  while (k) {
    if (k & 1) acc = multiply(acc, base);
    k >>= 1;
    if (k) base = multiply(base, base);
  }
  return acc;
}

Exps PcPresentation::comm(const Exps& a, const Exps& b) const {
  return multiply(inverse(multiply(b, a)), multiply(a, b));
}

Exps PcPresentation::conj(const Exps& a, const Exps& b) const {
  return multiply(inverse(b), multiply(a, b));
}

Exps PcPresentation::eval_word(const std::vector<std::pair<int, int>>& word) const {
  Exps x(n_, 0);
  for (auto [g, e] : word) {
    if (g < 0 || g >= n_) throw PcError("generator index out of range");
    if (e >= 0) {
      for (int r = 0; r < e; ++r) x = mul_gen(std::move(x), g);
    } else {
      Exps gi = inverse(gen(g));
      for (int r = 0; r < -e; ++r) x = multiply(x, gi);
    }
  }
  return x;
}

std::optional<PcPresentation::Failure> PcPresentation::find_inconsistency() const {
  auto fail = [](std::vector<int> t, std::string d) {
    for (int& v : t) ++v;
    return Failure{std::move(t), std::move(d)};
  };
  // (g_k g_j) g_i = g_k (g_j g_i), k > j > i
  for (int k = 0; k < n_; ++k)
    for (int j = 0; j < k; ++j)
      for (int i = 0; i < j; ++i) {
        Exps left = mul_gen(mul_gen(gen(k), j), i);
        Exps right = multiply(gen(k), mul_gen(gen(j), i));
        if (left != right) return fail({k, j, i}, "(g_k g_j) g_i != g_k (g_j g_i)");
      }
  for (int j = 0; j < n_; ++j) {
    Exps pm1(n_, 0);
    pm1[j] = p_ - 1;
    for (int i = 0; i < j; ++i) {
      // (g_j^p) g_i = g_j^(p-1) (g_j g_i)
      Exps left = mul_gen(power_[j], i);
      Exps right = multiply(pm1, mul_gen(gen(j), i));
      if (left != right) return fail({j, j, i}, "(g_j^p) g_i != g_j^(p-1) (g_j g_i)");
      // g_j (g_i^p) = (g_j g_i) g_i^(p-1)
      Exps ip(n_, 0);
      ip[i] = p_ - 1;
      Exps l2 = multiply(gen(j), power_[i]);
      Exps r2 = multiply(mul_gen(gen(j), i), ip);
      if (l2 != r2) return fail({j, i, i}, "g_j (g_i^p) != (g_j g_i) g_i^(p-1)");
    }
    // (g_j^p) g_j = g_j (g_j^p)
    Exps l3 = mul_gen(power_[j], j);
    Exps r3 = multiply(gen(j), power_[j]);
    if (l3 != r3) return fail({j, j, j}, "(g_j^p) g_j != g_j (g_j^p)");
  }
  return std::nullopt;
}

std::uint64_t PcPresentation::index_of(const Exps& a) const {
  std::uint64_t idx = 0;
  for (int i = 0; i < n_; ++i) idx = idx * p_ + a[i];
  return idx;
}

Exps PcPresentation::element_at(std::uint64_t idx) const {
  Exps a(n_, 0);
  for (int i = n_ - 1; i >= 0; --i) {
    a[i] = static_cast<int>(idx % p_);
    idx /= p_;
  }
  return a;
}

std::vector<Exps> PcPresentation::elements() const {
  std::uint64_t total = 1;
  for (int i = 0; i < n_; ++i) total *= p_;
  if (total > (1u << 22)) throw PcError("group too large to enumerate");
  std::vector<Exps> out;
  out.reserve(total);
  for (std::uint64_t k = 0; k < total; ++k) out.push_back(element_at(k));
  return out;
}

// ---------------------------------------------------------------- text format

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::pair<int, int>> parse_word(const std::string& text, int lineno) {
  std::vector<std::pair<int, int>> w;
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty() || s == "1") return w;
  std::size_t i = 0;
  auto bad = [&](const std::string& why) {
    return PcError("line " + std::to_string(lineno) + ": bad word '" + text + "': " + why);
  };
  while (i < s.size()) {
    if (s[i] != 'g') throw bad("expected 'g'");
    ++i;
    std::size_t j = i;
    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
    if (j == i) throw bad("missing generator number");
    int g = std::stoi(s.substr(i, j - i)) - 1;
    i = j;
    int e = 1;
    if (i < s.size() && s[i] == '^') {
      ++i;
      j = i;
      if (j < s.size() && s[j] == '-') ++j;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      if (j == i || (j == i + 1 && s[i] == '-')) throw bad("missing exponent");
      e = std::stoi(s.substr(i, j - i));
      i = j;
    }
    w.emplace_back(g, e);
    if (i < s.size()) {
      if (s[i] != '*') throw bad("expected '*'");
      ++i;
      if (i == s.size()) throw bad("trailing '*'");
    }
  }
  return w;
}

std::string format_word(const Exps& e) {
  std::string out;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (!e[i]) continue;
    if (!out.empty()) out += "*";
    out += "g" + std::to_string(i + 1);
    if (e[i] != 1) out += "^" + std::to_string(e[i]);
  }
  return out.empty() ? "1" : out;
}

}  // namespace

PcPresentation parse_presentation(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  int p = -1, n = -1;
  std::map<int, std::pair<std::vector<std::pair<int, int>>, int>> pw;
  std::map<std::pair<int, int>, std::pair<std::vector<std::pair<int, int>>, int>> cm;
  bool in_stanza = false;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    // catalog metadata is not part of the presentation
    if (in_stanza) {
      if (line == "END") in_stanza = false;
      continue;
    }
    if (line == "FINGERPRINT") {
      in_stanza = true;
      continue;
    }
    if (line.rfind("ID ", 0) == 0) continue;
    auto err = [&](const std::string& why) {
      return PcError("line " + std::to_string(lineno) + ": " + why);
    };
    if (p < 0) {
      std::istringstream h(line);
      if (!(h >> p >> n)) throw err("expected header 'p n'");
      std::string rest;
      if (h >> rest) throw err("trailing text after header");
      PcPresentation probe(p, n);  // validates p and n
      continue;
    }
    auto colon = line.find(':');
    if (colon == std::string::npos) throw err("missing ':'");
    std::istringstream lhs(line.substr(0, colon));
    std::string kind;
    lhs >> kind;
    auto word = parse_word(line.substr(colon + 1), lineno);
    if (kind == "P") {
      int i;
      if (!(lhs >> i)) throw err("expected 'P i'");
      if (i < 1 || i > n) throw err("generator index out of range");
      for (auto [g, e] : word)
        if (g + 1 <= i || g + 1 > n) throw err("power relation rhs must use generators above g" + std::to_string(i));
      if (!pw.emplace(i - 1, std::make_pair(word, lineno)).second) throw err("duplicate power relation");
    } else if (kind == "C") {
      int i, j;
      if (!(lhs >> i >> j)) throw err("expected 'C i j'");
      if (i < 1 || i > n || j < 1 || j > n) throw err("generator index out of range");
      if (j >= i) throw err("commutator relation needs j < i");
      for (auto [g, e] : word)
        if (g + 1 <= i || g + 1 > n) throw err("commutator rhs must use generators above g" + std::to_string(i));
      if (!cm.emplace(std::make_pair(i - 1, j - 1), std::make_pair(word, lineno)).second)
        throw err("duplicate commutator relation");
    } else {
      throw err("unknown relation kind '" + kind + "'");
    }
    std::string extra;
    if (lhs >> extra) throw err("unexpected token '" + extra + "'");
  }
  if (p < 0) throw PcError("empty presentation");
  PcPresentation P(p, n);
  // Relations at level t only involve generators above t, so evaluate from
  // the top down.
  for (int t = n - 1; t >= 0; --t) {
    if (auto it = pw.find(t); it != pw.end()) P.set_power(t, P.eval_word(it->second.first));
    for (int k = t + 1; k < n; ++k)
      if (auto it = cm.find({k, t}); it != cm.end()) P.set_comm(k, t, P.eval_word(it->second.first));
  }
  return P;
}

std::string format_presentation(const PcPresentation& P) {
  std::ostringstream out;
  out << P.prime() << " " << P.ngens() << "\n";
  for (int i = 0; i < P.ngens(); ++i)
    if (!P.is_identity(P.power(i))) out << "P " << i + 1 << " : " << format_word(P.power(i)) << "\n";
  for (int i = 0; i < P.ngens(); ++i)
    for (int j = 0; j < i; ++j)
      if (!P.is_identity(P.comm(i, j)))
        out << "C " << i + 1 << " " << j + 1 << " : " << format_word(P.comm(i, j)) << "\n";
  return out.str();
}

PcPresentation load_presentation(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw PcError("cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_presentation(ss.str());
}

// ------------------------------------------------------------------ subgroups

Subgroup::Subgroup(std::shared_ptr<const PcPresentation> parent, std::vector<Exps> igs)
    : parent_(std::move(parent)), igs_(std::move(igs)) {
  pivot_of_.assign(parent_->ngens(), -1);
  for (std::size_t a = 0; a < igs_.size(); ++a) {
    int d = leading_index(igs_[a]);
    leads_.push_back(d);
    pivot_of_[d] = static_cast<int>(a);
  }
}

Exps Subgroup::reduce(const Exps& x0) const {
  const auto& P = *parent_;
  Exps x = x0;
  for (std::size_t a = 0; a < igs_.size(); ++a) {
    int e = x[leads_[a]];
    if (e) x = P.multiply(x, P.power(igs_[a], P.prime() - e));
  }
  return x;
}

bool Subgroup::contains(const Exps& x) const { return parent_->is_identity(reduce(x)); }

bool Subgroup::contains(const Subgroup& o) const {
  for (const auto& g : o.igs_)
    if (!contains(g)) return false;
  return true;
}

std::optional<Exps> Subgroup::coordinates(const Exps& x0) const {
  const auto& P = *parent_;
  Exps x = x0;
  Exps c(igs_.size(), 0);
  for (std::size_t a = 0; a < igs_.size(); ++a) {
    int e = x[leads_[a]];
    c[a] = e;
    if (e) x = P.multiply(P.power(igs_[a], -e), x);
  }
  if (!P.is_identity(x)) return std::nullopt;
  return c;
}

namespace {

Subgroup close_table(std::shared_ptr<const PcPresentation> Pp, std::vector<std::optional<Exps>> table,
                     std::vector<Exps> queue) {
  const auto& P = *Pp;
  const int p = P.prime();
  auto sift = [&](Exps x) {
    for (int d = leading_index(x); d >= 0; d = leading_index(x)) {
      if (!table[d]) break;
      x = P.multiply(x, P.power(*table[d], p - x[d]));
    }
    return x;
  };
  while (!queue.empty()) {
    Exps x = sift(std::move(queue.back()));
    queue.pop_back();
    int d = leading_index(x);
    if (d < 0) continue;
    x = P.power(x, inv_mod(x[d], p));
    queue.push_back(P.power(x, p));
    for (const auto& t : table)
      if (t) queue.push_back(P.comm(x, *t));
    table[d] = x;
  }
  // Canonical form: reduce every entry at the other pivots, bottom up.
  std::vector<int> piv;
  for (int d = 0; d < P.ngens(); ++d)
    if (table[d]) piv.push_back(d);
  for (int a = static_cast<int>(piv.size()) - 1; a >= 0; --a) {
    Exps x = *table[piv[a]];
    for (std::size_t b = a + 1; b < piv.size(); ++b) {
      int e = x[piv[b]];
      if (e) x = P.multiply(x, P.power(*table[piv[b]], p - e));
    }
    table[piv[a]] = x;
  }
  std::vector<Exps> igs;
  for (int d : piv) igs.push_back(*table[d]);
  return Subgroup(std::move(Pp), std::move(igs));
}

}  // namespace

Subgroup subgroup_generate(std::shared_ptr<const PcPresentation> P, const std::vector<Exps>& gens) {
  for (const auto& g : gens)
    if (static_cast<int>(g.size()) != P->ngens()) throw PcError("generator does not belong to presentation");
  std::vector<std::optional<Exps>> table(P->ngens());
  return close_table(std::move(P), std::move(table), gens);
}

Subgroup join(const Subgroup& S, const std::vector<Exps>& extra) {
  std::vector<std::optional<Exps>> table(S.parent().ngens());
  std::vector<Exps> queue;
  for (std::size_t a = 0; a < S.igs().size(); ++a) table[S.leads()[a]] = S.igs()[a];
  // existing entries are already closed among themselves
  for (const auto& e : extra) queue.push_back(e);
  return close_table(S.parent_ptr(), std::move(table), std::move(queue));
}

Subgroup whole_group(std::shared_ptr<const PcPresentation> P) {
  std::vector<Exps> igs;
  for (int i = 0; i < P->ngens(); ++i) igs.push_back(P->gen(i));
  return Subgroup(std::move(P), std::move(igs));
}

Subgroup trivial_subgroup(std::shared_ptr<const PcPresentation> P) { return Subgroup(std::move(P), {}); }

Subgroup normal_closure(const Subgroup& H, const std::vector<Exps>& gens) {
  const auto& P = H.parent();
  Subgroup N = subgroup_generate(H.parent_ptr(), gens);
  for (;;) {
    std::vector<Exps> extra;
    for (const auto& n : N.igs())
      for (const auto& h : H.igs()) {
        Exps c = P.comm(n, h);
        if (!N.contains(c)) extra.push_back(c);
      }
    if (extra.empty()) return N;
    N = join(N, extra);
  }
}

Subgroup derived_subgroup(const Subgroup& H) {
  const auto& P = H.parent();
  std::vector<Exps> gens;
  const auto& g = H.igs();
  for (std::size_t a = 0; a < g.size(); ++a)
    for (std::size_t b = 0; b < a; ++b) gens.push_back(P.comm(g[a], g[b]));
  return normal_closure(H, gens);
}

bool is_normal_in(const Subgroup& N, const Subgroup& H) {
  const auto& P = N.parent();
  for (const auto& n : N.igs())
    for (const auto& h : H.igs())
      if (!N.contains(P.conj(n, h))) return false;
  return true;
}

// ---------------------------------------------------------- derived structures

Exps InducedPresentation::to_local(const Exps& x) const {
  auto c = source.coordinates(x);
  if (!c) throw PcError("element is not in the subgroup");
  return *c;
}

Exps InducedPresentation::to_parent(const Exps& y) const {
  const auto& P = source.parent();
  Exps x = P.identity();
  for (std::size_t a = 0; a < y.size(); ++a)
    if (y[a]) x = P.multiply(x, P.power(source.igs()[a], y[a]));
  return x;
}

InducedPresentation induced_presentation(const Subgroup& H) {
  const auto& P = H.parent();
  const auto& s = H.igs();
  int m = static_cast<int>(s.size());
  auto Q = std::make_shared<PcPresentation>(P.prime(), m);
  InducedPresentation ip{nullptr, H};
  for (int a = 0; a < m; ++a) {
    Q->set_power(a, ip.to_local(P.power(s[a], P.prime())));
    for (int b = 0; b < a; ++b) Q->set_comm(a, b, ip.to_local(P.comm(s[a], s[b])));
  }
  ip.pres = std::move(Q);
  return ip;
}

Exps Quotient::project(const Exps& x) const {
  Exps r = kernel.reduce(x);
  Exps y;
  y.reserve(kept.size());
  for (int i : kept) y.push_back(r[i]);
  return y;
}

Quotient quotient_presentation(const Subgroup& N) {
  const auto& P = N.parent();
  auto G = whole_group(N.parent_ptr());
  if (!is_normal_in(N, G)) throw PcError("subgroup is not normal");
  Quotient q{nullptr, N, {}};
  for (int i = 0; i < P.ngens(); ++i)
    if (!N.is_pivot(i)) q.kept.push_back(i);
  int m = static_cast<int>(q.kept.size());
  auto Q = std::make_shared<PcPresentation>(P.prime(), m);
  for (int a = 0; a < m; ++a) {
    int i = q.kept[a];
    Q->set_power(a, q.project(P.power(P.gen(i), P.prime())));
    for (int b = 0; b < a; ++b) Q->set_comm(a, b, q.project(P.comm(P.gen(i), P.gen(q.kept[b]))));
  }
  q.pres = std::move(Q);
  return q;
}

}  // namespace pgt
