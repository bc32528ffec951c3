#include "pgt/transfers.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <tuple>

namespace pgt {

Ati abelianization(const Subgroup& H) {
  const auto& P = H.parent();
  const auto& s = H.igs();
  const int m = static_cast<int>(s.size());
  if (m == 0) return Ati({}, P.prime());
  IntMatrix M;
  auto coords = [&](const Exps& x) {
    auto c = H.coordinates(x);
    if (!c) throw PcError("subgroup is not closed");
    return *c;
  };
  for (int a = 0; a < m; ++a) {
    Exps c = coords(P.power(s[a], P.prime()));
    std::vector<long long> row(m);
    for (int b = 0; b < m; ++b) row[b] = -c[b];
    row[a] += P.prime();
    M.push_back(std::move(row));
    for (int b = 0; b < a; ++b) {
      Exps d = coords(P.comm(s[a], s[b]));
      M.emplace_back(d.begin(), d.end());
    }
  }
  return snf_invariants(M, m, P.prime());
}

int abelian_rank_log(const Subgroup& G) { return G.size_log() - derived_subgroup(G).size_log(); }

namespace {

Exps basis_product(const PcPresentation& P, const std::vector<Exps>& basis, const std::vector<int>& v) {
  Exps x = P.identity();
  for (std::size_t i = 0; i < basis.size(); ++i)
    if (v[i]) x = P.multiply(x, P.power(basis[i], v[i]));
  return x;
}

// Normalized vectors of F_p^d (first nonzero entry 1), sorted by support size,
// then support positions, then values.
std::vector<std::vector<int>> projective_points(int d, int p) {
  std::vector<std::vector<int>> pts;
  std::vector<int> v(d, 0);
  long total = 1;
  for (int i = 0; i < d; ++i) total *= p;
  for (long code = 1; code < total; ++code) {
    long c = code;
    for (int i = d - 1; i >= 0; --i) v[i] = static_cast<int>(c % p), c /= p;
    int lead = 0;
    while (v[lead] == 0) ++lead;
    if (v[lead] != 1) continue;
    pts.push_back(v);
  }
  auto key = [](const std::vector<int>& x) {
    std::vector<int> supp;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (x[i]) supp.push_back(static_cast<int>(i));
    return std::make_tuple(supp.size(), supp, x);
  };
  std::sort(pts.begin(), pts.end(), [&](const auto& a, const auto& b) { return key(a) < key(b); });
  return pts;
}

std::vector<Subgroup> maximal_over(const Subgroup& M, const Subgroup& Gd) {
  const auto& P = M.parent();
  const int p = P.prime();
  std::vector<Exps> pw;
  for (const auto& m : M.igs()) pw.push_back(P.power(m, p));
  Subgroup F = join(Gd, pw);
  std::vector<Exps> basis;
  for (std::size_t a = 0; a < M.igs().size(); ++a)
    if (!F.is_pivot(M.leads()[a])) basis.push_back(M.igs()[a]);
  const int d = static_cast<int>(basis.size());
  std::vector<Subgroup> out;
  if (d == 0) return out;
  if (d == 1) {
    out.push_back(F);
    return out;
  }
  for (const auto& f : projective_points(d, p)) {
    std::vector<std::vector<int>> kernel_basis;
    if (d == 2) {
      kernel_basis.push_back(f);  // rank 2: the point itself spans the subgroup
    } else {
      int i0 = 0;
      while (f[i0] == 0) ++i0;
      for (int j = 0; j < d; ++j) {
        if (j == i0) continue;
        std::vector<int> v(d, 0);
        v[j] = 1;
        v[i0] = ((-f[j]) % p + p) % p;
        kernel_basis.push_back(v);
      }
    }
    std::vector<Exps> gens;
    for (const auto& v : kernel_basis) gens.push_back(basis_product(P, basis, v));
    out.push_back(join(F, gens));
  }
  return out;
}

}  // namespace

std::vector<Subgroup> layer(const Subgroup& G, int n) {
  Subgroup Gd = derived_subgroup(G);
  int v = G.size_log() - Gd.size_log();
  if (n < 0 || n > v)
    throw std::out_of_range("layer index " + std::to_string(n) + " outside [0, " + std::to_string(v) + "]");
  std::vector<Subgroup> cur{G};
  for (int step = 0; step < n; ++step) {
    std::vector<Subgroup> next;
    for (const auto& M : cur)
      for (auto& K : maximal_over(M, Gd))
        if (std::find(next.begin(), next.end(), K) == next.end()) next.push_back(std::move(K));
    cur = std::move(next);
  }
  return cur;
}

std::vector<Subgroup> maximal_subgroups(const Subgroup& G) {
  if (G.size_log() == 0) return {};
  return layer(G, 1);
}

std::vector<Exps> transversal(const Subgroup& G, const Subgroup& H) {
  const auto& P = G.parent();
  std::vector<Exps> reps;
  for (std::size_t a = 0; a < G.igs().size(); ++a)
    if (!H.is_pivot(G.leads()[a])) reps.push_back(G.igs()[a]);
  const int r = static_cast<int>(reps.size());
  long total = 1;
  for (int i = 0; i < r; ++i) total *= P.prime();
  std::vector<Exps> out;
  std::vector<int> v(r, 0);
  for (long code = 0; code < total; ++code) {
    long c = code;
    for (int i = r - 1; i >= 0; --i) v[i] = static_cast<int>(c % P.prime()), c /= P.prime();
    out.push_back(basis_product(P, reps, v));
  }
  return out;
}

namespace {

struct CosetIndex {
  std::map<Exps, int> index;
  const Subgroup* H;
  CosetIndex(const Subgroup& h, const std::vector<Exps>& trans) : H(&h) {
    for (std::size_t i = 0; i < trans.size(); ++i)
      if (!index.emplace(h.reduce(trans[i]), static_cast<int>(i)).second)
        throw PcError("transversal has two elements in one coset");
  }
  int of(const Exps& x) const {
    auto it = index.find(H->reduce(x));
    if (it == index.end()) throw PcError("element outside the transversal's cosets");
    return it->second;
  }
};

Exps transfer_value_idx(const Subgroup& G, const CosetIndex& ci, const std::vector<Exps>& trans, const Exps& g) {
  const auto& P = G.parent();
  std::vector<bool> seen(trans.size(), false);
  Exps acc = P.identity();
  for (std::size_t i = 0; i < trans.size(); ++i) {
    if (seen[i]) continue;
    int len = 0;
    std::size_t j = i;
    do {
      seen[j] = true;
      j = ci.of(P.multiply(g, trans[j]));
      ++len;
    } while (j != i);
    // t_i^-1 g^len t_i lies in H
    acc = P.multiply(acc, P.conj(P.power(g, len), trans[i]));
  }
  return acc;
}

}  // namespace

Exps transfer_value(const Subgroup& G, const Subgroup& H, const std::vector<Exps>& trans, const Exps& g) {
  CosetIndex ci(H, trans);
  return transfer_value_idx(G, ci, trans, g);
}

Transfer artin_transfer(const Subgroup& G, const Subgroup& H, const std::vector<Exps>* trans) {
  Subgroup Gd = derived_subgroup(G);
  if (!H.contains(Gd) || !G.contains(H)) throw PcError("transfer needs G' <= H <= G");
  std::vector<Exps> own;
  if (!trans) {
    own = transversal(G, H);
    trans = &own;
  }
  CosetIndex ci(H, *trans);
  Subgroup Hd = derived_subgroup(H);
  std::vector<Exps> ker;
  for (const auto& g : transversal(G, Gd))
    if (Hd.contains(transfer_value_idx(G, ci, *trans, g))) ker.push_back(g);
  return Transfer{abelianization(H), join(Gd, ker)};
}

std::vector<Exps> subgroup_elements(const Subgroup& H) {
  const auto& P = H.parent();
  std::vector<Exps> out{P.identity()};
  for (auto it = H.igs().rbegin(); it != H.igs().rend(); ++it) {
    std::vector<Exps> next;
    next.reserve(out.size() * P.prime());
    Exps g = P.identity();
    for (int e = 0; e < P.prime(); ++e) {
      for (const auto& x : out) next.push_back(P.multiply(g, x));
      g = P.multiply(g, *it);
    }
    out = std::move(next);
  }
  return out;
}

namespace {

// ATI of H/K (K normal in H, quotient abelian) by counting elements of each order.
Ati quotient_ati_by_orders(const Subgroup& H, const Subgroup& K) {
  const auto& P = H.parent();
  const int p = P.prime();
  std::map<Exps, int> order_log;
  for (const auto& h : subgroup_elements(H)) {
    Exps r = K.reduce(h);
    if (order_log.count(r)) continue;
    int e = 0;
    Exps x = h;
    while (!K.contains(x)) x = P.power(x, p), ++e;
    order_log[r] = e;
  }
  int maxe = 0;
  for (auto& [r, e] : order_log) maxe = std::max(maxe, e);
  // s[k] = log_p #{x : x^(p^k) = 1}
  std::vector<int> s(maxe + 2, 0);
  for (int k = 0; k <= maxe + 1; ++k) {
    long c = 0;
    for (auto& [r, e] : order_log)
      if (e <= k) ++c;
    while (c > 1) c /= p, ++s[k];
  }
  std::vector<int> logs;
  for (int k = maxe; k >= 1; --k) {
    int here = (s[k] - s[k - 1]) - (s[k + 1] - s[k]);
    for (int i = 0; i < here; ++i) logs.push_back(k);
  }
  return Ati(logs, p);
}

}  // namespace

Transfer naive_artin_transfer(const Subgroup& G, const Subgroup& H) {
  const auto& P = G.parent();
  Subgroup Hd = derived_subgroup(H);
  // one representative per left coset gH, found by scanning G
  std::vector<Exps> reps;
  std::vector<Exps> keys;
  for (const auto& g : subgroup_elements(G)) {
    bool found = false;
    for (const auto& t : reps)
      if (H.contains(P.multiply(P.inverse(t), g))) {
        found = true;
        break;
      }
    if (!found) reps.push_back(g);
  }
  std::vector<Exps> ker;
  for (const auto& g : subgroup_elements(G)) {
    Exps v = P.identity();
    for (const auto& t : reps) {
      Exps gt = P.multiply(g, t);
      const Exps* image = nullptr;
      for (const auto& u : reps)
        if (H.contains(P.multiply(P.inverse(u), gt))) {
          image = &u;
          break;
        }
      v = P.multiply(v, P.multiply(P.inverse(*image), gt));
    }
    if (Hd.contains(v)) ker.push_back(g);
  }
  return Transfer{quotient_ati_by_orders(H, Hd), subgroup_generate(G.parent_ptr(), ker)};
}

Ttt ttt(const Subgroup& G) {
  Ttt t;
  int v = abelian_rank_log(G);
  for (int n = 0; n <= v; ++n) {
    std::vector<Ati> l;
    for (const auto& H : layer(G, n)) l.push_back(abelianization(H));
    t.layers.push_back(std::move(l));
  }
  return t;
}

KernelData tkt_with_kernels(const Subgroup& G) {
  KernelData out;
  auto L1 = maximal_subgroups(G);
  for (const auto& H : L1) {
    Subgroup K = artin_transfer(G, H).kernel;
    int code = -1;
    if (K == G) {
      code = 0;
    } else {
      for (std::size_t j = 0; j < L1.size(); ++j)
        if (L1[j] == K) code = static_cast<int>(j) + 1;
    }
    out.tkt.kappa.push_back(code);
    out.kernels.push_back(std::move(K));
  }
  return out;
}

Tkt tkt(const Subgroup& G) { return tkt_with_kernels(G).tkt; }

Ipad ipad(const Subgroup& G, bool with_tau2) {
  Ipad i;
  i.tau0 = abelianization(G);
  int v = abelian_rank_log(G);
  if (v >= 1)
    for (const auto& H : layer(G, 1)) i.tau1.push_back(abelianization(H));
  if (with_tau2) {
    i.tau2.emplace();
    if (v >= 2)
      for (const auto& H : layer(G, 2)) i.tau2->push_back(abelianization(H));
  }
  return i;
}

Ipad2 ipad2(const Subgroup& G) {
  Ipad2 out;
  out.tau0 = abelianization(G);
  for (const auto& H : maximal_subgroups(G)) out.children.push_back(ipad(H));
  return out;
}

Ipad2 ipad2_star(const Subgroup& G) {
  Ipad2 out;
  out.tau0 = abelianization(G);
  for (const auto& H : maximal_subgroups(G)) out.children.push_back(ipad(H, true));
  return out;
}

void Budget::charge(std::size_t k) {
  used += k;
  if (used > max_subgroups)
    throw std::runtime_error("subgroup budget of " + std::to_string(max_subgroups) + " exhausted");
}

Ipad3 ipad3(const Subgroup& G, Budget* budget) {
  Budget local;
  if (!budget) budget = &local;
  Ipad3 out;
  out.tau0 = abelianization(G);
  auto L1 = maximal_subgroups(G);
  budget->charge(L1.size());
  for (const auto& H : L1) {
    auto L = maximal_subgroups(H);
    budget->charge(L.size());
    Ipad2 child;
    child.tau0 = abelianization(H);
    for (const auto& K : L) {
      budget->charge(1);
      child.children.push_back(ipad(K));
    }
    out.children.push_back(std::move(child));
  }
  return out;
}

}  // namespace pgt
