// Layers of subgroups containing the derived subgroup, Artin transfers, and
// the layered invariants built from them.
#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "pgt/ati.hpp"
#include "pgt/ipad.hpp"
#include "pgt/pc.hpp"

namespace pgt {

// Abelian quotient invariants of H (ATI of H/H') from the relation matrix of
// its induced presentation.
Ati abelianization(const Subgroup& H);

// All K with G' <= K <= G and (G:K) = p^n. G is any subgroup; its own derived
// subgroup is used. First-layer order for rank-2 quotients: <x>, <y>, <xy>,
// <xy^2>, ... where x, y are the two lowest generators modulo the Frattini
// subgroup; other ranks use the order of the defining linear forms.
std::vector<Subgroup> layer(const Subgroup& G, int n);
std::vector<Subgroup> maximal_subgroups(const Subgroup& G);
// log_p of (G : G')
int abelian_rank_log(const Subgroup& G);

// Left transversal of H in G (H normal in G).
std::vector<Exps> transversal(const Subgroup& G, const Subgroup& H);

struct Transfer {
  Ati target;       // ATI of H/H'
  Subgroup kernel;  // preimage in G of the kernel (contains G')
};

// T_{G,H}: G -> H/H' for G' <= H <= G. Uses the cycle decomposition of the
// coset permutation; an explicit transversal may be supplied.
Transfer artin_transfer(const Subgroup& G, const Subgroup& H,
                        const std::vector<Exps>* trans = nullptr);
// Image of g under the transfer as an element of G, determined modulo H'.
Exps transfer_value(const Subgroup& G, const Subgroup& H, const std::vector<Exps>& trans,
                    const Exps& g);

// Reference implementation: explicit coset permutation for every element of
// G, target invariants from element orders in H/H'. Slow; for cross-checks.
Transfer naive_artin_transfer(const Subgroup& G, const Subgroup& H);
// All elements of a subgroup.
std::vector<Exps> subgroup_elements(const Subgroup& H);

Ttt ttt(const Subgroup& G);
struct KernelData {
  Tkt tkt;
  std::vector<Subgroup> kernels;  // one per first-layer subgroup
};
KernelData tkt_with_kernels(const Subgroup& G);
Tkt tkt(const Subgroup& G);
Ipad ipad(const Subgroup& G, bool with_tau2 = false);
Ipad2 ipad2(const Subgroup& G);
Ipad2 ipad2_star(const Subgroup& G);

struct Budget {
  std::size_t max_subgroups = 10000;
  std::size_t used = 0;
  void charge(std::size_t k);
};
Ipad3 ipad3(const Subgroup& G, Budget* budget = nullptr);

}  // namespace pgt
