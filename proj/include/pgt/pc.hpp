// Finite p-groups given by consistent power-commutator presentations.
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pgt {

constexpr int kMaxGens = 20;

using Exps = std::vector<int>;  // exponent vector, entries in [0, p)

struct PcError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Relations are stored as normal-form exponent vectors over the higher
// generators. comm[i][j] (j < i) is the normal form of [g_i, g_j] with
// [a, b] = a^-1 b^-1 a b.
class PcPresentation {
 public:
  PcPresentation() = default;
  PcPresentation(int p, int n);

  int prime() const { return p_; }
  int ngens() const { return n_; }
  // log_p of the group order
  int rank_log() const { return n_; }

  const Exps& power(int i) const { return power_[i]; }
  const Exps& comm(int i, int j) const { return comm_[i][j]; }

  void set_power(int i, Exps rhs);
  void set_comm(int i, int j, Exps rhs);

  Exps identity() const { return Exps(n_, 0); }
  Exps gen(int i) const;

  Exps multiply(const Exps& a, const Exps& b) const;
  Exps inverse(const Exps& a) const;
  Exps power(const Exps& a, long e) const;
  Exps comm(const Exps& a, const Exps& b) const;
  Exps conj(const Exps& a, const Exps& b) const;  // b^-1 a b
  bool is_identity(const Exps& a) const;

  // Product of generator letters (index, exponent) evaluated left to right.
  Exps eval_word(const std::vector<std::pair<int, int>>& word) const;

  struct Failure {
    std::vector<int> triple;  // generator indices of the failing test word
    std::string description;
  };
  // Returns the first failing overlap test, or nullopt when consistent.
  std::optional<Failure> find_inconsistency() const;
  bool consistent() const { return !find_inconsistency().has_value(); }

  // Enumerate all p^n elements (only sensible for small n).
  std::vector<Exps> elements() const;

  // Element <-> integer index with g_1 the most significant digit.
  std::uint64_t index_of(const Exps& a) const;
  Exps element_at(std::uint64_t idx) const;

 private:
  Exps mul_gen(Exps x, int j) const;

  int p_ = 3;
  int n_ = 0;
  std::vector<Exps> power_;
  std::vector<std::vector<Exps>> comm_;
};

// Text format:
//   p n
//   P i : word          g_i^p = word
//   C i j : word        [g_i, g_j] = word, j < i
// Words: "1" or products like g3^2*g5 (negative exponents allowed). Lines
// starting with '#' are comments. Generators are numbered from 1. "ID ..." lines and
// FINGERPRINT ... END blocks (catalog metadata) are skipped.
PcPresentation parse_presentation(const std::string& text);
std::string format_presentation(const PcPresentation& P);
PcPresentation load_presentation(const std::string& path);

// Subgroups are kept as a canonical induced generating sequence: leading
// indices strictly increasing, leading exponent 1, and zero exponent at every
// other generator's leading position.
class Subgroup {
 public:
  Subgroup() = default;
  Subgroup(std::shared_ptr<const PcPresentation> parent, std::vector<Exps> igs);

  const PcPresentation& parent() const { return *parent_; }
  const std::shared_ptr<const PcPresentation>& parent_ptr() const { return parent_; }
  const std::vector<Exps>& igs() const { return igs_; }
  const std::vector<int>& leads() const { return leads_; }
  int size_log() const { return static_cast<int>(igs_.size()); }

  bool contains(const Exps& x) const;
  // Exponents of x along the igs; nullopt if x is not in the subgroup.
  std::optional<Exps> coordinates(const Exps& x) const;
  // Canonical representative of the right coset x*S (meaningful when S is
  // normal, or for right cosets in general).
  Exps reduce(const Exps& x) const;
  bool is_pivot(int i) const { return pivot_of_[i] >= 0; }

  bool operator==(const Subgroup& o) const { return igs_ == o.igs_; }
  bool contains(const Subgroup& o) const;

 private:
  std::shared_ptr<const PcPresentation> parent_;
  std::vector<Exps> igs_;
  std::vector<int> leads_;
  std::vector<int> pivot_of_;  // generator index -> position in igs or -1
};

int leading_index(const Exps& x);  // -1 for identity

Subgroup subgroup_generate(std::shared_ptr<const PcPresentation> P,
                           const std::vector<Exps>& gens);
Subgroup whole_group(std::shared_ptr<const PcPresentation> P);
Subgroup trivial_subgroup(std::shared_ptr<const PcPresentation> P);
// Subgroup generated by S together with extra elements.
Subgroup join(const Subgroup& S, const std::vector<Exps>& extra);

// Normal closure of gens inside the subgroup H.
Subgroup normal_closure(const Subgroup& H, const std::vector<Exps>& gens);
Subgroup derived_subgroup(const Subgroup& H);
bool is_normal_in(const Subgroup& N, const Subgroup& H);

// Presentation of a subgroup on its igs.
struct InducedPresentation {
  std::shared_ptr<const PcPresentation> pres;
  Subgroup source;
  Exps to_local(const Exps& x) const;   // element of source -> local exponents
  Exps to_parent(const Exps& y) const;  // local exponents -> parent element
};
InducedPresentation induced_presentation(const Subgroup& H);

// G/N for N normal in the whole parent group.
struct Quotient {
  std::shared_ptr<const PcPresentation> pres;
  Subgroup kernel;
  std::vector<int> kept;  // parent generator indices surviving in the quotient
  Exps project(const Exps& x) const;
};
Quotient quotient_presentation(const Subgroup& N);

}  // namespace pgt
