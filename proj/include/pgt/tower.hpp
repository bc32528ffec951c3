// Decisions about the tower group and the tower length from iterated IPADs of
// second order, driven by the pattern tables in data/tower/patterns.json.
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "pgt/ipad.hpp"

namespace pgt {

struct TowerError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class TowerFamily { Capitulation, E6, E8, H4 };
std::string family_name(TowerFamily f);
TowerFamily parse_family(const std::string& s);  // capitulation|E|E6|E8|H4

struct TowerPattern {
  std::string tag;
  TowerFamily family;
  std::string decision;           // implies | iff | either
  std::vector<Ipad> children;     // one per first-layer subgroup
  std::vector<std::string> candidates;
  std::vector<int> candidate_lengths;  // parallel to candidates when given
  std::vector<int> length;
  std::optional<Tkt> kappa;       // in the order of children
};

struct TowerFallback {
  std::vector<int> length;  // empty means unbounded
  std::string note;
};

struct TowerTables {
  std::vector<TowerPattern> patterns;
  std::vector<std::pair<TowerFamily, Ipad>> outer;  // required outer IPAD per family
  std::vector<std::pair<TowerFamily, TowerFallback>> fallback;
  std::optional<Tkt> h4_kappa;

  const Ipad& outer_of(TowerFamily f) const;
  const TowerFallback* fallback_of(TowerFamily f) const;
  std::vector<const TowerPattern*> of(TowerFamily f) const;
};

TowerTables load_tower_tables(const std::string& path);
TowerTables parse_tower_tables(const nlohmann::json& j);
const TowerTables& default_tower_tables();

// Entry counts of every child against the abelian type of its tau0 (layer
// sizes of the abelian group). Returns one message per violation.
std::vector<std::string> lint_tables(const TowerTables& t);

// A deviation between an input child and the nearest pattern child.
struct ChildDiff {
  int input_index;    // 0-based
  int pattern_index;  // 0-based
  std::string field;  // tau0 | tau1 | tau2
  std::vector<Ati> missing;     // in the pattern, not in the input
  std::vector<Ati> unexpected;  // in the input, not in the pattern
};

struct TowerDecision {
  enum class Status { Decided, Undecided };
  Status status = Status::Undecided;
  TowerFamily family;
  std::string matched_pattern;  // tag, empty when undecided
  std::vector<std::string> candidates;
  std::vector<int> candidate_lengths;
  std::vector<int> length;  // empty: unbounded
  bool length_unbounded = false;
  std::optional<Tkt> kappa;  // in the input order
  std::string nearest_pattern;
  std::vector<ChildDiff> diff;
  std::vector<std::string> notes;
};

TowerDecision decide_capitulation(const Ipad2& t2, const TowerTables& tables = default_tower_tables());
// tree: E6 (root <243,6>) or E8 (root <243,8>); inferred from the outer IPAD
// when absent. kappa, when known, is checked against the precondition.
TowerDecision decide_length_E(const Ipad2& t2, std::optional<TowerFamily> tree = std::nullopt,
                              const std::optional<Tkt>& kappa = std::nullopt,
                              const TowerTables& tables = default_tower_tables());
TowerDecision decide_length_H4(const Ipad2& t2s, const TowerTables& tables = default_tower_tables());
// Dispatch on the family, or on the outer IPAD when no family is given.
TowerDecision decide_tower(const Ipad2& t2, std::optional<TowerFamily> family = std::nullopt,
                           const TowerTables& tables = default_tower_tables());

// Partially observed child: unknown fields are absent.
struct ChildObservation {
  std::optional<Ati> tau0;
  std::optional<std::vector<Ati>> tau1;
  std::optional<std::vector<Ati>> tau2;
};
// Tags of the patterns of a family compatible with the observations under
// some assignment of observed children to pattern children.
std::vector<std::string> consistent_patterns(const std::vector<ChildObservation>& obs, TowerFamily f,
                                             const TowerTables& tables = default_tower_tables());

// Whether the child multisets agree (order-insensitive); compare_tau2 adds
// the second layers.
bool children_match(const std::vector<Ipad>& a, const std::vector<Ipad>& b, bool compare_tau2);

nlohmann::json to_json(const TowerDecision& d);
std::string describe(const TowerDecision& d);

}  // namespace pgt
