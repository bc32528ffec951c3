// Componentwise link between the ordered first layer and the transfer kernel
// type for the depth <= 1 vertices of the coclass-2 trees rooted at <243,6>
// and <243,8>: kernel constraints, completion of partial kernel types, and
// naming.
#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "pgt/ipad.hpp"

namespace pgt {

struct CorrespondenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Finite-domain constraint solver: AC-3 over binary constraints, then
// backtracking with forward checking. Values are small non-negative ints.
class FiniteCsp {
 public:
  int add_variable(std::vector<int> domain, std::string name);
  void add_unary(int v, std::function<bool(int)> ok, std::string why);
  void add_binary(int a, int b, std::function<bool(int, int)> ok, std::string why);
  // All solutions in lexicographic order of the variables.
  std::vector<std::vector<int>> solve() const;
  // Constraint descriptions that fail on every value left after unary pruning.
  std::vector<std::string> explain() const;

 private:
  struct Unary {
    int v;
    std::function<bool(int)> ok;
    std::string why;
  };
  struct Binary {
    int a, b;
    std::function<bool(int, int)> ok;
    std::string why;
  };
  bool ac3(std::vector<std::vector<int>>& dom) const;
  void search(std::vector<std::vector<int>>& dom, std::vector<int>& cur, std::size_t i,
              std::vector<std::vector<int>>& out) const;
  std::vector<std::vector<int>> domains_;
  std::vector<std::string> names_;
  std::vector<Unary> unary_;
  std::vector<Binary> binary_;
};

enum class TreeShape { Root6, Root8 };

// 0-based positions of the components by role.
struct Roles {
  TreeShape shape;
  int polarized = -1;
  int rank3 = -1;               // tree 6
  std::vector<int> twenty_one;  // the (21) components other than the polarized one
};

// Every role assignment compatible with the ordered first layer (several when
// the polarized component is itself of type (21)). Throws
// CorrespondenceError when the layer has neither tree shape.
std::vector<Roles> role_assignments(const std::vector<Ati>& tau1);

// Entries are 0..4 or nullopt for unknown.
using PartialTkt = std::vector<std::optional<int>>;
PartialTkt parse_partial_tkt(const std::string& text);  // "(3,3,*,*)" or "33**"

struct CompletionResult {
  std::vector<Tkt> completions;
  std::string tkt_name;  // common name; "ambiguous" if completions differ
  std::vector<std::pair<int, int>> class_defect_options;  // (c, k)
  std::vector<std::string> notes;
};

CompletionResult complete_kappa(const PartialTkt& partial, const Ipad& ip);
// Name from the decision tables; throws when kappa violates the tree's
// kernel constraints.
std::string tkt_name(const Tkt& k, const Ipad& ip);

// Taussky's conditions per component: 'A' when the kernel meets the
// subgroup (kappa(i) = i or total), else 'B'.
std::string taussky_annotations(const Tkt& k);
// 1-based indices that occur nowhere in kappa.
std::vector<int> resistant_classes(const Tkt& k);

nlohmann::json to_json(const CompletionResult& r);

}  // namespace pgt
