// Abelian type invariants of finite abelian p-groups.
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace pgt {

struct AtiError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// p-logarithms of the elementary divisors, non-increasing. "21" is (9,3).
struct Ati {
  std::vector<int> logs;
  int p = 3;

  Ati() = default;
  explicit Ati(std::vector<int> l, int prime = 3);

  int order_log() const;
  int rank() const { return static_cast<int>(logs.size()); }
  bool trivial() const { return logs.empty(); }

  bool operator==(const Ati& o) const { return logs == o.logs && p == o.p; }
  bool operator!=(const Ati& o) const { return !(*this == o); }
  bool operator<(const Ati& o) const;  // by order, then logs
};

// Direct product.
Ati operator*(const Ati& a, const Ati& b);

using IntMatrix = std::vector<std::vector<long long>>;

// Diagonal of the Smith normal form of M (nonzero entries only, d_i | d_{i+1}).
std::vector<long long> smith_diagonal(IntMatrix M, int ncols);
// ATI of Z^ncols / rowspace(M); throws when the quotient is infinite.
Ati snf_invariants(const IntMatrix& M, int ncols, int p = 3);

Ati nearly_homocyclic(int n, int p = 3);

enum class AtiNotation { Auto, Log, Power };

// Logarithmic form: "21^4", "2^21^2", "1^{12}"; "" or "0" for the trivial
// group; a surrounding pair of parentheses is allowed ("(1^2)"). Power form:
// "(9,9,3,3)". In Auto mode a parenthesized list with a comma is power form.
Ati parse_ati(const std::string& text, AtiNotation mode = AtiNotation::Auto, int p = 3);
std::string format_ati(const Ati& a, AtiNotation mode = AtiNotation::Log);
// Like format_ati in log form but prints "0" for the trivial group.
std::string show_ati(const Ati& a);

// Replace unicode superscript digits by ^k and strip spaces.
std::string normalize_superscripts(const std::string& s);

nlohmann::json ati_to_json(const Ati& a);
Ati ati_from_json(const nlohmann::json& j);

}  // namespace pgt
