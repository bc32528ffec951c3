// Layered abelianization data: IPADs, iterated IPADs, TTTs and TKTs as plain
// values, with the bracket text grammar and JSON encodings.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pgt/ati.hpp"

namespace pgt {

// [tau0; tau1] and optionally the second layer tau2.
struct Ipad {
  Ati tau0;
  std::vector<Ati> tau1;
  std::optional<std::vector<Ati>> tau2;

  bool operator==(const Ipad& o) const = default;
};

// tau^(2): tau0(G) and the IPAD of every first-layer subgroup. When every
// child carries tau2 this is the multi-layered form.
struct Ipad2 {
  Ati tau0;
  std::vector<Ipad> children;
  bool starred() const;
  bool operator==(const Ipad2& o) const = default;
};

struct Ipad3 {
  Ati tau0;
  std::vector<Ipad2> children;
  bool operator==(const Ipad3& o) const = default;
};

struct Ttt {
  std::vector<std::vector<Ati>> layers;
};

// Kernel indices over the first layer; 0 means the whole abelianization,
// -1 means the kernel is neither a first-layer subgroup nor everything.
struct Tkt {
  std::vector<int> kappa;
  bool operator==(const Tkt& o) const = default;
};

// Multiset of ATIs sorted by decreasing order (then logs).
std::vector<Ati> accumulate(std::vector<Ati> v);

// Text grammar, e.g. "[1^2;(21,(1^2)^3)]", "[1³;((1³)⁴,(1²)⁹);(1²)¹³]" or
// "[(3,3);((3,3,3),(9,3,3,3),(27,9)^2)]". The notation of every component
// follows tau0: power form when tau0 is a parenthesized comma list.
Ipad parse_ipad(const std::string& text);
std::vector<Ati> parse_layer(const std::string& text, AtiNotation mode);
std::string format_layer(const std::vector<Ati>& v);
std::string format_ipad(const Ipad& i);
std::string format_ipad2(const Ipad2& i);

nlohmann::json to_json(const Ipad& i);
nlohmann::json to_json(const Ipad2& i);
nlohmann::json to_json(const Ipad3& i);
nlohmann::json to_json(const Ttt& t);
nlohmann::json to_json(const Tkt& t);
Ipad ipad_from_json(const nlohmann::json& j);
Ipad2 ipad2_from_json(const nlohmann::json& j);

// Lexicographically least relabelling pi k pi^-1 (0 stays 0). Supports up to
// 8 components.
Tkt canonicalize_tkt(const Tkt& k);
std::vector<int> occupation_numbers(const Tkt& k);
int fixed_points(const Tkt& k);
// Cycle lengths of the permutation part (entries that are not 0 and lie on
// cycles of the functional graph), sorted.
std::vector<int> cycle_lengths(const Tkt& k);
Tkt parse_tkt(const std::string& text);  // "(1,0,0,0)" or "1000"
std::string format_tkt(const Tkt& k);

}  // namespace pgt
