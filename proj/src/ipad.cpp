#include "pgt/ipad.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>

namespace pgt {

bool Ipad2::starred() const {
  return !children.empty() &&
         std::all_of(children.begin(), children.end(), [](const Ipad& c) { return c.tau2.has_value(); });
}

std::vector<Ati> accumulate(std::vector<Ati> v) {
  std::sort(v.begin(), v.end(), [](const Ati& a, const Ati& b) { return b < a; });
  return v;
}

// ------------------------------------------------------------------- parsing

namespace {

struct ParseError : AtiError {
  using AtiError::AtiError;
};

// Split at depth-0 separators (',' or ';').
std::vector<std::string> split_top(const std::string& s) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '(' || c == '[') ++depth;
    if (c == ')' || c == ']') --depth;
    if (depth < 0) throw ParseError("unbalanced parentheses in '" + s + "'");
    if (depth == 0 && (c == ',' || c == ';')) {
      out.push_back(cur);
      cur.clear();
      continue;
    }
    cur += c;
  }
  if (depth != 0) throw ParseError("unbalanced parentheses in '" + s + "'");
  out.push_back(cur);
  return out;
}

std::size_t matching_paren(const std::string& s, std::size_t open) {
  int depth = 0;
  for (std::size_t i = open; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')' && --depth == 0) return i;
  }
  throw ParseError("unbalanced parentheses in '" + s + "'");
}

// "^k" or "^{k}" starting at pos; returns multiplicity and advances pos.
int read_exponent(const std::string& s, std::size_t& pos) {
  if (pos >= s.size() || s[pos] != '^') return 1;
  ++pos;
  std::string num;
  if (pos < s.size() && s[pos] == '{') {
    auto close = s.find('}', pos);
    if (close == std::string::npos) throw ParseError("unterminated ^{ in '" + s + "'");
    num = s.substr(pos + 1, close - pos - 1);
    pos = close + 1;
  } else {
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) num += s[pos++];
  }
  if (num.empty() || !std::all_of(num.begin(), num.end(), ::isdigit)) throw ParseError("bad exponent in '" + s + "'");
  return std::stoi(num);
}

void parse_items(const std::string& s, AtiNotation mode, std::vector<Ati>& out);

void parse_item(const std::string& item, AtiNotation mode, std::vector<Ati>& out) {
  if (item.empty()) throw ParseError("empty IPAD component");
  if (item[0] != '(') {
    out.push_back(parse_ati(item, mode == AtiNotation::Power ? AtiNotation::Power : AtiNotation::Log));
    return;
  }
  std::size_t close = matching_paren(item, 0);
  std::string inner = item.substr(1, close - 1);
  std::size_t pos = close + 1;
  int mult = read_exponent(item, pos);
  if (pos != item.size()) throw ParseError("unexpected text after ')' in '" + item + "'");
  std::vector<Ati> one;
  bool nested = inner.find('(') != std::string::npos;
  bool has_sep = split_top(inner).size() > 1;
  if (mode == AtiNotation::Power && !nested)
    one.push_back(parse_ati("(" + inner + ")", AtiNotation::Power));
  else if (mode != AtiNotation::Power && !nested && !has_sep)
    one.push_back(parse_ati(inner, AtiNotation::Log));
  else
    parse_items(inner, mode, one);
  for (int k = 0; k < mult; ++k) out.insert(out.end(), one.begin(), one.end());
}

void parse_items(const std::string& s, AtiNotation mode, std::vector<Ati>& out) {
  for (const auto& it : split_top(s)) parse_item(it, mode, out);
}

}  // namespace

std::vector<Ati> parse_layer(const std::string& text, AtiNotation mode) {
  std::string s = normalize_superscripts(text);
  std::vector<Ati> out;
  if (s.empty()) return out;
  // one outer pair of parentheses wraps the whole list unless it carries an exponent
  if (s.front() == '(' && matching_paren(s, 0) == s.size() - 1) {
    std::string inner = s.substr(1, s.size() - 2);
    bool nested = inner.find('(') != std::string::npos;
    bool has_sep = split_top(inner).size() > 1;
    if (mode == AtiNotation::Power && !nested) {
      out.push_back(parse_ati(s, AtiNotation::Power));
      return out;
    }
    if (!nested && !has_sep) {
      out.push_back(parse_ati(inner, AtiNotation::Log));
      return out;
    }
    parse_items(inner, mode, out);
    return out;
  }
  parse_items(s, mode, out);
  return out;
}

Ipad parse_ipad(const std::string& text) {
  std::string s = normalize_superscripts(text);
  if (s.size() < 2 || s.front() != '[' || s.back() != ']')
    throw ParseError("IPAD must be enclosed in [ ]: '" + text + "'");
  s = s.substr(1, s.size() - 2);
  // top-level ';' separates layers
  std::vector<std::string> parts;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (depth == 0 && c == ';') {
      parts.push_back(cur);
      cur.clear();
      continue;
    }
    cur += c;
  }
  parts.push_back(cur);
  if (parts.size() < 2 || parts.size() > 3) throw ParseError("IPAD needs 2 or 3 layers: '" + text + "'");
  const std::string& t0 = parts[0];
  bool power = t0.size() > 1 && t0.front() == '(' && t0.find(',') != std::string::npos;
  AtiNotation mode = power ? AtiNotation::Power : AtiNotation::Log;
  Ipad ip;
  ip.tau0 = parse_ati(t0, mode);
  ip.tau1 = parse_layer(parts[1], mode);
  if (parts.size() == 3) ip.tau2 = parse_layer(parts[2], mode);
  return ip;
}

std::string format_layer(const std::vector<Ati>& v) {
  std::vector<std::pair<std::string, int>> runs;
  for (const auto& a : v) {
    std::string s = show_ati(a);
    if (!runs.empty() && runs.back().first == s)
      ++runs.back().second;
    else
      runs.emplace_back(s, 1);
  }
  auto run_text = [](const std::pair<std::string, int>& r) {
    if (r.second == 1) return r.first;
    std::string e = r.second >= 10 ? "^{" + std::to_string(r.second) + "}" : "^" + std::to_string(r.second);
    return "(" + r.first + ")" + e;
  };
  if (runs.size() == 1 && runs[0].second > 1) return run_text(runs[0]);
  std::string out = "(";
  for (std::size_t i = 0; i < runs.size(); ++i) {
    if (i) out += ",";
    out += run_text(runs[i]);
  }
  return out + ")";
}

std::string format_ipad(const Ipad& i) {
  std::string out = "[" + show_ati(i.tau0) + ";" + format_layer(i.tau1);
  if (i.tau2) out += ";" + format_layer(*i.tau2);
  return out + "]";
}

std::string format_ipad2(const Ipad2& i) {
  std::string out = "[" + show_ati(i.tau0) + ";(";
  for (std::size_t k = 0; k < i.children.size(); ++k) {
    if (k) out += ",";
    out += format_ipad(i.children[k]);
  }
  return out + ")]";
}

// ---------------------------------------------------------------------- JSON

namespace {

nlohmann::json layer_json(const std::vector<Ati>& v) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& x : v) a.push_back(format_ati(x));
  return a;
}

std::vector<Ati> layer_from(const nlohmann::json& j) {
  std::vector<Ati> v;
  if (j.is_string()) return parse_layer(j.get<std::string>(), AtiNotation::Log);
  for (const auto& x : j) v.push_back(ati_from_json(x));
  return v;
}

}  // namespace

nlohmann::json to_json(const Ipad& i) {
  nlohmann::json j;
  j["tau0"] = format_ati(i.tau0);
  j["tau1"] = layer_json(i.tau1);
  if (i.tau2) j["tau2"] = layer_json(*i.tau2);
  return j;
}

nlohmann::json to_json(const Ipad2& i) {
  nlohmann::json j;
  j["tau0"] = format_ati(i.tau0);
  j["children"] = nlohmann::json::array();
  for (const auto& c : i.children) j["children"].push_back(to_json(c));
  return j;
}

nlohmann::json to_json(const Ipad3& i) {
  nlohmann::json j;
  j["tau0"] = format_ati(i.tau0);
  j["children"] = nlohmann::json::array();
  for (const auto& c : i.children) j["children"].push_back(to_json(c));
  return j;
}

nlohmann::json to_json(const Ttt& t) {
  nlohmann::json j;
  j["layers"] = nlohmann::json::array();
  for (const auto& l : t.layers) j["layers"].push_back(layer_json(l));
  return j;
}

nlohmann::json to_json(const Tkt& t) {
  nlohmann::json j;
  j["kappa"] = t.kappa;
  return j;
}

Ipad ipad_from_json(const nlohmann::json& j) {
  if (j.is_string()) return parse_ipad(j.get<std::string>());
  Ipad i;
  i.tau0 = ati_from_json(j.at("tau0"));
  i.tau1 = layer_from(j.at("tau1"));
  if (j.contains("tau2")) i.tau2 = layer_from(j.at("tau2"));
  return i;
}

Ipad2 ipad2_from_json(const nlohmann::json& j) {
  Ipad2 i;
  i.tau0 = ati_from_json(j.at("tau0"));
  for (const auto& c : j.at("children")) i.children.push_back(ipad_from_json(c));
  return i;
}

// ----------------------------------------------------------------------- TKT

Tkt canonicalize_tkt(const Tkt& k) {
  const int n = static_cast<int>(k.kappa.size());
  if (n > 8) throw AtiError("canonicalization supports at most 8 components");
  for (int v : k.kappa)
    if (v < 0 || v > n) throw AtiError("kernel index out of range");
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Tkt best = k;
  std::vector<int> inv(n), img(n);
  do {
    // relabel position i as perm[i]: new[perm[i]] = perm[old[i]]
    for (int i = 0; i < n; ++i) {
      int v = k.kappa[i];
      img[perm[i]] = v == 0 ? 0 : perm[v - 1] + 1;
    }
    if (img < best.kappa) best.kappa = img;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

std::vector<int> occupation_numbers(const Tkt& k) {
  const int n = static_cast<int>(k.kappa.size());
  std::vector<int> o(n, 0);
  for (int v : k.kappa)
    if (v >= 1 && v <= n) ++o[v - 1];
  return o;
}

int fixed_points(const Tkt& k) {
  int c = 0;
  for (std::size_t i = 0; i < k.kappa.size(); ++i)
    if (k.kappa[i] == static_cast<int>(i) + 1) ++c;
  return c;
}

std::vector<int> cycle_lengths(const Tkt& k) {
  const int n = static_cast<int>(k.kappa.size());
  std::vector<int> lens;
  std::vector<bool> on_cycle(n, false);
  for (int s = 0; s < n; ++s) {
    // walk n steps to land on a cycle if there is one
    int x = s;
    bool dead = false;
    for (int t = 0; t < n && !dead; ++t) {
      int v = k.kappa[x];
      if (v <= 0) dead = true;
      else x = v - 1;
    }
    if (dead || on_cycle[x]) continue;
    int len = 0, y = x;
    do {
      on_cycle[y] = true;
      y = k.kappa[y] - 1;
      ++len;
    } while (y != x);
    lens.push_back(len);
  }
  std::sort(lens.begin(), lens.end());
  return lens;
}

Tkt parse_tkt(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.size() >= 2 && s.front() == '(' && s.back() == ')') s = s.substr(1, s.size() - 2);
  Tkt k;
  if (s.find(',') == std::string::npos) {
    for (char c : s) {
      if (!std::isdigit(static_cast<unsigned char>(c))) throw AtiError("bad TKT '" + text + "'");
      k.kappa.push_back(c - '0');
    }
  } else {
    std::size_t i = 0;
    while (i <= s.size()) {
      std::size_t j = s.find(',', i);
      if (j == std::string::npos) j = s.size();
      std::string tok = s.substr(i, j - i);
      if (tok.empty() || !std::all_of(tok.begin(), tok.end(), ::isdigit)) throw AtiError("bad TKT '" + text + "'");
      k.kappa.push_back(std::stoi(tok));
      i = j + 1;
    }
  }
  const int n = static_cast<int>(k.kappa.size());
  for (int v : k.kappa)
    if (v < 0 || v > n) throw AtiError("TKT entry out of range in '" + text + "'");
  return k;
}

std::string format_tkt(const Tkt& k) {
  std::string out = "(";
  for (std::size_t i = 0; i < k.kappa.size(); ++i) {
    if (i) out += ",";
    out += k.kappa[i] < 0 ? std::string("*") : std::to_string(k.kappa[i]);
  }
  return out + ")";
}

}  // namespace pgt
