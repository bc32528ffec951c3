#include "pgt/ati.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <functional>
#include <numeric>

namespace pgt {

Ati::Ati(std::vector<int> l, int prime) : logs(std::move(l)), p(prime) {
  for (int v : logs)
    if (v <= 0) throw AtiError("ATI logarithms must be positive");
  std::sort(logs.begin(), logs.end(), std::greater<>());
}

int Ati::order_log() const { return std::accumulate(logs.begin(), logs.end(), 0); }

bool Ati::operator<(const Ati& o) const {
  if (order_log() != o.order_log()) return order_log() < o.order_log();
  return logs < o.logs;
}

Ati operator*(const Ati& a, const Ati& b) {
  std::vector<int> l = a.logs;
  l.insert(l.end(), b.logs.begin(), b.logs.end());
  return Ati(std::move(l), a.p);
}

// ------------------------------------------------------------------------ SNF

namespace {

long long checked_mul(long long a, long long b) {
  long long r;
  if (__builtin_mul_overflow(a, b, &r)) throw AtiError("integer overflow in Smith normal form");
  return r;
}

long long checked_sub(long long a, long long b) {
  long long r;
  if (__builtin_sub_overflow(a, b, &r)) throw AtiError("integer overflow in Smith normal form");
  return r;
}

}  // namespace

std::vector<long long> smith_diagonal(IntMatrix A, int ncols) {
  const int rows = static_cast<int>(A.size());
  for (const auto& r : A)
    if (static_cast<int>(r.size()) != ncols) throw AtiError("ragged relation matrix");
  auto row_op = [&](int dst, int src, long long q) {  // row dst -= q * row src
    for (int j = 0; j < ncols; ++j) A[dst][j] = checked_sub(A[dst][j], checked_mul(q, A[src][j]));
  };
  auto col_op = [&](int dst, int src, long long q) {
    for (int i = 0; i < rows; ++i) A[i][dst] = checked_sub(A[i][dst], checked_mul(q, A[i][src]));
  };
  std::vector<long long> diag;
  for (int t = 0; t < std::min(rows, ncols); ++t) {
    // pivot of minimal absolute value
    auto place_min = [&](bool only_cross) {
      int bi = -1, bj = -1;
      long long best = 0;
      for (int i = t; i < rows; ++i)
        for (int j = t; j < ncols; ++j) {
          if (only_cross && i != t && j != t) continue;
          long long v = std::llabs(A[i][j]);
          if (v && (bi < 0 || v < best)) best = v, bi = i, bj = j;
        }
      if (bi < 0) return false;
      std::swap(A[t], A[bi]);
      for (int i = 0; i < rows; ++i) std::swap(A[i][t], A[i][bj]);
      return true;
    };
    if (!place_min(false)) break;
    for (;;) {
      bool dirty = false;
      for (int i = t + 1; i < rows; ++i)
        if (A[i][t]) {
          row_op(i, t, A[i][t] / A[t][t]);
          dirty = dirty || A[i][t] != 0;
        }
      for (int j = t + 1; j < ncols; ++j)
        if (A[t][j]) {
          col_op(j, t, A[t][j] / A[t][t]);
          dirty = dirty || A[t][j] != 0;
        }
      if (dirty) {
        place_min(true);
        continue;
      }
      int bad = -1;
      for (int i = t + 1; i < rows && bad < 0; ++i)
        for (int j = t + 1; j < ncols; ++j)
          if (A[i][j] % A[t][t]) {
            bad = i;
            break;
          }
      if (bad < 0) break;
      row_op(t, bad, -1);
    }
    diag.push_back(std::llabs(A[t][t]));
  }
  return diag;
}

Ati snf_invariants(const IntMatrix& M, int ncols, int p) {
  auto d = smith_diagonal(M, ncols);
  if (static_cast<int>(d.size()) < ncols) throw AtiError("relation matrix has infinite quotient");
  std::vector<int> logs;
  for (long long v : d) {
    int e = 0;
    while (v % p == 0) v /= p, ++e;
    if (e) logs.push_back(e);
  }
  return Ati(std::move(logs), p);
}

Ati nearly_homocyclic(int n, int p) {
  if (n < 0) throw AtiError("nearly homocyclic group needs n >= 0");
  if (n == 0) return Ati({}, p);
  if (n == 1) return Ati({1}, p);
  int q = n / 2, r = n % 2;
  return Ati({q + r, q}, p);
}

// -------------------------------------------------------------------- grammar

std::string normalize_superscripts(const std::string& s) {
  static const char* sup[10] = {"⁰", "¹", "²", "³", "⁴",
                                "⁵", "⁶", "⁷", "⁸", "⁹"};
  std::string out, run;
  auto flush = [&] {
    if (run.empty()) return;
    out += run.size() == 1 ? "^" + run : "^{" + run + "}";
    run.clear();
  };
  std::size_t i = 0;
  while (i < s.size()) {
    bool matched = false;
    for (int d = 0; d < 10; ++d) {
      std::size_t len = std::char_traits<char>::length(sup[d]);
      if (s.compare(i, len, sup[d]) == 0) {
        run += static_cast<char>('0' + d);
        i += len;
        matched = true;
        break;
      }
    }
    if (matched) continue;
    flush();
    if (!std::isspace(static_cast<unsigned char>(s[i]))) out += s[i];
    ++i;
  }
  flush();
  return out;
}

namespace {

Ati parse_power(const std::string& body, int p) {
  std::vector<int> logs;
  if (body.empty()) return Ati({}, p);
  std::size_t i = 0;
  while (i <= body.size()) {
    std::size_t j = body.find(',', i);
    if (j == std::string::npos) j = body.size();
    std::string tok = body.substr(i, j - i);
    if (tok.empty()) {
      if (j == body.size() && i == j && !logs.empty()) break;  // trailing comma
      throw AtiError("empty entry in power form");
    }
    for (char c : tok)
      if (!std::isdigit(static_cast<unsigned char>(c))) throw AtiError("bad number '" + tok + "' in power form");
    long long v = std::stoll(tok);
    int e = 0;
    while (v > 1 && v % p == 0) v /= p, ++e;
    if (v != 1) throw AtiError("'" + tok + "' is not a power of " + std::to_string(p));
    if (e) logs.push_back(e);
    i = j + 1;
    if (j == body.size()) break;
  }
  return Ati(std::move(logs), p);
}

Ati parse_log(const std::string& s, int p) {
  if (s.empty() || s == "0") return Ati({}, p);
  std::vector<int> logs;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (!std::isdigit(static_cast<unsigned char>(c)) || c == '0')
      throw AtiError("unexpected '" + std::string(1, c) + "' in logarithmic form");
    int v = c - '0';
    ++i;
    int mult = 1;
    if (i < s.size() && s[i] == '^') {
      ++i;
      if (i < s.size() && s[i] == '{') {
        auto close = s.find('}', i);
        if (close == std::string::npos) throw AtiError("unterminated ^{");
        std::string num = s.substr(i + 1, close - i - 1);
        if (num.empty() || !std::all_of(num.begin(), num.end(), ::isdigit)) throw AtiError("bad exponent");
        mult = std::stoi(num);
        i = close + 1;
      } else if (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
        mult = s[i] - '0';
        ++i;
      } else {
        throw AtiError("missing exponent after '^'");
      }
      if (mult <= 0) throw AtiError("exponent must be positive");
    }
    for (int k = 0; k < mult; ++k) logs.push_back(v);
  }
  return Ati(std::move(logs), p);
}

}  // namespace

Ati parse_ati(const std::string& text, AtiNotation mode, int p) {
  std::string s = normalize_superscripts(text);
  bool paren = s.size() >= 2 && s.front() == '(' && s.back() == ')';
  if (mode == AtiNotation::Power || (mode == AtiNotation::Auto && paren && s.find(',') != std::string::npos)) {
    if (!paren) throw AtiError("power form must be parenthesized: '" + text + "'");
    return parse_power(s.substr(1, s.size() - 2), p);
  }
  if (paren) s = s.substr(1, s.size() - 2);
  try {
    return parse_log(s, p);
  } catch (const AtiError& e) {
    throw AtiError(std::string(e.what()) + " in '" + text + "'");
  }
}

std::string format_ati(const Ati& a, AtiNotation mode) {
  bool need_power = std::any_of(a.logs.begin(), a.logs.end(), [](int v) { return v >= 10; });
  if (mode == AtiNotation::Power || need_power) {
    std::string out = "(";
    for (std::size_t i = 0; i < a.logs.size(); ++i) {
      long long v = 1;
      for (int k = 0; k < a.logs[i]; ++k) v *= a.p;
      if (i) out += ",";
      out += std::to_string(v);
    }
    return out + ")";
  }
  std::string out;
  for (std::size_t i = 0; i < a.logs.size();) {
    std::size_t j = i;
    while (j < a.logs.size() && a.logs[j] == a.logs[i]) ++j;
    out += std::to_string(a.logs[i]);
    std::size_t m = j - i;
    if (m >= 10)
      out += "^{" + std::to_string(m) + "}";
    else if (m > 1)
      out += "^" + std::to_string(m);
    i = j;
  }
  return out;
}

std::string show_ati(const Ati& a) { return a.trivial() ? "0" : format_ati(a); }

nlohmann::json ati_to_json(const Ati& a) { return nlohmann::json(a.logs); }

Ati ati_from_json(const nlohmann::json& j) {
  if (j.is_string()) return parse_ati(j.get<std::string>());
  if (!j.is_array()) throw AtiError("ATI must be a string or an array of logarithms");
  return Ati(j.get<std::vector<int>>());
}

}  // namespace pgt
