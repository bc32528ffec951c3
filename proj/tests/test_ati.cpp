#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "doctest.h"
#include "oracle.hpp"
#include "pgt/ati.hpp"
#include "pgt/ipad.hpp"

using namespace pgt;

namespace {

// Elementary divisors of a diagonal matrix with prime-power entries, brute force.
std::vector<int> diag_logs(const std::vector<long long>& d, int p) {
  std::vector<int> out;
  for (long long x : d) {
    int e = 0;
    while (x % p == 0 && x > 1) x /= p, ++e;
    if (e) out.push_back(e);
  }
  std::sort(out.rbegin(), out.rend());
  return out;
}

}  // namespace

TEST_CASE("log notation parse and format") {
  CHECK(parse_ati("21").logs == std::vector<int>{2, 1});
  CHECK(parse_ati("1^2").logs == std::vector<int>{1, 1});
  CHECK(parse_ati("(1^2)").logs == std::vector<int>{1, 1});
  CHECK(parse_ati("1^{3}").logs == std::vector<int>{1, 1, 1});
  CHECK(parse_ati("21^2").logs == std::vector<int>{2, 1, 1});
  CHECK(parse_ati("0").trivial());
  CHECK(parse_ati("").trivial());
  CHECK(parse_ati("1²").logs == std::vector<int>{1, 1});
  CHECK(format_ati(parse_ati("1^3")) == "1^3");
  CHECK(format_ati(parse_ati("321")) == "321");
  CHECK(show_ati(Ati({}, 3)) == "0");
  CHECK_THROWS_AS(parse_ati("x1"), AtiError);
}

TEST_CASE("power notation") {
  auto a = parse_ati("(27,3)", AtiNotation::Power);
  CHECK(a.logs == std::vector<int>{3, 1});
  CHECK(parse_ati("(9,3,3)").logs == std::vector<int>{2, 1, 1});
  CHECK(parse_ati("()", AtiNotation::Power).trivial());
  CHECK(format_ati(a, AtiNotation::Power) == "(27,3)");
  CHECK_THROWS(parse_ati("(10,3)", AtiNotation::Power));
}

TEST_CASE("random ATI round trips through both notations and JSON") {
  std::mt19937 rng(3);
  for (int t = 0; t < 200; ++t) {
    std::vector<int> logs;
    int r = rng() % 5;
    for (int i = 0; i < r; ++i) logs.push_back(1 + rng() % 6);
    std::sort(logs.rbegin(), logs.rend());
    Ati a(logs, 3);
    CHECK(parse_ati(format_ati(a, AtiNotation::Log)) == a);
    CHECK(parse_ati(format_ati(a, AtiNotation::Power), AtiNotation::Power) == a);
    CHECK(ati_from_json(ati_to_json(a)) == a);
  }
}

TEST_CASE("nearly homocyclic groups") {
  CHECK(nearly_homocyclic(1).logs == std::vector<int>{1});
  CHECK(nearly_homocyclic(2).logs == std::vector<int>{1, 1});
  CHECK(nearly_homocyclic(3).logs == std::vector<int>{2, 1});
  CHECK(nearly_homocyclic(4).logs == std::vector<int>{2, 2});
  for (int n = 1; n <= 64; ++n) {
    auto a = nearly_homocyclic(n);
    CHECK(a.order_log() == n);
    CHECK(a.rank() == (n == 1 ? 1 : 2));
    CHECK(a.logs.front() - a.logs.back() <= 1);
  }
}

TEST_CASE("smith invariants match diagonal oracle after unimodular mixing") {
  std::mt19937 rng(5);
  for (int t = 0; t < 200; ++t) {
    int n = 1 + rng() % 4;
    std::vector<long long> d(n);
    const long long choices[] = {1, 3, 9, 27, 81};
    for (auto& x : d) x = choices[rng() % 5];
    IntMatrix M(n, std::vector<long long>(n, 0));
    for (int i = 0; i < n; ++i) M[i][i] = d[i];
    // elementary row and column operations keep the invariants
    for (int k = 0; k < 6 && n > 1; ++k) {
      int i = rng() % n, j = rng() % n;
      if (i == j) continue;
      long long c = static_cast<long long>(rng() % 5) - 2;
      if (rng() % 2)
        for (int col = 0; col < n; ++col) M[i][col] += c * M[j][col];
      else
        for (int row = 0; row < n; ++row) M[row][i] += c * M[row][j];
    }
    CHECK(snf_invariants(M, n, 3).logs == diag_logs(d, 3));
  }
  CHECK_THROWS(snf_invariants(IntMatrix{{3, 0}}, 2, 3));
}

TEST_CASE("direct product and ordering") {
  CHECK((parse_ati("21") * parse_ati("1")).logs == std::vector<int>{2, 1, 1});
  CHECK(parse_ati("1^2") < parse_ati("21"));
}

TEST_CASE("smith diagonal equals quotients of determinantal divisors") {
  std::mt19937 rng(11);
  for (int t = 0; t < 1000; ++t) {
    int rows = 1 + rng() % 4, cols = 1 + rng() % 4;
    IntMatrix M(rows, std::vector<long long>(cols));
    for (auto& r : M)
      for (auto& x : r) x = static_cast<long long>(rng() % 19) - 9;
    auto d = smith_diagonal(M, cols);
    for (std::size_t i = 0; i + 1 < d.size(); ++i) {
      REQUIRE(d[i] > 0);
      CHECK(d[i + 1] % d[i] == 0);
    }
    long long prev = 1;
    int rank = 0;
    for (int k = 1; k <= std::min(rows, cols); ++k) {
      long long Dk = oracle::determinantal_divisor(M, cols, k);
      if (Dk == 0) break;
      rank = k;
      REQUIRE(static_cast<int>(d.size()) >= k);
      CHECK(d[k - 1] == Dk / prev);
      prev = Dk;
    }
    CHECK(static_cast<int>(d.size()) == rank);
  }
}

TEST_CASE("canonical kernel type is constant on relabeling orbits") {
  std::mt19937 rng(13);
  std::vector<int> perm = {0, 1, 2, 3};
  std::vector<std::vector<int>> perms;
  do perms.push_back(perm);
  while (std::next_permutation(perm.begin(), perm.end()));
  REQUIRE(perms.size() == 24);
  for (int t = 0; t < 1000; ++t) {
    Tkt k;
    for (int i = 0; i < 4; ++i) k.kappa.push_back(rng() % 5);
    auto canon = canonicalize_tkt(k);
    bool in_orbit = false;
    for (auto& pi : perms) {
      auto r = oracle::relabel(k, pi);
      CHECK(canonicalize_tkt(r) == canon);
      CHECK(!(r.kappa < canon.kappa));
      auto occ_r = occupation_numbers(r), occ_k = occupation_numbers(k);
      std::sort(occ_r.begin(), occ_r.end());
      std::sort(occ_k.begin(), occ_k.end());
      CHECK(occ_r == occ_k);
      CHECK(fixed_points(r) == fixed_points(k));
      CHECK(cycle_lengths(r) == cycle_lengths(k));
      in_orbit = in_orbit || r == canon;
    }
    CHECK(in_orbit);
  }
}

TEST_CASE("published ATI, layer and IPAD strings round trip") {
  std::ifstream in(PGT_SOURCE_DIR "/tests/data/ati_strings.txt");
  REQUIRE(in);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string kind, text;
    ls >> kind >> text;
    CAPTURE(text);
    if (kind == "power") {
      auto a = parse_ati(text, AtiNotation::Power);
      CHECK(format_ati(a, AtiNotation::Power) == text);
      CHECK(parse_ati(format_ati(a)) == a);
      CHECK(ati_from_json(ati_to_json(a)) == a);
    } else if (kind == "layer") {
      auto v = parse_layer(text, AtiNotation::Log);
      auto f = format_layer(v);
      CHECK(parse_layer(f, AtiNotation::Log) == v);
      CHECK(format_layer(parse_layer(f, AtiNotation::Log)) == f);
    } else {
      REQUIRE(kind == "ipad");
      auto ip = parse_ipad(text);
      auto f = format_ipad(ip);
      CHECK(parse_ipad(f) == ip);
      CHECK(format_ipad(parse_ipad(f)) == f);
      CHECK(ipad_from_json(to_json(ip)) == ip);
    }
    ++n;
  }
  CHECK(n >= 90);
}
