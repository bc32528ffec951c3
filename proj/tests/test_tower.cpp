#include <algorithm>
#include <map>
#include <random>

#include "doctest.h"
#include "pgt/catalog.hpp"
#include "pgt/transfers.hpp"
#include "pgt/tower.hpp"

using namespace pgt;

namespace {

Ipad2 from_pattern(const TowerPattern& p) {
  Ipad2 t;
  t.tau0 = Ati({1, 1}, 3);
  t.children = p.children;
  return t;
}

const TowerPattern& pattern(const std::string& tag) {
  for (const auto& p : default_tower_tables().patterns)
    if (p.tag == tag) return p;
  throw std::runtime_error("no pattern " + tag);
}

template <class Rng>
Ipad2 shuffled(Ipad2 t, Rng& rng) {
  std::shuffle(t.children.begin(), t.children.end(), rng);
  for (auto& c : t.children) {
    std::shuffle(c.tau1.begin(), c.tau1.end(), rng);
    if (c.tau2) std::shuffle(c.tau2->begin(), c.tau2->end(), rng);
  }
  return t;
}

}  // namespace

TEST_CASE("tables load and pass the linter") {
  const auto& t = default_tower_tables();
  CHECK(t.patterns.size() == 12);
  CHECK(lint_tables(t).empty());
  auto broken = t;
  broken.patterns[0].children[1].tau1.pop_back();
  auto msgs = lint_tables(broken);
  REQUIRE(msgs.size() == 1);
  CHECK(msgs[0].find("cap-81-10 child 2") != std::string::npos);
  CHECK(msgs[0].find("expected 4") != std::string::npos);
}

TEST_CASE("every stored pattern decides to its stated outcome") {
  struct Want {
    std::vector<std::string> candidates;
    std::vector<int> length;
  };
  const std::map<std::string, Want> want{
      {"cap-81-10", {{"<81,10>"}, {2}}},
      {"cap-81-8", {{"<81,8>"}, {2}}},
      {"cap-81-9", {{"<81,9>"}, {2}}},
      {"tree6-len2", {{"<2187,288>", "<2187,289>", "<2187,290>"}, {2}}},
      {"tree6-len3", {{"<729,49>-#2;4", "<729,49>-#2;5", "<729,49>-#2;6"}, {3}}},
      {"tree8-len2", {{"<2187,302>", "<2187,304>", "<2187,306>"}, {2}}},
      {"tree8-len3", {{"<729,54>-#2;2", "<729,54>-#2;4", "<729,54>-#2;6"}, {3}}},
      {"h4-243-4", {{"<243,4>"}, {2}}},
      {"h4-729-45", {{"<729,45>"}, {2}}},
      {"h4-2187-273", {{"<2187,273>"}, {3}}},
      {"h4-729-45-2-2", {{"<729,45>-#2;2"}, {3}}},
      {"h4-higher",
       {{"<729,45>(-#2;1-#1;2)^1-#2;2", "<729,45>(-#2;1-#1;2)^2-#2;2", "<729,45>(-#2;1-#1;2)^3-#2;2"}, {3, 4}}},
  };
  for (const auto& p : default_tower_tables().patterns) {
    CAPTURE(p.tag);
    auto d = decide_tower(from_pattern(p));
    REQUIRE(d.status == TowerDecision::Status::Decided);
    CHECK(d.matched_pattern == p.tag);
    REQUIRE(want.count(p.tag));
    CHECK(d.candidates == want.at(p.tag).candidates);
    CHECK(d.length == want.at(p.tag).length);
  }
  CHECK(pattern("h4-higher").candidate_lengths == std::vector<int>{3, 3, 4});
}

TEST_CASE("capitulation decisions return the kernel type") {
  CHECK(format_tkt(*decide_capitulation(from_pattern(pattern("cap-81-10"))).kappa) == "(1,0,0,0)");
  CHECK(format_tkt(*decide_capitulation(from_pattern(pattern("cap-81-8"))).kappa) == "(2,0,0,0)");
  CHECK(format_tkt(*decide_capitulation(from_pattern(pattern("cap-81-9"))).kappa) == "(0,0,0,0)");
  // moving the polarized child relabels the kernel type
  auto t = from_pattern(pattern("cap-81-8"));
  std::swap(t.children[0], t.children[3]);
  CHECK(format_tkt(*decide_capitulation(t).kappa) == "(0,0,0,2)");
}

TEST_CASE("patterns are mutually exclusive within each family") {
  const auto& t = default_tower_tables();
  for (const auto& a : t.patterns)
    for (const auto& b : t.patterns) {
      if (a.family != b.family || a.tag == b.tag) continue;
      CAPTURE(a.tag);
      CAPTURE(b.tag);
      CHECK_FALSE(children_match(a.children, b.children, a.family == TowerFamily::H4));
    }
}

TEST_CASE("matching ignores the order of subgroups and components") {
  std::mt19937 rng(7);
  for (const auto& p : default_tower_tables().patterns)
    for (int r = 0; r < 20; ++r) {
      auto d = decide_tower(shuffled(from_pattern(p), rng));
      CHECK(d.matched_pattern == p.tag);
    }
}

TEST_CASE("H.4 length two and three are never conflated") {
  // tau1 of the length-2 group with the second layers of the Schur sigma-group
  auto a = from_pattern(pattern("h4-729-45"));
  auto b = from_pattern(pattern("h4-729-45-2-2"));
  for (std::size_t i = 0; i < 4; ++i) {
    auto mixed = a;
    mixed.children[i].tau2 = b.children[i].tau2;
    auto d = decide_length_H4(mixed);
    CHECK(d.status == TowerDecision::Status::Undecided);
    CHECK(d.length_unbounded);
    CHECK_FALSE(d.diff.empty());
  }
}

TEST_CASE("undecided output carries a structured diff") {
  auto t = from_pattern(pattern("tree8-len3"));
  t.children[2].tau1 = parse_layer("(2^21,(21)^3)", AtiNotation::Log);
  auto d = decide_length_E(t);
  CHECK(d.status == TowerDecision::Status::Undecided);
  CHECK(d.length == std::vector<int>{2, 3});
  REQUIRE(d.diff.size() == 1);
  CHECK(d.diff[0].input_index == 2);
  CHECK(d.diff[0].field == "tau1");
  CHECK(format_layer(d.diff[0].missing) == "(31)^3");
  CHECK(format_layer(d.diff[0].unexpected) == "(21)^3");
  auto j = to_json(d);
  CHECK(j["status"] == "undecided");
  CHECK(j["diff"][0]["input_child"] == 3);
}

TEST_CASE("preconditions and errors") {
  auto e = from_pattern(pattern("tree6-len2"));
  CHECK_THROWS_AS(decide_length_E(e, TowerFamily::E8), TowerError);
  CHECK_THROWS_AS(decide_length_E(e, std::nullopt, parse_tkt("(0,1,2,2)")), TowerError);  // total
  CHECK_THROWS_AS(decide_length_E(e, std::nullopt, parse_tkt("(2,1,2,2)")), TowerError);  // 2-cycle
  CHECK(decide_length_E(e, std::nullopt, parse_tkt("(1,1,2,2)")).matched_pattern == "tree6-len2");
  auto h = from_pattern(pattern("h4-243-4"));
  for (auto& c : h.children) c.tau2.reset();
  CHECK_THROWS_AS(decide_length_H4(h), TowerError);
  CHECK_THROWS_AS(decide_capitulation(from_pattern(pattern("h4-243-4"))), TowerError);
}

TEST_CASE("H.4 example: two fields, both of length three, different groups") {
  const auto one3 = parse_ati("1^3"), t21 = parse_ati("21");
  auto L = [](const char* s) { return parse_layer(s, AtiNotation::Log); };
  // critical second layers of the first field
  std::vector<ChildObservation> a{
      {one3, std::nullopt, L("(2^21,(1^3)^3,(2^2)^3,(21)^6)")},
      {one3, std::nullopt, L("(2^21,(21^2)^12)")},
      {one3, std::nullopt, L("(2^21,(21^2)^12)")},
      {t21, std::nullopt, L("(2^21,(2^2)^3)")},
  };
  CHECK(consistent_patterns(a, TowerFamily::H4) == std::vector<std::string>{"h4-729-45-2-2"});
  // first and second layers of the second field
  std::vector<ChildObservation> b{
      {one3, L("(21^2,(1^3)^3,(1^2)^9)"), L("(21^2,(21)^3,(1^2)^9)")},
      {one3, L("(21^2,(21)^12)"), L("(21^2,(21)^12)")},
      {one3, L("((21^2)^4,(2^2)^9)"), L("(21^2)^13")},
      {t21, L("(21^2,(21)^3)"), L("(21^2,(21)^3)")},
  };
  CHECK(consistent_patterns(b, TowerFamily::H4) == std::vector<std::string>{"h4-2187-273"});
  auto da = decide_length_H4(from_pattern(pattern("h4-729-45-2-2")));
  auto db = decide_length_H4(from_pattern(pattern("h4-2187-273")));
  CHECK(da.candidates == std::vector<std::string>{"<729,45>-#2;2"});
  CHECK(db.candidates == std::vector<std::string>{"<2187,273>"});
  CHECK(da.length == std::vector<int>{3});
  CHECK(db.length == std::vector<int>{3});
}

TEST_CASE("decisions on computed iterated IPADs of catalog groups") {
  auto cat = load_catalog(default_catalog_dir());
  auto run = [&](const std::string& id) {
    const auto* e = find_entry(cat, id);
    REQUIRE(e);
    REQUIRE(e->presentation);
    auto G = whole_group(e->presentation);
    return std::make_pair(decide_tower(ipad2_star(G)), tkt(G));
  };
  for (const char* id : {"<81,8>", "<81,9>", "<81,10>"}) {
    CAPTURE(id);
    auto [d, k] = run(id);
    REQUIRE(d.status == TowerDecision::Status::Decided);
    CHECK(d.candidates == std::vector<std::string>{id});
    CHECK(d.kappa == k);
  }
  CHECK(run("<243,4>").first.matched_pattern == "h4-243-4");
  // the order-729 H.4 representative satisfies the pattern of <729,45>
  CHECK(run("<729,44|45|46|47>").first.matched_pattern == "h4-729-45");
}
