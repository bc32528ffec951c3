#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "oracle.hpp"
#include "pgt/catalog.hpp"
#include "pgt/transfers.hpp"

using namespace pgt;

TEST_CASE("catalog loads and every required entry is present") {
  auto cat = load_catalog(default_catalog_dir());
  for (const char* id : {"<9,2>", "<27,3>", "<27,4>", "<81,7>", "<81,8>", "<81,9>", "<81,10>", "<243,3>",
                         "<243,4>", "<243,5>", "<243,6>", "<243,7>", "<243,8>", "<243,9>"}) {
    const auto* e = find_entry(cat, id);
    REQUIRE_MESSAGE(e, id);
    CHECK(!e->label_only());
    CHECK(e->presentation->consistent());
  }
  CHECK(find_entry(cat, "⟨243,8⟩") == find_entry(cat, "<243, 8>"));
}

TEST_CASE("catalog presentations define groups of the stated order") {
  for (const auto& e : load_catalog(default_catalog_dir())) {
    if (e.label_only() || e.presentation->ngens() > 5) continue;
    INFO(e.id);
    long order = 1;
    for (int i = 0; i < e.presentation->ngens(); ++i) order *= 3;
    CHECK(oracle::presented_order(*e.presentation) == order);
  }
}

TEST_CASE("fingerprint mismatch names the entry and both values") {
  const std::string text = "ID <27,3>\n3 3\nC 2 1 : g3\nFINGERPRINT\n  tau1 (1^2,(2)^3)\nEND\n";
  try {
    parse_catalog_entry(text);
    FAIL("expected a mismatch");
  } catch (const CatalogError& e) {
    std::string m = e.what();
    CHECK(m.find("<27,3>") != std::string::npos);
    CHECK(m.find("expected") != std::string::npos);
    CHECK(m.find("computed (1^2)^4") != std::string::npos);
  }
}

TEST_CASE("inconsistent presentation is rejected") {
  CHECK_THROWS_AS(parse_catalog_entry("ID bad\n3 3\nC 2 1 : g3\nP 1 : g2\n"), CatalogError);
}

TEST_CASE("label-only entries carry no presentation") {
  auto e = parse_catalog_entry("ID <729,45>-#2;2\nFINGERPRINT\n  order 6561\nEND\n");
  CHECK(e.label_only());
}

TEST_CASE("catalog directory can be overridden from the environment") {
  namespace fs = std::filesystem;
  auto dir = fs::temp_directory_path() / "pgt_catalog_override";
  fs::create_directories(dir);
  fs::copy_file(fs::path(default_catalog_dir()) / "g27_3.pc", dir / "g27_3.pc", fs::copy_options::overwrite_existing);
  setenv("PGT_CATALOG_DIR", dir.c_str(), 1);
  auto cat = load_catalog(default_catalog_dir());
  unsetenv("PGT_CATALOG_DIR");
  CHECK(cat.size() == 1);
  CHECK(cat[0].id == "<27,3>");
}

TEST_CASE("coclass-1 family realizes every class and defect from 4 to 8") {
  for (int c = 4; c <= 8; ++c)
    for (int k = 0; k <= 1; ++k) {
      auto m = coclass1_member(c, k);
      REQUIRE_MESSAGE(m, "c=" << c << " k=" << k);
      CHECK(m->presentation->ngens() == c + 1);
      CHECK(m->presentation->consistent());
      // maximal class: lower central factors after the first are cyclic
      auto G = whole_group(m->presentation);
      CHECK(derived_subgroup(G).size_log() == c - 1);
    }
}
