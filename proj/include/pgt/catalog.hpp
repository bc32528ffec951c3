// Catalog of explicit presentations keyed by opaque identifiers, each checked
// against a stored invariant fingerprint at load time.
#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pgt/ati.hpp"
#include "pgt/ipad.hpp"
#include "pgt/pc.hpp"

namespace pgt {

struct CatalogError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Fingerprint {
  std::optional<long> order;
  std::optional<Ati> tau0;
  std::optional<std::vector<Ati>> tau1;  // compared as multisets
  std::optional<std::vector<Ati>> tau2;
  std::optional<Tkt> tkt;  // compared up to relabeling
  std::string tkt_name;
};

struct CatalogEntry {
  std::string id;
  std::string path;
  std::shared_ptr<const PcPresentation> presentation;  // null for label-only entries
  Fingerprint expected;
  bool label_only() const { return presentation == nullptr; }
};

// Invariants of the whole group of P, in fingerprint form.
Fingerprint compute_fingerprint(std::shared_ptr<const PcPresentation> P);
// Empty when every stored field agrees; otherwise one line per mismatch.
std::vector<std::string> fingerprint_mismatches(const Fingerprint& expected, const Fingerprint& computed);

// Parses one entry ("ID" line, optional presentation, FINGERPRINT stanza) and
// validates it. Throws CatalogError naming the entry.
CatalogEntry parse_catalog_entry(const std::string& text, const std::string& path = "<text>");
CatalogEntry load_catalog_entry(const std::string& path);
// All *.pc files of a directory, sorted by order then file name.
std::vector<CatalogEntry> load_catalog(const std::string& dir);

// $PGT_CATALOG_DIR if set, else the data/catalog directory of the source tree.
std::string default_catalog_dir();
std::string default_data_dir();

// Identifiers compare with ⟨ ⟩ and < > treated alike and spaces ignored.
std::string normalize_id(const std::string& id);
const CatalogEntry* find_entry(const std::vector<CatalogEntry>& catalog, const std::string& id);

// Maximal-class 3-group of class c and defect k, a = g1, s_j = g_{j+1}:
//   [s_j, a] = s_{j+1},  [s_2, s_1] = s_c^t (t != 0 iff k = 1),
//   a^3 = s_c^w,  s_1^3 = s_2^-3 s_3^-1 s_c^z,  s_j^3 = s_{j+1}^-3 s_{j+2}^-1.
// Returns the presentation text, or nullopt for parameters outside range.
std::string coclass1_presentation_text(int c, int t, int w, int z);

struct FamilyMember {
  int c = 0, k = 0;
  int t = 0, w = 0, z = 0;
  std::shared_ptr<const PcPresentation> presentation;
  Ipad ipad;  // with tau2
};
// Searches t, w, z in {0,1,2} for a consistent presentation whose first and
// second layer match the maximal-class pattern for (c, k). nullopt when no
// parameter choice realizes it.
std::optional<FamilyMember> coclass1_member(int c, int k);

}  // namespace pgt
