#include "pgt/catalog.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pgt/transfers.hpp"

#ifndef PGT_DATA_DIR
#define PGT_DATA_DIR "data"
#endif

namespace pgt {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

long ipow(int p, int e) {
  long r = 1;
  while (e-- > 0) r *= p;
  return r;
}

}  // namespace

Fingerprint compute_fingerprint(std::shared_ptr<const PcPresentation> P) {
  auto G = whole_group(P);
  Fingerprint f;
  f.order = ipow(P->prime(), P->ngens());
  auto ip = ipad(G, true);
  f.tau0 = ip.tau0;
  f.tau1 = ip.tau1;
  f.tau2 = ip.tau2;
  if (ip.tau0.logs == std::vector<int>{1, 1}) f.tkt = tkt(G);
  return f;
}

std::vector<std::string> fingerprint_mismatches(const Fingerprint& e, const Fingerprint& c) {
  std::vector<std::string> out;
  if (e.order && e.order != c.order)
    out.push_back("order: expected " + std::to_string(*e.order) + ", computed " + std::to_string(c.order.value_or(0)));
  if (e.tau0 && (!c.tau0 || *e.tau0 != *c.tau0))
    out.push_back("tau0: expected " + show_ati(*e.tau0) + ", computed " + (c.tau0 ? show_ati(*c.tau0) : "?"));
  if (e.tau1 && (!c.tau1 || accumulate(*e.tau1) != accumulate(*c.tau1)))
    out.push_back("tau1: expected " + format_layer(*e.tau1) + ", computed " +
                  (c.tau1 ? format_layer(*c.tau1) : "?"));
  if (e.tau2 && (!c.tau2 || accumulate(*e.tau2) != accumulate(*c.tau2)))
    out.push_back("tau2: expected " + format_layer(*e.tau2) + ", computed " +
                  (c.tau2 ? format_layer(*c.tau2) : "?"));
  if (e.tkt && (!c.tkt || canonicalize_tkt(*e.tkt) != canonicalize_tkt(*c.tkt)))
    out.push_back("tkt: expected " + format_tkt(*e.tkt) + ", computed " + (c.tkt ? format_tkt(*c.tkt) : "?"));
  return out;
}

CatalogEntry parse_catalog_entry(const std::string& text, const std::string& path) {
  CatalogEntry entry;
  entry.path = path;
  std::istringstream in(text);
  std::string line;
  bool in_stanza = false, has_header = false;
  auto fail = [&](const std::string& why) {
    return CatalogError("catalog entry " + (entry.id.empty() ? path : entry.id) + ": " + why);
  };
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (in_stanza) {
      if (line == "END") {
        in_stanza = false;
        continue;
      }
      auto sp = line.find(' ');
      std::string key = line.substr(0, sp);
      std::string val = sp == std::string::npos ? "" : trim(line.substr(sp + 1));
      try {
        if (key == "order") {
          entry.expected.order = std::stol(val);
        } else if (key == "tau0") {
          entry.expected.tau0 = parse_ati(val);
        } else if (key == "tau1") {
          entry.expected.tau1 = parse_layer(val, AtiNotation::Log);
        } else if (key == "tau2") {
          entry.expected.tau2 = parse_layer(val, AtiNotation::Log);
        } else if (key == "tkt") {
          std::istringstream v(val);
          std::string k, name;
          v >> k >> name;
          entry.expected.tkt = parse_tkt(k);
          entry.expected.tkt_name = name;
        } else {
          throw fail("unknown fingerprint field '" + key + "'");
        }
      } catch (const CatalogError&) {
        throw;
      } catch (const std::exception& ex) {
        throw fail("bad fingerprint field '" + key + "': " + ex.what());
      }
      continue;
    }
    if (line == "FINGERPRINT") {
      in_stanza = true;
    } else if (line.rfind("ID ", 0) == 0) {
      entry.id = trim(line.substr(3));
    } else if (!has_header && std::isdigit(static_cast<unsigned char>(line[0]))) {
      has_header = true;
    }
  }
  if (in_stanza) throw fail("FINGERPRINT stanza without END");
  if (entry.id.empty()) throw fail("missing ID line");
  if (!has_header) return entry;  // label-only
  std::shared_ptr<PcPresentation> P;
  try {
    P = std::make_shared<PcPresentation>(parse_presentation(text));
  } catch (const PcError& ex) {
    throw fail(ex.what());
  }
  if (auto bad = P->find_inconsistency()) throw fail("inconsistent presentation: " + bad->description);
  entry.presentation = P;
  auto computed = compute_fingerprint(entry.presentation);
  auto diff = fingerprint_mismatches(entry.expected, computed);
  if (!diff.empty()) {
    std::string msg = "fingerprint mismatch";
    for (const auto& d : diff) msg += "; " + d;
    throw fail(msg);
  }
  return entry;
}

CatalogEntry load_catalog_entry(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw CatalogError("cannot open catalog file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_catalog_entry(ss.str(), path);
}

std::vector<CatalogEntry> load_catalog(const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw CatalogError("catalog directory not found: " + dir);
  std::vector<std::string> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ".pc") files.push_back(e.path().string());
  std::sort(files.begin(), files.end());
  std::vector<CatalogEntry> out;
  for (const auto& f : files) out.push_back(load_catalog_entry(f));
  std::stable_sort(out.begin(), out.end(), [](const CatalogEntry& a, const CatalogEntry& b) {
    return a.expected.order.value_or(0) < b.expected.order.value_or(0);
  });
  return out;
}

std::string default_data_dir() {
  if (const char* d = std::getenv("PGT_DATA_DIR")) return d;
  return PGT_DATA_DIR;
}

std::string default_catalog_dir() {
  if (const char* d = std::getenv("PGT_CATALOG_DIR")) return d;
  return default_data_dir() + "/catalog";
}

std::string normalize_id(const std::string& id) {
  std::string out;
  for (std::size_t i = 0; i < id.size();) {
    if (id.compare(i, 3, "⟨") == 0) {
      out += '<';
      i += 3;
    } else if (id.compare(i, 3, "⟩") == 0) {
      out += '>';
      i += 3;
    } else if (id.compare(i, 3, "−") == 0) {
      out += '-';
      i += 3;
    } else {
      if (id[i] != ' ') out += id[i];
      ++i;
    }
  }
  return out;
}

const CatalogEntry* find_entry(const std::vector<CatalogEntry>& catalog, const std::string& id) {
  auto key = normalize_id(id);
  for (const auto& e : catalog)
    if (normalize_id(e.id) == key) return &e;
  return nullptr;
}

std::string coclass1_presentation_text(int c, int t, int w, int z) {
  // generator numbers: a = 1, s_j = j + 1, s_c = c + 1
  const int n = c + 1;
  auto s = [](int j) { return "g" + std::to_string(j + 1); };
  auto pow = [](const std::string& g, int e) { return e == 1 ? g : g + "^" + std::to_string(e); };
  std::ostringstream out;
  out << "3 " << n << "\n";
  for (int j = 1; j < c; ++j) out << "C " << j + 1 << " 1 : " << s(j + 1) << "\n";
  if (t) out << "C 3 2 : " << pow(s(c), t) << "\n";
  if (w) out << "P 1 : " << pow(s(c), w) << "\n";
  for (int j = 1; j <= c; ++j) {
    std::vector<std::string> parts;
    if (j + 1 <= c) parts.push_back(s(j + 1) + "^-3");
    if (j + 2 <= c) parts.push_back(s(j + 2) + "^-1");
    if (j == 1 && z) parts.push_back(pow(s(c), z));
    if (parts.empty()) continue;
    out << "P " << j + 1 << " : ";
    for (std::size_t i = 0; i < parts.size(); ++i) out << (i ? "*" : "") << parts[i];
    out << "\n";
  }
  return out.str();
}

std::optional<FamilyMember> coclass1_member(int c, int k) {
  if (c < 2 || k < 0 || k > 1) return std::nullopt;
  std::vector<Ati> want1{nearly_homocyclic(c - k), Ati({1, 1}), Ati({1, 1}), Ati({1, 1})};
  std::vector<Ati> want2{nearly_homocyclic(c - 1)};
  for (int t = (k ? 1 : 0); t <= (k ? 2 : 0); ++t)
    for (int w = 0; w < 3; ++w)
      for (int z = 0; z < 3; ++z) {
        auto P = std::make_shared<PcPresentation>(parse_presentation(coclass1_presentation_text(c, t, w, z)));
        if (!P->consistent()) continue;
        auto G = whole_group(P);
        auto ip = ipad(G, true);
        if (ip.tau0.logs != std::vector<int>{1, 1}) continue;
        if (accumulate(ip.tau1) != accumulate(want1) || accumulate(*ip.tau2) != accumulate(want2)) continue;
        return FamilyMember{c, k, t, w, z, P, ip};
      }
  return std::nullopt;
}

}  // namespace pgt
