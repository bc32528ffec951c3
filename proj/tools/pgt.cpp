// Command-line front end.
//   exit 0: success; 1: domain verdict under --strict (or failed validation);
//   2: usage or input error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "pgt/catalog.hpp"
#include "pgt/classifier.hpp"
#include "pgt/correspondence.hpp"
#include "pgt/fielddata.hpp"
#include "pgt/tower.hpp"
#include "pgt/transfers.hpp"

using namespace pgt;
namespace fs = std::filesystem;

namespace {

void print_json(const nlohmann::json& j) { std::cout << j.dump(2) << "\n"; }

int cmd_classify(const std::string& text, bool json) {
  auto ip = parse_ipad(text);
  auto c = classify_ipad(ip);
  if (json) print_json(to_json(c));
  else std::cout << "IPAD " << format_ipad(ip) << "\n" << describe(c);
  return 0;
}

int cmd_sift(const std::string& path, bool strict, bool json) {
  auto rep = sift(load_sift_csv(path));
  if (json) {
    print_json(to_json(rep));
  } else {
    for (const auto& r : rep.results) {
      std::cout << r.record.id << " d=" << r.record.d << ": " << r.status;
      if (r.classification && r.status == "malformed") {
        const auto& c = *r.classification;
        if (c.offending) std::cout << ", offending " << show_ati(*c.offending);
        else if (!c.offending_candidates.empty()) {
          std::cout << ", offending one of";
          for (const auto& a : c.offending_candidates) std::cout << " " << show_ati(a);
        }
      }
      if (!r.message.empty()) std::cout << " (" << r.message << ")";
      std::cout << "\n";
    }
    std::cout << rep.ok << " ok, " << rep.malformed << " malformed, " << rep.unsupported << " unsupported, "
              << rep.errors << " errors\n";
  }
  return strict && (rep.malformed + rep.errors) > 0 ? 1 : 0;
}

int cmd_complete(const std::string& ipad_text, const std::string& partial, bool json) {
  auto r = complete_kappa(parse_partial_tkt(partial), parse_ipad(ipad_text));
  if (json) {
    print_json(to_json(r));
    return 0;
  }
  std::cout << "completions:";
  for (const auto& t : r.completions) std::cout << " " << format_tkt(t);
  std::cout << "\nname: " << r.tkt_name << "\n(c,k):";
  for (auto [c, k] : r.class_defect_options) std::cout << " (" << c << "," << k << ")";
  std::cout << "\n";
  for (const auto& t : r.completions)
    std::cout << format_tkt(t) << ": Taussky " << taussky_annotations(t) << "\n";
  for (const auto& n : r.notes) std::cout << "note: " << n << "\n";
  return 0;
}

int cmd_tower(const std::string& path, const std::string& family, const std::string& kappa, bool json) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  nlohmann::json j;
  in >> j;
  auto t2 = ipad2_from_json(j);
  std::optional<Tkt> k;
  if (!kappa.empty()) k = parse_tkt(kappa);
  TowerDecision d;
  if (family.empty()) d = decide_tower(t2);
  else if (family == "capitulation") d = decide_capitulation(t2);
  else if (family == "E") d = decide_length_E(t2, std::nullopt, k);
  else if (family == "H4") d = decide_length_H4(t2);
  else throw std::runtime_error("unknown family " + family);
  if (json) print_json(to_json(d));
  else std::cout << describe(d);
  return 0;
}

int cmd_invariants(const std::string& path, const std::string& depth, bool json) {
  auto P = std::make_shared<const PcPresentation>(load_presentation(path));
  if (auto f = P->find_inconsistency()) throw std::runtime_error("inconsistent presentation: " + f->description);
  auto G = whole_group(P);
  nlohmann::json j;
  j["order"] = "3^" + std::to_string(G.size_log());
  auto ip = ipad(G, true);
  j["ipad"] = to_json(ip);
  auto k = tkt(G);
  j["tkt"] = format_tkt(k);
  if (depth == "2") j["ipad2"] = to_json(ipad2(G));
  else if (depth == "2star") j["ipad2"] = to_json(ipad2_star(G));
  else if (depth == "3") j["ipad3"] = to_json(ipad3(G));
  else if (depth != "1") throw std::runtime_error("depth must be 1, 2, 2star or 3");
  if (json) {
    print_json(j);
    return 0;
  }
  std::cout << "order: " << P->prime() << "^" << G.size_log() << "\n";
  std::cout << "tau0: " << show_ati(ip.tau0) << "\n";
  std::cout << "tau1: " << format_layer(ip.tau1) << "\n";
  std::cout << "tau1 accumulated: " << format_layer(accumulate(ip.tau1)) << "\n";
  if (ip.tau2) std::cout << "tau2: " << format_layer(*ip.tau2) << "\n";
  std::cout << "tkt: " << format_tkt(k);
  if (k.kappa.size() <= 8 && std::none_of(k.kappa.begin(), k.kappa.end(), [](int v) { return v < 0; }))
    std::cout << " (canonical " << format_tkt(canonicalize_tkt(k)) << ")";
  std::cout << "\n";
  if (depth == "2" || depth == "2star") std::cout << "ipad2: " << format_ipad2(depth == "2" ? ipad2(G) : ipad2_star(G)) << "\n";
  if (depth == "3") std::cout << "ipad3: " << to_json(ipad3(G)).dump() << "\n";
  return 0;
}

int cmd_rank3(const std::string& t1, const std::string& t2, const std::string& t3, bool json) {
  auto recs = load_table2(t2);
  attach_class_groups(recs, load_table1(t1));
  auto rows = regenerate_table3(recs);
  auto rep = nonisomorphism_report(recs);
  std::vector<std::string> diff;
  if (!t3.empty()) diff = compare_table3(load_table3(t3), rows);
  if (json) {
    nlohmann::json j;
    j["table"] = nlohmann::json::array();
    for (const auto& r : recs) j["table"].push_back(to_json(classify_record(r)));
    j["report"] = to_json(rep);
    if (!t3.empty()) j["discrepancies"] = diff;
    print_json(j);
  } else {
    std::cout << "no d";
    for (const auto& c : table3_columns()) std::cout << " " << c;
    std::cout << " polarization state\n";
    for (const auto& r : rows) {
      std::cout << r.no << " " << r.d;
      for (int c : r.counts) std::cout << " " << c;
      std::cout << " " << r.polarization << " " << r.state << "\n";
    }
    std::cout << describe(rep);
    if (!t3.empty()) {
      std::cout << diff.size() << " discrepancies against the published table\n";
      for (const auto& d : diff) std::cout << "  " << d << "\n";
    }
  }
  return rep.all_distinct && rep.problems.empty() && diff.empty() ? 0 : 1;
}

int cmd_catalog_validate(const std::string& dir, bool json) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ".pc") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  int bad = 0;
  nlohmann::json j = nlohmann::json::array();
  for (const auto& f : files) {
    try {
      auto e = load_catalog_entry(f.string());
      j.push_back({{"file", f.filename().string()}, {"id", e.id}, {"ok", true}});
      if (!json) std::cout << "ok   " << e.id << "\n";
    } catch (const std::exception& ex) {
      ++bad;
      j.push_back({{"file", f.filename().string()}, {"ok", false}, {"error", ex.what()}});
      if (!json) std::cout << "FAIL " << f.filename().string() << ": " << ex.what() << "\n";
    }
  }
  if (json) print_json(j);
  else std::cout << files.size() - bad << " of " << files.size() << " entries valid\n";
  return bad ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transfer invariants of finite 3-groups and decisions built on them"};
  app.require_subcommand(1);
  bool json = false;
  app.add_flag("--json", json, "emit JSON");

  std::string ipad_text, partial, input, family, kappa, presentation, depth = "1";
  std::string table1, table2, table3, catalog_dir;
  bool strict = false;

  auto* classify = app.add_subcommand("classify", "match an IPAD against the class/coclass patterns");
  classify->add_option("--ipad", ipad_text, "IPAD, e.g. \"[1^2;(21,(1^2)^3)]\"")->required();

  auto* sift_cmd = app.add_subcommand("sift", "flag malformed IPADs in a CSV file");
  sift_cmd->add_option("--input", input, "CSV file")->required()->check(CLI::ExistingFile);
  sift_cmd->add_flag("--strict", strict, "exit 1 when a row is malformed");

  auto* complete = app.add_subcommand("complete-kappa", "complete a partial transfer kernel type");
  complete->add_option("--ipad", ipad_text, "ordered IPAD")->required();
  complete->add_option("--partial", partial, "partial kernel type, e.g. \"(3,3,*,*)\"")->required();

  auto* tower = app.add_subcommand("tower", "tower group and length from an iterated IPAD (JSON)");
  tower->add_option("--input", input, "JSON file")->required()->check(CLI::ExistingFile);
  tower->add_option("--family", family, "capitulation|E|H4")->check(CLI::IsMember({"capitulation", "E", "H4"}));
  tower->add_option("--kappa", kappa, "first layer kernel type (checked for family E)");

  auto* group = app.add_subcommand("group", "group computations");
  group->require_subcommand(1);
  auto* inv = group->add_subcommand("invariants", "TTT, TKT and IPADs of a presentation");
  inv->add_option("--presentation", presentation, "presentation file")->required()->check(CLI::ExistingFile);
  inv->add_option("--depth", depth, "1|2|2star|3")->check(CLI::IsMember({"1", "2", "2star", "3"}));

  auto* rank3 = app.add_subcommand("rank3", "fields of 3-rank three");
  rank3->require_subcommand(1);
  auto* report = rank3->add_subcommand("report", "accumulated IPADs and non-isomorphism report");
  report->add_option("--table1", table1, "class group table")->required()->check(CLI::ExistingFile);
  report->add_option("--table2", table2, "ordered IPAD table")->required()->check(CLI::ExistingFile);
  report->add_option("--table3", table3, "published accumulated table to compare with")->check(CLI::ExistingFile);

  auto* catalog = app.add_subcommand("catalog", "group catalog");
  catalog->require_subcommand(1);
  auto* validate = catalog->add_subcommand("validate", "recompute every stored fingerprint");
  validate->add_option("--dir", catalog_dir, "catalog directory (default: PGT_CATALOG_DIR or data/catalog)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*classify) return cmd_classify(ipad_text, json);
    if (*sift_cmd) return cmd_sift(input, strict, json);
    if (*complete) return cmd_complete(ipad_text, partial, json);
    if (*tower) return cmd_tower(input, family, kappa, json);
    if (*inv) return cmd_invariants(presentation, depth, json);
    if (*report) return cmd_rank3(table1, table2, table3, json);
    if (*validate) return cmd_catalog_validate(catalog_dir.empty() ? default_catalog_dir() : catalog_dir, json);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
