// Enumerates parametrized pc presentations of small 3-groups with G/G' of
// type (3,3), keeps the consistent ones and prints one presentation per
// fingerprint (order, tau1 accumulated, tau2, canonical TKT). Used to derive
// the presentations under data/catalog/.
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "pgt/ipad.hpp"
#include "pgt/pc.hpp"
#include "pgt/transfers.hpp"

using namespace pgt;

namespace {

std::string word(const std::vector<std::pair<int, int>>& w) {
  std::string s;
  for (auto [g, e] : w) {
    if (!e) continue;
    if (!s.empty()) s += "*";
    s += "g" + std::to_string(g);
    if (e != 1) s += "^" + std::to_string(e);
  }
  return s.empty() ? "1" : s;
}

struct Found {
  std::string text;
  int count = 0;
};

void consider(const std::string& text, std::map<std::string, Found>& seen) {
  auto P = std::make_shared<PcPresentation>(parse_presentation(text));
  if (!P->consistent()) return;
  auto G = whole_group(P);
  if (abelianization(G).logs != std::vector<int>{1, 1}) return;
  auto ip = ipad(G, true);
  auto t = canonicalize_tkt(tkt(G));
  std::string key = std::to_string(P->ngens()) + " " + format_layer(accumulate(ip.tau1)) + " " +
                    format_layer(*ip.tau2) + " " + format_tkt(t);
  auto& f = seen[key];
  if (f.count++ == 0) f.text = text;
}

}  // namespace

int main(int argc, char** argv) {
  std::string which = argc > 1 ? argv[1] : "all";
  std::map<std::string, Found> seen;
  if (which == "27" || which == "all") {
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        std::ostringstream s;
        s << "3 3\nC 2 1 : g3\nP 1 : " << word({{3, a}}) << "\nP 2 : " << word({{3, b}}) << "\n";
        consider(s.str(), seen);
      }
  }
  if (which == "81" || which == "all") {
    for (int a = 0; a < 3; ++a)
      for (int p1 = 0; p1 < 9; ++p1)
        for (int p2 = 0; p2 < 9; ++p2)
          for (int p3 = 0; p3 < 3; ++p3) {
            std::ostringstream s;
            s << "3 4\nC 2 1 : g3\nC 3 1 : g4\nC 3 2 : " << word({{4, a}}) << "\nP 1 : "
              << word({{3, p1 / 3}, {4, p1 % 3}}) << "\nP 2 : " << word({{3, p2 / 3}, {4, p2 % 3}})
              << "\nP 3 : " << word({{4, p3}}) << "\n";
            consider(s.str(), seen);
          }
  }
  if (which == "243" || which == "all") {
    for (int p1 = 0; p1 < 27; ++p1)
      for (int p2 = 0; p2 < 27; ++p2)
        for (int p3 = 0; p3 < 9; ++p3) {
          std::ostringstream s;
          s << "3 5\nC 2 1 : g3\nC 3 1 : g4\nC 3 2 : g5\nP 1 : "
            << word({{3, p1 / 9}, {4, p1 / 3 % 3}, {5, p1 % 3}}) << "\nP 2 : "
            << word({{3, p2 / 9}, {4, p2 / 3 % 3}, {5, p2 % 3}}) << "\nP 3 : "
            << word({{4, p3 / 3}, {5, p3 % 3}}) << "\n";
          consider(s.str(), seen);
        }
  }
  if (which == "729") {
    // coclass 2, class 4, abelian G'
    for (int abc = 0; abc < 27; ++abc)
      for (int p1 = 0; p1 < 27; ++p1)
        for (int p2 = 0; p2 < 27; ++p2)
          for (int p3 = 0; p3 < 3; ++p3) {
            std::ostringstream s;
            s << "3 6\nC 2 1 : g3\nC 3 1 : g4\nC 3 2 : g5\nC 4 1 : g6\nC 4 2 : " << word({{6, abc / 9}})
              << "\nC 5 1 : " << word({{6, abc / 3 % 3}}) << "\nC 5 2 : " << word({{6, abc % 3}})
              << "\nP 1 : " << word({{4, p1 / 9}, {5, p1 / 3 % 3}, {6, p1 % 3}})
              << "\nP 2 : " << word({{4, p2 / 9}, {5, p2 / 3 % 3}, {6, p2 % 3}})
              << "\nP 3 : " << word({{6, p3}}) << "\n";
            consider(s.str(), seen);
          }
  }
  for (auto& [k, f] : seen) std::cout << "== " << k << "  (" << f.count << " hits)\n" << f.text;
}
