// Standalone certificate checker: afcheck cert.json [more.json ...]
// Prints one pass/fail line per file; exit 0 iff all pass.

#include <fstream>
#include <iostream>

#include "checker.hpp"

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: afcheck cert.json [...]\n";
    return 1;
  }
  bool all = true;
  for (int i = 1; i < argc; ++i) {
    std::ifstream in(argv[i]);
    afcheck::Result r{false, "cannot read file"};
    if (in) {
      try {
        r = afcheck::check(nlohmann::json::parse(in));
      } catch (const std::exception& e) {
        r = {false, std::string("malformed JSON: ") + e.what()};
      }
    }
    std::cout << argv[i] << ": " << (r.ok ? "pass: " : "fail: ") << r.message << "\n";
    all = all && r.ok;
  }
  return all ? 0 : 1;
}
