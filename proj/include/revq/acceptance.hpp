#ifndef REVQ_ACCEPTANCE_HPP
#define REVQ_ACCEPTANCE_HPP

#include <ostream>
#include <string>
#include <vector>

namespace revq::accept {

struct Result {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

// Runs every acceptance criterion (deterministic given the seed).
std::vector<Result> run_all(unsigned seed = 20240619);

// Prints one pass/fail line per criterion; returns 0 iff all pass.
int run_and_print(std::ostream& os, unsigned seed = 20240619);

}  // namespace revq::accept

#endif
