#include <iostream>

#include "csts/fixture.hpp"

int main() {
  const auto d = csts::fixture::build_table1_fixture();
  const auto problems = csts::fixture::validate(d);
  for (const auto& p : problems) std::cerr << "fixture: " << p << '\n';
  if (!problems.empty()) return 1;
  std::cout << "fixture ok (" << d.size() << " instances, " << csts::fixture::kLattice.size() << " patterns)\n";
  return 0;
}
