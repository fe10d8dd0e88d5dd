// Betti numbers of the compactified base and the surface invariants.

#include "tropix/tropix.hpp"

#include <iostream>

int main() {
  using namespace tropix;
  for (auto [n, d] : {std::pair{1, 3}, std::pair{1, 4}, std::pair{2, 4}}) {
    auto h = base_homology(stratify(build_maximal_lifting(n, d)));
    std::cout << "(" << n << "," << d << ") betti";
    for (auto b : h.betti) std::cout << ' ' << b;
    std::cout << (h.torsion_free() ? "" : " (torsion)") << '\n';
  }
  for (int d = 1; d <= 6; ++d) {
    auto r = hypersurface_invariants(2, d);
    std::cout << "surface d=" << d << " p_g=" << r.p_g << " chi=" << *r.chi << " sigma=" << *r.sigma << '\n';
  }
}
