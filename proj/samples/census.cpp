// Counts primitive pieces of the maximal complexes for small (n, d) and
// compares with the normalized volume of the dilated simplex.

#include "tropix/tropix.hpp"

#include <iostream>

int main() {
  using namespace tropix;
  std::cout << "n d pieces volume\n";
  for (int n = 1; n <= 2; ++n)
    for (int d = 1; d <= 4; ++d) {
      auto cx = corner_locus(build_maximal_lifting(n, d));
      std::cout << n << ' ' << d << ' ' << primitive_pieces(cx).size() << ' ' << normalized_volume(dilated_simplex(n, d)) << '\n';
    }
}
