// Samples the amoeba of 1 + z1 + z2 for growing t and prints how far the
// samples stay from the tropical line.

#include "tropix/tropix.hpp"

#include <cstdio>

int main() {
  using namespace tropix;
  LiftingFunction line({LatticePoint{0, 0}, LatticePoint{1, 0}, LatticePoint{0, 1}}, std::vector<Rational>(3, Rational(0)));
  auto cx = corner_locus(line);
  for (double t : {10.0, 100.0, 1000.0, 10000.0}) {
    auto s = sample_amoeba_curve(line, {1, 1, 1}, t, GridSpec{100, 48});
    std::printf("t=%-7g samples=%zu hausdorff=%.6f\n", t, s.points.size(), directed_hausdorff(s.points, cx));
  }
}
