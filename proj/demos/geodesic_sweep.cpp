// Sweep the coupling g and watch one geodesic deform: the same two
// endpoints are joined for each g, and the mid-curve non-planarity grows
// from exactly zero (straight pseudoeuclidean chords) as |g| increases.
// Output is plot-ready CSV on stdout.

#include <finsleroid/finsleroid.hpp>

#include <iostream>

int main() {
  using namespace fsr;
  Vec r1(3), r2(3);
  r1 << 1.0, 0.0, 0.0;
  r2 << 1.0, 1.0, 0.5;
  const EventVector R1(3.0, r1), R2(6.0, r2);

  std::cout << "g,alpha,delta_s,b,F_mid,X_mid,X_max\n";
  for (int k = 0; k <= 15; ++k) {
    const double g = 0.1 * k;
    const CouplingParams p = derive_params(g);
    const GeodesicCurve c = connect(p, R1, R2);
    double x_max = 0.0;
    for (int i = 1; i < 64; ++i) {
      const double s = c.delta_s * i / 64.0;
      x_max = std::max(x_max, std::abs(nonplanarity(c, s)));
    }
    const double smid = 0.5 * c.delta_s;
    std::cout << fmt_double(g) << ',' << fmt_double(c.alpha) << ',' << fmt_double(c.delta_s)
              << ',' << fmt_double(c.b) << ',' << fmt_double(fmf_F(p, eval_point(c, smid)))
              << ',' << fmt_double(nonplanarity(c, smid)) << ',' << fmt_double(x_max) << '\n';
  }
  return 0;
}
