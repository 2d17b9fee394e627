// Scan the coupling g and report the curvature diagnostics at a fixed
// future-timelike point: the fitted tangent-space constant S*, its
// predicted value g^2/4, the fit residual, and the implied indicatrix
// curvature -(1 + g^2/4).  CSV on stdout.

#include <finsleroid/finsleroid.hpp>

#include <iostream>

int main() {
  using namespace fsr;
  Vec r(3);
  r << 0.8, 0.3, -0.2;
  const EventVector R(2.5, r);

  std::cout << "g,s_star,g2_over_4,fit_residual,r_indicatrix,cartan_norm2\n";
  for (int k = 0; k <= 12; ++k) {
    const double g = 0.125 * k;
    const CouplingParams p = derive_params(g);
    const CurvatureFit fit = curvature_fit(p, R);
    const CartanTensor C = cartan_tensor(p, R);
    const MetricTensor gt = metric_tensor(p, R);
    const double F = fmf_F(p, R);
    const double ctct = C.contraction.dot(gt.inverse * C.contraction) * F * F;
    std::cout << fmt_double(g) << ',' << fmt_double(fit.s_star) << ','
              << fmt_double(g * g / 4.0) << ',' << fmt_double(fit.residual) << ','
              << fmt_double(fit.r_indicatrix) << ',' << fmt_double(ctct) << '\n';
  }
  return 0;
}
