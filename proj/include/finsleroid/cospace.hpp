#pragma once

// The dual (momentum) space: the Hamiltonian norm H on covectors, its
// auxiliary scalars, and the co-space angle / scalar product / distance.
// Structurally H(g; X) = F(-g; X) on numeric tuples — the whole dual theory
// is the g -> -g mirror of the vector side.

#include "finsleroid/core.hpp"
#include "finsleroid/metric.hpp"

#include <cmath>

namespace fsr {

namespace detail {
// The two linear factors of B_hat: f1 = P_0 - g_plus*|**P**| vanishes on
// the future co-cone, f2 = P_0 - g_minus*|**P**| on the past co-cone.
// (1/g_sup_plus = g_plus and 1/g_sup_minus = g_minus.)
struct CoConeFactors {
  double f1, f2;
};
inline CoConeFactors co_cone_factors(const CouplingParams& p, const MomentumCovector& P) {
  const double m = spatial_norm(P);
  return {P.p0 - p.g_plus * m, P.p0 - p.g_minus * m};
}
}  // namespace detail

/// The Finsleroid Hamiltonian function
///   H = |P_0 - |**P**|/g_sup_plus|^{G_sup_plus/2}
///     * |P_0 - |**P**|/g_sup_minus|^{-G_sup_minus/2}.
/// Positively homogeneous of degree 1; at g = 0 it reduces to
/// sqrt(|P_0^2 - |**P**|^2|).
inline double fhf_H(const CouplingParams& p, const MomentumCovector& P) {
  const double m = spatial_norm(P);
  if (P.p0 == 0.0 && m == 0.0)
    throw domain_error("fhf_H: the zero covector is outside the domain (A.14)");
  const auto [f1, f2] = detail::co_cone_factors(p, P);
  return std::pow(std::abs(f1), 0.5 * p.G_sup_plus) *
         std::pow(std::abs(f2), -0.5 * p.G_sup_minus);
}

/// The auxiliary scalars of one (g, P) evaluation.
struct CoScalars {
  double B_hat;  // -(P_0^2 + g P_0 |**P**| - |**P**|^2)
  double j_hat;  // |f1/f2|^{G/4}; H = sqrt(|B_hat|) * j_hat
  double H;
  double A_hat;  // P_0 + (g/2)|**P**|
  double L_hat;  // |**P**| + (g/2)P_0
};

/// All five scalars at once.  j_hat is singular on the co-isotropic cones
/// and raises there; the others are defined everywhere.
inline CoScalars co_scalars(const CouplingParams& p, const MomentumCovector& P) {
  const double m = spatial_norm(P);
  if (P.p0 == 0.0 && m == 0.0)
    throw domain_error("co_scalars: the zero covector is outside the domain (A.11)");
  CoScalars out;
  out.B_hat = -(P.p0 * P.p0 + p.g * P.p0 * m - m * m);
  out.A_hat = P.p0 + 0.5 * p.g * m;
  out.L_hat = m + 0.5 * p.g * P.p0;
  out.H = fhf_H(p, P);
  const SectorLabel s = classify_cosector(p, P);
  if (s == SectorLabel::FutureIsotropic || s == SectorLabel::PastIsotropic)
    throw singularity_error("co_scalars: co-isotropic covector, j_hat degenerates (A.15)");
  const auto [f1, f2] = detail::co_cone_factors(p, P);
  out.j_hat = std::pow(std::abs(f1 / f2), 0.25 * p.G);
  return out;
}

namespace detail {
inline void require_future_cotimelike(const CouplingParams& p, const MomentumCovector& P,
                                      const char* who) {
  if (P.p0 == 0.0 && spatial_norm(P) == 0.0)
    throw domain_error(std::string(who) + ": the zero covector has no sector (A.2)");
  const SectorLabel s = classify_cosector(p, P);
  if (s != SectorLabel::FutureTimelike)
    throw domain_error(std::string(who) + ": covector must be future co-timelike, got sector " +
                       to_string(s));
}
}  // namespace detail

/// Co-space angle between two future co-timelike covectors:
///   alpha_hat = (1/h) arccosh[(A_hat1*A_hat2 - h^2 P1.P2) / sqrt(|B_hat1 B_hat2|)].
/// The identity A_hat^2 - h^2 |**P**|^2 = -B_hat makes the argument exactly 1
/// for equal arguments; it is >= 1 on the whole co-timelike sector and only
/// rounding can push it below, which is clamped within 1e-12.
inline double co_angle(const CouplingParams& p, const MomentumCovector& P1,
                       const MomentumCovector& P2) {
  detail::require_future_cotimelike(p, P1, "co_angle");
  detail::require_future_cotimelike(p, P2, "co_angle");
  const CoScalars c1 = co_scalars(p, P1);
  const CoScalars c2 = co_scalars(p, P2);
  double arg = (c1.A_hat * c2.A_hat - p.h * p.h * P1.p.dot(P2.p)) /
               std::sqrt(std::abs(c1.B_hat) * std::abs(c2.B_hat));
  if (arg < 1.0) {
    if (arg > 1.0 - 1e-12)
      arg = 1.0;
    else
      throw domain_error("co_angle: arccosh argument < 1, covectors outside mutual domain (2.24)");
  }
  return std::acosh(arg) / p.h;
}

/// Co-scalar product H1 H2 cosh(alpha_hat); reduces to H^2 for equal
/// arguments.
inline double co_scalar_product(const CouplingParams& p, const MomentumCovector& P1,
                                const MomentumCovector& P2) {
  return fhf_H(p, P1) * fhf_H(p, P2) * std::cosh(co_angle(p, P1, P2));
}

/// Co-space two-point distance sqrt(H1^2 + H2^2 - 2 H1 H2 cosh(alpha_hat));
/// symmetric under swapping the arguments.
inline double co_distance(const CouplingParams& p, const MomentumCovector& P1,
                          const MomentumCovector& P2) {
  const double H1 = fhf_H(p, P1);
  const double H2 = fhf_H(p, P2);
  const double rad = H1 * H1 + H2 * H2 - 2.0 * H1 * H2 * std::cosh(co_angle(p, P1, P2));
  if (rad < 0.0) {
    const double scale = std::max(H1 * H1, H2 * H2);
    if (rad > -1e-12 * scale) return 0.0;
    throw domain_error("co_distance: negative radicand, covectors not joinable (2.26)");
  }
  return std::sqrt(rad);
}

/// Relative residual |H(g; covector_of(g;R)) - F(g;R)| / F(g;R) of the
/// Legendre-type duality.  Tested, not assumed: a violation would be
/// reported by the verification suite.
inline double legendre_duality_check(const CouplingParams& p, const EventVector& R) {
  const double F = fmf_F(p, R);
  return std::abs(fhf_H(p, covector_of(p, R)) - F) / F;
}

}  // namespace fsr
