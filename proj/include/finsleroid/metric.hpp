#pragma once

// Scalar layer of the metric module: the characteristic quadratic form B,
// the weight factor j, the Finsleroid metric function F (the norm replacing
// the Minkowski interval), the convenience scalars A and L, and the exact
// covariant vector (gradient of F^2/2).  The tensor-valued operations that
// build on these live in tensor.hpp.

#include "finsleroid/core.hpp"

#include <cmath>

namespace fsr {

/// Characteristic quadratic form
///   B = -(R^0 + g_minus*m)(R^0 + g_plus*m),  m = |**R**|.
/// Negative on the timelike sectors, positive on Spacelike, zero on the
/// isotropic cones.  Defined for every vector.
inline double quadratic_form_B(const CouplingParams& p, const EventVector& R) {
  const double m = spatial_norm(R);
  return -(R.r0 + p.g_minus * m) * (R.r0 + p.g_plus * m);
}

/// Convenience scalar A = R^0 - (g/2)m.  Satisfies A^2 - h^2 m^2 = -B
/// identically, which is what makes the angle formulas real-valued on the
/// timelike sector.
inline double func_A(const CouplingParams& p, const EventVector& R) {
  return R.r0 - 0.5 * p.g * spatial_norm(R);
}

/// Convenience scalar L = m - (g/2)R^0.
inline double func_L(const CouplingParams& p, const EventVector& R) {
  return spatial_norm(R) - 0.5 * p.g * R.r0;
}

namespace detail {
// The two linear factors of B: u_minus = R^0 + g_minus*m vanishes on the
// future cone, u_plus = R^0 + g_plus*m on the past cone.
struct ConeFactors {
  double u_minus, u_plus;
};
inline ConeFactors cone_factors(const CouplingParams& p, const EventVector& R) {
  const double m = spatial_norm(R);
  return {R.r0 + p.g_minus * m, R.r0 + p.g_plus * m};
}
inline bool is_isotropic(SectorLabel s) {
  return s == SectorLabel::FutureIsotropic || s == SectorLabel::PastIsotropic;
}
}  // namespace detail

/// Weight factor j = |u_minus/u_plus|^{-G/4}.  Equals 1 at g = 0 and on the
/// time axis; singular (0 or infinity) on the isotropic cones.
inline double weight_j(const CouplingParams& p, const EventVector& R) {
  if (detail::is_isotropic(classify_sector(p, R)))
    throw singularity_error("weight_j: isotropic vector, the ratio power in (A.13) degenerates");
  const auto [um, up] = detail::cone_factors(p, R);
  return std::pow(std::abs(um / up), -0.25 * p.G);
}

/// The Finsleroid metric function
///   F = |u_minus|^{G_plus/2} * |u_plus|^{-G_minus/2} = sqrt(|B|) * j.
/// Positively homogeneous of degree 1; both exponents lie in (0,1) for every
/// g, so F extends continuously to 0 on the isotropic cones.  At g = 0 it
/// reduces to sqrt(|(R^0)^2 - m^2|).
inline double fmf_F(const CouplingParams& p, const EventVector& R) {
  const double m = spatial_norm(R);
  if (R.r0 == 0.0 && m == 0.0)
    throw domain_error("fmf_F: the zero vector is outside the domain (A.12)");
  if (detail::is_isotropic(classify_sector(p, R))) return 0.0;
  const auto [um, up] = detail::cone_factors(p, R);
  return std::pow(std::abs(um), 0.5 * p.G_plus) * std::pow(std::abs(up), -0.5 * p.G_minus);
}

/// Exact covariant vector P_p = (1/2) dF^2/dR^p.  Closed form (valid on any
/// non-isotropic sector, with q = -B kept signed):
///   P_0 = F^2 (R^0 - g m)/q,   P_a = -F^2 R^a / q.
/// Satisfies the Euler relation P_p R^p = F^2 and g_pq R^q = P_p.
inline MomentumCovector covector_of(const CouplingParams& p, const EventVector& R) {
  if (detail::is_isotropic(classify_sector(p, R)))
    throw singularity_error("covector_of: isotropic vector, gradient of F^2/2 undefined on the cone");
  const double q = -quadratic_form_B(p, R);
  const double m = spatial_norm(R);
  const double F = fmf_F(p, R);
  const double F2 = F * F;
  return MomentumCovector(F2 * (R.r0 - p.g * m) / q, (-F2 / q) * R.r);
}

}  // namespace fsr
