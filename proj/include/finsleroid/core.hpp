#pragma once

// Core value types for the Finsleroid-deformed special-relativistic space:
// the coupling-parameter algebra derived from the single real constant g,
// event vectors / momentum covectors of arbitrary spatial dimension, and
// the five-way sector classification induced by the characteristic
// quadratic form.  Everything here is immutable after construction and all
// functions are pure, so concurrent use from any number of threads is safe.

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace fsr {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// ---------------------------------------------------------------------------
// Error hierarchy.  Messages name the violated condition, including the
// reference tag of the identity or formula involved, so CLI consumers can
// map failures back to the catalog.
// ---------------------------------------------------------------------------

/// Base class for all library errors.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input lies outside the mathematical domain of the operation
/// (wrong sector, negative radicand, zero vector, ...).
class domain_error : public error {
 public:
  using error::error;
};

/// Input sits on a singular locus (isotropic cone, quasi-cone) where a
/// factor of the defining expression degenerates to 0 or infinity.
class singularity_error : public error {
 public:
  using error::error;
};

/// A finite-difference evaluation could not meet its accuracy target,
/// typically because the step had to leave the valid sector.
class accuracy_error : public error {
 public:
  using error::error;
};

/// A caller-supplied quantity violates a stated precondition
/// (e.g. a non-unit initial velocity).
class precondition_error : public error {
 public:
  using error::error;
};

// ---------------------------------------------------------------------------
// Coupling-parameter algebra.
// ---------------------------------------------------------------------------

/// All derived constants of the theory, computed once from the coupling g.
///
/// Conventions:
///   h       = sqrt(1 + g^2/4)            (>= 1, even in g)
///   G       = g/h                        (odd in g, |G| < 2)
///   g_plus  = -g/2 + h,  g_minus = -g/2 - h      (roots: product -1, sum -g)
///   g_sup_plus  = 1/g_plus  = -g_minus =  g/2 + h
///   g_sup_minus = 1/g_minus = -g_plus  =  g/2 - h
///   G_plus  = g_plus/h,  G_minus  = g_minus/h        (difference exactly 2)
///   G_sup_plus = g_sup_plus/h, G_sup_minus = g_sup_minus/h (difference 2)
struct CouplingParams {
  double g = 0.0;
  double h = 1.0;
  double G = 0.0;
  double g_plus = 1.0, g_minus = -1.0;
  double G_plus = 1.0, G_minus = -1.0;
  double g_sup_plus = 1.0, g_sup_minus = -1.0;
  double G_sup_plus = 1.0, G_sup_minus = -1.0;
};

/// Build the full constant set from the coupling g.  Throws domain_error for
/// non-finite g.
inline CouplingParams derive_params(double g) {
  if (!std::isfinite(g)) throw domain_error("derive_params: coupling g must be finite");
  CouplingParams p;
  p.g = g;
  p.h = std::sqrt(1.0 + 0.25 * g * g);
  p.G = g / p.h;
  p.g_plus = -0.5 * g + p.h;
  p.g_minus = -0.5 * g - p.h;
  p.g_sup_plus = 0.5 * g + p.h;   // == 1/g_plus == -g_minus
  p.g_sup_minus = 0.5 * g - p.h;  // == 1/g_minus == -g_plus
  p.G_plus = p.g_plus / p.h;
  p.G_minus = p.g_minus / p.h;
  p.G_sup_plus = p.g_sup_plus / p.h;
  p.G_sup_minus = p.g_sup_minus / p.h;
  return p;
}

// ---------------------------------------------------------------------------
// Vector value types.  The time component is kept separate from the spatial
// block because nearly every formula treats them asymmetrically.  The
// spatial metric is the Euclidean identity throughout (the deformation acts
// only through the coupling g), so |.| on the spatial block is the plain
// 2-norm.
// ---------------------------------------------------------------------------

/// Contravariant vector R = (R^0, R^1..R^d).
struct EventVector {
  double r0 = 0.0;
  Vec r;  // spatial components R^a, a = 1..d

  EventVector() = default;
  EventVector(double time, Vec spatial) : r0(time), r(std::move(spatial)) {}

  int dim() const { return static_cast<int>(r.size()); }

  /// Flattened (d+1)-vector (R^0, R^1, ..., R^d).
  Vec flat() const {
    Vec f(dim() + 1);
    f[0] = r0;
    f.tail(dim()) = r;
    return f;
  }
  static EventVector from_flat(const Vec& f) {
    return EventVector(f[0], f.tail(f.size() - 1));
  }
};

/// Covariant vector P = (P_0, P_1..P_d), stored with its natural (lowered)
/// component values so that the contraction with a contravariant vector is a
/// plain componentwise dot product.
struct MomentumCovector {
  double p0 = 0.0;
  Vec p;  // spatial components P_a, a = 1..d

  MomentumCovector() = default;
  MomentumCovector(double time, Vec spatial) : p0(time), p(std::move(spatial)) {}

  int dim() const { return static_cast<int>(p.size()); }

  Vec flat() const {
    Vec f(dim() + 1);
    f[0] = p0;
    f.tail(dim()) = p;
    return f;
  }
  static MomentumCovector from_flat(const Vec& f) {
    return MomentumCovector(f[0], f.tail(f.size() - 1));
  }
};

inline EventVector operator*(double a, const EventVector& v) {
  return EventVector(a * v.r0, a * v.r);
}
inline EventVector operator+(const EventVector& u, const EventVector& v) {
  return EventVector(u.r0 + v.r0, u.r + v.r);
}
inline EventVector operator-(const EventVector& u, const EventVector& v) {
  return EventVector(u.r0 - v.r0, u.r - v.r);
}
inline MomentumCovector operator*(double a, const MomentumCovector& v) {
  return MomentumCovector(a * v.p0, a * v.p);
}

/// Natural pairing P_p U^p of a covector with a vector.
inline double contract(const MomentumCovector& P, const EventVector& U) {
  return P.p0 * U.r0 + P.p.dot(U.r);
}

/// Euclidean norm of the spatial block, |**R**| or |**P**|.
inline double spatial_norm(const EventVector& v) { return v.r.norm(); }
inline double spatial_norm(const MomentumCovector& v) { return v.p.norm(); }

// ---------------------------------------------------------------------------
// Sector classification.
// ---------------------------------------------------------------------------

/// The five-way partition of nonzero vectors.  The characteristic quadratic
/// form factors into two linear pieces; the sign pattern of those factors
/// delimits the sectors.
enum class SectorLabel {
  FutureTimelike,
  FutureIsotropic,
  Spacelike,
  PastIsotropic,
  PastTimelike,
};

inline const char* to_string(SectorLabel s) {
  switch (s) {
    case SectorLabel::FutureTimelike: return "FutureTimelike";
    case SectorLabel::FutureIsotropic: return "FutureIsotropic";
    case SectorLabel::Spacelike: return "Spacelike";
    case SectorLabel::PastIsotropic: return "PastIsotropic";
    case SectorLabel::PastTimelike: return "PastTimelike";
  }
  return "?";
}

/// Relative tolerance used to decide membership of the isotropic
/// boundaries.  Classification near a cone is therefore
/// tolerance-dependent; callers that need strictness must keep a margin.
inline constexpr double kIsotropicRelTol = 1e-12;

namespace detail {
// Sign of (x - bound) with a relative-tolerance dead zone: -1, 0, +1.
inline int ladder_sign(double x, double bound) {
  const double scale = std::max({std::abs(x), std::abs(bound), 1e-300});
  const double diff = x - bound;
  if (std::abs(diff) <= kIsotropicRelTol * scale) return 0;
  return diff > 0 ? 1 : -1;
}
}  // namespace detail

/// Classify a contravariant vector.  The future cone is R^0 = g_sup_plus*m,
/// the past cone R^0 = g_sup_minus*m (m = spatial norm):
///   FutureTimelike   R^0 > g_sup_plus*m
///   FutureIsotropic  R^0 = g_sup_plus*m > 0
///   Spacelike        g_sup_minus*m < R^0 < g_sup_plus*m
///   PastIsotropic    R^0 = g_sup_minus*m < 0
///   PastTimelike     R^0 < g_sup_minus*m
/// Throws domain_error for the zero vector.
inline SectorLabel classify_sector(const CouplingParams& p, const EventVector& R) {
  const double m = spatial_norm(R);
  if (R.r0 == 0.0 && m == 0.0)
    throw domain_error("classify_sector: the zero vector has no sector (A.1)");
  const int up = detail::ladder_sign(R.r0, p.g_sup_plus * m);
  if (up > 0) return SectorLabel::FutureTimelike;
  if (up == 0) return SectorLabel::FutureIsotropic;
  const int lo = detail::ladder_sign(R.r0, p.g_sup_minus * m);
  if (lo < 0) return SectorLabel::PastTimelike;
  if (lo == 0) return SectorLabel::PastIsotropic;
  return SectorLabel::Spacelike;
}

/// Classify a covector.  The dual cones sit at P_0 = g_plus*|**P**| and
/// P_0 = g_minus*|**P**| (the reciprocals of the vector-side slopes), so
/// future co-timelike means P_0 > g_plus*|**P**|.
inline SectorLabel classify_cosector(const CouplingParams& p, const MomentumCovector& P) {
  const double m = spatial_norm(P);
  if (P.p0 == 0.0 && m == 0.0)
    throw domain_error("classify_cosector: the zero covector has no sector (A.2)");
  const int up = detail::ladder_sign(P.p0, p.g_plus * m);
  if (up > 0) return SectorLabel::FutureTimelike;
  if (up == 0) return SectorLabel::FutureIsotropic;
  const int lo = detail::ladder_sign(P.p0, p.g_minus * m);
  if (lo < 0) return SectorLabel::PastTimelike;
  if (lo == 0) return SectorLabel::PastIsotropic;
  return SectorLabel::Spacelike;
}

/// Pseudoeuclidean metric matrix e = diag(1, -1, ..., -1) of size n x n.
inline Mat minkowski_matrix(int n) {
  Mat e = -Mat::Identity(n, n);
  e(0, 0) = 1.0;
  return e;
}

}  // namespace fsr
