#pragma once

// Closed-form geodesic machinery of the deformed space: the hyperbolic
// angle between future-timelike vectors, scalar product and two-point
// distance, the explicit two-point geodesic with its velocity field and
// non-planarity measure, and the initial-data (shooting) solution.
//
// Everything reduces to pseudoeuclidean hyperbolic geometry in the image
// space: sigma maps geodesics onto straight-line (unit-hyperboloid) curves,
// t(s) = F_s [l1 sinh(h(alpha-nu)) + l2 sinh(h nu)] / sinh(h alpha), and
// mu maps them back.
//
// Branch conventions: sqrt(B) is read as sqrt(|B|) = sqrt(-B) on the
// future-timelike sector — the identity A^2 - h^2 m^2 = -B makes every
// arccosh argument >= 1 there, and the endpoint-reproduction tests pin the
// convention down.

#include "finsleroid/core.hpp"
#include "finsleroid/metric.hpp"
#include "finsleroid/tensor.hpp"
#include "finsleroid/transform.hpp"

#include <cmath>

namespace fsr {

namespace detail {
// Snap arccosh arguments within 1e-12 of 1 to exactly 1 (equal or parallel
// inputs produce 1 only up to rounding), reject arguments genuinely below.
// The snap gives every angle operation a resolution of about 1.4e-6.
inline double clamp_acosh_arg(double arg, const char* who, const char* ref) {
  if (std::abs(arg - 1.0) <= 1e-12) return 1.0;
  if (arg >= 1.0) return arg;
  throw domain_error(std::string(who) + ": arccosh argument " + std::to_string(arg) +
                     " < 1, inputs outside mutual validity " + ref);
}
}  // namespace detail

/// Hyperbolic angle between two future-timelike vectors:
///   alpha = (1/h) arccosh[(A1 A2 - h^2 **R1**.**R2**) / sqrt(|B1 B2|)].
/// Zero iff the vectors are parallel.
inline double angle(const CouplingParams& p, const EventVector& R1, const EventVector& R2) {
  for (const EventVector* R : {&R1, &R2}) {
    const SectorLabel s = classify_sector(p, *R);
    if (s != SectorLabel::FutureTimelike)
      throw domain_error(std::string("angle: vectors must be future-timelike, got sector ") +
                         to_string(s) + " (2.2)");
  }
  const double arg = (func_A(p, R1) * func_A(p, R2) - p.h * p.h * R1.r.dot(R2.r)) /
                     std::sqrt(std::abs(quadratic_form_B(p, R1) * quadratic_form_B(p, R2)));
  return std::acosh(detail::clamp_acosh_arg(arg, "angle", "(2.2)")) / p.h;
}

/// Scalar product F1 F2 cosh(alpha); symmetric, >= F1 F2, and equal to F^2
/// for coinciding arguments.
inline double scalar_product(const CouplingParams& p, const EventVector& R1,
                             const EventVector& R2) {
  return fmf_F(p, R1) * fmf_F(p, R2) * std::cosh(angle(p, R1, R2));
}

/// Two-point distance Delta_s = sqrt(F1^2 + F2^2 - 2 F1 F2 cosh(alpha)).
/// A negative radicand means the endpoints are not joinable within the
/// closed-form solution family and raises a domain error.
inline double distance(const CouplingParams& p, const EventVector& R1, const EventVector& R2) {
  const double F1 = fmf_F(p, R1);
  const double F2 = fmf_F(p, R2);
  const double rad = F1 * F1 + F2 * F2 - 2.0 * F1 * F2 * std::cosh(angle(p, R1, R2));
  if (rad < 0.0) {
    const double scale = std::max(F1 * F1, F2 * F2);
    if (rad > -1e-12 * scale) return 0.0;
    throw domain_error("distance: negative radicand in (2.14), endpoints not joinable "
                       "within the geodesic family (2.13)");
  }
  return std::sqrt(rad);
}

/// Angle between R and the time axis: (1/h) arccosh(A/sqrt|B|).
inline double axis_angle(const CouplingParams& p, const EventVector& R) {
  const SectorLabel s = classify_sector(p, R);
  if (s != SectorLabel::FutureTimelike)
    throw domain_error(std::string("axis_angle: vector must be future-timelike, got sector ") +
                       to_string(s) + " (2.22)");
  const double arg = func_A(p, R) / std::sqrt(std::abs(quadratic_form_B(p, R)));
  return std::acosh(detail::clamp_acosh_arg(arg, "axis_angle", "(2.22)")) / p.h;
}

/// Angle between R and the equatorial plane: (1/h) arccosh(L/sqrt|B|),
/// defined when L/sqrt|B| >= 1.
inline double equatorial_angle(const CouplingParams& p, const EventVector& R) {
  const double arg = func_L(p, R) / std::sqrt(std::abs(quadratic_form_B(p, R)));
  return std::acosh(detail::clamp_acosh_arg(arg, "equatorial_angle", "(2.23)")) / p.h;
}

// ---------------------------------------------------------------------------
// Two-point geodesic.
// ---------------------------------------------------------------------------

/// The closed-form geodesic joining R1 and R2, with all invariants cached.
///
/// F(R(s))^2 = a^2 + 2 b s + s^2 along the curve, with a = F1 and the
/// integration constant b = F1 (F2 cosh(alpha) - F1)/Delta_s.  |b| equals
/// the textbook positive root F1 sqrt(1 + (F2 sinh(alpha)/Delta_s)^2), but
/// the sign must follow F2 cosh(alpha) - F1: only the signed value
/// reproduces F(Delta_s) = F2 and the endpoint R2.  b^2 - a^2 =
/// (F1 F2 sinh(alpha)/Delta_s)^2 >= 0 holds either way.
struct GeodesicCurve {
  CouplingParams params;
  EventVector R1, R2;
  double F1 = 0, F2 = 0;
  double alpha = 0;    // hyperbolic angle between the endpoints
  double delta_s = 0;  // arclength between the endpoints
  double a = 0, b = 0; // integration constants
  double B1_abs = 0, B2_abs = 0;  // |B| at the endpoints
  double A1 = 0, A2 = 0;
  Vec l1, l2;          // unit sigma-images sigma(R)/F (flattened)
  bool radial = false; // collinear-endpoint degenerate branch
  bool allow_extrapolation = false;  // permit s outside [0, delta_s]
};

/// One sample of a geodesic: position, unit velocity, and the running norm.
struct GeodesicSample {
  double s = 0;
  EventVector point;
  EventVector velocity;  // U^p = dR^p/ds; g_pq U^p U^q = 1
  double fmf = 0;        // F(point) = sqrt(a^2 + 2 b s + s^2)
};

/// Construct the geodesic joining two future-timelike endpoints.  Collinear
/// endpoints degenerate to the radial curve R(s) = (F_s/F1) R1; the
/// tie-break for exactly coinciding endpoints is the outward direction
/// (b = +F1).  Throws the distance / sector errors of the ingredient
/// operations.
inline GeodesicCurve connect(const CouplingParams& p, const EventVector& R1,
                             const EventVector& R2) {
  GeodesicCurve c;
  c.params = p;
  c.R1 = R1;
  c.R2 = R2;
  c.F1 = fmf_F(p, R1);
  c.F2 = fmf_F(p, R2);
  c.alpha = angle(p, R1, R2);
  c.a = c.F1;
  c.A1 = func_A(p, R1);
  c.A2 = func_A(p, R2);
  c.B1_abs = std::abs(quadratic_form_B(p, R1));
  c.B2_abs = std::abs(quadratic_form_B(p, R2));
  c.l1 = sigma(p, R1).flat() / c.F1;
  c.l2 = sigma(p, R2).flat() / c.F2;

  // Parallel endpoints: the interpolation weights become 0/0; take the
  // radial limit.  The angle is zero only when the arccosh argument rounds
  // to 1, so this branch triggers exactly when the clamp did.
  if (c.alpha == 0.0) {
    c.radial = true;
    c.delta_s = std::abs(c.F2 - c.F1);
    c.b = (c.F2 >= c.F1) ? c.F1 : -c.F1;
    return c;
  }

  const double rad = c.F1 * c.F1 + c.F2 * c.F2 - 2.0 * c.F1 * c.F2 * std::cosh(c.alpha);
  if (rad < 0.0) {
    const double scale = std::max(c.F1 * c.F1, c.F2 * c.F2);
    if (rad <= -1e-12 * scale)
      throw domain_error("connect: negative radicand in (2.14), endpoints not joinable "
                         "within the geodesic family (2.13)");
    // Rounding-level radicand with a nonzero angle: endpoints on a common
    // hyperboloid shell infinitesimally apart; treat as coincident.
    c.radial = true;
    c.delta_s = 0.0;
    c.b = c.F1;
    return c;
  }
  c.delta_s = std::sqrt(rad);
  if (c.delta_s == 0.0) {
    c.radial = true;
    c.b = c.F1;
    return c;
  }
  c.b = c.F1 * (c.F2 * std::cosh(c.alpha) - c.F1) / c.delta_s;
  return c;
}

namespace detail {

// Everything eval_point / eval_velocity need at one parameter value.
struct CurveState {
  double Fs = 0;   // running norm sqrt(a^2 + 2bs + s^2)
  double nu = 0;   // intermediate angle, nu(0) = 0, nu(delta_s) = alpha
  double k = 0;    // |(t^0 - m)/(t^0 + m)|^{-G/4} at the sample point
  QPoint t;        // image-space position
  EventVector R;   // position
};

inline void check_eval_range(const GeodesicCurve& c, double s) {
  if (c.allow_extrapolation) return;
  const double slack = 1e-9 * std::max(1.0, c.delta_s);
  if (s < -slack || s > c.delta_s + slack)
    throw domain_error("eval: parameter s outside [0, delta_s]; construct the curve with "
                       "allow_extrapolation to continue the solution");
}

inline double running_norm(const GeodesicCurve& c, double s) {
  const double Fs2 = c.a * c.a + 2.0 * c.b * s + s * s;
  if (Fs2 <= 0.0)
    throw singularity_error("eval: the running norm a^2 + 2bs + s^2 vanished; the "
                            "extrapolated curve left the future-timelike sector (2.7)");
  return std::sqrt(Fs2);
}

// Intermediate angle from the stable log form.  The direct expression is
// arctanh(num/den) with num = s F2 sinh(alpha) and den = F1 delta_s +
// (F2 cosh(alpha) - F1) s; den - num telescopes to
// F1 delta_s - (F1 - F2 e^{-alpha}) s, which avoids the catastrophic
// cancellation of 1 - num/den near the far endpoint.
inline double intermediate_nu(const GeodesicCurve& c, double s) {
  const double num = s * c.F2 * std::sinh(c.alpha);
  const double den_minus_num = c.F1 * c.delta_s - (c.F1 - c.F2 * std::exp(-c.alpha)) * s;
  if (den_minus_num <= 0.0)
    throw singularity_error("eval: intermediate angle diverged; the extrapolated curve "
                            "reached the light cone (2.10)");
  const double u2 = 2.0 * num / den_minus_num;
  if (u2 <= -1.0)  // only reachable under backward extrapolation
    throw singularity_error("eval: intermediate angle diverged; the extrapolated curve "
                            "reached the light cone (2.10)");
  return 0.5 * std::log1p(u2);
}

inline CurveState curve_state(const GeodesicCurve& c, double s) {
  const CouplingParams& p = c.params;
  CurveState st;
  st.Fs = running_norm(c, s);
  if (c.radial) {
    st.nu = 0.0;
    const double scale = st.Fs / c.F1;
    st.R = scale * c.R1;
    st.t = QPoint::from_flat(st.Fs * c.l1);
    st.k = std::pow((st.t.t0 - st.t.m) / (st.t.t0 + st.t.m), -0.25 * p.G);
    return st;
  }
  st.nu = intermediate_nu(c, s);
  const double sh = std::sinh(p.h * c.alpha);
  const double w1 = std::sinh(p.h * (c.alpha - st.nu)) / sh;
  const double w2 = std::sinh(p.h * st.nu) / sh;
  st.t = QPoint::from_flat(st.Fs * (w1 * c.l1 + w2 * c.l2));
  if (st.t.t0 <= st.t.m)
    throw singularity_error("eval: image point left the future quasi-cone (B.20)");
  st.k = std::pow((st.t.t0 - st.t.m) / (st.t.t0 + st.t.m), -0.25 * p.G);
  // Inverse map, written out so the cached k is reused.
  st.R = EventVector((st.t.t0 + 0.5 * p.G * st.t.m) / st.k, st.t.t / (p.h * st.k));
  return st;
}

}  // namespace detail

/// Point on the geodesic at arclength s from R1.  eval_point(0) = R1 and
/// eval_point(delta_s) = R2; outside [0, delta_s] only with the curve's
/// allow_extrapolation flag set.
inline EventVector eval_point(const GeodesicCurve& c, double s) {
  detail::check_eval_range(c, s);
  return detail::curve_state(c, s).R;
}

/// Unit velocity U(s) = dR/ds.  Closed form
///   U = ((b+s)/F_s^2) R(s) + [h F1 F2 sinh(alpha) /
///       (k_s F_s sinh(h alpha) delta_s)] T(s)
/// with T^0 = (a2 cosh(h nu) - a1 cosh(h(alpha-nu)))/h^2, a_i = A_i/sqrt|B_i|,
/// and the spatial block
///   T^a = [R2^a/sqrt|B2| - (g/2)(a2/h^2) R^a(s)/rho] cosh(h nu)
///       - [R1^a/sqrt|B1| - (g/2)(a1/h^2) R^a(s)/rho] cosh(h(alpha-nu)),
/// rho = |**R**(s)|.  Satisfies P_p(s) U^p = b + s and g_pq U^p U^q = 1.
inline EventVector eval_velocity(const GeodesicCurve& c, double s) {
  detail::check_eval_range(c, s);
  const CouplingParams& p = c.params;
  const detail::CurveState st = detail::curve_state(c, s);
  if (c.radial) return ((c.b + s) / (st.Fs * c.F1)) * c.R1;

  const double a1 = c.A1 / std::sqrt(c.B1_abs);
  const double a2 = c.A2 / std::sqrt(c.B2_abs);
  const double ch1 = std::cosh(p.h * (c.alpha - st.nu));
  const double ch2 = std::cosh(p.h * st.nu);
  const double h2 = p.h * p.h;

  // The spatial block of T carries a correction along the unit direction
  // R^a/|**R**(s)|; on the axis that direction (and for g != 0 the velocity
  // itself) has no limit.  The correction vanishes identically at g = 0.
  Vec axis_corr = Vec::Zero(c.R1.dim());
  if (p.g != 0.0) {
    const double rho = spatial_norm(st.R);
    if (rho <= 1e-12 * st.Fs)
      throw singularity_error("eval_velocity: curve point on the spatial axis, the direction "
                              "R^a/|**R**| in (2.34) is undefined");
    axis_corr = (0.5 * p.g / (h2 * rho)) * st.R.r;
  }

  EventVector T(0.0, Vec::Zero(c.R1.dim()));
  T.r0 = (a2 * ch2 - a1 * ch1) / h2;
  const Vec spat1 = c.R1.r / std::sqrt(c.B1_abs) - a1 * axis_corr;
  const Vec spat2 = c.R2.r / std::sqrt(c.B2_abs) - a2 * axis_corr;
  T.r = ch2 * spat2 - ch1 * spat1;

  const double coef =
      p.h * c.F1 * c.F2 * std::sinh(c.alpha) / (st.k * st.Fs * std::sinh(p.h * c.alpha) * c.delta_s);
  return ((c.b + s) / (st.Fs * st.Fs)) * st.R + coef * T;
}

/// Velocity through the image-space route U^p = mu^p_j(t(s)) dt^j/ds with
/// the analytic t-derivative — an independent cross-check of the closed
/// form above (the two agree to rounding).
inline EventVector eval_velocity_image_route(const GeodesicCurve& c, double s) {
  detail::check_eval_range(c, s);
  const CouplingParams& p = c.params;
  const detail::CurveState st = detail::curve_state(c, s);
  const double Fdot = (c.b + s) / st.Fs;
  Vec tdot;
  if (c.radial) {
    tdot = Fdot * c.l1;
  } else {
    const double sh = std::sinh(p.h * c.alpha);
    const double w1 = std::sinh(p.h * (c.alpha - st.nu)) / sh;
    const double w2 = std::sinh(p.h * st.nu) / sh;
    const double dw1 = -p.h * std::cosh(p.h * (c.alpha - st.nu)) / sh;
    const double dw2 = p.h * std::cosh(p.h * st.nu) / sh;
    const double nudot = c.F1 * c.F2 * std::sinh(c.alpha) / (c.delta_s * st.Fs * st.Fs);
    tdot = Fdot * (w1 * c.l1 + w2 * c.l2) + (st.Fs * nudot) * (dw1 * c.l1 + dw2 * c.l2);
  }
  return EventVector::from_flat(mu_jacobian(p, st.t) * tdot);
}

/// Non-planarity measure: the geodesic is spanned by its endpoints only up
/// to a time-axis excess,
///   R(s) = c1(s) R1 + c2(s) R2 + X(s) delta^p_0,
/// and X(s) = -(g/2)[c1 m1 + c2 m2 - |**R**(s)|] is that excess.
/// Identically zero at g = 0; zero on radial curves (trivially planar).
inline double nonplanarity(const GeodesicCurve& c, double s) {
  detail::check_eval_range(c, s);
  if (c.radial) return 0.0;
  const CouplingParams& p = c.params;
  const detail::CurveState st = detail::curve_state(c, s);
  const double sh = std::sinh(p.h * c.alpha);
  const double c1 =
      st.Fs * std::sinh(p.h * (c.alpha - st.nu)) / (st.k * sh * std::sqrt(c.B1_abs));
  const double c2 = st.Fs * std::sinh(p.h * st.nu) / (st.k * sh * std::sqrt(c.B2_abs));
  const double m1 = spatial_norm(c.R1);
  const double m2 = spatial_norm(c.R2);
  return -0.5 * p.g * (c1 * m1 + c2 * m2 - spatial_norm(st.R));
}

/// The span coefficients (c1, c2) of the decomposition above — exposed for
/// the consistency check that R(s) - c1 R1 - c2 R2 is purely temporal.
inline std::pair<double, double> span_coefficients(const GeodesicCurve& c, double s) {
  detail::check_eval_range(c, s);
  if (c.radial) {
    const detail::CurveState st = detail::curve_state(c, s);
    return {st.Fs / c.F1, 0.0};
  }
  const CouplingParams& p = c.params;
  const detail::CurveState st = detail::curve_state(c, s);
  const double sh = std::sinh(p.h * c.alpha);
  return {st.Fs * std::sinh(p.h * (c.alpha - st.nu)) / (st.k * sh * std::sqrt(c.B1_abs)),
          st.Fs * std::sinh(p.h * st.nu) / (st.k * sh * std::sqrt(c.B2_abs))};
}

// ---------------------------------------------------------------------------
// Initial-data (shooting) solution.
// ---------------------------------------------------------------------------

/// Advance from R1 along the geodesic with unit initial velocity U1 for
/// arclength delta_s.  The image point is
///   t2 = z sigma(R1) + n t^i_q(R1) U1^q,
/// with b = P_q U1^q, F2 = sqrt(F1^2 + 2 b delta_s + delta_s^2),
/// alpha = arccosh[(F1^2 + b delta_s)/(F1 F2)]  (no 1/h here: this is the
/// image-space rapidity), and
///   z = rho/h + (F2/F1)(cosh(h alpha) - (rho/h) cosh(alpha)),
///   n = (rho/h) delta_s,        rho = sinh(h alpha)/sinh(alpha).
inline EventVector shoot(const CouplingParams& p, const EventVector& R1, const EventVector& U1,
                         double delta_s) {
  const SectorLabel sec = classify_sector(p, R1);
  if (sec != SectorLabel::FutureTimelike)
    throw domain_error(std::string("shoot: start point must be future-timelike, got sector ") +
                       to_string(sec));
  const MetricTensor g = metric_tensor(p, R1);
  const Vec u = U1.flat();
  const double norm2 = u.dot(g.components * u);
  if (std::abs(norm2 - 1.0) > 1e-8)
    throw precondition_error("shoot: initial velocity must be unit, g_pq U^p U^q = 1 (2.37); got " +
                             std::to_string(norm2));
  const double F1 = fmf_F(p, R1);
  const double b = contract(covector_of(p, R1), U1);
  const double F2sq = F1 * F1 + 2.0 * b * delta_s + delta_s * delta_s;
  if (F2sq <= 0.0)
    throw domain_error("shoot: running norm collapses before delta_s is reached (2.43)");
  const double F2 = std::sqrt(F2sq);
  const double alpha =
      std::acosh(detail::clamp_acosh_arg((F1 * F1 + b * delta_s) / (F1 * F2), "shoot", "(2.45)"));

  // rho = sinh(h alpha)/sinh(alpha); series for small alpha where the ratio
  // is 0/0: rho = h (1 + (h^2-1) alpha^2/6 + O(alpha^4)).
  double rho;
  if (alpha < 1e-4)
    rho = p.h * (1.0 + (p.h * p.h - 1.0) * alpha * alpha / 6.0);
  else
    rho = std::sinh(p.h * alpha) / std::sinh(alpha);

  const double z = rho / p.h +
                   (F2 / F1) * (std::cosh(p.h * alpha) - (rho / p.h) * std::cosh(alpha));
  const double n = (rho / p.h) * delta_s;

  const Vec t2 = z * sigma(p, R1).flat() + n * (sigma_jacobian(p, R1).forward * u);
  return mu(p, QPoint::from_flat(t2));
}

// ---------------------------------------------------------------------------
// Checks.
// ---------------------------------------------------------------------------

/// Scale-relative residual of the geodesic equation
///   d^2R^p/ds^2 + C_q{}^p{}_r (dR^q/ds)(dR^r/ds) = 0
/// at parameter s, with the second derivative from central differences of
/// eval_point and the Cartan tensor from the metric module.  The
/// normalization scale is max(|d^2R/ds^2|, |C.UU|, |R|/F_s^2) so the g = 0
/// case (both terms zero) stays well-defined.
inline double geodesic_residual(const CouplingParams& p, const GeodesicCurve& c, double s) {
  detail::check_eval_range(c, s);
  // The closed form is analytic in s; evaluate the stencil on a copy with
  // extrapolation allowed so samples near the endpoints remain valid.
  GeodesicCurve cx = c;
  cx.allow_extrapolation = true;
  const double hs = 1e-4 * std::max(c.delta_s, c.F1);
  const Vec Rp = eval_point(cx, s + hs).flat();
  const Vec R0 = eval_point(cx, s).flat();
  const Vec Rm = eval_point(cx, s - hs).flat();
  const Vec d2R = (Rp - 2.0 * R0 + Rm) / (hs * hs);

  const EventVector Rs = EventVector::from_flat(R0);
  const Vec U = eval_velocity(cx, s).flat();
  const CartanTensor C = cartan_tensor(p, Rs);
  const Mat ginv = metric_tensor(p, Rs).inverse;
  const int n = static_cast<int>(R0.size());

  // w_t = C_qtr U^q U^r, then (C.UU)^p = g^{pt} w_t.
  Vec w = Vec::Zero(n);
  for (int t = 0; t < n; ++t)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r) w[t] += C.components[r](q, t) * U[q] * U[r];
  const Vec cuu = ginv * w;

  const double Fs = detail::running_norm(c, s);
  const double scale = std::max({d2R.cwiseAbs().maxCoeff(), cuu.cwiseAbs().maxCoeff(),
                                 R0.cwiseAbs().maxCoeff() / (Fs * Fs)});
  return (d2R + cuu).cwiseAbs().maxCoeff() / scale;
}

/// Arclength recomputed by composite-Simpson quadrature of
/// sqrt(g_pq U^p U^q) over [0, delta_s] — an independent consistency check
/// that should reproduce delta_s.
inline double arclength_quadrature(const GeodesicCurve& c, int panels = 64) {
  const CouplingParams& p = c.params;
  auto integrand = [&](double s) {
    const EventVector R = eval_point(c, s);
    const Vec u = eval_velocity(c, s).flat();
    return std::sqrt(u.dot(metric_tensor(p, R).components * u));
  };
  const double hstep = c.delta_s / (2 * panels);
  double acc = integrand(0.0) + integrand(c.delta_s);
  for (int i = 1; i < 2 * panels; ++i) acc += (i % 2 ? 4.0 : 2.0) * integrand(i * hstep);
  return acc * hstep / 3.0;
}

}  // namespace fsr
