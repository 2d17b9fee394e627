#pragma once

// The quasi-pseudoeuclidean transformation sigma and its inverse mu, their
// analytic Jacobians, the constant-directional tensor n of the image space,
// the pullback route to the metric tensor, and the Christoffel symbols of
// the image geometry.  sigma maps the future-timelike sector isometrically
// onto the interior of the future quasi-cone: F(R) = S(sigma(R)) with S the
// pseudoeuclidean norm, which is what makes closed-form geodesics possible.
//
// The absolute-value powers are implemented with the sign conventions valid
// on the future-timelike sector (both cone factors positive, t^0 > m);
// other sectors raise a typed error rather than silently picking a branch.

#include "finsleroid/core.hpp"
#include "finsleroid/metric.hpp"

#include <cmath>
#include <vector>

namespace fsr {

/// Image coordinates t = sigma(g;R) with the spatial norm cached.
struct QPoint {
  double t0 = 0.0;
  Vec t;      // spatial components t^a
  double m = 0.0;  // |**t**|, kept consistent by make()

  QPoint() = default;
  static QPoint make(double time, Vec spatial) {
    QPoint q;
    q.t0 = time;
    q.t = std::move(spatial);
    q.m = q.t.norm();
    return q;
  }
  static QPoint from_flat(const Vec& f) { return make(f[0], f.tail(f.size() - 1)); }

  int dim() const { return static_cast<int>(t.size()); }
  Vec flat() const {
    Vec f(dim() + 1);
    f[0] = t0;
    f.tail(dim()) = t;
    return f;
  }
};

/// Pseudoeuclidean norm S(t) = sqrt(|(t^0)^2 - m^2|).
inline double s_norm(const QPoint& t) {
  return std::sqrt(std::abs(t.t0 * t.t0 - t.m * t.m));
}

namespace detail {
// Guard: t must lie strictly inside the future quasi-cone t^0 > m >= 0.
// On the cone (relative tolerance) the map degenerates -> singularity;
// outside it the branch conventions do not apply -> domain error.
inline void require_future_qcone(const QPoint& t, const char* who) {
  const double scale = std::max({std::abs(t.t0), t.m, 1e-300});
  if (std::abs(t.t0 - t.m) <= kIsotropicRelTol * scale || std::abs(t.t0 + t.m) <= kIsotropicRelTol * scale)
    throw singularity_error(std::string(who) + ": quasi-isotropic point, |t^0| = m");
  if (t.t0 < t.m)
    throw domain_error(std::string(who) + ": point outside the future quasi-cone t^0 > m (B.20)");
}
// Guard for the vector side: sigma and its Jacobian are defined on the
// future-timelike sector only.
inline void require_future_timelike(const CouplingParams& p, const EventVector& R, const char* who) {
  const SectorLabel s = classify_sector(p, R);
  if (s == SectorLabel::FutureTimelike) return;
  if (is_isotropic(s))
    throw singularity_error(std::string(who) + ": isotropic vector, the ratio power in (A.13) degenerates");
  throw domain_error(std::string(who) + ": vector must be future-timelike, got sector " +
                     to_string(s));
}
}  // namespace detail

/// Forward transformation
///   sigma^0 = j*(R^0 - (g/2)m) = j*A,   sigma^a = h*j*R^a.
/// Homogeneous of degree 1; isometric onto the future quasi-cone interior.
inline QPoint sigma(const CouplingParams& p, const EventVector& R) {
  detail::require_future_timelike(p, R, "sigma");
  const double j = weight_j(p, R);
  return QPoint::make(j * func_A(p, R), (p.h * j) * R.r);
}

/// Inverse transformation.  With k = ((t^0-m)/(t^0+m))^{G/4}:
///   mu^0 = k*(t^0 + (G/2)m),   mu^a = (k/h)*t^a.
inline EventVector mu(const CouplingParams& p, const QPoint& t) {
  detail::require_future_qcone(t, "mu");
  const double k = std::pow((t.t0 - t.m) / (t.t0 + t.m), 0.25 * p.G);
  return EventVector(k * (t.t0 + 0.5 * p.G * t.m), (k / p.h) * t.t);
}

/// Forward and backward Jacobians at corresponding points.
struct JacobianPair {
  Mat forward;   // t^i_p = d sigma^i / d R^p
  Mat backward;  // mu^p_i = d mu^p / d t^i, evaluated at t = sigma(R)
};

/// Analytic Jacobian of mu at t.  Derived by product/chain rule:
///   d ln k / d t^0 = (G/2) m / S^2,   d ln k / d t^a = -(G/2) t^0 m_a / S^2,
/// with m_a = t^a/m and S^2 = (t^0)^2 - m^2.  On the axis (m = 0) the
/// directional derivative of m is replaced by its symmetric limit 0, which
/// is the continuous extension.
inline Mat mu_jacobian(const CouplingParams& p, const QPoint& t) {
  detail::require_future_qcone(t, "mu_jacobian");
  const int n = t.dim() + 1;
  const double S2 = t.t0 * t.t0 - t.m * t.m;
  const double k = std::pow((t.t0 - t.m) / (t.t0 + t.m), 0.25 * p.G);
  const double w = t.t0 + 0.5 * p.G * t.m;

  Vec dlnk(n);  // d ln k / d t^i
  dlnk[0] = 0.5 * p.G * t.m / S2;
  if (t.m > 0.0)
    dlnk.tail(n - 1) = (-0.5 * p.G * t.t0 / (S2 * t.m)) * t.t;
  else
    dlnk.tail(n - 1).setZero();

  Mat J(n, n);
  J(0, 0) = k * (1.0 + w * dlnk[0]);
  for (int a = 1; a < n; ++a) {
    const double ma = t.m > 0.0 ? t.t[a - 1] / t.m : 0.0;
    J(0, a) = k * (0.5 * p.G * ma + w * dlnk[a]);
  }
  for (int b = 1; b < n; ++b) {
    J(b, 0) = (k / p.h) * t.t[b - 1] * dlnk[0];
    for (int a = 1; a < n; ++a)
      J(b, a) = (k / p.h) * ((a == b ? 1.0 : 0.0) + t.t[b - 1] * dlnk[a]);
  }
  return J;
}

namespace detail {
// Forward Jacobian t^i_p at R.  Log-derivative of the weight factor:
//   d ln j / d R^0 = -(g/2) m / q,   d ln j / d R^a = (g/2) R^0 m_a / q,
// with q = -B > 0 on the future-timelike sector and m_a = R^a/m.
inline Mat sigma_jacobian_forward(const CouplingParams& p, const EventVector& R) {
  const int n = R.dim() + 1;
  const double m = spatial_norm(R);
  const double q = -quadratic_form_B(p, R);
  const double j = weight_j(p, R);
  const double A = func_A(p, R);

  Vec dlnj(n);  // d ln j / d R^p
  dlnj[0] = -0.5 * p.g * m / q;
  if (m > 0.0)
    dlnj.tail(n - 1) = (0.5 * p.g * R.r0 / (q * m)) * R.r;
  else
    dlnj.tail(n - 1).setZero();

  Mat J(n, n);
  J(0, 0) = j * (1.0 + A * dlnj[0]);
  for (int a = 1; a < n; ++a) {
    const double ma = m > 0.0 ? R.r[a - 1] / m : 0.0;
    J(0, a) = j * (-0.5 * p.g * ma + A * dlnj[a]);
  }
  for (int b = 1; b < n; ++b) {
    J(b, 0) = p.h * j * R.r[b - 1] * dlnj[0];
    for (int a = 1; a < n; ++a)
      J(b, a) = p.h * j * ((a == b ? 1.0 : 0.0) + R.r[b - 1] * dlnj[a]);
  }
  return J;
}
}  // namespace detail

/// Both Jacobians at R (backward evaluated at sigma(R)).  They are mutual
/// inverses; det(forward) = j^4 h^3 in three spatial dimensions (generally
/// j^{d+1} h^d).
inline JacobianPair sigma_jacobian(const CouplingParams& p, const EventVector& R) {
  detail::require_future_timelike(p, R, "sigma_jacobian");
  JacobianPair out;
  out.forward = detail::sigma_jacobian_forward(p, R);
  out.backward = mu_jacobian(p, sigma(p, R));
  return out;
}

/// The image-space tensor pair at t, with l^i = t^i/S:
///   n^ij = h^2 e^ij - (g^2/4) l^i l^j
///   n_ij = (1/h^2) e_ij + (G^2/4) l_i l_j
/// Mutually inverse; n_ij l^i l^j = 1, n_ij l^j = l_i;
/// det(n^ij) = -h^6 (lower-index determinant -1/h^6) in d = 3.
struct NTensorPair {
  Mat lower;  // n_ij
  Mat upper;  // n^ij
};

inline NTensorPair n_tensor(const CouplingParams& p, const QPoint& t) {
  const double S2 = t.t0 * t.t0 - t.m * t.m;
  const double scale = std::max({t.t0 * t.t0, t.m * t.m, 1e-300});
  if (S2 <= kIsotropicRelTol * scale)
    throw domain_error("n_tensor: S(t) = 0 or t outside the future quasi-cone (B.16)");
  const int n = t.dim() + 1;
  const double S = std::sqrt(S2);
  const Mat e = minkowski_matrix(n);
  const Vec l_up = t.flat() / S;
  const Vec l_lo = e * l_up;
  NTensorPair out;
  out.upper = p.h * p.h * e - 0.25 * p.g * p.g * (l_up * l_up.transpose());
  out.lower = e / (p.h * p.h) + 0.25 * p.G * p.G * (l_lo * l_lo.transpose());
  return out;
}

/// Metric tensor by the pullback route: g_pq = n_ij(sigma(R)) t^i_p t^j_q.
/// This is the production route for the metric; it agrees with the Hessian
/// definition (1/2) d^2 F^2 / dR dR, which the verification suite checks by
/// finite differences.
inline Mat pullback_metric(const CouplingParams& p, const EventVector& R) {
  detail::require_future_timelike(p, R, "pullback_metric");
  const Mat J = detail::sigma_jacobian_forward(p, R);
  const Mat n_lo = n_tensor(p, sigma(p, R)).lower;
  return J.transpose() * n_lo * J;
}

/// Analytic inverse metric g^pq = mu^p_i mu^q_j n^ij, no matrix inversion.
inline Mat pullback_metric_inverse(const CouplingParams& p, const EventVector& R) {
  detail::require_future_timelike(p, R, "pullback_metric_inverse");
  const QPoint t = sigma(p, R);
  const Mat Jm = mu_jacobian(p, t);
  const Mat n_up = n_tensor(p, t).upper;
  return Jm * n_up * Jm.transpose();
}

/// Christoffel symbols of the image geometry,
///   N^i_mj = (G^2/4) l^i H_mj / S,   H_mj = e_mj - l_m l_j (all lower).
/// Returned as N[i](m, j).  Transversality t^m N^i_mj = 0 and the trace
/// N^j_mj = 0 hold identically.
inline std::vector<Mat> christoffel(const CouplingParams& p, const QPoint& t) {
  detail::require_future_qcone(t, "christoffel");
  const int n = t.dim() + 1;
  const double S = s_norm(t);
  const Mat e = minkowski_matrix(n);
  const Vec l_up = t.flat() / S;
  const Vec l_lo = e * l_up;
  const Mat H = e - l_lo * l_lo.transpose();
  const double c = 0.25 * p.G * p.G / S;
  std::vector<Mat> N(n);
  for (int i = 0; i < n; ++i) N[i] = (c * l_up[i]) * H;
  return N;
}

}  // namespace fsr
