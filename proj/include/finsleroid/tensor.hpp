#pragma once

// Tensor-valued operations at a point: the metric tensor with its analytic
// inverse, the Cartan torsion tensor obtained by finite differences of the
// (closed-form) metric, and the curvature fit that recovers the constant
// S* = g^2/4 governing the relative curvature tensor.

#include "finsleroid/core.hpp"
#include "finsleroid/metric.hpp"
#include "finsleroid/transform.hpp"

#include <cmath>
#include <vector>

namespace fsr {

/// Metric tensor at a point, with the analytically assembled inverse.
struct MetricTensor {
  EventVector point;
  Mat components;  // g_pq
  Mat inverse;     // g^pq
};

/// Assemble g_pq (pullback route) and g^pq (image-tensor route) at R.
/// Requires a future-timelike point.
inline MetricTensor metric_tensor(const CouplingParams& p, const EventVector& R) {
  const SectorLabel s = classify_sector(p, R);
  if (s != SectorLabel::FutureTimelike)
    throw domain_error(std::string("metric_tensor: point must be future-timelike, got sector ") +
                       to_string(s));
  MetricTensor out;
  out.point = R;
  const QPoint t = sigma(p, R);
  const Mat J = sigma_jacobian(p, R).forward;
  const NTensorPair n = n_tensor(p, t);
  out.components = J.transpose() * n.lower * J;
  const Mat Jm = mu_jacobian(p, t);
  out.inverse = Jm * n.upper * Jm.transpose();
  return out;
}

/// Number of positive eigenvalues of a symmetric matrix, with a relative
/// zero threshold of 1e-10 — used for the signature check (+ - ... -).
inline int positive_eigenvalue_count(const Mat& sym) {
  Eigen::SelfAdjointEigenSolver<Mat> es(sym);
  const Vec ev = es.eigenvalues();
  const double scale = ev.cwiseAbs().maxCoeff();
  int count = 0;
  for (int i = 0; i < ev.size(); ++i)
    if (ev[i] > 1e-10 * scale) ++count;
  return count;
}

/// Cartan torsion tensor C_pqr = (1/2) dg_pq/dR^r, fully symmetric, with
/// the contraction C_p = g^qr C_pqr.
struct CartanTensor {
  EventVector point;
  std::vector<Mat> components;  // components[r](p, q) = C_pqr
  Vec contraction;              // C_p
};

/// Compute the Cartan tensor by central differences of the closed-form
/// metric with step 1e-4*F/h and one Richardson extrapolation level, then
/// symmetrize over all index permutations (the analytic tensor is fully
/// symmetric; averaging removes finite-difference asymmetry noise).
/// A step that leaves the future-timelike sector raises accuracy_error.
inline CartanTensor cartan_tensor(const CouplingParams& p, const EventVector& R) {
  const SectorLabel sec = classify_sector(p, R);
  if (sec != SectorLabel::FutureTimelike)
    throw domain_error(std::string("cartan_tensor: point must be future-timelike, got sector ") +
                       to_string(sec));
  const int n = R.dim() + 1;
  const double step = 1e-4 * fmf_F(p, R) / p.h;

  auto metric_at = [&](const Vec& flat) -> Mat {
    try {
      return pullback_metric(p, EventVector::from_flat(flat));
    } catch (const error&) {
      throw accuracy_error(
          "cartan_tensor: finite-difference step left the future-timelike sector; "
          "point too close to the cone for step 1e-4*F/h");
    }
  };

  const Vec x0 = R.flat();
  std::vector<Mat> C(n);
  for (int r = 0; r < n; ++r) {
    auto central = [&](double hh) -> Mat {
      Vec xp = x0, xm = x0;
      xp[r] += hh;
      xm[r] -= hh;
      return (metric_at(xp) - metric_at(xm)) / (2.0 * hh);
    };
    const Mat d1 = central(step);
    const Mat d2 = central(0.5 * step);
    C[r] = 0.5 * (4.0 * d2 - d1) / 3.0;
  }

  // Symmetrize over the 6 permutations of (p, q, r).  C[r](p,q) is already
  // symmetric in (p,q) by construction, so averaging the three cyclic
  // placements of r suffices.
  std::vector<Mat> S(n, Mat::Zero(n, n));
  for (int r = 0; r < n; ++r)
    for (int q = 0; q < n; ++q)
      for (int pp = 0; pp < n; ++pp)
        S[r](pp, q) = (C[r](pp, q) + C[q](pp, r) + C[pp](q, r)) / 3.0;

  CartanTensor out;
  out.point = R;
  out.components = std::move(S);
  const Mat ginv = pullback_metric_inverse(p, R);
  out.contraction = Vec::Zero(n);
  for (int pp = 0; pp < n; ++pp) {
    double acc = 0.0;
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r) acc += ginv(q, r) * out.components[r](pp, q);
    out.contraction[pp] = acc;
  }
  return out;
}

/// Result of fitting the assembled relative curvature tensor
///   S_pqrs = C_tqr C_p^t_s - C_tqs C_p^t_r
/// against the constant-curvature template (h_pr h_qs - h_ps h_qr)/F^2 with
/// h_pr = g_pr - l_p l_r, l_p = P_p/F.
struct CurvatureFit {
  double s_star;       // fitted proportionality constant, expected g^2/4
  double residual;     // relative residual of the fit (0 when S == 0)
  double r_indicatrix; // implied indicatrix curvature -(1 + s_star)
};

inline CurvatureFit curvature_fit(const CouplingParams& p, const EventVector& R) {
  const int n = R.dim() + 1;
  const CartanTensor C = cartan_tensor(p, R);
  const MetricTensor g = metric_tensor(p, R);
  const double F = fmf_F(p, R);
  const Vec l = covector_of(p, R).flat() / F;
  const Mat hmat = g.components - l * l.transpose();

  // Mixed components Cmix[t](p, s) = C_p^t_s = g^{tu} C_pus.
  std::vector<Mat> Cmix(n, Mat::Zero(n, n));
  for (int t = 0; t < n; ++t)
    for (int pp = 0; pp < n; ++pp)
      for (int s = 0; s < n; ++s) {
        double acc = 0.0;
        for (int u = 0; u < n; ++u) acc += g.inverse(t, u) * C.components[s](pp, u);
        Cmix[t](pp, s) = acc;
      }

  double dot_sm = 0.0, dot_mm = 0.0, dot_ss = 0.0;
  for (int pp = 0; pp < n; ++pp)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) {
          double Sv = 0.0;
          for (int t = 0; t < n; ++t)
            Sv += C.components[r](t, q) * Cmix[t](pp, s) - C.components[s](t, q) * Cmix[t](pp, r);
          const double Mv = (hmat(pp, r) * hmat(q, s) - hmat(pp, s) * hmat(q, r)) / (F * F);
          dot_sm += Sv * Mv;
          dot_mm += Mv * Mv;
          dot_ss += Sv * Sv;
        }

  CurvatureFit out;
  out.s_star = dot_sm / dot_mm;
  const double norm_s = std::sqrt(dot_ss);
  if (norm_s > 0.0) {
    // || S - s* M ||^2 = ||S||^2 - s*^2 ||M||^2 for the least-squares s*.
    const double res2 = std::max(0.0, dot_ss - out.s_star * out.s_star * dot_mm);
    out.residual = std::sqrt(res2) / norm_s;
  } else {
    out.residual = 0.0;
  }
  out.r_indicatrix = -(1.0 + out.s_star);
  return out;
}

/// Fit the curvature constant S* at R; expected value g^2/4.
inline double curvature_check(const CouplingParams& p, const EventVector& R) {
  return curvature_fit(p, R).s_star;
}

}  // namespace fsr
