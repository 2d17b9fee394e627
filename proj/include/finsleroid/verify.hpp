#pragma once

// Finite-difference oracles and the randomized invariant suite.  The suite
// evaluates one record per identity of the catalog below over deterministic
// pseudo-random samples; failures become report entries, never exceptions.
// Identical (g_values, count, seed, cfg) produce identical reports.

#include "finsleroid/core.hpp"
#include "finsleroid/cospace.hpp"
#include "finsleroid/geodesics.hpp"
#include "finsleroid/io.hpp"
#include "finsleroid/metric.hpp"
#include "finsleroid/tensor.hpp"
#include "finsleroid/transform.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace fsr {

// ---------------------------------------------------------------------------
// Finite-difference oracles.
// ---------------------------------------------------------------------------

/// Configuration of the finite-difference engine.  base_step is relative
/// and is scaled by the caller-supplied length scale (conventionally F/h at
/// the point).  Higher-order stencils use enlarged steps: the roundoff
/// floor of a second difference grows like eps/step^2, so the Hessian and
/// third-derivative steps are widened by the given factors to balance
/// roundoff against truncation (Richardson extrapolation removes the
/// leading truncation term, making the wider step essentially free).
struct FDConfig {
  double base_step = 1e-5;
  int richardson_levels = 1;
  double hessian_step_factor = 30.0;
  double third_step_factor = 100.0;
  std::map<std::string, double> tolerances;  // identity-name prefix -> relative tolerance
};

using ScalarField = std::function<double(const EventVector&)>;

namespace detail {

inline double max_abs_diff(const Vec& a, const Vec& b) { return (a - b).cwiseAbs().maxCoeff(); }
inline double max_abs_diff(const Mat& a, const Mat& b) { return (a - b).cwiseAbs().maxCoeff(); }

// Richardson triangle over step halving for an arbitrary vector-like
// quantity; order2 stencils gain two orders per level.
template <typename T>
T richardson(const std::function<T(double)>& stencil, double step, int levels, double* err) {
  std::vector<T> row;
  row.push_back(stencil(step));
  T best = row[0];
  T prev = best;
  for (int i = 1; i <= levels; ++i) {
    std::vector<T> next;
    next.push_back(stencil(step / std::pow(2.0, i)));
    double factor = 4.0;
    for (const T& above : row) {
      next.push_back((factor * next.back() - above) / (factor - 1.0));
      factor *= 4.0;
    }
    prev = best;
    best = next.back();
    row = std::move(next);
  }
  if (err) *err = levels > 0 ? max_abs_diff(best, prev) : 0.0;
  return best;
}

template <typename F>
auto guard_fd(F&& f) {
  return [f = std::forward<F>(f)](const Vec& x) -> double {
    try {
      return f(EventVector::from_flat(x));
    } catch (const error&) {
      throw accuracy_error("finite differences: stencil point left the valid domain; "
                           "reduce the step or keep a larger sector margin");
    }
  };
}

}  // namespace detail

/// Central-difference gradient of a scalar field with Richardson
/// extrapolation.  `scale` multiplies base_step (pass F/h at the point).
/// Returns the covector estimate and a step-halving error estimate.
inline std::pair<MomentumCovector, double> fd_gradient(const ScalarField& f, const EventVector& x,
                                                       const FDConfig& cfg, double scale = 1.0) {
  const auto fv = detail::guard_fd(f);
  const Vec x0 = x.flat();
  const int n = static_cast<int>(x0.size());
  const double step = cfg.base_step * scale;
  std::function<Vec(double)> stencil = [&](double h) {
    Vec g(n);
    for (int i = 0; i < n; ++i) {
      Vec xp = x0, xm = x0;
      xp[i] += h;
      xm[i] -= h;
      g[i] = (fv(xp) - fv(xm)) / (2.0 * h);
    }
    return g;
  };
  double err = 0.0;
  const Vec g = detail::richardson(stencil, step, cfg.richardson_levels, &err);
  return {MomentumCovector::from_flat(g), err};
}

/// Central-difference Hessian with Richardson extrapolation.  Uses the
/// widened hessian step (see FDConfig).
inline std::pair<Mat, double> fd_hessian(const ScalarField& f, const EventVector& x,
                                         const FDConfig& cfg, double scale = 1.0) {
  const auto fv = detail::guard_fd(f);
  const Vec x0 = x.flat();
  const int n = static_cast<int>(x0.size());
  const double step = cfg.base_step * cfg.hessian_step_factor * scale;
  const double f0 = fv(x0);
  std::function<Mat(double)> stencil = [&](double h) {
    Mat H(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        double v;
        if (i == j) {
          Vec xp = x0, xm = x0;
          xp[i] += h;
          xm[i] -= h;
          v = (fv(xp) - 2.0 * f0 + fv(xm)) / (h * h);
        } else {
          Vec xpp = x0, xpm = x0, xmp = x0, xmm = x0;
          xpp[i] += h; xpp[j] += h;
          xpm[i] += h; xpm[j] -= h;
          xmp[i] -= h; xmp[j] += h;
          xmm[i] -= h; xmm[j] -= h;
          v = (fv(xpp) - fv(xpm) - fv(xmp) + fv(xmm)) / (4.0 * h * h);
        }
        H(i, j) = v;
        H(j, i) = v;
      }
    }
    return H;
  };
  double err = 0.0;
  const Mat H = detail::richardson(stencil, step, cfg.richardson_levels, &err);
  return {H, err};
}

/// Rank-3 array of third derivatives T[r](p,q) = d^3 f / dx^p dx^q dx^r,
/// computed as a central difference of the (non-extrapolated) Hessian with
/// the widened third-derivative step.
inline std::pair<std::vector<Mat>, double> fd_third(const ScalarField& f, const EventVector& x,
                                                    const FDConfig& cfg, double scale = 1.0) {
  const int n = x.dim() + 1;
  const double step = cfg.base_step * cfg.third_step_factor * scale;
  FDConfig inner = cfg;
  inner.richardson_levels = 0;
  auto hess_at = [&](const Vec& flat) {
    return fd_hessian(f, EventVector::from_flat(flat), inner, scale).first;
  };
  const Vec x0 = x.flat();
  std::vector<Mat> T(n);
  double err = 0.0;
  for (int r = 0; r < n; ++r) {
    std::function<Mat(double)> stencil = [&](double h) {
      Vec xp = x0, xm = x0;
      xp[r] += h;
      xm[r] -= h;
      return ((hess_at(xp) - hess_at(xm)) / (2.0 * h)).eval();
    };
    double e = 0.0;
    T[r] = detail::richardson(stencil, step, cfg.richardson_levels, &e);
    err = std::max(err, e);
  }
  return {T, err};
}

// ---------------------------------------------------------------------------
// Deterministic sampling.
// ---------------------------------------------------------------------------

/// Rejection margins of the sampler: points with R^0 < (1+cone)*g_sup_plus*m
/// or m < axis*F are rejected, keeping finite-difference stencils inside the
/// future-timelike sector and away from the axis tube.
struct SampleMargins {
  double cone = 0.05;
  double axis = 1e-3;
};

namespace detail {

// Deterministic uniform doubles in [0,1) from the raw engine bits; the
// standard distributions are implementation-defined, this is not.
struct Rng {
  std::mt19937_64 eng;
  explicit Rng(std::uint64_t seed) : eng(seed) {}
  double unif() { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }
  double sym() { return 2.0 * unif() - 1.0; }  // [-1, 1)
};

inline EventVector sample_one(const CouplingParams& p, Rng& rng, const SampleMargins& margins,
                              int dim) {
  for (;;) {
    const double r0 = 0.5 + 2.5 * rng.unif();
    Vec dir(dim);
    for (;;) {
      for (int i = 0; i < dim; ++i) dir[i] = rng.sym();
      const double nn = dir.norm();
      if (nn > 1e-3 && nn <= 1.0) {
        dir /= nn;
        break;
      }
    }
    const double m = rng.unif() * r0 / ((1.0 + margins.cone) * p.g_sup_plus);
    const EventVector R(r0, m * dir);
    if (m < margins.axis * fmf_F(p, R)) continue;
    return R;
  }
}

}  // namespace detail

/// Deterministic pseudo-random future-timelike points; identical seeds give
/// identical sequences.
inline std::vector<EventVector> sample_timelike(const CouplingParams& p, int count,
                                                std::uint64_t seed, SampleMargins margins = {},
                                                int dim = 3) {
  detail::Rng rng(seed);
  std::vector<EventVector> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) out.push_back(detail::sample_one(p, rng, margins, dim));
  return out;
}

// ---------------------------------------------------------------------------
// Identity catalog and suite.
// ---------------------------------------------------------------------------

/// One per-identity result.
struct IdentityRecord {
  std::string name;
  std::string ref;
  long points = 0;
  double max_rel_err = 0.0;
  double tolerance = 0.0;
  bool pass = true;
};

/// Full suite result.
struct SuiteReport {
  std::vector<IdentityRecord> records;
  std::uint64_t seed = 0;
  int count = 0;
  std::vector<double> g_values;

  bool all_pass() const {
    for (const auto& r : records)
      if (!r.pass) return false;
    return true;
  }
};

namespace detail {

struct CatalogEntry {
  const char* name;
  const char* ref;
  double tolerance;
};

// The identity catalog: one record per identity the suite certifies,
// in report order.  The names are the stable external identifiers used by
// tolerance overrides (prefix match).
inline const std::vector<CatalogEntry>& identity_catalog() {
  static const std::vector<CatalogEntry> catalog = {
      {"det-identity", "A.18", 1e-9},
      {"signature", "A.19", 0.5},
      {"cartan-algebraic-form", "A.20", 1e-3},
      {"cartan-contraction", "A.21", 1e-4},
      {"curvature-constant", "A.22-A.23", 1e-3},
      {"round-trip", "B.5", 1e-12},
      {"isometry", "B.7", 1e-12},
      {"jacobian-euler-forward", "B.10", 1e-10},
      {"jacobian-determinant", "B.11", 1e-9},
      {"jacobian-euler-backward", "B.14", 1e-10},
      {"n-tensor-inversion", "B.16", 1e-10},
      {"n-determinant", "B.19", 1e-12},
      {"n-unit-contractions", "B.17", 1e-10},
      {"christoffel-contractions", "B.26", 1e-10},
      {"fmf-quadratic-law", "2.11-2.12", 1e-9},
      {"product-reduction", "2.16", 1e-12},
      {"distance-symmetry", "2.21", 1e-12},
      {"co-distance-symmetry", "2.27", 1e-12},
      {"velocity-contraction", "2.36", 1e-8},
      {"velocity-normalization", "2.37", 1e-8},
      {"endpoint-interpolation", "2.3-2.10", 1e-9},
      {"shoot-round-trip", "2.38-2.45", 1e-7},
      {"legendre-residual", "A.16", 1e-8},
      {"pseudoeuclidean-limit", "A.33", 1e-6},
  };
  return catalog;
}

// A geodesic test pair: endpoints filtered/rescaled to satisfy the distance
// precondition, alternating between the b > 0 and b < 0 branches.
struct CurvePair {
  EventVector R1, R2;
};

inline std::vector<CurvePair> sample_curve_pairs(const CouplingParams& p, int count,
                                                 std::uint64_t seed, const SampleMargins& margins,
                                                 int dim) {
  Rng rng(seed);
  std::vector<CurvePair> out;
  out.reserve(count);
  int idx = 0;
  while (static_cast<int>(out.size()) < count) {
    const EventVector R1 = sample_one(p, rng, margins, dim);
    EventVector R2 = sample_one(p, rng, margins, dim);
    const double al = angle(p, R1, R2);
    const double F1 = fmf_F(p, R1);
    const double F2 = fmf_F(p, R2);
    const double u = 1.05 + 1.95 * rng.unif();
    // Rescale the far endpoint onto one of the two joinable branches
    // (F2' > F1 e^alpha gives b > 0, F2' < F1 e^-alpha gives b < 0).
    const double lam =
        (idx % 2 == 0) ? F1 * std::exp(al) * u / F2 : F1 * std::exp(-al) / (u * F2);
    out.push_back({R1, lam * R2});
    ++idx;
  }
  return out;
}

// A shooting test triple (start point, unit velocity, arclength), filtered
// so the advance stays inside the future-timelike sector.
struct ShootTriple {
  EventVector R1, U1;
  double delta_s;
};

inline std::vector<ShootTriple> sample_shoot_triples(const CouplingParams& p, int count,
                                                     std::uint64_t seed,
                                                     const SampleMargins& margins, int dim) {
  Rng rng(seed);
  std::vector<ShootTriple> out;
  out.reserve(count);
  int guard = 0;
  while (static_cast<int>(out.size()) < count && guard < 100000) {
    ++guard;
    const EventVector R1 = sample_one(p, rng, margins, dim);
    const EventVector W = sample_one(p, rng, margins, dim);
    const MetricTensor g = metric_tensor(p, R1);
    const Vec w = W.flat();
    const double norm2 = w.dot(g.components * w);
    if (norm2 <= 1e-6) continue;
    const EventVector U1 = (1.0 / std::sqrt(norm2)) * W;
    const double F1 = fmf_F(p, R1);
    const double ds = (0.2 + rng.unif()) * F1;
    const double b = contract(covector_of(p, R1), U1);
    if (F1 * F1 + 2.0 * b * ds + ds * ds <= 0.05 * F1 * F1) continue;
    try {
      const EventVector R2 = shoot(p, R1, U1, ds);
      if (classify_sector(p, R2) != SectorLabel::FutureTimelike) continue;
      const GeodesicCurve c = connect(p, R1, R2);
      if (c.radial || c.delta_s <= 0.0) continue;
    } catch (const error&) {
      continue;
    }
    out.push_back({R1, U1, ds});
  }
  return out;
}

struct ErrAccum {
  double max_err = 0.0;
  long points = 0;
  void add(double e) {
    if (std::isnan(e)) e = 1.0;  // a NaN anywhere must fail, not vanish in max()
    max_err = std::max(max_err, e);
    ++points;
  }
};

inline double rel(double got, double want, double scale) {
  return std::abs(got - want) / std::max({std::abs(want), scale, 1e-300});
}

}  // namespace detail

/// Run the whole identity suite.  One record per catalog entry; failures
/// are recorded, not thrown.
inline SuiteReport run_suite(const std::vector<double>& g_values, int count, std::uint64_t seed,
                             const FDConfig& cfg = {}, int dim = 3) {
  using detail::ErrAccum;
  const SampleMargins margins;
  SuiteReport report;
  report.seed = seed;
  report.count = count;
  report.g_values = g_values;

  std::map<std::string, ErrAccum> acc;
  for (const auto& entry : detail::identity_catalog()) acc[entry.name];

  const int n = dim + 1;
  const Mat e_pq = minkowski_matrix(n);

  int gi = 0;
  for (double g : g_values) {
    const CouplingParams p = derive_params(g);
    const std::uint64_t gseed = seed + 1000003ull * static_cast<std::uint64_t>(gi++);
    const auto pts = sample_timelike(p, count, gseed, margins, dim);

    // --- pointwise identities -------------------------------------------
    for (const EventVector& R : pts) {
      const double F = fmf_F(p, R);
      const double j = weight_j(p, R);
      const MetricTensor gt = metric_tensor(p, R);

      const double j8 = std::pow(j, 8.0);
      acc["det-identity"].add(detail::rel(gt.components.determinant(), -j8, j8));

      acc["signature"].add(positive_eigenvalue_count(gt.components) == 1 ? 0.0 : 1.0);

      // sigma/mu round-trips, isometry, Jacobians, n tensor, Christoffels.
      const QPoint t = sigma(p, R);
      const EventVector back = mu(p, t);
      const QPoint fwd = sigma(p, back);
      const double rscale = R.flat().cwiseAbs().maxCoeff();
      double rt = (back.flat() - R.flat()).cwiseAbs().maxCoeff() / rscale;
      rt = std::max(rt, (fwd.flat() - t.flat()).cwiseAbs().maxCoeff() /
                            t.flat().cwiseAbs().maxCoeff());
      acc["round-trip"].add(rt);

      acc["isometry"].add(std::abs(F - s_norm(t)) / F);

      const JacobianPair J = sigma_jacobian(p, R);
      acc["jacobian-euler-forward"].add(
          (J.forward * R.flat() - t.flat()).cwiseAbs().maxCoeff() /
          t.flat().cwiseAbs().maxCoeff());
      acc["jacobian-euler-backward"].add(
          (J.backward * t.flat() - R.flat()).cwiseAbs().maxCoeff() / rscale);
      const double detw = std::pow(j, double(dim + 1)) * std::pow(p.h, double(dim));
      acc["jacobian-determinant"].add(detail::rel(J.forward.determinant(), detw, detw));

      const NTensorPair nt = n_tensor(p, t);
      acc["n-tensor-inversion"].add(
          (nt.lower * nt.upper - Mat::Identity(n, n)).cwiseAbs().maxCoeff());
      const double h6 = std::pow(p.h, 2.0 * dim);
      double ndet = detail::rel(nt.upper.determinant(), -h6, h6);
      ndet = std::max(ndet, detail::rel(nt.lower.determinant(), -1.0 / h6, 1.0 / h6) );
      acc["n-determinant"].add(ndet);

      const double S = s_norm(t);
      const Vec l_up = t.flat() / S;
      const Vec l_lo = e_pq * l_up;
      double nc = std::abs(l_up.dot(nt.lower * l_up) - 1.0);
      nc = std::max(nc, (nt.lower * l_up - l_lo).cwiseAbs().maxCoeff());
      acc["n-unit-contractions"].add(nc);

      const auto N = christoffel(p, t);
      double nscale = 0.0;
      for (int i = 0; i < n; ++i) nscale = std::max(nscale, N[i].cwiseAbs().maxCoeff());
      const double denom = std::max(1.0, nscale * t.flat().cwiseAbs().maxCoeff());
      double ch = 0.0;
      const Mat H = e_pq - l_lo * l_lo.transpose();
      for (int i = 0; i < n; ++i)
        ch = std::max(ch, (t.flat().transpose() * N[i]).cwiseAbs().maxCoeff() / denom);
      // Trace N^j_mj over the upper/last-lower index pair, and l^i H_ij = 0.
      Vec tr = Vec::Zero(n);
      for (int m2 = 0; m2 < n; ++m2)
        for (int i3 = 0; i3 < n; ++i3) tr[m2] += N[i3](m2, i3);
      ch = std::max(ch, tr.cwiseAbs().maxCoeff() / denom);
      ch = std::max(ch, (l_up.transpose() * H).cwiseAbs().maxCoeff());
      acc["christoffel-contractions"].add(ch);

      // product reduction and Legendre duality.
      acc["product-reduction"].add(std::abs(scalar_product(p, R, R) - F * F) / (F * F));
      acc["legendre-residual"].add(legendre_duality_check(p, R));
    }

    // --- derivative-based identities (finite-difference cost) -----------
    for (const EventVector& R : pts) {
      const double g2 = p.g * p.g;
      const double F = fmf_F(p, R);
      const CartanTensor C = cartan_tensor(p, R);
      const MetricTensor gt = metric_tensor(p, R);

      // Algebraic form of the Cartan tensor.
      const double CtCt = C.contraction.dot(gt.inverse * C.contraction);
      const double NN = double(n);
      acc["cartan-contraction"].add(
          detail::rel(CtCt * F * F, -NN * NN * g2 / 4.0, std::max(1.0, NN * NN * g2 / 4.0)));

      double cnorm = 0.0, fnorm = 0.0;
      if (p.g != 0.0) {
        const Vec l = covector_of(p, R).flat() / F;
        const Mat hm = gt.components - l * l.transpose();
        for (int r = 0; r < n; ++r)
          for (int q = 0; q < n; ++q)
            for (int pp = 0; pp < n; ++pp) {
              const double form = (hm(pp, q) * C.contraction[r] + hm(pp, r) * C.contraction[q] +
                                   hm(q, r) * C.contraction[pp] -
                                   C.contraction[pp] * C.contraction[q] * C.contraction[r] / CtCt) /
                                  NN;
              const double diff = C.components[r](pp, q) - form;
              cnorm += C.components[r](pp, q) * C.components[r](pp, q);
              fnorm += diff * diff;
            }
        acc["cartan-algebraic-form"].add(cnorm > 0 ? std::sqrt(fnorm / cnorm) : 0.0);
      } else {
        double zero = 0.0;
        for (int r = 0; r < n; ++r) zero = std::max(zero, C.components[r].cwiseAbs().maxCoeff());
        acc["cartan-algebraic-form"].add(zero);
      }

      const CurvatureFit fit = curvature_fit(p, R);
      acc["curvature-constant"].add(
          std::max(std::abs(fit.s_star - g2 / 4.0), fit.residual));
    }

    // --- geodesic identities --------------------------------------------
    const auto pairs = detail::sample_curve_pairs(p, count, gseed + 7919, margins, dim);
    for (const auto& pr : pairs) {
      const GeodesicCurve c = connect(p, pr.R1, pr.R2);
      const double sc1 = pr.R1.flat().cwiseAbs().maxCoeff();
      const double sc2 = pr.R2.flat().cwiseAbs().maxCoeff();
      double ep = (eval_point(c, 0.0).flat() - pr.R1.flat()).cwiseAbs().maxCoeff() / sc1;
      ep = std::max(ep, (eval_point(c, c.delta_s).flat() - pr.R2.flat()).cwiseAbs().maxCoeff() / sc2);
      acc["endpoint-interpolation"].add(ep);

      acc["distance-symmetry"].add(
          std::abs(distance(p, pr.R1, pr.R2) - distance(p, pr.R2, pr.R1)) /
          std::max(c.delta_s, 1e-300));

      // Co-space distance symmetry on the Legendre images; pairs whose
      // covector chord is imaginary are skipped (deterministically).
      try {
        const MomentumCovector P1 = covector_of(p, pr.R1);
        const MomentumCovector P2 = covector_of(p, pr.R2);
        const double d12 = co_distance(p, P1, P2);
        const double d21 = co_distance(p, P2, P1);
        acc["co-distance-symmetry"].add(std::abs(d12 - d21) / std::max(d12, 1e-300));
      } catch (const domain_error&) {
      }

      for (int k = 0; k < 100; ++k) {
        const double s = c.delta_s * (k + 0.5) / 100.0;
        const double Fs = std::sqrt(c.a * c.a + 2.0 * c.b * s + s * s);
        const EventVector Rs = eval_point(c, s);
        acc["fmf-quadratic-law"].add(std::abs(fmf_F(p, Rs) - Fs) / Fs);
      }
      for (int k = 0; k < 5; ++k) {
        const double s = c.delta_s * (k + 0.5) / 5.0;
        const EventVector Rs = eval_point(c, s);
        const EventVector U = eval_velocity(c, s);
        const double Fs = std::sqrt(c.a * c.a + 2.0 * c.b * s + s * s);
        acc["velocity-contraction"].add(
            std::abs(contract(covector_of(p, Rs), U) - (c.b + s)) / Fs);
        const Vec u = U.flat();
        acc["velocity-normalization"].add(
            std::abs(u.dot(metric_tensor(p, Rs).components * u) - 1.0));
      }
    }

    const auto triples = detail::sample_shoot_triples(p, std::min(count, 50), gseed + 104729,
                                                      margins, dim);
    for (const auto& tr3 : triples) {
      const EventVector R2 = shoot(p, tr3.R1, tr3.U1, tr3.delta_s);
      const GeodesicCurve c = connect(p, tr3.R1, R2);
      double err = (eval_velocity(c, 0.0).flat() - tr3.U1.flat()).cwiseAbs().maxCoeff();
      err = std::max(err, std::abs(c.delta_s - tr3.delta_s) / tr3.delta_s);
      acc["shoot-round-trip"].add(err);
    }
  }

  // --- the g -> 0 limit record (independent of g_values) -----------------
  {
    const double gsmall = 1e-8;
    const CouplingParams p = derive_params(gsmall);
    const auto pts = sample_timelike(p, std::min(count, 50), seed + 424243, margins, dim);
    for (const EventVector& R : pts) {
      const double F = fmf_F(p, R);
      const double Fpe = std::sqrt(R.r0 * R.r0 - R.r.squaredNorm());
      double err = std::abs(F - Fpe) / Fpe;
      err = std::max(err, (metric_tensor(p, R).components - e_pq).cwiseAbs().maxCoeff());
      const MomentumCovector P = covector_of(p, R);
      const Vec pe_grad = e_pq * R.flat();
      err = std::max(err, (P.flat() - pe_grad).cwiseAbs().maxCoeff() / Fpe);
      acc["pseudoeuclidean-limit"].add(err);
    }
    const auto pairs = detail::sample_curve_pairs(p, std::min(count, 25), seed + 424244,
                                                  margins, dim);
    for (const auto& pr : pairs) {
      const GeodesicCurve c = connect(p, pr.R1, pr.R2);
      const double smid = 0.5 * c.delta_s;
      const EventVector mid = eval_point(c, smid);
      const EventVector straight = pr.R1 + (smid / c.delta_s) * (pr.R2 - pr.R1);
      acc["pseudoeuclidean-limit"].add(
          (mid.flat() - straight.flat()).cwiseAbs().maxCoeff() /
          straight.flat().cwiseAbs().maxCoeff());
      // Co-angle against the plain pseudoeuclidean display.
      const MomentumCovector P1 = covector_of(p, pr.R1);
      const MomentumCovector P2 = covector_of(p, pr.R2);
      const double pe = std::acosh(std::max(
          1.0, (P1.p0 * P2.p0 - P1.p.dot(P2.p)) /
                   std::sqrt((P1.p0 * P1.p0 - P1.p.squaredNorm()) *
                             (P2.p0 * P2.p0 - P2.p.squaredNorm()))));
      acc["pseudoeuclidean-limit"].add(
          std::abs(co_angle(p, P1, P2) - pe) / std::max(pe, 1.0));
    }
  }

  // --- assemble the report ----------------------------------------------
  for (const auto& entry : detail::identity_catalog()) {
    IdentityRecord rec;
    rec.name = entry.name;
    rec.ref = entry.ref;
    rec.tolerance = entry.tolerance;
    for (const auto& [prefix, tol] : cfg.tolerances)
      if (rec.name.rfind(prefix, 0) == 0) rec.tolerance = tol;
    const ErrAccum& a = acc[rec.name];
    rec.points = a.points;
    rec.max_rel_err = a.max_err;
    rec.pass = a.max_err <= rec.tolerance;
    report.records.push_back(std::move(rec));
  }
  return report;
}

/// True when a tolerance-override prefix matches at least one identity
/// name — used by the CLI to reject typos as usage errors.
inline bool tolerance_prefix_known(const std::string& prefix) {
  for (const auto& entry : detail::identity_catalog())
    if (std::string(entry.name).rfind(prefix, 0) == 0) return true;
  return false;
}

/// Line-oriented report serialization: one identity per line
/// (name, ref, points, max_rel_err, pass), with a comment header.
inline std::string suite_report_csv(const SuiteReport& r) {
  std::string out = "# suite seed=" + fmt_int(static_cast<long long>(r.seed)) +
                    " count=" + fmt_int(r.count) + " g=";
  for (size_t i = 0; i < r.g_values.size(); ++i) {
    if (i) out += ' ';
    out += fmt_double(r.g_values[i]);
  }
  out += "\nname,ref,points,max_rel_err,pass\n";
  for (const auto& rec : r.records) {
    out += rec.name + ',' + rec.ref + ',' + fmt_int(rec.points) + ',' +
           fmt_double(rec.max_rel_err) + ',' + (rec.pass ? "pass" : "fail") + '\n';
  }
  out += std::string("# result: ") + (r.all_pass() ? "all identities pass" : "FAILURES present") +
         '\n';
  return out;
}

/// json-lines serialization: one JSON object per identity.
inline std::string suite_report_jsonl(const SuiteReport& r) {
  std::string out;
  for (const auto& rec : r.records) {
    out += JsonObject()
               .field("name", rec.name)
               .field("ref", rec.ref)
               .field("points", static_cast<long long>(rec.points))
               .field("max_rel_err", rec.max_rel_err)
               .field("tolerance", rec.tolerance)
               .field("pass", rec.pass)
               .str() +
           '\n';
  }
  return out;
}

}  // namespace fsr
