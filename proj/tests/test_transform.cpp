#include <finsleroid/transform.hpp>
#include <finsleroid/metric.hpp>

#include <catch2/catch_amalgamated.hpp>

using namespace fsr;
using Catch::Approx;

namespace {
EventVector ev(double r0, double r1, double r2 = 0.0, double r3 = 0.0) {
  Vec r(3);
  r << r1, r2, r3;
  return EventVector(r0, r);
}
const std::vector<EventVector> kPoints = {
    ev(3.0, 1.0), ev(2.5, 0.8, 0.3, -0.2), ev(4.0, 0.1, 1.4, 0.9), ev(2.0, 0.0)};
}  // namespace

TEST_CASE("sigma at the reference point") {
  const CouplingParams p = derive_params(1.5);
  const QPoint t = sigma(p, ev(3.0, 1.0));
  CHECK(t.t0 == Approx(3.2764453722474428).epsilon(1e-14));    // 2.25 * 3.5^0.3
  CHECK(t.t[0] == Approx(1.8202474290263571).epsilon(1e-14));  // 1.25 * 3.5^0.3
  CHECK(t.t[1] == 0.0);
}

TEST_CASE("sigma is an isometry onto the pseudoeuclidean norm") {
  for (double g : {0.0, 0.7, 1.5, -1.1}) {
    const CouplingParams p = derive_params(g);
    for (const auto& R : kPoints) {
      const QPoint t = sigma(p, R);
      CHECK(s_norm(t) == Approx(fmf_F(p, R)).epsilon(1e-13));
    }
  }
}

TEST_CASE("mu inverts sigma and sigma inverts mu") {
  const CouplingParams p = derive_params(1.5);
  for (const auto& R : kPoints) {
    const QPoint t = sigma(p, R);
    const EventVector back = mu(p, t);
    CHECK((back.flat() - R.flat()).cwiseAbs().maxCoeff() < 1e-13);
    const QPoint fwd = sigma(p, back);
    CHECK((fwd.flat() - t.flat()).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("sigma at g = 0 is the identity") {
  const CouplingParams p = derive_params(0.0);
  const EventVector R = ev(2.0, 1.0, -0.5, 0.25);
  const QPoint t = sigma(p, R);
  CHECK((t.flat() - R.flat()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("jacobians satisfy the Euler contractions and determinant identity") {
  const CouplingParams p = derive_params(1.5);
  for (const auto& R : kPoints) {
    const QPoint t = sigma(p, R);
    const JacobianPair J = sigma_jacobian(p, R);
    // Degree-one homogeneity in both directions.
    CHECK((J.forward * R.flat() - t.flat()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((J.backward * t.flat() - R.flat()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((J.forward * J.backward - Mat::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);
    const double j = weight_j(p, R);
    CHECK(J.forward.determinant() ==
          Approx(std::pow(j, 4.0) * std::pow(p.h, 3.0)).epsilon(1e-12));
  }
}

TEST_CASE("jacobian determinant at the reference point") {
  const CouplingParams p = derive_params(1.5);
  const JacobianPair J = sigma_jacobian(p, ev(3.0, 1.0));
  CHECK(J.forward.determinant() == Approx(8.7823692381485111).epsilon(1e-13));
}

TEST_CASE("forward jacobian is the finite-difference derivative of sigma") {
  const CouplingParams p = derive_params(1.2);
  const EventVector R = ev(2.6, 0.7, 0.4, -0.3);
  const JacobianPair J = sigma_jacobian(p, R);
  const double step = 1e-6 * fmf_F(p, R);
  Mat fd(4, 4);
  for (int q = 0; q < 4; ++q) {
    Vec xp = R.flat(), xm = R.flat();
    xp[q] += step;
    xm[q] -= step;
    fd.col(q) = (sigma(p, EventVector::from_flat(xp)).flat() -
                 sigma(p, EventVector::from_flat(xm)).flat()) /
                (2.0 * step);
  }
  CHECK((J.forward - fd).cwiseAbs().maxCoeff() < 1e-7);
}

TEST_CASE("n tensor pair inverts and has the fixed determinants") {
  const CouplingParams p = derive_params(1.5);
  const QPoint t = sigma(p, ev(3.0, 1.0, 0.4, 0.2));
  const NTensorPair nt = n_tensor(p, t);
  CHECK((nt.lower * nt.upper - Mat::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-13);
  const double h6 = std::pow(p.h, 6.0);  // 1.25^6 = 3.814697265625 exactly
  CHECK(nt.upper.determinant() == Approx(-h6).epsilon(1e-13));
  CHECK(nt.lower.determinant() == Approx(-1.0 / h6).epsilon(1e-13));
  // Unit contractions: n_ij l^i l^j = 1 and n_ij l^j = l_i.
  const double S = s_norm(t);
  const Vec l_up = t.flat() / S;
  const Vec l_lo = minkowski_matrix(4) * l_up;
  CHECK(l_up.dot(nt.lower * l_up) == Approx(1.0).margin(1e-13));
  CHECK((nt.lower * l_up - l_lo).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("christoffel coefficients contract to zero with the position") {
  const CouplingParams p = derive_params(1.4);
  const QPoint t = sigma(p, ev(2.8, 0.9, -0.2, 0.5));
  const auto N = christoffel(p, t);
  REQUIRE(N.size() == 4);
  double worst = 0.0;
  Vec tr = Vec::Zero(4);
  for (int i = 0; i < 4; ++i) {
    worst = std::max(worst, (t.flat().transpose() * N[i]).cwiseAbs().maxCoeff());
    for (int m = 0; m < 4; ++m) tr[m] += N[i](m, i);
  }
  CHECK(worst < 1e-13);
  CHECK(tr.cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("christoffel matches the finite-difference derivative of n") {
  // n_{ij,k} = (G^2/4)(H_ik l_j + H_jk l_i)/S with H = e - l l^T; the
  // christoffel coefficients are built from the same pieces, so comparing
  // against a raw finite difference of n ties both to the actual geometry.
  const CouplingParams p = derive_params(1.5);
  const QPoint t = sigma(p, ev(3.0, 0.8, 0.5, -0.3));
  const double S = s_norm(t);
  const Vec l_up = t.flat() / S;
  const Vec l_lo = minkowski_matrix(4) * l_up;
  const Mat H = minkowski_matrix(4) - l_lo * l_lo.transpose();
  const double c = (p.G * p.G / 4.0) / S;
  const double step = 1e-5 * S;
  for (int k = 0; k < 4; ++k) {
    Vec xp = t.flat(), xm = t.flat();
    xp[k] += step;
    xm[k] -= step;
    const Mat d = (n_tensor(p, QPoint::from_flat(xp)).lower -
                   n_tensor(p, QPoint::from_flat(xm)).lower) /
                  (2.0 * step);
    const Mat expect = c * (H.col(k) * l_lo.transpose() + l_lo * H.col(k).transpose());
    CHECK((d - expect).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("transform error contract") {
  const CouplingParams p = derive_params(1.5);
  CHECK_THROWS_AS(sigma(p, ev(1.0, 1.0)), domain_error);         // spacelike
  CHECK_THROWS_AS(sigma(p, ev(2.0, 1.0)), singularity_error);    // on the cone
  Vec tv(3);
  tv << 2.0, 0.0, 0.0;
  CHECK_THROWS_AS(mu(p, QPoint::make(1.0, tv)), domain_error);       // outside the q-cone
  CHECK_THROWS_AS(mu(p, QPoint::make(2.0, tv)), singularity_error);  // on the q-cone
  CHECK_THROWS_AS(n_tensor(p, QPoint::make(2.0, tv)), domain_error);  // S = 0
}

TEST_CASE("axis points transform smoothly") {
  const CouplingParams p = derive_params(1.5);
  const EventVector R = ev(2.0, 0.0);
  const QPoint t = sigma(p, R);
  CHECK(t.t0 == Approx(2.0).margin(1e-15));
  CHECK(t.t.cwiseAbs().maxCoeff() == 0.0);
  const JacobianPair J = sigma_jacobian(p, R);
  CHECK((J.forward * J.backward - Mat::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);
  const EventVector back = mu(p, t);
  CHECK((back.flat() - R.flat()).cwiseAbs().maxCoeff() < 1e-14);
}
