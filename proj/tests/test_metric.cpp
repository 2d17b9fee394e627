#include <finsleroid/metric.hpp>
#include <finsleroid/verify.hpp>

#include <catch2/catch_amalgamated.hpp>

using namespace fsr;
using Catch::Approx;

namespace {
EventVector ev(double r0, double r1, double r2 = 0.0, double r3 = 0.0) {
  Vec r(3);
  r << r1, r2, r3;
  return EventVector(r0, r);
}
}  // namespace

TEST_CASE("metric function and weight at the reference point") {
  // g = 3/2, R = (3, 1, 0, 0): the cone factors are 1 and 7/2, so every
  // scalar reduces to a power of 3.5 evaluated independently to 17 digits.
  const CouplingParams p = derive_params(1.5);
  const EventVector R = ev(3.0, 1.0);
  CHECK(quadratic_form_B(p, R) == Approx(-3.5).margin(1e-15));
  CHECK(func_A(p, R) == Approx(2.25).margin(1e-15));
  CHECK(func_L(p, R) == Approx(-1.25).margin(1e-15));
  CHECK(fmf_F(p, R) == Approx(2.7242968954290978).epsilon(1e-15));   // 3.5^0.8
  CHECK(weight_j(p, R) == Approx(1.4561979432210857).epsilon(1e-15));  // 3.5^0.3
  // F = sqrt(|B|) j.
  CHECK(fmf_F(p, R) ==
        Approx(std::sqrt(3.5) * weight_j(p, R)).epsilon(1e-15));
}

TEST_CASE("A^2 - h^2 m^2 = -B in every sector") {
  const CouplingParams p = derive_params(0.8);
  for (const auto& R : {ev(3.0, 1.0, 0.5), ev(1.0, 2.0, -1.0), ev(-2.5, 0.3, 0.1),
                        ev(0.2, 1.0, 1.0), ev(5.0, 0.0, 0.0)}) {
    const double A = func_A(p, R);
    const double m = spatial_norm(R);
    CHECK(A * A - p.h * p.h * m * m ==
          Approx(-quadratic_form_B(p, R)).margin(1e-12));
  }
}

TEST_CASE("F is positively homogeneous of degree one") {
  const CouplingParams p = derive_params(1.2);
  const EventVector R = ev(2.0, 0.7, -0.3, 0.2);
  const double F = fmf_F(p, R);
  for (double lam : {0.5, 2.0, 7.25}) {
    CHECK(fmf_F(p, lam * R) == Approx(lam * F).epsilon(1e-14));
  }
}

TEST_CASE("F at g = 0 is the pseudoeuclidean interval") {
  const CouplingParams p = derive_params(0.0);
  const EventVector R = ev(2.0, 1.0);
  CHECK(fmf_F(p, R) == Approx(std::sqrt(3.0)).epsilon(1e-15));
}

TEST_CASE("reflection exchanges the sign of g") {
  const CouplingParams pp = derive_params(1.5);
  const CouplingParams pm = derive_params(-1.5);
  const EventVector R = ev(3.0, 1.0, 0.4, -0.2);
  CHECK(fmf_F(pp, -1.0 * R) == Approx(fmf_F(pm, R)).epsilon(1e-14));
}

TEST_CASE("F covers all sectors, vanishing exactly on the cones") {
  const CouplingParams p = derive_params(1.5);
  CHECK(fmf_F(p, ev(1.0, 1.0)) > 0.0);       // spacelike
  CHECK(fmf_F(p, ev(-3.0, 1.0)) > 0.0);      // past timelike
  CHECK(fmf_F(p, ev(2.0, 1.0)) == 0.0);      // future isotropic
  CHECK(fmf_F(p, ev(-0.5, 1.0)) == 0.0);     // past isotropic
  CHECK_THROWS_AS(fmf_F(p, ev(0.0, 0.0)), domain_error);
  CHECK_THROWS_AS(weight_j(p, ev(2.0, 1.0)), singularity_error);
}

TEST_CASE("covector of the reference point and the Euler relation") {
  const CouplingParams p = derive_params(1.5);
  const EventVector R = ev(3.0, 1.0);
  const MomentumCovector P = covector_of(p, R);
  CHECK(P.p0 == Approx(3.1807686747619804).epsilon(1e-14));   // 1.5 * 3.5^0.6
  CHECK(P.p[0] == Approx(-2.1205124498413202).epsilon(1e-14));
  CHECK(P.p[1] == 0.0);
  const double F = fmf_F(p, R);
  CHECK(contract(P, R) == Approx(F * F).epsilon(1e-14));
  CHECK_THROWS_AS(covector_of(p, ev(2.0, 1.0)), singularity_error);
}

TEST_CASE("covector is the gradient of F^2 / 2") {
  const CouplingParams p = derive_params(1.1);
  const EventVector R = ev(2.4, 0.8, 0.4, -0.3);
  const FDConfig cfg;
  const auto half_f2 = [&](const EventVector& X) {
    const double F = fmf_F(p, X);
    return 0.5 * F * F;
  };
  const auto [G, err] = fd_gradient(half_f2, R, cfg, fmf_F(p, R) / p.h);
  const MomentumCovector P = covector_of(p, R);
  CHECK((G.flat() - P.flat()).cwiseAbs().maxCoeff() < 1e-9);
}
