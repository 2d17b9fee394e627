#include <finsleroid/geodesics.hpp>
#include <finsleroid/tensor.hpp>

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

TEST_CASE("angle basics") {
  const CouplingParams p = derive_params(1.5);
  const EventVector R1 = ev(3.0, 1.0, 0.2, -0.1);
  const EventVector R2 = ev(5.0, 0.4, 1.1, 0.6);
  CHECK(angle(p, R1, R1) == 0.0);  // exact, not merely small
  CHECK(angle(p, R1, R2) == Approx(angle(p, R2, R1)).margin(1e-14));
  CHECK(angle(p, 3.0 * R1, 0.5 * R2) == Approx(angle(p, R1, R2)).epsilon(1e-13));
  CHECK(angle(p, R1, R2) > 0.0);
  CHECK_THROWS_AS(angle(p, ev(1.0, 1.0), R2), domain_error);  // spacelike argument
}

TEST_CASE("axis and equatorial angles at the reference point") {
  const CouplingParams p = derive_params(1.5);
  const EventVector R = ev(3.0, 1.0);
  // (1/h) arccosh(A/sqrt|B|) with A = 9/4, |B| = 7/2.
  CHECK(axis_angle(p, R) == Approx(0.5011051873981472).epsilon(1e-14));
  CHECK(std::cosh(p.h * axis_angle(p, R)) ==
        Approx(func_A(p, R) / std::sqrt(3.5)).epsilon(1e-14));
  // A^2 - h^2 m^2 = -B gives sinh(h*axis)^2 = h^2 m^2 / |B|.
  const double sa = std::sinh(p.h * axis_angle(p, R));
  CHECK(sa * sa == Approx(p.h * p.h * 1.0 / 3.5).epsilon(1e-12));
  // The equatorial angle needs L/sqrt|B| >= 1.  Future-timelike vectors at
  // g > 0 always have L < 0, so it is undefined at the reference point.
  CHECK_THROWS_AS(equatorial_angle(p, R), domain_error);
  // On the equatorial plane itself (R^0 = 0): L = m, B = m^2, argument 1.
  CHECK(equatorial_angle(p, ev(0.0, 1.0)) == 0.0);
  // Just below the plane: L = 1.15, B = 0.66, argument 1.15/sqrt(0.66) > 1.
  const double ea = equatorial_angle(p, ev(-0.2, 1.0));
  CHECK(std::cosh(p.h * ea) * std::sqrt(0.66) == Approx(1.15).epsilon(1e-14));
}

TEST_CASE("scalar product reduces to F^2 on the diagonal") {
  const CouplingParams p = derive_params(1.5);
  const EventVector R = ev(3.0, 1.0);
  CHECK(scalar_product(p, R, R) == Approx(7.4217935744446208).epsilon(1e-14));  // 3.5^1.6
}

TEST_CASE("distance symmetry and the radial degeneration") {
  const CouplingParams p = derive_params(1.1);
  const EventVector R1 = ev(3.0, 1.0, 0.2, -0.1);
  const EventVector R2 = ev(7.0, 0.4, 1.1, 0.6);
  CHECK(distance(p, R1, R2) == Approx(distance(p, R2, R1)).margin(1e-12));
  // Parallel endpoints: distance is the norm difference.
  const double F1 = fmf_F(p, R1);
  CHECK(distance(p, R1, 3.0 * R1) == Approx(2.0 * F1).epsilon(1e-13));
  CHECK(distance(p, R1, R1) == 0.0);
}

TEST_CASE("connect caches the curve and reproduces the endpoints") {
  const CouplingParams p = derive_params(1.5);
  const EventVector R1 = ev(3.0, 1.0, 0.0, 0.0);
  const EventVector R2 = ev(6.0, 1.0, 1.0, 0.5);
  const GeodesicCurve c = connect(p, R1, R2);
  CHECK(c.a == Approx(fmf_F(p, R1)).epsilon(1e-15));
  CHECK_FALSE(c.radial);
  CHECK(c.delta_s > 0.0);
  // Endpoint gate.
  CHECK((eval_point(c, 0.0).flat() - R1.flat()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((eval_point(c, c.delta_s).flat() - R2.flat()).cwiseAbs().maxCoeff() < 1e-9);
  // The quadratic law F(s)^2 = a^2 + 2 b s + s^2 holds off the endpoints.
  for (double f : {0.25, 0.5, 0.75}) {
    const double s = f * c.delta_s;
    const EventVector Rs = eval_point(c, s);
    CHECK(fmf_F(p, Rs) ==
          Approx(std::sqrt(c.a * c.a + 2.0 * c.b * s + s * s)).epsilon(1e-12));
  }
  // Distance consistency: delta_s is the distance between the endpoints.
  CHECK(c.delta_s == Approx(distance(p, R1, R2)).epsilon(1e-14));
}

TEST_CASE("the b coefficient is signed") {
  const CouplingParams p = derive_params(1.0);
  const EventVector R1 = ev(3.0, 0.5, 0.2, 0.0);
  const double F1 = fmf_F(p, R1);
  // Shrinking far endpoint: F2 << F1 forces b < 0 (the norm first decreases).
  const EventVector R2 = ev(3.2, 0.45, 0.28, 0.05);
  const EventVector R2_small = (0.2 * F1 / fmf_F(p, R2)) * R2;
  const GeodesicCurve c = connect(p, R1, R2_small);
  CHECK(c.b < 0.0);
  // F(delta_s) must still equal F2: with b >= F1 forced positive this
  // would be impossible.
  CHECK(std::sqrt(c.a * c.a + 2.0 * c.b * c.delta_s + c.delta_s * c.delta_s) ==
        Approx(fmf_F(p, R2_small)).epsilon(1e-12));
}

TEST_CASE("velocity identities along a curve") {
  const CouplingParams p = derive_params(1.5);
  const GeodesicCurve c = connect(p, ev(3.0, 1.0, 0.0, 0.0), ev(6.0, 1.0, 1.0, 0.5));
  for (double f : {0.0, 0.3, 0.6, 1.0}) {
    const double s = f * c.delta_s;
    const EventVector Rs = eval_point(c, s);
    const EventVector U = eval_velocity(c, s);
    INFO("s/delta_s = " << f);
    // P(R(s)) . U = b + s  and  g(U, U) = 1.
    CHECK(contract(covector_of(p, Rs), U) == Approx(c.b + s).epsilon(1e-12));
    const MetricTensor g = metric_tensor(p, Rs);
    CHECK(U.flat().dot(g.components * U.flat()) == Approx(1.0).margin(1e-11));
    // The closed form agrees with the chain-rule route through the image
    // space, which shares no code with it beyond sigma/mu.
    const EventVector U2 = eval_velocity_image_route(c, s);
    CHECK((U.flat() - U2.flat()).cwiseAbs().maxCoeff() < 1e-11);
  }
}

TEST_CASE("geodesics at g = 0 are straight segments") {
  const CouplingParams p = derive_params(0.0);
  const EventVector R1 = ev(3.0, 1.0, 0.2, -0.1);
  const EventVector R2 = ev(6.0, 0.4, 1.1, 0.6);
  const GeodesicCurve c = connect(p, R1, R2);
  for (double f : {0.2, 0.5, 0.8}) {
    const double s = f * c.delta_s;
    const EventVector straight = R1 + (s / c.delta_s) * (R2 - R1);
    CHECK((eval_point(c, s).flat() - straight.flat()).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(std::abs(nonplanarity(c, s)) < 1e-14);
    const EventVector U = eval_velocity(c, s);
    const Vec chord = (R2.flat() - R1.flat()) / c.delta_s;
    CHECK((U.flat() - chord).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("radial curves run along their ray") {
  const CouplingParams p = derive_params(1.5);
  const EventVector R1 = ev(3.0, 1.0, 0.5, 0.0);
  const EventVector R2 = 2.5 * R1;
  const GeodesicCurve c = connect(p, R1, R2);
  CHECK(c.radial);
  CHECK(c.alpha == 0.0);
  const double F1 = fmf_F(p, R1);
  CHECK(c.delta_s == Approx(1.5 * F1).epsilon(1e-13));
  CHECK(c.b == Approx(F1).epsilon(1e-15));
  const double s = 0.4 * c.delta_s;
  const EventVector Rs = eval_point(c, s);
  CHECK((Rs.flat() - ((F1 + s) / F1) * R1.flat()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(nonplanarity(c, s) == 0.0);
  const EventVector U = eval_velocity(c, s);
  CHECK((U.flat() - R1.flat() / F1).cwiseAbs().maxCoeff() < 1e-13);
  // Coincident endpoints collapse to a point with outward tie-break.
  const GeodesicCurve c0 = connect(p, R1, R1);
  CHECK(c0.radial);
  CHECK(c0.delta_s == 0.0);
  CHECK(c0.b == Approx(F1).epsilon(1e-15));
}

TEST_CASE("nonplanarity vanishes at the endpoints and spans in between") {
  const CouplingParams p = derive_params(1.5);
  const GeodesicCurve c = connect(p, ev(3.0, 1.0, 0.0, 0.0), ev(6.0, 1.0, 1.0, 0.5));
  CHECK(std::abs(nonplanarity(c, 0.0)) < 1e-12);
  CHECK(std::abs(nonplanarity(c, c.delta_s)) < 1e-10);
  const double smid = 0.5 * c.delta_s;
  CHECK(std::abs(nonplanarity(c, smid)) > 1e-3);  // genuinely non-planar for g != 0
  // Spatial components stay inside the plane of the endpoints; the excess
  // is purely the time-axis component X.
  const auto [c1, c2] = span_coefficients(c, smid);
  const EventVector Rs = eval_point(c, smid);
  const Vec spatial_residual = Rs.r - c1 * c.R1.r - c2 * c.R2.r;
  CHECK(spatial_residual.cwiseAbs().maxCoeff() < 1e-12);
  CHECK(Rs.r0 - c1 * c.R1.r0 - c2 * c.R2.r0 == Approx(nonplanarity(c, smid)).margin(1e-12));
}

TEST_CASE("intermediate angle interpolates from 0 to alpha") {
  const CouplingParams p = derive_params(1.3);
  const EventVector R1 = ev(3.0, 1.0, 0.2, -0.1);
  const EventVector R2a = ev(6.0, 0.4, 1.1, 0.6);
  const GeodesicCurve c = connect(p, R1, R2a);
  const EventVector mid = eval_point(c, 0.5 * c.delta_s);
  // The angle to the start grows monotonically and closes on alpha.
  const double nu_mid = angle(p, R1, mid);
  CHECK(nu_mid > 0.0);
  CHECK(nu_mid < c.alpha);
  CHECK(angle(p, R1, eval_point(c, c.delta_s)) == Approx(c.alpha).epsilon(1e-10));
  // Additivity along the curve: angle(R1, R(s)) + angle(R(s), R2) = alpha.
  CHECK(nu_mid + angle(p, mid, R2a) == Approx(c.alpha).epsilon(1e-10));
}

TEST_CASE("shoot reproduces connect") {
  const CouplingParams p = derive_params(1.5);
  const EventVector R1 = ev(3.0, 1.0, 0.0, 0.0);
  const EventVector R2 = ev(6.0, 1.0, 1.0, 0.5);
  const GeodesicCurve c = connect(p, R1, R2);
  const EventVector U1 = eval_velocity(c, 0.0);
  const EventVector R2_shot = shoot(p, R1, U1, c.delta_s);
  CHECK((R2_shot.flat() - R2.flat()).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("radial shoot advances along the ray") {
  const CouplingParams p = derive_params(1.2);
  const EventVector R1 = ev(3.0, 0.8, 0.1, 0.0);
  const double F1 = fmf_F(p, R1);
  const EventVector U1 = (1.0 / F1) * R1;
  const EventVector R2 = shoot(p, R1, U1, 2.0);
  CHECK((R2.flat() - ((F1 + 2.0) / F1) * R1.flat()).cwiseAbs().maxCoeff() < 1e-11);
}

TEST_CASE("shoot demands a unit velocity") {
  const CouplingParams p = derive_params(1.5);
  const EventVector R1 = ev(3.0, 1.0, 0.0, 0.0);
  CHECK_THROWS_AS(shoot(p, R1, 2.0 * eval_velocity(connect(p, R1, ev(6.0, 1.0, 1.0, 0.5)), 0.0),
                        1.0),
                  precondition_error);
}

TEST_CASE("geodesic residual against the sprays") {
  const CouplingParams p = derive_params(1.5);
  const GeodesicCurve c = connect(p, ev(3.0, 1.0, 0.0, 0.0), ev(6.0, 1.0, 1.0, 0.5));
  for (double f : {0.25, 0.5, 0.75}) {
    CHECK(geodesic_residual(p, c, f * c.delta_s) < 1e-4);
  }
}

TEST_CASE("arclength quadrature recovers delta_s") {
  const CouplingParams p = derive_params(1.5);
  const GeodesicCurve c = connect(p, ev(3.0, 1.0, 0.0, 0.0), ev(6.0, 1.0, 1.0, 0.5));
  CHECK(std::abs(arclength_quadrature(c) - c.delta_s) < 1e-6);
}

TEST_CASE("connect rejects chords with imaginary length") {
  const CouplingParams p = derive_params(1.5);
  const EventVector R1 = ev(3.0, 1.0, 0.2, -0.1);
  // A far endpoint with the same norm but nonzero angle: the radicand
  // F1^2 + F2^2 - 2 F1 F2 cosh(alpha) < 0.
  EventVector R2 = ev(3.0, 0.2, 1.0, 0.1);
  R2 = (fmf_F(p, R1) / fmf_F(p, R2)) * R2;
  CHECK_THROWS_AS(connect(p, R1, R2), domain_error);
}

TEST_CASE("evaluation range is gated") {
  const CouplingParams p = derive_params(1.5);
  const GeodesicCurve c = connect(p, ev(3.0, 1.0, 0.0, 0.0), ev(6.0, 1.0, 1.0, 0.5));
  CHECK_THROWS_AS(eval_point(c, -0.5), domain_error);
  CHECK_THROWS_AS(eval_point(c, c.delta_s * 1.5), domain_error);
  GeodesicCurve open = c;
  open.allow_extrapolation = true;
  CHECK_NOTHROW(eval_point(open, c.delta_s * 1.05));
}
