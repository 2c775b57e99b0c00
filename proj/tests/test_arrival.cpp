#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "toa/arrival.hpp"
#include "toa/errors.hpp"
#include "toa/propagator.hpp"
#include "toa/units.hpp"
#include "toa/wavepacket.hpp"

using namespace toa;

namespace {

const InternalAtom kCs = to_internal(resolve_species("Cs133"));

RealArray linspace(double a, double b, Index n) {
  return RealArray::LinSpaced(n, a, b);
}

ArrivalDistribution triangle(double left, double peak, double right) {
  RealArray t(3), d(3);
  t << left, peak, right;
  d << 0.0, 2.0 / (right - left), 0.0;
  return {t, d, 1.0, true};
}

// synthetic record: survivor is a ground Gaussian at center with momentum k_c
PropagationRecord synthetic_record(const Grid& g, double center, double k_c,
                                   double surviving, double p2_end) {
  SpinorField f(g);
  const double width = 0.3;
  for (Index j = 0; j < g.size(); ++j) {
    const double x = g.x(j);
    f.ground[j] = std::exp(-(x - center) * (x - center) / (2.0 * width * width)) *
                  std::exp(I * k_c * x);
  }
  f.ground *= std::sqrt(surviving / f.norm());
  RealArray p2 = RealArray::Zero(11);
  p2[10] = p2_end;
  return {linspace(0.0, 1.0, 11), linspace(1.0, surviving, 11), std::move(p2), 0.0,
          std::move(f)};
}

}  // namespace

TEST_CASE("trapezoid quadrature") {
  const RealArray t = linspace(0.0, 2.0, 21);
  CHECK(trapezoid(t, RealArray(3.0 * t + 1.0)) == doctest::Approx(8.0).epsilon(1e-14));
  CHECK(trapezoid(t, RealArray::Zero(21)) == 0.0);
}

TEST_CASE("gamma P2 estimator is elementwise") {
  const RealArray t = linspace(0.0, 1.0, 11);
  RealArray p2(11);
  for (Index i = 0; i < 11; ++i) p2[i] = std::sin(t[i]);
  const ArrivalDistribution d = pi_from_p2(t, p2, 33.3);
  for (Index i = 0; i < 11; ++i) CHECK(d.density[i] == doctest::Approx(33.3 * p2[i]));
  CHECK(d.total_mass == doctest::Approx(trapezoid(t, RealArray(33.3 * p2))).epsilon(1e-14));
  CHECK(!d.normalized);

  const ArrivalDistribution dark = pi_from_p2(t, RealArray::Zero(11), 33.3);
  CHECK(dark.density.abs().maxCoeff() == 0.0);
  CHECK(dark.total_mass == 0.0);
}

TEST_CASE("finite-difference estimator against exponential decay") {
  const double lambda = 2.0;
  const RealArray t = linspace(0.0, 2.0, 201);  // h = 0.01
  const ArrivalDistribution d = pi_from_norm_fd(t, RealArray((-lambda * t).exp()));
  double worst_interior = 0.0, worst_edge = 0.0;
  for (Index i = 0; i < t.size(); ++i) {
    const double expect = lambda * std::exp(-lambda * t[i]);
    const double rel = std::abs(d.density[i] - expect) / expect;
    if (i == 0 || i + 1 == t.size())
      worst_edge = std::max(worst_edge, rel);
    else
      worst_interior = std::max(worst_interior, rel);
  }
  CHECK(worst_interior < 1e-4);  // central difference, (h lambda)^2 / 6
  CHECK(worst_edge < 3e-4);      // one-sided ends, same order
  CHECK(d.total_mass == doctest::Approx(1.0 - std::exp(-4.0)).epsilon(1e-3));
}

TEST_CASE("constant norm has zero arrival density") {
  const RealArray t = linspace(0.0, 1.0, 21);
  const ArrivalDistribution d = pi_from_norm_fd(t, RealArray::Constant(21, 0.37));
  CHECK(d.density.abs().maxCoeff() < 1e-13);
}

TEST_CASE("finite differences need a uniform increasing time grid") {
  RealArray t(4), nn(4);
  t << 0.0, 0.1, 0.25, 0.3;
  nn << 1.0, 0.9, 0.8, 0.7;
  CHECK_THROWS_AS(pi_from_norm_fd(t, nn), std::invalid_argument);
  RealArray two(2), n2(2);
  two << 0.0, 0.1;
  n2 << 1.0, 0.9;
  CHECK_THROWS_AS(pi_from_norm_fd(two, n2), std::invalid_argument);
}

TEST_CASE("both estimators are linear in the mixture") {
  const RealArray t = linspace(0.0, 2.0, 41);
  const RealArray n1 = (-1.0 * t).exp();
  const RealArray n2 = (-3.0 * t).exp();
  const RealArray mix = 0.3 * n1 + 0.7 * n2;
  const ArrivalDistribution dm = pi_from_norm_fd(t, mix);
  const ArrivalDistribution d1 = pi_from_norm_fd(t, n1);
  const ArrivalDistribution d2 = pi_from_norm_fd(t, n2);
  const RealArray expect = 0.3 * d1.density + 0.7 * d2.density;
  CHECK((dm.density - expect).abs().maxCoeff() < 1e-12);

  const ArrivalDistribution pm = pi_from_p2(t, mix, 5.0);
  const RealArray pe = 0.3 * pi_from_p2(t, n1, 5.0).density + 0.7 * pi_from_p2(t, n2, 5.0).density;
  CHECK((pm.density - pe).abs().maxCoeff() < 1e-12);
}

TEST_CASE("fraction preconditions on synthetic survivors") {
  const Grid g(-6.0, 6.0, 512);

  SUBCASE("clean reflected survivor passes") {
    const PropagationRecord rec = synthetic_record(g, -3.0, -5.0, 0.1, 0.0);
    const FractionDiagnostics diag = fraction_diagnostics(rec, 33.3, 0.0);
    CHECK(diag.converged);
    CHECK(diag.mean_k_ground < 0.0);
    CHECK(diag.ground_fraction == doctest::Approx(1.0));
    CHECK(detected_fraction(rec, 33.3, 0.0) == doctest::Approx(0.9).epsilon(1e-12));
    CHECK(rejected_fraction(rec, 33.3, 0.0) == doctest::Approx(0.1).epsilon(1e-12));
  }
  SUBCASE("still decaying") {
    const PropagationRecord rec = synthetic_record(g, -3.0, -5.0, 0.1, 1e-3);
    CHECK(!fraction_diagnostics(rec, 33.3, 0.0).converged);
    CHECK_THROWS_AS(detected_fraction(rec, 33.3, 0.0), numeric_error);
  }
  SUBCASE("survivor still near the laser edge") {
    const PropagationRecord rec = synthetic_record(g, -0.5, -5.0, 0.1, 0.0);
    const FractionDiagnostics diag = fraction_diagnostics(rec, 33.3, 0.0);
    CHECK(diag.edge_ground_density > 1e-6);
    CHECK_THROWS_AS(rejected_fraction(rec, 33.3, 0.0), numeric_error);
  }
  SUBCASE("survivor moving toward the laser") {
    const PropagationRecord rec = synthetic_record(g, -3.0, +5.0, 0.1, 0.0);
    const FractionDiagnostics diag = fraction_diagnostics(rec, 33.3, 0.0);
    CHECK(diag.mean_k_ground > 0.0);
    CHECK_THROWS_AS(detected_fraction(rec, 33.3, 0.0), numeric_error);
  }
  SUBCASE("excited remnant") {
    PropagationRecord rec = synthetic_record(g, -3.0, -5.0, 0.1, 0.0);
    rec.final_field.excited = rec.final_field.ground;
    rec.final_field.ground.setZero();
    const FractionDiagnostics diag = fraction_diagnostics(rec, 33.3, 0.0);
    CHECK(diag.ground_fraction < 0.99);
    CHECK_THROWS_AS(detected_fraction(rec, 33.3, 0.0), numeric_error);
  }
  SUBCASE("negligible survivor skips the packet checks") {
    PropagationRecord rec = synthetic_record(g, -3.0, +5.0, 0.1, 0.0);
    rec.final_field.ground *= 1e-6;  // norm ~ 1e-13, direction no longer matters
    rec.norm[10] = 1e-13;
    CHECK(fraction_diagnostics(rec, 33.3, 0.0).converged);
    CHECK(detected_fraction(rec, 33.3, 0.0) == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("no decay channel") {
    const PropagationRecord rec = synthetic_record(g, -3.0, +5.0, 0.37, 0.1);
    CHECK(detected_fraction(rec, 0.0, 0.0) == 0.0);
    CHECK(rejected_fraction(rec, 0.0, 0.0) == doctest::Approx(0.37).epsilon(1e-12));
  }
}

TEST_CASE("mass balance and estimator agreement on a beam crossing") {
  const Grid g(-6.0, 6.0, 2048);
  LaserProfile laser;
  laser.omega0 = 1.24 * kCs.gamma;
  Propagator prop(g, laser, kCs, 5e-4);
  const GaussianPacketSpec p{-1.05, 0.1, 9.8e-4, 1.0, 0.0};
  SpinorField f = sample_gaussian(p, g, kCs.mass);
  const PropagationRecord rec = prop.propagate(f, {35.0, 10, 1e-6});

  const ArrivalDistribution pi = pi_from_p2(rec, kCs.gamma);
  const ArrivalDistribution fd = pi_from_norm_fd(rec);
  CHECK((pi.density - fd.density).abs().maxCoeff() < 1e-5);

  const double n_end = rec.norm[rec.norm.size() - 1];
  CHECK(pi.total_mass + n_end == doctest::Approx(1.0).epsilon(1e-4));

  const double detected = detected_fraction(rec, kCs.gamma, 0.0);
  const double rejected = rejected_fraction(rec, kCs.gamma, 0.0);
  CHECK(detected + rejected == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rejected > 0.05);
  CHECK(rejected < 0.2);
  CHECK(fraction_diagnostics(rec, kCs.gamma, 0.0).converged);
}

TEST_CASE("normalization and mean") {
  const ArrivalDistribution tri = triangle(0.0, 1.0, 2.0);
  CHECK(mean_time(tri) == doctest::Approx(1.0).epsilon(1e-14));

  ArrivalDistribution raw = tri;
  raw.density *= 5.0;
  raw.total_mass = trapezoid(raw.times, raw.density);
  raw.normalized = false;
  CHECK_THROWS_AS(mean_time(raw), std::invalid_argument);
  const ArrivalDistribution renorm = normalized(raw);
  CHECK(renorm.total_mass == doctest::Approx(1.0));
  CHECK((renorm.density - tri.density).abs().maxCoeff() < 1e-14);

  ArrivalDistribution empty = tri;
  empty.density.setZero();
  empty.total_mass = 0.0;
  CHECK_THROWS_AS(normalized(empty), std::invalid_argument);
}

TEST_CASE("resampling") {
  const ArrivalDistribution tri = triangle(0.0, 1.0, 2.0);
  RealArray t(5);
  t << -1.0, 0.5, 1.0, 1.5, 3.0;
  const ArrivalDistribution r = resample_linear(tri, t);
  CHECK(r.density[0] == 0.0);  // outside support
  CHECK(r.density[4] == 0.0);
  CHECK(r.density[1] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(r.density[2] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(r.density[3] == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("distribution distances") {
  const ArrivalDistribution a = triangle(0.0, 1.0, 2.0);
  CHECK(l1_distance(a, a) == 0.0);
  CHECK(ks_distance(a, a) == 0.0);

  const ArrivalDistribution far = triangle(4.0, 5.0, 6.0);
  CHECK(l1_distance(a, far) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(l1_distance(far, a) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(ks_distance(a, far) == doctest::Approx(1.0).epsilon(1e-12));

  const ArrivalDistribution near = triangle(0.5, 1.5, 2.5);
  const double l1 = l1_distance(a, near);
  CHECK(l1 > 0.1);
  CHECK(l1 < 2.0);
  CHECK(l1_distance(near, a) == doctest::Approx(l1).epsilon(1e-12));

  ArrivalDistribution raw = a;
  raw.normalized = false;
  CHECK_THROWS_AS(l1_distance(raw, a), std::invalid_argument);
  CHECK_THROWS_AS(ks_distance(a, raw), std::invalid_argument);
}

TEST_CASE("empirical Kolmogorov statistic") {
  RealArray t(2), d(2);
  t << 0.0, 1.0;
  d << 1.0, 1.0;  // uniform on [0, 1]
  const ArrivalDistribution uniform{t, d, 1.0, true};

  CHECK(ks_distance_samples({0.5}, uniform) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(ks_distance_samples({0.2, 0.4, 0.6, 0.8}, uniform) == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(ks_distance_samples({2.0}, uniform) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(ks_distance_samples({}, uniform), std::invalid_argument);

  ArrivalDistribution raw = uniform;
  raw.normalized = false;
  CHECK_THROWS_AS(ks_distance_samples({0.5}, raw), std::invalid_argument);
}
