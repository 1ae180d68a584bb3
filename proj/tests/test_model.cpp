#include <doctest.h>

#include <cmath>
#include <random>

#include "splitsea/model.hpp"

using namespace splitsea;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("lieb-liniger kernels match their closed forms") {
  const ModelSpec m = ModelSpec::lieb_liniger(2.0);
  CHECK(m.theta(2.0) == doctest::Approx(0.5 * kPi).epsilon(1e-14));
  CHECK(m.K(0.0) == doctest::Approx(1.0));
  CHECK(m.p0(1.7) == 1.7);
  CHECK(m.p0_prime(-3.0) == 1.0);

  const ModelSpec m1 = ModelSpec::lieb_liniger(1.0);
  CHECK(m1.K(0.0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(m1.K_prime(0.0) == 0.0);
  CHECK(m1.theta(0.0) == 0.0);
  CHECK(m1.p0(0.0) == 0.0);
}

TEST_CASE("invalid couplings are rejected") {
  CHECK_THROWS_AS(ModelSpec::lieb_liniger(-1.0), DomainError);
  CHECK_THROWS_AS(ModelSpec::lieb_liniger(0.0), DomainError);
  CHECK_THROWS_AS(ModelSpec::xxz(0.0), DomainError);
  CHECK_THROWS_AS(ModelSpec::xxz(kPi), DomainError);
  CHECK_THROWS_AS(ModelSpec::xxz(-0.3), DomainError);
}

TEST_CASE("xxz free-fermion point has an identically vanishing phase") {
  const ModelSpec m = ModelSpec::xxz(0.5 * kPi);
  for (double l : {-5.0, -0.3, 0.0, 0.7, 12.0}) {
    CHECK(m.theta(l) == 0.0);
    CHECK(m.K(l) == 0.0);
    CHECK(m.K_prime(l) == 0.0);
  }
  // p0 stays nontrivial there
  CHECK(m.p0(0.7) == doctest::Approx(2.0 * std::atan(std::tanh(0.7))));
}

TEST_CASE("theta odd, K even over random rapidities") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-8.0, 8.0);
  const ModelSpec models[] = {ModelSpec::lieb_liniger(2.0),
                              ModelSpec::xxz(kPi / 3.0)};
  for (const auto& m : models)
    for (int t = 0; t < 1000; ++t) {
      const double l = u(rng);
      CHECK(std::abs(m.theta(-l) + m.theta(l)) < 1e-12);
      CHECK(std::abs(m.K(-l) - m.K(l)) < 1e-12);
    }
}

TEST_CASE("K equals the centered difference of theta") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  const double h = 1e-5;
  const ModelSpec models[] = {ModelSpec::lieb_liniger(2.0),
                              ModelSpec::xxz(kPi / 3.0),
                              ModelSpec::xxz(2.2)};
  for (const auto& m : models)
    for (int t = 0; t < 100; ++t) {
      const double l = u(rng);
      const double fd = (m.theta(l + h) - m.theta(l - h)) / (2.0 * h);
      CHECK(std::abs(fd - m.K(l)) <= 1e-8 * std::max(1.0, std::abs(m.K(l))));
    }
}

TEST_CASE("K' equals the centered difference of K") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  const double h = 1e-5;
  const ModelSpec models[] = {ModelSpec::lieb_liniger(0.7),
                              ModelSpec::xxz(1.1)};
  for (const auto& m : models)
    for (int t = 0; t < 100; ++t) {
      const double l = u(rng);
      const double fd = (m.K(l + h) - m.K(l - h)) / (2.0 * h);
      CHECK(std::abs(fd - m.K_prime(l)) <= 1e-7);
    }
}

TEST_CASE("xxz kernel FD check at the example point") {
  const ModelSpec m = ModelSpec::xxz(kPi / 3.0);
  const double h = 1e-5;
  const double fd = (m.theta(0.7 + h) - m.theta(0.7 - h)) / (2.0 * h);
  CHECK(std::abs(fd - m.K(0.7)) / std::abs(m.K(0.7)) < 1e-8);
}

TEST_CASE("large coupling suppresses the phase like 1/c") {
  const double c = 1e6;
  const ModelSpec m = ModelSpec::lieb_liniger(c);
  for (double l = -10.0; l <= 10.0; l += 0.5) {
    CHECK(std::abs(m.theta(l)) < 3.0 * std::abs(l) / c + 1e-30);
    CHECK(std::abs(m.K(l)) < 3.0 / c);
  }
}

TEST_CASE("p0_inverse inverts p0") {
  const ModelSpec ll = ModelSpec::lieb_liniger(3.0);
  CHECK(ll.p0_inverse(1.25) == 1.25);
  const ModelSpec m = ModelSpec::xxz(1.3);
  for (double l : {-2.0, -0.5, 0.0, 0.4, 3.0})
    CHECK(m.p0_inverse(m.p0(l)) == doctest::Approx(l).epsilon(1e-10));
  CHECK(m.p0_sup() == doctest::Approx(kPi - 1.3));
}

TEST_CASE("polynomial charges evaluate by Horner") {
  const BareCharge q2 = BareCharge::polynomial({0.0, 0.0, 1.0});
  CHECK(q2.eps0(3.0) == 9.0);
  CHECK(q2.eps0_prime(3.0) == 6.0);
  for (double l : {-2.5, -1.0, 0.0, 0.3, 4.0}) CHECK(q2.eps0(l) == l * l);

  const BareCharge q1 = BareCharge::polynomial({0.0, 1.0});
  CHECK(q1.eps0(3.0) == 3.0);
  CHECK(q1.eps0_prime(3.0) == 1.0);

  const BareCharge mixed = BareCharge::polynomial({1.0, -2.0, 0.5, 3.0});
  const double l = 1.7;
  CHECK(mixed.eps0(l) ==
        doctest::Approx(1.0 - 2.0 * l + 0.5 * l * l + 3.0 * l * l * l));
  CHECK(mixed.eps0_prime(l) == doctest::Approx(-2.0 + l + 9.0 * l * l));

  CHECK(BareCharge::monomial(2).eps0(3.0) == 9.0);
}

TEST_CASE("xxz bare energy at the free-fermion point") {
  const BareCharge e = BareCharge::xxz_energy(0.5 * kPi);
  CHECK(e.eps0(0.0) == doctest::Approx(-2.0).epsilon(1e-14));
  CHECK(e.eps0_prime(0.0) == doctest::Approx(0.0));
}

TEST_CASE("bare energy derivative agrees with finite difference") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const double h = 1e-6;
  const BareCharge charges[] = {BareCharge::polynomial({0.1, -1.0, 2.0, 0.3}),
                                BareCharge::xxz_energy(1.1)};
  for (const auto& ch : charges)
    for (int t = 0; t < 50; ++t) {
      const double l = u(rng);
      const double fd = (ch.eps0(l + h) - ch.eps0(l - h)) / (2.0 * h);
      const double d = ch.eps0_prime(l);
      CHECK(std::abs(fd - d) <= 1e-6 * std::max(1.0, std::abs(d)));
    }
}

TEST_CASE("tabulated charges interpolate and stay in range") {
  std::vector<double> xs, ys;
  for (int i = 0; i <= 40; ++i) {
    const double x = -2.0 + 0.1 * i;
    xs.push_back(x);
    ys.push_back(std::sin(x));
  }
  const BareCharge t = BareCharge::tabulated(xs, ys);
  for (double l : {-1.4, -0.4, 0.0, 0.93, 1.4}) {
    CHECK(t.eps0(l) == doctest::Approx(std::sin(l)).epsilon(1e-5));
    CHECK(t.eps0_prime(l) == doctest::Approx(std::cos(l)).epsilon(1e-3));
  }
  // The derivative must be the derivative of the interpolant itself,
  // everywhere including near the natural boundary.
  const double h = 1e-6;
  for (double l : {-1.97, -0.63, 0.11, 1.55, 1.97}) {
    const double fd = (t.eps0(l + h) - t.eps0(l - h)) / (2.0 * h);
    CHECK(t.eps0_prime(l) == doctest::Approx(fd).epsilon(1e-6));
  }
  CHECK_THROWS_AS(t.eps0(2.5), RangeError);
  CHECK_THROWS_AS(t.eps0(-2.01), RangeError);
}
