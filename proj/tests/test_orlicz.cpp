#include <doctest.h>

#include <cmath>
#include <memory>
#include <vector>

#include "riesz/convergence.hpp"
#include "riesz/errors.hpp"
#include "riesz/orlicz.hpp"
#include "support.hpp"

using namespace riesz;
using riesz::testing::make_rng;

namespace {

UncertaintySpace two_atom() { return UncertaintySpace::additive({"g1", "g2"}, std::vector<double>{0.4, 0.6}); }

std::shared_ptr<const UncertaintySpace> one_atom() {
  return std::make_shared<const UncertaintySpace>(UncertaintySpace::additive({"g1"}, std::vector<double>{1.0}));
}

}  // namespace

TEST_SUITE("orlicz") {
  TEST_CASE("built-in functions validate") {
    CHECK(validate_orlicz(OrliczSpec::identity()).ok());
    CHECK(validate_orlicz(OrliczSpec::identity(), 1.0, 16).ok());
    CHECK(validate_orlicz(OrliczSpec::power(2.0), 10.0).ok());
    CHECK(validate_orlicz(OrliczSpec::expm1(), 10.0).ok());
  }

  TEST_CASE("square root fails midpoint convexity") {
    const auto report = validate_orlicz(OrliczSpec::power(0.5), 10.0, 16);
    CHECK_FALSE(report.ok());
    const auto* convex = report.find("midpoint_convex");
    REQUIRE(convex != nullptr);
    CHECK_FALSE(convex->passed);
    // First violating pair is (0, 10/15): sqrt(1/3) > sqrt(2/3) / 2.
    CHECK(convex->detail.find("phi((0 + 0.666666") != std::string::npos);
    CHECK(std::sqrt(1.0 / 3.0) > std::sqrt(2.0 / 3.0) / 2.0);
    CHECK(report.find("zero_at_origin")->passed);
    CHECK(report.find("strictly_increasing")->passed);
    // The textbook pair as well.
    CHECK(std::sqrt(0.5) > (std::sqrt(0.0) + std::sqrt(1.0)) / 2.0);
  }

  TEST_CASE("validation input errors") {
    CHECK_THROWS_AS(validate_orlicz(OrliczSpec::identity(), 10.0, 15), InputError);
    CHECK_THROWS_AS(validate_orlicz(OrliczSpec::expm1(), 1000.0), InputError);
    CHECK_THROWS_AS(OrliczSpec::identity(0.5), InputError);
    CHECK_THROWS_AS(OrliczSpec::power(-1.0), InputError);
  }

  TEST_CASE("tabulated functions") {
    const auto phi = OrliczSpec::table({0.0, 1.0, 2.0}, {0.0, 1.0, 3.0});
    CHECK(phi(0.5) == doctest::Approx(0.5));
    CHECK(phi(1.5) == doctest::Approx(2.0));
    CHECK(phi(3.0) == doctest::Approx(5.0));
    CHECK(phi.inverse(2.0) == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(validate_orlicz(phi, 2.0, 64).ok());
    CHECK_THROWS_AS(OrliczSpec::table({0.0, 1.0, 2.0}, {0.0, 2.0, 3.0}), InputError);  // concave
    CHECK_THROWS_AS(OrliczSpec::table({0.0, 1.0}, {0.5, 2.0}), InputError);            // phi(0) != 0
    CHECK_THROWS_AS(OrliczSpec::table({1.0, 2.0}, {0.0, 2.0}), InputError);
  }

  TEST_CASE("inverses") {
    CHECK(OrliczSpec::power(2.0).inverse(9.0) == doctest::Approx(3.0));
    CHECK(OrliczSpec::expm1().inverse(std::expm1(0.25)) == doctest::Approx(0.25));
    CHECK(OrliczSpec::identity().inverse(0.0) == 0.0);
  }

  TEST_CASE("Orlicz moments") {
    const auto s = two_atom();
    for (auto phi : {OrliczSpec::identity(), OrliczSpec::power(2.0), OrliczSpec::expm1()}) {
      CHECK(orlicz_moment(s, UncertainVariable::constant(2, 0.0), phi) == 0.0);
    }
    CHECK(orlicz_moment(s, UncertainVariable::constant(2, 1.5), OrliczSpec::power(2.0)) == doctest::Approx(2.25));
    const UncertainVariable var(std::vector<double>{-1.0, 3.0});
    const double moment = orlicz_moment(s, var, OrliczSpec::power(2.0));
    CHECK(moment == doctest::Approx(5.8).epsilon(1e-14));
    const std::vector<double> squared{1.0, 9.0};
    CHECK(std::abs(riesz::testing::quadrature_expected_value(s, squared) - 5.8) < 1e-4);
  }

  TEST_CASE("Orlicz-p gaps") {
    auto space = one_atom();
    const UncertainSequence constant(space, [](std::size_t) { return UncertainVariable::constant(1, 0.3); },
                                     UncertainVariable::constant(1, 0.3), 20);
    for (std::size_t n = 1; n <= 20; ++n) {
      CHECK(orlicz_p_gap(constant, WeightSequence::harmonic(), OrliczSpec::expm1(2.0), n) <= 1e-15);
    }

    const UncertainSequence alt(space, [](std::size_t n) { return UncertainVariable::constant(1, n % 2 == 1 ? 1.0 : 0.0); },
                                UncertainVariable::constant(1, 0.5), 101);
    const auto ones = WeightSequence::constant(1.0);
    for (std::size_t n = 1; n <= 101; n += 2) {
      CHECK(orlicz_p_gap(alt, ones, OrliczSpec::identity(2.0), n) == doctest::Approx(1.0 / (2.0 * n)).epsilon(1e-12));
    }
  }

  TEST_CASE("identity Orlicz-p gap with p = 1 is the Riesz mean gap") {
    auto rng = make_rng(31);
    for (int trial = 0; trial < 50; ++trial) {
      auto space = std::make_shared<const UncertaintySpace>(
          riesz::testing::random_space(rng, riesz::testing::uniform_index(rng, 1, 6)));
      const std::size_t m = space->size();
      std::vector<UncertainVariable> terms;
      for (int n = 0; n < 30; ++n) terms.emplace_back(riesz::testing::random_values(rng, m, -2.0, 2.0));
      const auto seq = UncertainSequence::from_terms(space, terms,
                                                     UncertainVariable(riesz::testing::random_values(rng, m, -1.0, 1.0)));
      const auto w = WeightSequence::explicit_values(riesz::testing::random_values(rng, 30, 0.1, 3.0));
      for (std::size_t n = 1; n <= 30; n += 7) {
        const double gap = orlicz_p_gap(seq, w, OrliczSpec::identity(1.0), n);
        const double mean = riesz_gap(GapKind::mean, seq, w, n);
        CHECK(std::abs(gap - mean) <= 1e-12);
        CHECK(gap >= 0.0);
      }
    }
  }

  TEST_CASE("gap grows with the deviation and vanishes only at the limit") {
    auto rng = make_rng(32);
    for (int trial = 0; trial < 100; ++trial) {
      const auto s = riesz::testing::random_space(rng, riesz::testing::uniform_index(rng, 1, 6));
      const UncertainVariable limit(riesz::testing::random_values(rng, s.size(), -1.0, 1.0));
      auto dev = riesz::testing::random_values(rng, s.size(), 0.0, 1.0);
      const double scale = riesz::testing::uniform(rng, 1.0, 3.0);
      std::vector<double> near(s.size()), far(s.size());
      for (std::size_t a = 0; a < s.size(); ++a) {
        near[a] = limit[a] + dev[a];
        far[a] = limit[a] + scale * dev[a];
      }
      for (auto phi : {OrliczSpec::identity(1.5), OrliczSpec::power(2.0, 1.0), OrliczSpec::expm1(2.0)}) {
        const double a = orlicz_p_distance(s, near, limit, phi);
        const double b = orlicz_p_distance(s, far, limit, phi);
        CHECK(a >= 0.0);
        CHECK(b >= a - 1e-15);
        CHECK(orlicz_p_distance(s, limit.values(), limit, phi) == 0.0);
      }
    }
  }
}
