#pragma once

// Seeded generators and brute-force oracles shared by the unit tests and the
// acceptance runner. The oracles deliberately avoid the library's own event
// and level-set helpers.

#include <cstdint>
#include <random>
#include <vector>

#include "riesz/uncertainty.hpp"

namespace riesz::testing {

inline constexpr std::uint64_t kDefaultSeed = 20240521;

/// Current base seed (set from --seed by the test mains).
std::uint64_t& base_seed();

/// Independent stream per test, derived from the base seed and a salt.
std::mt19937_64 make_rng(std::uint64_t salt);

/// Strips "--seed N" / "--seed=N" from argv and stores it. Returns the
/// remaining arguments.
std::vector<char*> consume_seed_flag(int argc, char** argv);

double uniform(std::mt19937_64& rng, double lo, double hi);
std::size_t uniform_index(std::mt19937_64& rng, std::size_t lo, std::size_t hi);  // inclusive
std::vector<double> random_values(std::mt19937_64& rng, std::size_t count, double lo, double hi);

std::vector<std::string> atom_names(std::size_t m);
UncertaintySpace random_additive(std::mt19937_64& rng, std::size_t m);
/// Dual-completed possibility measure; one weight is forced to 1.
UncertaintySpace random_possibility(std::mt19937_64& rng, std::size_t m);
/// Coin flip between the two.
UncertaintySpace random_space(std::mt19937_64& rng, std::size_t m);

/// M{gamma : values(gamma) >= r} by explicit bit assembly.
double oracle_measure_at_least(const UncertaintySpace& space, const std::vector<double>& values, double r);
double oracle_measure_at_most(const UncertaintySpace& space, const std::vector<double>& values, double r);

/// Midpoint-rule quadrature of int_0^inf M{xi >= r} dr - int_-inf^0 M{xi <= r} dr.
double quadrature_expected_value(const UncertaintySpace& space, const std::vector<double>& values,
                                 double step = 1e-5);

}  // namespace riesz::testing
