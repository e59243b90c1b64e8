#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <string>

namespace riesz::testing {

std::uint64_t& base_seed() {
  static std::uint64_t seed = kDefaultSeed;
  return seed;
}

std::mt19937_64 make_rng(std::uint64_t salt) {
  std::seed_seq seq{static_cast<std::uint32_t>(base_seed()), static_cast<std::uint32_t>(base_seed() >> 32),
                    static_cast<std::uint32_t>(salt), static_cast<std::uint32_t>(salt >> 32)};
  return std::mt19937_64(seq);
}

std::vector<char*> consume_seed_flag(int argc, char** argv) {
  std::vector<char*> rest;
  for (int i = 0; i < argc; ++i) {
    if (std::strcmp(argv[i], "--seed") == 0 && i + 1 < argc) {
      base_seed() = std::strtoull(argv[++i], nullptr, 10);
    } else if (std::strncmp(argv[i], "--seed=", 7) == 0) {
      base_seed() = std::strtoull(argv[i] + 7, nullptr, 10);
    } else {
      rest.push_back(argv[i]);
    }
  }
  return rest;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

std::size_t uniform_index(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

std::vector<double> random_values(std::mt19937_64& rng, std::size_t count, double lo, double hi) {
  std::vector<double> v(count);
  for (double& x : v) x = uniform(rng, lo, hi);
  return v;
}

std::vector<std::string> atom_names(std::size_t m) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < m; ++i) names.push_back("g" + std::to_string(i + 1));
  return names;
}

UncertaintySpace random_additive(std::mt19937_64& rng, std::size_t m) {
  return UncertaintySpace::additive(atom_names(m), random_values(rng, m, 0.05, 1.0));
}

UncertaintySpace random_possibility(std::mt19937_64& rng, std::size_t m) {
  auto w = random_values(rng, m, 0.0, 1.0);
  w[uniform_index(rng, 0, m - 1)] = 1.0;
  return UncertaintySpace::possibility(atom_names(m), w);
}

UncertaintySpace random_space(std::mt19937_64& rng, std::size_t m) {
  return uniform(rng, 0.0, 1.0) < 0.5 ? random_additive(rng, m) : random_possibility(rng, m);
}

double oracle_measure_at_least(const UncertaintySpace& space, const std::vector<double>& values, double r) {
  Event e = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] >= r) e |= Event{1} << i;
  }
  return space.table()[e];
}

double oracle_measure_at_most(const UncertaintySpace& space, const std::vector<double>& values, double r) {
  Event e = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] <= r) e |= Event{1} << i;
  }
  return space.table()[e];
}

double quadrature_expected_value(const UncertaintySpace& space, const std::vector<double>& values, double step) {
  const double top = std::max(0.0, *std::max_element(values.begin(), values.end()));
  const double bottom = std::min(0.0, *std::min_element(values.begin(), values.end()));
  long double positive = 0.0L;
  const auto up = static_cast<long>(std::ceil(top / step));
  for (long i = 0; i < up; ++i) {
    const double r = (static_cast<double>(i) + 0.5) * step;
    const double width = std::min(step, top - static_cast<double>(i) * step);
    positive += static_cast<long double>(oracle_measure_at_least(space, values, r) * width);
  }
  long double negative = 0.0L;
  const auto down = static_cast<long>(std::ceil(-bottom / step));
  for (long i = 0; i < down; ++i) {
    const double r = -(static_cast<double>(i) + 0.5) * step;
    const double width = std::min(step, -bottom - static_cast<double>(i) * step);
    negative += static_cast<long double>(oracle_measure_at_most(space, values, r) * width);
  }
  return static_cast<double>(positive - negative);
}

}  // namespace riesz::testing
