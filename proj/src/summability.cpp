#include "riesz/summability.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "riesz/compensated_sum.hpp"
#include "riesz/errors.hpp"

namespace riesz {

struct WeightSequence::Cache {
  std::mutex mutex;
  std::vector<double> p{0.0};  // p[0] unused
  std::vector<double> P{0.0};  // P[0] = 0
  CompensatedSum running;
};

WeightSequence::WeightSequence(std::string name, Rule rule, std::optional<std::size_t> length)
    : name_(std::move(name)), rule_(std::move(rule)), length_(length), cache_(std::make_shared<Cache>()) {
  if (!rule_) throw InputError("weight sequence needs a rule");
}

WeightSequence WeightSequence::constant(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw InputError("constant weight must be positive");
  return WeightSequence("constant", [c](std::size_t) { return c; });
}

WeightSequence WeightSequence::harmonic() {
  return WeightSequence("harmonic", [](std::size_t k) { return 1.0 / static_cast<double>(k); });
}

WeightSequence WeightSequence::geometric(double ratio) {
  if (!(ratio > 0.0) || !std::isfinite(ratio)) throw InputError("geometric ratio must be positive");
  return WeightSequence("geometric", [ratio](std::size_t k) { return std::pow(ratio, static_cast<double>(k)); });
}

WeightSequence WeightSequence::power(double exponent) {
  if (!std::isfinite(exponent)) throw InputError("power exponent must be finite");
  return WeightSequence("power",
                        [exponent](std::size_t k) { return std::pow(static_cast<double>(k), exponent); });
}

WeightSequence WeightSequence::explicit_values(std::vector<double> values) {
  if (values.empty()) throw InputError("explicit weight list is empty");
  for (double v : values) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw InputError("weights must be strictly positive (zero weights make the Riesz inverse undefined)");
    }
  }
  const std::size_t n = values.size();
  return WeightSequence(
      "explicit", [v = std::move(values)](std::size_t k) { return v[k - 1]; }, n);
}

void WeightSequence::ensure(std::size_t n) const {
  if (length_ && n > *length_) {
    throw InputError("weight index " + std::to_string(n) + " past the explicit list of " +
                     std::to_string(*length_));
  }
  std::lock_guard lock(cache_->mutex);
  auto& c = *cache_;
  c.p.reserve(n + 1);
  c.P.reserve(n + 1);
  for (std::size_t k = c.p.size(); k <= n; ++k) {
    const double w = rule_(k);
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw InputError("weight p_" + std::to_string(k) + " = " + std::to_string(w) +
                       " is not strictly positive");
    }
    c.p.push_back(w);
    c.running.add(w);
    c.P.push_back(c.running.value());
  }
}

double WeightSequence::weight(std::size_t k) const {
  if (k == 0) throw InputError("weights are indexed from 1");
  ensure(k);
  std::lock_guard lock(cache_->mutex);
  return cache_->p[k];
}

double WeightSequence::partial_sum(std::size_t n) const {
  if (n == 0) return 0.0;
  ensure(n);
  std::lock_guard lock(cache_->mutex);
  return cache_->P[n];
}

std::vector<double> WeightSequence::weights(std::size_t n) const {
  if (n == 0) return {};
  ensure(n);
  std::lock_guard lock(cache_->mutex);
  return {cache_->p.begin() + 1, cache_->p.begin() + static_cast<std::ptrdiff_t>(n) + 1};
}

std::vector<double> WeightSequence::partial_sums(std::size_t n) const {
  if (n > 0) ensure(n);
  std::lock_guard lock(cache_->mutex);
  return {cache_->P.begin(), cache_->P.begin() + static_cast<std::ptrdiff_t>(n) + 1};
}

TriangularMatrix TriangularMatrix::identity() {
  return TriangularMatrix([](std::size_t n, std::size_t k) { return n == k ? 1.0 : 0.0; });
}

TriangularMatrix TriangularMatrix::riesz(const WeightSequence& weights) {
  return TriangularMatrix(
      [weights](std::size_t n, std::size_t k) { return weights.weight(k) / weights.partial_sum(n); });
}

std::vector<double> riesz_row(const WeightSequence& weights, std::size_t n) {
  if (n == 0) throw InputError("Riesz rows are indexed from 1");
  auto row = weights.weights(n);
  const double total = weights.partial_sum(n);
  for (double& r : row) r /= total;
  return row;
}

UncertainVariable transform_at(const UncertainSequence& seq, const WeightSequence& weights, std::size_t n) {
  if (n == 0 || n > seq.horizon()) {
    throw InputError("index " + std::to_string(n) + " exceeds the sequence horizon " +
                     std::to_string(seq.horizon()));
  }
  const auto p = weights.weights(n);
  const double total = weights.partial_sum(n);
  std::vector<double> out(seq.atoms());
  for (std::size_t a = 0; a < seq.atoms(); ++a) {
    CompensatedSum s;
    for (std::size_t i = 1; i <= n; ++i) s.add(p[i - 1] * seq.value(i, a));
    out[a] = s.value() / total;
  }
  return UncertainVariable(std::move(out));
}

UncertainSequence riesz_transform(const UncertainSequence& seq, const WeightSequence& weights) {
  const std::size_t h = seq.horizon();
  const std::size_t m = seq.atoms();
  const auto p = weights.weights(h);
  const auto total = weights.partial_sums(h);
  std::vector<CompensatedSum> running(m);
  std::vector<UncertainVariable> terms;
  terms.reserve(h);
  for (std::size_t n = 1; n <= h; ++n) {
    std::vector<double> nu(m);
    for (std::size_t a = 0; a < m; ++a) {
      running[a].add(p[n - 1] * seq.value(n, a));
      nu[a] = running[a].value() / total[n];
    }
    terms.emplace_back(std::move(nu));
  }
  return UncertainSequence::from_terms(seq.space_ptr(), terms, seq.limit());
}

UncertainVariable general_transform_at(const UncertainSequence& seq, const TriangularMatrix& a, std::size_t n) {
  if (n == 0 || n > seq.horizon()) {
    throw InputError("index " + std::to_string(n) + " exceeds the sequence horizon " +
                     std::to_string(seq.horizon()));
  }
  std::vector<CompensatedSum> sums(seq.atoms());
  for (std::size_t k = 1; k <= n; ++k) {
    const double coeff = a.entry(n, k);
    if (coeff == 0.0) continue;
    for (std::size_t g = 0; g < seq.atoms(); ++g) sums[g].add(coeff * seq.value(k, g));
  }
  std::vector<double> out(seq.atoms());
  for (std::size_t g = 0; g < seq.atoms(); ++g) out[g] = sums[g].value();
  return UncertainVariable(std::move(out));
}

UncertainVariable inverse_transform_at(const UncertainSequence& transformed, const WeightSequence& weights,
                                       std::size_t n) {
  const auto current = transformed.row(n);
  const double pn = weights.weight(n);
  const double total = weights.partial_sum(n);
  std::vector<double> out(current.size());
  if (n == 1) {
    for (std::size_t a = 0; a < out.size(); ++a) out[a] = current[a];
    return UncertainVariable(std::move(out));
  }
  const auto previous = transformed.row(n - 1);
  const double prev_total = weights.partial_sum(n - 1);
  for (std::size_t a = 0; a < out.size(); ++a) {
    out[a] = (total * current[a] - prev_total * previous[a]) / pn;
  }
  return UncertainVariable(std::move(out));
}

UncertainSequence inverse_riesz_transform(const UncertainSequence& transformed, const WeightSequence& weights) {
  std::vector<UncertainVariable> terms;
  terms.reserve(transformed.horizon());
  for (std::size_t n = 1; n <= transformed.horizon(); ++n) {
    terms.push_back(inverse_transform_at(transformed, weights, n));
  }
  return UncertainSequence::from_terms(transformed.space_ptr(), terms, transformed.limit());
}

std::size_t tail_length(std::size_t count, double tail_fraction) {
  if (count == 0) return 0;
  const auto len = static_cast<std::size_t>(std::ceil(static_cast<double>(count) * tail_fraction));
  return std::clamp<std::size_t>(len, std::min<std::size_t>(2, count), count);
}

RegularityVerdict check_regularity(const WeightSequence& weights, std::size_t horizon, double tolerance) {
  if (horizon < 2) throw InputError("regularity check needs horizon >= 2");
  if (!(tolerance > 0.0)) throw InputError("regularity tolerance must be positive");
  RegularityVerdict v;
  v.horizon = horizon;
  const auto p = weights.weights(horizon);
  const auto total = weights.partial_sums(horizon);
  CompensatedSum running;
  for (std::size_t n = 1; n <= horizon; ++n) {
    running.add(p[n - 1]);
    const double row = running.value() / total[n];
    v.max_row_sum_error = std::max(v.max_row_sum_error, std::abs(row - 1.0));
    v.max_abs_row_sum = std::max(v.max_abs_row_sum, row);
  }
  v.partial_sum = total[horizon];
  v.column_ratio = p[0] / total[horizon];
  v.column_condition = v.column_ratio < tolerance;
  if (horizon >= 4) {
    const double recent = total[horizon] - total[horizon / 2];
    const double earlier = total[horizon / 2] - total[horizon / 4];
    v.block_growth_ratio = earlier > 0.0 ? recent / earlier : 0.0;
  }
  v.divergence_trend = v.block_growth_ratio >= kDivergentBlockRatio;
  v.regular = v.column_condition || v.divergence_trend;
  return v;
}

TauberianProfile tauberian_condition_profile(const WeightSequence& weights, std::size_t horizon,
                                             const TauberianConfig& config) {
  if (horizon < 1) throw InputError("Tauberian profile needs horizon >= 1");
  TauberianProfile out;
  const auto p = weights.weights(horizon);
  const auto total = weights.partial_sums(horizon);
  out.values.resize(horizon);
  for (std::size_t n = 1; n <= horizon; ++n) {
    out.values[n - 1] = static_cast<double>(n) * p[n - 1] / total[n];
  }
  const std::size_t len = tail_length(horizon, config.tail_fraction);
  const std::size_t start = horizon - len;
  out.tail_max = *std::max_element(out.values.begin() + static_cast<std::ptrdiff_t>(start), out.values.end());
  out.tail_nonincreasing = out.values.back() <= out.values[start];
  out.holds = out.tail_max < config.threshold && out.tail_nonincreasing;
  return out;
}

}  // namespace riesz
