#include "riesz/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <sstream>

#include "riesz/compensated_sum.hpp"
#include "riesz/errors.hpp"

namespace riesz {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::pass:
      return "pass";
    case Verdict::fail:
      return "fail";
    case Verdict::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

Verdict verdict_from_string(std::string_view s) {
  if (s == "pass") return Verdict::pass;
  if (s == "fail") return Verdict::fail;
  if (s == "inconclusive") return Verdict::inconclusive;
  throw InputError("unknown verdict '" + std::string(s) + "'");
}

void DiagnosticConfig::validate() const {
  if (epsilon_grid.empty()) throw InputError("epsilon grid is empty");
  if (lambda_grid.empty()) throw InputError("lambda grid is empty");
  for (double e : epsilon_grid) {
    if (!(e > 0.0) || !std::isfinite(e)) throw InputError("epsilon grid values must be positive");
  }
  for (double l : lambda_grid) {
    if (!(l > 0.0) || !std::isfinite(l)) throw InputError("lambda grid values must be positive");
  }
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) throw InputError("tail fraction must lie in (0, 1]");
  if (!(tolerance > 0.0) || !std::isfinite(tolerance)) throw InputError("tolerance must be positive");
  if (horizon != 0 && horizon < 10) throw InputError("horizon must be at least 10");
  if (dist_grid_points < 2) throw InputError("distribution grid needs at least 2 points");
  if (!(stall_ratio >= 0.0 && stall_ratio < 1.0)) throw InputError("stall ratio must lie in [0, 1)");
}

namespace {

void require_index(const UncertainSequence& seq, std::size_t n) {
  if (n == 0 || n > seq.horizon()) {
    throw InputError("index " + std::to_string(n) + " exceeds the sequence horizon " +
                     std::to_string(seq.horizon()));
  }
}

void require_epsilon(double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw InputError("epsilon must be positive");
}

double sup_over(std::span<const double> dev, Event set) {
  double best = 0.0;
  for (std::size_t a = 0; a < dev.size(); ++a) {
    if (set & (Event{1} << a)) best = std::max(best, dev[a]);
  }
  return best;
}

std::vector<double> deviation(std::span<const double> values, const UncertainVariable& limit) {
  std::vector<double> out(values.size());
  for (std::size_t a = 0; a < values.size(); ++a) out[a] = std::abs(values[a] - limit[a]);
  return out;
}

double measure_at_least(const UncertaintySpace& space, std::span<const double> dev, double eps) {
  return space.measure(event_where(dev, [eps](double d) { return d >= eps; }));
}

double dist_gap_on(const UncertaintySpace& space, std::span<const double> values,
                   std::span<const double> grid, std::span<const double> limit_cdf) {
  double gap = 0.0;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const double x = grid[g];
    const double phi_n = space.measure(event_where(values, [x](double v) { return v <= x; }));
    gap = std::max(gap, std::abs(phi_n - limit_cdf[g]));
  }
  return gap;
}

std::vector<double> limit_distribution(const UncertaintySpace& space, const UncertainVariable& limit,
                                       std::span<const double> grid) {
  std::vector<double> cdf(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) cdf[g] = distribution_at(space, limit, grid[g]);
  return cdf;
}

// Row-major per-index, per-atom table.
struct Table {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Table(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  std::span<const double> row(std::size_t r) const { return std::span<const double>(data).subspan(r * cols, cols); }
};

template <class F>
Table deviation_table(const UncertainSequence& seq, std::size_t horizon, F&& transform) {
  Table t(horizon, seq.atoms());
  for (std::size_t n = 1; n <= horizon; ++n) {
    const auto r = seq.row(n);
    for (std::size_t a = 0; a < seq.atoms(); ++a) t.at(n - 1, a) = transform(std::abs(r[a] - seq.limit()[a]));
  }
  return t;
}

// Atoms in `candidates` whose deviation satisfies `meets` at every index of the
// tail window and has not decayed between the two halves of the window.
template <class Pred>
Event stalled_support(const Table& dev, std::size_t tail_begin, Event candidates, Pred meets, double stall_ratio) {
  const std::size_t count = dev.rows;
  const std::size_t len = count - tail_begin;
  const std::size_t half = tail_begin + len / 2;
  Event support = 0;
  for (std::size_t a = 0; a < dev.cols; ++a) {
    const Event bit = Event{1} << a;
    if (!(candidates & bit)) continue;
    bool always = true;
    double first = 0.0;
    double second = 0.0;
    for (std::size_t r = tail_begin; r < count; ++r) {
      const double d = dev.at(r, a);
      if (!meets(d)) {
        always = false;
        break;
      }
      (r < half ? first : second) = std::max(r < half ? first : second, d);
    }
    if (!always) continue;
    if (len < 2 || second >= (1.0 - stall_ratio) * first) support |= bit;
  }
  return support;
}

double masked_expectation(const UncertaintySpace& space, std::span<const double> values, Event mask) {
  std::vector<double> masked(values.size(), 0.0);
  for (std::size_t a = 0; a < values.size(); ++a) {
    if (mask & (Event{1} << a)) masked[a] = values[a];
  }
  return expected_value(space, masked);
}

std::string format_param(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::size_t available_oscillation_count(std::size_t horizon, double lambda) {
  std::size_t n = 0;
  while (oscillation_window_end(n + 1, lambda) <= horizon) ++n;
  return n;
}

// osc(n, a) = max_{n <= k <= end(n)} |xi_k(a) - xi_n(a)| for n = 1..count, via
// monotone deques (both window ends are nondecreasing in n).
Table oscillation_table(const UncertainSequence& seq, std::size_t count, double lambda) {
  Table osc(count, seq.atoms());
  for (std::size_t a = 0; a < seq.atoms(); ++a) {
    std::deque<std::size_t> hi;
    std::deque<std::size_t> lo;
    std::size_t right = 0;
    for (std::size_t n = 1; n <= count; ++n) {
      const std::size_t end = oscillation_window_end(n, lambda);
      while (right < end) {
        ++right;
        const double v = seq.value(right, a);
        while (!hi.empty() && seq.value(hi.back(), a) <= v) hi.pop_back();
        hi.push_back(right);
        while (!lo.empty() && seq.value(lo.back(), a) >= v) lo.pop_back();
        lo.push_back(right);
      }
      while (hi.front() < n) hi.pop_front();
      while (lo.front() < n) lo.pop_front();
      const double here = seq.value(n, a);
      osc.at(n - 1, a) = std::max(seq.value(hi.front(), a) - here, here - seq.value(lo.front(), a));
    }
  }
  return osc;
}

}  // namespace

double as_gap(const UncertainSequence& seq, std::size_t n) {
  require_index(seq, n);
  return sup_over(deviation(seq.row(n), seq.limit()), seq.space().almost_sure());
}

double measure_gap(const UncertainSequence& seq, std::size_t n, double eps) {
  require_index(seq, n);
  require_epsilon(eps);
  return measure_at_least(seq.space(), deviation(seq.row(n), seq.limit()), eps);
}

double mean_gap(const UncertainSequence& seq, std::size_t n) {
  require_index(seq, n);
  return expected_value(seq.space(), deviation(seq.row(n), seq.limit()));
}

std::vector<double> continuity_grid(const UncertainVariable& limit, std::span<const double> candidates,
                                    double exclusion_radius) {
  std::vector<double> out;
  for (double x : candidates) {
    bool keep = true;
    for (double v : limit) {
      const double d = std::abs(x - v);
      if (d == 0.0 || d <= exclusion_radius) {
        keep = false;
        break;
      }
    }
    if (keep) out.push_back(x);
  }
  return out;
}

double dist_gap(const UncertainSequence& seq, std::size_t n, std::span<const double> x_grid,
                double exclusion_radius) {
  require_index(seq, n);
  const auto grid = continuity_grid(seq.limit(), x_grid, exclusion_radius);
  if (grid.empty()) throw InputError("distribution grid has no continuity points of the limit distribution");
  const auto cdf = limit_distribution(seq.space(), seq.limit(), grid);
  return dist_gap_on(seq.space(), seq.row(n), grid, cdf);
}

double riesz_gap(GapKind kind, const UncertainSequence& seq, const WeightSequence& weights, std::size_t n,
                 const RieszGapParams& params) {
  const auto nu = transform_at(seq, weights, n);
  const auto& space = seq.space();
  auto dev = deviation(nu.values(), seq.limit());
  switch (kind) {
    case GapKind::almost_sure:
      return params.orlicz(sup_over(dev, space.almost_sure()));
    case GapKind::measure:
      require_epsilon(params.epsilon);
      for (double& d : dev) d = params.orlicz(d);
      return measure_at_least(space, dev, params.epsilon);
    case GapKind::mean:
      for (double& d : dev) d = params.orlicz(d);
      return expected_value(space, dev);
    case GapKind::distribution: {
      const auto grid = continuity_grid(seq.limit(), params.x_grid, params.exclusion_radius);
      if (grid.empty()) throw InputError("distribution grid has no continuity points of the limit distribution");
      const auto cdf = limit_distribution(space, seq.limit(), grid);
      return dist_gap_on(space, nu.values(), grid, cdf);
    }
  }
  return 0.0;
}

std::size_t oscillation_window_end(std::size_t n, double lambda) {
  return static_cast<std::size_t>(std::floor((1.0 + lambda) * static_cast<double>(n) + 1e-9));
}

std::optional<double> slow_osc_gap(const UncertainSequence& seq, std::size_t n, double lambda, double eps) {
  require_index(seq, n);
  require_epsilon(eps);
  if (!(lambda > 0.0)) throw InputError("lambda must be positive");
  const std::size_t end = oscillation_window_end(n, lambda);
  if (end > seq.horizon()) return std::nullopt;
  std::vector<double> osc(seq.atoms(), 0.0);
  for (std::size_t k = n; k <= end; ++k) {
    for (std::size_t a = 0; a < seq.atoms(); ++a) {
      osc[a] = std::max(osc[a], std::abs(seq.value(k, a) - seq.value(n, a)));
    }
  }
  return measure_at_least(seq.space(), osc, eps);
}

MarkovCheck markov_check(const UncertaintySpace& space, const UncertainVariable& var, const OrliczSpec& spec,
                         double t) {
  if (!(t > 0.0)) throw InputError("Markov bound needs t > 0");
  const double phi_t = spec(t);
  if (!(phi_t > 0.0)) throw InputError("Markov bound needs phi(t) > 0");
  const auto magnitude = var.map([](double v) { return std::abs(v); });
  MarkovCheck out;
  out.lhs = space.measure(event_where(magnitude.values(), [t](double v) { return v >= t; }));
  out.rhs = orlicz_moment(space, var, spec) / phi_t;
  return out;
}

UniquenessBound uniqueness_bound(const UncertainSequence& seq, const WeightSequence& weights, std::size_t n,
                                 const UncertainVariable& xi, const UncertainVariable& eta, double eps) {
  require_epsilon(eps);
  const auto& space = seq.space();
  const auto nu = transform_at(seq, weights, n);
  UniquenessBound out;
  out.lhs = measure_at_least(space, abs_difference(xi, eta).values(), eps);
  out.rhs = measure_at_least(space, abs_difference(nu, xi).values(), eps / 2.0) +
            measure_at_least(space, abs_difference(nu, eta).values(), eps / 2.0);
  return out;
}

BorelCantelliBudget borel_cantelli_budget(std::span<const double> event_measures, double tolerance,
                                          double tail_fraction) {
  BorelCantelliBudget out;
  out.partial_sums.reserve(event_measures.size());
  CompensatedSum running;
  for (double m : event_measures) {
    if (!(m >= 0.0 && m <= 1.0)) throw InputError("event measures must lie in [0, 1]");
    running.add(m);
    out.partial_sums.push_back(running.value());
  }
  const std::size_t n = out.partial_sums.size();
  if (n == 0) {
    out.summable_trend = true;
    return out;
  }
  auto sum_at = [&](std::size_t k) { return k == 0 ? 0.0 : out.partial_sums[k - 1]; };
  const std::size_t len = tail_length(n, tail_fraction);
  out.tail_increment = sum_at(n) - sum_at(n - len);
  if (n >= 4) {
    const double recent = sum_at(n) - sum_at(n / 2);
    const double earlier = sum_at(n / 2) - sum_at(n / 4);
    out.block_ratio = earlier > 0.0 ? recent / earlier : (recent > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
  }
  out.summable_trend = out.tail_increment <= tolerance || (n >= 4 && out.block_ratio < kDivergentBlockRatio);
  return out;
}

double uniform_tail_gap(const UncertainSequence& seq, const WeightSequence& weights, std::size_t m, double eps) {
  require_index(seq, m);
  return uniform_tail_gap_raw(riesz_transform(seq, weights), m, eps);
}

double uniform_tail_gap_raw(const UncertainSequence& seq, std::size_t m, double eps) {
  require_index(seq, m);
  require_epsilon(eps);
  Event event = 0;
  for (std::size_t n = m; n <= seq.horizon(); ++n) {
    event |= event_where(deviation(seq.row(n), seq.limit()), [eps](double d) { return d >= eps; });
  }
  return seq.space().measure(event);
}

Extraction extract_uas_subsequence(const UncertainSequence& seq, const WeightSequence& weights,
                                   const ExtractionConfig& config) {
  const auto nu = riesz_transform(seq, weights);
  const std::size_t cap = config.max_terms == 0 ? seq.horizon() : config.max_terms;
  Extraction out;
  std::size_t next = 1;
  for (std::size_t k = 1; out.indices.size() < cap; ++k) {
    const double eps = 1.0 / static_cast<double>(k);
    const double budget = std::ldexp(1.0, -static_cast<int>(std::min<std::size_t>(k, 2000)));
    bool found = false;
    for (std::size_t n = next; n <= nu.horizon(); ++n) {
      if (measure_gap(nu, n, eps) <= budget) {
        out.indices.push_back(n);
        next = n + 1;
        found = true;
        break;
      }
    }
    if (!found) {
      out.exhausted = true;
      break;
    }
  }
  return out;
}

MomentDecayFit moment_decay_fit(const UncertainSequence& seq, const WeightSequence& weights, double p,
                                std::span<const std::size_t> sample_indices) {
  if (!(p > 1.0)) throw InputError("moment decay fit needs p > 1");
  if (sample_indices.size() < 8) throw InputError("moment decay fit needs at least 8 sample indices");
  for (std::size_t i = 0; i < sample_indices.size(); ++i) {
    if (sample_indices[i] == 0 || (i > 0 && sample_indices[i] <= sample_indices[i - 1])) {
      throw InputError("sample indices must be positive and strictly increasing");
    }
  }
  require_index(seq, sample_indices.back());
  const auto nu = riesz_transform(seq.truncated(sample_indices.back()), weights);

  std::vector<double> xs, ys;
  for (std::size_t n : sample_indices) {
    auto dev = deviation(nu.row(n), seq.limit());
    for (double& d : dev) d = std::pow(d, p);
    const double moment = expected_value(seq.space(), dev);
    if (moment > 0.0) {
      xs.push_back(std::log(static_cast<double>(n)));
      ys.push_back(std::log(moment));
    }
  }
  MomentDecayFit fit;
  fit.points_used = xs.size();
  if (xs.empty()) {
    fit.exact_convergence = true;
    fit.delta_hat = std::numeric_limits<double>::infinity();
    fit.decay_evident = true;
    return fit;
  }
  if (xs.size() < 2) throw InputError("moment decay fit needs at least two nonzero moments");
  const double k = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= k;
  my /= k;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    fit.max_residual = std::max(fit.max_residual, std::abs(ys[i] - (intercept + slope * xs[i])));
  }
  fit.delta_hat = -slope - 1.0;
  fit.c_hat = std::exp(intercept);
  fit.decay_evident = fit.delta_hat > 0.0;
  return fit;
}

// ---- classification -----------------------------------------------------

const std::vector<std::string>& class_labels() {
  static const std::vector<std::string> labels{"d", "d_R", "e", "e_R", "f", "f_R", "m",
                                               "m_R", "orlicz_R", "so", "u", "u_R"};
  return labels;
}

Verdict ClassReport::verdict(const std::string& class_label) const {
  const auto it = verdicts.find(class_label);
  if (it == verdicts.end()) throw InputError("no verdict for class '" + class_label + "'");
  return it->second;
}

namespace {

struct RowBuilder {
  ClassReport& report;
  std::size_t tail_begin_default;
  double tol;

  void add(const std::string& label, const std::string& param, double k1, double k2, std::vector<double> gaps,
           std::size_t tail_begin, bool fail_condition) {
    ClassRow row{label, param, 0.0, Verdict::inconclusive, k1, k2};
    if (gaps.empty()) {
      row.tail_max_gap = std::numeric_limits<double>::quiet_NaN();
    } else {
      row.tail_max_gap = *std::max_element(gaps.begin() + static_cast<std::ptrdiff_t>(tail_begin), gaps.end());
      if (row.tail_max_gap <= tol) {
        row.verdict = Verdict::pass;
      } else if (fail_condition) {
        row.verdict = Verdict::fail;
      }
    }
    report.rows.push_back(row);
    report.profiles.push_back(GapProfile{label, param, 1, std::move(gaps)});
  }
};

}  // namespace

ClassReport classify(const UncertainSequence& seq, const WeightSequence& weights, const OrliczSpec& orlicz,
                     const DiagnosticConfig& config) {
  config.validate();
  const std::size_t horizon = config.horizon == 0 ? seq.horizon() : config.horizon;
  if (horizon > seq.horizon()) {
    throw InputError("diagnostic horizon " + std::to_string(horizon) + " exceeds the sequence horizon " +
                     std::to_string(seq.horizon()));
  }
  if (horizon < 10) throw InputError("classification needs a horizon of at least 10");

  const UncertainSequence raw = horizon == seq.horizon() ? seq : seq.truncated(horizon);
  const UncertainSequence nu = riesz_transform(raw, weights);
  const UncertaintySpace& space = raw.space();
  const Event full = space.full();
  const Event lambda_set = space.almost_sure();
  const double tol = config.tolerance;
  const double ten_tol = 10.0 * tol;
  const double stall = config.stall_ratio;
  const double eps_min = *std::min_element(config.epsilon_grid.begin(), config.epsilon_grid.end());

  ClassReport report;
  report.config = config;
  report.horizon = horizon;
  const std::size_t tb = horizon - tail_length(horizon, config.tail_fraction);
  RowBuilder rows{report, tb, tol};

  auto identity = [](double d) { return d; };
  auto phi = [&orlicz](double d) { return orlicz(d); };
  const Table raw_dev = deviation_table(raw, horizon, identity);
  const Table nu_dev = deviation_table(nu, horizon, identity);
  const Table nu_phi = deviation_table(nu, horizon, phi);

  // f, f_R
  auto sup_class = [&](const std::string& label, const Table& dev) {
    std::vector<double> gaps(horizon);
    for (std::size_t r = 0; r < horizon; ++r) gaps[r] = sup_over(dev.row(r), lambda_set);
    const Event stuck = stalled_support(dev, tb, lambda_set, [&](double d) { return d > ten_tol; }, stall);
    rows.add(label, "-", 0, 0, std::move(gaps), tb, stuck != 0);
  };
  sup_class("f", raw_dev);
  sup_class("f_R", nu_phi);

  // e, e_R
  auto mean_class = [&](const std::string& label, const Table& dev) {
    std::vector<double> gaps(horizon);
    for (std::size_t r = 0; r < horizon; ++r) gaps[r] = expected_value(space, dev.row(r));
    const Event stuck = stalled_support(dev, tb, full, [](double d) { return d > 0.0; }, stall);
    double floor_stat = std::numeric_limits<double>::infinity();
    if (stuck != 0) {
      for (std::size_t r = tb; r < horizon; ++r) {
        floor_stat = std::min(floor_stat, masked_expectation(space, dev.row(r), stuck));
      }
    }
    rows.add(label, "-", 0, 0, std::move(gaps), tb, stuck != 0 && floor_stat > ten_tol);
  };
  mean_class("e", raw_dev);
  mean_class("e_R", nu_phi);

  // m, m_R: the fail threshold is at least tol/eps so that a passing mean
  // class can never sit above a failing measure class (Markov).
  auto measure_class = [&](const std::string& label, const Table& dev) {
    for (double eps : config.epsilon_grid) {
      std::vector<double> gaps(horizon);
      for (std::size_t r = 0; r < horizon; ++r) gaps[r] = measure_at_least(space, dev.row(r), eps);
      const Event stuck = stalled_support(dev, tb, full, [eps](double d) { return d >= eps; }, stall);
      const double threshold = std::max(ten_tol, tol / eps);
      rows.add(label, "eps=" + format_param(eps), eps, 0, std::move(gaps), tb,
               stuck != 0 && space.measure(stuck) > threshold);
    }
  };
  measure_class("m", raw_dev);
  measure_class("m_R", nu_phi);

  // d, d_R on continuity points at least the smallest epsilon away from the
  // jumps of the limit distribution.
  {
    const auto& limit = raw.limit();
    const auto [lo_it, hi_it] = std::minmax_element(limit.begin(), limit.end());
    const double lo = *lo_it - 1.0;
    const double hi = *hi_it + 1.0;
    std::vector<double> candidates(config.dist_grid_points);
    for (std::size_t g = 0; g < candidates.size(); ++g) {
      candidates[g] = lo + (hi - lo) * static_cast<double>(g) / static_cast<double>(candidates.size() - 1);
    }
    auto dist_class = [&](const std::string& label, const UncertainSequence& s, const Table& dev, double radius) {
      const auto grid = continuity_grid(limit, candidates, radius);
      if (grid.empty()) {
        throw InputError("distribution grid for " + label + " is empty; raise dist_grid_points");
      }
      const auto cdf = limit_distribution(space, limit, grid);
      std::vector<double> gaps(horizon);
      for (std::size_t n = 1; n <= horizon; ++n) gaps[n - 1] = dist_gap_on(space, s.row(n), grid, cdf);
      const double tail_min = *std::min_element(gaps.begin() + static_cast<std::ptrdiff_t>(tb), gaps.end());
      const Event stuck = stalled_support(dev, tb, full, [radius](double d) { return d > radius; }, stall);
      rows.add(label, "-", 0, 0, std::move(gaps), tb, tail_min > ten_tol && space.measure(stuck) > ten_tol);
    };
    dist_class("d", raw, raw_dev, eps_min);
    dist_class("d_R", nu, nu_dev, orlicz.inverse(eps_min));
  }

  // so
  for (double lambda : config.lambda_grid) {
    const std::size_t count = available_oscillation_count(horizon, lambda);
    const Table osc = oscillation_table(raw, count, lambda);
    for (double eps : config.epsilon_grid) {
      const std::string param = "lambda=" + format_param(lambda) + ";eps=" + format_param(eps);
      if (count < 2) {
        rows.add("so", param, lambda, eps, {}, 0, false);
        continue;
      }
      const std::size_t otb = count - tail_length(count, config.tail_fraction);
      std::vector<double> gaps(count);
      for (std::size_t r = 0; r < count; ++r) gaps[r] = measure_at_least(space, osc.row(r), eps);
      const Event stuck = stalled_support(osc, otb, full, [eps](double d) { return d >= eps; }, stall);
      rows.add("so", param, lambda, eps, std::move(gaps), otb, space.measure(stuck) > ten_tol);
    }
  }

  // u (raw union tails) and u_R (Riesz union tails)
  auto union_class = [&](const std::string& label, const Table& dev) {
    for (double eps : config.epsilon_grid) {
      std::vector<double> gaps(horizon);
      Event event = 0;
      for (std::size_t r = horizon; r-- > 0;) {
        event |= event_where(dev.row(r), [eps](double d) { return d >= eps; });
        gaps[r] = space.measure(event);
      }
      const Event stuck = stalled_support(dev, tb, full, [eps](double d) { return d >= eps; }, stall);
      rows.add(label, "eps=" + format_param(eps), eps, 0, std::move(gaps), tb, space.measure(stuck) > ten_tol);
    }
  };
  union_class("u", raw_dev);
  union_class("u_R", nu_dev);

  // Orlicz-p Riesz distance
  {
    const double p = orlicz.p();
    Table inner(horizon, raw.atoms());
    for (std::size_t r = 0; r < horizon; ++r) {
      for (std::size_t a = 0; a < raw.atoms(); ++a) inner.at(r, a) = orlicz(std::pow(nu_dev.at(r, a), p));
    }
    std::vector<double> gaps(horizon);
    for (std::size_t r = 0; r < horizon; ++r) {
      gaps[r] = std::pow(std::max(expected_value(space, inner.row(r)), 0.0), 1.0 / p);
    }
    const Event stuck = stalled_support(inner, tb, full, [](double d) { return d > 0.0; }, stall);
    double floor_stat = std::numeric_limits<double>::infinity();
    if (stuck != 0) {
      for (std::size_t r = tb; r < horizon; ++r) {
        floor_stat = std::min(floor_stat, std::pow(masked_expectation(space, inner.row(r), stuck), 1.0 / p));
      }
    }
    rows.add("orlicz_R", "p=" + format_param(p) + ";phi=" + orlicz.name(), p, 0, std::move(gaps), tb,
             stuck != 0 && floor_stat > ten_tol);
  }

  std::sort(report.rows.begin(), report.rows.end(), [](const ClassRow& a, const ClassRow& b) {
    if (a.class_label != b.class_label) return a.class_label < b.class_label;
    if (a.sort_key_1 != b.sort_key_1) return a.sort_key_1 < b.sort_key_1;
    return a.sort_key_2 < b.sort_key_2;
  });
  for (const auto& row : report.rows) {
    auto [it, inserted] = report.verdicts.emplace(row.class_label, row.verdict);
    if (inserted) continue;
    if (it->second == Verdict::fail || row.verdict == Verdict::fail) {
      it->second = Verdict::fail;
    } else if (it->second == Verdict::inconclusive || row.verdict == Verdict::inconclusive) {
      it->second = Verdict::inconclusive;
    }
  }

  report.regularity = check_regularity(weights, horizon, tol);
  report.tauberian = tauberian_condition_profile(weights, horizon, config.tauberian);
  return report;
}

const std::vector<InclusionArrow>& inclusion_arrows() {
  static const std::vector<InclusionArrow> arrows{
      {"f", "f_R", true}, {"e", "e_R", true},  {"m", "m_R", true},    {"d", "d_R", true},
      {"e", "m", false},  {"m", "d", false},   {"e_R", "m_R", false}, {"m_R", "d_R", false},
  };
  return arrows;
}

std::vector<std::vector<std::string>> inclusion_grid() {
  const std::vector<std::string> raw{"f", "e", "m", "d"};
  auto has = [](const std::string& a, const std::string& b) {
    for (const auto& arrow : inclusion_arrows()) {
      if (arrow.from == a && arrow.to == b) return true;
    }
    return false;
  };
  std::vector<std::vector<std::string>> grid(3);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const std::string riesz = raw[i] + "_R";
    if (i > 0) {
      grid[0].push_back(has(raw[i - 1], raw[i]) ? "=>" : "");
      grid[1].push_back("");
      grid[2].push_back(has(raw[i - 1] + "_R", riesz) ? "=>" : "");
    }
    grid[0].push_back(raw[i]);
    grid[1].push_back(has(raw[i], riesz) ? "v" : "");
    grid[2].push_back(riesz);
  }
  return grid;
}

std::vector<std::string> arrow_violations(const ClassReport& report) {
  std::vector<std::string> out;
  for (const auto& arrow : inclusion_arrows()) {
    if (arrow.needs_regular_weights && !report.regularity.regular) continue;
    if (report.verdict(arrow.from) == Verdict::pass && report.verdict(arrow.to) == Verdict::fail) {
      out.push_back(arrow.from + "=>" + arrow.to);
    }
  }
  return out;
}

std::string format_fixed(double value) {
  if (std::isnan(value)) return "nan";
  if (value == 0.0) value = 0.0;  // no negative zero
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12f", value);
  std::string s = buf;
  if (s == "-0.000000000000") s = "0.000000000000";
  return s;
}

std::string to_csv(const ClassReport& report) {
  std::ostringstream os;
  os << "class,param,tail_max_gap,verdict\n";
  for (const auto& row : report.rows) {
    os << row.class_label << ',' << row.param << ',' << format_fixed(row.tail_max_gap) << ','
       << to_string(row.verdict) << '\n';
  }
  os << "weights:regular,-," << format_fixed(report.regularity.column_ratio) << ','
     << (report.regularity.regular ? "pass" : "fail") << '\n';
  os << "weights:tauberian,-," << format_fixed(report.tauberian.tail_max) << ','
     << (report.tauberian.holds ? "pass" : "fail") << '\n';
  return os.str();
}

namespace {

std::string diagram_cell(const std::string& token, const ClassReport& report) {
  if (token.empty()) return "▒";
  if (token == "=>") return "⇒";
  if (token == "v") return "⇓";
  return token + ": " + std::string(to_string(report.verdict(token)));
}

}  // namespace

std::string to_markdown(const ClassReport& report) {
  std::ostringstream os;
  os << "# Classification" << (report.scenario.empty() ? "" : ": " + report.scenario) << "\n\n";
  os << "Horizon " << report.horizon << ", tolerance " << format_param(report.config.tolerance)
     << ", tail window " << format_param(report.config.tail_fraction * 100.0)
     << "% of indices. Verdicts are EMPIRICAL (finite-horizon evidence, not proof).\n\n";
  const auto layout = inclusion_grid();
  for (std::size_t r = 0; r < layout.size(); ++r) {
    os << '|';
    for (const auto& token : layout[r]) os << ' ' << diagram_cell(token, report) << " |";
    os << '\n';
    if (r == 0) os << "|---|---|---|---|---|---|---|\n";
  }
  os << "\n| class | param | tail max gap | verdict |\n|---|---|---|---|\n";
  for (const auto& row : report.rows) {
    os << "| " << row.class_label << " | " << row.param << " | " << format_fixed(row.tail_max_gap) << " | "
       << to_string(row.verdict) << " |\n";
  }
  const auto& reg = report.regularity;
  os << "\nWeights regular (EMPIRICAL): " << (reg.regular ? "yes" : "no") << " (p_1/P_N = "
     << format_fixed(reg.column_ratio) << ", dyadic growth ratio " << format_fixed(reg.block_growth_ratio)
     << ")\n";
  os << "Tauberian weight condition n p_n / P_n -> 0 (EMPIRICAL): " << (report.tauberian.holds ? "HOLDS" : "FAILS")
     << " (tail max " << format_fixed(report.tauberian.tail_max) << ")\n";
  const auto violations = arrow_violations(report);
  os << "Inclusion arrows violated: " << (violations.empty() ? "none" : "") << '\n';
  for (const auto& v : violations) os << "- " << v << '\n';
  return os.str();
}

}  // namespace riesz
