#include "riesz/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "riesz/errors.hpp"

namespace riesz {

namespace {

std::vector<double> per_atom(const FamilyParams& params, const std::string& key, std::size_t atoms,
                             std::optional<double> fallback = std::nullopt) {
  const auto it = params.find(key);
  if (it == params.end()) {
    if (fallback) return std::vector<double>(atoms, *fallback);
    throw InputError("family parameter '" + key + "' is missing");
  }
  const auto& v = it->second;
  for (double x : v) {
    if (!std::isfinite(x)) throw InputError("family parameter '" + key + "' is not finite");
  }
  if (v.size() == 1) return std::vector<double>(atoms, v.front());
  if (v.size() != atoms) {
    throw InputError("family parameter '" + key + "' has " + std::to_string(v.size()) + " entries for " +
                     std::to_string(atoms) + " atoms");
  }
  return v;
}

void require_horizon(std::size_t horizon) {
  if (horizon == 0) throw InputError("sequence horizon must be positive");
}

// Dyadic block index j with n in (2^(j-1), 2^j].
int dyadic_block(std::size_t n) {
  int j = 0;
  std::size_t top = 1;
  while (top < n) {
    top <<= 1;
    ++j;
  }
  return j;
}

}  // namespace

const std::vector<std::string>& family_kinds() {
  static const std::vector<std::string> kinds{"constant",       "decay",          "oscillating",
                                              "block_oscillating", "atomwise_mixed", "explicit"};
  return kinds;
}

UncertainSequence builtin_family(const std::string& kind, const FamilyParams& params,
                                 std::shared_ptr<const UncertaintySpace> space, std::size_t horizon) {
  if (!space) throw InputError("family needs a space");
  const std::size_t m = space->size();

  if (kind == "constant") {
    require_horizon(horizon);
    const UncertainVariable c(per_atom(params, "c", m));
    return UncertainSequence(space, [c](std::size_t) { return c; }, c, horizon);
  }
  if (kind == "decay" || kind == "atomwise_mixed") {
    require_horizon(horizon);
    const auto base = per_atom(params, "base", m, 0.0);
    const auto c = per_atom(params, "c", m, 1.0);
    const auto alpha = per_atom(params, "alpha", m);
    if (kind == "decay" && std::adjacent_find(alpha.begin(), alpha.end(), std::not_equal_to<>()) != alpha.end()) {
      throw InputError("decay takes a single alpha; use atomwise_mixed for per-atom rates");
    }
    for (double a : alpha) {
      if (!(a > 0.0)) throw InputError("decay rate alpha must be positive");
    }
    auto rule = [base, c, alpha](std::size_t n) {
      std::vector<double> v(base.size());
      for (std::size_t i = 0; i < v.size(); ++i) v[i] = base[i] + c[i] / std::pow(static_cast<double>(n), alpha[i]);
      return UncertainVariable(std::move(v));
    };
    return UncertainSequence(space, rule, UncertainVariable(base), horizon);
  }
  if (kind == "oscillating") {
    require_horizon(horizon);
    const auto high = per_atom(params, "high", m, 1.0);
    const auto low = per_atom(params, "low", m, 0.0);
    std::vector<double> mid(m);
    for (std::size_t i = 0; i < m; ++i) mid[i] = 0.5 * (high[i] + low[i]);
    auto rule = [high, low](std::size_t n) { return UncertainVariable(n % 2 == 1 ? high : low); };
    return UncertainSequence(space, rule, UncertainVariable(mid), horizon);
  }
  if (kind == "block_oscillating") {
    require_horizon(horizon);
    const auto base = per_atom(params, "base", m, 0.0);
    const auto amp = per_atom(params, "amp", m, 1.0);
    auto rule = [base, amp](std::size_t n) {
      const double sign = n % 2 == 0 ? 1.0 : -1.0;
      const double scale = std::ldexp(1.0, -dyadic_block(n));
      std::vector<double> v(base.size());
      for (std::size_t i = 0; i < v.size(); ++i) v[i] = base[i] + amp[i] * sign * scale;
      return UncertainVariable(std::move(v));
    };
    return UncertainSequence(space, rule, UncertainVariable(base), horizon);
  }
  if (kind == "explicit") {
    const auto it = params.find("terms");
    if (it == params.end() || it->second.empty()) throw InputError("explicit family needs 'terms'");
    const std::vector<double> flat = it->second;
    if (flat.size() % m != 0) throw InputError("explicit terms are not a whole number of rows");
    const std::size_t available = flat.size() / m;
    const std::size_t h = horizon == 0 ? available : horizon;
    if (h > available) {
      throw InputError("horizon " + std::to_string(h) + " exceeds the " + std::to_string(available) +
                       " explicit terms");
    }
    const UncertainVariable limit(per_atom(params, "limit", m));
    auto rule = [flat, m](std::size_t n) {
      return UncertainVariable(std::vector<double>(flat.begin() + static_cast<std::ptrdiff_t>((n - 1) * m),
                                                   flat.begin() + static_cast<std::ptrdiff_t>(n * m)));
    };
    for (double x : flat) {
      if (!std::isfinite(x)) throw InputError("explicit terms must be finite");
    }
    return UncertainSequence(space, rule, limit, h);
  }
  throw InputError("unknown sequence family '" + kind + "'");
}

UncertainSequence Scenario::sequence(std::size_t horizon_override) const {
  return builtin_family(family, params, space, horizon_override == 0 ? horizon : horizon_override);
}

Scenario oscillating_counterexample() {
  Scenario s;
  s.name = "counterexample";
  const std::vector<double> one{1.0};
  s.space = std::make_shared<const UncertaintySpace>(UncertaintySpace::additive({"g1"}, one));
  s.family = "oscillating";
  s.params = {{"high", {1.0}}, {"low", {0.0}}};
  s.horizon = 10000;
  s.weights = WeightSequence::constant(1.0);
  s.orlicz = OrliczSpec::identity();
  s.config.tolerance = 1e-4;
  Golden g;
  g.verdicts = {{"f", Verdict::fail}, {"f_R", Verdict::pass}};
  for (std::size_t n : {1, 2, 5, 6, 9999, 10000}) {
    const double nu = n % 2 == 1 ? 0.5 + 0.5 / static_cast<double>(n) : 0.5;
    g.transform.push_back({n, {nu}});
  }
  s.golden = g;
  return s;
}

ClassReport classify(const Scenario& scenario) {
  const std::size_t h = scenario.config.horizon == 0 ? scenario.horizon : scenario.config.horizon;
  auto report = classify(scenario.sequence(h), scenario.weights, scenario.orlicz, scenario.config);
  report.scenario = scenario.name;
  return report;
}

std::vector<std::string> InclusionTable::violations() const {
  std::vector<std::string> out;
  for (const auto& row : rows) {
    for (const auto& v : row.violations) out.push_back(row.scenario + ": " + v);
  }
  return out;
}

std::vector<std::string> InclusionTable::golden_mismatches() const {
  std::vector<std::string> out;
  for (const auto& row : rows) {
    for (const auto& v : row.golden_mismatches) out.push_back(row.scenario + ": " + v);
  }
  return out;
}

InclusionTable inclusion_table(const std::vector<Scenario>& corpus) {
  if (corpus.empty()) throw InputError("inclusion table needs a nonempty corpus");
  InclusionTable table;
  table.grid = inclusion_grid();
  for (const auto& row : table.grid) {
    for (const auto& cell : row) {
      if (!cell.empty() && cell != "=>" && cell != "v") table.witnesses[cell] = {0, 0};
    }
  }

  for (const auto& scenario : corpus) {
    const auto report = classify(scenario);
    InclusionRow row;
    row.scenario = scenario.name;
    row.verdicts = report.verdicts;
    row.regular = report.regularity.regular;
    row.tauberian = report.tauberian.holds;
    row.violations = arrow_violations(report);
    for (auto& [label, counts] : table.witnesses) {
      const Verdict v = report.verdict(label);
      if (v == Verdict::pass) ++counts.first;
      if (v == Verdict::fail) ++counts.second;
    }
    if (report.verdict("m_R") == Verdict::pass && report.verdict("f_R") == Verdict::pass) {
      table.intersection_witnesses.push_back(scenario.name);
    }
    if (scenario.golden) {
      for (const auto& [label, expected] : scenario.golden->verdicts) {
        const auto it = report.verdicts.find(label);
        if (it == report.verdicts.end()) {
          row.golden_mismatches.push_back("unknown class '" + label + "' in golden verdicts");
        } else if (it->second != expected) {
          row.golden_mismatches.push_back(label + " expected " + std::string(to_string(expected)) + ", got " +
                                          std::string(to_string(it->second)));
        }
      }
      const auto seq = scenario.sequence();
      for (const auto& gt : scenario.golden->transform) {
        if (gt.n == 0 || gt.n > seq.horizon()) {
          row.golden_mismatches.push_back("golden transform index " + std::to_string(gt.n) + " out of range");
          continue;
        }
        const auto nu = transform_at(seq, scenario.weights, gt.n);
        if (gt.values.size() != nu.size()) {
          row.golden_mismatches.push_back("golden transform at n=" + std::to_string(gt.n) + " has wrong arity");
          continue;
        }
        for (std::size_t a = 0; a < nu.size(); ++a) {
          if (!(std::abs(nu[a] - gt.values[a]) <= kGoldenTransformTolerance)) {
            std::ostringstream os;
            os.precision(17);
            os << "nu_" << gt.n << "(" << scenario.space->atoms()[a] << ") expected " << gt.values[a] << ", got "
               << nu[a];
            row.golden_mismatches.push_back(os.str());
          }
        }
      }
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string to_csv(const InclusionTable& table) {
  std::ostringstream os;
  os << "scenario";
  for (const auto& label : class_labels()) os << ',' << label;
  os << ",weights_regular,weights_tauberian,violations\n";
  for (const auto& row : table.rows) {
    os << row.scenario;
    for (const auto& label : class_labels()) {
      const auto it = row.verdicts.find(label);
      os << ',' << (it == row.verdicts.end() ? "-" : std::string(to_string(it->second)));
    }
    os << ',' << (row.regular ? "pass" : "fail") << ',' << (row.tauberian ? "pass" : "fail") << ',';
    for (std::size_t i = 0; i < row.violations.size(); ++i) os << (i ? ";" : "") << row.violations[i];
    os << '\n';
  }
  return os.str();
}

std::string to_markdown(const InclusionTable& table) {
  std::ostringstream os;
  os << "# Inclusion table\n\n";
  os << "Each class shows how many corpus scenarios pass / fail it (EMPIRICAL verdicts).\n\n";
  for (std::size_t r = 0; r < table.grid.size(); ++r) {
    os << '|';
    for (const auto& cell : table.grid[r]) {
      std::string text;
      if (cell.empty()) {
        text = "▒";
      } else if (cell == "=>") {
        text = "⇒";
      } else if (cell == "v") {
        text = "⇓";
      } else {
        const auto& [pass, fail] = table.witnesses.at(cell);
        text = cell + " (" + std::to_string(pass) + " pass / " + std::to_string(fail) + " fail)";
      }
      os << ' ' << text << " |";
    }
    os << '\n';
    if (r == 0) {
      os << '|';
      for (std::size_t c = 0; c < table.grid[r].size(); ++c) os << "---|";
      os << '\n';
    }
  }
  os << "\nm_R ∩ f_R ≠ ∅: ";
  if (table.intersection_witnesses.empty()) {
    os << "not witnessed";
  } else {
    os << "witnessed by ";
    for (std::size_t i = 0; i < table.intersection_witnesses.size(); ++i) {
      os << (i ? ", " : "") << table.intersection_witnesses[i];
    }
  }
  os << '\n';
  os << "\n| scenario |";
  for (const auto& label : class_labels()) os << ' ' << label << " |";
  os << " regular | Tauberian |\n|---|";
  for (std::size_t i = 0; i < class_labels().size() + 2; ++i) os << "---|";
  os << '\n';
  for (const auto& row : table.rows) {
    os << "| " << row.scenario << " |";
    for (const auto& label : class_labels()) {
      const auto it = row.verdicts.find(label);
      os << ' ' << (it == row.verdicts.end() ? "-" : std::string(to_string(it->second))) << " |";
    }
    os << ' ' << (row.regular ? "yes" : "no") << " | " << (row.tauberian ? "HOLDS" : "FAILS") << " |\n";
  }
  const auto violations = table.violations();
  const auto mismatches = table.golden_mismatches();
  os << "\nArrow violations: " << (violations.empty() ? "none" : std::to_string(violations.size())) << '\n';
  for (const auto& v : violations) os << "- " << v << '\n';
  os << "Golden mismatches: " << (mismatches.empty() ? "none" : std::to_string(mismatches.size())) << '\n';
  for (const auto& v : mismatches) os << "- " << v << '\n';
  return os.str();
}

}  // namespace riesz
