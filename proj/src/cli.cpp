#include "riesz/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "riesz/errors.hpp"
#include "riesz/scenario_io.hpp"

namespace riesz {

namespace {

struct Overrides {
  std::size_t horizon = 0;
  std::vector<double> eps;
  std::vector<double> lambda;
  double tol = 0.0;
  std::string format = "csv";
  std::string out_path;
};

void apply(const Overrides& o, Scenario& s) {
  if (o.horizon != 0) s.config.horizon = o.horizon;
  if (!o.eps.empty()) s.config.epsilon_grid = o.eps;
  if (!o.lambda.empty()) s.config.lambda_grid = o.lambda;
  if (o.tol > 0.0) s.config.tolerance = o.tol;
  s.config.validate();
}

// Writes to --out when given, else to `out`.
void emit(const Overrides& o, const std::string& body, std::ostream& out) {
  if (o.out_path.empty()) {
    out << body;
    return;
  }
  std::ofstream f(o.out_path, std::ios::binary);
  if (!f) throw InputError("cannot write '" + o.out_path + "'");
  f << body;
}

// Markov spot checks on seeded random variables over the scenario space.
CheckResult markov_spot_checks(const Scenario& s, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> value(-2.0, 2.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  CheckResult c{"markov_spot_checks", true, ""};
  for (int trial = 0; trial < 64 && c.passed; ++trial) {
    std::vector<double> v(s.space->size());
    for (double& x : v) x = value(rng);
    const UncertainVariable var(v);
    double top = 0.0;
    for (double x : v) top = std::max(top, std::abs(x));
    const double t = std::max(top * (1.0 - unit(rng)), 1e-9);
    if (!(s.orlicz(t) > 0.0)) continue;
    const auto check = markov_check(*s.space, var, s.orlicz, t);
    if (!check.holds()) {
      c.passed = false;
      std::ostringstream os;
      os.precision(17);
      os << "trial " << trial << ": M{|xi| >= " << t << "} = " << check.lhs << " > " << check.rhs;
      c.detail = os.str();
    }
  }
  return c;
}

int cmd_validate(const std::string& path, std::uint64_t seed, std::ostream& out) {
  const auto scenario = load_scenario(path);
  auto report = validate_scenario(scenario);
  if (report.ok()) report.checks.push_back(markov_spot_checks(scenario, seed));
  out << "scenario " << scenario.name << '\n';
  for (const auto& c : report.checks) {
    out << (c.passed ? "PASS " : "FAIL ") << c.name;
    if (!c.passed && !c.detail.empty()) out << ": " << c.detail;
    out << '\n';
  }
  return report.ok() ? kExitOk : kExitDomain;
}

bool require_valid(const Scenario& s, std::ostream& err) {
  const auto report = validate_scenario(s);
  if (report.ok()) return true;
  for (const auto& c : report.checks) {
    if (!c.passed) err << s.name << ": invalid scenario: " << c.name << (c.detail.empty() ? "" : ": ") << c.detail << '\n';
  }
  return false;
}

int cmd_classify(const std::string& path, const Overrides& o, std::ostream& out, std::ostream& err) {
  auto scenario = load_scenario(path);
  apply(o, scenario);
  if (!require_valid(scenario, err)) return kExitDomain;
  const auto report = classify(scenario);
  emit(o, o.format == "md" ? to_markdown(report) : to_csv(report), out);
  return kExitOk;
}

int cmd_table(const std::string& dir, const Overrides& o, std::ostream& out, std::ostream& err) {
  auto corpus = load_corpus(dir);
  for (auto& s : corpus) {
    apply(o, s);
    if (!require_valid(s, err)) return kExitDomain;
  }
  // Scenarios are classified concurrently; assembly order is the corpus order.
  std::vector<std::future<InclusionTable>> parts;
  for (const auto& s : corpus) {
    parts.push_back(std::async(std::launch::async, [&s] { return inclusion_table({s}); }));
  }
  InclusionTable table;
  for (auto& part : parts) {
    auto t = part.get();
    if (table.grid.empty()) {
      table.grid = t.grid;
      table.witnesses = t.witnesses;
    } else {
      for (const auto& [label, counts] : t.witnesses) {
        table.witnesses[label].first += counts.first;
        table.witnesses[label].second += counts.second;
      }
    }
    table.intersection_witnesses.insert(table.intersection_witnesses.end(), t.intersection_witnesses.begin(),
                                        t.intersection_witnesses.end());
    table.rows.push_back(std::move(t.rows.front()));
  }
  emit(o, o.format == "md" ? to_markdown(table) : to_csv(table), out);
  for (const auto& v : table.violations()) err << "arrow violation: " << v << '\n';
  for (const auto& v : table.golden_mismatches()) err << "golden mismatch: " << v << '\n';
  return table.ok() ? kExitOk : kExitDomain;
}

int cmd_transform(const std::string& path, const std::vector<std::size_t>& ns, const Overrides& o,
                  std::ostream& out, std::ostream& err) {
  auto scenario = load_scenario(path);
  apply(o, scenario);
  const std::size_t horizon = scenario.config.horizon == 0 ? scenario.horizon : scenario.config.horizon;
  for (std::size_t n : ns) {
    if (n == 0 || n > horizon) {
      err << "n = " << n << " is outside 1.." << horizon << '\n';
      return kExitDomain;
    }
  }
  const std::size_t top = *std::max_element(ns.begin(), ns.end());
  const auto seq = scenario.sequence(horizon).truncated(top);
  const auto nu = riesz_transform(seq, scenario.weights);
  std::ostringstream os;
  os << "n,atom,nu,roundtrip_residual\n";
  for (std::size_t n : ns) {
    const auto back = inverse_transform_at(nu, scenario.weights, n);
    for (std::size_t a = 0; a < seq.atoms(); ++a) {
      char residual[32];
      std::snprintf(residual, sizeof residual, "%.3e", std::abs(back[a] - seq.value(n, a)));
      os << n << ',' << scenario.space->atoms()[a] << ',' << format_fixed(nu.value(n, a)) << ',' << residual
         << '\n';
    }
  }
  emit(o, os.str(), out);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Riesz-type summability diagnostics for sequences of uncertain variables", "riesz-uncertain"};
  app.require_subcommand(1);

  Overrides o;
  std::string path;
  std::uint64_t seed = 20240521;
  std::vector<std::size_t> ns;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--horizon", o.horizon, "Diagnostic horizon N (>= 10)");
    sub->add_option("--eps", o.eps, "Epsilon grid, comma separated")->delimiter(',');
    sub->add_option("--lambda", o.lambda, "Slow-oscillation lambda grid, comma separated")->delimiter(',');
    sub->add_option("--tol", o.tol, "Verdict tolerance");
    sub->add_option("--format", o.format, "Report format")->check(CLI::IsMember({"csv", "md"}));
    sub->add_option("--out", o.out_path, "Write the report here instead of stdout");
    sub->add_option("--seed", seed, "Seed for randomized spot checks");
  };

  auto* validate = app.add_subcommand("validate", "Check measure axioms, Orlicz function and weights");
  validate->add_option("scenario", path, "Scenario JSON file")->required();
  add_common(validate);

  auto* classify_cmd = app.add_subcommand("classify", "Classify one scenario");
  classify_cmd->add_option("scenario", path, "Scenario JSON file")->required();
  add_common(classify_cmd);

  auto* table = app.add_subcommand("table", "Inclusion table over a directory of scenarios");
  table->add_option("corpus", path, "Directory of scenario JSON files")->required();
  add_common(table);

  auto* transform = app.add_subcommand("transform", "Print Riesz means nu_n and the inverse roundtrip residual");
  transform->add_option("scenario", path, "Scenario JSON file")->required();
  transform->add_option("--n", ns, "Indices, comma separated")->delimiter(',')->required();
  add_common(transform);

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\nrun with --help for usage\n";
    return kExitInput;
  }

  try {
    if (*validate) return cmd_validate(path, seed, out);
    if (*classify_cmd) return cmd_classify(path, o, out, err);
    if (*table) return cmd_table(path, o, out, err);
    if (*transform) return cmd_transform(path, ns, o, out, err);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace riesz
