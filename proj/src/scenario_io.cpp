#include "riesz/scenario_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "riesz/errors.hpp"

namespace riesz {

using nlohmann::json;

namespace {

void only_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw InputError("'" + where + "' must be an object");
  for (const auto& [key, _] : obj.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      throw InputError("unknown key '" + key + "' in '" + where + "'");
    }
  }
}

double number(const json& v, const std::string& what) {
  if (!v.is_number()) throw InputError("'" + what + "' must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw InputError("'" + what + "' must be finite");
  return x;
}

std::vector<double> numbers(const json& v, const std::string& what) {
  if (v.is_number()) return {number(v, what)};
  if (!v.is_array()) throw InputError("'" + what + "' must be a number or a list of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(number(x, what));
  return out;
}

std::size_t count(const json& v, const std::string& what) {
  if (!v.is_number_integer() && !v.is_number_unsigned()) throw InputError("'" + what + "' must be an integer");
  const auto x = v.get<long long>();
  if (x < 0) throw InputError("'" + what + "' must be nonnegative");
  return static_cast<std::size_t>(x);
}

std::string text(const json& v, const std::string& what) {
  if (!v.is_string()) throw InputError("'" + what + "' must be a string");
  return v.get<std::string>();
}

std::vector<std::string> names(const json& v, const std::string& what) {
  if (!v.is_array()) throw InputError("'" + what + "' must be a list of atom names");
  std::vector<std::string> out;
  for (const auto& x : v) out.push_back(text(x, what));
  return out;
}

std::shared_ptr<const UncertaintySpace> parse_space(const json& j, std::size_t max_atoms) {
  only_keys(j, "space", {"atoms", "kind", "weights", "table", "almost_sure"});
  if (!j.contains("atoms")) throw InputError("'space.atoms' is required");
  const auto atoms = names(j.at("atoms"), "space.atoms");
  if (atoms.empty()) throw InputError("space needs at least one atom");
  if (atoms.size() > max_atoms) {
    throw InputError("space has " + std::to_string(atoms.size()) + " atoms; the cap is " +
                     std::to_string(max_atoms) + " (RIESZ_UNCERTAIN_MAX_ATOMS)");
  }
  if (std::set<std::string>(atoms.begin(), atoms.end()).size() != atoms.size()) {
    throw InputError("atom names must be unique");
  }
  const std::string kind = j.contains("kind") ? text(j.at("kind"), "space.kind") : "additive";

  std::optional<UncertaintySpace> space;
  if (kind == "additive" || kind == "possibility") {
    if (!j.contains("weights")) throw InputError("'space.weights' is required for kind '" + kind + "'");
    const auto w = numbers(j.at("weights"), "space.weights");
    if (w.size() != atoms.size()) throw InputError("space.weights must have one entry per atom");
    space = kind == "additive" ? UncertaintySpace::additive(atoms, w) : UncertaintySpace::possibility(atoms, w);
  } else if (kind == "explicit") {
    if (!j.contains("table")) throw InputError("'space.table' is required for kind 'explicit'");
    const auto& t = j.at("table");
    const std::size_t size = std::size_t{1} << atoms.size();
    std::vector<double> table(size, std::nan(""));
    if (t.is_array() && !t.empty() && t.front().is_number()) {
      const auto flat = numbers(t, "space.table");
      if (flat.size() != size) {
        throw InputError("space.table needs 2^" + std::to_string(atoms.size()) + " = " + std::to_string(size) +
                         " entries");
      }
      table = flat;
    } else {
      if (!t.is_array()) throw InputError("'space.table' must be a list");
      // Name lookup goes through a provisional additive space over the same atoms.
      const auto namer = UncertaintySpace::additive(atoms, std::vector<double>(atoms.size(), 1.0));
      for (const auto& entry : t) {
        only_keys(entry, "space.table[]", {"event", "measure"});
        if (!entry.contains("event") || !entry.contains("measure")) {
          throw InputError("space.table entries need 'event' and 'measure'");
        }
        const Event e = namer.event_of(names(entry.at("event"), "space.table[].event"));
        if (!std::isnan(table[e])) throw InputError("space.table lists an event twice");
        table[e] = number(entry.at("measure"), "space.table[].measure");
      }
      if (std::isnan(table[0])) table[0] = 0.0;
      if (std::isnan(table[size - 1])) table[size - 1] = 1.0;
      for (std::size_t e = 0; e < size; ++e) {
        if (std::isnan(table[e])) {
          std::string listed;
          for (std::size_t a = 0; a < atoms.size(); ++a) {
            if (e & (std::size_t{1} << a)) listed += (listed.empty() ? "" : ",") + atoms[a];
          }
          throw InputError("space.table is missing event {" + listed + "}");
        }
      }
    }
    space = UncertaintySpace::from_table(atoms, table);
  } else {
    throw InputError("unknown space kind '" + kind + "'");
  }
  if (j.contains("almost_sure")) {
    space = space->with_almost_sure(space->event_of(names(j.at("almost_sure"), "space.almost_sure")));
  }
  return std::make_shared<const UncertaintySpace>(std::move(*space));
}

WeightSequence parse_weights(const json& j) {
  only_keys(j, "weights", {"kind", "params"});
  const std::string kind = j.contains("kind") ? text(j.at("kind"), "weights.kind") : "constant";
  const json params = j.contains("params") ? j.at("params") : json::object();
  auto param = [&](const char* key, std::optional<double> fallback = std::nullopt) {
    if (!params.is_object()) throw InputError("'weights.params' must be an object");
    if (!params.contains(key)) {
      if (fallback) return *fallback;
      throw InputError(std::string("'weights.params.") + key + "' is required");
    }
    return number(params.at(key), std::string("weights.params.") + key);
  };
  if (kind == "constant") {
    only_keys(params, "weights.params", {"c"});
    return WeightSequence::constant(param("c", 1.0));
  }
  if (kind == "harmonic") {
    only_keys(params, "weights.params", {});
    return WeightSequence::harmonic();
  }
  if (kind == "geometric") {
    only_keys(params, "weights.params", {"ratio"});
    return WeightSequence::geometric(param("ratio"));
  }
  if (kind == "power") {
    only_keys(params, "weights.params", {"exponent"});
    return WeightSequence::power(param("exponent"));
  }
  if (kind == "explicit") {
    only_keys(params, "weights.params", {"values"});
    if (!params.contains("values")) throw InputError("'weights.params.values' is required");
    return WeightSequence::explicit_values(numbers(params.at("values"), "weights.params.values"));
  }
  throw InputError("unknown weight kind '" + kind + "'");
}

OrliczSpec parse_orlicz(const json& j) {
  only_keys(j, "orlicz", {"phi", "exponent", "p", "xs", "ys"});
  const std::string phi = j.contains("phi") ? text(j.at("phi"), "orlicz.phi") : "identity";
  const double p = j.contains("p") ? number(j.at("p"), "orlicz.p") : 1.0;
  if (phi == "identity") return OrliczSpec::identity(p);
  if (phi == "power") {
    if (!j.contains("exponent")) throw InputError("'orlicz.exponent' is required for phi 'power'");
    return OrliczSpec::power(number(j.at("exponent"), "orlicz.exponent"), p);
  }
  if (phi == "expm1") return OrliczSpec::expm1(p);
  if (phi == "table") {
    if (!j.contains("xs") || !j.contains("ys")) throw InputError("phi 'table' needs 'xs' and 'ys'");
    return OrliczSpec::table(numbers(j.at("xs"), "orlicz.xs"), numbers(j.at("ys"), "orlicz.ys"), p);
  }
  throw InputError("unknown Orlicz function '" + phi + "'");
}

void parse_config(const json& j, DiagnosticConfig& config) {
  only_keys(j, "config", {"horizon", "tolerance", "epsilon", "lambda", "tail_fraction"});
  if (j.contains("horizon")) config.horizon = count(j.at("horizon"), "config.horizon");
  if (j.contains("tolerance")) config.tolerance = number(j.at("tolerance"), "config.tolerance");
  if (j.contains("epsilon")) config.epsilon_grid = numbers(j.at("epsilon"), "config.epsilon");
  if (j.contains("lambda")) config.lambda_grid = numbers(j.at("lambda"), "config.lambda");
  if (j.contains("tail_fraction")) config.tail_fraction = number(j.at("tail_fraction"), "config.tail_fraction");
  config.validate();
}

Golden parse_golden(const json& j, std::size_t atoms) {
  only_keys(j, "golden", {"verdicts", "transform"});
  Golden g;
  if (j.contains("verdicts")) {
    const auto& v = j.at("verdicts");
    if (!v.is_object()) throw InputError("'golden.verdicts' must be an object");
    const auto& labels = class_labels();
    for (const auto& [label, verdict] : v.items()) {
      if (std::find(labels.begin(), labels.end(), label) == labels.end()) {
        throw InputError("unknown class '" + label + "' in golden.verdicts");
      }
      g.verdicts[label] = verdict_from_string(text(verdict, "golden.verdicts." + label));
    }
  }
  if (j.contains("transform")) {
    const auto& t = j.at("transform");
    if (!t.is_array()) throw InputError("'golden.transform' must be a list");
    for (const auto& entry : t) {
      only_keys(entry, "golden.transform[]", {"n", "values"});
      if (!entry.contains("n") || !entry.contains("values")) {
        throw InputError("golden.transform entries need 'n' and 'values'");
      }
      GoldenTransform gt{count(entry.at("n"), "golden.transform[].n"),
                         numbers(entry.at("values"), "golden.transform[].values")};
      if (gt.values.size() != atoms) throw InputError("golden.transform values need one entry per atom");
      g.transform.push_back(std::move(gt));
    }
  }
  return g;
}

}  // namespace

std::size_t max_atoms_from_env() {
  const char* raw = std::getenv("RIESZ_UNCERTAIN_MAX_ATOMS");
  if (raw == nullptr || *raw == '\0') return kDefaultMaxAtoms;
  const std::string_view s(raw);
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || value == 0) {
    throw InputError("RIESZ_UNCERTAIN_MAX_ATOMS must be a positive integer, got '" + std::string(s) + "'");
  }
  return std::min(value, kMaxAtoms);
}

Scenario parse_scenario(std::string_view json_text, std::size_t max_atoms) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed scenario JSON: ") + e.what());
  }
  only_keys(j, "scenario", {"name", "space", "sequence", "weights", "orlicz", "config", "golden"});
  if (!j.contains("space")) throw InputError("scenario needs 'space'");
  if (!j.contains("sequence")) throw InputError("scenario needs 'sequence'");

  Scenario s;
  s.name = j.contains("name") ? text(j.at("name"), "name") : "scenario";
  s.space = parse_space(j.at("space"), max_atoms);

  const auto& seq = j.at("sequence");
  only_keys(seq, "sequence", {"family", "params", "horizon"});
  if (!seq.contains("family")) throw InputError("'sequence.family' is required");
  s.family = text(seq.at("family"), "sequence.family");
  if (seq.contains("params")) {
    const auto& params = seq.at("params");
    if (!params.is_object()) throw InputError("'sequence.params' must be an object");
    for (const auto& [key, value] : params.items()) s.params[key] = numbers(value, "sequence.params." + key);
  }
  s.horizon = seq.contains("horizon") ? count(seq.at("horizon"), "sequence.horizon") : 0;
  if (s.horizon == 0 && s.family != "explicit") throw InputError("'sequence.horizon' is required");

  if (j.contains("weights")) s.weights = parse_weights(j.at("weights"));
  if (j.contains("orlicz")) s.orlicz = parse_orlicz(j.at("orlicz"));
  if (j.contains("config")) parse_config(j.at("config"), s.config);
  if (j.contains("golden")) s.golden = parse_golden(j.at("golden"), s.space->size());

  // Surface family parameter errors at load time.
  const auto built = s.sequence();
  s.horizon = built.horizon();
  if (s.config.horizon > s.horizon && s.family == "explicit") {
    throw InputError("config.horizon exceeds the explicit terms");
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& path, std::size_t max_atoms) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read scenario file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_scenario(buf.str(), max_atoms);
  } catch (const InputError& e) {
    throw InputError(path.filename().string() + ": " + e.what());
  }
}

std::vector<Scenario> load_corpus(const std::filesystem::path& dir, std::size_t max_atoms) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) throw InputError("'" + dir.string() + "' is not a directory");
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  if (files.empty()) throw InputError("no scenario files in '" + dir.string() + "'");
  std::sort(files.begin(), files.end());
  std::vector<Scenario> out;
  out.reserve(files.size());
  for (const auto& f : files) out.push_back(load_scenario(f, max_atoms));
  return out;
}

ValidationReport validate_scenario(const Scenario& scenario) {
  ValidationReport report = validate_space(*scenario.space);

  const auto phi = validate_orlicz(scenario.orlicz);
  for (const auto& c : phi.checks) report.checks.push_back({"orlicz_" + c.name, c.passed, c.detail});

  const std::size_t h = std::max(scenario.horizon, scenario.config.horizon);
  CheckResult weights{"weights_positive", true, ""};
  try {
    (void)scenario.weights.partial_sum(h);
  } catch (const InputError& e) {
    weights.passed = false;
    weights.detail = e.what();
  }
  report.checks.push_back(weights);

  CheckResult horizon{"horizon", scenario.config.horizon == 0 || scenario.config.horizon >= 10, ""};
  const std::size_t effective = scenario.config.horizon == 0 ? scenario.horizon : scenario.config.horizon;
  if (effective < 10) {
    horizon.passed = false;
    horizon.detail = "classification needs a horizon of at least 10, got " + std::to_string(effective);
  }
  report.checks.push_back(horizon);
  return report;
}

}  // namespace riesz
