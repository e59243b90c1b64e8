#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "riesz/cli.hpp"
#include "riesz/convergence.hpp"
#include "riesz/errors.hpp"
#include "riesz/orlicz.hpp"
#include "riesz/scenario_io.hpp"
#include "riesz/scenarios.hpp"
#include "riesz/summability.hpp"
#include "riesz/uncertainty.hpp"

namespace py = pybind11;
using namespace riesz;

namespace {

using Space = std::shared_ptr<UncertaintySpace>;
using Rows = std::vector<std::vector<double>>;

Space share(UncertaintySpace s) { return std::make_shared<UncertaintySpace>(std::move(s)); }

UncertainSequence make_sequence(const Space& space, const Rows& terms, const std::vector<double>& limit) {
  std::vector<UncertainVariable> vars;
  vars.reserve(terms.size());
  for (const auto& row : terms) {
    if (row.size() != space->size()) throw InputError("every term needs one value per atom");
    vars.emplace_back(row);
  }
  if (limit.size() != space->size()) throw InputError("limit needs one value per atom");
  if (vars.empty()) throw InputError("sequence needs at least one term");
  return UncertainSequence::from_terms(space, vars, UncertainVariable(limit));
}

Rows to_rows(const UncertainSequence& seq) {
  Rows out(seq.horizon());
  for (std::size_t n = 1; n <= seq.horizon(); ++n) {
    const auto row = seq.row(n);
    out[n - 1].assign(row.begin(), row.end());
  }
  return out;
}

py::list checks(const ValidationReport& report) {
  py::list out;
  for (const auto& c : report.checks) out.append(py::make_tuple(c.name, c.passed, c.detail));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Riesz-type summability diagnostics for sequences of uncertain variables";
  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);

  py::class_<UncertaintySpace, Space>(m, "UncertaintySpace")
      .def_static("additive", [](std::vector<std::string> atoms, std::vector<double> w) {
        return share(UncertaintySpace::additive(std::move(atoms), w));
      })
      .def_static("possibility", [](std::vector<std::string> atoms, std::vector<double> w) {
        return share(UncertaintySpace::possibility(std::move(atoms), w));
      })
      .def_static("from_table", [](std::vector<std::string> atoms, std::vector<double> table) {
        return share(UncertaintySpace::from_table(std::move(atoms), std::move(table)));
      })
      .def_property_readonly("atoms", &UncertaintySpace::atoms)
      .def("measure", [](const UncertaintySpace& s, const std::vector<std::string>& names) {
        return s.measure(s.event_of(names));
      })
      .def("validate", [](const UncertaintySpace& s) { return checks(validate_space(s)); })
      .def("expected_value", [](const UncertaintySpace& s, const std::vector<double>& values) {
        if (values.size() != s.size()) throw InputError("one value per atom expected");
        return expected_value(s, values);
      })
      .def("distribution", [](const UncertaintySpace& s, const std::vector<double>& values, double x) {
        if (values.size() != s.size()) throw InputError("one value per atom expected");
        return distribution_at(s, UncertainVariable(values), x);
      });

  py::class_<WeightSequence>(m, "WeightSequence")
      .def_static("constant", &WeightSequence::constant, py::arg("c") = 1.0)
      .def_static("harmonic", &WeightSequence::harmonic)
      .def_static("geometric", &WeightSequence::geometric, py::arg("ratio"))
      .def_static("power", &WeightSequence::power, py::arg("exponent"))
      .def_static("explicit", &WeightSequence::explicit_values, py::arg("values"))
      .def_property_readonly("name", &WeightSequence::name)
      .def("weight", &WeightSequence::weight)
      .def("partial_sum", &WeightSequence::partial_sum)
      .def("row", [](const WeightSequence& w, std::size_t n) { return riesz_row(w, n); });

  py::class_<OrliczSpec>(m, "OrliczSpec")
      .def_static("identity", &OrliczSpec::identity, py::arg("p") = 1.0)
      .def_static("power", &OrliczSpec::power, py::arg("exponent"), py::arg("p") = 1.0)
      .def_static("expm1", &OrliczSpec::expm1, py::arg("p") = 1.0)
      .def_property_readonly("name", &OrliczSpec::name)
      .def("__call__", &OrliczSpec::operator())
      .def("validate", [](const OrliczSpec& s) { return checks(validate_orlicz(s)); });

  m.def(
      "riesz_transform",
      [](const Space& space, const Rows& terms, const WeightSequence& w) {
        return to_rows(riesz_transform(make_sequence(space, terms, std::vector<double>(space->size())), w));
      },
      py::arg("space"), py::arg("terms"), py::arg("weights"), "Riesz means nu_1..nu_N, one row per index.");
  m.def(
      "inverse_riesz_transform",
      [](const Space& space, const Rows& means, const WeightSequence& w) {
        return to_rows(inverse_riesz_transform(make_sequence(space, means, std::vector<double>(space->size())), w));
      },
      py::arg("space"), py::arg("means"), py::arg("weights"));

  m.def(
      "markov_check",
      [](const Space& space, const std::vector<double>& values, const OrliczSpec& phi, double t) {
        const auto c = markov_check(*space, UncertainVariable(values), phi, t);
        return py::make_tuple(c.lhs, c.rhs);
      },
      py::arg("space"), py::arg("values"), py::arg("phi"), py::arg("t"));

  m.def(
      "tauberian_profile",
      [](const WeightSequence& w, std::size_t horizon) {
        const auto p = tauberian_condition_profile(w, horizon);
        return py::make_tuple(p.tail_max, p.holds);
      },
      py::arg("weights"), py::arg("horizon"));
  m.def(
      "is_regular",
      [](const WeightSequence& w, std::size_t horizon, double tol) { return check_regularity(w, horizon, tol).regular; },
      py::arg("weights"), py::arg("horizon"), py::arg("tolerance") = 1e-6);

  m.def(
      "classify",
      [](const Space& space, const Rows& terms, const std::vector<double>& limit, const WeightSequence& w,
         double tolerance) {
        DiagnosticConfig config;
        config.tolerance = tolerance;
        const auto report = classify(make_sequence(space, terms, limit), w, OrliczSpec::identity(), config);
        std::map<std::string, std::string> out;
        for (const auto& [label, v] : report.verdicts) out[label] = std::string(to_string(v));
        return out;
      },
      py::arg("space"), py::arg("terms"), py::arg("limit"), py::arg("weights"), py::arg("tolerance") = 1e-6,
      "Aggregate verdict per convergence class.");
  m.def(
      "classify_scenario",
      [](const std::filesystem::path& path) { return to_csv(classify(load_scenario(path))); }, py::arg("path"),
      "Classification report of a scenario file as CSV.");
  m.def(
      "run_cli",
      [](std::vector<std::string> args) {
        args.insert(args.begin(), "riesz-uncertain");
        std::ostringstream out, err;
        const int code = run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command-line tool in process; returns (exit code, stdout, stderr).");
}
