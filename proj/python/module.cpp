#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>

#include "lactc/analytic.hpp"
#include "lactc/report.hpp"
#include "lactc/simulator.hpp"

namespace py = pybind11;
using namespace lactc;

namespace {

py::dict fields_dict(const MetricsReport::Fields& f) {
  py::dict d;
  for_each_metric_field([&](const char* name, auto member) {
    if (const auto& v = f.*member) d[name] = *v;
  });
  return d;
}

py::dict report_dict(const MetricsReport& r) {
  py::dict d;
  d["metrics"] = fields_dict(r.value);
  if (r.ci_half_width) d["ci_half_width"] = fields_dict(*r.ci_half_width);
  d["warnings"] = r.warnings;
  return d;
}

NetworkConfig or_default(const std::optional<NetworkConfig>& c) {
  return c ? validate(*c) : NetworkConfig::defaults();
}

}  // namespace

PYBIND11_MODULE(lactc, m) {
  m.doc() = "Two-tier HetNet outage, rate and load under LA-CTC, RE, FC and Tr";

  py::register_exception<InvalidConfig>(m, "InvalidConfig", PyExc_ValueError);
  py::register_exception<io::ConfigSchemaError>(m, "ConfigSchemaError", PyExc_ValueError);
  py::register_exception<io::ConfigReadError>(m, "ConfigReadError", PyExc_OSError);

  py::class_<NetworkConfig>(m, "NetworkConfig")
      .def(py::init<>())
      .def_static("defaults", &NetworkConfig::defaults)
      .def_static("from_json", [](const std::string& text) { return io::parse_config(text); })
      .def_static("load", &io::load_config, py::arg("path"))
      .def("to_json", [](const NetworkConfig& c) { return io::config_to_json(c); })
      .def("with_beta_db", [](const NetworkConfig& c, double db) { return c.with_beta(db_to_linear(db)); })
      .def("with_tau_db", [](const NetworkConfig& c, double db) { return c.with_tau(db_to_linear(db)); })
      .def("with_noise_dbm", [](const NetworkConfig& c, std::optional<double> dbm) {
        return c.with_noise_watts(dbm ? dbm_to_watts(*dbm) : 0.0);
      })
      .def_property_readonly("beta", &NetworkConfig::beta)
      .def_property_readonly("tau", &NetworkConfig::tau)
      .def_property_readonly("noise_watts", &NetworkConfig::noise_watts)
      .def_property_readonly("user_intensity", &NetworkConfig::user_intensity)
      .def("__eq__", [](const NetworkConfig& a, const NetworkConfig& b) { return a == b; })
      .def("__repr__", [](const NetworkConfig& c) { return "NetworkConfig(" + io::config_to_json(c) + ")"; });

  m.def("f_interference", &analytic::f_interference, py::arg("y"), py::arg("alpha"),
        "F(y, alpha) = integral from y to infinity of u / (1 + u^alpha) du");

  m.def(
      "mode_probabilities",
      [](std::optional<NetworkConfig> config) {
        const auto q = analytic::mode_probabilities(or_default(config));
        py::dict d;
        d["q_macro"] = q.q_macro;
        d["q_pico"] = q.q_pico;
        d["q_comp"] = q.q_comp;
        return d;
      },
      py::arg("config") = py::none());

  m.def(
      "analyze",
      [](const std::string& scheme, std::optional<NetworkConfig> config, bool modes, bool outage,
         bool rate, bool load, bool min_rate) {
        const auto c = or_default(config);
        const auto s = parse_scheme(scheme);
        MetricsReport r;
        {
          py::gil_scoped_release release;
          r = analytic::analyze(s, c, {modes, outage, rate, load, min_rate});
        }
        return report_dict(r);
      },
      py::arg("scheme"), py::arg("config") = py::none(), py::kw_only(), py::arg("modes") = true,
      py::arg("outage") = true, py::arg("rate") = false, py::arg("load") = true,
      py::arg("min_rate") = false);

  m.def(
      "simulate",
      [](const std::string& scheme, std::optional<NetworkConfig> config, std::uint64_t iterations,
         std::uint64_t seed, unsigned workers, double window_half_width,
         const std::string& interference) {
        const auto c = or_default(config);
        sim::SimSettings settings;
        settings.iterations = iterations;
        settings.seed = seed;
        settings.workers = workers;
        settings.window_half_width = window_half_width;
        settings.interference = sim::parse_interference_model(interference);
        const auto s = parse_scheme(scheme);
        sim::SimulationResult result;
        {
          py::gil_scoped_release release;
          result = sim::simulate(s, c, settings);
        }
        auto d = report_dict(result.to_report());
        d["resamples"] = result.resamples;
        return d;
      },
      py::arg("scheme"), py::arg("config") = py::none(), py::kw_only(),
      py::arg("iterations") = 100000, py::arg("seed") = 1, py::arg("workers") = 1,
      py::arg("window_half_width") = 5000.0, py::arg("interference") = "independent");
}
