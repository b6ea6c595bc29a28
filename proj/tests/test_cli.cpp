#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"
#include "lactc/report.hpp"

using namespace lactc;
using Json = nlohmann::json;

namespace {

const std::string kDefaultConfig = std::string(LACTC_TEST_DATA_DIR) + "/default.json";

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Run r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string f; std::getline(in, f, ',');) out.push_back(f);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string temp_file(const std::string& name, const std::string& content) {
  const std::string path = "lactc_test_" + name;
  std::ofstream(path) << content;
  return path;
}

}  // namespace

// ---------------------------------------------------------------------------
// Config parsing

TEST_CASE("config file round trip") {
  const auto c = io::load_config(kDefaultConfig);
  const auto d = NetworkConfig::defaults();
  CHECK(c.macro().power_dbm() == d.macro().power_dbm());
  CHECK(c.pico().intensity() == doctest::Approx(d.pico().intensity()).epsilon(1e-15));
  CHECK(c.beta() == doctest::Approx(d.beta()).epsilon(1e-15));
  CHECK(c.noise_watts() == doctest::Approx(d.noise_watts()).epsilon(1e-14));
  CHECK(io::parse_config(io::config_to_json(c)) == c);
}

TEST_CASE("config schema errors") {
  CHECK_THROWS_AS(io::parse_config("{\"macro.power\": 3}"), io::ConfigSchemaError);
  CHECK_THROWS_AS(io::parse_config("{\"beta_db\": 3, \"beta_linear\": 2}"), io::ConfigSchemaError);
  CHECK_THROWS_AS(io::parse_config("{\"tau_db\": \"zero\"}"), io::ConfigSchemaError);
  CHECK_THROWS_AS(io::parse_config("[1, 2]"), io::ConfigSchemaError);
  CHECK_THROWS_AS(io::parse_config("{oops"), io::ConfigReadError);
  CHECK_THROWS_AS(io::parse_config("{\"macro.alpha\": 2}"), InvalidConfig);
  CHECK_THROWS_AS(io::load_config("/nonexistent/config.json"), io::ConfigReadError);
  CHECK(io::parse_config("{\"noise_dbm\": null}").noise_watts() == 0.0);
  CHECK(io::parse_config("{}") == NetworkConfig::defaults());
  CHECK(io::parse_config("{\"beta_linear\": 3}").beta() == 3.0);
}

TEST_CASE("CSV numbers ignore the locale and keep 6 digits") {
  CHECK(io::format_csv_number(0.43996075251752853) == "0.439961");
  CHECK(io::format_csv_number(1234567.0) == "1.23457e+06");
  CHECK(io::format_csv_number(12.0) == "12");
  CHECK(io::format_csv_number(-0.5) == "-0.5");
}

TEST_CASE("grid parsing and sweep coordinates") {
  CHECK(cli::parse_grid("1,2.5,4") == std::vector<double>{1.0, 2.5, 4.0});
  CHECK(cli::parse_grid("0:12:4") == std::vector<double>{0.0, 4.0, 8.0, 12.0});
  CHECK(cli::parse_grid("3:3:1") == std::vector<double>{3.0});
  CHECK_THROWS(cli::parse_grid(""));
  CHECK_THROWS(cli::parse_grid("0:1:0"));
  CHECK_THROWS(cli::parse_grid("a,b"));

  const auto d = NetworkConfig::defaults();
  using V = cli::SweepVariable;
  CHECK(cli::apply_sweep(d, V::BetaDb, 10.0).beta() == doctest::Approx(10.0));
  CHECK(cli::apply_sweep(d, V::TauDb, -10.0).tau() == doctest::Approx(0.1));
  CHECK(cli::apply_sweep(d, V::PicoIntensityRatio, 3.0).pico().intensity() ==
        doctest::Approx(3.0 * d.macro().intensity()));
  CHECK(cli::apply_sweep(d, V::Alpha2, 3.5).pico().pathloss_exponent() == 3.5);
  CHECK_THROWS_AS(cli::apply_sweep(d, V::Alpha1, 2.0), InvalidConfig);
  CHECK(cli::parse_sweep_variable("pico_intensity_ratio") == V::PicoIntensityRatio);
  CHECK_THROWS(cli::parse_sweep_variable("gamma"));
}

// ---------------------------------------------------------------------------
// analyze

TEST_CASE("analyze Tr at the default deployment") {
  auto r = run({"analyze", "-c", kDefaultConfig, "-s", "tr", "--metrics", "outage"});
  REQUIRE(r.code == cli::kOk);
  const auto j = Json::parse(r.out);
  for (const char* key : {"scheme", "engine", "config", "metrics", "warnings"}) CHECK(j.contains(key));
  CHECK(j["scheme"] == "tr");
  CHECK(j["engine"] == "analytic");
  const double o = j["metrics"]["overall_outage"].get<double>();
  // Slightly above the noiseless 0.43990 because of the -104 dBm floor.
  CHECK(o == doctest::Approx(0.43996075).epsilon(2e-7));
  CHECK(o > 1.0 - 1.0 / (1.0 + M_PI / 4.0));
  CHECK_FALSE(j.contains("ci_half_width"));
}

TEST_CASE("every run logs the resolved config") {
  auto r = run({"analyze", "--tau-db", "3", "--metrics", "modes"});
  REQUIRE(r.code == cli::kOk);
  const auto pos = r.err.find("lactc: config ");
  REQUIRE(pos != std::string::npos);
  const auto line = r.err.substr(pos + 14, r.err.find('\n', pos) - pos - 14);
  const auto logged = io::parse_config(line);
  CHECK(logged.tau() == doctest::Approx(db_to_linear(3.0)).epsilon(1e-14));
  CHECK(logged.macro() == NetworkConfig::defaults().macro());
}

TEST_CASE("zero dB LA-CTC reports the Tr metrics") {
  auto la = run({"analyze", "-c", kDefaultConfig, "-s", "lactc", "--beta-db", "0"});
  auto tr = run({"analyze", "-c", kDefaultConfig, "-s", "tr", "--beta-db", "0"});
  REQUIRE(la.code == cli::kOk);
  REQUIRE(tr.code == cli::kOk);
  CHECK(Json::parse(la.out)["metrics"] == Json::parse(tr.out)["metrics"]);
}

TEST_CASE("exit codes") {
  CHECK(run({"analyze", "-c", "/nonexistent/config.json"}).code == cli::kIoError);
  CHECK(run({"analyze", "-c", temp_file("broken.json", "{not json")}).code == cli::kIoError);
  CHECK(run({"analyze", "-c", temp_file("alpha.json", "{\"macro.alpha\": 2}")}).code ==
        cli::kValidationError);
  CHECK(run({"analyze", "-c", temp_file("unknown.json", "{\"gamma\": 1}")}).code ==
        cli::kValidationError);
  CHECK(run({"analyze", "--beta-db", "-3"}).code == cli::kValidationError);
  CHECK(run({"analyze", "-s", "xyz"}).code == cli::kValidationError);
  CHECK(run({"analyze", "--no-such-flag"}).code == cli::kValidationError);
  CHECK(run({"frobnicate"}).code == cli::kValidationError);
  CHECK(run({"simulate", "--iterations", "0"}).code == cli::kValidationError);
  CHECK(run({"analyze", "-o", "/nonexistent/dir/out.json", "--metrics", "modes"}).code ==
        cli::kIoError);
  CHECK(run({"--help"}).code == cli::kOk);
}

TEST_CASE("output file") {
  const std::string path = "lactc_test_out.json";
  std::remove(path.c_str());
  auto r = run({"analyze", "--metrics", "modes", "-o", path});
  REQUIRE(r.code == cli::kOk);
  CHECK(r.out.empty());
  std::ifstream in(path);
  const auto j = Json::parse(in);
  CHECK(j["metrics"]["q_comp"].get<double>() == doctest::Approx(0.1142337091).epsilon(1e-8));
}

// ---------------------------------------------------------------------------
// simulate

TEST_CASE("simulate is reproducible across runs and worker counts") {
  const std::vector<std::string> base = {"simulate", "-c", kDefaultConfig, "--iterations", "20000",
                                         "--seed", "42"};
  auto a = run(base);
  auto b = run(base);
  auto with = [&](const char* w) {
    auto args = base;
    args.push_back("--workers");
    args.push_back(w);
    return run(args);
  };
  auto w4 = with("4");
  auto w8 = with("8");
  REQUIRE(a.code == cli::kOk);
  CHECK(a.out == b.out);
  CHECK(a.out == w4.out);
  CHECK(a.out == w8.out);
  const auto j = Json::parse(a.out);
  CHECK(j["engine"] == "simulation");
  CHECK(j["simulation"]["iterations"] == 20000);
  CHECK(j["simulation"]["seed"] == 42);
  CHECK(j.contains("ci_half_width"));
  CHECK_FALSE(j["simulation"].contains("workers"));
}

TEST_CASE("simulate window and interference flags") {
  auto r = run({"simulate", "--iterations", "2000", "--window-km", "4", "--interference-model",
                "coherent-pairs"});
  REQUIRE(r.code == cli::kOk);
  const auto j = Json::parse(r.out);
  CHECK(j["simulation"]["window_half_width_m"].get<double>() == 2000.0);
  CHECK(j["simulation"]["interference_model"] == "coherent-pairs");
  CHECK(run({"simulate", "--interference-model", "bogus"}).code == cli::kValidationError);
}

// ---------------------------------------------------------------------------
// sweep

TEST_CASE("sweep rows are grid-major, then scheme, then metric") {
  auto r = run({"sweep", "-c", kDefaultConfig, "--variable", "beta_db", "--values", "0,6",
                "--schemes", "lactc,fc", "--metrics", "overall_outage,macro_load"});
  REQUIRE(r.code == cli::kOk);
  const auto rows = lines(r.out);
  REQUIRE(rows.size() == 9);
  CHECK(rows[0] == io::kSweepHeader);
  const std::vector<std::vector<std::string>> keys = {
      {"0", "lactc", "overall_outage"}, {"0", "lactc", "macro_load"},
      {"0", "fc", "overall_outage"},    {"0", "fc", "macro_load"},
      {"6", "lactc", "overall_outage"}, {"6", "lactc", "macro_load"},
      {"6", "fc", "overall_outage"},    {"6", "fc", "macro_load"}};
  for (std::size_t i = 0; i < keys.size(); ++i) {
    const auto f = fields(rows[i + 1]);
    REQUIRE(f.size() == 5);
    CHECK(f[0] == keys[i][0]);
    CHECK(f[1] == keys[i][1]);
    CHECK(f[2] == keys[i][2]);
    CHECK(f[4].empty());
  }
}

TEST_CASE("empty metric list gives a header-only CSV") {
  auto r = run({"sweep", "--variable", "tau_db", "--values", "0,5", "--metrics", ""});
  REQUIRE(r.code == cli::kOk);
  CHECK(r.out == std::string(io::kSweepHeader) + "\n");
}

TEST_CASE("load sweep trends") {
  auto r = run({"sweep", "--variable", "beta_db", "--values", "0:12:7", "--schemes", "lactc,re,fc",
                "--metrics", "macro_load,pico_load"});
  REQUIRE(r.code == cli::kOk);
  std::vector<double> la_macro, re_macro, fc_macro, fc_pico;
  for (const auto& row : lines(r.out)) {
    const auto f = fields(row);
    if (f[0] == "variable") continue;
    const double v = std::stod(f[3]);
    if (f[1] == "lactc" && f[2] == "macro_load") la_macro.push_back(v);
    if (f[1] == "re" && f[2] == "macro_load") re_macro.push_back(v);
    if (f[1] == "fc" && f[2] == "macro_load") fc_macro.push_back(v);
    if (f[1] == "fc" && f[2] == "pico_load") fc_pico.push_back(v);
  }
  REQUIRE(la_macro.size() == 7);
  for (std::size_t i = 1; i < 7; ++i) {
    CHECK(re_macro[i] < re_macro[i - 1]);
    CHECK(la_macro[i] == doctest::Approx(la_macro[0]).epsilon(1e-5));
    CHECK(fc_macro[i] == fc_macro[0]);
    CHECK(fc_pico[i] == fc_pico[0]);
  }
  CHECK(fc_macro[0] == doctest::Approx(10.0));
  CHECK(fc_pico[0] == doctest::Approx(2.0));
}

TEST_CASE("minimum-rate sweep trends") {
  auto r = run({"sweep", "--variable", "beta_db", "--values", "0:20:11", "--schemes", "lactc,re",
                "--metrics", "min_user_rate"});
  REQUIRE(r.code == cli::kOk);
  std::vector<double> la, re;
  for (const auto& row : lines(r.out)) {
    const auto f = fields(row);
    if (f[0] == "variable") continue;
    (f[1] == "lactc" ? la : re).push_back(std::stod(f[3]));
  }
  REQUIRE(re.size() == 11);
  const auto re_peak = std::max_element(re.begin(), re.end());
  CHECK(re_peak != re.begin());
  CHECK(re_peak != re.end() - 1);
  const auto la_peak = std::max_element(la.begin(), la.end());
  for (auto it = la_peak + 1; it != la.end(); ++it) CHECK(*it >= *(it - 1) - 1e-3);
}

TEST_CASE("simulation sweep fills the CI column") {
  auto r = run({"sweep", "--engine", "simulation", "--iterations", "3000", "--variable", "tau_db",
                "--values", "0", "--schemes", "tr", "--metrics", "overall_outage"});
  REQUIRE(r.code == cli::kOk);
  const auto rows = lines(r.out);
  REQUIRE(rows.size() == 2);
  CHECK_FALSE(fields(rows[1])[4].empty());
}

// ---------------------------------------------------------------------------
// validate

TEST_CASE("validate a single point") {
  auto r = run({"validate", "-c", kDefaultConfig, "--variable", "tau_db", "--values", "0",
                "--schemes", "tr", "--iterations", "20000"});
  CHECK(r.code == cli::kOk);
  const auto rows = lines(r.out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == "variable,scheme,metric,analytic,simulated,ci_half_width,deviation_sigma,verdict");
  const auto f = fields(rows[1]);
  CHECK(f[1] == "tr");
  CHECK(f[2] == "overall_outage");
  CHECK(f[7] == "pass");
}

TEST_CASE("validate fails loudly on a disagreement") {
  // A 1e-6 sigma band is far narrower than the Monte Carlo noise.
  auto r = run({"validate", "--variable", "tau_db", "--values", "0", "--schemes", "lactc",
                "--iterations", "5000", "--tolerance-sigma", "1e-6"});
  CHECK(r.code == cli::kCrossCheckFailed);
  CHECK(r.out.find(",fail") != std::string::npos);
  CHECK(run({"validate", "--variable", "tau_db", "--values", "0", "--tolerance-sigma", "0"}).code ==
        cli::kValidationError);
}
