#include <doctest.h>

#include "heatlab/runner.hpp"

using namespace heatlab;
using nlohmann::json;

namespace {

json thickness_config() {
  return json{{"schema_version", 1},
              {"kind", "thickness"},
              {"grid", {{"dim", 1}, {"side_length", 20.0}, {"samples_per_dim", 1000}}},
              {"set", {{"type", "stripes"}, {"width", 0.5}, {"period", 1.0}}},
              {"scales", {0.5, 1.0, 2.0}}};
}

}  // namespace

TEST_CASE("config validation catches typos and bad domains") {
  SUBCASE("unknown key") {
    json cfg = thickness_config();
    cfg["scalez"] = json::array({1.0});
    CHECK_THROWS_AS(run_config_json(cfg, 0, 1), Error);
    try {
      run_config_json(cfg, 0, 1);
    } catch (const Error& e) {
      CHECK(e.code() == Errc::ConfigError);
      CHECK(std::string(e.what()).find("scalez") != std::string::npos);
    }
  }
  SUBCASE("unsupported schema version") {
    json cfg = thickness_config();
    cfg["schema_version"] = 2;
    CHECK_THROWS_AS(run_config_json(cfg, 0, 1), Error);
  }
  SUBCASE("unknown kind and unknown set type") {
    json cfg = thickness_config();
    cfg["kind"] = "thicknesss";
    CHECK_THROWS_AS(run_config_json(cfg, 0, 1), Error);
    cfg = thickness_config();
    cfg["set"] = {{"type", "blob"}};
    CHECK_THROWS_AS(run_config_json(cfg, 0, 1), Error);
  }
  SUBCASE("invalid numeric domain names the field") {
    json cfg = thickness_config();
    cfg["grid"]["samples_per_dim"] = 999;  // odd
    try {
      run_config_json(cfg, 0, 1);
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.code() == Errc::ConfigError);
    }
  }
  SUBCASE("unknown audit descriptor") {
    json cfg{{"schema_version", 1}, {"kind", "audit"}, {"descriptors", {"NOT_A_THING"}}};
    CHECK_THROWS_AS(run_config_json(cfg, 0, 1), Error);
  }
}

TEST_CASE("thickness report schema and values") {
  const ReportTable table = run_config_json(thickness_config(), 0, 1);
  CHECK(table.columns ==
        std::vector<std::string>{"L", "gamma_min", "gamma_uncertainty", "argmin_offset", "flags"});
  REQUIRE(table.rows.size() == 3);
  // L = 1 row: stripes gamma 1/2
  const double gamma = std::strtod(table.rows[1][1].c_str(), nullptr);
  CHECK(gamma == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(table.rows[1].back() == "OK");
  CHECK_FALSE(table.any_flagged());
}

TEST_CASE("determinism: byte-identical reports across runs and worker counts") {
  json sweep{{"schema_version", 1},
             {"kind", "spectral-sweep"},
             {"grid", {{"dim", 1}, {"side_length", 8.0}, {"samples_per_dim", 64}}},
             {"set", {{"type", "stripes"}, {"width", 0.5}, {"period", 1.0}}},
             {"band_limits", {2.0, 3.0, 4.0, 5.0}}};
  const std::string serial = run_config_json(sweep, 7, 1).to_csv();
  const std::string serial_again = run_config_json(sweep, 7, 1).to_csv();
  const std::string parallel = run_config_json(sweep, 7, 4).to_csv();
  CHECK(serial == serial_again);
  CHECK(serial == parallel);

  json interp{{"schema_version", 1},
              {"kind", "interpolation"},
              {"grid", {{"dim", 1}, {"side_length", 20.0}, {"samples_per_dim", 256}}},
              {"set", {{"type", "ball"}, {"center", {0.0}}, {"radius", 1.0}}},
              {"horizon", 1.0},
              {"theta", 0.5},
              {"band_limit", 4.0},
              {"probes", 6}};
  const std::string a = run_config_json(interp, 11, 1).to_csv();
  const std::string b = run_config_json(interp, 11, 3).to_csv();
  CHECK(a == b);
  const std::string c = run_config_json(interp, 12, 1).to_csv();
  CHECK(a != c);  // different master seed, different probes
}

TEST_CASE("spectral sweep report schema") {
  json sweep{{"schema_version", 1},
             {"kind", "spectral-sweep"},
             {"grid", {{"dim", 1}, {"side_length", 8.0}, {"samples_per_dim", 64}}},
             {"set", {{"type", "stripes"}, {"width", 0.5}, {"period", 1.0}}},
             {"band_limits", {3.0, 2.0}}};
  const ReportTable table = run_config_json(sweep, 0, 1);
  CHECK(table.columns == std::vector<std::string>{"N", "lambda_min", "C_est", "iterations",
                                                  "residual", "flags"});
  REQUIRE(table.rows.size() == 2);
  // rows sorted by N regardless of config order
  CHECK(std::strtod(table.rows[0][0].c_str(), nullptr) == 2.0);
  CHECK(std::strtod(table.rows[1][0].c_str(), nullptr) == 3.0);
}

TEST_CASE("counterexample and constants-chain kinds run end to end") {
  json ce{{"schema_version", 1},
          {"kind", "counterexample"},
          {"dim", 1},
          {"horizon", 1.0},
          {"r", 1.0},
          {"r_prime", 2.0},
          {"k_values", {5.0}},
          {"samples_per_dim", 1024},
          {"quad_nodes", 8}};
  const ReportTable ce_table = run_config_json(ce, 0, 1);
  REQUIRE(ce_table.rows.size() == 1);
  const double ratio = std::strtod(ce_table.rows[0][3].c_str(), nullptr);
  const double bound = std::strtod(ce_table.rows[0][4].c_str(), nullptr);
  CHECK(ratio <= bound);
  CHECK(ce_table.rows[0].back() == "OK");

  json chain{{"schema_version", 1},
             {"kind", "constants-chain"},
             {"dim", 1},
             {"gammas", {1.0, 0.5}},
             {"scales", {1.0}},
             {"thetas", {0.5}},
             {"horizons", {1.0}}};
  const ReportTable chain_table = run_config_json(chain, 0, 1);
  REQUIRE(chain_table.rows.size() == 2);
  CHECK(chain_table.any_flagged());  // e^{4800} rows carry OVERFLOW by design
}

TEST_CASE("audit kind: informational flag does not fail the run") {
  json audit{{"schema_version", 1}, {"kind", "audit"}, {"descriptors", {"SERIES_SUM"}}};
  const ReportTable table = run_config_json(audit, 0, 1);
  CHECK(table.rows.size() == 27);
  for (const auto& row : table.rows) CHECK(row.back() == flag::kInterpretedXAsB);
  CHECK_FALSE(table.any_flagged());
}

TEST_CASE("plot data extraction") {
  json sweep{{"schema_version", 1},
             {"kind", "spectral-sweep"},
             {"grid", {{"dim", 1}, {"side_length", 8.0}, {"samples_per_dim", 64}}},
             {"set", {{"type", "stripes"}, {"width", 0.5}, {"period", 1.0}}},
             {"band_limits", {2.0, 3.0}}};
  const ReportTable table = run_config_json(sweep, 0, 1);
  const std::string data = plot_data_from_table(table);
  // two lines of (N, ln C_est)
  CHECK(std::count(data.begin(), data.end(), '\n') == 2);
  const double first_ln_c = std::strtod(data.c_str() + data.find(' '), nullptr);
  const double c_est = std::strtod(table.rows[0][2].c_str(), nullptr);
  CHECK(first_ln_c == doctest::Approx(std::log(c_est)).epsilon(1e-12));

  ReportTable unknown;
  unknown.kind = "interpolation";
  unknown.columns = {"probe"};
  unknown.rows = {{"0"}};
  CHECK_THROWS_AS(plot_data_from_table(unknown), Error);
}
