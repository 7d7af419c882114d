// Experiment runner: declarative JSON configs in, deterministic CSV reports
// out. Exit codes: 0 clean, 2 config error, 3 flagged rows.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>

#include "heatlab/runner.hpp"

namespace fs = std::filesystem;
using heatlab::ReportTable;

namespace {

int default_workers() {
  if (const char* env = std::getenv("HEATLAB_WORKERS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

int write_report(const ReportTable& table, const std::string& out_dir) {
  fs::create_directories(out_dir);
  const fs::path csv_path = fs::path(out_dir) / (table.kind + ".csv");
  {
    std::ofstream out(csv_path, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot write " << csv_path << "\n";
      return 2;
    }
    out << table.to_csv();
  }
  {
    std::ofstream timing(fs::path(out_dir) / (table.kind + ".timing.txt"));
    for (std::size_t i = 0; i < table.wall_ms.size(); ++i)
      timing << "row " << i << " " << table.wall_ms[i] << " ms\n";
  }
  std::cout << "wrote " << csv_path.string() << " (" << table.rows.size() << " rows)\n";
  return table.any_flagged() ? 3 : 0;
}

int run_kind(const std::string& kind, const std::string& config_path, const std::string& out_dir,
             std::uint64_t seed, int workers) {
  nlohmann::json config;
  {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "error: cannot open config '" << config_path << "'\n";
      return 2;
    }
    try {
      in >> config;
    } catch (const std::exception& e) {
      std::cerr << "error: config is not valid JSON: " << e.what() << "\n";
      return 2;
    }
  }
  try {
    if (config.contains("kind") && config.at("kind").get<std::string>() != kind) {
      std::cerr << "error: config kind '" << config.at("kind").get<std::string>()
                << "' does not match subcommand '" << kind << "'\n";
      return 2;
    }
    const ReportTable table = heatlab::run_config_json(config, seed, workers);
    return write_report(table, out_dir);
  } catch (const heatlab::Error& e) {
    if (e.code() == heatlab::Errc::ConfigError) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"heatlab: thick sets, spectral and observability inequalities on a torus"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".", report_path, plot_kind;
  std::uint64_t seed = 0;
  int workers = default_workers();

  const std::vector<std::string> kinds = {"thickness",      "spectral-sweep", "obs-estimate",
                                          "interpolation",  "counterexample", "constants-chain",
                                          "audit"};
  for (const auto& kind : kinds) {
    CLI::App* sub = app.add_subcommand(kind, "run a " + kind + " experiment");
    sub->add_option("--config", config_path, "experiment config (JSON)")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "master seed");
    sub->add_option("--workers", workers, "worker count (default: HEATLAB_WORKERS or cores)");
    sub->callback([&, kind]() {
      std::exit(run_kind(kind, config_path, out_dir, seed, workers));
    });
  }

  CLI::App* plot = app.add_subcommand("plot-data", "extract plot-ready columns from a report");
  plot->add_option("--report", report_path, "report CSV produced by a run")->required();
  plot->add_option("--kind", plot_kind, "experiment kind of the report")->required();
  plot->add_option("--out", out_dir, "output directory");
  plot->callback([&]() {
    try {
      const ReportTable table = heatlab::read_csv_table(report_path, plot_kind);
      const std::string data = heatlab::plot_data_from_table(table);
      fs::create_directories(out_dir);
      const fs::path path = fs::path(out_dir) / ("plot_" + plot_kind + ".dat");
      std::ofstream out(path, std::ios::binary);
      out << data;
      std::cout << "wrote " << path.string() << "\n";
      std::exit(0);
    } catch (const heatlab::Error& e) {
      std::cerr << "error: " << e.what() << "\n";
      std::exit(2);
    }
  });

  CLI11_PARSE(app, argc, argv);
  return 0;
}
