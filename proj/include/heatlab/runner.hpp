#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "heatlab/audit_suite.hpp"
#include "heatlab/common.hpp"
#include "heatlab/constants.hpp"
#include "heatlab/counterexample.hpp"
#include "heatlab/observability.hpp"
#include "heatlab/sets.hpp"
#include "heatlab/spectral.hpp"

namespace heatlab {

inline constexpr int kSchemaVersion = 1;

/// One deterministic report: fixed columns, rows sorted by parameter tuple,
/// numbers rendered with 17 significant digits. Wall times go to a sidecar,
/// never into the CSV (the CSV bytes are the determinism contract).
struct ReportTable {
  std::string kind;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<double> wall_ms;  ///< per row; sidecar only

  std::string to_csv() const {
    std::string out;
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c) out += ',';
      out += columns[c];
    }
    out += '\n';
    for (const auto& row : rows) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (c) out += ',';
        out += row[c];
      }
      out += '\n';
    }
    return out;
  }

  bool any_flagged() const {
    // flags column is always last by construction; the SERIES_SUM
    // interpretation note is informational and does not signal a numerical
    // failure, so it does not trip the nonzero exit code
    for (const auto& row : rows) {
      if (row.empty() || row.back() == flag::kOk) continue;
      if (row.back() == flag::kInterpretedXAsB) continue;
      return true;
    }
    return false;
  }
};

namespace cfg {

using json = nlohmann::json;

[[noreturn]] inline void bad(const std::string& what) { fail(Errc::ConfigError, what); }

inline void expect_keys(const json& obj, const std::set<std::string>& allowed,
                        const std::set<std::string>& required, const std::string& context) {
  if (!obj.is_object()) bad(context + " must be an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) bad("unknown key '" + it.key() + "' in " + context);
  }
  for (const auto& k : required) {
    if (!obj.contains(k)) bad("missing key '" + k + "' in " + context);
  }
}

inline double number(const json& obj, const std::string& key) {
  if (!obj.at(key).is_number()) bad("'" + key + "' must be a number");
  return obj.at(key).get<double>();
}

inline int integer(const json& obj, const std::string& key) {
  if (!obj.at(key).is_number_integer()) bad("'" + key + "' must be an integer");
  return obj.at(key).get<int>();
}

inline std::vector<double> number_list(const json& obj, const std::string& key) {
  if (!obj.at(key).is_array()) bad("'" + key + "' must be an array");
  std::vector<double> out;
  for (const auto& v : obj.at(key)) {
    if (!v.is_number()) bad("'" + key + "' entries must be numbers");
    out.push_back(v.get<double>());
  }
  if (out.empty()) bad("'" + key + "' must not be empty");
  return out;
}

inline TorusGrid parse_grid(const json& obj) {
  expect_keys(obj, {"dim", "side_length", "samples_per_dim"},
              {"dim", "side_length", "samples_per_dim"}, "grid");
  try {
    return TorusGrid(integer(obj, "dim"), number(obj, "side_length"),
                     integer(obj, "samples_per_dim"));
  } catch (const Error& e) {
    bad(std::string("invalid grid: ") + e.what());
  }
}

inline std::vector<double> point_list(const json& arr, const std::string& context) {
  if (!arr.is_array()) bad(context + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& v : arr) {
    if (!v.is_number()) bad(context + " entries must be numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

/// Canonical structured-text serialization of SetSpec (the declarative E).
inline SetSpec parse_set(const json& obj) {
  if (!obj.is_object() || !obj.contains("type")) bad("set spec needs a 'type'");
  const std::string type = obj.at("type").get<std::string>();
  try {
    if (type == "full_space") {
      expect_keys(obj, {"type"}, {"type"}, "full_space set");
      return SetSpec::full_space();
    }
    if (type == "ball") {
      expect_keys(obj, {"type", "center", "radius"}, {"type", "center", "radius"}, "ball set");
      return SetSpec::ball(point_list(obj.at("center"), "ball center"), number(obj, "radius"));
    }
    if (type == "box") {
      expect_keys(obj, {"type", "corner", "sides"}, {"type", "corner", "sides"}, "box set");
      return SetSpec::box(point_list(obj.at("corner"), "box corner"),
                          point_list(obj.at("sides"), "box sides"));
    }
    if (type == "stripes") {
      expect_keys(obj, {"type", "axis", "width", "period", "phase"},
                  {"type", "width", "period"}, "stripes set");
      const int axis = obj.contains("axis") ? integer(obj, "axis") : 0;
      const double phase = obj.contains("phase") ? number(obj, "phase") : 0.0;
      return SetSpec::stripes(axis, number(obj, "width"), number(obj, "period"), phase);
    }
    if (type == "pattern") {
      expect_keys(obj, {"type", "cell", "period"}, {"type", "cell", "period"}, "pattern set");
      return SetSpec::pattern(parse_set(obj.at("cell")), number(obj, "period"));
    }
    if (type == "union" || type == "intersection") {
      expect_keys(obj, {"type", "parts"}, {"type", "parts"}, type + " set");
      std::vector<SetSpec> parts;
      for (const auto& part : obj.at("parts")) parts.push_back(parse_set(part));
      return type == "union" ? SetSpec::set_union(std::move(parts))
                             : SetSpec::intersection(std::move(parts));
    }
    if (type == "complement") {
      expect_keys(obj, {"type", "inner"}, {"type", "inner"}, "complement set");
      return SetSpec::complement(parse_set(obj.at("inner")));
    }
  } catch (const Error& e) {
    if (e.code() == Errc::ConfigError) throw;
    bad(std::string("invalid set spec: ") + e.what());
  }
  bad("unknown set type '" + type + "'");
}

inline TimeQuadrature parse_quad(const json& obj, double horizon) {
  expect_keys(obj, {"scheme", "nodes"}, {"scheme", "nodes"}, "quad");
  const std::string scheme = obj.at("scheme").get<std::string>();
  QuadScheme s;
  if (scheme == "trapezoid")
    s = QuadScheme::Trapezoid;
  else if (scheme == "log-refined")
    s = QuadScheme::LogRefined;
  else
    bad("unknown quadrature scheme '" + scheme + "'");
  try {
    return time_quadrature(horizon, s, integer(obj, "nodes"));
  } catch (const Error& e) {
    bad(std::string("invalid quadrature: ") + e.what());
  }
}

}  // namespace cfg

namespace detail {

template <class Fn>
void parallel_for(std::size_t count, int workers, Fn&& fn) {
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto body = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const int spawn = std::min<int>(workers, static_cast<int>(count));
  pool.reserve(static_cast<std::size_t>(spawn));
  for (int w = 0; w < spawn; ++w) pool.emplace_back(body);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

inline std::string join_coords(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ':';
    out += sci17(v[i]);
  }
  return out;
}

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace detail

// --- experiment kinds --------------------------------------------------------

inline ReportTable run_thickness(const cfg::json& config, std::uint64_t, int workers) {
  cfg::expect_keys(config, {"schema_version", "kind", "grid", "set", "scales"},
                   {"schema_version", "kind", "grid", "set", "scales"}, "thickness config");
  const TorusGrid grid = cfg::parse_grid(config.at("grid"));
  const SetSpec set = cfg::parse_set(config.at("set"));
  std::vector<double> scales = cfg::number_list(config, "scales");
  std::sort(scales.begin(), scales.end());

  const IndicatorMask mask = rasterize(set, grid);
  ReportTable table;
  table.kind = "thickness";
  table.columns = {"L", "gamma_min", "gamma_uncertainty", "argmin_offset", "flags"};
  table.rows.resize(scales.size());
  table.wall_ms.resize(scales.size());
  detail::parallel_for(scales.size(), workers, [&](std::size_t i) {
    detail::Stopwatch clock;
    FlagSet flags;
    ThicknessReport rep;
    try {
      rep = thickness_profile(mask, scales[i]);
    } catch (const Error& e) {
      table.rows[i] = {sci17(scales[i]), "nan", "nan", "", errc_name(e.code())};
      table.wall_ms[i] = clock.ms();
      return;
    }
    std::vector<double> offset_coords;
    for (int idx : rep.argmin_offset) offset_coords.push_back(grid.coordinate(idx));
    table.rows[i] = {sci17(rep.scale), sci17(rep.gamma_min), sci17(rep.gamma_uncertainty),
                     detail::join_coords(offset_coords), flags.render()};
    table.wall_ms[i] = clock.ms();
  });
  return table;
}

inline ReportTable run_spectral_sweep(const cfg::json& config, std::uint64_t, int workers) {
  cfg::expect_keys(config,
                   {"schema_version", "kind", "grid", "set", "band_limits", "tol", "max_steps"},
                   {"schema_version", "kind", "grid", "set", "band_limits"},
                   "spectral-sweep config");
  const TorusGrid grid = cfg::parse_grid(config.at("grid"));
  const SetSpec set = cfg::parse_set(config.at("set"));
  std::vector<double> limits = cfg::number_list(config, "band_limits");
  std::sort(limits.begin(), limits.end());
  SpectralConstantOptions opts;
  if (config.contains("tol")) opts.tol = cfg::number(config, "tol");
  if (config.contains("max_steps")) opts.max_steps = cfg::integer(config, "max_steps");

  const IndicatorMask mask = rasterize(set, grid);
  ReportTable table;
  table.kind = "spectral-sweep";
  table.columns = {"N", "lambda_min", "C_est", "iterations", "residual", "flags"};
  table.rows.resize(limits.size());
  table.wall_ms.resize(limits.size());
  detail::parallel_for(limits.size(), workers, [&](std::size_t i) {
    detail::Stopwatch clock;
    try {
      const SpectralConstantEstimate est =
          spectral_constant_estimate(mask, BandLimitSpec{limits[i]}, opts);
      table.rows[i] = {sci17(limits[i]),       sci17(est.lambda_min),
                       sci17(est.eig.value),   std::to_string(est.eig.iterations),
                       sci17(est.eig.residual), est.eig.flags.render()};
    } catch (const Error& e) {
      table.rows[i] = {sci17(limits[i]), "nan", "nan", "0", "nan", errc_name(e.code())};
    }
    table.wall_ms[i] = clock.ms();
  });
  return table;
}

inline ReportTable run_obs_estimate(const cfg::json& config, std::uint64_t, int workers) {
  cfg::expect_keys(
      config, {"schema_version", "kind", "grid", "set", "horizons", "quad", "tol", "max_outer"},
      {"schema_version", "kind", "grid", "set", "horizons", "quad"}, "obs-estimate config");
  const TorusGrid grid = cfg::parse_grid(config.at("grid"));
  const SetSpec set = cfg::parse_set(config.at("set"));
  std::vector<double> horizons = cfg::number_list(config, "horizons");
  std::sort(horizons.begin(), horizons.end());
  ObsConstantOptions opts;
  if (config.contains("tol")) opts.tol = cfg::number(config, "tol");
  if (config.contains("max_outer")) opts.max_outer = cfg::integer(config, "max_outer");

  const IndicatorMask mask = rasterize(set, grid);
  ReportTable table;
  table.kind = "obs-estimate";
  table.columns = {"T", "C_obs_est", "residual", "iterations", "cg_iterations", "flags"};
  table.rows.resize(horizons.size());
  table.wall_ms.resize(horizons.size());
  detail::parallel_for(horizons.size(), workers, [&](std::size_t i) {
    detail::Stopwatch clock;
    try {
      const TimeQuadrature quad = cfg::parse_quad(config.at("quad"), horizons[i]);
      const ObsConstantEstimate est = obs_constant_estimate(mask, horizons[i], quad, opts);
      table.rows[i] = {sci17(horizons[i]),
                       sci17(est.eig.value),
                       sci17(est.eig.residual),
                       std::to_string(est.eig.iterations),
                       std::to_string(est.cg_iterations_total),
                       est.eig.flags.render()};
    } catch (const Error& e) {
      table.rows[i] = {sci17(horizons[i]), "nan", "nan", "0", "0", errc_name(e.code())};
    }
    table.wall_ms[i] = clock.ms();
  });
  return table;
}

inline ReportTable run_interpolation(const cfg::json& config, std::uint64_t seed, int workers) {
  cfg::expect_keys(config,
                   {"schema_version", "kind", "grid", "set", "horizon", "theta", "band_limit",
                    "probes"},
                   {"schema_version", "kind", "grid", "set", "horizon", "theta", "band_limit",
                    "probes"},
                   "interpolation config");
  const TorusGrid grid = cfg::parse_grid(config.at("grid"));
  const SetSpec set = cfg::parse_set(config.at("set"));
  const double horizon = cfg::number(config, "horizon");
  const double theta = cfg::number(config, "theta");
  const double band = cfg::number(config, "band_limit");
  const int probes = cfg::integer(config, "probes");
  if (probes < 1) cfg::bad("'probes' must be >= 1");
  if (!(horizon > 0.0)) cfg::bad("'horizon' must be positive");

  const IndicatorMask mask = rasterize(set, grid);
  ReportTable table;
  table.kind = "interpolation";
  table.columns = {"probe", "c_hold_sample", "flags"};
  table.rows.resize(static_cast<std::size_t>(probes));
  table.wall_ms.resize(static_cast<std::size_t>(probes));
  detail::parallel_for(static_cast<std::size_t>(probes), workers, [&](std::size_t i) {
    detail::Stopwatch clock;
    try {
      // band-limited probes are exactly periodic, the torus's own class, so
      // the boundary-tail monitor does not apply to them
      const GridFunction u0 = random_bandlimited(grid, BandLimitSpec{band}, Rng::derive(seed, i));
      const double c = interpolation_constant(u0, mask, horizon, theta);
      FlagSet flags;
      table.rows[i] = {std::to_string(i), sci17(c), flags.render()};
    } catch (const Error& e) {
      table.rows[i] = {std::to_string(i), "nan", errc_name(e.code())};
    }
    table.wall_ms[i] = clock.ms();
  });
  return table;
}

inline ReportTable run_counterexample(const cfg::json& config, std::uint64_t, int workers) {
  cfg::expect_keys(config,
                   {"schema_version", "kind", "dim", "horizon", "r", "r_prime", "k_values",
                    "samples_per_dim", "quad_nodes"},
                   {"schema_version", "kind", "dim", "horizon", "r", "r_prime", "k_values"},
                   "counterexample config");
  const int dim = cfg::integer(config, "dim");
  const double horizon = cfg::number(config, "horizon");
  const double r = cfg::number(config, "r");
  const double r_prime = cfg::number(config, "r_prime");
  std::vector<double> ks = cfg::number_list(config, "k_values");
  std::sort(ks.begin(), ks.end());
  const int samples =
      config.contains("samples_per_dim") ? cfg::integer(config, "samples_per_dim") : 8192;
  const int quad_nodes = config.contains("quad_nodes") ? cfg::integer(config, "quad_nodes") : 64;

  ReportTable table;
  table.kind = "counterexample";
  table.columns = {"k", "num", "den", "ratio", "closed_form_bound", "flags"};
  table.rows.resize(ks.size());
  table.wall_ms.resize(ks.size());
  detail::parallel_for(ks.size(), workers, [&](std::size_t i) {
    detail::Stopwatch clock;
    try {
      const TorusGrid grid = counterexample_grid(dim, ks[i], samples);
      const TimeQuadrature quad = time_quadrature(horizon, QuadScheme::Trapezoid, quad_nodes);
      const RatioNumericResult res = ratio_numeric(dim, horizon, r, r_prime, ks[i], grid, quad);
      double bound = std::numeric_limits<double>::quiet_NaN();
      FlagSet flags = res.flags;
      try {
        bound = ratio_bound_closed_form(dim, horizon, r, r_prime, ks[i]);
      } catch (const Error& e) {
        flags.add(errc_name(e.code()));
      }
      table.rows[i] = {sci17(ks[i]),      sci17(res.num),  sci17(res.den),
                       sci17(res.ratio),  sci17(bound),    flags.render()};
    } catch (const Error& e) {
      table.rows[i] = {sci17(ks[i]), "nan", "nan", "nan", "nan", errc_name(e.code())};
    }
    table.wall_ms[i] = clock.ms();
  });
  return table;
}

inline ReportTable run_constants_chain(const cfg::json& config, std::uint64_t, int workers) {
  cfg::expect_keys(config,
                   {"schema_version", "kind", "dim", "gammas", "scales", "thetas", "horizons",
                    "generic_c"},
                   {"schema_version", "kind", "dim", "gammas", "scales", "thetas", "horizons"},
                   "constants-chain config");
  const int dim = cfg::integer(config, "dim");
  const auto gammas = cfg::number_list(config, "gammas");
  const auto scales = cfg::number_list(config, "scales");
  const auto thetas = cfg::number_list(config, "thetas");
  const auto horizons = cfg::number_list(config, "horizons");
  const double generic_c =
      config.contains("generic_c") ? cfg::number(config, "generic_c") : 1.0;

  struct Tuple {
    double gamma, scale, theta, horizon;
  };
  std::vector<Tuple> tuples;
  for (double g : gammas)
    for (double l : scales)
      for (double th : thetas)
        for (double t : horizons) tuples.push_back({g, l, th, t});

  ReportTable table;
  table.kind = "constants-chain";
  table.columns = {"gamma",         "L",
                   "theta",         "T",
                   "generic_c",     "c_spec",
                   "c_hold_direct",    "log_c_obs_direct",
                   "c_hold_chain",  "log_c_obs_chain",
                   "log_ratio_obs", "flags"};
  table.rows.resize(tuples.size());
  table.wall_ms.resize(tuples.size());
  detail::parallel_for(tuples.size(), workers, [&](std::size_t i) {
    detail::Stopwatch clock;
    const Tuple& tp = tuples[i];
    try {
      const ConstantChain chain =
          evaluate_constant_chain(dim, tp.gamma, tp.scale, tp.theta, tp.horizon, generic_c);
      table.rows[i] = {sci17(tp.gamma),
                       sci17(tp.scale),
                       sci17(tp.theta),
                       sci17(tp.horizon),
                       sci17(generic_c),
                       sci17(chain.c_spec),
                       sci17(chain.c_hold_direct),
                       sci17(chain.c_obs_direct.log),
                       sci17(chain.c_hold_chained),
                       sci17(chain.c_obs_chained.log),
                       sci17(chain.log_ratio_obs),
                       chain.flags.render()};
    } catch (const Error& e) {
      table.rows[i] = {sci17(tp.gamma), sci17(tp.scale), sci17(tp.theta), sci17(tp.horizon),
                       sci17(generic_c), "nan", "nan", "nan", "nan", "nan", "nan",
                       errc_name(e.code())};
    }
    table.wall_ms[i] = clock.ms();
  });
  return table;
}

inline ReportTable run_audit(const cfg::json& config, std::uint64_t seed, int workers) {
  cfg::expect_keys(config, {"schema_version", "kind", "descriptors", "theta", "generic_c"},
                   {"schema_version", "kind", "descriptors"}, "audit config");
  if (!config.at("descriptors").is_array()) cfg::bad("'descriptors' must be an array");
  std::vector<Descriptor> ids;
  for (const auto& name : config.at("descriptors")) {
    const auto id = descriptor_from_name(name.get<std::string>());
    if (!id) cfg::bad("unknown descriptor '" + name.get<std::string>() + "'");
    ids.push_back(*id);
  }

  ReportTable table;
  table.kind = "audit";
  table.columns = {"descriptor", "inputs",  "lhs_log", "rhs_log",
                   "margin_log", "minimal_generic_constant", "holds", "flags"};
  std::vector<std::vector<AuditReport>> all(ids.size());
  std::vector<double> times(ids.size());
  detail::parallel_for(ids.size(), workers, [&](std::size_t i) {
    detail::Stopwatch clock;
    AuditKnobs knobs = audit_default_knobs(ids[i]);
    if (config.contains("theta")) knobs.theta = cfg::number(config, "theta");
    if (config.contains("generic_c")) knobs.generic_c = cfg::number(config, "generic_c");
    all[i] = run_documented_audits(ids[i], knobs, seed);
    times[i] = clock.ms();
  });
  for (std::size_t i = 0; i < ids.size(); ++i) {
    for (const auto& rep : all[i]) {
      table.rows.push_back({descriptor_name(rep.id), rep.inputs_digest, sci17(rep.lhs_log),
                            sci17(rep.rhs_log), sci17(rep.margin_log),
                            rep.minimal_generic_constant ? sci17(*rep.minimal_generic_constant)
                                                         : std::string("-"),
                            rep.holds() ? "1" : "0", rep.flags.render()});
      table.wall_ms.push_back(times[i] / static_cast<double>(all[i].size()));
    }
  }
  return table;
}

// --- entry points -------------------------------------------------------------

inline ReportTable run_config_json(const cfg::json& config, std::uint64_t seed, int workers) {
  if (!config.is_object()) cfg::bad("config must be a JSON object");
  if (!config.contains("schema_version")) cfg::bad("missing 'schema_version'");
  if (cfg::integer(config, "schema_version") != kSchemaVersion)
    cfg::bad("unsupported schema_version");
  if (!config.contains("kind")) cfg::bad("missing 'kind'");
  const std::string kind = config.at("kind").get<std::string>();
  if (kind == "thickness") return run_thickness(config, seed, workers);
  if (kind == "spectral-sweep") return run_spectral_sweep(config, seed, workers);
  if (kind == "obs-estimate") return run_obs_estimate(config, seed, workers);
  if (kind == "interpolation") return run_interpolation(config, seed, workers);
  if (kind == "counterexample") return run_counterexample(config, seed, workers);
  if (kind == "constants-chain") return run_constants_chain(config, seed, workers);
  if (kind == "audit") return run_audit(config, seed, workers);
  cfg::bad("unknown experiment kind '" + kind + "'");
}

/// Two-column (or three-column) numeric files for external plotting tools.
inline std::string plot_data_from_table(const ReportTable& table) {
  auto col = [&](const std::string& name) -> std::size_t {
    for (std::size_t c = 0; c < table.columns.size(); ++c)
      if (table.columns[c] == name) return c;
    cfg::bad("report is missing column '" + name + "'");
  };
  std::string out;
  if (table.rows.empty()) cfg::bad("empty report");
  if (table.kind == "spectral-sweep") {
    const std::size_t cn = col("N"), cc = col("C_est");
    for (const auto& row : table.rows) {
      const double c_est = std::strtod(row[cc].c_str(), nullptr);
      out += row[cn] + " " + sci17(std::log(c_est)) + "\n";
    }
  } else if (table.kind == "counterexample") {
    const std::size_t ck = col("k"), cr = col("ratio"), cb = col("closed_form_bound");
    for (const auto& row : table.rows) out += row[ck] + " " + row[cr] + " " + row[cb] + "\n";
  } else if (table.kind == "constants-chain") {
    const std::size_t cg = col("gamma"), cl = col("log_c_obs_direct");
    for (const auto& row : table.rows) out += row[cg] + " " + row[cl] + "\n";
  } else if (table.kind == "thickness") {
    const std::size_t cl = col("L"), cgm = col("gamma_min");
    for (const auto& row : table.rows) out += row[cl] + " " + row[cgm] + "\n";
  } else {
    cfg::bad("no plot mapping for kind '" + table.kind + "'");
  }
  return out;
}

inline ReportTable read_csv_table(const std::string& path, const std::string& kind) {
  std::ifstream in(path);
  if (!in) cfg::bad("cannot open report '" + path + "'");
  ReportTable table;
  table.kind = kind;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::string field;
    for (char ch : line) {
      if (ch == ',') {
        fields.push_back(field);
        field.clear();
      } else {
        field += ch;
      }
    }
    fields.push_back(field);
    if (header) {
      table.columns = fields;
      header = false;
    } else {
      table.rows.push_back(fields);
    }
  }
  return table;
}

}  // namespace heatlab
