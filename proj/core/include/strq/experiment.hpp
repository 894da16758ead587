#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "strq/design.hpp"
#include "strq/receiver.hpp"
#include "strq/source_model.hpp"

namespace strq {

// Sender-population modes of the comparison experiment:
//   S_n — the whole population reports honestly (level-0 classifier);
//   S_f — a fully-rational, fully-informed strategic sender;
//   S_b — the boundedly-rational three-type population with Poisson(lambda)
//         cognitive levels;
//   S_p — a partially-strategic sender (level-1 classifier only).
// The receiver always best-responds to the row's actual population.
inline const std::array<const char*, 4> kSenderModes{"S_n", "S_f", "S_b",
                                                     "S_p"};

struct ExperimentConfig {
  int num_cells = 4;  // M
  std::vector<double> sigma_s2_list{0.1, 1.0, 1.5};
  std::vector<double> rho_list{0.1, 0.5, 0.7};
  std::vector<double> lambda_list;  // empty -> default_lambda_grid()
  std::vector<std::string> modes{"S_n", "S_f", "S_b", "S_p"};
  double mean_x = 0.0;
  double mean_s = 0.0;
  double sigma_x = 1.0;
  GridSpec grid;
  DescentConfig descent;
  std::string out_dir = "out";
  std::uint64_t seed = 1;
};

// 25 log-spaced points covering [0.001, 700].
std::vector<double> default_lambda_grid();

// Loads the INI-style config ([section], key = value, '#'/';' comments,
// comma-separated lists). Unknown sections/keys are errors. Sections:
// [experiment] (or top level), [grid], [descent].
ExperimentConfig load_config_ini(const std::string& path);

// Fills lambda_list with the default grid when empty.
void apply_default_lambdas(ExperimentConfig& cfg);

// Throws std::invalid_argument with a reason on any invalid field.
void validate_config(const ExperimentConfig& cfg);

// Full resolved configuration (defaults included) as pretty JSON.
std::string resolved_config_json(const ExperimentConfig& cfg);

// Stable hash of the resolved config minus the output directory; artifacts
// carry it so resumed rows are only reused under an identical setup.
std::uint64_t config_fingerprint(const ExperimentConfig& cfg);

struct SweepRow {
  double sigma_s2 = 0.0;
  double rho = 0.0;
  double lambda = 0.0;
  std::string mode;
  int num_cells = 0;
  std::optional<double> dd_star;
  std::optional<double> de0, de1, de2;
  std::string status = "ok";
};

struct SweepTable {
  std::vector<SweepRow> rows;
};

// Observer payload for freshly computed (not resumed) points: the population
// mixture, the receiver's estimates and the per-message empty-cell flags.
struct PointRecord {
  SweepRow row;
  std::vector<std::pair<BoundaryMatrix, double>> population;
  EstimateVector y_star;
  std::vector<int> empty_cells;
};
using PointObserver = std::function<void(const PointRecord&)>;

// Runs the cartesian sweep (sigma_s2 x rho x lambda x mode, in that order),
// caching lambda-independent designs per (sigma_s2, rho) cell, reusing valid
// JSON artifacts from previous partial runs, and writing results.csv,
// resolved_config.json, per-point artifacts and SVG plots under out_dir.
SweepTable run_sweep(const ExperimentConfig& cfg,
                     const PointObserver& observer = {});

// Computes one experiment point and returns its artifact JSON (also the
// `design` subcommand payload). Design seeds depend on the parameter values,
// not on sweep indices, so the numbers match the corresponding sweep row.
std::string run_single_point(const ExperimentConfig& cfg, double sigma_s2,
                             double rho, double lambda,
                             const std::string& mode);

std::string format_csv(const SweepTable& table);
void write_results_csv(const SweepTable& table, const std::string& path);
SweepTable load_results_csv(const std::string& path);

// Renders fig2 (type pmf vs lambda), fig3 (per-cell S_b receiver distortion)
// and fig4 (per-cell all-mode comparison) SVGs from a result table.
void render_plots(const SweepTable& table, const std::string& out_dir);

// Type-pmf curves for the fig2 plot: rows of {lambda, p0, p1, p2}.
std::vector<std::array<double, 4>> pmf_plot_series(
    const std::vector<double>& lambdas);

}  // namespace strq
