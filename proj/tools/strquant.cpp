// strquant: design strategic quantizers for a jointly-Gaussian (state, bias)
// source and evaluate the receiver's distortion across sender populations.
//
// Subcommands:
//   design           compute one experiment point and print its JSON report
//   sweep            run the full cartesian sweep and write CSV/artifacts/SVGs
//   plot             re-render the SVG figures from an existing results.csv
//   validate-config  check a config (file + flag overrides) and echo it
//
// Exit codes: 0 success, 1 runtime failure, 2 usage/config error. Failures
// print a single machine-readable JSON line on stderr.

#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "strq/experiment.hpp"
#include "strq/version.hpp"

namespace {

using nlohmann::json;

struct CommonFlags {
  std::string config_path;
  std::string out_dir;
  std::string modes_csv;
  std::uint64_t seed = 0;
  int num_cells = 0;
  int grid_panels = 0;

  CLI::Option* config_opt = nullptr;
  CLI::Option* out_opt = nullptr;
  CLI::Option* modes_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* m_opt = nullptr;
  CLI::Option* panels_opt = nullptr;
};

void add_common_flags(CLI::App* cmd, CommonFlags& f) {
  f.config_opt = cmd->add_option("--config", f.config_path,
                                 "Config file (INI-style sections)");
  f.out_opt = cmd->add_option("--out", f.out_dir, "Output directory");
  f.modes_opt = cmd->add_option(
      "--modes", f.modes_csv, "Comma-separated sender modes (S_n,S_f,S_b,S_p)");
  f.seed_opt = cmd->add_option("--seed", f.seed, "Master seed");
  f.m_opt = cmd->add_option("--m", f.num_cells, "Number of classifier cells M");
  f.panels_opt = cmd->add_option("--grid-panels", f.grid_panels,
                                 "Quadrature panels along the state axis");
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    const std::size_t a = tok.find_first_not_of(" \t");
    if (a == std::string::npos) continue;
    const std::size_t b = tok.find_last_not_of(" \t");
    out.push_back(tok.substr(a, b - a + 1));
  }
  return out;
}

strq::ExperimentConfig build_config(const CommonFlags& f) {
  strq::ExperimentConfig cfg;
  if (f.config_opt && f.config_opt->count())
    cfg = strq::load_config_ini(f.config_path);
  if (f.out_opt && f.out_opt->count()) cfg.out_dir = f.out_dir;
  if (f.modes_opt && f.modes_opt->count()) cfg.modes = split_csv(f.modes_csv);
  if (f.seed_opt && f.seed_opt->count()) cfg.seed = f.seed;
  if (f.m_opt && f.m_opt->count()) cfg.num_cells = f.num_cells;
  if (f.panels_opt && f.panels_opt->count()) cfg.grid.x_panels = f.grid_panels;
  return cfg;
}

int fail(const char* kind, const std::string& detail, int code) {
  std::cerr << json{{"error", kind}, {"detail", detail}}.dump() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"strategic quantizer design and receiver-distortion sweeps"};
  app.set_version_flag("--version", std::string(strq::version()));
  app.require_subcommand(1);

  CLI::App* design = app.add_subcommand(
      "design", "Design and evaluate a single experiment point");
  CommonFlags design_flags;
  add_common_flags(design, design_flags);
  double sigma_s2 = 1.0, rho = 0.5, lambda = 1.0;
  std::string mode = "S_b";
  design->add_option("--sigma-s2", sigma_s2, "Bias variance sigma_S^2")
      ->required();
  design->add_option("--rho", rho, "State/bias correlation")->required();
  design->add_option("--lambda", lambda,
                     "Poisson rate of the cognitive-level pmf");
  design->add_option("--mode", mode, "Sender mode (S_n, S_f, S_b or S_p)");

  CLI::App* sweep =
      app.add_subcommand("sweep", "Run the full parameter sweep");
  CommonFlags sweep_flags;
  add_common_flags(sweep, sweep_flags);

  CLI::App* plot =
      app.add_subcommand("plot", "Re-render figures from a results CSV");
  CommonFlags plot_flags;
  add_common_flags(plot, plot_flags);
  std::string csv_path;
  plot->add_option("--csv", csv_path, "Path to results.csv")->required();

  CLI::App* validate = app.add_subcommand(
      "validate-config", "Validate the config and echo the resolved values");
  CommonFlags validate_flags;
  add_common_flags(validate, validate_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return fail("usage", e.what(), 2);
  }

  try {
    if (design->parsed()) {
      strq::ExperimentConfig cfg = build_config(design_flags);
      strq::apply_default_lambdas(cfg);
      const std::string report =
          strq::run_single_point(cfg, sigma_s2, rho, lambda, mode);
      std::cout << report;
      if (json::parse(report).value("status", "") != "ok")
        return fail("runtime", "design point failed; see report status", 1);
      return 0;
    }
    if (sweep->parsed()) {
      strq::ExperimentConfig cfg = build_config(sweep_flags);
      const strq::SweepTable table = strq::run_sweep(cfg);
      std::size_t failed = 0;
      for (const strq::SweepRow& r : table.rows)
        if (r.status != "ok") ++failed;
      std::cout << "rows: " << table.rows.size() << " (" << failed
                << " failed), results: " << cfg.out_dir << "/results.csv\n";
      return 0;
    }
    if (plot->parsed()) {
      strq::ExperimentConfig cfg = build_config(plot_flags);
      const strq::SweepTable table = strq::load_results_csv(csv_path);
      strq::render_plots(table, cfg.out_dir.empty() ? "." : cfg.out_dir);
      std::cout << "figures written to " << cfg.out_dir << "\n";
      return 0;
    }
    if (validate->parsed()) {
      strq::ExperimentConfig cfg = build_config(validate_flags);
      strq::apply_default_lambdas(cfg);
      strq::validate_config(cfg);
      std::cout << strq::resolved_config_json(cfg);
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    return fail("config", e.what(), 2);
  } catch (const std::exception& e) {
    return fail("runtime", e.what(), 1);
  }
  return fail("usage", "no subcommand selected", 2);
}
