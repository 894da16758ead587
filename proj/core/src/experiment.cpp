#include "strq/experiment.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "strq/cognitive.hpp"
#include "strq/plot.hpp"
#include "strq/serialization.hpp"

namespace strq {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr double kLambdaMin = 1e-3;
constexpr double kLambdaMax = 700.0;
constexpr int kDefaultLambdaCount = 25;

constexpr std::uint64_t kTagLloyd = 0x5117d0ull;
constexpr std::uint64_t kTagFull = 0xf0111ull;
constexpr std::uint64_t kTagLevel2 = 0x1e7e1ull;

std::string g12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Seeds derive from parameter VALUES (bit patterns), not sweep indices, so a
// single-point run reproduces the matching sweep row and artifact reuse stays
// valid when lists are reordered.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag,
                          std::initializer_list<double> values) {
  std::uint64_t h = mix64(seed ^ mix64(tag));
  for (double v : values) h = mix64(h ^ std::bit_cast<std::uint64_t>(v));
  return h;
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: cannot parse number '" + s +
                                "' for " + what);
  }
}

long long parse_int(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: cannot parse integer '" + s +
                                "' for " + what);
  }
}

std::vector<double> parse_double_list(const std::string& s,
                                      const std::string& what) {
  std::vector<double> out;
  for (const std::string& tok : split_list(s))
    out.push_back(parse_double(tok, what));
  return out;
}

void apply_config_kv(ExperimentConfig& cfg, const std::string& section,
                     const std::string& key, const std::string& value) {
  auto unknown = [&]() {
    throw std::invalid_argument("config: unknown key '" + key +
                                "' in section [" + section + "]");
  };
  if (section == "experiment") {
    if (key == "m") cfg.num_cells = static_cast<int>(parse_int(value, key));
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_int(value, key));
    else if (key == "out") cfg.out_dir = value;
    else if (key == "modes") cfg.modes = split_list(value);
    else if (key == "sigma_s2") cfg.sigma_s2_list = parse_double_list(value, key);
    else if (key == "rho") cfg.rho_list = parse_double_list(value, key);
    else if (key == "lambda") cfg.lambda_list = parse_double_list(value, key);
    else if (key == "mean_x") cfg.mean_x = parse_double(value, key);
    else if (key == "mean_s") cfg.mean_s = parse_double(value, key);
    else if (key == "sigma_x") cfg.sigma_x = parse_double(value, key);
    else unknown();
  } else if (section == "grid") {
    if (key == "x_panels") cfg.grid.x_panels = static_cast<int>(parse_int(value, key));
    else if (key == "x_nodes") cfg.grid.x_nodes = static_cast<int>(parse_int(value, key));
    else if (key == "s_levels") cfg.grid.s_levels = static_cast<int>(parse_int(value, key));
    else unknown();
  } else if (section == "descent") {
    if (key == "step_size") cfg.descent.step_size = parse_double(value, key);
    else if (key == "epsilon") cfg.descent.epsilon = parse_double(value, key);
    else if (key == "max_iters") cfg.descent.max_iters = static_cast<int>(parse_int(value, key));
    else if (key == "num_inits") cfg.descent.num_inits = static_cast<int>(parse_int(value, key));
    else if (key == "min_gap") cfg.descent.min_gap = parse_double(value, key);
    else unknown();
  } else {
    throw std::invalid_argument("config: unknown section [" + section + "]");
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << text;
  if (!f) throw std::runtime_error("write failed: " + path);
}

std::string sanitize_status(std::string s) {
  for (char& c : s) {
    if (c == ',' ) c = ';';
    if (c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

json config_json_object(const ExperimentConfig& cfg) {
  json j;
  j["m"] = cfg.num_cells;
  j["sigma_s2"] = cfg.sigma_s2_list;
  j["rho"] = cfg.rho_list;
  j["lambda"] = cfg.lambda_list;
  j["modes"] = cfg.modes;
  j["mean_x"] = cfg.mean_x;
  j["mean_s"] = cfg.mean_s;
  j["sigma_x"] = cfg.sigma_x;
  j["grid"] = {{"x_panels", cfg.grid.x_panels},
               {"x_nodes", cfg.grid.x_nodes},
               {"s_levels", cfg.grid.s_levels}};
  j["descent"] = {{"step_size", cfg.descent.step_size},
                  {"epsilon", cfg.descent.epsilon},
                  {"max_iters", cfg.descent.max_iters},
                  {"num_inits", cfg.descent.num_inits},
                  {"min_gap", cfg.descent.min_gap}};
  j["out_dir"] = cfg.out_dir;
  j["seed"] = cfg.seed;
  return j;
}

// Lazily designed, lambda-independent pieces of one (sigma_s2, rho) cell.
struct CellContext {
  const ExperimentConfig& cfg;
  double sigma_s2;
  double rho;
  std::optional<SourceModel> model;
  std::optional<DesignResult> d0, d1, df;

  CellContext(const ExperimentConfig& c, double s2, double r)
      : cfg(c), sigma_s2(s2), rho(r) {}

  SourceModel& ensure_model() {
    if (!model)
      model.emplace(cfg.mean_x, cfg.mean_s, cfg.sigma_x, std::sqrt(sigma_s2),
                    rho, cfg.grid);
    return *model;
  }
  const DesignResult& ensure_d0() {
    if (!d0)
      d0 = lloyd_max(ensure_model(), cfg.num_cells,
                     derive_seed(cfg.seed, kTagLloyd, {sigma_s2, rho}));
    return *d0;
  }
  const DesignResult& ensure_d1() {
    if (!d1) d1 = design_level1(ensure_d0(), ensure_model());
    return *d1;
  }
  const DesignResult& ensure_df() {
    if (!df) {
      DescentConfig dc = cfg.descent;
      dc.seed = derive_seed(cfg.seed, kTagFull, {sigma_s2, rho});
      df = design_full_info(ensure_model(), cfg.num_cells, dc);
    }
    return *df;
  }
  DesignResult make_d2(double lambda) {
    const TypePmf p_prime = normalized_poisson(lambda, 1);
    DescentConfig dc = cfg.descent;
    dc.seed = derive_seed(cfg.seed, kTagLevel2, {sigma_s2, rho, lambda});
    return design_level2(ensure_model(), cfg.num_cells,
                         ensure_d0().boundaries, ensure_d1().boundaries,
                         p_prime, dc);
  }
};

struct PointOutput {
  SweepRow row;
  json artifact;
  PointRecord record;
};

json population_entry(const SourceModel& model, const DesignResult& d,
                      double weight) {
  json e;
  e["level"] = design_level_name(d.level);
  e["weight"] = weight;
  e["classifier"] = json::parse(design_result_to_json(model, d));
  return e;
}

PointOutput compute_point(CellContext& cell, double lambda,
                          const std::string& mode,
                          std::uint64_t fingerprint) {
  PointOutput out;
  SweepRow& row = out.row;
  row.sigma_s2 = cell.sigma_s2;
  row.rho = cell.rho;
  row.lambda = lambda;
  row.mode = mode;
  row.num_cells = cell.cfg.num_cells;

  json& art = out.artifact;
  art["schema"] = "strq-point-v1";
  art["config_fingerprint"] = fingerprint;
  art["point"] = {{"sigma_s2", cell.sigma_s2},
                  {"rho", cell.rho},
                  {"lambda", lambda},
                  {"mode", mode},
                  {"M", cell.cfg.num_cells}};
  try {
    SourceModel& model = cell.ensure_model();
    if (mode == "S_b") {
      const TypePmf p = normalized_poisson(lambda, 2);
      const TypePmf p_prime = normalized_poisson(lambda, 1);
      const DesignResult& d0 = cell.ensure_d0();
      const DesignResult& d1 = cell.ensure_d1();
      const DesignResult d2 = cell.make_d2(lambda);
      const EquilibriumReport report = evaluate_population(
          model, d0.boundaries, d1.boundaries, d2.boundaries, p, p_prime, d0,
          d1, d2);
      row.dd_star = report.receiver_distortion;
      row.de0 = report.per_type_sender_distortion[0];
      row.de1 = report.per_type_sender_distortion[1];
      row.de2 = report.per_type_sender_distortion[2];
      art["y_star"] = report.actual_estimates.values;
      art["empty_cells"] = report.empty_cell_flags;
      art["per_type_receiver_contribution"] =
          report.per_type_receiver_contribution;
      art["per_type_sender_distortion_actual"] =
          report.per_type_sender_distortion_actual;
      art["population"] = json::array({
          population_entry(model, d0, p.probs[0]),
          population_entry(model, d1, p.probs[1]),
          population_entry(model, d2, p.probs[2]),
      });
      out.record.population = {{d0.boundaries, p.probs[0]},
                               {d1.boundaries, p.probs[1]},
                               {d2.boundaries, p.probs[2]}};
      out.record.y_star = report.actual_estimates;
      out.record.empty_cells = report.empty_cell_flags;
    } else {
      const DesignResult* design = nullptr;
      if (mode == "S_n") design = &cell.ensure_d0();
      else if (mode == "S_p") design = &cell.ensure_d1();
      else if (mode == "S_f") design = &cell.ensure_df();
      else throw std::invalid_argument("unknown sender mode '" + mode + "'");

      const std::vector<MixtureComponent> comps{{&design->boundaries, 1.0}};
      const MixtureEstimates mix = perceived_estimates_mixture(model, comps);
      const double dd =
          receiver_distortion_mixture(model, comps, mix.estimates);
      row.dd_star = dd;
      // The D_E columns report the sender distortions of the row's actual
      // population; the fully-rational sender's value rides in the D_E_2
      // column for S_f rows.
      if (mode == "S_n") row.de0 = design->sender_distortion;
      else if (mode == "S_p") row.de1 = design->sender_distortion;
      else row.de2 = design->sender_distortion;
      art["y_star"] = mix.estimates.values;
      art["empty_cells"] = mix.empty_cells;
      art["population"] =
          json::array({population_entry(model, *design, 1.0)});
      out.record.population = {{design->boundaries, 1.0}};
      out.record.y_star = mix.estimates;
      out.record.empty_cells = mix.empty_cells;
    }
    row.status = "ok";
    art["status"] = "ok";
    art["D_D_star"] = *row.dd_star;
    art["D_E"] = json::array({row.de0 ? json(*row.de0) : json(),
                              row.de1 ? json(*row.de1) : json(),
                              row.de2 ? json(*row.de2) : json()});
  } catch (const std::exception& e) {
    row.status = sanitize_status(std::string("error:") + e.what());
    row.dd_star.reset();
    row.de0.reset();
    row.de1.reset();
    row.de2.reset();
    art["status"] = row.status;
  }
  out.record.row = row;
  return out;
}

bool try_load_row(const std::string& path, std::uint64_t fingerprint,
                  const CellContext& cell, double lambda,
                  const std::string& mode, SweepRow& row) {
  std::ifstream f(path, std::ios::binary);
  if (!f) return false;
  std::stringstream buf;
  buf << f.rdbuf();
  json art;
  try {
    art = json::parse(buf.str());
  } catch (const json::exception&) {
    return false;
  }
  if (!art.is_object()) return false;
  if (art.value("schema", "") != "strq-point-v1") return false;
  if (!art.contains("config_fingerprint") ||
      art["config_fingerprint"].get<std::uint64_t>() != fingerprint)
    return false;
  if (art.value("status", "") != "ok") return false;
  const json& pt = art["point"];
  if (pt.value("sigma_s2", -1.0) != cell.sigma_s2 ||
      pt.value("rho", -1.0) != cell.rho || pt.value("lambda", -1.0) != lambda ||
      pt.value("mode", "") != mode ||
      pt.value("M", -1) != cell.cfg.num_cells)
    return false;
  if (!art.contains("D_D_star") || !art.contains("D_E")) return false;

  row.sigma_s2 = cell.sigma_s2;
  row.rho = cell.rho;
  row.lambda = lambda;
  row.mode = mode;
  row.num_cells = cell.cfg.num_cells;
  row.dd_star = art["D_D_star"].get<double>();
  const json& de = art["D_E"];
  if (!de.is_array() || de.size() != 3) return false;
  row.de0 = de[0].is_null() ? std::nullopt
                            : std::optional<double>(de[0].get<double>());
  row.de1 = de[1].is_null() ? std::nullopt
                            : std::optional<double>(de[1].get<double>());
  row.de2 = de[2].is_null() ? std::nullopt
                            : std::optional<double>(de[2].get<double>());
  row.status = "ok";
  return true;
}

std::string value_slug(double v) {
  std::string s = g12(v);
  for (char& c : s) {
    if (c == '.') c = 'p';
    if (c == '-') c = 'm';
    if (c == '+') c = 'q';
  }
  return s;
}

}  // namespace

std::vector<double> default_lambda_grid() {
  std::vector<double> out(kDefaultLambdaCount);
  const double l0 = std::log(kLambdaMin);
  const double l1 = std::log(kLambdaMax);
  for (int i = 0; i < kDefaultLambdaCount; ++i)
    out[i] = std::exp(l0 + (l1 - l0) * i / (kDefaultLambdaCount - 1));
  out.front() = kLambdaMin;
  out.back() = kLambdaMax;
  return out;
}

ExperimentConfig load_config_ini(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("config: cannot open '" + path + "'");
  ExperimentConfig cfg;
  std::string line;
  std::string section = "experiment";
  int line_no = 0;
  while (std::getline(f, line)) {
    ++line_no;
    const std::size_t comment = line.find_first_of("#;");
    if (comment != std::string::npos) line.erase(comment);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::invalid_argument("config: malformed section header at line " +
                                    std::to_string(line_no));
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: expected 'key = value' at line " +
                                  std::to_string(line_no));
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    apply_config_kv(cfg, section, key, value);
  }
  return cfg;
}

void apply_default_lambdas(ExperimentConfig& cfg) {
  if (cfg.lambda_list.empty()) cfg.lambda_list = default_lambda_grid();
}

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.num_cells < 1)
    throw std::invalid_argument("config: m must be >= 1");
  if (cfg.sigma_s2_list.empty())
    throw std::invalid_argument("config: sigma_s2 list is empty");
  for (double v : cfg.sigma_s2_list)
    if (!(v > 0.0))
      throw std::invalid_argument("config: sigma_s2 values must be positive");
  if (cfg.rho_list.empty())
    throw std::invalid_argument("config: rho list is empty");
  for (double v : cfg.rho_list)
    if (!(v >= 0.0 && v < 1.0))
      throw std::invalid_argument("config: rho values must lie in [0, 1)");
  if (cfg.lambda_list.empty())
    throw std::invalid_argument("config: lambda list is empty");
  for (double v : cfg.lambda_list)
    if (!(v > 0.0))
      throw std::invalid_argument("config: lambda values must be positive");
  if (cfg.modes.empty())
    throw std::invalid_argument("config: modes list is empty");
  for (const std::string& m : cfg.modes) {
    if (std::find(kSenderModes.begin(), kSenderModes.end(), m) ==
        kSenderModes.end())
      throw std::invalid_argument("config: unknown mode '" + m + "'");
    if (std::count(cfg.modes.begin(), cfg.modes.end(), m) != 1)
      throw std::invalid_argument("config: duplicate mode '" + m + "'");
  }
  if (!(cfg.sigma_x > 0.0))
    throw std::invalid_argument("config: sigma_x must be positive");
  if (cfg.grid.x_panels < 1 || cfg.grid.x_nodes < 2 || cfg.grid.s_levels < 1)
    throw std::invalid_argument("config: invalid grid spec");
  if (!(cfg.descent.step_size > 0.0))
    throw std::invalid_argument("config: step_size must be positive");
  if (!(cfg.descent.epsilon > 0.0))
    throw std::invalid_argument("config: epsilon must be positive");
  if (cfg.descent.max_iters < 1)
    throw std::invalid_argument("config: max_iters must be >= 1");
  if (cfg.descent.num_inits < 1)
    throw std::invalid_argument("config: num_inits must be >= 1");
  if (cfg.descent.min_gap < 0.0)
    throw std::invalid_argument("config: min_gap must be >= 0");
  if (cfg.out_dir.empty())
    throw std::invalid_argument("config: out directory is empty");
}

std::string resolved_config_json(const ExperimentConfig& cfg) {
  return config_json_object(cfg).dump(2) + "\n";
}

std::uint64_t config_fingerprint(const ExperimentConfig& cfg) {
  json j = config_json_object(cfg);
  j.erase("out_dir");
  return fnv1a(j.dump());
}

SweepTable run_sweep(const ExperimentConfig& cfg_in,
                     const PointObserver& observer) {
  ExperimentConfig cfg = cfg_in;
  apply_default_lambdas(cfg);
  validate_config(cfg);

  const fs::path out_dir(cfg.out_dir);
  const fs::path art_dir = out_dir / "artifacts";
  std::error_code ec;
  fs::create_directories(art_dir, ec);
  if (ec || !fs::is_directory(art_dir))
    throw std::runtime_error("output directory is not writable: " +
                             cfg.out_dir);

  write_text_file((out_dir / "resolved_config.json").string(),
                  resolved_config_json(cfg));
  const std::uint64_t fingerprint = config_fingerprint(cfg);

  SweepTable table;
  for (std::size_t si = 0; si < cfg.sigma_s2_list.size(); ++si) {
    for (std::size_t ri = 0; ri < cfg.rho_list.size(); ++ri) {
      CellContext cell(cfg, cfg.sigma_s2_list[si], cfg.rho_list[ri]);
      for (std::size_t li = 0; li < cfg.lambda_list.size(); ++li) {
        for (const std::string& mode : cfg.modes) {
          const std::string name = "point_s" + std::to_string(si) + "_r" +
                                   std::to_string(ri) + "_l" +
                                   std::to_string(li) + "_" + mode + ".json";
          const std::string path = (art_dir / name).string();
          SweepRow row;
          if (try_load_row(path, fingerprint, cell, cfg.lambda_list[li], mode,
                           row)) {
            table.rows.push_back(row);
            continue;
          }
          PointOutput out =
              compute_point(cell, cfg.lambda_list[li], mode, fingerprint);
          out.artifact["config_echo"] = config_json_object(cfg);
          write_text_file(path, out.artifact.dump() + "\n");
          table.rows.push_back(out.row);
          if (observer) observer(out.record);
        }
      }
    }
  }

  write_results_csv(table, (out_dir / "results.csv").string());
  render_plots(table, cfg.out_dir);
  return table;
}

std::string run_single_point(const ExperimentConfig& cfg_in, double sigma_s2,
                             double rho, double lambda,
                             const std::string& mode) {
  ExperimentConfig cfg = cfg_in;
  cfg.sigma_s2_list = {sigma_s2};
  cfg.rho_list = {rho};
  cfg.lambda_list = {lambda};
  cfg.modes = {mode};
  validate_config(cfg);

  CellContext cell(cfg, sigma_s2, rho);
  PointOutput out = compute_point(cell, lambda, mode,
                                  config_fingerprint(cfg));
  out.artifact["config_echo"] = config_json_object(cfg);
  return out.artifact.dump(2) + "\n";
}

std::string format_csv(const SweepTable& table) {
  std::string csv = "sigma_s2,rho,lambda,mode,M,D_D_star,D_E_0,D_E_1,D_E_2,status\n";
  auto opt = [](const std::optional<double>& v) {
    return v ? g12(*v) : std::string();
  };
  for (const SweepRow& r : table.rows) {
    csv += g12(r.sigma_s2) + "," + g12(r.rho) + "," + g12(r.lambda) + "," +
           r.mode + "," + std::to_string(r.num_cells) + "," + opt(r.dd_star) +
           "," + opt(r.de0) + "," + opt(r.de1) + "," + opt(r.de2) + "," +
           r.status + "\n";
  }
  return csv;
}

void write_results_csv(const SweepTable& table, const std::string& path) {
  write_text_file(path, format_csv(table));
}

SweepTable load_results_csv(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open CSV: " + path);
  std::string line;
  if (!std::getline(f, line))
    throw std::runtime_error("CSV is empty: " + path);
  if (trim(line) != "sigma_s2,rho,lambda,mode,M,D_D_star,D_E_0,D_E_1,D_E_2,status")
    throw std::runtime_error("CSV header mismatch: " + path);
  SweepTable table;
  int line_no = 1;
  while (std::getline(f, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) fields.push_back(tok);
    if (line.back() == ',') fields.push_back("");
    if (fields.size() != 10)
      throw std::runtime_error("CSV row with wrong field count at line " +
                               std::to_string(line_no));
    SweepRow r;
    r.sigma_s2 = parse_double(fields[0], "sigma_s2");
    r.rho = parse_double(fields[1], "rho");
    r.lambda = parse_double(fields[2], "lambda");
    r.mode = fields[3];
    r.num_cells = static_cast<int>(parse_int(fields[4], "M"));
    auto opt = [](const std::string& s) -> std::optional<double> {
      if (trim(s).empty()) return std::nullopt;
      return parse_double(s, "CSV value");
    };
    r.dd_star = opt(fields[5]);
    r.de0 = opt(fields[6]);
    r.de1 = opt(fields[7]);
    r.de2 = opt(fields[8]);
    r.status = trim(fields[9]);
    table.rows.push_back(r);
  }
  return table;
}

std::vector<std::array<double, 4>> pmf_plot_series(
    const std::vector<double>& lambdas) {
  std::vector<std::array<double, 4>> out;
  out.reserve(lambdas.size());
  for (double lam : lambdas) {
    const TypePmf p = normalized_poisson(lam, 2);
    out.push_back({lam, p.probs[0], p.probs[1], p.probs[2]});
  }
  return out;
}

void render_plots(const SweepTable& table, const std::string& out_dir) {
  const fs::path dir(out_dir);
  fs::create_directories(dir);

  // fig2: type pmf curves over the lambdas present in the table.
  std::vector<double> lambdas;
  for (const SweepRow& r : table.rows) lambdas.push_back(r.lambda);
  std::sort(lambdas.begin(), lambdas.end());
  lambdas.erase(std::unique(lambdas.begin(), lambdas.end()), lambdas.end());
  if (!lambdas.empty()) {
    const std::vector<std::array<double, 4>> pmf = pmf_plot_series(lambdas);
    std::vector<PlotSeries> series(3);
    for (int k = 0; k < 3; ++k)
      series[k].label = "p_" + std::to_string(k);
    for (const std::array<double, 4>& row : pmf)
      for (int k = 0; k < 3; ++k)
        series[k].points.emplace_back(row[0], row[1 + k]);
    write_svg_plot((dir / "fig2_pmf.svg").string(),
                   "Type pmf vs lambda (K = 2)", "lambda (log scale)",
                   "probability", series);
  }

  // Group rows per (sigma_s2, rho) cell.
  std::map<std::pair<double, double>, std::vector<const SweepRow*>> cells;
  for (const SweepRow& r : table.rows)
    cells[{r.sigma_s2, r.rho}].push_back(&r);

  for (const auto& [key, rows] : cells) {
    const std::string suffix =
        "sigma" + value_slug(key.first) + "_rho" + value_slug(key.second);
    const std::string subtitle =
        "sigma_s2 = " + g12(key.first) + ", rho = " + g12(key.second);

    // fig3: the boundedly-rational population's receiver distortion.
    std::vector<PlotSeries> sb(1);
    sb[0].label = "S_b";
    for (const SweepRow* r : rows)
      if (r->mode == "S_b" && r->dd_star)
        sb[0].points.emplace_back(r->lambda, *r->dd_star);
    std::sort(sb[0].points.begin(), sb[0].points.end());
    if (!sb[0].points.empty())
      write_svg_plot((dir / ("fig3_" + suffix + ".svg")).string(),
                     "Receiver distortion, " + subtitle, "lambda (log scale)",
                     "D_D*", sb);

    // fig4: four-sender comparison.
    std::vector<PlotSeries> comparison;
    for (const char* mode : kSenderModes) {
      PlotSeries s;
      s.label = mode;
      for (const SweepRow* r : rows)
        if (r->mode == mode && r->dd_star)
          s.points.emplace_back(r->lambda, *r->dd_star);
      std::sort(s.points.begin(), s.points.end());
      if (!s.points.empty()) comparison.push_back(std::move(s));
    }
    if (comparison.size() >= 2)
      write_svg_plot((dir / ("fig4_" + suffix + ".svg")).string(),
                     "Sender-mode comparison, " + subtitle,
                     "lambda (log scale)", "D_D*", comparison);
  }
}

}  // namespace strq
