#include "strq/design.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace strq {

namespace {

constexpr double kStepFloor = 1e-8;
constexpr double kLloydMoveTol = 1e-10;
constexpr int kLloydMaxIters = 10000;
constexpr int kLloydNumInits = 10;

// splitmix64: tiny, portable generator so designs are bitwise reproducible
// across standard libraries (std:: distributions are implementation-defined).
std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double uniform01(std::uint64_t& state) {
  return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
  std::uint64_t state = seed ^ (tag * 0xd1b54a32d192ed03ull);
  return splitmix64(state);
}

std::vector<double> random_sorted_interior(std::uint64_t& state, int count,
                                           double lo, double hi) {
  std::vector<double> v(count);
  for (double& x : v) x = lo + (hi - lo) * uniform01(state);
  std::sort(v.begin(), v.end());
  return v;
}

BoundaryMatrix random_monotone_classifier(const SourceModel& model,
                                          int num_cells, std::uint64_t& state,
                                          double min_gap) {
  BoundaryMatrix q;
  q.num_cells = num_cells;
  q.bounds.assign(model.num_s_levels(), std::vector<double>(num_cells + 1));
  for (std::vector<double>& row : q.bounds) {
    row.front() = model.a_x();
    row.back() = model.b_x();
    const std::vector<double> interior =
        random_sorted_interior(state, num_cells - 1, model.a_x(), model.b_x());
    std::copy(interior.begin(), interior.end(), row.begin() + 1);
  }
  project_monotone(model, q, min_gap);
  return q;
}

struct DescentOutcome {
  BoundaryMatrix q;
  MixtureEstimates est;
  double distortion = 0.0;
  std::vector<double> trace;
  bool failed = false;
};

// Shared projected-gradient engine. estimate_fn(q) supplies the estimates the
// sender believes in at classifier q; a candidate step is accepted only if
// the objective evaluated with the candidate's own estimates decreases
// (update -> estimates -> distortion).
template <typename EstimateFn>
DescentOutcome descend(const SourceModel& model, const BoundaryMatrix& init,
                       const DescentConfig& cfg, EstimateFn&& estimate_fn) {
  DescentOutcome cur;
  cur.q = init;
  cur.est = estimate_fn(cur.q);
  cur.distortion = sender_distortion(model, cur.q, cur.est.estimates, true);
  cur.trace.push_back(cur.distortion);

  const int interior = cur.q.num_cells - 1;
  double step = cfg.step_size;
  for (int iter = 0; iter < cfg.max_iters && interior > 0; ++iter) {
    const std::vector<std::vector<double>> grad =
        level2_gradient(model, cur.q, cur.est.estimates);
    for (const std::vector<double>& row : grad)
      for (double g : row)
        if (!std::isfinite(g)) {
          cur.failed = true;
          return cur;
        }

    bool accepted = false;
    DescentOutcome cand;
    while (step >= kStepFloor) {
      cand.q = cur.q;
      for (int j = 0; j < model.num_s_levels(); ++j)
        for (int m = 0; m < interior; ++m)
          cand.q.bounds[j][m + 1] -= step * grad[j][m];
      project_monotone(model, cand.q, cfg.min_gap);
      cand.est = estimate_fn(cand.q);
      cand.distortion =
          sender_distortion(model, cand.q, cand.est.estimates, true);
      if (cand.distortion < cur.distortion) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // no descent step exists above the floor

    const double improve = cur.distortion - cand.distortion;
    cur.q = std::move(cand.q);
    cur.est = std::move(cand.est);
    cur.distortion = cand.distortion;
    cur.trace.push_back(cur.distortion);
    step *= 1.1;
    if (improve < cfg.epsilon) break;
  }
  return cur;
}

// Multi-start driver shared by the strategic designers: runs the engine from
// num_inits random starts plus one deterministic start, keeps the lowest
// final distortion (ties to the lowest initialization index).
template <typename EstimateFn>
DesignResult multi_start(const SourceModel& model, int num_cells,
                         const BoundaryMatrix& deterministic_init,
                         const DescentConfig& cfg, std::uint64_t seed_tag,
                         DesignLevel level, EstimateFn&& estimate_fn) {
  DesignResult best;
  bool have_best = false;
  for (int k = 0; k <= cfg.num_inits; ++k) {
    BoundaryMatrix init;
    if (k < cfg.num_inits) {
      std::uint64_t state = mix_seed(cfg.seed, seed_tag + 0x100ull * k);
      init = random_monotone_classifier(model, num_cells, state, cfg.min_gap);
    } else {
      init = deterministic_init;
    }
    DescentOutcome out = descend(model, init, cfg, estimate_fn);
    if (out.failed) continue;
    if (!have_best || out.distortion < best.sender_distortion) {
      best.level = level;
      best.boundaries = std::move(out.q);
      best.perceived_estimates = std::move(out.est.estimates);
      best.sender_distortion = out.distortion;
      best.trace = std::move(out.trace);
      best.init_index = k;
      best.empty_cell_flags = std::move(out.est.empty_cells);
      have_best = true;
    }
  }
  if (!have_best)
    throw std::runtime_error("strategic design: all initializations failed");
  return best;
}

}  // namespace

const char* design_level_name(DesignLevel level) {
  switch (level) {
    case DesignLevel::level0: return "level0";
    case DesignLevel::level1: return "level1";
    case DesignLevel::level2: return "level2";
    case DesignLevel::full_info: return "full_info";
  }
  return "unknown";
}

void project_monotone(const SourceModel& model, BoundaryMatrix& q,
                      double min_gap) {
  const double lo = model.a_x();
  const double hi = model.b_x();
  for (std::vector<double>& row : q.bounds) {
    row.front() = lo;
    row.back() = hi;
    std::sort(row.begin() + 1, row.end() - 1);
    for (std::size_t m = 1; m + 1 < row.size(); ++m)
      row[m] = std::clamp(row[m], lo, hi);
    for (std::size_t m = 1; m + 1 < row.size(); ++m)
      row[m] = std::max(row[m], std::min(row[m - 1] + min_gap, hi));
    for (std::size_t m = row.size() - 2; m >= 1; --m)
      row[m] = std::min(row[m], std::max(row[m + 1] - min_gap, lo));
  }
}

DesignResult lloyd_max(const SourceModel& model, int num_cells,
                       std::uint64_t seed) {
  if (num_cells < 1)
    throw std::invalid_argument("lloyd_max: num_cells must be >= 1");
  const double a = model.a_x();
  const double b = model.b_x();

  DesignResult best;
  bool have_best = false;
  for (int init = 0; init < kLloydNumInits; ++init) {
    std::uint64_t state = mix_seed(seed, 0x110ull + init);
    std::vector<double> edges(num_cells + 1);
    edges.front() = a;
    edges.back() = b;
    const std::vector<double> interior =
        random_sorted_interior(state, num_cells - 1, a, b);
    std::copy(interior.begin(), interior.end(), edges.begin() + 1);

    std::vector<double> y(num_cells, 0.0);
    std::vector<double> trace;
    for (int iter = 0; iter < kLloydMaxIters; ++iter) {
      double d = 0.0;
      for (int m = 0; m < num_cells; ++m) {
        const IntervalMoments mom =
            model.marginal_interval_moments(edges[m], edges[m + 1]);
        y[m] = mom.m0 > kEmptyCellThreshold
                   ? mom.m1 / mom.m0
                   : 0.5 * (edges[m] + edges[m + 1]);
        d += mom.m2 - 2.0 * y[m] * mom.m1 + y[m] * y[m] * mom.m0;
      }
      trace.push_back(d);
      double move = 0.0;
      for (int m = 1; m < num_cells; ++m) {
        const double nb = 0.5 * (y[m - 1] + y[m]);
        move = std::max(move, std::abs(nb - edges[m]));
        edges[m] = nb;
      }
      if (move < kLloydMoveTol) break;
    }
    // Final estimates and distortion for the converged boundaries.
    double d = 0.0;
    for (int m = 0; m < num_cells; ++m) {
      const IntervalMoments mom =
          model.marginal_interval_moments(edges[m], edges[m + 1]);
      y[m] = mom.m0 > kEmptyCellThreshold ? mom.m1 / mom.m0
                                          : 0.5 * (edges[m] + edges[m + 1]);
      d += mom.m2 - 2.0 * y[m] * mom.m1 + y[m] * y[m] * mom.m0;
    }
    trace.push_back(d);

    if (!have_best || d < best.sender_distortion) {
      best.level = DesignLevel::level0;
      best.boundaries = constant_rows(model, edges);
      best.perceived_estimates.values = y;
      best.sender_distortion = d;
      best.trace = std::move(trace);
      best.init_index = init;
      have_best = true;
    }
  }
  return best;
}

DesignResult design_level1(const DesignResult& nonstrategic,
                           const SourceModel& model) {
  if (nonstrategic.level != DesignLevel::level0)
    throw std::invalid_argument("design_level1: needs a level-0 design");
  const std::vector<double>& n = nonstrategic.boundaries.bounds.front();
  const int num_cells = nonstrategic.boundaries.num_cells;

  DesignResult out;
  out.level = DesignLevel::level1;
  out.boundaries.num_cells = num_cells;
  out.boundaries.bounds.assign(model.num_s_levels(),
                               std::vector<double>(num_cells + 1));
  for (int j = 0; j < model.num_s_levels(); ++j) {
    const double s = model.s_level(j);
    std::vector<double>& row = out.boundaries.bounds[j];
    row.front() = model.a_x();
    row.back() = model.b_x();
    for (int m = 1; m < num_cells; ++m)
      row[m] = std::clamp(n[m] - s, model.a_x(), model.b_x());
  }
  out.perceived_estimates = nonstrategic.perceived_estimates;
  out.sender_distortion =
      sender_distortion(model, out.boundaries, out.perceived_estimates, true);
  out.trace.push_back(out.sender_distortion);
  return out;
}

std::vector<std::vector<double>> level2_gradient(const SourceModel& model,
                                                 const BoundaryMatrix& q2,
                                                 const EstimateVector& y2) {
  const int interior = q2.num_cells - 1;
  const std::vector<double>& y = y2.values;
  std::vector<std::vector<double>> grad(model.num_s_levels(),
                                        std::vector<double>(interior, 0.0));
  for (int j = 0; j < model.num_s_levels(); ++j) {
    const double s = model.s_level(j);
    const double ws = model.s_weight(j);
    for (int m = 0; m < interior; ++m) {
      const double q = q2.bounds[j][m + 1];
      const double f = model.joint_density(q, s);
      const double lo = q + s - y[m];
      const double hi = q + s - y[m + 1];
      grad[j][m] = ws * f * (lo * lo - hi * hi);
    }
  }
  return grad;
}

DesignResult design_level2(const SourceModel& model, int num_cells,
                           const BoundaryMatrix& q0, const BoundaryMatrix& q1,
                           const TypePmf& p_prime, const DescentConfig& cfg,
                           EstimateUpdate update) {
  if (q0.num_cells != num_cells || q1.num_cells != num_cells)
    throw std::invalid_argument("design_level2: classifier sizes disagree");
  if (static_cast<int>(p_prime.probs.size()) != 2)
    throw std::invalid_argument("design_level2: perceived pmf must cover levels 0..1");
  if (cfg.num_inits < 1)
    throw std::invalid_argument("design_level2: num_inits must be >= 1");

  if (update == EstimateUpdate::fixed_once) {
    const std::vector<MixtureComponent> comps{{&q0, p_prime.probs[0]},
                                              {&q1, p_prime.probs[1]}};
    const MixtureEstimates fixed = perceived_estimates_mixture(model, comps);
    DesignResult out = multi_start(
        model, num_cells, q1, cfg, 0x1e7e12ull, DesignLevel::level2,
        [&](const BoundaryMatrix&) { return fixed; });
    return out;
  }

  // per_iteration: the perceived-population estimates are re-derived after
  // each update, with the current classifier standing in for the strategic
  // perceived component. The honest component's cell sums are constant, so
  // they are cached once.
  const int ns = model.num_s_levels();
  std::vector<double> fixed_num(num_cells, 0.0);
  std::vector<double> fixed_den(num_cells, 0.0);
  std::vector<double> fixed_lo(num_cells, 0.0);
  std::vector<double> fixed_hi(num_cells, 0.0);
  for (int m = 0; m < num_cells; ++m) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < ns; ++j) {
      const std::vector<double>& row = q0.bounds[j];
      const IntervalMoments mom = model.interval_moments(j, row[m], row[m + 1]);
      fixed_num[m] += model.s_weight(j) * mom.m1;
      fixed_den[m] += model.s_weight(j) * mom.m0;
      lo = std::min(lo, row[m]);
      hi = std::max(hi, row[m + 1]);
    }
    fixed_lo[m] = lo;
    fixed_hi[m] = hi;
  }
  const double w0 = p_prime.probs[0];
  const double w1 = p_prime.probs[1];
  auto estimate_fn = [&](const BoundaryMatrix& q) {
    MixtureEstimates out;
    out.estimates.values.assign(num_cells, 0.0);
    out.cell_mass.assign(num_cells, 0.0);
    for (int m = 0; m < num_cells; ++m) {
      double num = w0 * fixed_num[m];
      double den = w0 * fixed_den[m];
      double lo = w0 > 0.0 ? fixed_lo[m] : std::numeric_limits<double>::infinity();
      double hi = w0 > 0.0 ? fixed_hi[m] : -std::numeric_limits<double>::infinity();
      for (int j = 0; j < ns; ++j) {
        const std::vector<double>& row = q.bounds[j];
        const IntervalMoments mom =
            model.interval_moments(j, row[m], row[m + 1]);
        num += w1 * model.s_weight(j) * mom.m1;
        den += w1 * model.s_weight(j) * mom.m0;
        if (w1 > 0.0) {
          lo = std::min(lo, row[m]);
          hi = std::max(hi, row[m + 1]);
        }
      }
      out.cell_mass[m] = den;
      if (den < kEmptyCellThreshold) {
        out.empty_cells.push_back(m);
        out.estimates.values[m] = std::isfinite(lo) ? 0.5 * (lo + hi) : 0.0;
      } else {
        out.estimates.values[m] = num / den;
      }
    }
    return out;
  };
  return multi_start(model, num_cells, q1, cfg, 0x1e7e12ull,
                     DesignLevel::level2, estimate_fn);
}

DesignResult design_full_info(const SourceModel& model, int num_cells,
                              const DescentConfig& cfg) {
  if (cfg.num_inits < 1)
    throw std::invalid_argument("design_full_info: num_inits must be >= 1");
  // Deterministic start at the level-1 classifier (built from a Lloyd design
  // seeded independently of the descent inits).
  const DesignResult honest =
      lloyd_max(model, num_cells, mix_seed(cfg.seed, 0xf111ull));
  const DesignResult shifted = design_level1(honest, model);

  auto estimate_fn = [&](const BoundaryMatrix& q) {
    const std::vector<MixtureComponent> comps{{&q, 1.0}};
    return perceived_estimates_mixture(model, comps);
  };
  DesignResult out =
      multi_start(model, num_cells, shifted.boundaries, cfg, 0xf1f0ull,
                  DesignLevel::full_info, estimate_fn);
  return out;
}

}  // namespace strq
