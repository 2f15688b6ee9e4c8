#include "crs/simulation.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace crs {

namespace {

std::uint64_t name_key(const std::string& name) {
  std::uint64_t h = 0xCBF29CE484222325ULL;  // FNV-1a
  for (unsigned char c : name) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

double binomial_se(double rate, int n) {
  return std::sqrt(rate * (1.0 - rate) / static_cast<double>(n));
}

void validate_spec(const ScenarioSpec& spec) {
  const std::size_t k = spec.alpha1.size();
  if (k == 0 || spec.alpha2.size() != k)
    throw std::invalid_argument("scenario intensity vectors are inconsistent");
  for (const auto& deltas : spec.delta_grid)
    if (deltas.size() != k)
      throw std::invalid_argument("threshold vector length does not match states");
  if (spec.sample_sizes.empty() || spec.delta_grid.empty())
    throw std::invalid_argument("scenario grid is empty");
  if (spec.n_sim < 1) throw std::invalid_argument("n_sim must be >= 1");
  if (!(spec.tau > 0.0)) throw std::invalid_argument("tau must be positive");
}

SimulationReport run_cells(const ScenarioSpec& spec, std::uint64_t master_seed,
                           const std::vector<std::size_t>& n_indices,
                           const std::vector<std::size_t>& d_indices) {
  validate_spec(spec);
  const std::size_t k = spec.alpha1.size();
  const auto n_sim = static_cast<std::size_t>(spec.n_sim);
  const std::uint64_t scenario_key =
      rng::derive(master_seed, name_key(spec.name));

  struct Cell {
    std::size_t n_index;
    std::size_t delta_index;
  };
  std::vector<Cell> cells;
  for (std::size_t ni : n_indices)
    for (std::size_t di : d_indices) cells.push_back({ni, di});

  // Per repetition: bit 0 = global rejection, bit j = state j rejection.
  std::vector<unsigned> outcomes(cells.size() * n_sim, 0);

  auto run_rep = [&](std::size_t task) {
    const Cell& cell = cells[task / n_sim];
    const std::size_t rep = task % n_sim;
    const auto& [n1, n2] = spec.sample_sizes[cell.n_index];
    std::uint64_t key = rng::derive(scenario_key, cell.n_index);
    key = rng::derive(key, cell.delta_index);
    key = rng::derive(key, rep);
    rng::Stream data1(rng::derive(key, 0));
    rng::Stream data2(rng::derive(key, 1));
    const GroupSample g1 = simulate_group(spec.alpha1, n1, spec.tau, data1);
    const GroupSample g2 = simulate_group(spec.alpha2, n2, spec.tau, data2);

    TestConfig config = spec.config_template;
    config.thresholds = spec.delta_grid[cell.delta_index];
    config.seed = rng::derive(key, 2);
    config.n_threads = 1;  // parallelism lives at the repetition level
    const SimilarityTestResult r = run_similarity_test(g1, g2, config);
    unsigned bits = r.global_reject ? 1u : 0u;
    for (std::size_t j = 0; j < k; ++j)
      if (r.per_state_reject[j]) bits |= 1u << (j + 1);
    outcomes[task] = bits;
  };

  const std::size_t n_tasks = cells.size() * n_sim;
  int n_threads = spec.config_template.n_threads;
  if (n_threads <= 0)
    n_threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (n_threads <= 1) {
    for (std::size_t t = 0; t < n_tasks; ++t) run_rep(t);
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (;;) {
        const std::size_t t = next.fetch_add(1);
        if (t >= n_tasks) return;
        run_rep(t);
      }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  SimulationReport report;
  report.scenario = spec.name;
  report.n_sim = spec.n_sim;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    CellReport cr;
    cr.n_index = cells[c].n_index;
    cr.delta_index = cells[c].delta_index;
    std::size_t global = 0;
    std::vector<std::size_t> per_state(k, 0);
    for (std::size_t rep = 0; rep < n_sim; ++rep) {
      const unsigned bits = outcomes[c * n_sim + rep];
      global += bits & 1u;
      for (std::size_t j = 0; j < k; ++j)
        per_state[j] += (bits >> (j + 1)) & 1u;
    }
    cr.global_rate = static_cast<double>(global) / static_cast<double>(n_sim);
    cr.global_se = binomial_se(cr.global_rate, spec.n_sim);
    for (std::size_t j = 0; j < k; ++j) {
      const double rate =
          static_cast<double>(per_state[j]) / static_cast<double>(n_sim);
      cr.state_rates.push_back(rate);
      cr.state_ses.push_back(binomial_se(rate, spec.n_sim));
    }
    report.cells.push_back(std::move(cr));
  }
  return report;
}

std::vector<std::size_t> all_indices(std::size_t n) {
  std::vector<std::size_t> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = i;
  return out;
}

}  // namespace

std::vector<ScenarioSpec> builtin_scenarios() {
  TestConfig base;
  base.n_boot = 500;
  base.level = 0.05;
  base.censoring = CensoringMode::administrative_only;

  const std::vector<std::pair<std::int64_t, std::int64_t>> sizes = {
      {200, 200}, {250, 300}, {300, 300}, {250, 450}, {300, 500}, {500, 500}};

  std::vector<ScenarioSpec> scenarios(4);

  scenarios[0].name = "scenario1";
  scenarios[0].alpha1.rates = {0.001, 0.0011, 0.0004};
  scenarios[0].alpha2.rates = {0.0008, 0.0017, 0.0009};
  scenarios[0].delta_grid = {{0.00015, 0.0002, 0.0002},
                             {0.0002, 0.0006, 0.0005},
                             {0.001, 0.001, 0.001},
                             {0.001, 0.0015, 0.001},
                             {0.0015, 0.0015, 0.0015}};

  // States 1 and 3 of the full model.
  scenarios[1].name = "scenario2";
  scenarios[1].alpha1.rates = {0.001, 0.0004};
  scenarios[1].alpha2.rates = {0.0008, 0.0009};
  scenarios[1].delta_grid = {{0.0002, 0.0005},
                             {0.001, 0.001},
                             {0.001, 0.0015},
                             {0.0015, 0.0015}};

  // States 1 and 2 of the full model.
  scenarios[2].name = "scenario3";
  scenarios[2].alpha1.rates = {0.001, 0.0011};
  scenarios[2].alpha2.rates = {0.0008, 0.0017};
  scenarios[2].delta_grid = {{0.0002, 0.0006},
                             {0.001, 0.001},
                             {0.001, 0.0015},
                             {0.0015, 0.0015}};

  // Identical models; every true difference is zero.
  scenarios[3].name = "scenario4";
  scenarios[3].alpha1.rates = {0.001, 0.0011, 0.0004};
  scenarios[3].alpha2.rates = scenarios[3].alpha1.rates;
  scenarios[3].delta_grid = {{0.001, 0.001, 0.001},
                             {0.001, 0.0015, 0.001},
                             {0.0015, 0.0015, 0.0015}};

  for (auto& s : scenarios) {
    s.sample_sizes = sizes;
    s.tau = 90.0;
    s.n_sim = 1000;
    s.config_template = base;
  }
  return scenarios;
}

ScenarioSpec find_builtin_scenario(const std::string& name) {
  for (auto& s : builtin_scenarios())
    if (s.name == name) return s;
  throw std::invalid_argument("unknown scenario: " + name);
}

SimulationReport run_scenario(const ScenarioSpec& spec,
                              std::uint64_t master_seed) {
  return run_cells(spec, master_seed, all_indices(spec.sample_sizes.size()),
                   all_indices(spec.delta_grid.size()));
}

SimulationReport rejection_curve(const ScenarioSpec& spec, CurveAxis axis,
                                 std::size_t fixed_index,
                                 std::uint64_t master_seed) {
  if (axis == CurveAxis::sample_size) {
    if (fixed_index >= spec.delta_grid.size())
      throw std::invalid_argument("fixed delta index out of range");
    return run_cells(spec, master_seed, all_indices(spec.sample_sizes.size()),
                     {fixed_index});
  }
  if (fixed_index >= spec.sample_sizes.size())
    throw std::invalid_argument("fixed sample-size index out of range");
  return run_cells(spec, master_seed, {fixed_index},
                   all_indices(spec.delta_grid.size()));
}

}  // namespace crs
