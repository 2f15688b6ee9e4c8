#ifndef CRS_SIMULATION_HPP
#define CRS_SIMULATION_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "crs/similarity.hpp"

namespace crs {

// One Monte Carlo study design: a pair of true models, a grid of sample
// sizes and similarity thresholds, and the repetition budget.
struct ScenarioSpec {
  std::string name;
  IntensityVector alpha1;
  IntensityVector alpha2;
  std::vector<std::pair<std::int64_t, std::int64_t>> sample_sizes;
  double tau = 90.0;
  std::vector<std::vector<double>> delta_grid;  // one threshold vector per row
  int n_sim = 1000;
  TestConfig config_template;  // thresholds field is ignored
};

struct CellReport {
  std::size_t n_index = 0;      // into ScenarioSpec::sample_sizes
  std::size_t delta_index = 0;  // into ScenarioSpec::delta_grid
  double global_rate = 0.0;
  double global_se = 0.0;  // binomial Monte Carlo standard error
  std::vector<double> state_rates;
  std::vector<double> state_ses;
};

struct SimulationReport {
  std::string scenario;
  int n_sim = 0;
  std::vector<CellReport> cells;  // ordered by (n_index, delta_index)
};

// The four built-in study scenarios: the application-derived intensities
// over 90 days, the two two-state restrictions, and the identical-models
// case. Sample sizes and threshold grids match the study tables.
std::vector<ScenarioSpec> builtin_scenarios();

ScenarioSpec find_builtin_scenario(const std::string& name);

// Runs every (sample size, threshold) cell of the grid. Repetition r of a
// cell derives its random streams from (master_seed, scenario name,
// n_index, delta_index, r), so the report is reproducible for any thread
// count and any subset of cells.
SimulationReport run_scenario(const ScenarioSpec& spec,
                              std::uint64_t master_seed);

enum class CurveAxis { sample_size, delta };

// Rejection-rate curve along one grid axis with the other coordinate fixed
// (by its index in the spec). Cell seeds match run_scenario, so the curve
// is a slice of the full grid.
SimulationReport rejection_curve(const ScenarioSpec& spec, CurveAxis axis,
                                 std::size_t fixed_index,
                                 std::uint64_t master_seed);

}  // namespace crs

#endif
