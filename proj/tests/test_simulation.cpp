#include <doctest.h>

#include <cmath>
#include <sstream>

#include "crs/io.hpp"
#include "crs/simulation.hpp"

using namespace crs;

TEST_CASE("built-in scenarios match the study design") {
  const auto scenarios = builtin_scenarios();
  REQUIRE(scenarios.size() == 4);

  const ScenarioSpec& s1 = scenarios[0];
  CHECK(s1.alpha1.rates == std::vector<double>{0.001, 0.0011, 0.0004});
  CHECK(s1.alpha2.rates == std::vector<double>{0.0008, 0.0017, 0.0009});
  CHECK(s1.tau == 90.0);
  CHECK(s1.sample_sizes.size() == 6);
  CHECK(s1.sample_sizes.front() == std::pair<std::int64_t, std::int64_t>{200, 200});
  CHECK(s1.sample_sizes.back() == std::pair<std::int64_t, std::int64_t>{500, 500});

  // true distances of the application-derived intensities
  for (std::size_t j = 0; j < 3; ++j) {
    const double d = std::abs(s1.alpha1[j] - s1.alpha2[j]);
    CHECK(d == doctest::Approx(std::vector<double>{0.0002, 0.0006, 0.0005}[j]));
  }

  // scenario 2 keeps states 1 and 3, scenario 3 keeps states 1 and 2
  CHECK(scenarios[1].alpha1.rates == std::vector<double>{0.001, 0.0004});
  CHECK(scenarios[1].alpha2.rates == std::vector<double>{0.0008, 0.0009});
  CHECK(scenarios[2].alpha1.rates == std::vector<double>{0.001, 0.0011});
  CHECK(scenarios[2].alpha2.rates == std::vector<double>{0.0008, 0.0017});

  // scenario 4 uses identical models
  CHECK(scenarios[3].alpha1.rates == scenarios[3].alpha2.rates);
  for (std::size_t j = 0; j < 3; ++j)
    CHECK(scenarios[3].alpha1[j] == scenarios[3].alpha2[j]);

  CHECK_THROWS_AS(find_builtin_scenario("scenario9"), std::invalid_argument);
}

namespace {

ScenarioSpec tiny_scenario() {
  ScenarioSpec spec = find_builtin_scenario("scenario4");
  spec.sample_sizes = {{200, 200}};
  spec.delta_grid = {{0.0015, 0.0015, 0.0015}};
  spec.n_sim = 30;
  spec.config_template.n_boot = 80;
  return spec;
}

}  // namespace

TEST_CASE("run_scenario produces consistent rates and standard errors") {
  const ScenarioSpec spec = tiny_scenario();
  const SimulationReport report = run_scenario(spec, 5);
  REQUIRE(report.cells.size() == 1);
  const CellReport& cell = report.cells.front();
  CHECK(cell.global_rate >= 0.0);
  CHECK(cell.global_rate <= 1.0);
  CHECK(cell.state_rates.size() == 3);
  CHECK(cell.global_se ==
        doctest::Approx(std::sqrt(cell.global_rate * (1.0 - cell.global_rate) /
                                  spec.n_sim)));
  // identical models with a wide margin: power should be visibly high even
  // at this tiny repetition count
  CHECK(cell.global_rate > 0.5);
}

TEST_CASE("simulation reports are reproducible across thread counts") {
  ScenarioSpec spec = tiny_scenario();
  spec.config_template.n_threads = 1;
  const SimulationReport serial = run_scenario(spec, 123);
  spec.config_template.n_threads = 4;
  const SimulationReport parallel = run_scenario(spec, 123);
  REQUIRE(serial.cells.size() == parallel.cells.size());
  CHECK(serial.cells[0].global_rate == parallel.cells[0].global_rate);
  CHECK(serial.cells[0].state_rates == parallel.cells[0].state_rates);

  const SimulationReport again = run_scenario(spec, 123);
  CHECK(report_to_csv(again, spec) == report_to_csv(serial, spec));
}

TEST_CASE("rejection curves are slices of the full grid") {
  ScenarioSpec spec = find_builtin_scenario("scenario4");
  spec.sample_sizes = {{200, 200}, {300, 300}};
  spec.delta_grid = {{0.001, 0.001, 0.001}, {0.0015, 0.0015, 0.0015}};
  spec.n_sim = 12;
  spec.config_template.n_boot = 60;

  const SimulationReport full = run_scenario(spec, 77);
  const SimulationReport curve =
      rejection_curve(spec, CurveAxis::delta, /*fixed n index*/ 1, 77);
  REQUIRE(curve.cells.size() == 2);
  for (const CellReport& cell : curve.cells) {
    bool found = false;
    for (const CellReport& ref : full.cells)
      if (ref.n_index == cell.n_index && ref.delta_index == cell.delta_index) {
        CHECK(ref.global_rate == cell.global_rate);
        CHECK(ref.state_rates == cell.state_rates);
        found = true;
      }
    CHECK(found);
  }

  CHECK_THROWS_AS(rejection_curve(spec, CurveAxis::delta, 5, 77),
                  std::invalid_argument);
}

TEST_CASE("report CSV schema") {
  const ScenarioSpec spec = tiny_scenario();
  const SimulationReport report = run_scenario(spec, 5);
  const std::string csv = report_to_csv(report, spec);
  std::istringstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header == "scenario,n1,n2,delta1,delta2,delta3,state,rate,se,n_sim");
  std::string line;
  int rows = 0;
  bool saw_global = false;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(line.rfind("scenario4,200,200,0.0015,0.0015,0.0015,", 0) == 0);
    saw_global = saw_global || line.find(",global,") != std::string::npos;
  }
  CHECK(rows == 4);  // three states plus the global row
  CHECK(saw_global);
}
