// Command-line front-end for the competing-risks similarity test. Talks to
// the library exclusively through the C API in crs/crs.h.

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "crs/crs.h"

namespace {

constexpr int kExitReject = 0;     // test ran, similarity claimed
constexpr int kExitNoReject = 1;   // test ran, null not rejected
constexpr int kExitUsageError = 2; // bad usage, parse error, bad input

struct StringGuard {
  char* s = nullptr;
  ~StringGuard() { crs_string_free(s); }
};

int fail(const std::string& message) {
  std::cerr << "error: " << message << "\n";
  return kExitUsageError;
}

int emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) return fail("cannot write " + out_path);
  out << text;
  return 0;
}

// Shortest representation that round-trips the exact double.
std::string json_number(double v) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return ec == std::errc() ? std::string(buf, end) : std::string("nan");
}

struct TestOptions {
  std::string input;
  double tau = 0.0;
  std::vector<double> deltas;
  std::vector<double> delta_grid;
  int n_boot = 1000;
  double alpha = 0.05;
  unsigned long long seed = 0;
  std::string censoring = "none";
  int threads = 1;
  std::string out_path;
  std::string format = "json";
};

int run_single_test(const crs_dataset* ds, const crs_test_config& config,
                    const TestOptions& opt) {
  crs_result* result = nullptr;
  if (crs_similarity_test(ds, &config, &result) != CRS_OK)
    return fail(crs_last_error());
  const int k = crs_result_num_states(result);
  std::string text;
  if (opt.format == "json") {
    StringGuard json;
    if (crs_result_to_json(result, &json.s) != CRS_OK) {
      crs_result_free(result);
      return fail(crs_last_error());
    }
    text = json.s;
  } else {
    std::ostringstream csv;
    csv << "state,delta,distance,p_value,reject\n";
    for (int j = 1; j <= k; ++j)
      csv << j << ',' << json_number(config.thresholds[j - 1]) << ','
          << json_number(crs_result_distance(result, j)) << ','
          << json_number(crs_result_p_value(result, j)) << ','
          << crs_result_state_reject(result, j) << "\n";
    csv << "global,,,," << crs_result_global_reject(result) << "\n";
    text = csv.str();
  }
  const bool reject = crs_result_global_reject(result) != 0;
  crs_result_free(result);
  if (emit(text, opt.out_path) != 0) return kExitUsageError;
  return reject ? kExitReject : kExitNoReject;
}

int run_delta_grid(const crs_dataset* ds, crs_test_config config,
                   const TestOptions& opt) {
  const int k = crs_dataset_num_states(ds);
  std::vector<std::vector<double>> p_values(static_cast<std::size_t>(k));
  std::vector<std::vector<int>> rejects(static_cast<std::size_t>(k));
  bool any_global_reject = false;
  for (double delta : opt.delta_grid) {
    const std::vector<double> thresholds(static_cast<std::size_t>(k), delta);
    config.thresholds = thresholds.data();
    crs_result* result = nullptr;
    if (crs_similarity_test(ds, &config, &result) != CRS_OK)
      return fail(crs_last_error());
    for (int j = 1; j <= k; ++j) {
      p_values[static_cast<std::size_t>(j - 1)].push_back(
          crs_result_p_value(result, j));
      rejects[static_cast<std::size_t>(j - 1)].push_back(
          crs_result_state_reject(result, j));
    }
    any_global_reject = any_global_reject || crs_result_global_reject(result);
    crs_result_free(result);
  }

  std::ostringstream out;
  if (opt.format == "json") {
    out << "{\n  \"thresholds\": [";
    for (std::size_t i = 0; i < opt.delta_grid.size(); ++i)
      out << (i ? ", " : "") << json_number(opt.delta_grid[i]);
    out << "],\n  \"p_values\": {\n";
    for (int j = 0; j < k; ++j) {
      out << "    \"state" << (j + 1) << "\": [";
      for (std::size_t i = 0; i < opt.delta_grid.size(); ++i)
        out << (i ? ", " : "") << json_number(p_values[static_cast<std::size_t>(j)][i]);
      out << (j + 1 < k ? "],\n" : "]\n");
    }
    out << "  }\n}\n";
  } else {
    out << "state";
    for (double delta : opt.delta_grid) out << ',' << json_number(delta);
    out << "\n";
    for (int j = 0; j < k; ++j) {
      out << (j + 1);
      for (std::size_t i = 0; i < opt.delta_grid.size(); ++i)
        out << ',' << json_number(p_values[static_cast<std::size_t>(j)][i]);
      out << "\n";
    }
  }
  if (emit(out.str(), opt.out_path) != 0) return kExitUsageError;
  return any_global_reject ? kExitReject : kExitNoReject;
}

int cmd_test(const TestOptions& opt) {
  crs_dataset* ds = nullptr;
  if (crs_dataset_load_csv(opt.input.c_str(), opt.tau, &ds) != CRS_OK)
    return fail(crs_last_error());
  const int k = crs_dataset_num_states(ds);

  crs_test_config config{};
  config.num_states = k;
  config.n_boot = opt.n_boot;
  config.level = opt.alpha;
  config.seed = opt.seed;
  config.censoring = opt.censoring == "exp" ? 1 : 0;
  config.n_threads = opt.threads;

  int code;
  if (!opt.delta_grid.empty()) {
    code = run_delta_grid(ds, config, opt);
  } else {
    std::vector<double> thresholds = opt.deltas;
    if (thresholds.size() == 1 && k > 1)
      thresholds.assign(static_cast<std::size_t>(k), thresholds[0]);
    if (thresholds.size() != static_cast<std::size_t>(k)) {
      crs_dataset_free(ds);
      return fail("expected " + std::to_string(k) +
                  " --delta values (one per state)");
    }
    config.thresholds = thresholds.data();
    code = run_single_test(ds, config, opt);
  }
  crs_dataset_free(ds);
  return code;
}

struct SimulateOptions {
  std::string scenario;
  int n_sim = 0;
  int n_boot = 0;
  double alpha = 0.0;
  unsigned long long seed = 0;
  int threads = 1;
  std::string curve;  // "", "delta" or "n"
  int fixed_index = 0;
  std::string out_path;
};

int cmd_simulate(const SimulateOptions& opt) {
  std::string name = opt.scenario;
  if (name.rfind("builtin:", 0) == 0) name = name.substr(8);

  crs_sim_config config{};
  config.n_sim = opt.n_sim;
  config.n_boot = opt.n_boot;
  config.level = opt.alpha;
  config.seed = opt.seed;
  config.n_threads = opt.threads;

  StringGuard csv;
  crs_status status;
  if (opt.curve.empty())
    status = crs_run_builtin_scenario(name.c_str(), &config, &csv.s);
  else
    status = crs_run_builtin_curve(name.c_str(), opt.curve.c_str(),
                                   opt.fixed_index, &config, &csv.s);
  if (status != CRS_OK) return fail(crs_last_error());
  if (emit(csv.s, opt.out_path) != 0) return kExitUsageError;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Similarity testing for two competing-risks models with "
               "constant transition intensities"};
  app.require_subcommand(1);

  TestOptions test_opt;
  auto* test = app.add_subcommand(
      "test", "Run the bootstrap similarity test on an event CSV");
  test->add_option("input", test_opt.input, "Event CSV file")->required();
  test->add_option("--tau", test_opt.tau,
                   "Observation window; overrides the #tau= directive");
  test->add_option("--delta", test_opt.deltas,
                   "Similarity threshold, repeat once per state (a single "
                   "value applies to every state)");
  test->add_option("--delta-grid", test_opt.delta_grid,
                   "Run the test for several scalar thresholds and emit a "
                   "p-value matrix")
      ->delimiter(',');
  test->add_option("--nboot", test_opt.n_boot, "Bootstrap replicates");
  test->add_option("--alpha", test_opt.alpha, "Significance level");
  test->add_option("--seed", test_opt.seed, "RNG seed")->envname("CRS_SEED");
  test->add_option("--censoring", test_opt.censoring, "none or exp")
      ->check(CLI::IsMember({"none", "exp"}));
  test->add_option("--threads", test_opt.threads, "Worker threads (0 = auto)");
  test->add_option("--out", test_opt.out_path, "Output file (default stdout)");
  test->add_option("--format", test_opt.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));

  SimulateOptions sim_opt;
  auto* simulate = app.add_subcommand(
      "simulate", "Run a built-in Monte Carlo study scenario");
  simulate->add_option("scenario", sim_opt.scenario,
                       "Scenario name, e.g. scenario1 or builtin:scenario1")
      ->required();
  simulate->add_option("--nsim", sim_opt.n_sim, "Monte Carlo repetitions");
  simulate->add_option("--nboot", sim_opt.n_boot, "Bootstrap replicates");
  simulate->add_option("--alpha", sim_opt.alpha, "Significance level");
  simulate->add_option("--seed", sim_opt.seed, "Master seed")->envname("CRS_SEED");
  simulate->add_option("--threads", sim_opt.threads, "Worker threads (0 = auto)");
  simulate->add_option("--curve", sim_opt.curve,
                       "Emit a one-axis rejection curve instead of the grid")
      ->check(CLI::IsMember({"delta", "n"}));
  simulate->add_option("--fixed-index", sim_opt.fixed_index,
                       "Index of the fixed coordinate for --curve");
  simulate->add_option("--out", sim_opt.out_path, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsageError;
  }

  if (test->parsed()) {
    if (!test_opt.delta_grid.empty() && !test_opt.deltas.empty())
      return fail("--delta and --delta-grid are mutually exclusive");
    for (double d : test_opt.deltas)
      if (!(d > 0.0)) return fail("--delta values must be positive");
    for (double d : test_opt.delta_grid)
      if (!(d > 0.0)) return fail("--delta-grid values must be positive");
    if (test_opt.deltas.empty() && test_opt.delta_grid.empty())
      return fail("provide --delta (per state) or --delta-grid");
    return cmd_test(test_opt);
  }
  return cmd_simulate(sim_opt);
}
