#include "crs/crs.h"

#include <cstring>
#include <sstream>
#include <string>

#include "crs/io.hpp"
#include "crs/similarity.hpp"
#include "crs/simulation.hpp"

struct crs_dataset {
  crs::GroupSample group1;
  crs::GroupSample group2;
};

struct crs_result {
  crs::SimilarityTestResult result;
  crs::TestConfig config;
  double tau = 0.0;
};

namespace {

thread_local std::string g_last_error;

crs_status set_error(crs_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <typename Fn>
crs_status guarded(Fn&& fn) {
  try {
    fn();
    return CRS_OK;
  } catch (const crs::ParseError& e) {
    return set_error(CRS_ERR_PARSE, e.what());
  } catch (const std::invalid_argument& e) {
    return set_error(CRS_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return set_error(CRS_ERR_INTERNAL, e.what());
  }
}

crs::TestConfig to_cpp_config(const crs_test_config& c) {
  crs::TestConfig config;
  config.thresholds.assign(c.thresholds, c.thresholds + c.num_states);
  config.n_boot = c.n_boot;
  config.level = c.level;
  config.seed = c.seed;
  config.censoring = c.censoring != 0
                         ? crs::CensoringMode::independent_exponential
                         : crs::CensoringMode::administrative_only;
  config.n_threads = c.n_threads;
  return config;
}

void apply_sim_overrides(crs::ScenarioSpec& spec, const crs_sim_config* c) {
  if (c == nullptr) return;
  if (c->n_sim > 0) spec.n_sim = c->n_sim;
  if (c->n_boot > 0) spec.config_template.n_boot = c->n_boot;
  if (c->level > 0.0) spec.config_template.level = c->level;
  spec.config_template.n_threads = c->n_threads;
}

}  // namespace

extern "C" {

const char* crs_version(void) { return crs::kLibraryVersion; }

const char* crs_last_error(void) { return g_last_error.c_str(); }

crs_status crs_dataset_load_csv(const char* path, double tau_override,
                                crs_dataset** out) {
  if (path == nullptr || out == nullptr)
    return set_error(CRS_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    auto ds = new crs_dataset;
    try {
      auto [g1, g2] = crs::parse_events_file(path, tau_override);
      ds->group1 = std::move(g1);
      ds->group2 = std::move(g2);
    } catch (...) {
      delete ds;
      throw;
    }
    *out = ds;
  });
}

crs_status crs_dataset_load_string(const char* text, double tau_override,
                                   crs_dataset** out) {
  if (text == nullptr || out == nullptr)
    return set_error(CRS_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    std::istringstream in(text);
    auto ds = new crs_dataset;
    try {
      auto [g1, g2] = crs::parse_events(in, tau_override);
      ds->group1 = std::move(g1);
      ds->group2 = std::move(g2);
    } catch (...) {
      delete ds;
      throw;
    }
    *out = ds;
  });
}

int crs_dataset_num_states(const crs_dataset* ds) {
  return ds == nullptr ? 0 : ds->group1.num_states;
}

double crs_dataset_tau(const crs_dataset* ds) {
  return ds == nullptr ? 0.0 : ds->group1.tau;
}

long crs_dataset_group_size(const crs_dataset* ds, int group) {
  if (ds == nullptr) return 0;
  const crs::GroupSample& g = group == 2 ? ds->group2 : ds->group1;
  return static_cast<long>(g.histories.size());
}

void crs_dataset_free(crs_dataset* ds) { delete ds; }

crs_status crs_similarity_test(const crs_dataset* ds,
                               const crs_test_config* config,
                               crs_result** out) {
  if (ds == nullptr || config == nullptr || config->thresholds == nullptr ||
      out == nullptr)
    return set_error(CRS_ERR_INVALID_ARGUMENT, "null argument");
  if (config->num_states != ds->group1.num_states)
    return set_error(CRS_ERR_INVALID_ARGUMENT,
                     "config state count does not match dataset");
  return guarded([&] {
    auto r = new crs_result;
    try {
      r->config = to_cpp_config(*config);
      r->tau = ds->group1.tau;
      r->result = crs::run_similarity_test(ds->group1, ds->group2, r->config);
    } catch (...) {
      delete r;
      throw;
    }
    *out = r;
  });
}

crs_status crs_result_to_json(const crs_result* result, char** json_out) {
  if (result == nullptr || json_out == nullptr)
    return set_error(CRS_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *json_out =
        dup_string(crs::result_to_json(result->result, result->config, result->tau));
  });
}

int crs_result_num_states(const crs_result* result) {
  return result == nullptr ? 0 : static_cast<int>(result->result.distances.size());
}

int crs_result_global_reject(const crs_result* result) {
  return result != nullptr && result->result.global_reject ? 1 : 0;
}

int crs_result_state_reject(const crs_result* result, int state) {
  if (result == nullptr || state < 1 ||
      state > crs_result_num_states(result))
    return 0;
  return result->result.per_state_reject[static_cast<std::size_t>(state - 1)] ? 1 : 0;
}

double crs_result_p_value(const crs_result* result, int state) {
  if (result == nullptr || state < 1 || state > crs_result_num_states(result))
    return -1.0;
  return result->result.p_values[static_cast<std::size_t>(state - 1)];
}

double crs_result_distance(const crs_result* result, int state) {
  if (result == nullptr || state < 1 || state > crs_result_num_states(result))
    return -1.0;
  return result->result.distances[static_cast<std::size_t>(state - 1)];
}

void crs_result_free(crs_result* result) { delete result; }

crs_status crs_list_scenarios(char** names_out) {
  if (names_out == nullptr)
    return set_error(CRS_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    std::string names;
    for (const auto& s : crs::builtin_scenarios()) {
      if (!names.empty()) names += ',';
      names += s.name;
    }
    *names_out = dup_string(names);
  });
}

crs_status crs_run_builtin_scenario(const char* name,
                                    const crs_sim_config* config,
                                    char** csv_out) {
  if (name == nullptr || csv_out == nullptr)
    return set_error(CRS_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    crs::ScenarioSpec spec = crs::find_builtin_scenario(name);
    apply_sim_overrides(spec, config);
    const crs::SimulationReport report =
        crs::run_scenario(spec, config != nullptr ? config->seed : 0);
    *csv_out = dup_string(crs::report_to_csv(report, spec));
  });
}

crs_status crs_run_builtin_curve(const char* name, const char* axis,
                                 int fixed_index, const crs_sim_config* config,
                                 char** csv_out) {
  if (name == nullptr || axis == nullptr || csv_out == nullptr)
    return set_error(CRS_ERR_INVALID_ARGUMENT, "null argument");
  crs::CurveAxis curve_axis;
  if (std::strcmp(axis, "n") == 0)
    curve_axis = crs::CurveAxis::sample_size;
  else if (std::strcmp(axis, "delta") == 0)
    curve_axis = crs::CurveAxis::delta;
  else
    return set_error(CRS_ERR_INVALID_ARGUMENT, "axis must be \"n\" or \"delta\"");
  if (fixed_index < 0)
    return set_error(CRS_ERR_INVALID_ARGUMENT, "fixed_index must be >= 0");
  return guarded([&] {
    crs::ScenarioSpec spec = crs::find_builtin_scenario(name);
    apply_sim_overrides(spec, config);
    const crs::SimulationReport report =
        crs::rejection_curve(spec, curve_axis, static_cast<std::size_t>(fixed_index),
                             config != nullptr ? config->seed : 0);
    *csv_out = dup_string(crs::report_to_csv(report, spec));
  });
}

void crs_string_free(char* s) { delete[] s; }

}  // extern "C"
