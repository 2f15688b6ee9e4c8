/* C API for the competing-risks similarity test library.
 *
 * All functions returning crs_status report failure details through
 * crs_last_error(), which is thread-local. Strings returned through
 * char** out-parameters are owned by the caller and released with
 * crs_string_free(); handles are released with their _free function.
 */
#ifndef CRS_CRS_H
#define CRS_CRS_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  CRS_OK = 0,
  CRS_ERR_INVALID_ARGUMENT = 1,
  CRS_ERR_PARSE = 2,
  CRS_ERR_IO = 3,
  CRS_ERR_INTERNAL = 4
} crs_status;

typedef struct crs_dataset crs_dataset; /* two group samples + tau + k */
typedef struct crs_result crs_result;   /* one similarity test outcome */

const char* crs_version(void);
const char* crs_last_error(void);

/* tau_override <= 0 means "use the #tau= directive from the file". */
crs_status crs_dataset_load_csv(const char* path, double tau_override,
                                crs_dataset** out);
crs_status crs_dataset_load_string(const char* text, double tau_override,
                                   crs_dataset** out);
int crs_dataset_num_states(const crs_dataset* ds);
double crs_dataset_tau(const crs_dataset* ds);
long crs_dataset_group_size(const crs_dataset* ds, int group /* 1 or 2 */);
void crs_dataset_free(crs_dataset* ds);

typedef struct {
  const double* thresholds; /* one margin per state, all > 0 */
  int num_states;
  int n_boot;
  double level;
  unsigned long long seed;
  int censoring; /* 0 = administrative only, 1 = independent exponential */
  int n_threads; /* <= 0 = hardware concurrency */
} crs_test_config;

crs_status crs_similarity_test(const crs_dataset* ds,
                               const crs_test_config* config,
                               crs_result** out);
crs_status crs_result_to_json(const crs_result* result, char** json_out);
int crs_result_num_states(const crs_result* result);
int crs_result_global_reject(const crs_result* result);
int crs_result_state_reject(const crs_result* result, int state /* 1-based */);
double crs_result_p_value(const crs_result* result, int state);
double crs_result_distance(const crs_result* result, int state);
void crs_result_free(crs_result* result);

typedef struct {
  int n_sim;    /* <= 0 keeps the scenario default */
  int n_boot;   /* <= 0 keeps the scenario default */
  double level; /* <= 0 keeps the scenario default */
  unsigned long long seed;
  int n_threads;
} crs_sim_config;

/* Comma-separated names of the built-in study scenarios. */
crs_status crs_list_scenarios(char** names_out);

/* Full (sample size x threshold) grid as CSV. */
crs_status crs_run_builtin_scenario(const char* name,
                                    const crs_sim_config* config,
                                    char** csv_out);

/* One-axis rejection curve; axis is "delta" or "n", fixed_index indexes the
 * other coordinate within the scenario grid. */
crs_status crs_run_builtin_curve(const char* name, const char* axis,
                                 int fixed_index, const crs_sim_config* config,
                                 char** csv_out);

void crs_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif
