#ifndef CRS_SIMILARITY_HPP
#define CRS_SIMILARITY_HPP

#include <cstdint>
#include <vector>

#include "crs/constrained.hpp"
#include "crs/event_model.hpp"
#include "crs/rng.hpp"

namespace crs {

enum class CensoringMode {
  administrative_only,      // subjects still at risk at tau are censored at tau
  independent_exponential,  // additional random censoring, exponential rate
};

struct TestConfig {
  std::vector<double> thresholds;  // margin per state, all > 0
  int n_boot = 1000;
  double level = 0.05;
  std::uint64_t seed = 0;
  CensoringMode censoring = CensoringMode::administrative_only;
  int n_threads = 1;  // <= 0 means hardware concurrency
};

struct SimilarityTestResult {
  std::vector<double> distances;       // |mle1_j - mle2_j|
  std::vector<double> p_values;        // empirical bootstrap p-values
  std::vector<double> boot_quantiles;  // order statistic at floor(B*level),
                                       // -inf when that index is 0
  std::vector<bool> per_state_reject;
  bool global_reject = false;  // intersection-union: all states reject
  IntensityVector mle1;
  IntensityVector mle2;
  int n_boot_used = 0;
};

// Event-history simulation: survival time with the all-cause hazard, then a
// multinomial draw for the cause. Zero total hazard (or survival past tau)
// yields administrative censoring at tau.
GroupSample simulate_group(const IntensityVector& alpha, std::int64_t n,
                           double tau, rng::Stream& stream);

// Independent exponential censoring on top of an existing sample; a subject
// whose censoring time comes first is recorded as censored at that time.
GroupSample apply_censoring(const GroupSample& sample, double censor_rate,
                            rng::Stream& stream);

// Exponential-censoring MLE: randomly censored subjects (outcome 0 before
// tau) divided by total exposure.
double estimate_censor_rate(const GroupSample& sample);

// Metadata the bootstrap needs from the original samples.
struct BootstrapMeta {
  std::int64_t n1 = 0;
  std::int64_t n2 = 0;
  double tau = 0.0;
  bool censoring = false;
  double censor_rate1 = 0.0;
  double censor_rate2 = 0.0;
};

struct StateTestResult {
  double p_value = 1.0;
  double boot_quantile = 0.0;
  std::vector<double> boot_stats;  // sorted replicate statistics
};

// Bootstrap test for a single state: generates B replicate pairs of samples
// from the selected (constrained or unconstrained) intensities and compares
// the observed distance against the replicate distribution. Replicate b
// draws from substream b of `base`, so the result does not depend on
// evaluation order.
StateTestResult state_test(const SufficientStats& stats1,
                           const SufficientStats& stats2,
                           const BootstrapMeta& meta, int state,
                           const TestConfig& config, rng::Stream base);

// Full similarity test: one bootstrap test per state, global decision by the
// intersection-union rule (no level adjustment). Deterministic for a given
// (samples, config) regardless of n_threads.
SimilarityTestResult run_similarity_test(const GroupSample& sample1,
                                         const GroupSample& sample2,
                                         const TestConfig& config);

}  // namespace crs

#endif
