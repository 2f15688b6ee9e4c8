#ifndef CRS_EVENT_MODEL_HPP
#define CRS_EVENT_MODEL_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace crs {

// One subject's observed exit from the initial state: either the first
// transition into a competing state (outcome >= 1) or censoring
// (outcome == 0) at exit_time.
struct EventHistory {
  std::string subject_id;
  double exit_time = 0.0;  // in (0, tau]
  int outcome = 0;         // 0 = censored, j >= 1 = first event of type j
};

struct GroupSample {
  int group_label = 1;  // 1 or 2
  std::vector<EventHistory> histories;
  double tau = 0.0;    // end of the observation window, same unit as times
  int num_states = 0;  // number of competing states k
};

// Per-group sufficient statistics: event counts per state and total
// person-time at risk in the initial state.
struct SufficientStats {
  std::vector<std::int64_t> counts;  // counts[j-1] = events of type j
  double exposure = 0.0;             // total time at risk
  std::int64_t n_subjects = 0;
  double tau = 0.0;
};

// Constant cause-specific transition intensities (alpha_01, ..., alpha_0k).
// Units are the reciprocal of whatever time unit the data uses.
struct IntensityVector {
  std::vector<double> rates;

  std::size_t size() const { return rates.size(); }
  double operator[](std::size_t j) const { return rates[j]; }
  double& operator[](std::size_t j) { return rates[j]; }
  double total() const;
};

// Each subject contributes its exit time as exposure: time at risk in the
// initial state ends at the first event or at censoring, whichever comes
// first, so no integration is needed.
SufficientStats sufficient_stats(const GroupSample& sample);

// Closed-form MLE: rate_j = counts_j / exposure.
IntensityVector mle(const SufficientStats& stats);

// Log-likelihood sum_j [ log(alpha_j) * N_j - alpha_j * S ]. Uses the
// convention 0 * log(0) = 0; returns -inf (not an exception) when some
// alpha_j is 0 with a positive count.
double log_likelihood(const IntensityVector& alpha, const SufficientStats& stats);

// Approximate expected event count rate * tau * n. Ignores depletion of
// the risk set, so it overstates the exact expectation
// n * (alpha_j / alpha_plus) * (1 - exp(-alpha_plus * tau)); adequate when
// rate * tau is small.
double expected_events(double rate, double tau, std::int64_t n);

}  // namespace crs

#endif
