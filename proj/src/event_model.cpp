#include "crs/event_model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace crs {

double IntensityVector::total() const {
  double s = 0.0;
  for (double r : rates) s += r;
  return s;
}

SufficientStats sufficient_stats(const GroupSample& sample) {
  if (sample.histories.empty()) throw std::invalid_argument("no subjects");
  SufficientStats stats;
  stats.counts.assign(static_cast<std::size_t>(sample.num_states), 0);
  stats.n_subjects = static_cast<std::int64_t>(sample.histories.size());
  stats.tau = sample.tau;
  for (const auto& h : sample.histories) {
    if (h.outcome < 0 || h.outcome > sample.num_states)
      throw std::invalid_argument("unknown state");
    if (!(h.exit_time > 0.0) || h.exit_time > sample.tau)
      throw std::invalid_argument("exit time outside (0, tau]");
    if (h.outcome > 0) ++stats.counts[static_cast<std::size_t>(h.outcome - 1)];
    stats.exposure += h.exit_time;
  }
  return stats;
}

IntensityVector mle(const SufficientStats& stats) {
  if (!(stats.exposure > 0.0)) throw std::invalid_argument("zero exposure");
  IntensityVector alpha;
  alpha.rates.reserve(stats.counts.size());
  for (std::int64_t n : stats.counts)
    alpha.rates.push_back(static_cast<double>(n) / stats.exposure);
  return alpha;
}

double log_likelihood(const IntensityVector& alpha, const SufficientStats& stats) {
  if (alpha.size() != stats.counts.size())
    throw std::invalid_argument("dimension mismatch");
  double ll = 0.0;
  for (std::size_t j = 0; j < alpha.size(); ++j) {
    const auto n = static_cast<double>(stats.counts[j]);
    if (n > 0.0) {
      if (alpha[j] <= 0.0) return -std::numeric_limits<double>::infinity();
      ll += std::log(alpha[j]) * n;
    }
    ll -= alpha[j] * stats.exposure;
  }
  return ll;
}

double expected_events(double rate, double tau, std::int64_t n) {
  if (rate < 0.0 || tau <= 0.0 || n < 0)
    throw std::invalid_argument("expected_events: invalid input");
  return rate * tau * static_cast<double>(n);
}

}  // namespace crs
