#ifndef CRS_TESTS_SAMPLES_HPP
#define CRS_TESTS_SAMPLES_HPP

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "crs/event_model.hpp"

namespace crs::testing {

// Builds a sample with prescribed event counts and total exposure: all
// censored subjects sit at tau and every event gets the same exit time.
inline GroupSample make_sample(int group_label,
                               const std::vector<std::int64_t>& counts,
                               double exposure, std::int64_t n, double tau) {
  const std::int64_t events = std::accumulate(counts.begin(), counts.end(),
                                              std::int64_t{0});
  const std::int64_t censored = n - events;
  GroupSample g;
  g.group_label = group_label;
  g.tau = tau;
  g.num_states = static_cast<int>(counts.size());
  double event_time = 0.0;
  if (events > 0) {
    event_time = (exposure - static_cast<double>(censored) * tau) /
                 static_cast<double>(events);
    if (!(event_time > 0.0) || event_time > tau)
      throw std::invalid_argument("exposure not realizable");
  }
  std::int64_t id = 0;
  for (std::size_t j = 0; j < counts.size(); ++j)
    for (std::int64_t c = 0; c < counts[j]; ++c)
      g.histories.push_back({"g" + std::to_string(group_label) + "e" +
                                 std::to_string(++id),
                             event_time, static_cast<int>(j) + 1});
  for (std::int64_t c = 0; c < censored; ++c)
    g.histories.push_back({"g" + std::to_string(group_label) + "c" +
                               std::to_string(++id),
                           tau, 0});
  return g;
}

}  // namespace crs::testing

#endif
