#ifndef CRS_IO_HPP
#define CRS_IO_HPP

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>

#include "crs/similarity.hpp"
#include "crs/simulation.hpp"

namespace crs {

inline constexpr const char* kLibraryVersion = "0.1.0";

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Event CSV: header "subject_id,group,time,state", optional directive line
// "#tau=<days>". A tau_override > 0 wins over the directive; tau must come
// from one of the two. The state count k is inferred as the largest state
// seen (at least 1).
std::pair<GroupSample, GroupSample> parse_events(std::istream& in,
                                                 double tau_override = 0.0);
std::pair<GroupSample, GroupSample> parse_events_file(const std::string& path,
                                                      double tau_override = 0.0);

void write_events(std::ostream& out, const GroupSample& sample1,
                  const GroupSample& sample2);

// Stable JSON layout for a single test run; includes a config echo and the
// library version. -inf quantiles serialize as null.
std::string result_to_json(const SimilarityTestResult& result,
                           const TestConfig& config, double tau);

// Harness CSV: scenario,n1,n2,delta1..deltak,state,rate,se,n_sim with
// state in {1..k, "global"}.
std::string report_to_csv(const SimulationReport& report,
                          const ScenarioSpec& spec);

}  // namespace crs

#endif
