#include "crs/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace crs {

namespace {

// Shortest round-trip decimal representation.
std::string num(double v) { return nlohmann::json(v).dump(); }

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(trim(field));
  return fields;
}

[[noreturn]] void fail(const std::string& message, std::size_t line) {
  throw ParseError(message + " at line " + std::to_string(line));
}

}  // namespace

std::pair<GroupSample, GroupSample> parse_events(std::istream& in,
                                                 double tau_override) {
  GroupSample g1, g2;
  g1.group_label = 1;
  g2.group_label = 2;
  double directive_tau = 0.0;
  bool have_header = false;
  int max_state = 0;

  struct Row {
    std::string id;
    int group;
    double time;
    int state;
    std::size_t line;
  };
  std::vector<Row> rows;

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (line.rfind("#tau=", 0) == 0) {
        try {
          directive_tau = std::stod(line.substr(5));
        } catch (const std::exception&) {
          fail("malformed #tau directive", lineno);
        }
        if (!(directive_tau > 0.0)) fail("tau must be positive", lineno);
      }
      continue;  // other directives are comments
    }
    if (!have_header) {
      if (split_fields(line) !=
          std::vector<std::string>{"subject_id", "group", "time", "state"})
        fail("expected header subject_id,group,time,state", lineno);
      have_header = true;
      continue;
    }
    const auto fields = split_fields(line);
    if (fields.size() != 4) fail("expected 4 fields", lineno);
    Row row;
    row.id = fields[0];
    row.line = lineno;
    try {
      row.group = std::stoi(fields[1]);
      row.time = std::stod(fields[2]);
      row.state = std::stoi(fields[3]);
    } catch (const std::exception&) {
      fail("malformed numeric field", lineno);
    }
    if (row.group != 1 && row.group != 2) fail("unknown group label", lineno);
    if (!(row.time > 0.0)) fail("non-positive time", lineno);
    if (row.state < 0) fail("negative state", lineno);
    max_state = std::max(max_state, row.state);
    rows.push_back(std::move(row));
  }
  if (!have_header) throw ParseError("empty input: missing header");
  const double tau = tau_override > 0.0 ? tau_override : directive_tau;
  if (!(tau > 0.0))
    throw ParseError("missing tau: provide a #tau= directive or the --tau flag");

  const int k = std::max(max_state, 1);
  for (const auto& row : rows) {
    if (row.time > tau) fail("time exceeds tau", row.line);
    GroupSample& g = row.group == 1 ? g1 : g2;
    g.histories.push_back({row.id, row.time, row.state});
  }
  for (GroupSample* g : {&g1, &g2}) {
    g->tau = tau;
    g->num_states = k;
    if (g->histories.empty())
      throw ParseError("group " + std::to_string(g->group_label) +
                       " has no subjects");
  }
  return {std::move(g1), std::move(g2)};
}

std::pair<GroupSample, GroupSample> parse_events_file(const std::string& path,
                                                      double tau_override) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  return parse_events(in, tau_override);
}

void write_events(std::ostream& out, const GroupSample& sample1,
                  const GroupSample& sample2) {
  out << "#tau=" << num(sample1.tau) << "\n";
  out << "subject_id,group,time,state\n";
  for (const GroupSample* g : {&sample1, &sample2})
    for (const auto& h : g->histories)
      out << h.subject_id << ',' << g->group_label << ',' << num(h.exit_time)
          << ',' << h.outcome << "\n";
}

std::string result_to_json(const SimilarityTestResult& result,
                           const TestConfig& config, double tau) {
  using json = nlohmann::ordered_json;
  json j;
  j["version"] = kLibraryVersion;
  j["config"] = {
      {"thresholds", config.thresholds},
      {"n_boot", config.n_boot},
      {"level", config.level},
      {"seed", config.seed},
      {"censoring", config.censoring == CensoringMode::independent_exponential
                        ? "exp"
                        : "none"},
  };
  j["tau"] = tau;
  j["num_states"] = result.distances.size();
  j["mle1"] = result.mle1.rates;
  j["mle2"] = result.mle2.rates;
  j["distances"] = result.distances;
  j["p_values"] = result.p_values;
  json quantiles = json::array();
  for (double q : result.boot_quantiles) {
    if (std::isinf(q))
      quantiles.push_back(nullptr);
    else
      quantiles.push_back(q);
  }
  j["boot_quantiles"] = std::move(quantiles);
  j["per_state_reject"] = result.per_state_reject;
  j["global_reject"] = result.global_reject;
  j["n_boot_used"] = result.n_boot_used;
  return j.dump(2) + "\n";
}

std::string report_to_csv(const SimulationReport& report,
                          const ScenarioSpec& spec) {
  const std::size_t k = spec.alpha1.size();
  std::ostringstream out;
  out << "scenario,n1,n2";
  for (std::size_t j = 1; j <= k; ++j) out << ",delta" << j;
  out << ",state,rate,se,n_sim\n";
  for (const auto& cell : report.cells) {
    const auto& [n1, n2] = spec.sample_sizes[cell.n_index];
    const auto& deltas = spec.delta_grid[cell.delta_index];
    std::ostringstream prefix;
    prefix << report.scenario << ',' << n1 << ',' << n2;
    for (double d : deltas) prefix << ',' << num(d);
    for (std::size_t j = 0; j < k; ++j)
      out << prefix.str() << ',' << (j + 1) << ',' << num(cell.state_rates[j])
          << ',' << num(cell.state_ses[j]) << ',' << report.n_sim << "\n";
    out << prefix.str() << ",global," << num(cell.global_rate) << ','
        << num(cell.global_se) << ',' << report.n_sim << "\n";
  }
  return out.str();
}

}  // namespace crs
