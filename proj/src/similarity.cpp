#include "crs/similarity.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>

namespace crs {

namespace {

struct SubjectExit {
  double time;
  int outcome;  // 0 censored, >= 1 event type
};

// One subject under the all-cause-hazard + multinomial construction.
inline SubjectExit draw_subject(const IntensityVector& alpha, double alpha_sum,
                                double tau, rng::Stream& stream) {
  const double t = stream.next_exponential(alpha_sum);
  if (!(t <= tau)) return {tau, 0};
  const double u = stream.next_uniform() * alpha_sum;
  double cum = 0.0;
  int cause = 0;
  for (std::size_t c = 0; c < alpha.size(); ++c) {
    if (alpha[c] <= 0.0) continue;
    cum += alpha[c];
    cause = static_cast<int>(c) + 1;
    if (u < cum) break;
  }
  return {t, cause};
}

struct GroupCount {
  std::int64_t events = 0;  // events of the tracked type
  double exposure = 0.0;
};

// Count-only replicate for one group; tracks a single state. Uses separate
// streams for event and censoring draws so it reproduces exactly what
// simulate_group followed by apply_censoring would yield.
GroupCount simulate_count_at(const IntensityVector& alpha, std::int64_t n,
                             double tau, std::size_t tracked, bool censoring,
                             double censor_rate, rng::Stream& events,
                             rng::Stream& censor) {
  const double alpha_sum = alpha.total();
  GroupCount out;
  for (std::int64_t i = 0; i < n; ++i) {
    SubjectExit e = draw_subject(alpha, alpha_sum, tau, events);
    if (censoring) {
      const double c = censor.next_exponential(censor_rate);
      if (c < e.time) e = {c, 0};
    }
    out.exposure += e.time;
    if (e.outcome == static_cast<int>(tracked) + 1) ++out.events;
  }
  return out;
}

// |difference of replicate MLEs at the tracked state| for one bootstrap
// replicate, fed by substreams 0..3 of `rep`.
double replicate_distance(const IntensityVector& gen1,
                          const IntensityVector& gen2,
                          const BootstrapMeta& meta, std::size_t tracked,
                          rng::Stream rep) {
  rng::Stream ev1 = rep.substream(0);
  rng::Stream cs1 = rep.substream(1);
  rng::Stream ev2 = rep.substream(2);
  rng::Stream cs2 = rep.substream(3);
  const GroupCount g1 = simulate_count_at(gen1, meta.n1, meta.tau, tracked,
                                          meta.censoring, meta.censor_rate1,
                                          ev1, cs1);
  const GroupCount g2 = simulate_count_at(gen2, meta.n2, meta.tau, tracked,
                                          meta.censoring, meta.censor_rate2,
                                          ev2, cs2);
  return std::abs(static_cast<double>(g1.events) / g1.exposure -
                  static_cast<double>(g2.events) / g2.exposure);
}

void validate_config(const TestConfig& config, std::size_t k) {
  if (config.thresholds.size() != k)
    throw std::invalid_argument("thresholds length does not match state count");
  for (double d : config.thresholds)
    if (!(d > 0.0)) throw std::invalid_argument("thresholds must be positive");
  if (config.n_boot < 1) throw std::invalid_argument("n_boot must be >= 1");
  if (!(config.level > 0.0 && config.level < 1.0))
    throw std::invalid_argument("level must be in (0, 1)");
}

double empirical_p_value(const std::vector<double>& sorted_stats, double d) {
  const auto count = std::upper_bound(sorted_stats.begin(), sorted_stats.end(), d) -
                     sorted_stats.begin();
  return static_cast<double>(count) / static_cast<double>(sorted_stats.size());
}

double order_statistic_quantile(const std::vector<double>& sorted_stats,
                                double level) {
  const auto b = static_cast<double>(sorted_stats.size());
  const auto idx = static_cast<std::size_t>(std::floor(b * level));
  if (idx == 0) return -std::numeric_limits<double>::infinity();
  return sorted_stats[idx - 1];  // 1-based order statistic
}

}  // namespace

GroupSample simulate_group(const IntensityVector& alpha, std::int64_t n,
                           double tau, rng::Stream& stream) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
  for (double r : alpha.rates)
    if (r < 0.0 || !std::isfinite(r))
      throw std::invalid_argument("intensities must be finite and >= 0");
  const double alpha_sum = alpha.total();
  GroupSample sample;
  sample.tau = tau;
  sample.num_states = static_cast<int>(alpha.size());
  sample.histories.reserve(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    const SubjectExit e = draw_subject(alpha, alpha_sum, tau, stream);
    sample.histories.push_back({"s" + std::to_string(i + 1), e.time, e.outcome});
  }
  return sample;
}

GroupSample apply_censoring(const GroupSample& sample, double censor_rate,
                            rng::Stream& stream) {
  if (censor_rate < 0.0) throw std::invalid_argument("censor rate must be >= 0");
  GroupSample out = sample;
  for (auto& h : out.histories) {
    const double c = stream.next_exponential(censor_rate);
    if (c < h.exit_time) {
      h.exit_time = c;
      h.outcome = 0;
    }
  }
  return out;
}

double estimate_censor_rate(const GroupSample& sample) {
  if (sample.histories.empty()) throw std::invalid_argument("no subjects");
  std::int64_t censored = 0;
  double exposure = 0.0;
  for (const auto& h : sample.histories) {
    if (h.outcome == 0 && h.exit_time < sample.tau) ++censored;
    exposure += h.exit_time;
  }
  if (!(exposure > 0.0)) throw std::invalid_argument("zero exposure");
  return static_cast<double>(censored) / exposure;
}

StateTestResult state_test(const SufficientStats& stats1,
                           const SufficientStats& stats2,
                           const BootstrapMeta& meta, int state,
                           const TestConfig& config, rng::Stream base) {
  validate_config(config, stats1.counts.size());
  const auto j = static_cast<std::size_t>(state - 1);
  const IntensityVector m1 = mle(stats1);
  const IntensityVector m2 = mle(stats2);
  const double d = std::abs(m1[j] - m2[j]);
  const auto [gen1, gen2] = select_bootstrap_intensities(
      stats1, stats2, state, config.thresholds[j]);

  StateTestResult result;
  result.boot_stats.resize(static_cast<std::size_t>(config.n_boot));
  for (int b = 0; b < config.n_boot; ++b)
    result.boot_stats[static_cast<std::size_t>(b)] = replicate_distance(
        gen1, gen2, meta, j, base.substream(static_cast<std::uint64_t>(b)));
  std::sort(result.boot_stats.begin(), result.boot_stats.end());
  result.p_value = empirical_p_value(result.boot_stats, d);
  result.boot_quantile = order_statistic_quantile(result.boot_stats, config.level);
  return result;
}

SimilarityTestResult run_similarity_test(const GroupSample& sample1,
                                         const GroupSample& sample2,
                                         const TestConfig& config) {
  if (sample1.num_states != sample2.num_states)
    throw std::invalid_argument("samples disagree on the number of states");
  if (sample1.tau != sample2.tau)
    throw std::invalid_argument("samples disagree on tau");
  const auto k = static_cast<std::size_t>(sample1.num_states);
  validate_config(config, k);

  const SufficientStats stats1 = sufficient_stats(sample1);
  const SufficientStats stats2 = sufficient_stats(sample2);

  BootstrapMeta meta;
  meta.n1 = stats1.n_subjects;
  meta.n2 = stats2.n_subjects;
  meta.tau = sample1.tau;
  if (config.censoring == CensoringMode::independent_exponential) {
    meta.censoring = true;
    meta.censor_rate1 = estimate_censor_rate(sample1);
    meta.censor_rate2 = estimate_censor_rate(sample2);
  }

  SimilarityTestResult result;
  result.mle1 = mle(stats1);
  result.mle2 = mle(stats2);
  result.n_boot_used = config.n_boot;
  result.distances.resize(k);
  for (std::size_t j = 0; j < k; ++j)
    result.distances[j] = std::abs(result.mle1[j] - result.mle2[j]);

  std::vector<std::pair<IntensityVector, IntensityVector>> generators;
  generators.reserve(k);
  for (std::size_t j = 0; j < k; ++j)
    generators.push_back(select_bootstrap_intensities(
        stats1, stats2, static_cast<int>(j) + 1, config.thresholds[j]));

  // One cell per (state, replicate); cells are independent and land in
  // preassigned slots, so the reduction is identical for any thread count.
  const rng::Stream root(config.seed);
  const auto n_boot = static_cast<std::size_t>(config.n_boot);
  std::vector<std::vector<double>> boot(k, std::vector<double>(n_boot));
  const std::size_t n_cells = k * n_boot;
  int n_threads = config.n_threads;
  if (n_threads <= 0)
    n_threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  auto run_cell = [&](std::size_t cell) {
    const std::size_t j = cell / n_boot;
    const std::size_t b = cell % n_boot;
    boot[j][b] = replicate_distance(
        generators[j].first, generators[j].second, meta, j,
        root.substream(static_cast<std::uint64_t>(j) + 1).substream(b));
  };

  if (n_threads <= 1) {
    for (std::size_t cell = 0; cell < n_cells; ++cell) run_cell(cell);
  } else {
    std::atomic<std::size_t> next{0};
    constexpr std::size_t kChunk = 64;
    auto worker = [&] {
      for (;;) {
        const std::size_t begin = next.fetch_add(kChunk);
        if (begin >= n_cells) return;
        const std::size_t end = std::min(begin + kChunk, n_cells);
        for (std::size_t cell = begin; cell < end; ++cell) run_cell(cell);
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  result.p_values.resize(k);
  result.boot_quantiles.resize(k);
  result.per_state_reject.resize(k);
  bool all_reject = true;
  for (std::size_t j = 0; j < k; ++j) {
    std::sort(boot[j].begin(), boot[j].end());
    result.p_values[j] = empirical_p_value(boot[j], result.distances[j]);
    result.boot_quantiles[j] = order_statistic_quantile(boot[j], config.level);
    result.per_state_reject[j] = result.p_values[j] < config.level;
    all_reject = all_reject && result.per_state_reject[j];
  }
  result.global_reject = all_reject;
  return result;
}

}  // namespace crs
