#include <doctest.h>

#include <cmath>
#include <random>

#include "crs/event_model.hpp"
#include "support/oracles.hpp"

using namespace crs;

TEST_CASE("sufficient statistics from a small sample") {
  GroupSample g;
  g.tau = 90.0;
  g.num_states = 2;
  g.histories = {{"a", 90.0, 0}, {"b", 30.0, 1}, {"c", 45.0, 2}};
  const SufficientStats stats = sufficient_stats(g);
  CHECK(stats.counts == std::vector<std::int64_t>{1, 1});
  CHECK(stats.exposure == doctest::Approx(165.0));
  CHECK(stats.n_subjects == 3);
}

TEST_CASE("all-censored sample has zero counts and exposure n*tau") {
  GroupSample g;
  g.tau = 90.0;
  g.num_states = 3;
  for (int i = 0; i < 40; ++i)
    g.histories.push_back({"s" + std::to_string(i), 90.0, 0});
  const SufficientStats stats = sufficient_stats(g);
  for (auto c : stats.counts) CHECK(c == 0);
  CHECK(stats.exposure == doctest::Approx(40 * 90.0));
}

TEST_CASE("sufficient statistics match an independent recount") {
  std::mt19937 gen(991);
  std::uniform_real_distribution<double> time(0.5, 90.0);
  std::uniform_int_distribution<int> outcome(0, 3);
  GroupSample g;
  g.tau = 90.0;
  g.num_states = 3;
  for (int i = 0; i < 500; ++i) {
    const int o = outcome(gen);
    g.histories.push_back(
        {"s" + std::to_string(i), o == 0 ? 90.0 : time(gen), o});
  }
  const SufficientStats stats = sufficient_stats(g);

  std::vector<std::int64_t> counts(3, 0);
  double exposure = 0.0;
  for (const auto& h : g.histories) {
    if (h.outcome > 0) ++counts[static_cast<std::size_t>(h.outcome - 1)];
    exposure += h.exit_time;
  }
  CHECK(stats.counts == counts);
  CHECK(stats.exposure == exposure);
}

TEST_CASE("sufficient statistics error paths") {
  GroupSample empty;
  empty.tau = 90.0;
  empty.num_states = 1;
  CHECK_THROWS_WITH_AS(sufficient_stats(empty), "no subjects",
                       std::invalid_argument);

  GroupSample bad;
  bad.tau = 90.0;
  bad.num_states = 2;
  bad.histories = {{"a", 10.0, 3}};
  CHECK_THROWS_WITH_AS(sufficient_stats(bad), "unknown state",
                       std::invalid_argument);
}

TEST_CASE("mle divides counts by exposure") {
  SufficientStats stats{{18}, 18000.0, 213, 90.0};
  CHECK(mle(stats)[0] == doctest::Approx(0.001));

  SufficientStats zeros{{0, 0, 0}, 5000.0, 100, 90.0};
  const IntensityVector alpha = mle(zeros);
  for (std::size_t j = 0; j < 3; ++j) CHECK(alpha[j] == 0.0);

  SufficientStats degenerate{{1}, 0.0, 1, 90.0};
  CHECK_THROWS_WITH_AS(mle(degenerate), "zero exposure", std::invalid_argument);
}

TEST_CASE("mle matches the expected-event conversion of the application") {
  // rate 0.001 over 90 days in a group of 213 is roughly 19 events
  CHECK(expected_events(0.001, 90.0, 213) == doctest::Approx(19.17));
}

TEST_CASE("mle scale consistency under time rescaling") {
  std::mt19937 gen(7);
  std::uniform_real_distribution<double> time(0.5, 90.0);
  GroupSample g;
  g.tau = 90.0;
  g.num_states = 2;
  for (int i = 0; i < 100; ++i)
    g.histories.push_back({"s" + std::to_string(i), time(gen), i % 3 == 0 ? 1 : (i % 3 == 1 ? 2 : 0)});
  const IntensityVector base = mle(sufficient_stats(g));

  for (double c : {2.0, 0.5, 8.0}) {
    GroupSample scaled = g;
    scaled.tau *= c;
    for (auto& h : scaled.histories) h.exit_time *= c;
    const IntensityVector rescaled = mle(sufficient_stats(scaled));
    // c is a power of two, so the division is exact
    for (std::size_t j = 0; j < base.size(); ++j)
      CHECK(rescaled[j] * c == base[j]);
  }
}

TEST_CASE("log-likelihood direct evaluation") {
  SufficientStats stats{{18}, 18000.0, 213, 90.0};
  IntensityVector alpha{{0.001}};
  CHECK(log_likelihood(alpha, stats) ==
        doctest::Approx(18.0 * std::log(0.001) - 18.0).epsilon(1e-12));
}

TEST_CASE("log-likelihood zero-count conventions") {
  SufficientStats no_events{{0}, 0.0, 0, 90.0};
  no_events.exposure = 0.0;
  IntensityVector zero{{0.0}};
  CHECK(log_likelihood(zero, no_events) == 0.0);  // 0*log(0) = 0

  SufficientStats stats{{3}, 1000.0, 10, 90.0};
  CHECK(log_likelihood(zero, stats) ==
        -std::numeric_limits<double>::infinity());
}

TEST_CASE("mle maximizes the log-likelihood over a perturbation grid") {
  SufficientStats stats{{12, 0, 5}, 7600.0, 120, 90.0};
  const IntensityVector alpha_hat = mle(stats);
  const double best = log_likelihood(alpha_hat, stats);
  std::mt19937 gen(42);
  std::uniform_real_distribution<double> factor(0.2, 4.0);
  for (int trial = 0; trial < 300; ++trial) {
    IntensityVector alternative = alpha_hat;
    bool moved = false;
    for (auto& r : alternative.rates)
      if (r > 0.0) {
        const double f = factor(gen);
        moved = moved || std::abs(f - 1.0) > 1e-3;
        r *= f;
      }
    const double ll = log_likelihood(alternative, stats);
    CHECK(ll <= best + 1e-12);
    if (moved) CHECK(ll < best);
  }
}

TEST_CASE("expected events: approximation against the exact expectation") {
  CHECK(expected_events(0.0, 90.0, 500) == 0.0);
  const double approx = expected_events(0.0017, 90.0, 482);
  CHECK(approx == doctest::Approx(73.746));
  // single-cause exact expectation n * (1 - exp(-rate * tau))
  IntensityVector alpha{{0.0017}};
  const double exact =
      482.0 * crs::testing::cause_probability(alpha, 0, 90.0);
  CHECK(std::abs(approx - exact) / exact < 0.10);
}
