#include <doctest.h>

#include <sstream>

#include "crs/io.hpp"
#include "crs/similarity.hpp"

using namespace crs;

TEST_CASE("parse a minimal event file") {
  std::istringstream in(
      "#tau=90\n"
      "subject_id,group,time,state\n"
      "a,1,90,0\n"
      "b,2,30,1\n");
  const auto [g1, g2] = parse_events(in);
  CHECK(g1.histories.size() == 1);
  CHECK(g1.histories[0].outcome == 0);
  CHECK(g1.histories[0].exit_time == 90.0);
  CHECK(g2.histories.size() == 1);
  CHECK(g2.histories[0].outcome == 1);
  CHECK(g2.histories[0].exit_time == 30.0);
  CHECK(g1.tau == 90.0);
  CHECK(g1.num_states == 1);
}

TEST_CASE("tau resolution: flag beats directive, absence is an error") {
  const std::string body =
      "subject_id,group,time,state\n"
      "a,1,50,0\n"
      "b,2,30,1\n";
  {
    std::istringstream in("#tau=90\n" + body);
    const auto [g1, g2] = parse_events(in, 60.0);
    CHECK(g1.tau == 60.0);
  }
  {
    std::istringstream in(body);
    CHECK_THROWS_AS(parse_events(in), ParseError);
  }
}

TEST_CASE("parse errors carry line numbers") {
  SUBCASE("time exceeds tau") {
    std::istringstream in(
        "#tau=90\n"
        "subject_id,group,time,state\n"
        "a,1,50,0\n"
        "b,2,91,1\n");
    CHECK_THROWS_WITH_AS(parse_events(in), "time exceeds tau at line 4",
                         ParseError);
  }
  SUBCASE("unknown group") {
    std::istringstream in(
        "#tau=90\nsubject_id,group,time,state\na,3,50,0\nb,2,30,1\n");
    CHECK_THROWS_WITH_AS(parse_events(in), "unknown group label at line 3",
                         ParseError);
  }
  SUBCASE("non-positive time") {
    std::istringstream in(
        "#tau=90\nsubject_id,group,time,state\na,1,0,0\n");
    CHECK_THROWS_WITH_AS(parse_events(in), "non-positive time at line 3",
                         ParseError);
  }
  SUBCASE("negative state") {
    std::istringstream in(
        "#tau=90\nsubject_id,group,time,state\na,1,5,-1\n");
    CHECK_THROWS_WITH_AS(parse_events(in), "negative state at line 3",
                         ParseError);
  }
  SUBCASE("missing group") {
    std::istringstream in(
        "#tau=90\nsubject_id,group,time,state\na,1,5,1\n");
    CHECK_THROWS_AS(parse_events(in), ParseError);  // group 2 empty
  }
  SUBCASE("empty input") {
    std::istringstream in("");
    CHECK_THROWS_AS(parse_events(in), ParseError);
  }
}

TEST_CASE("write/parse round trip preserves sufficient statistics") {
  rng::Stream stream(314);
  rng::Stream stream2 = stream.substream(1);
  const GroupSample g1 =
      simulate_group(IntensityVector{{0.001, 0.002}}, 300, 90.0, stream);
  GroupSample g2 =
      simulate_group(IntensityVector{{0.0015, 0.001}}, 250, 90.0, stream2);
  g2.group_label = 2;

  std::ostringstream out;
  write_events(out, g1, g2);
  std::istringstream in(out.str());
  const auto [h1, h2] = parse_events(in);

  const SufficientStats a1 = sufficient_stats(g1), b1 = sufficient_stats(h1);
  const SufficientStats a2 = sufficient_stats(g2), b2 = sufficient_stats(h2);
  CHECK(a1.counts == b1.counts);
  CHECK(a1.exposure == b1.exposure);  // shortest round-trip formatting is exact
  CHECK(a2.counts == b2.counts);
  CHECK(a2.exposure == b2.exposure);
}

TEST_CASE("result JSON carries the stable schema") {
  std::istringstream in(
      "#tau=90\n"
      "subject_id,group,time,state\n"
      "a,1,90,0\n"
      "b,1,30,1\n"
      "c,2,40,1\n"
      "d,2,90,0\n");
  const auto [g1, g2] = parse_events(in);
  TestConfig config;
  config.thresholds = {0.01};
  config.n_boot = 50;
  config.seed = 3;
  const SimilarityTestResult r = run_similarity_test(g1, g2, config);
  const std::string json = result_to_json(r, config, g1.tau);
  for (const char* key :
       {"\"version\"", "\"config\"", "\"thresholds\"", "\"n_boot\"",
        "\"level\"", "\"seed\"", "\"censoring\"", "\"tau\"", "\"num_states\"",
        "\"mle1\"", "\"mle2\"", "\"distances\"", "\"p_values\"",
        "\"boot_quantiles\"", "\"per_state_reject\"", "\"global_reject\"",
        "\"n_boot_used\""})
    CHECK(json.find(key) != std::string::npos);
  // identical inputs give identical bytes
  CHECK(json == result_to_json(run_similarity_test(g1, g2, config), config,
                               g1.tau));
}
