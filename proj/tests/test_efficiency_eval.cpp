#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

#include "asmctl/error.hpp"
#include "asmctl/report.hpp"
#include "asmctl/timeline.hpp"
#include "asmctl/timeline_csv.hpp"
#include "support/oracles.hpp"

using namespace asmctl;

namespace {

Timeline uniform_timeline(const std::string& id, std::int64_t stage_ms, int stages, std::int64_t shift) {
  std::vector<std::int64_t> starts;
  for (int i = 0; i < stages; ++i) starts.push_back(i * stage_ms + (i == 0 ? 0 : shift));
  return make_timeline(id, "c", starts, stages * stage_ms + shift);
}

Timeline random_timeline(std::mt19937_64& rng, const std::string& id, const std::string& cohort, int stages) {
  std::uniform_int_distribution<std::int64_t> d(1, 20000);
  std::vector<std::int64_t> starts{d(rng)};
  for (int i = 1; i < stages; ++i) starts.push_back(starts.back() + d(rng));
  return make_timeline(id, cohort, starts, starts.back() + d(rng));
}

}  // namespace

TEST_CASE("interval_iou") {
  CHECK(interval_iou({0, 10000}, {0, 10000}) == 1.0);
  CHECK(interval_iou({0, 1000}, {5000, 6000}) == 0.0);
  // Frozen from the 1 ms mask oracle: 8000 / 12000.
  CHECK(oracle::discretized_iou({0, 10000}, {2000, 12000}, 1) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(interval_iou({0, 10000}, {2000, 12000}) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));

  SUBCASE("empty-interval conventions") {
    CHECK(interval_iou({5, 5}, {7, 7}) == 1.0);
    CHECK(interval_iou({5, 5}, {0, 10}) == 0.0);
    CHECK(interval_iou({0, 10}, {5, 5}) == 0.0);
  }
  SUBCASE("touching intervals do not overlap") { CHECK(interval_iou({0, 10}, {10, 20}) == 0.0); }
}

TEST_CASE("interval_iou properties") {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<std::int64_t> pos(0, 5000);
  std::uniform_int_distribution<std::int64_t> len(0, 3000);
  for (int i = 0; i < 2000; ++i) {
    const std::int64_t s1 = pos(rng), s2 = pos(rng);
    const StageInterval a{s1, s1 + len(rng)};
    const StageInterval b{s2, s2 + len(rng)};
    const double ab = interval_iou(a, b);
    CHECK(ab == interval_iou(b, a));
    CHECK(ab >= 0.0);
    CHECK(ab <= 1.0);
    if (a.length() > 0 && b.length() > 0) {
      CHECK((ab == 1.0) == (a == b));
      CHECK((ab == 0.0) == (std::min(a.end_ms, b.end_ms) <= std::max(a.start_ms, b.start_ms)));
    }
    // Mask oracle at 1 ms is exact on integer endpoints.
    CHECK(ab == doctest::Approx(oracle::discretized_iou(a, b, 1)).epsilon(1e-12));
  }
}

TEST_CASE("discretized oracle") {
  CHECK(oracle::discretized_iou({100, 900}, {100, 900}, 10) == 1.0);
  CHECK(oracle::discretized_iou({0, 1000}, {5000, 6000}, 10) == 0.0);
  CHECK(std::abs(oracle::discretized_iou({0, 10000}, {2000, 12000}, 1) - 2.0 / 3.0) <= 1e-3);
}

TEST_CASE("timeline_from_starts") {
  const std::vector<std::int64_t> starts{0, 10000, 20000};
  const auto iv = timeline_from_starts(starts, 30000);
  CHECK(iv == std::vector<StageInterval>{{0, 10000}, {10000, 20000}, {20000, 30000}});
  CHECK(timeline_from_starts(std::vector<std::int64_t>{0}, 5) == std::vector<StageInterval>{{0, 5}});
  CHECK_THROWS_AS(timeline_from_starts(std::vector<std::int64_t>{0, 0}, 10), Error);
  CHECK_THROWS_AS(timeline_from_starts(std::vector<std::int64_t>{0, 5}, 5), Error);
  CHECK_THROWS_AS(timeline_from_starts({}, 5), Error);
  // The recorded-timeline variant admits empty stages but not reversals.
  CHECK(contiguous_intervals(std::vector<std::int64_t>{0, 0}, 10).front().length() == 0);
  CHECK_THROWS_AS(contiguous_intervals(std::vector<std::int64_t>{5, 4}, 10), Error);
}

TEST_CASE("timeline_iou") {
  const Timeline truth = uniform_timeline("r", 10000, 12, 0);
  CHECK(timeline_iou(truth, truth).values == std::vector<double>(12, 1.0));

  const Timeline shifted = uniform_timeline("r", 10000, 12, 1000);
  const auto v = timeline_iou(shifted, truth);
  // Frozen: (D - L) / (D + L) = 9/11, cross-checked against the mask oracle.
  const double closed_form = oracle::shifted_interval_iou(10000, 1000);
  CHECK(closed_form == doctest::Approx(9.0 / 11.0));
  for (std::size_t i = 1; i < 12; ++i) {
    CHECK(v.values[i] == doctest::Approx(closed_form).epsilon(1e-12));
    CHECK(v.values[i] == doctest::Approx(oracle::discretized_iou(shifted.intervals[i], truth.intervals[i], 1)));
  }
  CHECK(v.values[0] == doctest::Approx(10.0 / 11.0));

  SUBCASE("mismatches are invalid input") {
    CHECK_THROWS_AS(timeline_iou(uniform_timeline("r", 10000, 11, 0), truth), Error);
    CHECK_THROWS_AS(timeline_iou(uniform_timeline("other", 10000, 12, 0), truth), Error);
  }
}

TEST_CASE("aggregate") {
  SUBCASE("single perfect run") {
    const std::vector<IoUVector> v{{"a", std::vector<double>(12, 1.0)}};
    const auto r = aggregate(v, {{"a", "fast"}});
    CHECK(r.overall_mean == 1.0);
    for (const auto& s : r.per_stage) CHECK(s.stddev == 0.0);
    CHECK(r.histogram.counts.back() == 12);
    CHECK(r.cohort_means.at("fast") == 1.0);
  }
  SUBCASE("population statistics") {
    const std::vector<IoUVector> v{{"a", std::vector<double>(12, 0.8)}, {"b", std::vector<double>(12, 0.6)}};
    const auto r = aggregate(v, {{"a", "fast"}, {"b", "slow"}});
    for (const auto& s : r.per_stage) {
      CHECK(s.mean == doctest::Approx(0.7));
      CHECK(s.stddev == doctest::Approx(0.1));
    }
    CHECK(r.cohort_means.at("fast") == doctest::Approx(0.8));
    CHECK(r.cohort_means.at("slow") == doctest::Approx(0.6));
    CHECK(r.sample_count == 24);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(aggregate({}, {}), Error);
    const std::vector<IoUVector> ragged{{"a", {1.0, 1.0}}, {"b", {1.0}}};
    CHECK_THROWS_AS(aggregate(ragged, {}), Error);
  }
  SUBCASE("permutation invariance and histogram conservation") {
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<IoUVector> v;
    std::map<std::string, std::string> cohorts;
    for (int r = 0; r < 40; ++r) {
      IoUVector x{"r" + std::to_string(r), {}};
      for (int s = 0; s < 12; ++s) x.values.push_back(u(rng));
      x.values[0] = 1.0;  // right edge lands in the last bin
      cohorts[x.run_id] = r % 2 ? "fast" : "slow";
      v.push_back(std::move(x));
    }
    const auto base = aggregate(v, cohorts, 7);
    CHECK(std::accumulate(base.histogram.counts.begin(), base.histogram.counts.end(), std::int64_t{0}) == 480);
    CHECK(base.histogram.edges.size() == 8);
    for (int k = 0; k < 5; ++k) {
      std::shuffle(v.begin(), v.end(), rng);
      CHECK(aggregate(v, cohorts, 7) == base);
    }
  }
}

TEST_CASE("seconds parsing is exact") {
  CHECK(parse_seconds("0") == 0);
  CHECK(parse_seconds("12.5") == 12500);
  CHECK(parse_seconds("4.333") == 4333);
  CHECK(parse_seconds("1.2300") == 1230);
  CHECK(format_seconds(4333) == "4.333");
  CHECK(format_seconds(10) == "0.010");
  CHECK_THROWS_AS(parse_seconds("1.0001"), Error);
  CHECK_THROWS_AS(parse_seconds("-1"), Error);
  CHECK_THROWS_AS(parse_seconds("1e3"), Error);
  CHECK_THROWS_AS(parse_seconds(""), Error);
}

TEST_CASE("timeline CSV round-trip") {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Timeline> ts;
    const int stages = 1 + trial % 12;
    for (int r = 0; r < 1 + trial % 5; ++r) {
      ts.push_back(random_timeline(rng, "run-" + std::to_string(r), r % 2 ? "fast" : "slow", stages));
    }
    CHECK(timelines_from_csv(timelines_to_csv(ts)) == ts);
  }
}

TEST_CASE("timeline CSV rejects malformed input") {
  const std::string header = std::string(kTimelineCsvHeader) + "\n";
  CHECK_THROWS_AS(timelines_from_csv(""), Error);
  CHECK_THROWS_AS(timelines_from_csv("run,cohort,stage,start\n"), Error);
  CHECK_THROWS_AS(timelines_from_csv(header + "a,f,0,0.000\n"), Error);            // no completion
  CHECK_THROWS_AS(timelines_from_csv(header + "a,f,0,0\na,f,2,1\n"), Error);       // gap
  CHECK_THROWS_AS(timelines_from_csv(header + "a,f,0,5\na,f,1,1\n"), Error);       // backwards
  CHECK_THROWS_AS(timelines_from_csv(header + "a,f,0,0\na,s,1,1\n"), Error);       // cohort change
  CHECK_THROWS_AS(timelines_from_csv(header + "a,f,0,0\na,f,0,1\na,f,1,2\n"), Error);  // duplicate
  // Rows may arrive out of order; CRLF is tolerated.
  const auto t = timelines_from_csv(header + "a,f,1,1.5\r\na,f,0,0\r\na,f,2,3\r\n");
  REQUIRE(t.size() == 1);
  CHECK(t[0].intervals == std::vector<StageInterval>{{0, 1500}, {1500, 3000}});
}

TEST_CASE("report JSON round-trip") {
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<IoUVector> v;
  std::map<std::string, std::string> cohorts;
  for (int r = 0; r < 10; ++r) {
    IoUVector x{"r" + std::to_string(r), {}};
    for (int s = 0; s < 12; ++s) x.values.push_back(u(rng));
    cohorts[x.run_id] = r < 5 ? "fast" : "slow";
    v.push_back(x);
  }
  EfficiencyReport report = aggregate(v, cohorts);
  report.mean_durations_s = {{"fast", std::vector<double>(12, 4.3333)}};
  const auto text = report_to_json(report).dump();
  CHECK(report_from_json(nlohmann::json::parse(text)) == report);

  SUBCASE("invalid reports are rejected") {
    auto doc = report_to_json(report);
    doc["histogram"]["counts"][0] = 999;
    CHECK_THROWS_AS(report_from_json(doc), Error);
    doc = report_to_json(report);
    doc["extra"] = 1;
    CHECK_THROWS_AS(report_from_json(doc), Error);
    CHECK_THROWS_AS(report_from_json(nlohmann::json::array()), Error);
  }
}

TEST_CASE("report CSV carries the same numbers") {
  const std::vector<IoUVector> v{{"a", {0.25, 0.5}}, {"b", {0.75, 1.0}}};
  const auto r = aggregate(v, {{"a", "fast"}, {"b", "slow"}}, 4);
  std::ostringstream os;
  write_report_csv(os, r);
  const std::string csv = os.str();
  CHECK(csv.find("stage,mean_iou,std_iou\n0,0.5,0.25\n1,0.75,0.25\n") == 0);
  CHECK(csv.find("0.75,1,2\n") != std::string::npos);  // 0.75 and 1.0 share the last bin
  CHECK(csv.find("overall_mean,0.625\n") != std::string::npos);
}
