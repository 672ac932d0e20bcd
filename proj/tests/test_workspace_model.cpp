#include <doctest.h>

#include <fstream>
#include <random>

#include "asmctl/error.hpp"
#include "asmctl/geometry.hpp"
#include "asmctl/plan.hpp"
#include "asmctl/plan_io.hpp"
#include "asmctl/reference_plan.hpp"
#include "support/oracles.hpp"

using namespace asmctl;

namespace {

bool mentions(const ValidationResult& r, const std::string& needle) {
  for (const auto& v : r.violations) {
    if (v.find(needle) != std::string::npos) return true;
  }
  return false;
}

Rect random_rect(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double w = 0.01 + 0.5 * u(rng);
  const double h = 0.01 + 0.5 * u(rng);
  return Rect{u(rng) * (1.0 - w), u(rng) * (1.0 - h), w, h};
}

}  // namespace

TEST_CASE("rect_intersection_area") {
  CHECK(rect_intersection_area({0, 0, 0.5, 0.5}, {0, 0, 0.5, 0.5}) == doctest::Approx(0.25));
  CHECK(rect_intersection_area({0, 0, 0.2, 0.2}, {0.5, 0.5, 0.2, 0.2}) == 0.0);

  // Frozen from the Monte-Carlo oracle below: 0.02.
  const Rect a{0, 0, 0.2, 0.2};
  const Rect b{0.1, 0, 0.2, 0.2};
  const double mc = oracle::monte_carlo_intersection_area(a, b, 1'000'000, 11);
  CHECK(std::abs(mc - 0.02) <= 1e-3);
  CHECK(std::abs(rect_intersection_area(a, b) - mc) <= 1e-3);
  CHECK(rect_intersection_area(a, b) == doctest::Approx(0.02).epsilon(1e-12));

  SUBCASE("touching edges have zero area") {
    CHECK(rect_intersection_area({0, 0, 0.2, 0.2}, {0.2, 0, 0.2, 0.2}) == 0.0);
  }
}

TEST_CASE("rect_intersection_area is symmetric and bounded") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 5000; ++i) {
    const Rect a = random_rect(rng);
    const Rect b = random_rect(rng);
    const double ab = rect_intersection_area(a, b);
    CHECK(ab == rect_intersection_area(b, a));
    CHECK(ab >= 0.0);
    CHECK(ab <= std::min(a.area(), b.area()) + 1e-15);
  }
}

TEST_CASE("zone_overlap_fraction") {
  CHECK(zone_overlap_fraction({0.1, 0.1, 0.1, 0.1}, {0, 0, 0.5, 0.5}) == 1.0);
  CHECK(zone_overlap_fraction({0.6, 0.6, 0.1, 0.1}, {0, 0, 0.5, 0.5}) == 0.0);
  // 0.02 / 0.04 with the intersection oracle value above.
  CHECK(zone_overlap_fraction({0, 0, 0.2, 0.2}, {0.1, 0, 0.2, 0.2}) == doctest::Approx(0.5).epsilon(1e-12));

  SUBCASE("zero-area bbox is invalid geometry") {
    try {
      zone_overlap_fraction({0.1, 0.1, 0.0, 0.2}, {0, 0, 0.5, 0.5});
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kInvalidGeometry);
    }
  }
}

TEST_CASE("zone_overlap_fraction is 1 iff contained and 0 iff disjoint") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 5000; ++i) {
    const Rect det = random_rect(rng);
    const Rect zone = random_rect(rng);
    const double f = zone_overlap_fraction(det, zone);
    CHECK((f == 1.0) == contains(zone, det));
    CHECK((f == 0.0) == (rect_intersection_area(det, zone) == 0.0));
    CHECK(f >= 0.0);
    CHECK(f <= 1.0);
  }
}

TEST_CASE("validate_plan") {
  const AssemblyPlan ref = reference_plan();
  CHECK(ref.stage_count() == 12);
  CHECK(ref.parts.size() == 7);
  CHECK(validate_plan(ref).ok());

  SUBCASE("dangling zone reference") {
    AssemblyPlan p = ref;
    p.stages[2].placements[0].zone_id = "nowhere";
    const auto r = validate_plan(p);
    CHECK_FALSE(r.ok());
    CHECK(mentions(r, "unknown zone 'nowhere'"));
  }
  SUBCASE("zero stages") {
    AssemblyPlan p = ref;
    p.stages.clear();
    CHECK(mentions(validate_plan(p), "zero stages"));
  }
  SUBCASE("stage indices out of order") {
    AssemblyPlan p = ref;
    std::swap(p.stages[0], p.stages[1]);
    CHECK(mentions(validate_plan(p), "carries index"));
  }
  SUBCASE("assembly zone count") {
    AssemblyPlan p = ref;
    p.zones[0].is_assembly_zone = false;
    CHECK(mentions(validate_plan(p), "no assembly zone"));
    p.zones[0].is_assembly_zone = true;
    p.zones[1].is_assembly_zone = true;
    CHECK(mentions(validate_plan(p), "more than one assembly zone"));
  }
  SUBCASE("duplicate ids, bad counts and unknown connections are all listed") {
    AssemblyPlan p = ref;
    p.parts.push_back(p.parts[0]);
    p.stages[0].placements[0].count = 0;
    p.stages[1].connection_id = "glue";
    p.zones[1].rect.w = 2.0;
    const auto r = validate_plan(p);
    CHECK(mentions(r, "duplicate part id"));
    CHECK(mentions(r, "count < 1"));
    CHECK(mentions(r, "unknown connection 'glue'"));
    CHECK(mentions(r, "invalid rect"));
    CHECK(r.violations.size() == 4);
  }
  SUBCASE("require_valid throws a validation error") {
    AssemblyPlan p = ref;
    p.stages.clear();
    CHECK_THROWS_AS(require_valid(p), Error);
  }
}

TEST_CASE("engine config bounds and defaults") {
  EngineConfig c;
  CHECK(c.overlap_threshold == 0.7);
  CHECK(c.connection_threshold == 0.6);
  CHECK(validate_config(c).empty());
  c.connection_threshold = 1.0;
  c.overlap_threshold = 0.0;
  c.frame_period_ms = 0;
  CHECK(validate_config(c).size() == 3);
  CHECK(config_from_json(nlohmann::json::object()) == EngineConfig{});
}

TEST_CASE("plan JSON") {
  const AssemblyPlan ref = reference_plan();
  CHECK(plan_from_json(plan_to_json(ref)) == ref);

  SUBCASE("shipped reference plan file matches the built-in plan") {
    CHECK(load_plan(ASMCTL_DATA_DIR "/reference_plan.json") == ref);
  }
  SUBCASE("unknown keys are rejected") {
    auto doc = plan_to_json(ref);
    doc["zones"][0]["colour"] = "red";
    CHECK_THROWS_WITH_AS(plan_from_json(doc), doctest::Contains("unknown key 'colour'"), Error);
    doc = plan_to_json(ref);
    doc["author"] = "x";
    CHECK_THROWS_AS(plan_from_json(doc), Error);
  }
  SUBCASE("bad stage kind") {
    auto doc = plan_to_json(ref);
    doc["stages"][0]["kind"] = "welding";
    CHECK_THROWS_AS(plan_from_json(doc), Error);
  }
  SUBCASE("missing file is an I/O error") {
    try {
      load_plan("/nonexistent/plan.json");
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kIo);
    }
  }
}
