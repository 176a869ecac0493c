#include <doctest.h>

#include "fixtures.hpp"
#include "meshplan/pipeline.hpp"
#include "meshplan/serialize.hpp"

using namespace meshplan;

TEST_CASE("diamond plan needs no feedback and is consistent") {
  const auto t = fixtures::diamond();
  for (const auto& s : Strategy::all()) {
    PipelineConfig cfg;
    cfg.strategy = s;
    const auto c = run_pipeline(t, cfg);
    CHECK(c.feedback_rounds == 0);
    CHECK(c.feedback.empty());
    CHECK(c.active.size() == 4);
    CHECK(c.exhaustive);
    CHECK(check_consistency(c).empty());
    CHECK(c.delays.worst_case >= 2);
    CHECK(c.warnings.empty());
    CHECK(c.active.colors.has_value() == s.bipartite);
  }
}

TEST_CASE("strategy names") {
  CHECK(Strategy::parse("BA").bipartite);
  CHECK(Strategy::parse("BA").sector_fill);
  CHECK_FALSE(Strategy::parse("FS").bipartite);
  CHECK(Strategy::parse("FA").name() == "FA");
  CHECK_THROWS_AS(Strategy::parse("XX"), Error);
  CHECK(Strategy::all().size() == 4);
}

TEST_CASE("pipeline is reproducible") {
  const auto t = fixtures::random_topology(5, 12, 2, 0.5);
  PipelineConfig cfg;
  cfg.tss_threshold = 4;
  cfg.diagnostics = true;
  const auto a = dump(to_json(run_pipeline(t, cfg)));
  const auto b = dump(to_json(run_pipeline(t, cfg)));
  CHECK(a == b);
}

TEST_CASE("feedback that would strand a node is rolled back") {
  // One-sector hub: six sets. Avoiding any leaf link cuts that leaf off.
  const auto t = fixtures::build(
      {fixtures::make_node("g", 0, 0, Layer::Gateway, 1), fixtures::make_node("p", 10, 0),
       fixtures::make_node("q", 0, 10), fixtures::make_node("r", -10, 0)},
      {{"g", "p"}, {"g", "q"}, {"g", "r"}});
  PipelineConfig cfg;
  cfg.selection.k = 3;
  cfg.tss_threshold = 4;
  const auto c = run_pipeline(t, cfg);
  CHECK(c.tss.size() == 6);
  CHECK(c.feedback_rounds == 0);
  CHECK(c.avoid_final.empty());
  REQUIRE(c.warnings.size() == 1);
  CHECK(c.warnings[0].find("accepting 6") != std::string::npos);
  CHECK(check_consistency(c).empty());
}

TEST_CASE("feedback shortens the schedule when alternatives exist") {
  int activated = 0;
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const auto t = fixtures::random_topology(seed * 7, 12, 2, 0.6);
    PipelineConfig cfg;
    cfg.tss_threshold = 4;
    cfg.diagnostics = true;
    cfg.anneal.steps = 200;
    cfg.anneal.restarts = 2;
    const auto c = run_pipeline(t, cfg);
    CHECK(check_consistency(c).empty());
    CHECK(c.feedback_rounds <= cfg.max_feedback_rounds);
    for (const auto& f : c.feedback) {
      CHECK(f.avoid_added > 0);
      CHECK(f.worst_after.has_value());
      CHECK(f.worst_before.has_value());
    }
    for (const auto& key : c.avoid_final) {
      for (LinkIndex l : c.active.active_links) CHECK_FALSE(key_of(t->link(l)) == key);
    }
    if (c.feedback_rounds > 0) {
      ++activated;
      // Nothing that was connected before the loop is lost by it.
      auto first = select_active_links(t, weight_links(*t), {2, false, 2});
      for (NodeIndex v : c.active.unconnected) {
        CHECK(std::binary_search(first.unconnected.begin(), first.unconnected.end(), v));
      }
    }
  }
  CHECK(activated > 0);
}

TEST_CASE("pipeline config validation") {
  PipelineConfig cfg;
  CHECK_NOTHROW(check_pipeline_config(cfg));
  cfg.tss_threshold = 1;
  CHECK_THROWS_AS(check_pipeline_config(cfg), Error);
  cfg = {};
  cfg.selection.k = 0;
  CHECK_THROWS_AS(check_pipeline_config(cfg), Error);
}
