#include "doctest.h"
#include "ixrl/agent.hpp"
#include "ixrl/errors.hpp"
#include "ixrl/report.hpp"
#include "scratch.hpp"

using namespace ixrl;

namespace {

InteractionDataset small_dataset() {
    TrainingSchedule s;
    s.episodes_train = 40;
    s.episodes_test = 10;
    InteractionDataset ds(frogger::kNumObservations, frogger::kNumActions, 5000.0);
    const auto res = run_experiment(optimized_profile(), s, frogger::GameConfig::standard(), 2,
                                    [&](const TransitionRecord& tr, double td) { ds.record(tr, td); });
    ds.set_q(res.q);
    ds.provenance = {{"profile", "optimized"}, {"seed", 2}};
    return ds;
}

}  // namespace

TEST_SUITE("report") {

TEST_CASE("report round trip through a file") {
    Scratch tmp;
    AnalysisConfig cfg;
    cfg.extrema_min_count = 0;
    const auto r = analyze(small_dataset(), cfg);
    CHECK(r.provenance.at("seed") == 2);
    CHECK_FALSE(r.degenerate());
    for (ElementKind k : all_element_kinds()) {
        const auto& v = r.of(k);
        for (std::size_t i = 0; i < v.size(); ++i) {
            CHECK(v[i].rank == static_cast<int>(i) + 1);
            CHECK(v[i].kind == k);
        }
    }
    r.save(tmp / "r.json");
    CHECK(InterestingnessReport::load(tmp / "r.json") == r);
}

TEST_CASE("digest index parses back to the element counts") {
    const auto r = analyze(small_dataset(), AnalysisConfig{});
    const auto counts = parse_digest_index(format_digest(r, 3));
    REQUIRE(counts.size() == static_cast<std::size_t>(kNumElementKinds));
    for (ElementKind k : all_element_kinds()) CHECK(counts.at(k) == r.of(k).size());
}

TEST_CASE("an empty dataset gives a degenerate but valid report") {
    Scratch tmp;
    const auto r = analyze(InteractionDataset(frogger::kNumObservations, frogger::kNumActions, 0.0), AnalysisConfig{});
    CHECK(r.degenerate());
    CHECK(r.total_steps == 0);
    CHECK_FALSE(r.coverage.has_value());
    CHECK_FALSE(r.best_sequence.has_value());
    r.save(tmp / "e.json");
    CHECK(InterestingnessReport::load(tmp / "e.json") == r);
}

TEST_CASE("schema violations") {
    Scratch tmp;
    const auto r = analyze(small_dataset(), AnalysisConfig{});
    auto j = r.to_json();
    j["schema_version"] = 99;
    CHECK_THROWS_AS(InterestingnessReport::from_json(j), SchemaError);
    j = r.to_json();
    j.erase("scalars");
    CHECK_THROWS_AS(InterestingnessReport::from_json(j), SchemaError);
    j = r.to_json();
    j["format"] = "ixrl-dataset";
    CHECK_THROWS_AS(InterestingnessReport::from_json(j), SchemaError);
    CHECK_THROWS_AS(InterestingnessReport::load(tmp / "missing.json"), IoError);
}

TEST_CASE("element ranking direction") {
    std::vector<Element> v(3);
    v[0].state = 1, v[0].score = 0.5;
    v[1].state = 2, v[1].score = 0.1;
    v[2].state = 0, v[2].score = 0.5;
    auto asc = v;
    rank_elements(asc, ElementKind::CertainExec);
    CHECK(asc[0].state == 2);
    CHECK(asc[1].state == 0);  // tie broken by subject
    rank_elements(v, ElementKind::UncertainExec);
    CHECK(v[0].state == 0);
    CHECK(v[2].state == 2);
}

}
