#include <fstream>
#include <numeric>
#include <sstream>

#include "doctest.h"
#include "ixrl/agent.hpp"
#include "ixrl/errors.hpp"
#include "ixrl/recorder.hpp"
#include "scratch.hpp"

using namespace ixrl;

namespace {

struct Run {
    std::vector<TransitionRecord> records;
    InteractionDataset ds{frogger::kNumObservations, frogger::kNumActions, 5000.0};
    TrainingSchedule schedule;
};

Run small_run(std::uint64_t seed = 4) {
    Run r;
    r.schedule.episodes_train = 20;
    r.schedule.episodes_test = 5;
    const auto res = run_experiment(optimized_profile(), r.schedule, frogger::GameConfig::standard(), seed,
                                    [&](const TransitionRecord& tr, double td) {
                                        r.records.push_back(tr);
                                        r.ds.record(tr, td);
                                    });
    r.ds.set_q(res.q);
    return r;
}

}  // namespace

TEST_SUITE("recorder") {

TEST_CASE("counter invariants") {
    const auto run = small_run();
    const auto& ds = run.ds;
    CHECK(ds.total_steps() == run.records.size());
    std::uint64_t total = 0;
    for (int s : ds.visited_states()) {
        std::uint64_t by_action = 0;
        for (int a = 0; a < ds.num_actions(); ++a) {
            std::uint64_t by_succ = 0;
            for (const auto& [sn, c] : ds.successors(s, a)) by_succ += c;
            CHECK(by_succ == ds.count(s, a));
            by_action += ds.count(s, a);
            if (ds.count(s, a) > 0) {
                double p = 0.0;
                for (const auto& x : ds.estimated_transition(s, a)) p += x.probability;
                CHECK(p == doctest::Approx(1.0));
                CHECK(ds.last_seen(s, a) <= ds.last_seen(s));
            }
        }
        CHECK(by_action == ds.count(s));
        const auto pi = ds.interaction_policy(s);
        REQUIRE(pi);
        CHECK(std::accumulate(pi->begin(), pi->end(), 0.0) == doctest::Approx(1.0));
        CHECK(ds.last_seen(s) >= 0);
        CHECK(ds.last_seen(s) < static_cast<std::int64_t>(ds.total_steps()));
        total += ds.count(s);
    }
    CHECK(total == ds.total_steps());
    CHECK_FALSE(ds.interaction_policy(frogger::kNumObservations - 1).has_value());
}

TEST_CASE("running means follow their definitions") {
    InteractionDataset ds(3, 2, 0.0, 3);
    TransitionRecord tr;
    tr.s = 0;
    tr.a = 1;
    tr.s_next = 2;
    tr.r = -1;
    ds.record(tr, 4.0);
    tr.r = -3;
    tr.s_next = 1;
    ds.record(tr, -2.0);
    CHECK(ds.mean_reward(0, 1) == doctest::Approx(-2.0));
    CHECK(ds.mean_td_error(0, 1) == doctest::Approx(1.0));
    CHECK(ds.mean_abs_td_error(0, 1) == doctest::Approx(3.0));
    CHECK(ds.count(0, 1, 2) == 1);
    CHECK(ds.last_seen(0) == 1);
    tr.s_next = 3;
    CHECK_THROWS_AS(ds.record(tr, 0.0), UsageError);
}

TEST_CASE("snapshot round trip") {
    Scratch tmp;
    auto run = small_run();
    run.ds.provenance = {{"seed", 4}};
    run.ds.save(tmp / "ds.json");
    const auto back = InteractionDataset::load(tmp / "ds.json");
    CHECK(back == run.ds);
}

TEST_CASE("trace round trip and replay") {
    Scratch tmp;
    const auto run = small_run(6);
    TraceHeader h;
    h.json = {{"seed", 6}};
    TraceWriter w(tmp / "t.tsv", h);
    for (const auto& tr : run.records) w.write(tr);
    w.close();
    const auto trace = read_trace(tmp / "t.tsv");
    CHECK(trace.records == run.records);
    CHECK(trace.header.json.at("seed") == 6);

    const auto rebuilt = dataset_from_trace(trace, 5000.0, run.schedule.alpha, run.schedule.gamma);
    CHECK(rebuilt.q() == run.ds.q());
    CHECK(rebuilt.total_steps() == run.ds.total_steps());
    for (int s : run.ds.visited_states())
        for (int a = 0; a < 4; ++a) {
            CHECK(rebuilt.count(s, a) == run.ds.count(s, a));
            if (run.ds.count(s, a)) CHECK(rebuilt.mean_td_error(s, a) == run.ds.mean_td_error(s, a));
        }

    const auto test_only = dataset_from_trace(trace, 5000.0, run.schedule.alpha, run.schedule.gamma, Phase::Test);
    std::uint64_t n_test = 0;
    for (const auto& tr : run.records) n_test += tr.phase == Phase::Test;
    CHECK(test_only.total_steps() == n_test);
    CHECK(test_only.q() == run.ds.q());
}

TEST_CASE("record formatting round trip") {
    TransitionRecord tr;
    tr.episode = 3;
    tr.step = 17;
    tr.phase = Phase::Test;
    tr.s = 1295;
    tr.a = 2;
    tr.r = -501;
    tr.s_next = 7;
    tr.score = 1210;
    tr.region = frogger::Region::River;
    tr.death_cause = frogger::DeathCause::OffScreenLog;
    tr.level = 3;
    CHECK(parse_record(format_record(tr)) == tr);
    tr.death_cause.reset();
    CHECK(parse_record(format_record(tr)) == tr);
}

TEST_CASE("damaged files are schema errors") {
    Scratch tmp;
    const auto run = small_run();
    TraceWriter w(tmp / "t.tsv", TraceHeader{});
    for (const auto& tr : run.records) w.write(tr);
    w.close();

    std::ifstream in(tmp / "t.tsv", std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string all = buf.str();
    // Cut in the middle of a record line.
    const auto cut = all.rfind('\t', all.size() - 2);
    std::ofstream(tmp / "cut.tsv", std::ios::binary) << all.substr(0, cut);
    CHECK_THROWS_AS(read_trace(tmp / "cut.tsv"), SchemaError);

    std::ofstream(tmp / "empty.tsv", std::ios::binary) << "";
    CHECK_THROWS_AS(read_trace(tmp / "empty.tsv"), SchemaError);
    std::ofstream(tmp / "bad.json") << "{\"format\": \"ixrl-dataset\", ";
    CHECK_THROWS_AS(InteractionDataset::load(tmp / "bad.json"), SchemaError);
    std::ofstream(tmp / "other.json") << "{\"format\": \"something\"}";
    CHECK_THROWS_AS(InteractionDataset::load(tmp / "other.json"), SchemaError);
    CHECK_THROWS_AS(read_trace(tmp / "missing.tsv"), IoError);
    CHECK_THROWS_AS(parse_record("1\t2\t3"), SchemaError);
}

}
