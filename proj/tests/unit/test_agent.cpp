#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "ixrl/agent.hpp"
#include "ixrl/errors.hpp"

using namespace ixrl;

TEST_SUITE("agent") {

TEST_CASE("softmax reference values") {
    const std::vector<double> q{1.0, 0.0};
    const auto p = softmax(q, 1.0);
    CHECK(p[0] == doctest::Approx(std::exp(1.0) / (1.0 + std::exp(1.0))).epsilon(1e-12));
    CHECK(p[0] == doctest::Approx(0.731059).epsilon(1e-6));
    CHECK(p[0] + p[1] == doctest::Approx(1.0));

    const std::vector<double> flat{3.0, 3.0, 3.0, 3.0};
    for (double x : softmax(flat, 0.05)) CHECK(x == doctest::Approx(0.25));

    // Huge gaps must not overflow after the max shift.
    const std::vector<double> big{5000.0, -10000.0, 0.0, 4999.0};
    const auto pb = softmax(big, 0.05);
    CHECK(pb[0] == doctest::Approx(1.0));
    CHECK(std::isfinite(pb[1]));
}

TEST_CASE("softmax rejects bad input") {
    const std::vector<double> q{1.0, 2.0};
    CHECK_THROWS_AS(softmax(q, 0.0), NumericError);
    const std::vector<double> nan{1.0, std::nan("")};
    CHECK_THROWS_AS(softmax(nan, 1.0), NumericError);
    CHECK_THROWS_AS(softmax(std::vector<double>{}, 1.0), NumericError);
}

TEST_CASE("action sampling follows the softmax") {
    const std::vector<double> q{0.0, std::log(3.0), 0.0, 0.0};
    std::mt19937_64 rng(11);
    std::vector<int> hits(4, 0);
    const int n = 60000;
    for (int i = 0; i < n; ++i) ++hits[static_cast<std::size_t>(select_action(q, 1.0, rng))];
    CHECK(hits[1] / double(n) == doctest::Approx(0.5).epsilon(0.02));
    CHECK(hits[0] / double(n) == doctest::Approx(1.0 / 6).epsilon(0.05));
}

TEST_CASE("temperature schedule") {
    TrainingSchedule s;
    CHECK(s.beta(0) == doctest::Approx(20.05));
    CHECK(s.beta(100) == doctest::Approx(0.05 + 20.0 * std::pow(0.995, 100)));
    CHECK(s.beta(5000) == doctest::Approx(0.05).epsilon(1e-6));
    s.alpha = 0.0;
    CHECK_THROWS_AS(s.validate(), ConfigError);
}

TEST_CASE("q update reference values") {
    QTable q(4, 4, 5000.0);
    q(0, 1) = 0.0;
    // td = -1 + 0.9 * 5000 - 0 = 4499; Q += 0.3 * td.
    const double td = q_update(q, 0, 1, -1.0, 2, 0.3, 0.9);
    CHECK(td == doctest::Approx(4499.0));
    CHECK(q(0, 1) == doctest::Approx(1349.7));

    QTable z(2, 2, 0.0);
    const double td2 = q_update(z, 0, 0, -200.0, 1, 0.3, 0.9);
    CHECK(td2 == doctest::Approx(-200.0));
    CHECK(z(0, 0) == doctest::Approx(-60.0));
    CHECK_THROWS_AS(q_update(z, 0, 0, 0.0, 1, 1.5, 0.9), ConfigError);
}

TEST_CASE("a fixed point of the backup is left unchanged") {
    // Deterministic chain 0 -> 1 -> 2 (self loop) with reward -1 everywhere:
    // Q = -1 / (1 - gamma) satisfies the update exactly.
    const double gamma = 0.9, fixed = -1.0 / (1.0 - gamma);
    QTable q(3, 1, fixed);
    for (int i = 0; i < 1000; ++i) {
        q_update(q, 0, 0, -1.0, 1, 0.3, gamma);
        q_update(q, 1, 0, -1.0, 2, 0.3, gamma);
        q_update(q, 2, 0, -1.0, 2, 0.3, gamma);
    }
    for (int s = 0; s < 3; ++s) CHECK(q(s, 0) == doctest::Approx(fixed).epsilon(1e-12));
}

TEST_CASE("greedy ties go to the first action") {
    QTable q(1, 4, 0.0);
    q(0, 2) = 7.0;
    q(0, 3) = 7.0;
    CHECK(q.greedy_action(0) == 2);
    CHECK(q.value(0) == 7.0);
}

TEST_CASE("profiles") {
    CHECK(profile_by_name("optimized") == optimized_profile());
    CHECK(profile_by_name("high-vision").vis_h == 140.0);
    CHECK(profile_by_name("high-vision").vis_v == 120.0);
    CHECK(profile_by_name("fear-water").r_river == -10000.0);
    CHECK(profile_by_name("fear-water").q_init == 0.0);
    CHECK_THROWS_AS(profile_by_name("nope"), ConfigError);
    CHECK(profile_from_json(to_json(fear_water_profile())) == fear_water_profile());
}

TEST_CASE("experiments are deterministic and report their TD errors") {
    TrainingSchedule s;
    s.episodes_train = 15;
    s.episodes_test = 5;
    std::vector<TransitionRecord> a, b;
    std::vector<double> tds;
    const auto ra = run_experiment(optimized_profile(), s, frogger::GameConfig::standard(), 9,
                                   [&](const TransitionRecord& tr, double td) {
                                       a.push_back(tr);
                                       tds.push_back(td);
                                   });
    const auto rb = run_experiment(optimized_profile(), s, frogger::GameConfig::standard(), 9,
                                   [&](const TransitionRecord& tr, double) { b.push_back(tr); });
    CHECK(a == b);
    CHECK(ra.q == rb.q);
    CHECK(ra.train.episodes == 15);
    CHECK(ra.test.episodes == 5);

    // Replaying the backups reproduces both the TD errors and the final table.
    QTable q(frogger::kNumObservations, frogger::kNumActions, 5000.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        CHECK(q_update(q, a[i].s, a[i].a, a[i].r, a[i].s_next, s.alpha, s.gamma) == tds[i]);
    CHECK(q == ra.q);
}

}
