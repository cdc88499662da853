#include <map>
#include <random>

#include "doctest.h"
#include "ixrl/fp_growth.hpp"

using namespace ixrl;

namespace {

// Every nonempty itemset with its support, by scanning all subsets of the
// item universe against every transaction.
std::map<std::vector<int>, std::uint64_t> brute_force(const std::vector<WeightedTransaction>& db, int universe) {
    std::map<std::vector<int>, std::uint64_t> out;
    for (std::uint32_t mask = 1; mask < (1u << universe); ++mask) {
        std::vector<int> set;
        for (int i = 0; i < universe; ++i)
            if (mask & (1u << i)) set.push_back(i);
        std::uint64_t s = 0;
        for (const auto& t : db) {
            bool all = true;
            for (int x : set) all = all && std::find(t.items.begin(), t.items.end(), x) != t.items.end();
            if (all) s += t.weight;
        }
        if (s > 0) out[set] = s;
    }
    return out;
}

}  // namespace

TEST_SUITE("fp_growth") {

TEST_CASE("jaccard of a two-item set") {
    // supp(AB) = 2, supp(A or B) = 3.
    const std::vector<WeightedTransaction> db = {{{0, 1}, 2}, {{0}, 1}};
    const SupportIndex idx(fp_growth(db));
    CHECK(idx.support({0, 1}) == 2);
    CHECK(idx.any_support({0, 1}) == 3);
    CHECK(idx.jaccard({0, 1}) == doctest::Approx(2.0 / 3.0));
    CHECK(idx.jaccard({5, 6}) == 0.0);
}

TEST_CASE("lift of independent and of perfectly coupled items") {
    const std::vector<WeightedTransaction> indep = {{{0, 1}, 1}, {{0}, 1}, {{1}, 1}, {{2}, 1}};
    const auto r1 = rules_of({0, 1}, SupportIndex(fp_growth(indep)), 4);
    REQUIRE(r1.size() == 2);
    for (const auto& r : r1) CHECK(r.lift == doctest::Approx(1.0));

    const std::vector<WeightedTransaction> coupled = {{{0, 1}, 1}, {{2}, 1}};
    const auto r2 = rules_of({0, 1}, SupportIndex(fp_growth(coupled)), 2);
    REQUIRE(r2.size() == 2);
    for (const auto& r : r2) CHECK(r.lift == doctest::Approx(2.0));
}

TEST_CASE("rules enumerate every split") {
    const std::vector<WeightedTransaction> db = {{{0, 1, 2}, 3}, {{0, 2}, 1}};
    const auto rules = rules_of({0, 1, 2}, SupportIndex(fp_growth(db)), 4);
    CHECK(rules.size() == 6);
}

TEST_CASE("output ordering and min support") {
    const std::vector<WeightedTransaction> db = {{{3, 1}, 1}, {{1, 2}, 5}};
    const auto sets = fp_growth(db, 2);
    REQUIRE(sets.size() == 3);
    CHECK(sets[0].items == std::vector<int>{1});
    CHECK(sets[0].support == 6);
    CHECK(sets[1].items == std::vector<int>{2});
    CHECK(sets[2].items == std::vector<int>{1, 2});
}

TEST_CASE("matches brute force on random weighted databases") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 30; ++trial) {
        const int universe = 6;
        std::vector<WeightedTransaction> db;
        std::uniform_int_distribution<int> len(1, 4), item(0, universe - 1), w(1, 9);
        for (int t = 0; t < 12; ++t) {
            WeightedTransaction tx;
            const int n = len(rng);
            while (static_cast<int>(tx.items.size()) < n) {
                const int x = item(rng);
                if (std::find(tx.items.begin(), tx.items.end(), x) == tx.items.end()) tx.items.push_back(x);
            }
            tx.weight = static_cast<std::uint64_t>(w(rng));
            db.push_back(tx);
        }
        std::map<std::vector<int>, std::uint64_t> mined;
        for (const auto& s : fp_growth(db)) mined[s.items] = s.support;
        CHECK(mined == brute_force(db, universe));
    }
}

}
