// Drives the ixrl binary and checks its exit codes.
#include <sys/wait.h>

#include <cstdlib>
#include <fstream>

#include "doctest.h"
#include "ixrl/errors.hpp"
#include "ixrl/pipeline.hpp"
#include "scratch.hpp"

#ifndef IXRL_CLI
#error "IXRL_CLI must name the command-line binary"
#endif

using namespace ixrl;

namespace {

int run(const std::string& args) {
    const std::string cmd = std::string(IXRL_CLI) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("exit codes") {
    Scratch tmp;
    const std::string d = tmp.dir.string();
    CHECK(run("--help") == 0);
    CHECK(run("") == 8);
    CHECK(run("train --bogus") == 8);
    CHECK(run("train --profile nobody --out " + d + "/x") == 2);

    std::ofstream(tmp / "bad.json") << "{\"profile\": \"optimized\", \"colour\": 3}";
    CHECK(run("train --config " + d + "/bad.json --out " + d + "/x") == 2);
    std::ofstream(tmp / "notjson.json") << "{";
    CHECK(run("train --config " + d + "/notjson.json --out " + d + "/x") == 2);

    REQUIRE(run("train --seed 3 --episodes-train 30 --episodes-test 10 --out " + d + "/run") == 0);
    CHECK(std::filesystem::exists(tmp / "run/trace.tsv"));
    CHECK(std::filesystem::exists(tmp / "run/performance.json"));

    CHECK(run("analyze " + d + "/missing.json --out " + d + "/a") == 3);
    std::ofstream(tmp / "garbage.json") << "[1, 2]";
    CHECK(run("analyze " + d + "/garbage.json --out " + d + "/a") == 4);
    CHECK(run("analyze " + d + "/run/dataset.json --phase test --out " + d + "/a") == 8);
    CHECK(run("analyze " + d + "/run/trace.tsv --phase sideways --out " + d + "/a") == 2);

    const int analyzed = run("analyze " + d + "/run/trace.tsv --phase all --out " + d + "/a");
    CHECK((analyzed == 0 || analyzed == 10));
    CHECK(run("report " + d + "/a/report.json --out " + d + "/digest.txt") == 0);
    CHECK(run("summarize --trace " + d + "/run/trace.tsv --report " + d + "/a/report.json --technique Max --no-ppm --out " + d + "/s") == 0);
    CHECK(run("summarize --trace " + d + "/run/trace.tsv --report " + d + "/a/report.json --technique Nope --out " + d + "/s") == 2);

    // A different trace breaks the provenance chain.
    REQUIRE(run("train --seed 4 --episodes-train 30 --episodes-test 10 --out " + d + "/other") == 0);
    CHECK(run("summarize --trace " + d + "/other/trace.tsv --report " + d + "/a/report.json --out " + d + "/s") == 5);
}

TEST_CASE("dataset and trace analyses agree") {
    Scratch tmp;
    RunConfig cfg;
    cfg.schedule.episodes_train = 30;
    cfg.schedule.episodes_test = 10;
    const auto art = train_to_files(cfg, 12, tmp / "run");
    const auto from_ds = analyze_file(art.dataset, cfg.analysis, std::nullopt);
    const auto from_trace = analyze_file(art.trace, cfg.analysis, std::nullopt);
    CHECK(from_ds.elements == from_trace.elements);
    CHECK(from_ds.provenance.at("trace_hash") == art.trace_hash);
    CHECK(from_trace.provenance.at("trace_hash") == art.trace_hash);
    CHECK_NOTHROW(verify_provenance(from_ds, art.trace));
    CHECK_THROWS_AS(analyze_file(art.dataset, cfg.analysis, Phase::Test), UsageError);
}

TEST_CASE("run config parsing") {
    const auto c = RunConfig::from_json({{"profile", "fear-water"}, {"seeds", {1, 2}}, {"summary", {{"l", 11}}}});
    CHECK(c.profile == fear_water_profile());
    CHECK(c.seeds == std::vector<std::uint64_t>{1, 2});
    CHECK(c.summary.l == 11);
    CHECK(RunConfig::from_json(c.to_json()).hash() == c.hash());
    CHECK_THROWS_AS(RunConfig::from_json({{"summary", {{"k", 3}}}}), ConfigError);
    CHECK_THROWS_AS(RunConfig::from_json({{"schema_version", 2}}), ConfigError);
    CHECK_THROWS_AS(RunConfig::from_json(nlohmann::json::array()), ConfigError);
}

}
