// ixrl command-line front end: train, analyze, summarize, report.
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ixrl/errors.hpp"
#include "ixrl/pipeline.hpp"

namespace fs = std::filesystem;
using namespace ixrl;

namespace {

enum Exit : int {
    kOk = 0,
    kInternal = 1,
    kConfig = 2,
    kIo = 3,
    kSchema = 4,
    kProvenance = 5,
    kIntegrity = 6,
    kNumeric = 7,
    kUsage = 8,
    kDegenerate = 10,
};

struct Options {
    std::string profile;
    std::vector<std::uint64_t> seeds;
    std::optional<int> episodes_train;
    std::optional<int> episodes_test;
    std::string config;
    std::vector<std::string> techniques;
    std::string phase;
    std::string out = "out";
    std::string input;
    std::string trace;
    std::string report;
    std::string digest_out = "-";
    int rows = 10;
    bool no_ppm = false;
};

RunConfig load_config(const Options& o) {
    RunConfig c = o.config.empty() ? RunConfig{} : RunConfig::load(o.config);
    if (!o.profile.empty()) c.profile = profile_by_name(o.profile);
    if (!o.seeds.empty()) c.seeds = o.seeds;
    if (o.episodes_train) c.schedule.episodes_train = *o.episodes_train;
    if (o.episodes_test) c.schedule.episodes_test = *o.episodes_test;
    c.schedule.validate();
    return c;
}

int cmd_train(const Options& o) {
    const RunConfig c = load_config(o);
    for (std::uint64_t seed : c.seeds) {
        const fs::path dir = c.seeds.size() == 1 ? fs::path(o.out) : fs::path(o.out) / ("seed-" + std::to_string(seed));
        const auto a = train_to_files(c, seed, dir);
        const auto& t = a.result.test;
        std::printf("%s seed %llu: test mean level %.2f, deaths river %ld car %ld timeout %ld off-screen %ld, trace %s\n",
                    c.profile.name.c_str(), static_cast<unsigned long long>(seed), t.mean_level,
                    t.deaths_by_cause[0], t.deaths_by_cause[1], t.deaths_by_cause[2], t.deaths_by_cause[3],
                    a.trace.string().c_str());
    }
    return kOk;
}

int cmd_analyze(const Options& o) {
    const RunConfig c = load_config(o);
    const auto phase = o.phase.empty() ? std::nullopt : parse_phase_filter(o.phase);
    const auto report = analyze_file(o.input, c.analysis, phase);
    fs::path out(o.out);
    if (out.extension() != ".json") {
        std::error_code ec;
        fs::create_directories(out, ec);
        if (ec) throw IoError("cannot create " + out.string());
        out /= "report.json";
    }
    report.save(out);
    std::printf("report written to %s\n", out.string().c_str());
    if (report.degenerate()) {
        std::fprintf(stderr, "analysis degenerate: no value extrema found\n");
        return kDegenerate;
    }
    return kOk;
}

int cmd_summarize(const Options& o) {
    const RunConfig c = load_config(o);
    SummarySpec base = c.summary;
    if (!o.phase.empty()) base.phase = parse_phase_filter(o.phase);
    std::vector<Technique> ts;
    if (o.techniques.empty() || (o.techniques.size() == 1 && o.techniques[0] == "all"))
        ts = all_techniques();
    else
        for (const auto& t : o.techniques) ts.push_back(parse_technique(t));
    const auto a = summarize_to_files(o.trace, o.report, ts, base, o.out, !o.no_ppm);
    for (std::size_t i = 0; i < a.manifests.size(); ++i)
        std::printf("%-12s %zu highlight(s)%s -> %s\n", std::string(to_string(a.contents[i].technique)).c_str(),
                    a.contents[i].highlights.size(), a.contents[i].synthetic ? " (synthetic path)" : "",
                    a.manifests[i].string().c_str());
    std::printf("%zu frame files\n", a.frames);
    return kOk;
}

int cmd_report(const Options& o) {
    const auto report = InterestingnessReport::load(o.input);
    const std::string digest = format_digest(report, o.rows);
    if (o.digest_out.empty() || o.digest_out == "-") {
        std::fputs(digest.c_str(), stdout);
    } else {
        std::FILE* f = std::fopen(o.digest_out.c_str(), "wb");
        if (!f) throw IoError("cannot write " + o.digest_out);
        const bool ok = std::fputs(digest.c_str(), f) >= 0;
        if (std::fclose(f) != 0 || !ok) throw IoError("write failed for " + o.digest_out);
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Interestingness analysis and highlight summaries for tabular RL agents"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", o.config, "run configuration JSON");
    };

    auto* train = app.add_subcommand("train", "train an agent and record its interaction trace");
    add_common(train);
    train->add_option("--profile", o.profile, "optimized, high-vision or fear-water");
    train->add_option("--seed", o.seeds, "run seed (repeatable)");
    train->add_option("--episodes-train", o.episodes_train, "training episodes");
    train->add_option("--episodes-test", o.episodes_test, "test episodes");
    train->add_option("--out", o.out, "output directory");

    auto* analyze = app.add_subcommand("analyze", "extract interestingness elements from a dataset or trace");
    add_common(analyze);
    analyze->add_option("input", o.input, "dataset.json or trace.tsv")->required();
    analyze->add_option("--phase", o.phase, "train, test or all (needs a trace unless all)");
    analyze->add_option("--out", o.out, "output directory or .json path");

    auto* summarize = app.add_subcommand("summarize", "select and render highlight summaries");
    add_common(summarize);
    summarize->add_option("--trace", o.trace, "trace.tsv")->required();
    summarize->add_option("--report", o.report, "report.json")->required();
    summarize->add_option("--technique", o.techniques, "technique name (repeatable, default all)");
    summarize->add_option("--phase", o.phase, "train, test or all (default test)");
    summarize->add_option("--out", o.out, "output directory");
    summarize->add_flag("--no-ppm", o.no_ppm, "write text frames only");

    auto* report = app.add_subcommand("report", "print a readable digest of a report");
    report->add_option("input", o.input, "report.json")->required();
    report->add_option("--rows", o.rows, "rows per element table");
    report->add_option("--out", o.digest_out, "digest file, '-' for stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (train->parsed()) return cmd_train(o);
        if (analyze->parsed()) return cmd_analyze(o);
        if (summarize->parsed()) return cmd_summarize(o);
        if (report->parsed()) return cmd_report(o);
        return kUsage;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return kIo;
    } catch (const SchemaError& e) {
        std::cerr << "schema error: " << e.what() << '\n';
        return kSchema;
    } catch (const ProvenanceError& e) {
        std::cerr << "provenance error: " << e.what() << '\n';
        return kProvenance;
    } catch (const IntegrityError& e) {
        std::cerr << "integrity error: " << e.what() << '\n';
        return kIntegrity;
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return kNumeric;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kInternal;
    }
}
