#include <fstream>
#include <sstream>

#include "doctest.h"
#include "ixrl/errors.hpp"
#include "ixrl/pipeline.hpp"
#include "scratch.hpp"

using namespace ixrl;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

std::map<std::string, std::string> tree(const fs::path& root) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::recursive_directory_iterator(root))
        if (e.is_regular_file()) out[fs::relative(e.path(), root).string()] = slurp(e.path());
    return out;
}

}  // namespace

TEST_SUITE("summarizer") {

TEST_CASE("diversity objective") {
    const std::vector<double> xs{0.0, 0.5, 1.0};
    CHECK(diversity_objective(xs) == doctest::Approx(0.5));
    CHECK(diversity_objective(std::vector<double>{0.3}) == 0.0);
    CHECK(diversity_objective(std::vector<double>{}) == 0.0);
    CHECK(diversity_objective(std::vector<double>{0.2, 0.2, 0.9}) == 0.0);
}

TEST_CASE("online selection keeps the spread-out scores") {
    const std::vector<double> stream{0.0, 0.5, 1.0, 0.9};
    CHECK(select_diverse(stream, 3) == std::vector<std::size_t>{0, 1, 2});
    CHECK(select_diverse(stream, 1) == std::vector<std::size_t>{0});
    CHECK(select_diverse(stream, 0).empty());
    CHECK(select_diverse(stream, 10).size() == 4);
    // A later candidate that widens the spread replaces a crowded member.
    const std::vector<double> widen{0.4, 0.5, 0.6, 1.0};
    CHECK(select_diverse(widen, 3) == std::vector<std::size_t>{0, 2, 3});
}

TEST_CASE("replacement ties keep the buffer") {
    const std::vector<double> buf{0.0, 1.0};
    CHECK(replacement_index(buf, 1.0) == 2);
    const std::vector<double> same{0.5, 0.5};
    CHECK(replacement_index(same, 0.5) == 2);
}

TEST_CASE("technique names and compositions") {
    for (Technique t : all_techniques()) CHECK(parse_technique(to_string(t)) == t);
    CHECK(all_techniques().size() == 11);
    CHECK(parse_technique("Max-Min") == Technique::MaxMin);
    CHECK_THROWS_AS(parse_technique("Maximum"), ConfigError);

    SummarySpec s = SummarySpec::preset(Technique::MaxMin);
    s.k = 5;
    const auto c = composition(s);
    REQUIRE(c.size() == 2);
    CHECK(c[0] == std::pair{ElementKind::Maxima, 3});
    CHECK(c[1] == std::pair{ElementKind::Minima, 2});

    const auto all = composition(SummarySpec::preset(Technique::All));
    REQUIRE(all.size() == 6);
    for (const auto& [k, n] : all) CHECK(n == 1);

    s.l = 20;
    CHECK_THROWS_AS(s.validate(), ConfigError);
}

TEST_CASE("manifest json round trip") {
    HighlightManifest m;
    m.technique = Technique::CertUncert;
    m.profile = "optimized";
    m.k = 4;
    m.l = 21;
    m.provenance = {{"trace_hash", "abc"}};
    m.highlights.push_back({3, 15, 5, 25, ElementKind::CertainExec, 17, 1, 0.0, 120, 5});
    m.notes = {"note"};
    CHECK(HighlightManifest::from_json(m.to_json()) == m);
    auto j = m.to_json();
    j["schema_version"] = 2;
    CHECK_THROWS_AS(HighlightManifest::from_json(j), SchemaError);
}

TEST_CASE("end to end on a short run") {
    Scratch tmp;
    RunConfig cfg;
    cfg.schedule.episodes_train = 60;
    cfg.schedule.episodes_test = 20;
    cfg.analysis.extrema_min_count = 0;
    const auto art = train_to_files(cfg, 5, tmp / "run");
    const auto report = analyze_file(art.trace, cfg.analysis, std::nullopt);
    report.save(tmp / "report.json");

    const auto a = summarize_to_files(art.trace, tmp / "report.json", all_techniques(), cfg.summary, tmp / "sum");
    REQUIRE(a.contents.size() == 11);
    const Trace trace = read_trace(art.trace);
    const TraceIndex index(trace, Phase::Test);
    std::size_t total = 0;
    for (const auto& m : a.contents) {
        total += m.highlights.size();
        CHECK(m.provenance.at("trace_hash") == art.trace_hash);
        CHECK(static_cast<int>(m.highlights.size()) <= (m.technique == Technique::Seq ? 1 : m.k));
        for (const auto& h : m.highlights) {
            CHECK(h.start <= h.center_step);
            CHECK(h.center_step <= h.end);
            const auto& r = trace.records[index.record_at(h.episode, h.start)];
            CHECK(r.phase == Phase::Test);
            if (m.technique == Technique::Seq) {
                CHECK(h.frames() <= 80);
                continue;
            }
            CHECK(h.frames() <= 21);
            const bool clipped = h.start == 0 || h.end == index.last_step(h.episode);
            if (!clipped) {
                CHECK(h.frames() == 21);
                CHECK(h.center_step - h.start == 10);
            }
            CHECK(trace.records[index.record_at(h.episode, h.center_step)].s == h.state);
        }
        CHECK(HighlightManifest::from_json(read_json_file(tmp / "sum" / (std::string(to_string(m.technique)) +
                                                                         ".manifest.json"))) == m);
    }

    CHECK(total > 20);
    CHECK(a.frames > 0);

    // Same inputs, same bytes.
    summarize_to_files(art.trace, tmp / "report.json", all_techniques(), cfg.summary, tmp / "again");
    CHECK(tree(tmp / "sum") == tree(tmp / "again"));
}

TEST_CASE("replay divergence is an integrity error") {
    Scratch tmp;
    RunConfig cfg;
    cfg.schedule.episodes_train = 20;
    cfg.schedule.episodes_test = 5;
    const auto art = train_to_files(cfg, 8, tmp / "run");
    Trace trace = read_trace(art.trace);
    const TraceIndex clean(trace, Phase::Test);
    const std::size_t i = clean.filtered().front();
    HighlightManifest m;
    m.technique = Technique::Max;
    m.highlights.push_back({trace.records[i].episode, trace.records[i].step, trace.records[i].step,
                            trace.records[i].step + 2, ElementKind::Maxima, trace.records[i].s, 1, 0.0, 0, 0});
    CHECK(render(m, clean, replay_context(trace.header), tmp / "ok", false) > 0);
    trace.records[i + 1].r += 1.0;
    const TraceIndex tampered(trace, Phase::Test);
    CHECK_THROWS_AS(render(m, tampered, replay_context(trace.header), tmp / "bad", false), IntegrityError);
}

}
