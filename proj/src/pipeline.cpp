#include "ixrl/pipeline.hpp"

#include <fstream>
#include <set>

#include "ixrl/errors.hpp"
#include "ixrl/hash.hpp"

namespace ixrl {

namespace {

void ensure_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

SummarySpec summary_from_json(const nlohmann::json& j, SummarySpec s) {
    static const std::set<std::string> known = {"l", "seq_max_len", "fade_frames", "phase"};
    for (const auto& [key, _] : j.items())
        if (!known.count(key)) throw ConfigError("unknown summary key '" + key + "'");
    s.l = j.value("l", s.l);
    s.seq_max_len = j.value("seq_max_len", s.seq_max_len);
    s.fade_frames = j.value("fade_frames", s.fade_frames);
    if (j.contains("phase")) s.phase = parse_phase_filter(j.at("phase").get<std::string>());
    s.validate();
    return s;
}

// Trace header first line tells a trace from a dataset snapshot.
bool looks_like_trace(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw IoError("cannot open " + p.string());
    std::string line;
    std::getline(in, line);
    return line.find("\"ixrl-trace\"") != std::string::npos;
}

}  // namespace

std::optional<Phase> parse_phase_filter(std::string_view s) {
    if (s == "all") return std::nullopt;
    if (s == "train") return Phase::Train;
    if (s == "test") return Phase::Test;
    throw ConfigError("phase must be train, test or all, not '" + std::string(s) + "'");
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
    static const std::set<std::string> known = {"schema_version", "profile", "game",  "schedule",
                                                "analysis",       "summary", "seeds"};
    if (!j.is_object()) throw ConfigError("run config must be a JSON object");
    for (const auto& [key, _] : j.items())
        if (!known.count(key)) throw ConfigError("unknown run config key '" + key + "'");
    RunConfig c;
    try {
        if (j.contains("schema_version") && j.at("schema_version").get<int>() != 1)
            throw ConfigError("unsupported run config schema_version");
        if (j.contains("profile")) c.profile = profile_from_json(j.at("profile"));
        if (j.contains("game")) c.game = frogger::game_config_from_json(j.at("game"));
        if (j.contains("schedule")) c.schedule = schedule_from_json(j.at("schedule"));
        if (j.contains("analysis")) c.analysis = analysis_config_from_json(j.at("analysis"));
        if (j.contains("summary")) c.summary = summary_from_json(j.at("summary"), c.summary);
        if (j.contains("seeds")) c.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed run config: ") + e.what());
    }
    return c;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    try {
        return from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
    }
}

nlohmann::json RunConfig::to_json() const {
    return {{"schema_version", 1},
            {"profile", ixrl::to_json(profile)},
            {"game", frogger::to_json(game)},
            {"schedule", ixrl::to_json(schedule)},
            {"analysis", ixrl::to_json(analysis)},
            {"summary",
             {{"l", summary.l},
              {"seq_max_len", summary.seq_max_len},
              {"fade_frames", summary.fade_frames},
              {"phase", summary.phase ? std::string(ixrl::to_string(*summary.phase)) : std::string("all")}}},
            {"seeds", seeds}};
}

std::string RunConfig::hash() const {
    const nlohmann::json j = {{"profile", ixrl::to_json(profile)},
                              {"game", frogger::to_json(game)},
                              {"schedule", ixrl::to_json(schedule)}};
    return fingerprint_hex(j.dump());
}

TrainArtifacts train_to_files(const RunConfig& cfg, std::uint64_t seed, const std::filesystem::path& out) {
    ensure_dir(out);
    TrainArtifacts a;
    a.trace = out / "trace.tsv";
    a.dataset = out / "dataset.json";
    a.performance = out / "performance.json";
    a.config_hash = cfg.hash();

    TraceHeader header;
    header.json = {{"profile", to_json(cfg.profile)},
                   {"game", frogger::to_json(cfg.game)},
                   {"schedule", to_json(cfg.schedule)},
                   {"seed", seed},
                   {"config_hash", a.config_hash}};
    TraceWriter writer(a.trace, header);
    InteractionDataset ds(frogger::kNumObservations, frogger::kNumActions, cfg.profile.q_init);
    a.result = run_experiment(cfg.profile, cfg.schedule, cfg.game, seed, [&](const TransitionRecord& tr, double td) {
        writer.write(tr);
        ds.record(tr, td);
    });
    writer.close();
    ds.set_q(a.result.q);

    a.trace_hash = fingerprint_file(a.trace);
    ds.provenance = {{"profile", cfg.profile.name},
                     {"seed", seed},
                     {"config_hash", a.config_hash},
                     {"trace_hash", a.trace_hash},
                     {"phase", "all"}};
    ds.save(a.dataset);
    write_json_file(a.performance, {{"format", "ixrl-performance"},
                                    {"schema_version", 1},
                                    {"profile", cfg.profile.name},
                                    {"seed", seed},
                                    {"config_hash", a.config_hash},
                                    {"trace_hash", a.trace_hash},
                                    {"train", to_json(a.result.train)},
                                    {"test", to_json(a.result.test)}});
    return a;
}

InteractionDataset dataset_from_trace_file(const std::filesystem::path& trace_path, std::optional<Phase> phase) {
    const Trace trace = read_trace(trace_path);
    const auto& h = trace.header.json;
    AgentProfile profile;
    TrainingSchedule schedule;
    try {
        profile = profile_from_json(h.at("profile"));
        schedule = schedule_from_json(h.at("schedule"));
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("trace header incomplete: ") + e.what());
    } catch (const ConfigError& e) {
        throw SchemaError(std::string("trace header incomplete: ") + e.what());
    }
    auto ds = dataset_from_trace(trace, profile.q_init, schedule.alpha, schedule.gamma, phase);
    ds.provenance = {{"profile", profile.name},
                     {"seed", h.value("seed", std::uint64_t{0})},
                     {"config_hash", h.value("config_hash", std::string())},
                     {"trace_hash", fingerprint_file(trace_path)},
                     {"phase", phase ? std::string(to_string(*phase)) : std::string("all")}};
    return ds;
}

InterestingnessReport analyze_file(const std::filesystem::path& input, const AnalysisConfig& cfg,
                                   std::optional<Phase> phase) {
    if (looks_like_trace(input)) {
        auto r = analyze(dataset_from_trace_file(input, phase), cfg);
        r.provenance["source"] = "trace";
        return r;
    }
    if (phase) throw UsageError("a phase filter needs a trace as input, not a dataset snapshot");
    auto r = analyze(InteractionDataset::load(input), cfg);
    r.provenance["dataset_hash"] = fingerprint_file(input);
    r.provenance["source"] = "dataset";
    return r;
}

void verify_provenance(const InterestingnessReport& report, const std::filesystem::path& trace_path) {
    const std::string expected = report.provenance.value("trace_hash", std::string());
    if (expected.empty()) throw ProvenanceError("report carries no trace hash");
    const std::string actual = fingerprint_file(trace_path);
    if (actual != expected)
        throw ProvenanceError("trace " + trace_path.string() + " has hash " + actual + " but the report expects " +
                              expected);
}

SummaryArtifacts summarize_to_files(const std::filesystem::path& trace_path, const std::filesystem::path& report_path,
                                    const std::vector<Technique>& techniques, const SummarySpec& base,
                                    const std::filesystem::path& out, bool ppm) {
    const auto report = InterestingnessReport::load(report_path);
    verify_provenance(report, trace_path);
    const Trace trace = read_trace(trace_path);
    const TraceIndex index(trace, base.phase);
    const ReplayContext ctx = replay_context(trace.header);
    const std::string report_hash = fingerprint_file(report_path);
    ensure_dir(out);

    SummaryArtifacts a;
    for (Technique t : techniques) {
        SummarySpec spec = SummarySpec::preset(t);
        spec.l = base.l;
        spec.seq_max_len = base.seq_max_len;
        spec.fade_frames = base.fade_frames;
        spec.phase = base.phase;
        auto m = summarize(spec, report, index);
        m.provenance = {{"trace_hash", report.provenance.value("trace_hash", std::string())},
                        {"report_hash", report_hash},
                        {"config_hash", trace.header.json.value("config_hash", std::string())},
                        {"phase", spec.phase ? std::string(to_string(*spec.phase)) : std::string("all")}};
        a.frames += render(m, index, ctx, out / "frames", ppm);
        const auto path = out / (std::string(to_string(t)) + ".manifest.json");
        write_json_file(path, m.to_json());
        a.manifests.push_back(path);
        a.contents.push_back(std::move(m));
    }
    return a;
}

}  // namespace ixrl
