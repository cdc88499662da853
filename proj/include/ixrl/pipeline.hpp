#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ixrl/agent.hpp"
#include "ixrl/analysis.hpp"
#include "ixrl/frogger.hpp"
#include "ixrl/recorder.hpp"
#include "ixrl/report.hpp"
#include "ixrl/summarizer.hpp"
#include "json.hpp"

namespace ixrl {

// Everything a run needs. Loaded from one JSON file; absent keys keep defaults.
struct RunConfig {
    AgentProfile profile = optimized_profile();
    frogger::GameConfig game = frogger::GameConfig::standard();
    TrainingSchedule schedule;
    AnalysisConfig analysis;
    SummarySpec summary;  // l, seq_max_len, fade_frames, phase; technique and k come from presets
    std::vector<std::uint64_t> seeds = {1};

    static RunConfig from_json(const nlohmann::json& j);  // ConfigError on bad input
    static RunConfig load(const std::filesystem::path& path);
    nlohmann::json to_json() const;
    // Hash over profile, game and schedule: what determines a trace.
    std::string hash() const;
};

std::optional<Phase> parse_phase_filter(std::string_view s);  // "all" gives nullopt

struct TrainArtifacts {
    std::filesystem::path trace;
    std::filesystem::path dataset;
    std::filesystem::path performance;
    std::string trace_hash;
    std::string config_hash;
    ExperimentResult result;
};

// Runs one experiment and writes trace.tsv, dataset.json and performance.json into `out`.
TrainArtifacts train_to_files(const RunConfig& cfg, std::uint64_t seed, const std::filesystem::path& out);

// Builds a dataset from a trace file, re-deriving Q by replay; provenance
// records the trace hash and the phase filter.
InteractionDataset dataset_from_trace_file(const std::filesystem::path& trace_path, std::optional<Phase> phase);

// Loads a dataset snapshot or a trace (detected by content) and analyzes it.
// A phase filter other than all requires a trace.
InterestingnessReport analyze_file(const std::filesystem::path& input, const AnalysisConfig& cfg,
                                   std::optional<Phase> phase);

// Throws ProvenanceError unless the report derives from this exact trace.
void verify_provenance(const InterestingnessReport& report, const std::filesystem::path& trace_path);

struct SummaryArtifacts {
    std::vector<std::filesystem::path> manifests;
    std::vector<HighlightManifest> contents;
    std::size_t frames = 0;
};

SummaryArtifacts summarize_to_files(const std::filesystem::path& trace_path, const std::filesystem::path& report_path,
                                    const std::vector<Technique>& techniques, const SummarySpec& base,
                                    const std::filesystem::path& out, bool ppm = true);

}  // namespace ixrl
