#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ixrl/analysis.hpp"
#include "ixrl/elements.hpp"
#include "ixrl/meta.hpp"
#include "json.hpp"

namespace ixrl {

// Every element kind plus the scalar metrics of one analyzed dataset.
struct InterestingnessReport {
    static constexpr int kSchemaVersion = 1;

    nlohmann::json provenance = nlohmann::json::object();
    AnalysisConfig config;
    std::map<ElementKind, std::vector<Element>> elements;
    std::uint64_t total_steps = 0;
    long obs_space_size = 0;
    long unique_observations = 0;
    std::optional<double> coverage;
    std::optional<double> dispersion;
    std::optional<double> mean_prediction_error;
    std::vector<FeatureAggregate> feature_aggregates;
    std::optional<SequenceResult> best_sequence;

    const std::vector<Element>& of(ElementKind k) const;
    // True when the transition-value analysis found no extrema at all.
    bool degenerate() const;

    nlohmann::json to_json() const;
    static InterestingnessReport from_json(const nlohmann::json& j);
    void save(const std::filesystem::path& path) const;
    static InterestingnessReport load(const std::filesystem::path& path);

    friend bool operator==(const InterestingnessReport&, const InterestingnessReport&) = default;
};

InterestingnessReport analyze(const InteractionDataset& ds, const AnalysisConfig& cfg,
                              const GoalPredicate& is_goal = frogger_goal);

// Plain-text digest: an index of element counts, then ranked tables.
std::string format_digest(const InterestingnessReport& report, int max_rows = 10);
// Reads the index section of a digest back into per-kind counts.
std::map<ElementKind, std::size_t> parse_digest_index(const std::string& digest);

// Writes JSON with a trailing newline; throws IoError on failure.
void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace ixrl
