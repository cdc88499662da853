#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ixrl/agent.hpp"
#include "ixrl/elements.hpp"
#include "ixrl/frogger.hpp"
#include "ixrl/meta.hpp"
#include "ixrl/recorder.hpp"
#include "ixrl/report.hpp"
#include "json.hpp"

namespace ixrl {

enum class Technique {
    Max, Min, Cert, Uncert, Freq, Infreq, MaxMin, CertUncert, FreqInfreq, All, Seq
};

std::string_view to_string(Technique t);
Technique parse_technique(std::string_view s);  // ConfigError on unknown names
const std::vector<Technique>& all_techniques();

struct SummarySpec {
    Technique technique = Technique::Max;
    int k = 4;
    int l = 21;  // odd window length in steps
    int seq_max_len = 80;
    int fade_frames = 5;
    std::optional<Phase> phase = Phase::Test;  // nullopt selects every phase

    static SummarySpec preset(Technique t);
    void validate() const;
};

// Element kinds and their slot counts, in selection order.
std::vector<std::pair<ElementKind, int>> composition(const SummarySpec& spec);

struct Highlight {
    int episode = 0;
    int center_step = 0;
    int start = 0;  // inclusive step range inside the episode
    int end = 0;
    ElementKind kind = ElementKind::Maxima;
    int state = 0;
    int element_rank = 0;
    double element_score = 0.0;
    long score_at_center = 0;
    int fade_frames = 0;

    int frames() const noexcept { return end - start + 1; }
    friend bool operator==(const Highlight&, const Highlight&) = default;
};

struct HighlightManifest {
    static constexpr int kSchemaVersion = 1;

    Technique technique = Technique::Max;
    std::string profile;
    int k = 0;
    int l = 0;
    nlohmann::json provenance = nlohmann::json::object();
    std::vector<Highlight> highlights;
    // Set when no trace segment realizes the sequence; the path is kept alone.
    bool synthetic = false;
    std::vector<int> synthetic_path;
    std::vector<std::string> notes;

    nlohmann::json to_json() const;
    static HighlightManifest from_json(const nlohmann::json& j);

    friend bool operator==(const HighlightManifest&, const HighlightManifest&) = default;
};

// Product of the largest and smallest pairwise distance |x_i - x_j|; sets
// with fewer than two members score 0.
double diversity_objective(std::span<const double> xs);

// Which of the k + 1 values (buffer then candidate) to drop so the rest
// maximizes diversity_objective. Ties keep the buffer, then drop the lowest index.
std::size_t replacement_index(std::span<const double> buffer, double candidate);

// Online selection over a stream with a budget of k; returns kept stream indices.
std::vector<std::size_t> select_diverse(std::span<const double> stream, std::size_t k);

// Trace lookups shared by selection and rendering.
class TraceIndex {
public:
    TraceIndex(const Trace& trace, std::optional<Phase> phase);

    const Trace& trace() const noexcept { return *trace_; }
    // Record indices, in trace order, whose observation is s.
    const std::vector<std::size_t>& visits(int s) const;
    // [first, last] record indices of an episode.
    std::pair<std::size_t, std::size_t> episode_range(int episode) const;
    int last_step(int episode) const;
    double normalized_score(long score) const;
    std::size_t record_at(int episode, int step) const;
    const std::vector<std::size_t>& filtered() const noexcept { return filtered_; }

private:
    const Trace* trace_;
    std::vector<std::size_t> filtered_;
    std::vector<std::vector<std::size_t>> by_state_;
    std::vector<std::pair<std::size_t, std::size_t>> episodes_;
    std::vector<bool> has_episode_;
    long min_score_ = 0;
    long max_score_ = 0;
};

// Fills up to `budget` highlights for one element kind. Windows overlapping
// `taken` or each other are skipped.
std::vector<Highlight> select_highlights(const TraceIndex& index, const std::vector<Element>& ranked,
                                         int budget, int l, int fade_frames,
                                         const std::vector<Highlight>& taken = {});

// Earliest contiguous realization of the path, or a synthetic manifest entry.
HighlightManifest sequence_highlight(const SequenceResult& seq, const TraceIndex& index, int seq_max_len,
                                     int fade_frames);

HighlightManifest summarize(const SummarySpec& spec, const InterestingnessReport& report,
                            const TraceIndex& index);

// What a replay needs besides the actions: read from the trace header.
struct ReplayContext {
    frogger::GameConfig game;
    AgentProfile profile;
    std::uint64_t seed = 0;
};

ReplayContext replay_context(const TraceHeader& header);

// Frame files <out>/<technique>/<index>/<step>.txt (and .ppm). Replays each
// episode from its seed and throws IntegrityError when the replay diverges
// from the recorded observations. Returns the number of files written.
std::size_t render(const HighlightManifest& manifest, const TraceIndex& index, const ReplayContext& ctx,
                   const std::filesystem::path& out_dir, bool ppm = true);

}  // namespace ixrl
