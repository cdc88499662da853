#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ixrl/frogger.hpp"
#include "ixrl/qtable.hpp"
#include "json.hpp"

namespace ixrl {

enum class Phase : std::uint8_t { Train = 0, Test };

std::string_view to_string(Phase p);
Phase parse_phase(std::string_view s);

// One step of the interaction history.
struct TransitionRecord {
    int episode = 0;
    int step = 0;
    Phase phase = Phase::Train;
    int s = 0;
    int a = 0;
    double r = 0.0;
    int s_next = 0;
    long score = 0;  // game score when s was observed
    frogger::Region region = frogger::Region::BottomGrass;  // where the frog was at s
    std::optional<frogger::DeathCause> death_cause;
    int level = 1;  // level when s was observed

    friend bool operator==(const TransitionRecord&, const TransitionRecord&) = default;
};

struct Successor {
    int state;
    double probability;
};

// Counters, recency tables, and running means accumulated over a transition
// stream, plus the agent's Q-table snapshot.
class InteractionDataset {
public:
    static constexpr int kSchemaVersion = 1;

    explicit InteractionDataset(int num_states = frogger::kNumObservations,
                                int num_actions = frogger::kNumActions, double q_init = 0.0,
                                long obs_space_size = frogger::kNumObservations);

    void record(const TransitionRecord& tr, double td_error);

    int num_states() const noexcept { return num_states_; }
    int num_actions() const noexcept { return num_actions_; }
    long obs_space_size() const noexcept { return obs_space_size_; }
    void set_obs_space_size(long n);
    std::uint64_t total_steps() const noexcept { return total_steps_; }

    std::uint64_t count(int s) const { return n_s_.at(static_cast<std::size_t>(s)); }
    std::uint64_t count(int s, int a) const { return n_sa_.at(pair(s, a)); }
    std::uint64_t count(int s, int a, int s_next) const;
    const std::map<int, std::uint64_t>& successors(int s, int a) const { return n_sas_.at(pair(s, a)); }

    // Last global timestep at which s (or (s, a)) was observed; -1 if never.
    std::int64_t last_seen(int s) const { return t_s_.at(static_cast<std::size_t>(s)); }
    std::int64_t last_seen(int s, int a) const { return t_sa_.at(pair(s, a)); }

    double mean_reward(int s, int a) const { return r_hat_.at(pair(s, a)); }
    double mean_td_error(int s, int a) const { return dq_hat_.at(pair(s, a)); }
    double mean_abs_td_error(int s, int a) const { return dq_abs_hat_.at(pair(s, a)); }

    const QTable& q() const noexcept { return q_; }
    void set_q(QTable q);

    std::vector<int> visited_states() const;

    // P^(.|s, a) over observed successors; empty when (s, a) was never executed.
    std::vector<Successor> estimated_transition(int s, int a) const;
    // c(s, a) / c(s); nullopt when s was never visited.
    std::optional<std::vector<double>> interaction_policy(int s) const;

    // Free-form provenance copied into snapshots and reports.
    nlohmann::json provenance = nlohmann::json::object();

    nlohmann::json to_json() const;
    static InteractionDataset from_json(const nlohmann::json& j);
    void save(const std::filesystem::path& path) const;
    static InteractionDataset load(const std::filesystem::path& path);

    friend bool operator==(const InteractionDataset&, const InteractionDataset&) = default;

private:
    std::size_t pair(int s, int a) const;

    int num_states_;
    int num_actions_;
    long obs_space_size_;
    std::uint64_t total_steps_ = 0;
    std::vector<std::uint64_t> n_s_;
    std::vector<std::uint64_t> n_sa_;
    std::vector<std::map<int, std::uint64_t>> n_sas_;
    std::vector<std::int64_t> t_s_;
    std::vector<std::int64_t> t_sa_;
    std::vector<double> r_hat_;
    std::vector<double> dq_hat_;
    std::vector<double> dq_abs_hat_;
    QTable q_;
};

// Line-delimited trace: a JSON header line followed by one tab-separated
// record per line (episode, step, phase, s, a, r, s_next, score, region,
// death_cause or "-", level).
struct TraceHeader {
    static constexpr int kSchemaVersion = 1;
    nlohmann::json json = nlohmann::json::object();
};

class TraceWriter {
public:
    TraceWriter(const std::filesystem::path& path, const TraceHeader& header);
    void write(const TransitionRecord& tr);
    void close();

private:
    std::filesystem::path path_;
    std::ofstream out_;
};

struct Trace {
    TraceHeader header;
    std::vector<TransitionRecord> records;
};

std::string format_record(const TransitionRecord& tr);
TransitionRecord parse_record(std::string_view line);
Trace read_trace(const std::filesystem::path& path);

// Rebuilds a dataset from raw records by replaying the Q-learning backups in
// trace order, which reproduces the Q-table and TD errors exactly. With a
// phase filter every backup still runs but only matching records are counted.
InteractionDataset dataset_from_trace(const Trace& trace, double q_init, double alpha, double gamma,
                                      std::optional<Phase> phase = std::nullopt);

}  // namespace ixrl
