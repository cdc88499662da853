#pragma once

#include <array>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "ixrl/frogger.hpp"
#include "ixrl/qtable.hpp"
#include "ixrl/recorder.hpp"
#include "json.hpp"

namespace ixrl {

struct AgentProfile {
    std::string name;
    double vis_h = 60.0;
    double vis_v = 40.0;
    double r_river = -200.0;
    double q_init = 5000.0;

    frogger::Perception perception() const { return {vis_h, vis_v}; }
    friend bool operator==(const AgentProfile&, const AgentProfile&) = default;
};

AgentProfile optimized_profile();
AgentProfile high_vision_profile();
AgentProfile fear_water_profile();
AgentProfile profile_by_name(std::string_view name);
nlohmann::json to_json(const AgentProfile& p);
AgentProfile profile_from_json(const nlohmann::json& j);

struct TrainingSchedule {
    int episodes_train = 2000;
    int episodes_test = 2000;
    int max_steps_per_episode = 300;
    double beta_min = 0.05;
    double beta_max = 20.0;
    double beta_decay = 0.995;
    double alpha = 0.3;
    double gamma = 0.9;

    // Softmax temperature for training episode e.
    double beta(int episode) const;
    void validate() const;
};

nlohmann::json to_json(const TrainingSchedule& s);
TrainingSchedule schedule_from_json(const nlohmann::json& j);

// Action probabilities proportional to exp(q / beta), computed after
// subtracting the row maximum.
std::vector<double> softmax(std::span<const double> q_row, double beta);
int select_action(std::span<const double> q_row, double beta, std::mt19937_64& rng);

// Per-phase statistics matching the usual performance table: levels reached,
// deaths by cause and by region, time spent per region, episode lengths.
struct PerformanceSummary {
    int episodes = 0;
    double mean_level = 0.0;
    double sd_level = 0.0;
    double mean_steps = 0.0;
    double sd_steps = 0.0;
    long pads = 0;
    std::array<long, frogger::kNumDeathCauses> deaths_by_cause{};
    std::array<long, frogger::kNumRegions> deaths_by_region{};
    std::array<long, frogger::kNumRegions> steps_by_region{};

    long total_deaths() const;
    double time_fraction(frogger::Region r) const;
};

nlohmann::json to_json(const PerformanceSummary& p);

struct ExperimentResult {
    QTable q;
    PerformanceSummary train;
    PerformanceSummary test;
};

// Receives every transition of both phases, with the TD error of its backup.
using TransitionSink = std::function<void(const TransitionRecord&, double td_error)>;

// Seed of the game played in a given episode; replay relies on this rule.
std::uint64_t episode_seed(std::uint64_t run_seed, int episode);

ExperimentResult run_experiment(const AgentProfile& profile, const TrainingSchedule& schedule,
                                const frogger::GameConfig& config, std::uint64_t seed,
                                const TransitionSink& sink);

}  // namespace ixrl
