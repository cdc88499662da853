#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "ixrl/analysis.hpp"
#include "ixrl/elements.hpp"
#include "ixrl/recorder.hpp"

namespace ixrl {

// Observed dynamics: one node per visited state, one edge per observed
// (s, a, s') with the empirical transition and interaction-policy weights.
class TransitionGraph {
public:
    struct Edge {
        int action;
        int target;
        double p_trans;   // P^(target | s, action)
        double p_policy;  // pi^(s, action)
    };

    static TransitionGraph from_dataset(const InteractionDataset& ds);

    void add_node(int s, double value, double visits = 0.0);
    void set_value(int s, double value);
    void add_edge(int s, const Edge& e);

    // Visited nodes, ascending.
    std::vector<int> nodes() const;
    bool has_node(int s) const { return out_.count(s) > 0; }
    const std::vector<Edge>& edges(int s) const;
    std::vector<int> successors(int s) const;
    double value(int s) const;
    double visits(int s) const;

private:
    std::map<int, std::vector<Edge>> out_;
    std::map<int, double> value_;
    std::map<int, double> visits_;
};

struct Extrema {
    std::vector<int> minima;
    std::vector<int> maxima;
    std::set<int> terminal;  // nodes without successors, extrema only vacuously
};

// Only nodes visited at least min_count times are candidates; the graph
// records visit counts when built from a dataset.
Extrema extrema(const TransitionGraph& g, double min_count = 0.0);

// Per state, the policy-weighted mean over actions of the variance of
// |V(s) - V(s')| across successors.
std::map<int, double> value_variance(const TransitionGraph& g);
std::vector<Element> variance_outliers(const TransitionGraph& g, double lambda);

struct SequenceResult {
    std::vector<int> path;  // s0, a1, s1, ..., an, sn
    double probability = 1.0;
    double target_value = 0.0;
    double objective = 0.0;

    int initial() const { return path.front(); }
    int target() const { return path.back(); }
    int length() const { return static_cast<int>(path.size() / 2); }
    friend bool operator==(const SequenceResult&, const SequenceResult&) = default;
};

struct SequenceSearch {
    std::vector<SequenceResult> per_initial;  // ascending initial state
    std::optional<SequenceResult> best;
};

// For each initial state, the most likely path (product of pi^ * P^ along
// the steps) to every reachable final state; keeps the target maximizing
// probability * V(target). Paths longer than max_len actions are dropped.
SequenceSearch most_likely_sequences(const TransitionGraph& g, const std::vector<int>& initial,
                                     const std::vector<int>& final_states, int max_len);

std::vector<Element> contradictory_values(const InteractionDataset& ds, const AnalysisConfig& cfg);

using GoalPredicate = std::function<bool(int state)>;
// Frogger goal test: the frog faces a free lilypad.
bool frogger_goal(int state);

std::vector<Element> contradictory_goals(const TransitionGraph& g, const Extrema& ex, const GoalPredicate& is_goal);

std::vector<Element> extrema_elements(const TransitionGraph& g, const Extrema& ex, bool maxima);
std::vector<Element> sequence_elements(const SequenceSearch& search);

}  // namespace ixrl
