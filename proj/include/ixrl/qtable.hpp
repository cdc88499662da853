#pragma once

#include <span>
#include <vector>

#include "ixrl/frogger.hpp"

namespace ixrl {

// Dense action-value table indexed by (observation, action).
class QTable {
public:
    explicit QTable(int num_states = frogger::kNumObservations, int num_actions = frogger::kNumActions,
                    double q_init = 0.0);

    double operator()(int s, int a) const { return values_[index(s, a)]; }
    double& operator()(int s, int a) { return values_[index(s, a)]; }

    std::span<const double> row(int s) const;
    // V(s) = max_a Q(s, a).
    double value(int s) const;
    // First maximizer in action order N, S, E, W.
    int greedy_action(int s) const;

    int num_states() const noexcept { return num_states_; }
    int num_actions() const noexcept { return num_actions_; }
    double q_init() const noexcept { return q_init_; }
    const std::vector<double>& values() const noexcept { return values_; }

    friend bool operator==(const QTable&, const QTable&) = default;

private:
    std::size_t index(int s, int a) const;

    int num_states_;
    int num_actions_;
    double q_init_;
    std::vector<double> values_;
};

// One Q-learning backup. Returns the temporal-difference error computed
// before the update: r + gamma * max_b Q(s_next, b) - Q(s, a).
double q_update(QTable& q, int s, int a, double r, int s_next, double alpha, double gamma);

}  // namespace ixrl
