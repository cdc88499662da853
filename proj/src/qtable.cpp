#include "ixrl/qtable.hpp"

#include <algorithm>
#include <string>

#include "ixrl/errors.hpp"

namespace ixrl {

QTable::QTable(int num_states, int num_actions, double q_init)
    : num_states_(num_states),
      num_actions_(num_actions),
      q_init_(q_init),
      values_(static_cast<std::size_t>(num_states) * static_cast<std::size_t>(num_actions), q_init) {
    if (num_states <= 0 || num_actions <= 0) throw ConfigError("QTable dimensions must be positive");
}

std::size_t QTable::index(int s, int a) const {
    if (s < 0 || s >= num_states_ || a < 0 || a >= num_actions_)
        throw UsageError("QTable index out of range (" + std::to_string(s) + ", " + std::to_string(a) + ")");
    return static_cast<std::size_t>(s) * static_cast<std::size_t>(num_actions_) +
           static_cast<std::size_t>(a);
}

std::span<const double> QTable::row(int s) const {
    return {values_.data() + index(s, 0), static_cast<std::size_t>(num_actions_)};
}

double QTable::value(int s) const {
    const auto r = row(s);
    return *std::max_element(r.begin(), r.end());
}

int QTable::greedy_action(int s) const {
    const auto r = row(s);
    return static_cast<int>(std::max_element(r.begin(), r.end()) - r.begin());
}

double q_update(QTable& q, int s, int a, double r, int s_next, double alpha, double gamma) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in (0, 1]");
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw ConfigError("gamma must lie in [0, 1]");
    const double td = r + gamma * q.value(s_next) - q(s, a);
    q(s, a) += alpha * td;
    return td;
}

}  // namespace ixrl
