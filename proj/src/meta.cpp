#include "ixrl/meta.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "ixrl/errors.hpp"
#include "ixrl/frogger.hpp"
#include "ixrl/stats.hpp"

namespace ixrl {

TransitionGraph TransitionGraph::from_dataset(const InteractionDataset& ds) {
    TransitionGraph g;
    for (int s : ds.visited_states()) {
        g.add_node(s, ds.q().value(s), static_cast<double>(ds.count(s)));
        const double n = static_cast<double>(ds.count(s));
        for (int a = 0; a < ds.num_actions(); ++a) {
            const auto na = ds.count(s, a);
            if (na == 0) continue;
            for (const auto& succ : ds.estimated_transition(s, a)) {
                g.add_edge(s, {a, succ.state, succ.probability, static_cast<double>(na) / n});
                g.set_value(succ.state, ds.q().value(succ.state));
            }
        }
    }
    return g;
}

void TransitionGraph::add_node(int s, double value, double visits) {
    out_[s];
    value_[s] = value;
    visits_[s] = visits;
}

double TransitionGraph::visits(int s) const {
    auto it = visits_.find(s);
    return it == visits_.end() ? 0.0 : it->second;
}

void TransitionGraph::set_value(int s, double value) { value_[s] = value; }

void TransitionGraph::add_edge(int s, const Edge& e) {
    if (!(e.p_trans > 0.0 && e.p_trans <= 1.0) || !(e.p_policy > 0.0 && e.p_policy <= 1.0))
        throw NumericError("edge weights must lie in (0, 1]");
    out_[s].push_back(e);
}

std::vector<int> TransitionGraph::nodes() const {
    std::vector<int> v;
    for (const auto& [s, _] : out_) v.push_back(s);
    return v;
}

const std::vector<TransitionGraph::Edge>& TransitionGraph::edges(int s) const {
    static const std::vector<Edge> none;
    auto it = out_.find(s);
    return it == out_.end() ? none : it->second;
}

std::vector<int> TransitionGraph::successors(int s) const {
    std::vector<int> v;
    for (const auto& e : edges(s)) v.push_back(e.target);
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

double TransitionGraph::value(int s) const {
    auto it = value_.find(s);
    if (it == value_.end()) throw UsageError("no value recorded for state " + std::to_string(s));
    return it->second;
}

Extrema extrema(const TransitionGraph& g, double min_count) {
    Extrema ex;
    for (int s : g.nodes()) {
        if (g.visits(s) < min_count) continue;
        const auto succ = g.successors(s);
        const double v = g.value(s);
        bool is_min = true, is_max = true;
        for (int n : succ) {
            const double vn = g.value(n);
            if (v > vn) is_min = false;
            if (v < vn) is_max = false;
        }
        if (succ.empty()) ex.terminal.insert(s);
        if (is_min) ex.minima.push_back(s);
        if (is_max) ex.maxima.push_back(s);
    }
    return ex;
}

std::map<int, double> value_variance(const TransitionGraph& g) {
    std::map<int, double> out;
    for (int s : g.nodes()) {
        const double v = g.value(s);
        // Group edges by action; each action's successors form one distribution.
        std::map<int, std::vector<const TransitionGraph::Edge*>> by_action;
        for (const auto& e : g.edges(s)) by_action[e.action].push_back(&e);
        double total = 0.0;
        for (const auto& [a, edges] : by_action) {
            double m = 0.0;
            for (const auto* e : edges) m += e->p_trans * std::abs(v - g.value(e->target));
            double var = 0.0;
            for (const auto* e : edges) {
                const double d = std::abs(v - g.value(e->target)) - m;
                var += e->p_trans * d * d;
            }
            total += edges.front()->p_policy * var;
        }
        out[s] = total;
    }
    return out;
}

std::vector<Element> variance_outliers(const TransitionGraph& g, double lambda) {
    const auto var = value_variance(g);
    std::vector<int> states;
    std::vector<double> values;
    for (const auto& [s, v] : var) {
        states.push_back(s);
        values.push_back(v);
    }
    const auto split = outliers(values, lambda);
    std::vector<Element> out;
    auto emit = [&](std::size_t i, const char* side) {
        Element e;
        e.state = states[i];
        e.score = std::abs(values[i] - split.mean) / split.stddev;
        e.side = side;
        e.detail = {values[i]};
        out.push_back(std::move(e));
    };
    for (std::size_t i : split.high) emit(i, "high");
    for (std::size_t i : split.low) emit(i, "low");
    rank_elements(out, ElementKind::VarianceOutliers);
    return out;
}

namespace {

struct Step {
    double cost = std::numeric_limits<double>::infinity();
    int hops = 0;
    int prev = -1;
    int action = -1;
};

// Best-first search from `source` over -log(pi^ * P^) costs. Between two
// nodes only the most probable action matters.
std::map<int, Step> search_from(const TransitionGraph& g, int source) {
    std::map<int, Step> best;
    best[source] = {0.0, 0, -1, -1};
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
    open.push({0.0, source});
    std::set<int> done;
    while (!open.empty()) {
        const auto [cost, u] = open.top();
        open.pop();
        if (!done.insert(u).second) continue;
        const int hops = best[u].hops;
        for (const auto& e : g.edges(u)) {
            const double c = cost - std::log(e.p_policy * e.p_trans);
            auto& slot = best[e.target];
            if (c < slot.cost) {
                slot = {c, hops + 1, u, e.action};
                open.push({c, e.target});
            }
        }
    }
    return best;
}

SequenceResult build_path(const TransitionGraph& g, const std::map<int, Step>& tree, int target) {
    std::vector<int> rev{target};
    for (int cur = target; tree.at(cur).prev >= 0; cur = tree.at(cur).prev) {
        rev.push_back(tree.at(cur).action);
        rev.push_back(tree.at(cur).prev);
    }
    SequenceResult r;
    r.path.assign(rev.rbegin(), rev.rend());
    // Recompute the probability as a product so it carries no log round-trip.
    for (std::size_t i = 0; i + 2 < r.path.size(); i += 2) {
        double w = 0.0;
        for (const auto& e : g.edges(r.path[i]))
            if (e.action == r.path[i + 1] && e.target == r.path[i + 2]) w = std::max(w, e.p_policy * e.p_trans);
        r.probability *= w;
    }
    r.target_value = g.value(target);
    r.objective = r.probability * r.target_value;
    return r;
}

bool better(const SequenceResult& a, const SequenceResult& b) {
    if (a.objective != b.objective) return a.objective > b.objective;
    if (a.length() != b.length()) return a.length() < b.length();
    return a.path < b.path;
}

}  // namespace

SequenceSearch most_likely_sequences(const TransitionGraph& g, const std::vector<int>& initial,
                                     const std::vector<int>& final_states, int max_len) {
    if (max_len < 0) throw ConfigError("max_len must be non-negative");
    SequenceSearch out;
    std::set<int> finals(final_states.begin(), final_states.end());
    std::set<int> starts(initial.begin(), initial.end());
    for (int s : starts) {
        std::optional<SequenceResult> chosen;
        if (finals.count(s)) {
            SequenceResult r;
            r.path = {s};
            r.target_value = g.value(s);
            r.objective = r.target_value;
            chosen = r;
        } else {
            const auto tree = search_from(g, s);
            for (int f : finals) {
                auto it = tree.find(f);
                if (it == tree.end() || it->second.hops > max_len) continue;
                auto r = build_path(g, tree, f);
                if (!chosen || better(r, *chosen)) chosen = std::move(r);
            }
        }
        if (!chosen) continue;
        if (!out.best || better(*chosen, *out.best)) out.best = *chosen;
        out.per_initial.push_back(std::move(*chosen));
    }
    return out;
}

std::vector<Element> contradictory_values(const InteractionDataset& ds, const AnalysisConfig& cfg) {
    std::vector<Element> out;
    for (int s : ds.visited_states()) {
        bool all_tried = true;
        std::vector<double> q, r;
        for (int a = 0; a < ds.num_actions(); ++a) {
            if (ds.count(s, a) == 0) all_tried = false;
            q.push_back(ds.q()(s, a));
            r.push_back(ds.mean_reward(s, a));
        }
        if (!all_tried) continue;
        const auto pq = shift_normalize(q, cfg.normalization_eps);
        const auto pr = shift_normalize(r, cfg.normalization_eps);
        const auto terms = jsd_terms(pq, pr);
        double d = 0.0;
        for (double t : terms) d += t;
        if (d <= cfg.jsd_min) continue;
        Element e;
        e.state = s;
        e.score = d;
        e.detail = terms;
        out.push_back(std::move(e));
    }
    rank_elements(out, ElementKind::ContradictoryValues);
    return out;
}

bool frogger_goal(int state) { return frogger::decode(state).north == frogger::Feature::Lilypad; }

std::vector<Element> contradictory_goals(const TransitionGraph& g, const Extrema& ex, const GoalPredicate& is_goal) {
    std::vector<Element> out;
    for (int s : ex.maxima) {
        if (ex.terminal.count(s) || is_goal(s)) continue;
        Element e;
        e.state = s;
        e.score = g.value(s);
        out.push_back(e);
    }
    rank_elements(out, ElementKind::ContradictoryGoals);
    return out;
}

std::vector<Element> extrema_elements(const TransitionGraph& g, const Extrema& ex, bool maxima) {
    std::vector<Element> out;
    for (int s : maxima ? ex.maxima : ex.minima) {
        Element e;
        e.state = s;
        e.score = g.value(s);
        e.terminal = ex.terminal.count(s) > 0;
        out.push_back(e);
    }
    rank_elements(out, maxima ? ElementKind::Maxima : ElementKind::Minima);
    return out;
}

std::vector<Element> sequence_elements(const SequenceSearch& search) {
    std::vector<Element> out;
    for (const auto& r : search.per_initial) {
        Element e;
        e.state = r.initial();
        e.path = r.path;
        e.score = r.objective;
        e.detail = {r.probability, r.target_value};
        out.push_back(std::move(e));
    }
    rank_elements(out, ElementKind::Sequences);
    return out;
}

}  // namespace ixrl
