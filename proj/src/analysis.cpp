#include "ixrl/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "ixrl/errors.hpp"
#include "ixrl/fp_growth.hpp"
#include "ixrl/frogger.hpp"
#include "ixrl/stats.hpp"

namespace ixrl {

void AnalysisConfig::validate() const {
    const double all[] = {certain_trans_max, uncertain_trans_min, reward_outlier_lambda, frequent_min_count,
                          infrequent_max_count, jaccard_min, jaccard_weak_max, lift_min, certain_exec_max,
                          uncertain_exec_min, ancient_fraction, value_outlier_lambda,
                          prediction_outlier_lambda, variance_outlier_lambda, jsd_min, normalization_eps,
                          extrema_min_count};
    for (double x : all)
        if (!std::isfinite(x)) throw ConfigError("analysis thresholds must be finite");
    for (double x : {certain_trans_max, uncertain_trans_min, certain_exec_max, uncertain_exec_min})
        if (x < 0.0 || x > 1.0) throw ConfigError("evenness thresholds must lie in [0, 1]");
    for (double x : {reward_outlier_lambda, value_outlier_lambda, prediction_outlier_lambda, variance_outlier_lambda})
        if (x <= 0.0) throw ConfigError("outlier lambdas must be positive");
    if (jaccard_min < 0.0 || jaccard_min > 1.0 || jaccard_weak_max < 0.0 || jaccard_weak_max > 1.0)
        throw ConfigError("Jaccard thresholds must lie in [0, 1]");
    if (ancient_fraction < 0.0 || ancient_fraction > 1.0) throw ConfigError("ancient_fraction must lie in [0, 1]");
    if (jsd_min < 0.0 || jsd_min > 1.0) throw ConfigError("jsd_min must lie in [0, 1]");
    if (normalization_eps <= 0.0) throw ConfigError("normalization_eps must be positive");
    if (frequent_min_count < 0.0 || infrequent_max_count < 0.0 || extrema_min_count < 0.0) throw ConfigError("frequency thresholds must be nonnegative");
    if (sequence_max_len < 1) throw ConfigError("sequence_max_len must be positive");
}

nlohmann::json to_json(const AnalysisConfig& c) {
    return {{"certain_trans_max", c.certain_trans_max},
            {"uncertain_trans_min", c.uncertain_trans_min},
            {"reward_outlier_lambda", c.reward_outlier_lambda},
            {"frequent_min_count", c.frequent_min_count},
            {"infrequent_max_count", c.infrequent_max_count},
            {"jaccard_min", c.jaccard_min},
            {"jaccard_weak_max", c.jaccard_weak_max},
            {"lift_min", c.lift_min},
            {"certain_exec_max", c.certain_exec_max},
            {"uncertain_exec_min", c.uncertain_exec_min},
            {"ancient_fraction", c.ancient_fraction},
            {"value_outlier_lambda", c.value_outlier_lambda},
            {"prediction_outlier_lambda", c.prediction_outlier_lambda},
            {"variance_outlier_lambda", c.variance_outlier_lambda},
            {"jsd_min", c.jsd_min},
            {"normalization_eps", c.normalization_eps},
            {"extrema_min_count", c.extrema_min_count},
            {"sequence_max_len", c.sequence_max_len}};
}

AnalysisConfig analysis_config_from_json(const nlohmann::json& j) {
    AnalysisConfig c;
    if (!j.is_object()) throw ConfigError("analysis config must be an object");
    const auto defaults = to_json(c);
    for (const auto& [key, _] : j.items())
        if (!defaults.contains(key)) throw ConfigError("unknown analysis option '" + key + "'");
    try {
        auto get = [&](const char* key, double& field) { field = j.value(key, field); };
        get("certain_trans_max", c.certain_trans_max);
        get("uncertain_trans_min", c.uncertain_trans_min);
        get("reward_outlier_lambda", c.reward_outlier_lambda);
        get("frequent_min_count", c.frequent_min_count);
        get("infrequent_max_count", c.infrequent_max_count);
        get("jaccard_min", c.jaccard_min);
        get("jaccard_weak_max", c.jaccard_weak_max);
        get("lift_min", c.lift_min);
        get("certain_exec_max", c.certain_exec_max);
        get("uncertain_exec_min", c.uncertain_exec_min);
        get("ancient_fraction", c.ancient_fraction);
        get("value_outlier_lambda", c.value_outlier_lambda);
        get("prediction_outlier_lambda", c.prediction_outlier_lambda);
        get("variance_outlier_lambda", c.variance_outlier_lambda);
        get("jsd_min", c.jsd_min);
        get("normalization_eps", c.normalization_eps);
        get("extrema_min_count", c.extrema_min_count);
        c.sequence_max_len = j.value("sequence_max_len", c.sequence_max_len);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed analysis config: ") + e.what());
    }
    c.validate();
    return c;
}

double execution_evenness(const InteractionDataset& ds, int s) {
    const auto pi = ds.interaction_policy(s);
    if (!pi) throw UsageError("execution evenness of an unvisited state");
    return evenness(*pi, ds.num_actions());
}

double transition_evenness(const InteractionDataset& ds, int s, int a) {
    const auto succ = ds.estimated_transition(s, a);
    if (succ.empty()) throw UsageError("transition evenness of an unexecuted pair");
    if (succ.size() == 1) return 0.0;
    std::vector<double> counts;
    for (const auto& x : succ) counts.push_back(static_cast<double>(ds.count(s, a, x.state)));
    return evenness_of_counts(counts, static_cast<int>(counts.size()));
}

CertaintyElements execution_certainty(const InteractionDataset& ds, const AnalysisConfig& cfg) {
    CertaintyElements out;
    for (int s : ds.visited_states()) {
        Element e;
        e.state = s;
        e.score = execution_evenness(ds, s);
        if (e.score <= cfg.certain_exec_max) out.certain.push_back(e);
        if (e.score >= cfg.uncertain_exec_min) out.uncertain.push_back(e);
    }
    rank_elements(out.certain, ElementKind::CertainExec);
    rank_elements(out.uncertain, ElementKind::UncertainExec);
    return out;
}

CertaintyElements transition_certainty(const InteractionDataset& ds, const AnalysisConfig& cfg) {
    CertaintyElements out;
    for (int s : ds.visited_states()) {
        for (int a = 0; a < ds.num_actions(); ++a) {
            if (ds.count(s, a) == 0) continue;
            Element e;
            e.state = s;
            e.action = a;
            e.score = transition_evenness(ds, s, a);
            if (e.score <= cfg.certain_trans_max) out.certain.push_back(e);
            if (e.score >= cfg.uncertain_trans_min) out.uncertain.push_back(e);
        }
    }
    rank_elements(out.certain, ElementKind::CertainTrans);
    rank_elements(out.uncertain, ElementKind::UncertainTrans);
    return out;
}

namespace {

struct Pair {
    int s;
    int a;
};

std::vector<Pair> visited_pairs(const InteractionDataset& ds) {
    std::vector<Pair> out;
    for (int s : ds.visited_states())
        for (int a = 0; a < ds.num_actions(); ++a)
            if (ds.count(s, a) > 0) out.push_back({s, a});
    return out;
}

// Outlier elements over per-pair values; the score is the distance from the
// mean in standard deviations.
std::vector<Element> pair_outliers(const std::vector<Pair>& pairs, const std::vector<double>& values,
                                   double lambda, ElementKind kind) {
    const auto split = outliers(values, lambda);
    std::vector<Element> out;
    auto emit = [&](std::size_t i, const char* side) {
        Element e;
        e.state = pairs[i].s;
        e.action = pairs[i].a;
        e.score = std::abs(values[i] - split.mean) / split.stddev;
        e.side = side;
        e.detail = {values[i]};
        out.push_back(std::move(e));
    };
    for (std::size_t i : split.high) emit(i, "high");
    for (std::size_t i : split.low) emit(i, "low");
    rank_elements(out, kind);
    return out;
}

}  // namespace

std::vector<Element> reward_outliers(const InteractionDataset& ds, const AnalysisConfig& cfg) {
    const auto pairs = visited_pairs(ds);
    std::vector<double> values;
    for (const auto& p : pairs) values.push_back(ds.mean_reward(p.s, p.a));
    return pair_outliers(pairs, values, cfg.reward_outlier_lambda, ElementKind::RewardOutliers);
}

FrequencyElements frequency_elements(const InteractionDataset& ds, const AnalysisConfig& cfg) {
    FrequencyElements out;
    std::vector<double> hist;
    for (int s : ds.visited_states()) {
        const auto c = static_cast<double>(ds.count(s));
        hist.push_back(c);
        Element e;
        e.state = s;
        e.score = c;
        if (c >= cfg.frequent_min_count) out.frequent.push_back(e);
        if (c <= cfg.infrequent_max_count) out.infrequent.push_back(e);
    }
    rank_elements(out.frequent, ElementKind::Frequent);
    rank_elements(out.infrequent, ElementKind::Infrequent);
    out.unique_observations = static_cast<long>(hist.size());
    if (!hist.empty()) {
        out.coverage = static_cast<double>(hist.size()) / static_cast<double>(ds.obs_space_size());
        out.dispersion = evenness_of_counts(hist, static_cast<int>(hist.size()));
    }
    return out;
}

std::vector<WeightedTransaction> observation_transactions(const InteractionDataset& ds) {
    std::vector<WeightedTransaction> db;
    for (int s : ds.visited_states()) {
        const auto o = frogger::decode(s);
        const frogger::Feature f[4] = {o.north, o.south, o.east, o.west};
        WeightedTransaction t;
        for (int d = 0; d < 4; ++d) t.items.push_back(d * frogger::kNumFeatures + static_cast<int>(f[d]));
        t.weight = ds.count(s);
        db.push_back(std::move(t));
    }
    return db;
}

AssociationElements feature_associations(const InteractionDataset& ds, const AnalysisConfig& cfg) {
    AssociationElements out;
    const auto db = observation_transactions(ds);
    if (db.empty()) return out;
    const auto sets = fp_growth(db, 1);
    const SupportIndex index(sets);
    for (const auto& set : sets) {
        if (set.items.size() < 2) continue;
        Element e;
        e.items = set.items;
        e.score = index.jaccard(set.items);
        if (e.score >= cfg.jaccard_min) out.strong.push_back(e);
        if (e.score <= cfg.jaccard_weak_max) out.weak.push_back(e);
    }
    for (const auto& strong : out.strong) {
        for (auto& rule : rules_of(strong.items, index, ds.total_steps())) {
            if (rule.lift < cfg.lift_min) continue;
            Element e;
            e.items = std::move(rule.antecedent);
            e.consequent = std::move(rule.consequent);
            e.score = rule.lift;
            out.rules.push_back(std::move(e));
        }
    }
    rank_elements(out.strong, ElementKind::FeatureSets);
    rank_elements(out.weak, ElementKind::WeakFeatureSets);
    rank_elements(out.rules, ElementKind::FeatureRules);
    return out;
}

std::vector<Element> recency_elements(const InteractionDataset& ds, const AnalysisConfig& cfg) {
    std::vector<Element> out;
    const double cutoff = cfg.ancient_fraction * static_cast<double>(ds.total_steps());
    for (int s : ds.visited_states()) {
        const auto t = static_cast<double>(ds.last_seen(s));
        if (t > cutoff) continue;
        Element e;
        e.state = s;
        e.score = t;
        out.push_back(e);
    }
    rank_elements(out, ElementKind::Ancient);
    return out;
}

ValueElements value_elements(const InteractionDataset& ds, const AnalysisConfig& cfg) {
    ValueElements out;
    const auto pairs = visited_pairs(ds);
    if (pairs.empty()) return out;
    std::vector<double> q, dq;
    for (const auto& p : pairs) {
        q.push_back(ds.q()(p.s, p.a));
        dq.push_back(std::abs(ds.mean_td_error(p.s, p.a)));
    }
    out.value_outliers = pair_outliers(pairs, q, cfg.value_outlier_lambda, ElementKind::ValueOutliers);
    out.prediction_outliers =
        pair_outliers(pairs, dq, cfg.prediction_outlier_lambda, ElementKind::PredictionOutliers);
    out.mean_prediction_error = mean(dq);
    return out;
}

std::vector<FeatureAggregate> feature_aggregates(const InteractionDataset& ds) {
    constexpr int kItems = frogger::kNumActions * frogger::kNumFeatures;
    std::vector<double> exec_sum(kItems, 0.0), trans_sum(kItems, 0.0);
    std::vector<long> obs(kItems, 0), pairs(kItems, 0);
    for (int s : ds.visited_states()) {
        const auto o = frogger::decode(s);
        const frogger::Feature f[4] = {o.north, o.south, o.east, o.west};
        const double ex = execution_evenness(ds, s);
        for (int d = 0; d < 4; ++d) {
            const int item = d * frogger::kNumFeatures + static_cast<int>(f[d]);
            ++obs[static_cast<std::size_t>(item)];
            exec_sum[static_cast<std::size_t>(item)] += ex;
            for (int a = 0; a < ds.num_actions(); ++a) {
                if (ds.count(s, a) == 0) continue;
                ++pairs[static_cast<std::size_t>(item)];
                trans_sum[static_cast<std::size_t>(item)] += transition_evenness(ds, s, a);
            }
        }
    }
    std::vector<FeatureAggregate> out;
    for (int item = 0; item < kItems; ++item) {
        const auto i = static_cast<std::size_t>(item);
        if (obs[i] == 0) continue;
        FeatureAggregate fa;
        fa.item = item;
        fa.observations = obs[i];
        fa.execution_evenness = exec_sum[i] / static_cast<double>(obs[i]);
        if (pairs[i] > 0) fa.transition_evenness = trans_sum[i] / static_cast<double>(pairs[i]);
        out.push_back(fa);
    }
    return out;
}

}  // namespace ixrl
