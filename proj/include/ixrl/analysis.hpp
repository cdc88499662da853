#pragma once

#include <optional>
#include <vector>

#include "ixrl/elements.hpp"
#include "ixrl/fp_growth.hpp"
#include "ixrl/recorder.hpp"
#include "json.hpp"

namespace ixrl {

struct AnalysisConfig {
    double certain_trans_max = 0.03;
    double uncertain_trans_min = 0.9;
    double reward_outlier_lambda = 2.5;
    double frequent_min_count = 15000;
    double infrequent_max_count = 150;
    double jaccard_min = 0.4;
    double jaccard_weak_max = 0.05;
    double lift_min = 0.8;
    double certain_exec_max = 0.1;
    double uncertain_exec_min = 0.85;
    double ancient_fraction = 0.4;
    double value_outlier_lambda = 2.0;
    double prediction_outlier_lambda = 2.0;
    double variance_outlier_lambda = 2.0;
    double jsd_min = 0.5;
    double normalization_eps = 1e-6;
    double extrema_min_count = 150;
    int sequence_max_len = 80;

    void validate() const;
    friend bool operator==(const AnalysisConfig&, const AnalysisConfig&) = default;
};

nlohmann::json to_json(const AnalysisConfig& c);
AnalysisConfig analysis_config_from_json(const nlohmann::json& j);

struct CertaintyElements {
    std::vector<Element> certain;
    std::vector<Element> uncertain;
};

CertaintyElements execution_certainty(const InteractionDataset& ds, const AnalysisConfig& cfg);
CertaintyElements transition_certainty(const InteractionDataset& ds, const AnalysisConfig& cfg);

// Evenness of P^(.|s, a) over its observed successors; 0 with one successor.
double transition_evenness(const InteractionDataset& ds, int s, int a);
// Evenness of the interaction policy over all actions.
double execution_evenness(const InteractionDataset& ds, int s);

std::vector<Element> reward_outliers(const InteractionDataset& ds, const AnalysisConfig& cfg);

struct FrequencyElements {
    std::vector<Element> frequent;
    std::vector<Element> infrequent;
    long unique_observations = 0;
    std::optional<double> coverage;
    std::optional<double> dispersion;
};

FrequencyElements frequency_elements(const InteractionDataset& ds, const AnalysisConfig& cfg);

// Each visited observation becomes a transaction of its four direction items,
// weighted by its visit count.
std::vector<WeightedTransaction> observation_transactions(const InteractionDataset& ds);

struct AssociationElements {
    std::vector<Element> strong;
    std::vector<Element> weak;
    std::vector<Element> rules;
};

AssociationElements feature_associations(const InteractionDataset& ds, const AnalysisConfig& cfg);

std::vector<Element> recency_elements(const InteractionDataset& ds, const AnalysisConfig& cfg);

struct ValueElements {
    std::vector<Element> value_outliers;
    std::vector<Element> prediction_outliers;
    std::optional<double> mean_prediction_error;
};

ValueElements value_elements(const InteractionDataset& ds, const AnalysisConfig& cfg);

// Mean certainty scores of the observations in which a feature item is active.
struct FeatureAggregate {
    int item = 0;
    long observations = 0;
    std::optional<double> execution_evenness;
    std::optional<double> transition_evenness;

    friend bool operator==(const FeatureAggregate&, const FeatureAggregate&) = default;
};

std::vector<FeatureAggregate> feature_aggregates(const InteractionDataset& ds);

}  // namespace ixrl
