#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace ixrl {

enum class ElementKind : std::uint8_t {
    CertainTrans = 0,
    UncertainTrans,
    RewardOutliers,
    Frequent,
    Infrequent,
    FeatureSets,
    WeakFeatureSets,
    FeatureRules,
    CertainExec,
    UncertainExec,
    Ancient,
    ValueOutliers,
    PredictionOutliers,
    VarianceOutliers,
    Maxima,
    Minima,
    Sequences,
    ContradictoryValues,
    ContradictoryGoals,
};
inline constexpr int kNumElementKinds = 19;

std::string_view to_string(ElementKind k);
ElementKind parse_element_kind(std::string_view s);
std::array<ElementKind, kNumElementKinds> all_element_kinds();

// True when a lower score is more interesting for this kind (minima,
// certain execution, infrequent situations and so on).
bool ranks_ascending(ElementKind k);

// One interestingness element. Which subject fields are filled depends on
// the kind: a state, a state-action pair, a feature-set, a rule, or a path.
struct Element {
    ElementKind kind = ElementKind::Frequent;
    int state = -1;
    int action = -1;
    std::vector<int> items;       // feature-set, or rule antecedent
    std::vector<int> consequent;  // rules only
    std::vector<int> path;        // s0, a1, s1, ..., an, sn
    double score = 0.0;
    int rank = 0;
    std::string side;       // "high" or "low" for outliers
    bool terminal = false;  // extrema without observed successors
    std::vector<double> detail;

    friend bool operator==(const Element&, const Element&) = default;
};

// Sorts by interestingness and assigns 1-based ranks; ties fall back to the
// subject so the order is total.
void rank_elements(std::vector<Element>& elements, ElementKind kind);

nlohmann::json to_json(const Element& e);
Element element_from_json(const nlohmann::json& j, ElementKind kind);

// A feature item pairs a direction with a feature value: item = dir * 6 + feature.
std::string item_name(int item);
int parse_item(std::string_view name);

}  // namespace ixrl
