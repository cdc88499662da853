#include "ixrl/elements.hpp"

#include <algorithm>
#include <tuple>

#include "ixrl/errors.hpp"
#include "ixrl/frogger.hpp"

namespace ixrl {

namespace {

constexpr std::array<std::string_view, kNumElementKinds> kKindNames = {
    "certain-trans", "uncertain-trans", "reward-outliers", "frequent", "infrequent",
    "feature-sets", "weak-feature-sets", "feature-rules", "certain-exec", "uncertain-exec",
    "ancient", "value-outliers", "prediction-outliers", "variance-outliers", "maxima",
    "minima", "sequences", "contradictory-values", "contradictory-goals"};

auto subject_key(const Element& e) { return std::tie(e.state, e.action, e.items, e.consequent, e.path); }

}  // namespace

std::string_view to_string(ElementKind k) { return kKindNames[static_cast<std::size_t>(k)]; }

ElementKind parse_element_kind(std::string_view s) {
    for (std::size_t i = 0; i < kKindNames.size(); ++i)
        if (kKindNames[i] == s) return static_cast<ElementKind>(i);
    throw SchemaError("unknown element kind '" + std::string(s) + "'");
}

std::array<ElementKind, kNumElementKinds> all_element_kinds() {
    std::array<ElementKind, kNumElementKinds> out{};
    for (int i = 0; i < kNumElementKinds; ++i) out[static_cast<std::size_t>(i)] = static_cast<ElementKind>(i);
    return out;
}

bool ranks_ascending(ElementKind k) {
    switch (k) {
        case ElementKind::CertainTrans:
        case ElementKind::Infrequent:
        case ElementKind::WeakFeatureSets:
        case ElementKind::CertainExec:
        case ElementKind::Ancient:
        case ElementKind::Minima: return true;
        default: return false;
    }
}

void rank_elements(std::vector<Element>& elements, ElementKind kind) {
    const bool asc = ranks_ascending(kind);
    std::stable_sort(elements.begin(), elements.end(), [&](const Element& a, const Element& b) {
        if (a.score != b.score) return asc ? a.score < b.score : a.score > b.score;
        return subject_key(a) < subject_key(b);
    });
    for (std::size_t i = 0; i < elements.size(); ++i) {
        elements[i].kind = kind;
        elements[i].rank = static_cast<int>(i) + 1;
    }
}

std::string item_name(int item) {
    if (item < 0 || item >= frogger::kNumActions * frogger::kNumFeatures)
        throw UsageError("feature item out of range");
    return std::string(frogger::to_string(static_cast<frogger::Action>(item / frogger::kNumFeatures))) + "=" +
           std::string(frogger::to_string(static_cast<frogger::Feature>(item % frogger::kNumFeatures)));
}

int parse_item(std::string_view name) {
    const auto eq = name.find('=');
    if (eq == std::string_view::npos) throw SchemaError("malformed feature item '" + std::string(name) + "'");
    try {
        const auto dir = frogger::parse_action(name.substr(0, eq));
        const auto f = frogger::parse_feature(name.substr(eq + 1));
        return static_cast<int>(dir) * frogger::kNumFeatures + static_cast<int>(f);
    } catch (const ConfigError&) {
        throw SchemaError("malformed feature item '" + std::string(name) + "'");
    }
}

nlohmann::json to_json(const Element& e) {
    nlohmann::json j;
    j["rank"] = e.rank;
    j["score"] = e.score;
    if (e.state >= 0) {
        j["state"] = e.state;
        j["observation"] = frogger::describe(frogger::decode(e.state));
    }
    if (e.action >= 0) j["action"] = frogger::to_string(static_cast<frogger::Action>(e.action));
    auto names = [](const std::vector<int>& items) {
        nlohmann::json a = nlohmann::json::array();
        for (int i : items) a.push_back(item_name(i));
        return a;
    };
    if (!e.items.empty()) j[e.consequent.empty() ? "items" : "antecedent"] = names(e.items);
    if (!e.consequent.empty()) j["consequent"] = names(e.consequent);
    if (!e.path.empty()) j["path"] = e.path;
    if (!e.side.empty()) j["side"] = e.side;
    if (e.terminal) j["terminal"] = true;
    if (!e.detail.empty()) j["detail"] = e.detail;
    return j;
}

Element element_from_json(const nlohmann::json& j, ElementKind kind) {
    Element e;
    e.kind = kind;
    try {
        e.rank = j.at("rank").get<int>();
        e.score = j.at("score").get<double>();
        e.state = j.value("state", -1);
        if (j.contains("action")) e.action = static_cast<int>(frogger::parse_action(j.at("action").get<std::string>()));
        auto items = [](const nlohmann::json& a) {
            std::vector<int> v;
            for (const auto& s : a) v.push_back(parse_item(s.get<std::string>()));
            return v;
        };
        if (j.contains("items")) e.items = items(j.at("items"));
        if (j.contains("antecedent")) e.items = items(j.at("antecedent"));
        if (j.contains("consequent")) e.consequent = items(j.at("consequent"));
        if (j.contains("path")) e.path = j.at("path").get<std::vector<int>>();
        e.side = j.value("side", std::string());
        e.terminal = j.value("terminal", false);
        if (j.contains("detail")) e.detail = j.at("detail").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& ex) {
        throw SchemaError(std::string("malformed element: ") + ex.what());
    } catch (const ConfigError& ex) {
        throw SchemaError(std::string("malformed element: ") + ex.what());
    }
    return e;
}

}  // namespace ixrl
