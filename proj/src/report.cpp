#include "ixrl/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "ixrl/errors.hpp"
#include "ixrl/frogger.hpp"

namespace ixrl {

const std::vector<Element>& InterestingnessReport::of(ElementKind k) const {
    static const std::vector<Element> none;
    auto it = elements.find(k);
    return it == elements.end() ? none : it->second;
}

bool InterestingnessReport::degenerate() const {
    return of(ElementKind::Maxima).empty() && of(ElementKind::Minima).empty();
}

namespace {

nlohmann::json optional_number(const std::optional<double>& x) {
    return x ? nlohmann::json(*x) : nlohmann::json(nullptr);
}

std::optional<double> read_optional(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<double>();
}

nlohmann::json sequence_json(const SequenceResult& r) {
    return {{"path", r.path}, {"probability", r.probability}, {"target_value", r.target_value},
            {"objective", r.objective}};
}

SequenceResult sequence_from_json(const nlohmann::json& j) {
    SequenceResult r;
    r.path = j.at("path").get<std::vector<int>>();
    r.probability = j.at("probability").get<double>();
    r.target_value = j.at("target_value").get<double>();
    r.objective = j.at("objective").get<double>();
    if (r.path.empty() || r.path.size() % 2 == 0) throw SchemaError("sequence path must alternate states and actions");
    return r;
}

}  // namespace

nlohmann::json InterestingnessReport::to_json() const {
    nlohmann::json elems = nlohmann::json::object();
    for (ElementKind k : all_element_kinds()) {
        nlohmann::json list = nlohmann::json::array();
        for (const auto& e : of(k)) list.push_back(ixrl::to_json(e));
        elems[std::string(to_string(k))] = list;
    }
    nlohmann::json features = nlohmann::json::array();
    for (const auto& f : feature_aggregates)
        features.push_back({{"item", item_name(f.item)},
                            {"observations", f.observations},
                            {"execution_evenness", optional_number(f.execution_evenness)},
                            {"transition_evenness", optional_number(f.transition_evenness)}});
    return {{"format", "ixrl-report"},
            {"schema_version", kSchemaVersion},
            {"provenance", provenance},
            {"config", ixrl::to_json(config)},
            {"scalars",
             {{"total_steps", total_steps},
              {"obs_space_size", obs_space_size},
              {"unique_observations", unique_observations},
              {"coverage", optional_number(coverage)},
              {"dispersion", optional_number(dispersion)},
              {"mean_prediction_error", optional_number(mean_prediction_error)}}},
            {"elements", elems},
            {"feature_aggregates", features},
            {"best_sequence", best_sequence ? sequence_json(*best_sequence) : nlohmann::json(nullptr)}};
}

InterestingnessReport InterestingnessReport::from_json(const nlohmann::json& j) {
    InterestingnessReport r;
    try {
        if (!j.is_object() || j.value("format", std::string()) != "ixrl-report")
            throw SchemaError("not an ixrl report");
        const int version = j.at("schema_version").get<int>();
        if (version != kSchemaVersion)
            throw SchemaError("unsupported report schema_version " + std::to_string(version));
        r.provenance = j.at("provenance");
        try {
            r.config = analysis_config_from_json(j.at("config"));
        } catch (const ConfigError& e) {
            throw SchemaError(std::string("report config: ") + e.what());
        }
        const auto& sc = j.at("scalars");
        r.total_steps = sc.at("total_steps").get<std::uint64_t>();
        r.obs_space_size = sc.at("obs_space_size").get<long>();
        r.unique_observations = sc.at("unique_observations").get<long>();
        r.coverage = read_optional(sc, "coverage");
        r.dispersion = read_optional(sc, "dispersion");
        r.mean_prediction_error = read_optional(sc, "mean_prediction_error");
        const auto& elems = j.at("elements");
        for (const auto& [name, list] : elems.items()) {
            const ElementKind k = parse_element_kind(name);
            auto& v = r.elements[k];
            for (const auto& e : list) v.push_back(element_from_json(e, k));
        }
        for (ElementKind k : all_element_kinds())
            if (!elems.contains(std::string(to_string(k))))
                throw SchemaError("report lacks element kind " + std::string(to_string(k)));
        for (const auto& f : j.at("feature_aggregates")) {
            FeatureAggregate fa;
            fa.item = parse_item(f.at("item").get<std::string>());
            fa.observations = f.at("observations").get<long>();
            fa.execution_evenness = read_optional(f, "execution_evenness");
            fa.transition_evenness = read_optional(f, "transition_evenness");
            r.feature_aggregates.push_back(fa);
        }
        if (!j.at("best_sequence").is_null()) r.best_sequence = sequence_from_json(j.at("best_sequence"));
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("malformed report: ") + e.what());
    }
    return r;
}

void write_json_file(const std::filesystem::path& path, const nlohmann::json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << j.dump(1) << '\n';
    out.close();
    if (!out) throw IoError("failed writing " + path.string());
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError(path.string() + ": " + e.what());
    }
}

void InterestingnessReport::save(const std::filesystem::path& path) const { write_json_file(path, to_json()); }

InterestingnessReport InterestingnessReport::load(const std::filesystem::path& path) {
    return from_json(read_json_file(path));
}

InterestingnessReport analyze(const InteractionDataset& ds, const AnalysisConfig& cfg, const GoalPredicate& is_goal) {
    cfg.validate();
    InterestingnessReport r;
    r.config = cfg;
    r.provenance = ds.provenance;
    r.total_steps = ds.total_steps();
    r.obs_space_size = ds.obs_space_size();
    for (ElementKind k : all_element_kinds()) r.elements[k];

    auto put = [&](ElementKind k, std::vector<Element> v) { r.elements[k] = std::move(v); };

    auto tc = transition_certainty(ds, cfg);
    put(ElementKind::CertainTrans, std::move(tc.certain));
    put(ElementKind::UncertainTrans, std::move(tc.uncertain));
    put(ElementKind::RewardOutliers, reward_outliers(ds, cfg));

    auto fq = frequency_elements(ds, cfg);
    put(ElementKind::Frequent, std::move(fq.frequent));
    put(ElementKind::Infrequent, std::move(fq.infrequent));
    r.unique_observations = fq.unique_observations;
    r.coverage = fq.coverage;
    r.dispersion = fq.dispersion;

    auto as = feature_associations(ds, cfg);
    put(ElementKind::FeatureSets, std::move(as.strong));
    put(ElementKind::WeakFeatureSets, std::move(as.weak));
    put(ElementKind::FeatureRules, std::move(as.rules));

    auto ec = execution_certainty(ds, cfg);
    put(ElementKind::CertainExec, std::move(ec.certain));
    put(ElementKind::UncertainExec, std::move(ec.uncertain));
    put(ElementKind::Ancient, recency_elements(ds, cfg));

    auto ve = value_elements(ds, cfg);
    put(ElementKind::ValueOutliers, std::move(ve.value_outliers));
    put(ElementKind::PredictionOutliers, std::move(ve.prediction_outliers));
    r.mean_prediction_error = ve.mean_prediction_error;

    const auto graph = TransitionGraph::from_dataset(ds);
    put(ElementKind::VarianceOutliers, variance_outliers(graph, cfg.variance_outlier_lambda));
    const auto ex = extrema(graph, cfg.extrema_min_count);
    put(ElementKind::Maxima, extrema_elements(graph, ex, true));
    put(ElementKind::Minima, extrema_elements(graph, ex, false));

    // Sequences run from proper minima to proper maxima.
    std::vector<int> starts, goals;
    for (int s : ex.minima)
        if (!ex.terminal.count(s)) starts.push_back(s);
    for (int s : ex.maxima)
        if (!ex.terminal.count(s)) goals.push_back(s);
    if (!starts.empty() && !goals.empty()) {
        // The limit counts visited states, so a path may take one hop fewer.
        const auto search = most_likely_sequences(graph, starts, goals, cfg.sequence_max_len - 1);
        put(ElementKind::Sequences, sequence_elements(search));
        r.best_sequence = search.best;
    }
    put(ElementKind::ContradictoryValues, contradictory_values(ds, cfg));
    put(ElementKind::ContradictoryGoals, contradictory_goals(graph, ex, is_goal));
    if (ds.total_steps() > 0) r.feature_aggregates = feature_aggregates(ds);
    return r;
}

namespace {

std::string subject_text(const Element& e) {
    std::ostringstream os;
    if (!e.path.empty()) {
        for (std::size_t i = 0; i < e.path.size(); ++i) {
            if (i % 2 == 0) os << (i ? " " : "") << frogger::describe(frogger::decode(e.path[i]));
            else os << " -" << frogger::to_string(static_cast<frogger::Action>(e.path[i])) << "->";
        }
        return os.str();
    }
    auto items = [](const std::vector<int>& v) {
        std::string s = "{";
        for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + item_name(v[i]);
        return s + "}";
    };
    if (!e.consequent.empty()) return items(e.items) + " => " + items(e.consequent);
    if (!e.items.empty()) return items(e.items);
    if (e.state >= 0) os << frogger::describe(frogger::decode(e.state));
    if (e.action >= 0) os << " " << frogger::to_string(static_cast<frogger::Action>(e.action));
    if (!e.side.empty()) os << " (" << e.side << ")";
    if (e.terminal) os << " [terminal]";
    return os.str();
}

std::string number(const std::optional<double>& x) {
    if (!x) return "null";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", *x);
    return buf;
}

}  // namespace

std::string format_digest(const InterestingnessReport& report, int max_rows) {
    std::ostringstream os;
    os << "ixrl report digest (schema " << InterestingnessReport::kSchemaVersion << ")\n";
    if (report.provenance.contains("profile")) os << "profile: " << report.provenance["profile"].dump() << "\n";
    os << "total steps: " << report.total_steps << "\n"
       << "unique observations: " << report.unique_observations << " of " << report.obs_space_size << "\n"
       << "coverage: " << number(report.coverage) << "\n"
       << "dispersion: " << number(report.dispersion) << "\n"
       << "mean prediction error: " << number(report.mean_prediction_error) << "\n\n";
    os << "[index]\n";
    for (ElementKind k : all_element_kinds()) os << to_string(k) << " " << report.of(k).size() << "\n";
    os << "[end index]\n";
    for (ElementKind k : all_element_kinds()) {
        const auto& list = report.of(k);
        os << "\n== " << to_string(k) << " (" << list.size() << ")\n";
        if (list.empty()) {
            os << "   (none)\n";
            continue;
        }
        const int shown = std::min<int>(max_rows, static_cast<int>(list.size()));
        for (int i = 0; i < shown; ++i) {
            char score[64];
            std::snprintf(score, sizeof score, "%12.6g", list[static_cast<std::size_t>(i)].score);
            os << "  " << list[static_cast<std::size_t>(i)].rank << ". " << score << "  "
               << subject_text(list[static_cast<std::size_t>(i)]) << "\n";
        }
        if (shown < static_cast<int>(list.size())) os << "  ... " << list.size() - shown << " more\n";
    }
    return os.str();
}

std::map<ElementKind, std::size_t> parse_digest_index(const std::string& digest) {
    std::map<ElementKind, std::size_t> out;
    std::istringstream in(digest);
    std::string line;
    bool inside = false;
    while (std::getline(in, line)) {
        if (line == "[index]") { inside = true; continue; }
        if (line == "[end index]") return out;
        if (!inside) continue;
        std::istringstream ls(line);
        std::string name;
        std::size_t n = 0;
        if (!(ls >> name >> n)) throw SchemaError("malformed digest index line '" + line + "'");
        out[parse_element_kind(name)] = n;
    }
    throw SchemaError("digest has no complete index section");
}

}  // namespace ixrl
