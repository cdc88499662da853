#include "ixrl/recorder.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "ixrl/errors.hpp"

namespace ixrl {

using frogger::DeathCause;
using frogger::Region;

std::string_view to_string(Phase p) { return p == Phase::Train ? "train" : "test"; }

Phase parse_phase(std::string_view s) {
    if (s == "train") return Phase::Train;
    if (s == "test") return Phase::Test;
    throw SchemaError("unknown phase '" + std::string(s) + "'");
}

InteractionDataset::InteractionDataset(int num_states, int num_actions, double q_init, long obs_space_size)
    : num_states_(num_states),
      num_actions_(num_actions),
      obs_space_size_(obs_space_size),
      n_s_(static_cast<std::size_t>(num_states), 0),
      n_sa_(static_cast<std::size_t>(num_states * num_actions), 0),
      n_sas_(static_cast<std::size_t>(num_states * num_actions)),
      t_s_(static_cast<std::size_t>(num_states), -1),
      t_sa_(static_cast<std::size_t>(num_states * num_actions), -1),
      r_hat_(static_cast<std::size_t>(num_states * num_actions), 0.0),
      dq_hat_(static_cast<std::size_t>(num_states * num_actions), 0.0),
      dq_abs_hat_(static_cast<std::size_t>(num_states * num_actions), 0.0),
      q_(num_states, num_actions, q_init) {
    set_obs_space_size(obs_space_size);
}

void InteractionDataset::set_obs_space_size(long n) {
    if (n < 1) throw ConfigError("observation space size must be positive");
    obs_space_size_ = n;
}

std::size_t InteractionDataset::pair(int s, int a) const {
    if (s < 0 || s >= num_states_ || a < 0 || a >= num_actions_)
        throw UsageError("state/action index out of range");
    return static_cast<std::size_t>(s * num_actions_ + a);
}

void InteractionDataset::record(const TransitionRecord& tr, double td_error) {
    const std::size_t sa = pair(tr.s, tr.a);
    if (tr.s_next < 0 || tr.s_next >= num_states_) throw UsageError("successor index out of range");
    const auto t = static_cast<std::int64_t>(total_steps_);
    const auto s = static_cast<std::size_t>(tr.s);
    ++n_s_[s];
    const double n = static_cast<double>(++n_sa_[sa]);
    ++n_sas_[sa][tr.s_next];
    t_s_[s] = t;
    t_sa_[sa] = t;
    r_hat_[sa] += (tr.r - r_hat_[sa]) / n;
    dq_hat_[sa] += (td_error - dq_hat_[sa]) / n;
    dq_abs_hat_[sa] += (std::abs(td_error) - dq_abs_hat_[sa]) / n;
    ++total_steps_;
}

std::uint64_t InteractionDataset::count(int s, int a, int s_next) const {
    const auto& m = n_sas_.at(pair(s, a));
    const auto it = m.find(s_next);
    return it == m.end() ? 0 : it->second;
}

void InteractionDataset::set_q(QTable q) {
    if (q.num_states() != num_states_ || q.num_actions() != num_actions_)
        throw UsageError("Q-table shape does not match the dataset");
    q_ = std::move(q);
}

std::vector<int> InteractionDataset::visited_states() const {
    std::vector<int> out;
    for (int s = 0; s < num_states_; ++s)
        if (n_s_[static_cast<std::size_t>(s)] > 0) out.push_back(s);
    return out;
}

std::vector<Successor> InteractionDataset::estimated_transition(int s, int a) const {
    std::vector<Successor> out;
    const std::size_t sa = pair(s, a);
    const auto total = static_cast<double>(n_sa_[sa]);
    if (total == 0) return out;
    for (const auto& [next, c] : n_sas_[sa]) out.push_back({next, static_cast<double>(c) / total});
    return out;
}

std::optional<std::vector<double>> InteractionDataset::interaction_policy(int s) const {
    const auto total = static_cast<double>(count(s));
    if (total == 0) return std::nullopt;
    std::vector<double> p(static_cast<std::size_t>(num_actions_));
    for (int a = 0; a < num_actions_; ++a)
        p[static_cast<std::size_t>(a)] = static_cast<double>(count(s, a)) / total;
    return p;
}

nlohmann::json InteractionDataset::to_json() const {
    nlohmann::json states = nlohmann::json::array();
    for (int s : visited_states()) {
        nlohmann::json actions = nlohmann::json::array();
        for (int a = 0; a < num_actions_; ++a) {
            const std::size_t sa = pair(s, a);
            if (n_sa_[sa] == 0) continue;
            nlohmann::json next = nlohmann::json::array();
            for (const auto& [sn, c] : n_sas_[sa]) next.push_back({sn, c});
            actions.push_back({{"a", a},
                               {"n", n_sa_[sa]},
                               {"t", t_sa_[sa]},
                               {"r_hat", r_hat_[sa]},
                               {"dq_hat", dq_hat_[sa]},
                               {"dq_abs_hat", dq_abs_hat_[sa]},
                               {"next", next}});
        }
        states.push_back({{"s", s},
                          {"n", n_s_[static_cast<std::size_t>(s)]},
                          {"t", t_s_[static_cast<std::size_t>(s)]},
                          {"actions", actions}});
    }
    // Q entries that moved away from q_init, stored sparsely.
    nlohmann::json q = nlohmann::json::array();
    for (int s = 0; s < num_states_; ++s)
        for (int a = 0; a < num_actions_; ++a)
            if (q_(s, a) != q_.q_init()) q.push_back({s, a, q_(s, a)});
    return {{"schema_version", kSchemaVersion},
            {"format", "ixrl-dataset"},
            {"num_states", num_states_},
            {"num_actions", num_actions_},
            {"obs_space_size", obs_space_size_},
            {"total_steps", total_steps_},
            {"q_init", q_.q_init()},
            {"provenance", provenance},
            {"states", states},
            {"q", q}};
}

InteractionDataset InteractionDataset::from_json(const nlohmann::json& j) {
    try {
        if (j.value("format", std::string()) != "ixrl-dataset")
            throw SchemaError("not a dataset snapshot");
        if (j.at("schema_version").get<int>() != kSchemaVersion)
            throw SchemaError("unsupported dataset schema_version " + j.at("schema_version").dump());
        InteractionDataset ds(j.at("num_states").get<int>(), j.at("num_actions").get<int>(),
                              j.at("q_init").get<double>(), j.at("obs_space_size").get<long>());
        ds.total_steps_ = j.at("total_steps").get<std::uint64_t>();
        ds.provenance = j.at("provenance");
        for (const auto& st : j.at("states")) {
            const int s = st.at("s").get<int>();
            if (s < 0 || s >= ds.num_states_) throw SchemaError("state index out of range");
            ds.n_s_[static_cast<std::size_t>(s)] = st.at("n").get<std::uint64_t>();
            ds.t_s_[static_cast<std::size_t>(s)] = st.at("t").get<std::int64_t>();
            for (const auto& ac : st.at("actions")) {
                const std::size_t sa = ds.pair(s, ac.at("a").get<int>());
                ds.n_sa_[sa] = ac.at("n").get<std::uint64_t>();
                ds.t_sa_[sa] = ac.at("t").get<std::int64_t>();
                ds.r_hat_[sa] = ac.at("r_hat").get<double>();
                ds.dq_hat_[sa] = ac.at("dq_hat").get<double>();
                ds.dq_abs_hat_[sa] = ac.at("dq_abs_hat").get<double>();
                for (const auto& nx : ac.at("next"))
                    ds.n_sas_[sa][nx.at(0).get<int>()] = nx.at(1).get<std::uint64_t>();
            }
        }
        for (const auto& e : j.at("q")) ds.q_(e.at(0).get<int>(), e.at(1).get<int>()) = e.at(2).get<double>();
        return ds;
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("malformed dataset snapshot: ") + e.what());
    } catch (const UsageError& e) {
        throw SchemaError(std::string("malformed dataset snapshot: ") + e.what());
    }
}

void InteractionDataset::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << to_json().dump() << '\n';
    if (!out) throw IoError("write failed for " + path.string());
}

InteractionDataset InteractionDataset::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError("corrupt dataset snapshot " + path.string() + ": " + e.what());
    }
    return from_json(j);
}

std::string format_record(const TransitionRecord& tr) {
    char rbuf[32];
    std::snprintf(rbuf, sizeof rbuf, "%.17g", tr.r);
    std::string line;
    line.reserve(80);
    line += std::to_string(tr.episode);
    line += '\t';
    line += std::to_string(tr.step);
    line += '\t';
    line += to_string(tr.phase);
    line += '\t';
    line += std::to_string(tr.s);
    line += '\t';
    line += frogger::to_string(static_cast<frogger::Action>(tr.a));
    line += '\t';
    line += rbuf;
    line += '\t';
    line += std::to_string(tr.s_next);
    line += '\t';
    line += std::to_string(tr.score);
    line += '\t';
    line += frogger::to_string(tr.region);
    line += '\t';
    line += tr.death_cause ? frogger::to_string(*tr.death_cause) : std::string_view("-");
    line += '\t';
    line += std::to_string(tr.level);
    return line;
}

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find('\t', start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

template <typename T>
T parse_number(std::string_view s, const char* field) {
    T v{};
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw SchemaError(std::string("bad ") + field + " field '" + std::string(s) + "'");
    return v;
}

}  // namespace

TransitionRecord parse_record(std::string_view line) {
    const auto f = split_tabs(line);
    if (f.size() != 11) throw SchemaError("trace record has " + std::to_string(f.size()) + " fields, expected 11");
    TransitionRecord tr;
    tr.episode = parse_number<int>(f[0], "episode");
    tr.step = parse_number<int>(f[1], "step");
    tr.phase = parse_phase(f[2]);
    tr.s = parse_number<int>(f[3], "s");
    try {
        tr.a = static_cast<int>(frogger::parse_action(f[4]));
        tr.region = frogger::parse_region(f[8]);
        if (f[9] != "-") tr.death_cause = frogger::parse_death_cause(f[9]);
    } catch (const ConfigError& e) {
        throw SchemaError(e.what());
    }
    tr.r = parse_number<double>(f[5], "r");
    tr.s_next = parse_number<int>(f[6], "s_next");
    tr.score = parse_number<long>(f[7], "score");
    tr.level = parse_number<int>(f[10], "level");
    if (tr.s < 0 || tr.s >= frogger::kNumObservations || tr.s_next < 0 ||
        tr.s_next >= frogger::kNumObservations)
        throw SchemaError("observation index out of range in trace");
    return tr;
}

TraceWriter::TraceWriter(const std::filesystem::path& path, const TraceHeader& header)
    : path_(path), out_(path, std::ios::binary) {
    if (!out_) throw IoError("cannot write " + path.string());
    nlohmann::json h = header.json;
    h["schema_version"] = TraceHeader::kSchemaVersion;
    h["format"] = "ixrl-trace";
    out_ << h.dump() << '\n';
}

void TraceWriter::write(const TransitionRecord& tr) {
    out_ << format_record(tr) << '\n';
    if (!out_) throw IoError("write failed for " + path_.string());
}

void TraceWriter::close() {
    out_.close();
    if (out_.fail()) throw IoError("close failed for " + path_.string());
}

Trace read_trace(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    Trace trace;
    std::string line;
    if (!std::getline(in, line)) throw SchemaError("empty trace file " + path.string());
    try {
        trace.header.json = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError("corrupt trace header: " + std::string(e.what()));
    }
    if (trace.header.json.value("format", std::string()) != "ixrl-trace")
        throw SchemaError("not a trace file: " + path.string());
    if (trace.header.json.value("schema_version", 0) != TraceHeader::kSchemaVersion)
        throw SchemaError("unsupported trace schema_version");
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            trace.records.push_back(parse_record(line));
        } catch (const SchemaError& e) {
            throw SchemaError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return trace;
}

InteractionDataset dataset_from_trace(const Trace& trace, double q_init, double alpha, double gamma,
                                      std::optional<Phase> phase) {
    InteractionDataset ds(frogger::kNumObservations, frogger::kNumActions, q_init);
    QTable q(frogger::kNumObservations, frogger::kNumActions, q_init);
    for (const auto& tr : trace.records) {
        const double td = q_update(q, tr.s, tr.a, tr.r, tr.s_next, alpha, gamma);
        if (!phase || tr.phase == *phase) ds.record(tr, td);
    }
    ds.set_q(std::move(q));
    return ds;
}

}  // namespace ixrl
