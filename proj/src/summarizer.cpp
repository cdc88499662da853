#include "ixrl/summarizer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>

#include "ixrl/errors.hpp"

namespace ixrl {

namespace {

constexpr std::array<std::string_view, 11> kTechniqueNames = {
    "Max", "Min", "Cert", "Uncert", "Freq", "Infreq", "Max-Min", "Cert-Uncert", "Freq-Infreq", "All", "Seq"};

bool overlaps(const Highlight& a, int episode, int start, int end) {
    return a.episode == episode && a.start <= end && start <= a.end;
}

}  // namespace

std::string_view to_string(Technique t) { return kTechniqueNames.at(static_cast<std::size_t>(t)); }

Technique parse_technique(std::string_view s) {
    for (std::size_t i = 0; i < kTechniqueNames.size(); ++i)
        if (kTechniqueNames[i] == s) return static_cast<Technique>(i);
    throw ConfigError("unknown technique '" + std::string(s) + "'");
}

const std::vector<Technique>& all_techniques() {
    static const std::vector<Technique> all = [] {
        std::vector<Technique> v;
        for (std::size_t i = 0; i < kTechniqueNames.size(); ++i) v.push_back(static_cast<Technique>(i));
        return v;
    }();
    return all;
}

SummarySpec SummarySpec::preset(Technique t) {
    SummarySpec s;
    s.technique = t;
    s.k = t == Technique::All ? 6 : t == Technique::Seq ? 1 : 4;
    return s;
}

void SummarySpec::validate() const {
    if (k < 1) throw ConfigError("summary budget must be positive");
    if (l < 1 || l % 2 == 0) throw ConfigError("highlight length must be a positive odd number");
    if (seq_max_len < 1) throw ConfigError("seq_max_len must be positive");
    if (fade_frames < 0) throw ConfigError("fade_frames must be non-negative");
}

std::vector<std::pair<ElementKind, int>> composition(const SummarySpec& spec) {
    using K = ElementKind;
    const int hi = (spec.k + 1) / 2, lo = spec.k / 2;
    switch (spec.technique) {
        case Technique::Max: return {{K::Maxima, spec.k}};
        case Technique::Min: return {{K::Minima, spec.k}};
        case Technique::Cert: return {{K::CertainExec, spec.k}};
        case Technique::Uncert: return {{K::UncertainExec, spec.k}};
        case Technique::Freq: return {{K::Frequent, spec.k}};
        case Technique::Infreq: return {{K::Infrequent, spec.k}};
        case Technique::MaxMin: return {{K::Maxima, hi}, {K::Minima, lo}};
        case Technique::CertUncert: return {{K::CertainExec, hi}, {K::UncertainExec, lo}};
        case Technique::FreqInfreq: return {{K::Frequent, hi}, {K::Infrequent, lo}};
        case Technique::All: {
            // One of each kind; a larger budget cycles through them again.
            const std::array<K, 6> kinds = {K::Maxima, K::Minima, K::CertainExec,
                                            K::UncertainExec, K::Frequent, K::Infrequent};
            std::vector<std::pair<K, int>> out;
            for (std::size_t i = 0; i < kinds.size(); ++i) {
                const int n = spec.k / 6 + (static_cast<int>(i) < spec.k % 6 ? 1 : 0);
                if (n > 0) out.emplace_back(kinds[i], n);
            }
            return out;
        }
        case Technique::Seq: return {{K::Sequences, spec.k}};
    }
    return {};
}

// ---- diversity --------------------------------------------------------------

double diversity_objective(std::span<const double> xs) {
    if (xs.size() < 2) return 0.0;
    double hi = 0.0, lo = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = i + 1; j < xs.size(); ++j) {
            const double d = std::abs(xs[i] - xs[j]);
            hi = std::max(hi, d);
            lo = std::min(lo, d);
        }
    return hi * lo;
}

std::size_t replacement_index(std::span<const double> buffer, double candidate) {
    std::vector<double> pool(buffer.begin(), buffer.end());
    pool.push_back(candidate);
    const std::size_t k = buffer.size();
    std::vector<double> subset;
    auto without = [&](std::size_t drop) {
        subset.clear();
        for (std::size_t i = 0; i < pool.size(); ++i)
            if (i != drop) subset.push_back(pool[i]);
        return diversity_objective(subset);
    };
    std::size_t best = k;
    double best_value = without(k);
    for (std::size_t i = 0; i < k; ++i) {
        const double v = without(i);
        if (v > best_value) {
            best_value = v;
            best = i;
        }
    }
    return best;
}

std::vector<std::size_t> select_diverse(std::span<const double> stream, std::size_t k) {
    std::vector<std::size_t> kept;
    std::vector<double> values;
    if (k == 0) return kept;
    for (std::size_t i = 0; i < stream.size(); ++i) {
        if (kept.size() < k) {
            kept.push_back(i);
            values.push_back(stream[i]);
            continue;
        }
        const std::size_t drop = replacement_index(values, stream[i]);
        if (drop == k) continue;
        kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(drop));
        values.erase(values.begin() + static_cast<std::ptrdiff_t>(drop));
        kept.push_back(i);
        values.push_back(stream[i]);
    }
    return kept;
}

// ---- trace index ------------------------------------------------------------

TraceIndex::TraceIndex(const Trace& trace, std::optional<Phase> phase)
    : trace_(&trace), by_state_(frogger::kNumObservations) {
    bool first = true;
    for (std::size_t i = 0; i < trace.records.size(); ++i) {
        const auto& r = trace.records[i];
        if (r.episode < 0) throw SchemaError("negative episode index in trace");
        const auto e = static_cast<std::size_t>(r.episode);
        if (e >= episodes_.size()) {
            episodes_.resize(e + 1);
            has_episode_.resize(e + 1, false);
        }
        if (!has_episode_[e]) {
            episodes_[e] = {i, i};
            has_episode_[e] = true;
        } else {
            if (episodes_[e].second + 1 != i || trace.records[i - 1].step + 1 != r.step)
                throw SchemaError("trace episode " + std::to_string(r.episode) + " is not contiguous");
            episodes_[e].second = i;
        }
        if (phase && r.phase != *phase) continue;
        filtered_.push_back(i);
        by_state_.at(static_cast<std::size_t>(r.s)).push_back(i);
        if (first || r.score < min_score_) min_score_ = r.score;
        if (first || r.score > max_score_) max_score_ = r.score;
        first = false;
    }
}

const std::vector<std::size_t>& TraceIndex::visits(int s) const { return by_state_.at(static_cast<std::size_t>(s)); }

std::pair<std::size_t, std::size_t> TraceIndex::episode_range(int episode) const {
    const auto e = static_cast<std::size_t>(episode);
    if (episode < 0 || e >= episodes_.size() || !has_episode_[e])
        throw UsageError("episode " + std::to_string(episode) + " is not in the trace");
    return episodes_[e];
}

int TraceIndex::last_step(int episode) const {
    return trace_->records[episode_range(episode).second].step;
}

std::size_t TraceIndex::record_at(int episode, int step) const {
    const auto [first, last] = episode_range(episode);
    const std::size_t i = first + static_cast<std::size_t>(step - trace_->records[first].step);
    if (step < trace_->records[first].step || i > last) throw UsageError("step outside the episode");
    return i;
}

double TraceIndex::normalized_score(long score) const {
    if (max_score_ == min_score_) return 0.0;
    return static_cast<double>(score - min_score_) / static_cast<double>(max_score_ - min_score_);
}

// ---- selection ----------------------------------------------------------------

std::vector<Highlight> select_highlights(const TraceIndex& index, const std::vector<Element>& ranked,
                                         int budget, int l, int fade_frames,
                                         const std::vector<Highlight>& taken) {
    std::vector<Highlight> buffer;
    std::vector<double> keys;
    if (budget <= 0) return buffer;
    const int half = (l - 1) / 2;
    const auto& records = index.trace().records;
    const auto k = static_cast<std::size_t>(budget);

    for (const Element& el : ranked) {
        if (el.state < 0) continue;
        for (std::size_t i : index.visits(el.state)) {
            const auto& r = records[i];
            if (el.action >= 0 && r.a != el.action) continue;
            const int first_step = records[index.episode_range(r.episode).first].step;
            const int start = std::max(first_step, r.step - half);
            const int end = std::min(index.last_step(r.episode), r.step + half);
            auto clash = [&](const Highlight& h) { return overlaps(h, r.episode, start, end); };
            if (std::any_of(taken.begin(), taken.end(), clash) || std::any_of(buffer.begin(), buffer.end(), clash))
                continue;
            Highlight h{r.episode, r.step, start, end, el.kind, el.state, el.rank, el.score, r.score, fade_frames};
            const double key = index.normalized_score(r.score);
            if (buffer.size() < k) {
                buffer.push_back(h);
                keys.push_back(key);
                continue;
            }
            const std::size_t drop = replacement_index(keys, key);
            if (drop == k) continue;
            buffer.erase(buffer.begin() + static_cast<std::ptrdiff_t>(drop));
            keys.erase(keys.begin() + static_cast<std::ptrdiff_t>(drop));
            buffer.push_back(h);
            keys.push_back(key);
        }
        // Lower-ranked elements only fill slots the better ones could not.
        if (buffer.size() == k) break;
    }
    return buffer;
}

namespace {

Highlight sequence_window(const std::vector<TransitionRecord>& records, std::size_t from, std::size_t to,
                          const SequenceResult& seq, int fade_frames) {
    const auto& r0 = records[from];
    const int hops = static_cast<int>(to - from);
    Highlight h;
    h.episode = r0.episode;
    h.start = r0.step;
    h.end = r0.step + hops;
    h.center_step = r0.step + hops / 2;
    h.kind = ElementKind::Sequences;
    h.state = seq.initial();
    h.element_rank = 1;
    h.element_score = seq.objective;
    h.score_at_center = records[from + static_cast<std::size_t>(hops / 2)].score;
    h.fade_frames = fade_frames;
    return h;
}

}  // namespace

HighlightManifest sequence_highlight(const SequenceResult& seq, const TraceIndex& index, int seq_max_len,
                                     int fade_frames) {
    HighlightManifest m;
    m.technique = Technique::Seq;
    m.k = 1;
    m.l = seq_max_len;
    if (seq.path.empty()) throw UsageError("empty sequence");
    const auto& records = index.trace().records;
    const int hops = seq.length();
    m.synthetic_path = seq.path;
    if (hops + 1 > seq_max_len) {
        m.notes.push_back("sequence longer than seq_max_len");
        m.synthetic = true;
        return m;
    }
    // Exact realization: same states and actions, inside one episode.
    for (std::size_t i : index.visits(seq.initial())) {
        const std::size_t last = index.episode_range(records[i].episode).second;
        const std::size_t j = i + static_cast<std::size_t>(hops);
        if (j > last || records[j].s != seq.target()) continue;
        bool match = true;
        for (int h = 0; h < hops && match; ++h) {
            const auto& r = records[i + static_cast<std::size_t>(h)];
            match = r.a == seq.path[static_cast<std::size_t>(2 * h + 1)] &&
                    r.s_next == seq.path[static_cast<std::size_t>(2 * h + 2)];
        }
        if (!match) continue;
        m.highlights.push_back(sequence_window(records, i, j, seq, fade_frames));
        m.synthetic_path.clear();
        m.notes.push_back("exact realization of the sequence path");
        return m;
    }
    // Aliased observations rarely repeat a long path verbatim. Fall back to the
    // earliest segment that leaves the same initial state and reaches the same
    // target within the length limit, starting from the latest initial visit.
    std::optional<std::size_t> start;
    int episode = -1;
    for (std::size_t i : index.filtered()) {
        const auto& r = records[i];
        if (r.episode != episode) {
            episode = r.episode;
            start.reset();
        }
        if (r.s == seq.target() && start && i - *start + 1 <= static_cast<std::size_t>(seq_max_len) &&
            (i > *start || seq.initial() == seq.target())) {
            m.highlights.push_back(sequence_window(records, *start, i, seq, fade_frames));
            m.synthetic_path.clear();
            m.notes.push_back("segment realizes the sequence endpoints, not its exact path");
            return m;
        }
        if (r.s == seq.initial()) start = i;
    }
    m.synthetic = true;
    m.notes.push_back("no trace segment realizes the sequence");
    return m;
}

HighlightManifest summarize(const SummarySpec& spec, const InterestingnessReport& report,
                            const TraceIndex& index) {
    spec.validate();
    HighlightManifest m;
    if (spec.technique == Technique::Seq) {
        if (!report.best_sequence) {
            m.technique = Technique::Seq;
            m.k = spec.k;
            m.l = spec.seq_max_len;
            m.notes.push_back("report has no sequence");
        } else {
            m = sequence_highlight(*report.best_sequence, index, spec.seq_max_len, spec.fade_frames);
            // The best path may be unrealizable; try the other reported ones by rank.
            for (const Element& e : report.of(ElementKind::Sequences)) {
                if (!m.synthetic) break;
                if (e.path.empty() || e.path == report.best_sequence->path) continue;
                SequenceResult alt;
                alt.path = e.path;
                alt.objective = e.score;
                auto tried = sequence_highlight(alt, index, spec.seq_max_len, spec.fade_frames);
                if (!tried.synthetic) m = std::move(tried);
            }
        }
    } else {
        m.technique = spec.technique;
        m.k = spec.k;
        m.l = spec.l;
        for (const auto& [kind, n] : composition(spec)) {
            auto chosen = select_highlights(index, report.of(kind), n, spec.l, spec.fade_frames, m.highlights);
            if (static_cast<int>(chosen.size()) < n)
                m.notes.push_back(std::string(to_string(kind)) + ": " + std::to_string(chosen.size()) + " of " +
                                  std::to_string(n) + " highlights realizable");
            m.highlights.insert(m.highlights.end(), chosen.begin(), chosen.end());
        }
    }
    m.profile = report.provenance.value("profile", std::string());
    return m;
}

// ---- manifest JSON ------------------------------------------------------------

nlohmann::json HighlightManifest::to_json() const {
    nlohmann::json hs = nlohmann::json::array();
    for (const auto& h : highlights)
        hs.push_back({{"episode", h.episode},
                      {"center_step", h.center_step},
                      {"window", {h.start, h.end}},
                      {"element_kind", to_string(h.kind)},
                      {"state", h.state},
                      {"observation", frogger::describe(frogger::decode(h.state))},
                      {"element_rank", h.element_rank},
                      {"element_score", h.element_score},
                      {"score_at_center", h.score_at_center},
                      {"fade_frames", h.fade_frames}});
    nlohmann::json j = {{"format", "ixrl-manifest"},
                        {"schema_version", kSchemaVersion},
                        {"technique", to_string(technique)},
                        {"profile", profile},
                        {"k", k},
                        {"l", l},
                        {"provenance", provenance},
                        {"highlights", hs},
                        {"synthetic", synthetic},
                        {"notes", notes}};
    if (synthetic) j["path"] = synthetic_path;
    return j;
}

HighlightManifest HighlightManifest::from_json(const nlohmann::json& j) {
    try {
        if (j.value("format", std::string()) != "ixrl-manifest") throw SchemaError("not a highlight manifest");
        if (j.at("schema_version").get<int>() != kSchemaVersion)
            throw SchemaError("unsupported manifest schema_version " + j.at("schema_version").dump());
        HighlightManifest m;
        try {
            m.technique = parse_technique(j.at("technique").get<std::string>());
        } catch (const ConfigError& e) {
            throw SchemaError(e.what());
        }
        m.profile = j.at("profile").get<std::string>();
        m.k = j.at("k").get<int>();
        m.l = j.at("l").get<int>();
        m.provenance = j.at("provenance");
        m.synthetic = j.at("synthetic").get<bool>();
        m.notes = j.at("notes").get<std::vector<std::string>>();
        if (m.synthetic) m.synthetic_path = j.at("path").get<std::vector<int>>();
        for (const auto& h : j.at("highlights")) {
            Highlight x;
            x.episode = h.at("episode").get<int>();
            x.center_step = h.at("center_step").get<int>();
            x.start = h.at("window").at(0).get<int>();
            x.end = h.at("window").at(1).get<int>();
            x.kind = parse_element_kind(h.at("element_kind").get<std::string>());
            x.state = h.at("state").get<int>();
            x.element_rank = h.at("element_rank").get<int>();
            x.element_score = h.at("element_score").get<double>();
            x.score_at_center = h.at("score_at_center").get<long>();
            x.fade_frames = h.at("fade_frames").get<int>();
            if (x.start > x.center_step || x.center_step > x.end) throw SchemaError("highlight center outside window");
            m.highlights.push_back(x);
        }
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("malformed manifest: ") + e.what());
    }
}

// ---- rendering ----------------------------------------------------------------

ReplayContext replay_context(const TraceHeader& header) {
    const auto& j = header.json;
    try {
        ReplayContext c;
        c.game = frogger::game_config_from_json(j.at("game"));
        c.profile = profile_from_json(j.at("profile"));
        c.seed = j.at("seed").get<std::uint64_t>();
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("trace header lacks replay information: ") + e.what());
    } catch (const ConfigError& e) {
        throw SchemaError(std::string("trace header lacks replay information: ") + e.what());
    }
}

namespace {

void write_file(const std::filesystem::path& p, const std::string& bytes) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw IoError("cannot write " + p.string());
    out << bytes;
    if (!out) throw IoError("write failed for " + p.string());
}

std::string_view fade_label(int i, int n, int fade) {
    const bool in = i < fade, out = i >= n - fade;
    if (in && out) return "in-out";
    if (in) return "in";
    if (out) return "out";
    return "none";
}

}  // namespace

std::size_t render(const HighlightManifest& manifest, const TraceIndex& index, const ReplayContext& ctx,
                   const std::filesystem::path& out_dir, bool ppm) {
    const auto& records = index.trace().records;
    const auto root = out_dir / std::string(to_string(manifest.technique));
    std::size_t written = 0;
    std::error_code ec;
    std::filesystem::create_directories(root, ec);
    if (ec) throw IoError("cannot create " + root.string() + ": " + ec.message());

    if (manifest.synthetic) {
        std::string text = "synthetic sequence\n";
        for (std::size_t i = 0; i < manifest.synthetic_path.size(); ++i) {
            if (i % 2 == 0)
                text += frogger::describe(frogger::decode(manifest.synthetic_path[i])) + "\n";
            else
                text += std::string("  ") +
                        std::string(frogger::to_string(static_cast<frogger::Action>(manifest.synthetic_path[i]))) + "\n";
        }
        write_file(root / "path.txt", text);
        return 1;
    }

    for (std::size_t hi = 0; hi < manifest.highlights.size(); ++hi) {
        const Highlight& h = manifest.highlights[hi];
        const auto dir = root / std::to_string(hi);
        std::filesystem::create_directories(dir, ec);
        if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

        frogger::Game game(ctx.game, ctx.profile.perception(), ctx.profile.r_river);
        game.reset(episode_seed(ctx.seed, h.episode));
        const auto [first, last] = index.episode_range(h.episode);
        const int n = h.frames();
        for (std::size_t i = first; i <= last; ++i) {
            const auto& r = records[i];
            if (frogger::encode(game.observe()) != r.s)
                throw IntegrityError("replay diverged from the trace at episode " + std::to_string(h.episode) +
                                     " step " + std::to_string(r.step));
            if (r.step >= h.start && r.step <= h.end) {
                const int f = r.step - h.start;
                std::string text = "episode " + std::to_string(h.episode) + " step " + std::to_string(r.step) +
                                   " fade " + std::string(fade_label(f, n, h.fade_frames)) + "\n";
                text += game.render_ascii();
                write_file(dir / (std::to_string(r.step) + ".txt"), text);
                ++written;
                if (ppm) {
                    write_file(dir / (std::to_string(r.step) + ".ppm"), game.render_ppm());
                    ++written;
                }
            }
            if (r.step >= h.end) break;
            const auto out = game.step(static_cast<frogger::Action>(r.a));
            if (frogger::encode(out.next_observation) != r.s_next || out.reward != r.r)
                throw IntegrityError("replay diverged from the trace at episode " + std::to_string(h.episode) +
                                     " step " + std::to_string(r.step));
        }
    }
    return written;
}

}  // namespace ixrl
