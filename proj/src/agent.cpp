#include "ixrl/agent.hpp"

#include <algorithm>
#include <cmath>

#include "ixrl/errors.hpp"
#include "ixrl/hash.hpp"

namespace ixrl {

AgentProfile optimized_profile() { return {"optimized", 60.0, 40.0, -200.0, 5000.0}; }
AgentProfile high_vision_profile() { return {"high-vision", 140.0, 120.0, -200.0, 5000.0}; }
AgentProfile fear_water_profile() { return {"fear-water", 60.0, 40.0, -10000.0, 0.0}; }

AgentProfile profile_by_name(std::string_view name) {
    if (name == "optimized") return optimized_profile();
    if (name == "high-vision") return high_vision_profile();
    if (name == "fear-water") return fear_water_profile();
    throw ConfigError("unknown agent profile '" + std::string(name) + "'");
}

nlohmann::json to_json(const AgentProfile& p) {
    return {{"name", p.name}, {"vis_h", p.vis_h}, {"vis_v", p.vis_v}, {"r_river", p.r_river}, {"q_init", p.q_init}};
}

AgentProfile profile_from_json(const nlohmann::json& j) {
    try {
        if (j.is_string()) return profile_by_name(j.get<std::string>());
        AgentProfile p;
        const std::string name = j.value("name", std::string("custom"));
        if (name == "optimized" || name == "high-vision" || name == "fear-water") p = profile_by_name(name);
        p.name = j.value("name", std::string("custom"));
        p.vis_h = j.value("vis_h", p.vis_h);
        p.vis_v = j.value("vis_v", p.vis_v);
        p.r_river = j.value("r_river", p.r_river);
        p.q_init = j.value("q_init", p.q_init);
        if (p.vis_h < 0 || p.vis_v < 0) throw ConfigError("vision ranges must be non-negative");
        return p;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed profile: ") + e.what());
    }
}

double TrainingSchedule::beta(int episode) const {
    return beta_min + beta_max * std::pow(beta_decay, episode);
}

void TrainingSchedule::validate() const {
    if (episodes_train < 0 || episodes_test < 0) throw ConfigError("episode counts must be non-negative");
    if (max_steps_per_episode < 1) throw ConfigError("max_steps_per_episode must be positive");
    if (!(beta_min > 0.0)) throw ConfigError("beta_min must be positive");
    if (beta_max < 0.0 || beta_decay < 0.0 || beta_decay > 1.0) throw ConfigError("invalid beta schedule");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in (0, 1]");
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw ConfigError("gamma must lie in [0, 1]");
}

nlohmann::json to_json(const TrainingSchedule& s) {
    return {{"episodes_train", s.episodes_train}, {"episodes_test", s.episodes_test},
            {"max_steps_per_episode", s.max_steps_per_episode},
            {"beta_min", s.beta_min}, {"beta_max", s.beta_max}, {"beta_decay", s.beta_decay},
            {"alpha", s.alpha}, {"gamma", s.gamma}};
}

TrainingSchedule schedule_from_json(const nlohmann::json& j) {
    TrainingSchedule s;
    try {
        s.episodes_train = j.value("episodes_train", s.episodes_train);
        s.episodes_test = j.value("episodes_test", s.episodes_test);
        s.max_steps_per_episode = j.value("max_steps_per_episode", s.max_steps_per_episode);
        s.beta_min = j.value("beta_min", s.beta_min);
        s.beta_max = j.value("beta_max", s.beta_max);
        s.beta_decay = j.value("beta_decay", s.beta_decay);
        s.alpha = j.value("alpha", s.alpha);
        s.gamma = j.value("gamma", s.gamma);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed schedule: ") + e.what());
    }
    s.validate();
    return s;
}

std::vector<double> softmax(std::span<const double> q_row, double beta) {
    if (!(beta > 0.0) || !std::isfinite(beta)) throw NumericError("softmax temperature must be positive");
    if (q_row.empty()) throw NumericError("softmax over an empty row");
    for (double q : q_row)
        if (!std::isfinite(q)) throw NumericError("non-finite Q value in softmax");
    const double top = *std::max_element(q_row.begin(), q_row.end());
    std::vector<double> p(q_row.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < q_row.size(); ++i) sum += p[i] = std::exp((q_row[i] - top) / beta);
    for (double& x : p) x /= sum;
    return p;
}

int select_action(std::span<const double> q_row, double beta, std::mt19937_64& rng) {
    const auto p = softmax(q_row, beta);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double x = u(rng);
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (x < p[i]) return static_cast<int>(i);
        x -= p[i];
    }
    // Rounding left a sliver of mass; fall back to the most likely action.
    return static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin());
}

long PerformanceSummary::total_deaths() const {
    long n = 0;
    for (long d : deaths_by_cause) n += d;
    return n;
}

double PerformanceSummary::time_fraction(frogger::Region r) const {
    long total = 0;
    for (long s : steps_by_region) total += s;
    return total == 0 ? 0.0 : static_cast<double>(steps_by_region[static_cast<int>(r)]) / total;
}

nlohmann::json to_json(const PerformanceSummary& p) {
    nlohmann::json deaths = nlohmann::json::object();
    for (int d = 0; d < frogger::kNumDeathCauses; ++d)
        deaths[std::string(frogger::to_string(static_cast<frogger::DeathCause>(d)))] = p.deaths_by_cause[d];
    deaths["total"] = p.total_deaths();
    nlohmann::json by_region = nlohmann::json::object();
    nlohmann::json time = nlohmann::json::object();
    for (int r = 0; r < frogger::kNumRegions; ++r) {
        const std::string name(frogger::to_string(static_cast<frogger::Region>(r)));
        by_region[name] = p.deaths_by_region[r];
        time[name] = p.time_fraction(static_cast<frogger::Region>(r));
    }
    return {{"episodes", p.episodes},   {"mean_level", p.mean_level},   {"sd_level", p.sd_level},
            {"mean_steps", p.mean_steps}, {"sd_steps", p.sd_steps},     {"pads", p.pads},
            {"deaths", deaths},          {"deaths_by_region", by_region}, {"time_fraction", time}};
}

std::uint64_t episode_seed(std::uint64_t run_seed, int episode) {
    return mix_seed(run_seed, static_cast<std::uint64_t>(episode));
}

namespace {

class SummaryBuilder {
public:
    void add_episode(int level, int steps) {
        ++summary_.episodes;
        levels_.push_back(level);
        steps_.push_back(steps);
    }
    PerformanceSummary& summary() { return summary_; }
    PerformanceSummary finish() {
        auto mean_sd = [](const std::vector<int>& v, double& mean, double& sd) {
            if (v.empty()) return;
            double s = 0;
            for (int x : v) s += x;
            mean = s / static_cast<double>(v.size());
            double ss = 0;
            for (int x : v) ss += (x - mean) * (x - mean);
            sd = std::sqrt(ss / static_cast<double>(v.size()));
        };
        mean_sd(levels_, summary_.mean_level, summary_.sd_level);
        mean_sd(steps_, summary_.mean_steps, summary_.sd_steps);
        return summary_;
    }

private:
    PerformanceSummary summary_;
    std::vector<int> levels_;
    std::vector<int> steps_;
};

}  // namespace

ExperimentResult run_experiment(const AgentProfile& profile, const TrainingSchedule& schedule,
                                const frogger::GameConfig& config, std::uint64_t seed,
                                const TransitionSink& sink) {
    schedule.validate();
    config.validate();
    frogger::Game game(config, profile.perception(), profile.r_river);
    QTable q(frogger::kNumObservations, frogger::kNumActions, profile.q_init);
    std::mt19937_64 rng(mix_seed(seed, 0xa11ce));

    SummaryBuilder train, test;
    const int total = schedule.episodes_train + schedule.episodes_test;
    for (int e = 0; e < total; ++e) {
        const bool testing = e >= schedule.episodes_train;
        const double beta = testing ? schedule.beta_min : schedule.beta(e);
        SummaryBuilder& stats = testing ? test : train;
        int s = frogger::encode(game.reset(episode_seed(seed, e)));
        int step = 0;
        for (; step < schedule.max_steps_per_episode && !game.game_over(); ++step) {
            TransitionRecord tr;
            tr.episode = e;
            tr.step = step;
            tr.phase = testing ? Phase::Test : Phase::Train;
            tr.s = s;
            tr.score = game.score();
            tr.region = game.region();
            tr.level = game.level();
            tr.a = select_action(q.row(s), beta, rng);
            const auto out = game.step(static_cast<frogger::Action>(tr.a));
            tr.r = out.reward;
            tr.s_next = frogger::encode(out.next_observation);
            tr.death_cause = out.death_cause;

            const double td = q_update(q, tr.s, tr.a, tr.r, tr.s_next, schedule.alpha, schedule.gamma);
            if (sink) sink(tr, td);

            auto& sum = stats.summary();
            ++sum.steps_by_region[static_cast<int>(tr.region)];
            if (out.reached_pad) ++sum.pads;
            if (out.death_cause) {
                ++sum.deaths_by_cause[static_cast<int>(*out.death_cause)];
                ++sum.deaths_by_region[static_cast<int>(out.region)];
            }
            s = tr.s_next;
        }
        stats.add_episode(game.level(), step);
    }
    return {std::move(q), train.finish(), test.finish()};
}

}  // namespace ixrl
