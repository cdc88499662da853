#include "ixrl/frogger.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "ixrl/errors.hpp"
#include "ixrl/hash.hpp"

namespace ixrl::frogger {

namespace {

constexpr std::array<std::string_view, kNumFeatures> kFeatureNames = {
    "empty", "water", "car", "log", "lilypad", "bounds"};
constexpr std::array<std::string_view, kNumActions> kActionNames = {"N", "S", "E", "W"};
constexpr std::array<std::string_view, kNumRegions> kRegionNames = {
    "bottom-grass", "road", "middle-grass", "river", "lilypad"};
constexpr std::array<std::string_view, kNumDeathCauses> kDeathNames = {
    "river", "car", "timeout", "off-screen-log"};
constexpr std::array<std::string_view, 5> kRowKindNames = {
    "bottom-grass", "road", "middle-grass", "river", "lilypad"};

template <std::size_t N>
int lookup(const std::array<std::string_view, N>& names, std::string_view s, const char* what) {
    for (std::size_t i = 0; i < N; ++i)
        if (names[i] == s) return static_cast<int>(i);
    throw ConfigError(std::string("unknown ") + what + " '" + std::string(s) + "'");
}

}  // namespace

std::string_view to_string(Feature f) { return kFeatureNames[static_cast<int>(f)]; }
std::string_view to_string(Action a) { return kActionNames[static_cast<int>(a)]; }
std::string_view to_string(Region r) { return kRegionNames[static_cast<int>(r)]; }
std::string_view to_string(DeathCause d) { return kDeathNames[static_cast<int>(d)]; }

Action parse_action(std::string_view s) {
    return static_cast<Action>(lookup(kActionNames, s, "action"));
}
Region parse_region(std::string_view s) {
    return static_cast<Region>(lookup(kRegionNames, s, "region"));
}
DeathCause parse_death_cause(std::string_view s) {
    return static_cast<DeathCause>(lookup(kDeathNames, s, "death cause"));
}
Feature parse_feature(std::string_view s) {
    return static_cast<Feature>(lookup(kFeatureNames, s, "feature"));
}

int encode(const Observation& o) noexcept {
    return ((static_cast<int>(o.north) * kNumFeatures + static_cast<int>(o.south)) * kNumFeatures +
            static_cast<int>(o.east)) *
               kNumFeatures +
           static_cast<int>(o.west);
}

Observation decode(int index) {
    if (index < 0 || index >= kNumObservations)
        throw UsageError("observation index out of range: " + std::to_string(index));
    Observation o;
    o.west = static_cast<Feature>(index % kNumFeatures);
    index /= kNumFeatures;
    o.east = static_cast<Feature>(index % kNumFeatures);
    index /= kNumFeatures;
    o.south = static_cast<Feature>(index % kNumFeatures);
    o.north = static_cast<Feature>(index / kNumFeatures);
    return o;
}

std::string describe(const Observation& o) {
    std::string s = "<";
    s += to_string(o.north);
    s += ",";
    s += to_string(o.south);
    s += ",";
    s += to_string(o.east);
    s += ",";
    s += to_string(o.west);
    s += ">";
    return s;
}

Region region_of(RowKind kind) noexcept {
    switch (kind) {
        case RowKind::BottomGrass: return Region::BottomGrass;
        case RowKind::Road: return Region::Road;
        case RowKind::MiddleGrass: return Region::MiddleGrass;
        case RowKind::River: return Region::River;
        case RowKind::Lilypad: return Region::Lilypad;
    }
    return Region::BottomGrass;
}

GameConfig GameConfig::standard() {
    GameConfig c;
    c.lanes = {
        {RowKind::BottomGrass, 0, 0, 0},
        {RowKind::Road, 18.0, 40.0, 480.0},
        {RowKind::Road, -22.0, 80.0, 520.0},
        {RowKind::Road, 25.0, 40.0, 440.0},
        {RowKind::Road, 29.0, 80.0, 560.0},
        {RowKind::MiddleGrass, 0, 0, 0},
        {RowKind::River, -8.0, 120.0, 0},
        {RowKind::River, 10.0, 80.0, 0},
        {RowKind::River, -8.0, 120.0, 0},
        {RowKind::River, 10.0, 80.0, 0},
        {RowKind::Lilypad, 0, 0, 0},
    };
    c.pad_columns = {1, 3, 5, 7, 9, 11, 13};
    return c;
}

int GameConfig::pad_row() const {
    for (int r = 0; r < num_rows(); ++r)
        if (lanes[static_cast<std::size_t>(r)].kind == RowKind::Lilypad) return r;
    return -1;
}

void GameConfig::validate() const {
    if (grid_width < 3) throw ConfigError("grid_width must be at least 3");
    if (lanes.size() < 2) throw ConfigError("at least a start row and a lilypad row are required");
    if (lives < 1) throw ConfigError("lives must be positive");
    if (moves_per_level < 1) throw ConfigError("moves_per_level must be positive");
    if (cell_size != 40) throw ConfigError("cell_size must be 40 px");
    if (frogs_per_level < 1) throw ConfigError("frogs_per_level must be positive");
    if (!(level_speed_factor > 0.0) || !std::isfinite(level_speed_factor))
        throw ConfigError("level_speed_factor must be positive");
    if (log_spawn_interval_min < 1 || log_spawn_interval_max < log_spawn_interval_min)
        throw ConfigError("invalid log spawn interval range");
    int pad_rows = 0;
    for (const auto& l : lanes) pad_rows += l.kind == RowKind::Lilypad ? 1 : 0;
    if (pad_rows != 1) throw ConfigError("exactly one lilypad row is required");
    if (lanes.back().kind != RowKind::Lilypad) throw ConfigError("the lilypad row must be on top");
    if (lanes.front().kind != RowKind::BottomGrass)
        throw ConfigError("the bottom row must be bottom-grass");
    if (pad_columns.size() < 2) throw ConfigError("the lilypad row needs at least two pads");
    if (static_cast<int>(pad_columns.size()) < frogs_per_level)
        throw ConfigError("fewer pads than frogs per level");
    for (int c : pad_columns)
        if (c < 0 || c >= grid_width) throw ConfigError("pad column outside the grid");
    for (const auto& l : lanes) {
        if (l.kind == RowKind::Road) {
            if (l.object_length <= 0 || l.car_period <= l.object_length)
                throw ConfigError("road lanes need 0 < car length < car period");
            if (std::abs(l.speed) >= cell_size) throw ConfigError("car speed must stay below one cell");
        }
        if (l.kind == RowKind::River) {
            if (l.object_length < cell_size) throw ConfigError("logs must be at least one cell long");
            if (l.speed == 0.0) throw ConfigError("river lanes need a nonzero speed");
        }
    }
}

nlohmann::json to_json(const GameConfig& c) {
    nlohmann::json lanes = nlohmann::json::array();
    for (const auto& l : c.lanes) {
        lanes.push_back({{"kind", kRowKindNames[static_cast<int>(l.kind)]},
                         {"speed", l.speed},
                         {"object_length", l.object_length},
                         {"car_period", l.car_period}});
    }
    return {{"grid_width", c.grid_width},
            {"lanes", lanes},
            {"cell_size", c.cell_size},
            {"moves_per_level", c.moves_per_level},
            {"lives", c.lives},
            {"level_speed_factor", c.level_speed_factor},
            {"log_spawn_interval_range", {c.log_spawn_interval_min, c.log_spawn_interval_max}},
            {"pad_columns", c.pad_columns},
            {"frogs_per_level", c.frogs_per_level},
            {"rng_seed", c.rng_seed}};
}

GameConfig game_config_from_json(const nlohmann::json& j) {
    GameConfig c = GameConfig::standard();
    try {
        if (j.contains("grid_width")) c.grid_width = j.at("grid_width").get<int>();
        if (j.contains("cell_size")) c.cell_size = j.at("cell_size").get<int>();
        if (j.contains("moves_per_level")) c.moves_per_level = j.at("moves_per_level").get<int>();
        if (j.contains("lives")) c.lives = j.at("lives").get<int>();
        if (j.contains("level_speed_factor"))
            c.level_speed_factor = j.at("level_speed_factor").get<double>();
        if (j.contains("log_spawn_interval_range")) {
            const auto& r = j.at("log_spawn_interval_range");
            c.log_spawn_interval_min = r.at(0).get<int>();
            c.log_spawn_interval_max = r.at(1).get<int>();
        }
        if (j.contains("pad_columns")) c.pad_columns = j.at("pad_columns").get<std::vector<int>>();
        if (j.contains("frogs_per_level")) c.frogs_per_level = j.at("frogs_per_level").get<int>();
        if (j.contains("rng_seed")) c.rng_seed = j.at("rng_seed").get<std::uint64_t>();
        if (j.contains("lanes")) {
            c.lanes.clear();
            for (const auto& l : j.at("lanes")) {
                Lane lane;
                lane.kind = static_cast<RowKind>(
                    lookup(kRowKindNames, l.at("kind").get<std::string>(), "row kind"));
                lane.speed = l.value("speed", 0.0);
                lane.object_length = l.value("object_length", 0.0);
                lane.car_period = l.value("car_period", 0.0);
                c.lanes.push_back(lane);
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed game config: ") + e.what());
    }
    c.validate();
    return c;
}

Game::Game(GameConfig config, Perception perception, double river_death_reward)
    : config_(std::move(config)), perception_(perception), river_reward_(river_death_reward) {
    config_.validate();
}

int Game::frog_column() const noexcept {
    const int col = static_cast<int>(std::lround(frog_x_ / config_.cell_size));
    return std::clamp(col, 0, config_.grid_width - 1);
}

Region Game::region() const noexcept {
    return region_of(config_.lanes[static_cast<std::size_t>(frog_row_)].kind);
}

int Game::pads_filled() const noexcept {
    return static_cast<int>(std::count(pads_.begin(), pads_.end(), true));
}

Observation Game::reset(std::uint64_t seed) {
    config_.validate();
    std::mt19937_64 rng(seed);
    level_ = 1;
    lives_ = config_.lives;
    moves_ = 0;
    pads_this_level_ = 0;
    score_ = 0;
    pads_.assign(static_cast<std::size_t>(config_.grid_width), false);
    init_lanes(rng);
    respawn_frog();
    started_ = true;
    return observe();
}

void Game::init_lanes(std::mt19937_64& rng) {
    const double width_px = static_cast<double>(config_.grid_width * config_.cell_size);
    lanes_.assign(config_.lanes.size(), LaneState{});
    previous_positions_.assign(config_.lanes.size(), {});
    for (std::size_t r = 0; r < config_.lanes.size(); ++r) {
        const Lane& spec = config_.lanes[r];
        LaneState& lane = lanes_[r];
        lane.speed = spec.speed;
        if (spec.kind == RowKind::Road) {
            const double period = spec.car_period;
            const int count = static_cast<int>(std::ceil((width_px + spec.object_length) / period));
            lane.loop = period * count;
            std::uniform_real_distribution<double> phase_dist(0.0, period);
            const double phase = std::floor(phase_dist(rng));
            for (int i = 0; i < count; ++i)
                lane.bodies.push_back({phase + i * period - spec.object_length});
        } else if (spec.kind == RowKind::River) {
            std::uniform_int_distribution<int> interval(config_.log_spawn_interval_min,
                                                        config_.log_spawn_interval_max);
            lane.spawn_interval = interval(rng);
            std::uniform_int_distribution<int> age0(0, lane.spawn_interval - 1);
            lane.since_spawn = age0(rng);
            const double entry = spec.speed > 0 ? -spec.object_length : width_px;
            // Pre-populate as if the lane had been running forever.
            for (int age = lane.since_spawn;; age += lane.spawn_interval) {
                const double x = entry + spec.speed * age;
                if (x > width_px || x + spec.object_length < 0.0) break;
                lane.bodies.push_back({x});
            }
        }
    }
}

void Game::respawn_frog() {
    frog_row_ = 0;
    best_row_ = 0;
    frog_x_ = static_cast<double>((config_.grid_width / 2) * config_.cell_size);
}

void Game::apply_level_speeds() {
    const double factor = std::pow(config_.level_speed_factor, level_ - 1);
    for (std::size_t r = 0; r < lanes_.size(); ++r) lanes_[r].speed = config_.lanes[r].speed * factor;
}

void Game::advance_lane(int row) {
    const auto r = static_cast<std::size_t>(row);
    const Lane& spec = config_.lanes[r];
    LaneState& lane = lanes_[r];
    const double width_px = static_cast<double>(config_.grid_width * config_.cell_size);
    if (spec.kind == RowKind::Road) {
        auto& prev = previous_positions_[r];
        prev.clear();
        for (auto& car : lane.bodies) {
            prev.push_back(car.x);
            car.x += lane.speed;
            if (lane.speed > 0 && car.x >= lane.loop - spec.object_length) car.x -= lane.loop;
            if (lane.speed < 0 && car.x < -spec.object_length) car.x += lane.loop;
        }
    } else if (spec.kind == RowKind::River) {
        for (auto& log : lane.bodies) log.x += lane.speed;
        std::erase_if(lane.bodies, [&](const Body& b) {
            return b.x > width_px || b.x + spec.object_length < 0.0;
        });
        if (++lane.since_spawn >= lane.spawn_interval) {
            lane.since_spawn = 0;
            lane.bodies.push_back({spec.speed > 0 ? -spec.object_length : width_px});
        }
    }
}

bool Game::car_overlaps(int row, double left, double right, bool swept) const {
    const auto r = static_cast<std::size_t>(row);
    const double len = config_.lanes[r].object_length;
    const auto& bodies = lanes_[r].bodies;
    const auto& prev = previous_positions_[r];
    for (std::size_t i = 0; i < bodies.size(); ++i) {
        double lo = bodies[i].x;
        double hi = bodies[i].x + len;
        if (swept && i < prev.size()) {
            const double start = prev[i];
            const double end = prev[i] + lanes_[r].speed;
            lo = std::min(start, end);
            hi = std::max(start, end) + len;
        }
        if (lo < right && hi > left) return true;
    }
    return false;
}

bool Game::log_under(int row, double center, double shift) const {
    const auto r = static_cast<std::size_t>(row);
    const double len = config_.lanes[r].object_length;
    for (const auto& log : lanes_[r].bodies)
        if (center >= log.x + shift && center < log.x + shift + len) return true;
    return false;
}

double Game::anticipated_shift(int row) const {
    // Logs are anticipated with the nominal lane speed; the current level's
    // multiplier is not visible to the agent.
    const Lane& spec = config_.lanes[static_cast<std::size_t>(row)];
    return spec.kind == RowKind::River ? spec.speed : 0.0;
}

bool Game::pad_free(int column) const {
    if (column < 0 || column >= config_.grid_width) return false;
    const bool is_pad = std::find(config_.pad_columns.begin(), config_.pad_columns.end(), column) !=
                        config_.pad_columns.end();
    return is_pad && !pads_[static_cast<std::size_t>(column)];
}

Feature Game::car_feature(int row, double left, double right, double range) const {
    // A car is seen when the horizontal gap between it and [left, right) is
    // at most `range` pixels.
    const auto r = static_cast<std::size_t>(row);
    const double len = config_.lanes[r].object_length;
    for (const auto& car : lanes_[r].bodies) {
        const double gap = std::max({car.x - right, left - (car.x + len), 0.0});
        if (gap <= range) return Feature::Car;
    }
    return Feature::Empty;
}

Feature Game::vertical_feature(int row, double vis_v) const {
    if (row < 0) return Feature::Bounds;
    const RowKind kind = config_.lanes[static_cast<std::size_t>(row)].kind;
    const double cs = config_.cell_size;
    const double own_shift = anticipated_shift(frog_row_);
    const double center = frog_x_ + own_shift + cs / 2;
    switch (kind) {
        case RowKind::Road: return car_feature(row, frog_x_, frog_x_ + cs, vis_v);
        case RowKind::River:
            return log_under(row, center, anticipated_shift(row)) ? Feature::Log : Feature::Water;
        case RowKind::Lilypad: {
            const int col = static_cast<int>(std::lround((frog_x_ + own_shift) / cs));
            return pad_free(col) ? Feature::Lilypad : Feature::Bounds;
        }
        default: return Feature::Empty;
    }
}

Feature Game::horizontal_feature(int dir, const Perception& p) const {
    const double cs = config_.cell_size;
    const double max_x = static_cast<double>((config_.grid_width - 1) * config_.cell_size);
    if (dir > 0 && frog_x_ + cs > max_x + 1e-9) return Feature::Bounds;
    if (dir < 0 && frog_x_ - cs < -1e-9) return Feature::Bounds;
    const RowKind kind = config_.lanes[static_cast<std::size_t>(frog_row_)].kind;
    if (kind == RowKind::Road) {
        const auto r = static_cast<std::size_t>(frog_row_);
        const double len = config_.lanes[r].object_length;
        const double left = frog_x_;
        const double right = frog_x_ + cs;
        for (const auto& car : lanes_[r].bodies) {
            const double gap = dir > 0 ? car.x - right : left - (car.x + len);
            const bool on_side = dir > 0 ? car.x + len > right : car.x < left;
            if (on_side && gap <= p.vis_h) return Feature::Car;
        }
        return Feature::Empty;
    }
    if (kind == RowKind::River) {
        const double shift = anticipated_shift(frog_row_);
        const double center = frog_x_ + shift + cs / 2 + dir * cs;
        return log_under(frog_row_, center, shift) ? Feature::Log : Feature::Water;
    }
    return Feature::Empty;
}

Observation Game::observe() const { return observe(perception_); }

Observation Game::observe(const Perception& p) const {
    if (!started_) throw UsageError("observe() before reset()");
    Observation o;
    o.north = frog_row_ + 1 < config_.num_rows() ? vertical_feature(frog_row_ + 1, p.vis_v)
                                                 : Feature::Bounds;
    o.south = frog_row_ == 0 ? Feature::Bounds : vertical_feature(frog_row_ - 1, p.vis_v);
    o.east = horizontal_feature(+1, p);
    o.west = horizontal_feature(-1, p);
    return o;
}

StepOutcome Game::step(Action action) {
    if (!started_) throw UsageError("step() before reset()");
    if (game_over()) throw UsageError("step() after the episode ended");

    const double cs = config_.cell_size;
    const double width_px = static_cast<double>(config_.grid_width) * cs;
    const double max_x = width_px - cs;
    const int pad_row = config_.pad_row();

    for (int r = 0; r < config_.num_rows(); ++r) advance_lane(r);

    StepOutcome out;
    out.reward = -1.0;
    std::optional<DeathCause> death;
    bool on_pad = false;

    auto kind_at = [&](int row) { return config_.lanes[static_cast<std::size_t>(row)].kind; };

    if (kind_at(frog_row_) == RowKind::River) {
        frog_x_ += lanes_[static_cast<std::size_t>(frog_row_)].speed;
        const double center = frog_x_ + cs / 2;
        if (center < 0.0 || center >= width_px) death = DeathCause::OffScreenLog;
    }

    if (!death) {
        ++moves_;
        switch (action) {
            case Action::N:
                if (frog_row_ + 1 == pad_row) {
                    const int col = static_cast<int>(std::lround(frog_x_ / cs));
                    on_pad = pad_free(col);
                    if (on_pad) pads_[static_cast<std::size_t>(col)] = true;
                } else if (frog_row_ + 1 < config_.num_rows()) {
                    ++frog_row_;
                }
                break;
            case Action::S: frog_row_ = std::max(0, frog_row_ - 1); break;
            case Action::E: frog_x_ = std::min(frog_x_ + cs, std::max(frog_x_, max_x)); break;
            case Action::W: frog_x_ = std::max(frog_x_ - cs, std::min(frog_x_, 0.0)); break;
        }

        if (on_pad) {
            out.region = Region::Lilypad;
        } else {
            out.region = region_of(kind_at(frog_row_));
            if (kind_at(frog_row_) == RowKind::Road && car_overlaps(frog_row_, frog_x_, frog_x_ + cs, true))
                death = DeathCause::Car;
            else if (kind_at(frog_row_) == RowKind::River && !log_under(frog_row_, frog_x_ + cs / 2, 0.0))
                death = DeathCause::River;
        }
        if (!death && !on_pad && frog_row_ > best_row_) {
            best_row_ = frog_row_;
            score_ += 10;
        }
        if (!death && !on_pad && moves_ >= config_.moves_per_level) death = DeathCause::Timeout;
    } else {
        out.region = Region::River;
    }

    if (on_pad) {
        out.reached_pad = true;
        out.reward += 5000.0;
        score_ += 50;
        if (++pads_this_level_ >= config_.frogs_per_level) {
            ++level_;
            score_ += 1000;
            pads_this_level_ = 0;
            std::fill(pads_.begin(), pads_.end(), false);
            moves_ = 0;
            apply_level_speeds();
        }
        respawn_frog();
    }

    if (death) {
        out.death_cause = death;
        out.reward += *death == DeathCause::River ? river_reward_ : -200.0;
        --lives_;
        if (lives_ <= 0) {
            out.reward += -300.0;
        } else {
            moves_ = 0;
            respawn_frog();
        }
    }

    out.level = level_;
    out.episode_done = game_over();
    out.next_observation = observe();
    return out;
}

std::uint64_t Game::state_hash() const noexcept {
    Fingerprint fp;
    fp.update_u64(std::bit_cast<std::uint64_t>(frog_x_));
    fp.update_u64(static_cast<std::uint64_t>(frog_row_));
    fp.update_u64(static_cast<std::uint64_t>(level_));
    fp.update_u64(static_cast<std::uint64_t>(lives_));
    fp.update_u64(static_cast<std::uint64_t>(moves_));
    fp.update_u64(static_cast<std::uint64_t>(score_));
    for (bool p : pads_) fp.update_u64(p ? 1 : 0);
    for (const auto& lane : lanes_) {
        fp.update_u64(lane.bodies.size());
        for (const auto& b : lane.bodies) fp.update_u64(std::bit_cast<std::uint64_t>(b.x));
        fp.update_u64(static_cast<std::uint64_t>(lane.since_spawn));
    }
    return fp.value();
}

char Game::cell_char(int row, int col) const {
    const auto r = static_cast<std::size_t>(row);
    const Lane& spec = config_.lanes[r];
    const double cs = config_.cell_size;
    const double center = col * cs + cs / 2;
    switch (spec.kind) {
        case RowKind::BottomGrass:
        case RowKind::MiddleGrass: return ':';
        case RowKind::Road:
            for (const auto& car : lanes_[r].bodies)
                if (center >= car.x && center < car.x + spec.object_length) return 'C';
            return '.';
        case RowKind::River: return log_under(row, center, 0.0) ? '=' : '~';
        case RowKind::Lilypad: {
            const bool is_pad = std::find(config_.pad_columns.begin(), config_.pad_columns.end(), col) !=
                                config_.pad_columns.end();
            if (!is_pad) return '#';
            return pads_[static_cast<std::size_t>(col)] ? 'F' : 'P';
        }
    }
    return '?';
}

std::string Game::render_ascii() const {
    std::string out;
    const int frog_col = frog_column();
    for (int row = config_.num_rows() - 1; row >= 0; --row) {
        for (int col = 0; col < config_.grid_width; ++col)
            out += (row == frog_row_ && col == frog_col) ? '@' : cell_char(row, col);
        out += '\n';
    }
    return out;
}

std::string Game::render_ppm(int scale) const {
    const int w = config_.grid_width * scale;
    const int h = config_.num_rows() * scale;
    std::string out = "P6\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n";
    const std::string ascii = render_ascii();
    auto color = [](char c) -> std::array<unsigned char, 3> {
        switch (c) {
            case ':': return {60, 140, 60};
            case '.': return {70, 70, 70};
            case 'C': return {200, 40, 40};
            case '~': return {40, 80, 200};
            case '=': return {130, 90, 40};
            case '#': return {20, 90, 20};
            case 'P': return {90, 200, 90};
            case 'F': return {220, 220, 60};
            case '@': return {250, 250, 250};
            default: return {0, 0, 0};
        }
    };
    const int stride = config_.grid_width + 1;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const auto px = color(ascii[static_cast<std::size_t>((y / scale) * stride + x / scale)]);
            out.append(reinterpret_cast<const char*>(px.data()), 3);
        }
    }
    return out;
}

}  // namespace ixrl::frogger
