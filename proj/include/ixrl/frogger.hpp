#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace ixrl::frogger {

// Feature values visible in each direction. The order fixes the dense
// observation encoding, so it must never change.
enum class Feature : std::uint8_t { Empty = 0, Water, Car, Log, Lilypad, Bounds };
inline constexpr int kNumFeatures = 6;

enum class Action : std::uint8_t { N = 0, S, E, W };
inline constexpr int kNumActions = 4;
inline constexpr std::array<Action, kNumActions> kActions = {Action::N, Action::S, Action::E,
                                                              Action::W};

enum class RowKind : std::uint8_t { BottomGrass, Road, MiddleGrass, River, Lilypad };
enum class Region : std::uint8_t { BottomGrass = 0, Road, MiddleGrass, River, Lilypad };
inline constexpr int kNumRegions = 5;

enum class DeathCause : std::uint8_t { River = 0, Car, Timeout, OffScreenLog };
inline constexpr int kNumDeathCauses = 4;

std::string_view to_string(Feature f);
std::string_view to_string(Action a);
std::string_view to_string(Region r);
std::string_view to_string(DeathCause d);
Action parse_action(std::string_view s);
Region parse_region(std::string_view s);
DeathCause parse_death_cause(std::string_view s);
Feature parse_feature(std::string_view s);

// Local view of the frog: one feature per compass direction.
struct Observation {
    Feature north = Feature::Empty;
    Feature south = Feature::Empty;
    Feature east = Feature::Empty;
    Feature west = Feature::Empty;

    friend bool operator==(const Observation&, const Observation&) = default;
};

inline constexpr int kNumObservations = kNumFeatures * kNumFeatures * kNumFeatures * kNumFeatures;

int encode(const Observation& o) noexcept;
Observation decode(int index);
std::string describe(const Observation& o);

// One horizontal band of the playfield, bottom to top.
struct Lane {
    RowKind kind = RowKind::BottomGrass;
    double speed = 0.0;          // px per step at level 1; sign is the flow direction (+ = east)
    double object_length = 0.0;  // car or log length in px
    double car_period = 0.0;     // px between consecutive car fronts (road lanes only)
};

struct GameConfig {
    int grid_width = 14;
    std::vector<Lane> lanes;  // index 0 is the bottom row
    int cell_size = 40;
    int moves_per_level = 100;
    int lives = 3;
    double level_speed_factor = 1.25;
    int log_spawn_interval_min = 30;
    int log_spawn_interval_max = 45;
    std::vector<int> pad_columns;
    int frogs_per_level = 2;
    std::uint64_t rng_seed = 0;

    static GameConfig standard();
    void validate() const;
    int num_rows() const noexcept { return static_cast<int>(lanes.size()); }
    int pad_row() const;
};

nlohmann::json to_json(const GameConfig& c);
GameConfig game_config_from_json(const nlohmann::json& j);

// Perception parameters of an agent, in pixels.
struct Perception {
    double vis_h = 60.0;
    double vis_v = 40.0;
};

struct StepOutcome {
    Observation next_observation;
    double reward = 0.0;
    std::optional<DeathCause> death_cause;
    Region region = Region::BottomGrass;  // region of the frog after the move
    int level = 1;
    bool reached_pad = false;
    bool episode_done = false;
};

// Deterministic Frogger-style game. All randomness comes from the seed given
// to reset(), so a (seed, action sequence) pair fully determines the trace.
class Game {
public:
    // `river_death_reward` replaces the default -200 for drowning; it is the
    // only reward term that differs between agent profiles.
    Game(GameConfig config, Perception perception, double river_death_reward = -200.0);

    Observation reset(std::uint64_t seed);
    StepOutcome step(Action action);
    Observation observe() const;
    Observation observe(const Perception& p) const;

    const GameConfig& config() const noexcept { return config_; }
    int level() const noexcept { return level_; }
    int lives() const noexcept { return lives_; }
    int moves() const noexcept { return moves_; }
    long score() const noexcept { return score_; }
    bool game_over() const noexcept { return lives_ <= 0; }
    int frog_row() const noexcept { return frog_row_; }
    double frog_x() const noexcept { return frog_x_; }
    int frog_column() const noexcept;
    Region region() const noexcept;
    int pads_filled() const noexcept;

    // One character per cell, top row first, no HUD.
    std::string render_ascii() const;
    // Binary PPM (P6) of the same grid at `scale` pixels per cell.
    std::string render_ppm(int scale = 8) const;

    // Exact engine state fingerprint, used to detect replay divergence.
    std::uint64_t state_hash() const noexcept;

private:
    struct Body {
        double x;  // left edge in px
    };
    struct LaneState {
        std::vector<Body> bodies;
        double speed = 0.0;  // current signed speed
        int spawn_interval = 0;
        int since_spawn = 0;
        double loop = 0.0;  // wrap length for cars
    };

    void init_lanes(std::mt19937_64& rng);
    void advance_lane(int row);
    void respawn_frog();
    void apply_level_speeds();
    bool car_overlaps(int row, double left, double right, bool swept) const;
    bool log_under(int row, double center, double shift) const;
    Feature car_feature(int row, double left, double right, double range) const;
    Feature vertical_feature(int row, double vis_v) const;
    Feature horizontal_feature(int dir, const Perception& p) const;
    double anticipated_shift(int row) const;
    bool pad_free(int column) const;
    char cell_char(int row, int col) const;

    GameConfig config_;
    Perception perception_;
    double river_reward_ = -200.0;
    std::vector<LaneState> lanes_;
    std::vector<std::vector<double>> previous_positions_;  // car positions before the last advance
    std::vector<bool> pads_;
    double frog_x_ = 0.0;
    int frog_row_ = 0;
    int best_row_ = 0;
    int level_ = 1;
    int lives_ = 0;
    int moves_ = 0;
    int pads_this_level_ = 0;
    long score_ = 0;
    bool started_ = false;
};

Region region_of(RowKind kind) noexcept;

}  // namespace ixrl::frogger
