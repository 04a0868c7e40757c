#pragma once

// The clustering colony: initialization, pick/drop voting, pheromone-guided
// movement, deposit/evaporation and snapshots.
//
// Every random draw comes from SimState::rng in this order:
//   init_run   item cells, then ant cells, then one heading per ant
//   step       per ant in ascending id: one draw per neighbor vote (neighbor
//              order), then one draw for the move (skipped when no neighbor
//              cell is free of other agents)

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "antids/habitat.hpp"
#include "antids/item.hpp"
#include "antids/kernel.hpp"
#include "antids/rng.hpp"

namespace antids {

// Lattice headings, counter-clockwise from east in 45 degree steps. y grows
// downward, so north is (0, -1).
enum class Heading : std::uint8_t { east, north_east, north, north_west, west, south_west, south, south_east };

GridCoord heading_offset(Heading h) noexcept;
// Signed turn in degrees from `from` to `to`, in (-180, 180].
int turn_degrees(Heading from, Heading to) noexcept;

struct Ant {
    AntId id{};
    GridCoord pos;
    Heading heading = Heading::east;
    std::optional<ItemId> carrying;
};

struct Carried {
    AntId by;
    friend bool operator==(const Carried&, const Carried&) = default;
};

using ItemLocation = std::variant<GridCoord, Carried>;

// strict: pick iff 2*sum > n or n == 0, drop iff 2*sum > n.
// lenient: the same with >=.
enum class VoteRule : std::uint8_t { strict, lenient };
enum class VoteKind : std::uint8_t { pick, drop };

bool majority_reached(int successes, int n, VoteRule rule, VoteKind kind) noexcept;

struct RunParams {
    KernelParams kernel;
    std::uint64_t t_max = 1'000'000;
    VoteRule vote_rule = VoteRule::strict;

    void validate() const { kernel.validate(); }
};

struct SimState {
    Grid grid;
    std::vector<Ant> ants;
    std::vector<Item> items;
    std::vector<ItemLocation> locations;  // indexed by item id
    std::uint64_t t = 0;
    Rng rng;
    RunParams params;
};

struct InitOptions {
    std::optional<std::size_t> n_ants;  // default max(1, round(N/10))
    std::uint64_t seed = 0;
    // Preassigned distinct cells per item (zoned marker layouts); uniform
    // random placement when absent.
    std::optional<std::vector<GridCoord>> item_positions;
    RunParams params;
};

std::size_t default_ant_count(std::size_t n_items) noexcept;

// Item ids must equal their index in `items`; all feature vectors must share
// one length and lie in [0,1].
SimState init_run(std::vector<Item> items, Grid grid, const InitOptions& options);

// Voting at the ant's current cell. Preconditions are checked and raise
// ContractViolation. On success the item changes hands and true is returned.
bool vote_pick(SimState& state, AntId ant);
bool vote_drop(SimState& state, AntId ant);

GridCoord move_agent(SimState& state, AntId ant);
void deposit(SimState& state, GridCoord r);
void evaporate(SimState& state);

void step(SimState& state);

struct PheromoneStats {
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;
};

PheromoneStats pheromone_stats(const Grid& grid) noexcept;

struct Placement {
    ItemId item{};
    std::optional<GridCoord> where;  // empty while carried
    Role role = Role::test;
    std::optional<ClassLabel> true_class;
};

struct Snapshot {
    std::uint64_t t = 0;
    GridDims dims;
    std::vector<Placement> placements;
    double entropy = 0.0;
    PheromoneStats pheromone;
    std::vector<double> pheromone_field;  // row-major, dims.width * dims.height
};

inline constexpr int kDefaultPatchSide = 8;

Snapshot take_snapshot(const SimState& state, int patch_side = kDefaultPatchSide);

// Steps recorded by run(): always 0 and t_max, plus 1, 10, 100, ... below
// t_max for the geometric form, or the listed steps (clipped to t_max).
std::vector<std::uint64_t> geometric_schedule(std::uint64_t t_max);
std::vector<std::uint64_t> list_schedule(std::span<const std::uint64_t> steps, std::uint64_t t_max);

std::vector<Snapshot> run(SimState& state, std::span<const std::uint64_t> schedule,
                          int patch_side = kDefaultPatchSide);

// Drops every still-carried item at the nearest item-free cell to its
// carrier (squared distance, then row-major offset order), ants in id order.
void finalize_positions(SimState& state);

// Full consistency check between grid occupancy, ants and item locations.
// Throws ContractViolation describing the first breach.
void check_invariants(const SimState& state);

}  // namespace antids
