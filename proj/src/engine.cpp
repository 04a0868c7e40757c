#include "antids/engine.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "antids/classifier.hpp"
#include "antids/errors.hpp"

namespace antids {

namespace {

constexpr std::array<GridCoord, 8> kHeadingOffsets{{
    {1, 0}, {1, -1}, {0, -1}, {-1, -1}, {-1, 0}, {-1, 1}, {0, 1}, {1, 1},
}};

// Move candidates are scanned in row-major offset order, like neighborhoods.
constexpr std::array<Heading, 8> kScanOrder{
    Heading::north_west, Heading::north, Heading::north_east, Heading::west,
    Heading::east,       Heading::south_west, Heading::south, Heading::south_east,
};

Ant& ant_ref(SimState& state, AntId id) {
    const auto i = to_index(id);
    if (i >= state.ants.size()) throw ContractViolation("unknown ant " + std::to_string(i));
    return state.ants[i];
}

std::span<const double> features_of(const SimState& state, ItemId id) { return state.items[to_index(id)].features; }

// Counts successful Bernoulli votes of `focal` against each neighbor.
template <typename ProbabilityFn>
int count_votes(SimState& state, ItemId focal, const Neighborhood& hood, ProbabilityFn probability) {
    const auto n = static_cast<int>(hood.size());
    const auto focal_features = features_of(state, focal);
    int successes = 0;
    for (const auto& neighbor : hood) {
        const double d = std::min(1.0, normalized_distance(focal_features, features_of(state, neighbor.item)));
        const double p = probability(n, d);
        // uniform01 is in [0,1), so this succeeds with probability exactly p.
        if (state.rng.uniform01() < p) ++successes;
    }
    return successes;
}

}  // namespace

GridCoord heading_offset(Heading h) noexcept { return kHeadingOffsets[static_cast<std::size_t>(h)]; }

int turn_degrees(Heading from, Heading to) noexcept {
    int delta = (static_cast<int>(to) - static_cast<int>(from) + 8) % 8;
    if (delta > 4) delta -= 8;
    return delta * 45;
}

bool majority_reached(int successes, int n, VoteRule rule, VoteKind kind) noexcept {
    if (kind == VoteKind::pick && n == 0) return true;
    return rule == VoteRule::strict ? 2 * successes > n : 2 * successes >= n;
}

std::size_t default_ant_count(std::size_t n_items) noexcept {
    const auto rounded = static_cast<std::size_t>(std::llround(static_cast<double>(n_items) / 10.0));
    return std::max<std::size_t>(1, rounded);
}

SimState init_run(std::vector<Item> items, Grid grid, const InitOptions& options) {
    options.params.validate();
    if (items.empty()) throw ConfigError("a run needs at least one item");
    const std::size_t n_features = items.front().features.size();
    if (n_features == 0) throw DataError("items have no features");
    for (std::size_t i = 0; i < items.size(); ++i) {
        const auto& item = items[i];
        if (to_index(item.id) != i) throw DataError("item ids must be dense and ordered; position " + std::to_string(i));
        if (item.features.size() != n_features) {
            throw DataError("item " + std::to_string(i) + " has " + std::to_string(item.features.size()) +
                            " features, expected " + std::to_string(n_features));
        }
        for (double v : item.features) {
            if (!(v >= 0.0 && v <= 1.0)) throw DataError("item " + std::to_string(i) + " has a feature outside [0,1]");
        }
    }

    const std::size_t n_ants = options.n_ants.value_or(default_ant_count(items.size()));
    if (items.size() + n_ants > grid.area()) {
        throw ConfigError("grid of " + std::to_string(grid.area()) + " cells cannot hold " +
                          std::to_string(items.size()) + " items and " + std::to_string(n_ants) + " ants");
    }

    SimState state{std::move(grid), {}, std::move(items), {}, 0, Rng(options.seed), options.params};
    auto& g = state.grid;
    state.locations.reserve(state.items.size());

    // Partial Fisher-Yates over the free cells; the first slots go to items
    // (unless preassigned), the following ones to ants.
    std::vector<std::uint32_t> cells;
    std::size_t next = 0;
    auto draw_cell = [&]() {
        const auto j = next + state.rng.below(cells.size() - next);
        std::swap(cells[next], cells[j]);
        return g.coord(cells[next++]);
    };

    if (options.item_positions) {
        const auto& pos = *options.item_positions;
        if (pos.size() != state.items.size()) throw ConfigError("item position count does not match item count");
        for (std::size_t i = 0; i < pos.size(); ++i) {
            if (!g.contains(pos[i])) throw ConfigError("preassigned item position outside the grid");
            if (g.has_item(pos[i])) throw ConfigError("two items preassigned to one cell");
            g.place_item(pos[i], ItemId{static_cast<std::uint32_t>(i)});
            state.locations.emplace_back(pos[i]);
        }
        for (std::size_t c = 0; c < g.area(); ++c) {
            if (!g.has_item(g.coord(c))) cells.push_back(static_cast<std::uint32_t>(c));
        }
    } else {
        cells.resize(g.area());
        for (std::size_t c = 0; c < cells.size(); ++c) cells[c] = static_cast<std::uint32_t>(c);
        for (std::size_t i = 0; i < state.items.size(); ++i) {
            const GridCoord c = draw_cell();
            g.place_item(c, ItemId{static_cast<std::uint32_t>(i)});
            state.locations.emplace_back(c);
        }
    }

    state.ants.resize(n_ants);
    for (std::size_t a = 0; a < n_ants; ++a) {
        auto& ant = state.ants[a];
        ant.id = AntId{static_cast<std::uint32_t>(a)};
        ant.pos = draw_cell();
        g.place_agent(ant.pos, ant.id);
    }
    for (auto& ant : state.ants) ant.heading = static_cast<Heading>(state.rng.below(8));
    return state;
}

bool vote_pick(SimState& state, AntId id) {
    Ant& ant = ant_ref(state, id);
    if (ant.carrying) throw ContractViolation("vote_pick called on a laden ant");
    const auto item = state.grid.item_at(ant.pos);
    if (!item) throw ContractViolation("vote_pick called on an empty cell");

    const auto hood = neighborhood_items(state.grid, ant.pos);
    const auto& kp = state.params.kernel;
    const int successes = count_votes(state, *item, hood, [&](int n, double d) { return pick_probability(n, d, kp); });
    if (!majority_reached(successes, static_cast<int>(hood.size()), state.params.vote_rule, VoteKind::pick)) {
        return false;
    }
    state.grid.remove_item(ant.pos);
    ant.carrying = *item;
    state.locations[to_index(*item)] = Carried{id};
    return true;
}

bool vote_drop(SimState& state, AntId id) {
    Ant& ant = ant_ref(state, id);
    if (!ant.carrying) throw ContractViolation("vote_drop called on an unladen ant");
    if (state.grid.has_item(ant.pos)) throw ContractViolation("vote_drop called on an occupied cell");

    const ItemId item = *ant.carrying;
    const auto hood = neighborhood_items(state.grid, ant.pos);
    const auto& kp = state.params.kernel;
    const int successes = count_votes(state, item, hood, [&](int n, double d) { return drop_probability(n, d, kp); });
    if (!majority_reached(successes, static_cast<int>(hood.size()), state.params.vote_rule, VoteKind::drop)) {
        return false;
    }
    state.grid.place_item(ant.pos, item);
    ant.carrying.reset();
    state.locations[to_index(item)] = ant.pos;
    return true;
}

GridCoord move_agent(SimState& state, AntId id) {
    Ant& ant = ant_ref(state, id);
    auto& g = state.grid;

    std::array<MoveCandidate, 8> candidates;
    std::array<Heading, 8> directions;
    std::size_t count = 0;
    for (Heading h : kScanOrder) {
        const GridCoord off = heading_offset(h);
        const GridCoord target = g.offset(ant.pos, off.x, off.y);
        const auto occupant = g.agent_at(target);
        if (occupant && *occupant != id) continue;
        candidates[count] = MoveCandidate{target, g.pheromone(target), turn_degrees(ant.heading, h)};
        directions[count] = h;
        ++count;
    }
    if (count == 0) return ant.pos;

    std::array<double, 8> probs;
    transition_distribution(std::span(candidates.data(), count), state.params.kernel, std::span(probs.data(), count));
    const double r = state.rng.uniform01();
    std::size_t chosen = count - 1;
    double cumulative = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        cumulative += probs[i];
        if (r < cumulative) {
            chosen = i;
            break;
        }
    }
    g.move_agent(ant.pos, candidates[chosen].target);
    ant.pos = candidates[chosen].target;
    ant.heading = directions[chosen];
    return ant.pos;
}

void deposit(SimState& state, GridCoord r) {
    const auto n = static_cast<double>(neighborhood_items(state.grid, r).size());
    const auto& kp = state.params.kernel;
    state.grid.add_pheromone(r, kp.eta + n / kp.alpha);
}

void evaporate(SimState& state) { state.grid.evaporate(state.params.kernel.evap); }

void step(SimState& state) {
    if (state.t >= state.params.t_max) throw ContractViolation("step called at t_max");
    for (auto& ant : state.ants) {
        const bool on_item = state.grid.has_item(ant.pos);
        if (!ant.carrying && on_item) {
            vote_pick(state, ant.id);
        } else if (ant.carrying && !on_item) {
            vote_drop(state, ant.id);
        }
        const GridCoord r = move_agent(state, ant.id);
        deposit(state, r);
    }
    evaporate(state);
    ++state.t;
}

PheromoneStats pheromone_stats(const Grid& grid) noexcept {
    const auto field = grid.pheromone_field();
    PheromoneStats s;
    if (field.empty()) return s;
    const auto [lo, hi] = std::minmax_element(field.begin(), field.end());
    s.min = *lo;
    s.max = *hi;
    double sum = 0.0;
    for (double p : field) sum += p;
    s.mean = sum / static_cast<double>(field.size());
    return s;
}

Snapshot take_snapshot(const SimState& state, int patch_side) {
    Snapshot snap;
    snap.t = state.t;
    snap.dims = state.grid.dims();
    snap.placements.reserve(state.items.size());
    for (const auto& item : state.items) {
        Placement p{item.id, std::nullopt, item.role, item.true_class};
        if (const auto* c = std::get_if<GridCoord>(&state.locations[to_index(item.id)])) p.where = *c;
        snap.placements.push_back(p);
    }
    snap.entropy = spatial_entropy(snap, patch_side);
    snap.pheromone = pheromone_stats(state.grid);
    const auto field = state.grid.pheromone_field();
    snap.pheromone_field.assign(field.begin(), field.end());
    return snap;
}

std::vector<std::uint64_t> geometric_schedule(std::uint64_t t_max) {
    std::vector<std::uint64_t> out{0};
    for (std::uint64_t t = 1; t < t_max; t *= 10) {
        out.push_back(t);
        if (t > std::numeric_limits<std::uint64_t>::max() / 10) break;
    }
    if (t_max > 0) out.push_back(t_max);
    return out;
}

std::vector<std::uint64_t> list_schedule(std::span<const std::uint64_t> steps, std::uint64_t t_max) {
    std::vector<std::uint64_t> out{0, t_max};
    for (auto t : steps) {
        if (t <= t_max) out.push_back(t);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<Snapshot> run(SimState& state, std::span<const std::uint64_t> schedule, int patch_side) {
    std::vector<std::uint64_t> when(schedule.begin(), schedule.end());
    std::sort(when.begin(), when.end());
    when.erase(std::unique(when.begin(), when.end()), when.end());

    std::vector<Snapshot> snapshots;
    auto next = when.begin();
    auto record_due = [&]() {
        while (next != when.end() && *next < state.t) ++next;
        if (next != when.end() && *next == state.t) {
            snapshots.push_back(take_snapshot(state, patch_side));
            ++next;
        }
    };
    record_due();
    while (state.t < state.params.t_max) {
        step(state);
        record_due();
    }
    return snapshots;
}

namespace {

// Signed displacement from a to b in (-size/2, size/2].
int signed_delta(int a, int b, int size) noexcept {
    int d = ((b - a) % size + size) % size;
    if (d > size / 2) d -= size;
    return d;
}

}  // namespace

void finalize_positions(SimState& state) {
    auto& g = state.grid;
    for (auto& ant : state.ants) {
        if (!ant.carrying) continue;
        std::optional<GridCoord> best;
        long long best_d2 = 0;
        int best_dy = 0;
        int best_dx = 0;
        for (std::size_t c = 0; c < g.area(); ++c) {
            const GridCoord cell = g.coord(c);
            if (g.has_item(cell)) continue;
            const int dx = signed_delta(ant.pos.x, cell.x, g.width());
            const int dy = signed_delta(ant.pos.y, cell.y, g.height());
            const long long d2 = 1LL * dx * dx + 1LL * dy * dy;
            if (!best || d2 < best_d2 || (d2 == best_d2 && (dy < best_dy || (dy == best_dy && dx < best_dx)))) {
                best = cell;
                best_d2 = d2;
                best_dy = dy;
                best_dx = dx;
            }
        }
        if (!best) throw ContractViolation("no free cell left to drop a carried item");
        const ItemId item = *ant.carrying;
        g.place_item(*best, item);
        state.locations[to_index(item)] = *best;
        ant.carrying.reset();
    }
}

void check_invariants(const SimState& state) {
    const auto& g = state.grid;
    std::size_t on_grid = 0;
    std::size_t carried = 0;
    for (std::size_t i = 0; i < state.items.size(); ++i) {
        const ItemId id{static_cast<std::uint32_t>(i)};
        if (const auto* c = std::get_if<GridCoord>(&state.locations[i])) {
            if (g.item_at(*c) != id) throw ContractViolation("item " + std::to_string(i) + " is not where it is recorded");
            ++on_grid;
        } else {
            const AntId by = std::get<Carried>(state.locations[i]).by;
            if (to_index(by) >= state.ants.size() || state.ants[to_index(by)].carrying != id) {
                throw ContractViolation("item " + std::to_string(i) + " is carried by an ant that does not hold it");
            }
            ++carried;
        }
    }
    if (on_grid != g.item_count() || on_grid + carried != state.items.size()) {
        throw ContractViolation("item count not conserved");
    }
    std::size_t agents_on_grid = 0;
    for (const auto& ant : state.ants) {
        if (g.agent_at(ant.pos) != ant.id) throw ContractViolation("ant " + std::to_string(to_index(ant.id)) + " misplaced");
        ++agents_on_grid;
        if (ant.carrying) {
            const auto* loc = std::get_if<Carried>(&state.locations[to_index(*ant.carrying)]);
            if (!loc || loc->by != ant.id) throw ContractViolation("ant carries an item recorded elsewhere");
        }
    }
    std::size_t agent_cells = 0;
    for (std::size_t c = 0; c < g.area(); ++c) agent_cells += g.has_agent(g.coord(c)) ? 1 : 0;
    if (agent_cells != agents_on_grid) throw ContractViolation("stray agent records on the grid");
    for (double p : g.pheromone_field()) {
        if (!(p >= 0.0) || !std::isfinite(p)) throw ContractViolation("pheromone field is negative or non-finite");
    }
}

}  // namespace antids
