#include "antids/habitat.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "antids/errors.hpp"

namespace antids {

namespace {

std::string describe(GridCoord c) { return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + ")"; }

}  // namespace

Grid::Grid(int width, int height) : dims_{width, height} {
    if (width <= 0 || height <= 0) {
        throw ConfigError("grid dimensions must be positive, got " + std::to_string(width) + "x" +
                          std::to_string(height));
    }
    const auto n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    pheromone_.assign(n, 0.0);
    items_.assign(n, kEmpty);
    agents_.assign(n, kEmpty);
}

GridCoord Grid::wrap(long long x, long long y) const noexcept {
    const long long w = dims_.width;
    const long long h = dims_.height;
    x %= w;
    y %= h;
    if (x < 0) x += w;
    if (y < 0) y += h;
    return {static_cast<int>(x), static_cast<int>(y)};
}

Cell Grid::cell(GridCoord c) const {
    return Cell{pheromone(c), item_at(c), agent_at(c)};
}

std::optional<ItemId> Grid::item_at(GridCoord c) const noexcept {
    const auto v = items_[index(c)];
    if (v == kEmpty) return std::nullopt;
    return ItemId{v};
}

std::optional<AntId> Grid::agent_at(GridCoord c) const noexcept {
    const auto v = agents_[index(c)];
    if (v == kEmpty) return std::nullopt;
    return AntId{v};
}

void Grid::place_item(GridCoord c, ItemId id) {
    auto& slot = items_[index(c)];
    if (slot != kEmpty) throw ContractViolation("cell " + describe(c) + " already holds an item");
    slot = to_index(id);
}

ItemId Grid::remove_item(GridCoord c) {
    auto& slot = items_[index(c)];
    if (slot == kEmpty) throw ContractViolation("cell " + describe(c) + " holds no item");
    const ItemId id{slot};
    slot = kEmpty;
    return id;
}

void Grid::place_agent(GridCoord c, AntId id) {
    auto& slot = agents_[index(c)];
    if (slot != kEmpty) throw ContractViolation("cell " + describe(c) + " already holds an agent");
    slot = to_index(id);
}

AntId Grid::remove_agent(GridCoord c) {
    auto& slot = agents_[index(c)];
    if (slot == kEmpty) throw ContractViolation("cell " + describe(c) + " holds no agent");
    const AntId id{slot};
    slot = kEmpty;
    return id;
}

void Grid::move_agent(GridCoord from, GridCoord to) {
    if (from == to) return;
    if (!has_agent(from)) throw ContractViolation("cell " + describe(from) + " holds no agent");
    if (has_agent(to)) throw ContractViolation("cell " + describe(to) + " already holds an agent");
    place_agent(to, remove_agent(from));
}

void Grid::add_pheromone(GridCoord c, double amount) {
    if (!(amount >= 0.0) || !std::isfinite(amount)) {
        throw ContractViolation("pheromone deposit must be finite and nonnegative");
    }
    pheromone_[index(c)] += amount;
}

void Grid::evaporate(double rate) noexcept {
    const double keep = 1.0 - rate;
    for (double& p : pheromone_) p *= keep;
}

std::size_t Grid::item_count() const noexcept {
    return static_cast<std::size_t>(std::count_if(items_.begin(), items_.end(), [](auto v) { return v != kEmpty; }));
}

Grid create_grid(std::size_t n_items, std::optional<GridDims> override_dims) {
    if (override_dims) return Grid(override_dims->width, override_dims->height);
    if (n_items == 0) throw ConfigError("cannot size a grid for zero items");
    // Smallest side with side^2 >= 4n, computed in integers.
    const auto target = 4 * static_cast<unsigned long long>(n_items);
    auto side = static_cast<unsigned long long>(std::sqrt(static_cast<double>(target)));
    while (side * side < target) ++side;
    while (side > 1 && (side - 1) * (side - 1) >= target) --side;
    return Grid(static_cast<int>(side), static_cast<int>(side));
}

Neighborhood neighborhood_items(const Grid& grid, GridCoord r) {
    Neighborhood out;
    // On grids narrower than 3 cells several offsets alias the same site (or
    // the center); each site is reported once and the center never.
    const bool small = grid.width() < 3 || grid.height() < 3;
    std::array<GridCoord, 8> seen{};
    std::size_t n_seen = 0;
    for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
            if (dx == 0 && dy == 0) continue;
            const GridCoord c = grid.offset(r, dx, dy);
            if (small) {
                if (c == r || std::find(seen.begin(), seen.begin() + static_cast<std::ptrdiff_t>(n_seen), c) !=
                                  seen.begin() + static_cast<std::ptrdiff_t>(n_seen)) {
                    continue;
                }
                seen[n_seen++] = c;
            }
            if (auto item = grid.item_at(c)) out.push_back({c, *item});
        }
    }
    return out;
}

int wrapped_delta(int a, int b, int size) noexcept {
    const int d = a > b ? a - b : b - a;
    return std::min(d, size - d);
}

long long toroidal_distance_sq(GridCoord a, GridCoord b, GridDims dims) noexcept {
    const long long dx = wrapped_delta(a.x, b.x, dims.width);
    const long long dy = wrapped_delta(a.y, b.y, dims.height);
    return dx * dx + dy * dy;
}

double toroidal_distance(GridCoord a, GridCoord b, GridDims dims) noexcept {
    return std::sqrt(static_cast<double>(toroidal_distance_sq(a, b, dims)));
}

}  // namespace antids
