#pragma once

// Toroidal lattice holding items, ants and the pheromone field.

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace antids {

enum class ItemId : std::uint32_t {};
enum class AntId : std::uint32_t {};

constexpr std::uint32_t to_index(ItemId id) noexcept { return static_cast<std::uint32_t>(id); }
constexpr std::uint32_t to_index(AntId id) noexcept { return static_cast<std::uint32_t>(id); }

struct GridCoord {
    int x = 0;
    int y = 0;

    friend auto operator<=>(const GridCoord&, const GridCoord&) = default;
};

struct GridDims {
    int width = 0;
    int height = 0;

    friend bool operator==(const GridDims&, const GridDims&) = default;
};

// Value view of one lattice site.
struct Cell {
    double pheromone = 0.0;
    std::optional<ItemId> item;
    std::optional<AntId> agent;
};

struct NeighborItem {
    GridCoord where;
    ItemId item;
};

// Items found in the Moore ring of a site, in row-major offset order. Its
// size() is the item count n used by the threshold functions.
class Neighborhood {
public:
    void push_back(NeighborItem v) { items_[size_++] = v; }
    std::size_t size() const noexcept { return size_; }
    bool empty() const noexcept { return size_ == 0; }
    const NeighborItem& operator[](std::size_t i) const { return items_[i]; }
    const NeighborItem* begin() const noexcept { return items_.data(); }
    const NeighborItem* end() const noexcept { return items_.data() + size_; }

private:
    std::array<NeighborItem, 8> items_{};
    std::size_t size_ = 0;
};

class Grid {
public:
    // Throws ConfigError unless both dimensions are positive.
    Grid(int width, int height);

    int width() const noexcept { return dims_.width; }
    int height() const noexcept { return dims_.height; }
    GridDims dims() const noexcept { return dims_; }
    std::size_t area() const noexcept { return pheromone_.size(); }

    GridCoord wrap(long long x, long long y) const noexcept;
    GridCoord offset(GridCoord c, int dx, int dy) const noexcept {
        if (dx > -dims_.width && dx < dims_.width && dy > -dims_.height && dy < dims_.height) {
            int x = c.x + dx;
            int y = c.y + dy;
            if (x < 0) x += dims_.width; else if (x >= dims_.width) x -= dims_.width;
            if (y < 0) y += dims_.height; else if (y >= dims_.height) y -= dims_.height;
            return {x, y};
        }
        return wrap(static_cast<long long>(c.x) + dx, static_cast<long long>(c.y) + dy);
    }
    bool contains(GridCoord c) const noexcept {
        return c.x >= 0 && c.x < dims_.width && c.y >= 0 && c.y < dims_.height;
    }
    std::size_t index(GridCoord c) const noexcept {
        return static_cast<std::size_t>(c.y) * static_cast<std::size_t>(dims_.width) + static_cast<std::size_t>(c.x);
    }
    GridCoord coord(std::size_t index) const noexcept {
        return {static_cast<int>(index % static_cast<std::size_t>(dims_.width)),
                static_cast<int>(index / static_cast<std::size_t>(dims_.width))};
    }

    Cell cell(GridCoord c) const;

    std::optional<ItemId> item_at(GridCoord c) const noexcept;
    std::optional<AntId> agent_at(GridCoord c) const noexcept;
    bool has_item(GridCoord c) const noexcept { return items_[index(c)] != kEmpty; }
    bool has_agent(GridCoord c) const noexcept { return agents_[index(c)] != kEmpty; }

    // Occupancy mutators throw ContractViolation when they would stack two
    // items (or two agents) on one site or remove from an empty one.
    void place_item(GridCoord c, ItemId id);
    ItemId remove_item(GridCoord c);
    void place_agent(GridCoord c, AntId id);
    AntId remove_agent(GridCoord c);
    void move_agent(GridCoord from, GridCoord to);

    double pheromone(GridCoord c) const noexcept { return pheromone_[index(c)]; }
    void add_pheromone(GridCoord c, double amount);
    // Multiplies the whole field by (1 - rate).
    void evaporate(double rate) noexcept;
    std::span<const double> pheromone_field() const noexcept { return pheromone_; }

    std::size_t item_count() const noexcept;

private:
    static constexpr std::uint32_t kEmpty = UINT32_MAX;

    GridDims dims_;
    std::vector<double> pheromone_;
    std::vector<std::uint32_t> items_;
    std::vector<std::uint32_t> agents_;
};

// Square grid of side ceil(sqrt(4 * n_items)) unless dimensions are given.
Grid create_grid(std::size_t n_items, std::optional<GridDims> override_dims = std::nullopt);

Neighborhood neighborhood_items(const Grid& grid, GridCoord r);

// Per-axis wrapped displacement min(|d|, size - |d|).
int wrapped_delta(int a, int b, int size) noexcept;
// Exact squared toroidal distance; ranking by this avoids rounding ties.
long long toroidal_distance_sq(GridCoord a, GridCoord b, GridDims dims) noexcept;
double toroidal_distance(GridCoord a, GridCoord b, GridDims dims) noexcept;

}  // namespace antids
