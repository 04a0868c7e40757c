#include "antids/experiment.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <future>
#include <istream>
#include <sstream>

#include "antids/errors.hpp"
#include "antids/rng.hpp"

namespace antids {

namespace {

std::string fmt_double(double v) {
    std::array<char, 32> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

template <typename T>
std::string join(const T& values) {
    std::string out;
    for (const auto& v : values) {
        if (!out.empty()) out += ',';
        out += std::to_string(v);
    }
    return out;
}

// Zone layouts are drawn from their own stream so that changing the layout
// mode does not shift the colony's random sequence.
constexpr std::uint64_t kZoneSeedSalt = 0x9E3779B97F4A7C15ULL;

struct Rect {
    int x0, y0, w, h;
};

}  // namespace

void ExperimentConfig::validate() const {
    run.validate();
    if (batch_size < 1) throw ConfigError("batch size must be at least 1");
    if (k < 1 || k % 2 == 0) throw ConfigError("k must be a positive odd number, got " + std::to_string(k));
    if (patch_side < 1) throw ConfigError("patch side must be at least 1");
    if (jobs < 1) throw ConfigError("jobs must be at least 1");
    if (n_ants && *n_ants < 1) throw ConfigError("ant count must be at least 1");
    if (grid && (grid->width < 1 || grid->height < 1)) throw ConfigError("grid dimensions must be positive");
    if (mode == Mode::synthetic) {
        synthetic_means(synthetic.classes, synthetic.features, synthetic.separation);
        if (synthetic.per_class < 1) throw ConfigError("per-class must be at least 1");
        if (synthetic.markers_per_class < 0 || synthetic.markers_per_class > synthetic.per_class) {
            throw ConfigError("markers-per-class must be within 0..per-class");
        }
        if (!(synthetic.spread >= 0.0)) throw ConfigError("spread must be nonnegative");
    }
}

std::string_view mode_name(Mode m) noexcept {
    switch (m) {
        case Mode::synthetic: return "synthetic";
        case Mode::cluster: return "cluster";
        case Mode::antids_a: return "antids-a";
        case Mode::antids_b: return "antids-b";
    }
    return "?";
}

std::string_view placement_name(MarkerPlacement p) noexcept {
    switch (p) {
        case MarkerPlacement::random: return "random";
        case MarkerPlacement::five_box: return "five-box";
        case MarkerPlacement::ten_stripe: return "ten-stripe";
    }
    return "?";
}

std::string_view vote_rule_name(VoteRule r) noexcept { return r == VoteRule::strict ? "strict" : "lenient"; }

std::string_view feature_set_name(FeatureSet f) noexcept { return f == FeatureSet::full ? "full" : "reduced"; }

Mode parse_mode(std::string_view s) {
    for (Mode m : {Mode::synthetic, Mode::cluster, Mode::antids_a, Mode::antids_b}) {
        if (s == mode_name(m)) return m;
    }
    throw ConfigError("unknown mode '" + std::string(s) + "'");
}

MarkerPlacement parse_placement(std::string_view s) {
    for (auto p : {MarkerPlacement::random, MarkerPlacement::five_box, MarkerPlacement::ten_stripe}) {
        if (s == placement_name(p)) return p;
    }
    throw ConfigError("unknown placement '" + std::string(s) + "' (random, five-box, ten-stripe)");
}

VoteRule parse_vote_rule(std::string_view s) {
    if (s == "strict") return VoteRule::strict;
    if (s == "lenient") return VoteRule::lenient;
    throw ConfigError("unknown vote rule '" + std::string(s) + "' (strict, lenient)");
}

FeatureSet parse_feature_set(std::string_view s) {
    if (s == "full") return FeatureSet::full;
    if (s == "reduced") return FeatureSet::reduced;
    throw ConfigError("unknown feature set '" + std::string(s) + "' (full, reduced)");
}

GridDims parse_grid(std::string_view s) {
    const auto x = s.find_first_of("xX");
    GridDims d;
    if (x != std::string_view::npos) {
        const auto a = std::from_chars(s.data(), s.data() + x, d.width);
        const auto b = std::from_chars(s.data() + x + 1, s.data() + s.size(), d.height);
        if (a.ec == std::errc() && a.ptr == s.data() + x && b.ec == std::errc() && b.ptr == s.data() + s.size() &&
            d.width > 0 && d.height > 0) {
            return d;
        }
    }
    throw ConfigError("grid must look like WxH with positive sizes, got '" + std::string(s) + "'");
}

std::vector<std::pair<std::string, std::string>> config_entries(const ExperimentConfig& c) {
    const auto& kp = c.run.kernel;
    std::vector<std::pair<std::string, std::string>> e{
        {"mode", std::string(mode_name(c.mode))},
        {"features", std::string(feature_set_name(c.feature_set))},
        {"data", c.data_path},
        {"seed", std::to_string(c.seed)},
        {"steps", std::to_string(c.run.t_max)},
        {"ants", c.n_ants ? std::to_string(*c.n_ants) : "auto"},
        {"grid", c.grid ? std::to_string(c.grid->width) + "x" + std::to_string(c.grid->height) : "auto"},
        {"placement", std::string(placement_name(c.placement))},
        {"batch-size", std::to_string(c.batch_size)},
        {"split-train", "default"},
        {"split-test", "default"},
        {"snapshots", c.schedule == ScheduleKind::geometric ? "geometric" : "list"},
        {"snapshot-steps", join(c.schedule_steps)},
        {"k", std::to_string(c.k)},
        {"patch-side", std::to_string(c.patch_side)},
        {"vote-rule", std::string(vote_rule_name(c.run.vote_rule))},
        {"beta", fmt_double(kp.beta)},
        {"sensory", fmt_double(kp.sensory)},
        {"k1", fmt_double(kp.k1)},
        {"k2", fmt_double(kp.k2)},
        {"theta-items", fmt_double(kp.theta_items)},
        {"steepness", fmt_double(kp.steepness)},
        {"eta", fmt_double(kp.eta)},
        {"alpha", fmt_double(kp.alpha)},
        {"evap", fmt_double(kp.evap)},
        {"direction-falloff", fmt_double(kp.direction_falloff)},
        {"classes", std::to_string(c.synthetic.classes)},
        {"per-class", std::to_string(c.synthetic.per_class)},
        {"dims", std::to_string(c.synthetic.features)},
        {"separation", fmt_double(c.synthetic.separation)},
        {"spread", fmt_double(c.synthetic.spread)},
        {"markers-per-class", std::to_string(c.synthetic.markers_per_class)},
        {"jobs", std::to_string(c.jobs)},
        {"out", c.out_dir},
    };
    if (c.split) {
        std::array<std::size_t, kClassCount> train{};
        std::array<std::size_t, kClassCount> test{};
        for (std::size_t i = 0; i < train.size(); ++i) {
            train[i] = (*c.split)[i].train;
            test[i] = (*c.split)[i].test;
        }
        for (auto& [key, value] : e) {
            if (key == "split-train") value = join(train);
            if (key == "split-test") value = join(test);
        }
    }
    return e;
}

std::vector<GridCoord> place_markers_zoned(std::span<const Item> items, const Grid& grid, MarkerPlacement mode,
                                           std::uint64_t seed) {
    if (mode == MarkerPlacement::random) return {};
    const int w = grid.width();
    const int h = grid.height();

    std::array<std::vector<Rect>, kClassCount> zones;
    if (mode == MarkerPlacement::five_box) {
        const int bw = w / 3;
        const int bh = h / 3;
        // Class 1 bottom-left, then clockwise: top-left, top-right,
        // bottom-right; class 5 in the center. y grows downward.
        zones[0] = {{0, h - bh, bw, bh}};
        zones[1] = {{0, 0, bw, bh}};
        zones[2] = {{w - bw, 0, bw, bh}};
        zones[3] = {{w - bw, h - bh, bw, bh}};
        zones[4] = {{(w - bw) / 2, (h - bh) / 2, bw, bh}};
    } else {
        for (int s = 0; s < 10; ++s) {
            const int x0 = s * w / 10;
            const int x1 = (s + 1) * w / 10;
            zones[static_cast<std::size_t>(s % kClassCount)].push_back({x0, 0, x1 - x0, h});
        }
    }

    std::array<std::vector<std::size_t>, kClassCount> markers_by_class;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (items[i].role != Role::marker) continue;
        if (!items[i].true_class) throw ConfigError("zoned placement needs every marker to carry a class label");
        markers_by_class[static_cast<std::size_t>(to_int(*items[i].true_class) - 1)].push_back(i);
    }

    Rng rng(seed ^ kZoneSeedSalt);
    std::vector<GridCoord> out(items.size());
    std::vector<bool> taken(grid.area(), false);
    auto draw = [&rng](std::vector<std::uint32_t>& cells, std::size_t count) {
        for (std::size_t i = 0; i < count; ++i) std::swap(cells[i], cells[i + rng.below(cells.size() - i)]);
    };

    for (std::size_t c = 0; c < markers_by_class.size(); ++c) {
        const auto& ids = markers_by_class[c];
        std::vector<std::uint32_t> cells;
        for (const auto& r : zones[c]) {
            for (int y = r.y0; y < r.y0 + r.h; ++y) {
                for (int x = r.x0; x < r.x0 + r.w; ++x) cells.push_back(static_cast<std::uint32_t>(grid.index({x, y})));
            }
        }
        std::sort(cells.begin(), cells.end());
        if (cells.size() < ids.size()) {
            throw ConfigError("zone of class " + std::to_string(c + 1) + " has " + std::to_string(cells.size()) +
                              " cells for " + std::to_string(ids.size()) + " markers");
        }
        draw(cells, ids.size());
        for (std::size_t i = 0; i < ids.size(); ++i) {
            out[ids[i]] = grid.coord(cells[i]);
            taken[cells[i]] = true;
        }
    }

    std::vector<std::uint32_t> free_cells;
    for (std::size_t c = 0; c < taken.size(); ++c) {
        if (!taken[c]) free_cells.push_back(static_cast<std::uint32_t>(c));
    }
    std::vector<std::size_t> others;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (items[i].role != Role::marker) others.push_back(i);
    }
    if (free_cells.size() < others.size()) throw ConfigError("grid too small for the test items");
    draw(free_cells, others.size());
    for (std::size_t i = 0; i < others.size(); ++i) out[others[i]] = grid.coord(free_cells[i]);
    return out;
}

PreparedData prepare_kdd(std::istream& in, FeatureSet features, const std::optional<SplitCounts>& split, std::uint64_t seed) {
    const auto records = parse_kdd(in);
    if (records.empty()) throw DataError("no connection records in input");
    std::vector<ClassLabel> labels;
    labels.reserve(records.size());
    for (const auto& r : records) labels.push_back(map_attack_class(r.label));

    PreparedData data;
    data.split = split ? *split : default_split_counts(labels);
    const Split parts = stratified_split(labels, data.split, seed);

    std::vector<ConnectionRecord> chosen;
    std::vector<ClassLabel> chosen_labels;
    chosen.reserve(parts.train.size() + parts.test.size());
    for (const auto* part : {&parts.train, &parts.test}) {
        for (auto i : *part) {
            chosen.push_back(records[i]);
            chosen_labels.push_back(labels[i]);
        }
    }
    std::vector<std::size_t> all(chosen.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    const auto matrix = select_features(fit_apply_scaler(chosen, all).first, features);
    data.feature_names = matrix.column_names;

    for (std::size_t r = 0; r < matrix.rows; ++r) {
        const bool is_marker = r < parts.train.size();
        auto& bucket = is_marker ? data.markers : data.tests;
        Item item;
        item.id = ItemId{static_cast<std::uint32_t>(bucket.size())};
        const auto row = matrix.row(r);
        item.features.assign(row.begin(), row.end());
        item.role = is_marker ? Role::marker : Role::test;
        item.true_class = chosen_labels[r];
        bucket.push_back(std::move(item));
    }
    return data;
}

BatchResult cluster_items(std::vector<Item> items, const ExperimentConfig& config, std::uint64_t seed, std::size_t index) {
    const auto start = std::chrono::steady_clock::now();
    for (std::size_t i = 0; i < items.size(); ++i) items[i].id = ItemId{static_cast<std::uint32_t>(i)};

    Grid grid = create_grid(items.size(), config.grid);
    InitOptions init;
    init.n_ants = config.n_ants;
    init.seed = seed;
    init.params = config.run;
    if (config.placement != MarkerPlacement::random) {
        init.item_positions = place_markers_zoned(items, grid, config.placement, seed);
    }

    BatchResult result;
    result.index = index;
    result.seed = seed;
    result.dims = grid.dims();
    result.n_items = items.size();

    SimState state = init_run(std::move(items), std::move(grid), init);
    result.n_ants = state.ants.size();
    const auto schedule = config.schedule == ScheduleKind::geometric
                              ? geometric_schedule(config.run.t_max)
                              : list_schedule(config.schedule_steps, config.run.t_max);
    result.snapshots = run(state, schedule, config.patch_side);
    finalize_positions(state);
    check_invariants(state);
    result.final_snapshot = take_snapshot(state, config.patch_side);

    const auto& placements = result.final_snapshot.placements;
    result.predictions.assign(placements.size(), std::nullopt);
    const MarkerSet markers = [&] {
        MarkerSet m;
        for (const auto& p : placements) {
            if (p.role == Role::marker && p.true_class) m.push_back({p.item, *p.where, *p.true_class});
        }
        return m;
    }();
    std::vector<std::size_t> test_rows;
    std::vector<GridCoord> test_positions;
    for (std::size_t i = 0; i < placements.size(); ++i) {
        if (placements[i].role == Role::test) {
            test_rows.push_back(i);
            test_positions.push_back(*placements[i].where);
        }
    }
    if (!markers.empty() && !test_rows.empty()) {
        const auto predicted = knn_classify(test_positions, markers, config.k, result.dims);
        std::vector<ClassLabel> truths;
        std::vector<ClassLabel> labeled_predictions;
        for (std::size_t i = 0; i < test_rows.size(); ++i) {
            result.predictions[test_rows[i]] = predicted[i];
            if (const auto& truth = placements[test_rows[i]].true_class) {
                truths.push_back(*truth);
                labeled_predictions.push_back(predicted[i]);
            }
        }
        if (!truths.empty()) result.evaluation = evaluate(labeled_predictions, truths);
    }
    result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

RunReport run_synthetic(const ExperimentConfig& config) {
    config.validate();
    SyntheticSpec spec = config.synthetic;
    RunReport report{config, std::nullopt, {}, std::nullopt};
    report.batches.push_back(cluster_items(generate_synthetic(spec), config, config.seed));
    report.aggregate = report.batches.front().evaluation;
    return report;
}

RunReport run_cluster(const ExperimentConfig& config, std::vector<Item> items) {
    config.validate();
    if (items.empty()) throw DataError("no items to cluster");
    RunReport report{config, std::nullopt, {}, std::nullopt};
    report.batches.push_back(cluster_items(std::move(items), config, config.seed));
    report.aggregate = report.batches.front().evaluation;
    return report;
}

RunReport run_antids_a(const ExperimentConfig& config, const PreparedData& data) {
    config.validate();
    std::vector<Item> items = data.markers;
    items.insert(items.end(), data.tests.begin(), data.tests.end());
    RunReport report{config, data.split, {}, std::nullopt};
    report.batches.push_back(cluster_items(std::move(items), config, config.seed));
    report.aggregate = report.batches.front().evaluation;
    return report;
}

RunReport run_antids_b(const ExperimentConfig& config, const PreparedData& data) {
    config.validate();
    RunReport report{config, data.split, {}, std::nullopt};
    const std::size_t n_batches = (data.tests.size() + config.batch_size - 1) / config.batch_size;

    auto make_batch = [&](std::size_t b) {
        std::vector<Item> items = data.markers;
        const auto first = b * config.batch_size;
        const auto last = std::min(data.tests.size(), first + config.batch_size);
        items.insert(items.end(), data.tests.begin() + static_cast<std::ptrdiff_t>(first),
                     data.tests.begin() + static_cast<std::ptrdiff_t>(last));
        return cluster_items(std::move(items), config, config.seed + b, b);
    };

    report.batches.resize(n_batches);
    for (std::size_t wave = 0; wave < n_batches; wave += config.jobs) {
        const auto end = std::min(n_batches, wave + config.jobs);
        if (end - wave == 1) {
            report.batches[wave] = make_batch(wave);
            continue;
        }
        std::vector<std::future<BatchResult>> pending;
        for (std::size_t b = wave; b < end; ++b) pending.push_back(std::async(std::launch::async, make_batch, b));
        for (std::size_t b = wave; b < end; ++b) report.batches[b] = pending[b - wave].get();
    }

    std::vector<EvaluationReport> evaluations;
    for (const auto& b : report.batches) {
        if (b.evaluation) evaluations.push_back(*b.evaluation);
    }
    if (!evaluations.empty()) report.aggregate = aggregate(evaluations);
    return report;
}

}  // namespace antids
