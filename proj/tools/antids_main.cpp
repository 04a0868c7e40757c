// antids: command-line front end for the ant-colony clustering experiments.
//
// Exit codes: 0 success, 1 invalid configuration, 2 data or I/O error,
// 3 internal invariant breach.

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "antids/errors.hpp"
#include "antids/export.hpp"

namespace fs = std::filesystem;
using namespace antids;

namespace {

struct RawOptions {
    std::string features = "reduced";
    std::string data;
    std::string out = "antids_out";
    std::uint64_t seed = 1;
    std::uint64_t steps = 1'000'000;
    std::string ants = "auto";
    std::string grid = "auto";
    std::string placement = "random";
    std::size_t batch_size = 1000;
    std::string split_train = "default";
    std::string split_test = "default";
    std::string snapshots = "geometric";
    std::string snapshot_steps;
    int k = 3;
    int patch_side = kDefaultPatchSide;
    std::string vote_rule = "strict";
    KernelParams kernel;
    SyntheticSpec synthetic;
    unsigned jobs = 1;
    bool run_after_synth = false;
};

std::vector<std::uint64_t> parse_list(const std::string& text, const char* what) {
    std::vector<std::uint64_t> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = std::min(text.find(',', start), text.size());
        const std::string_view token(text.data() + start, comma - start);
        if (!token.empty()) {
            std::uint64_t v = 0;
            const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
            if (ec != std::errc() || ptr != token.data() + token.size()) {
                throw ConfigError(std::string(what) + ": '" + std::string(token) + "' is not a nonnegative integer");
            }
            out.push_back(v);
        }
        start = comma + 1;
    }
    return out;
}

std::optional<SplitCounts> parse_split(const RawOptions& raw) {
    const bool train_default = raw.split_train == "default";
    const bool test_default = raw.split_test == "default";
    if (train_default && test_default) return std::nullopt;
    if (train_default != test_default) throw ConfigError("split-train and split-test must be given together");
    const auto train = parse_list(raw.split_train, "split-train");
    const auto test = parse_list(raw.split_test, "split-test");
    if (train.size() != kClassCount || test.size() != kClassCount) {
        throw ConfigError("split-train and split-test need five comma-separated counts");
    }
    SplitCounts counts{};
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] = {train[i], test[i]};
    return counts;
}

ExperimentConfig resolve(const RawOptions& raw, Mode mode) {
    ExperimentConfig c;
    c.mode = mode;
    c.feature_set = parse_feature_set(raw.features);
    c.data_path = raw.data;
    c.split = parse_split(raw);
    c.batch_size = raw.batch_size;
    c.run.kernel = raw.kernel;
    c.run.t_max = raw.steps;
    c.run.vote_rule = parse_vote_rule(raw.vote_rule);
    if (raw.ants != "auto") {
        const auto v = parse_list(raw.ants, "ants");
        if (v.size() != 1) throw ConfigError("ants must be a count or 'auto'");
        c.n_ants = v.front();
    }
    c.seed = raw.seed;
    if (raw.grid != "auto") c.grid = parse_grid(raw.grid);
    c.placement = parse_placement(raw.placement);
    if (raw.snapshots == "geometric") {
        c.schedule = ScheduleKind::geometric;
    } else if (raw.snapshots == "list") {
        c.schedule = ScheduleKind::list;
    } else {
        throw ConfigError("snapshots must be 'geometric' or 'list'");
    }
    c.schedule_steps = parse_list(raw.snapshot_steps, "snapshot-steps");
    c.k = raw.k;
    c.patch_side = raw.patch_side;
    c.jobs = raw.jobs;
    c.synthetic = raw.synthetic;
    c.synthetic.seed = raw.seed;
    c.out_dir = raw.out;
    c.validate();
    return c;
}

std::ifstream open_in(const std::string& path) {
    if (path.empty()) throw ConfigError("--data is required for this command");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path);
    return in;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) throw IoError("cannot write " + path.string());
}

void print_summary(const RunReport& report) {
    for (const auto& b : report.batches) {
        std::fprintf(stderr, "batch %zu: %zu items, %dx%d grid, %zu ants, entropy %.4f -> %.4f (%.1fs)\n", b.index,
                     b.n_items, b.dims.width, b.dims.height, b.n_ants,
                     b.snapshots.empty() ? 0.0 : b.snapshots.front().entropy, b.final_snapshot.entropy, b.seconds);
    }
    if (!report.aggregate) return;
    std::fprintf(stderr, "per-class accuracy (%%):");
    for (int c = 1; c <= kClassCount; ++c) {
        const auto& acc = report.aggregate->per_class_accuracy[static_cast<std::size_t>(c - 1)];
        if (acc) std::fprintf(stderr, " %s %.2f", std::string(class_name(class_from_int(c))).c_str(), 100.0 * *acc);
        else std::fprintf(stderr, " %s n/a", std::string(class_name(class_from_int(c))).c_str());
    }
    std::fprintf(stderr, "\n");
}

void finish_run(const RunReport& report) {
    export_artifacts(report, report.config.out_dir);
    print_summary(report);
    std::fprintf(stderr, "artifacts written to %s\n", report.config.out_dir.c_str());
}

int cmd_prepare(const RawOptions& raw) {
    auto config = resolve(raw, Mode::antids_a);
    auto in = open_in(raw.data);
    const auto data = prepare_kdd(in, config.feature_set, config.split, config.seed);
    config.split = data.split;
    fs::create_directories(raw.out);
    std::vector<Item> items = data.markers;
    items.insert(items.end(), data.tests.begin(), data.tests.end());
    for (std::size_t i = 0; i < items.size(); ++i) items[i].id = ItemId{static_cast<std::uint32_t>(i)};
    {
        std::ofstream out(fs::path(raw.out) / "items.csv", std::ios::binary);
        write_items_csv(out, items, data.feature_names);
        if (!out) throw IoError("cannot write " + (fs::path(raw.out) / "items.csv").string());
    }
    write_text(fs::path(raw.out) / "config.resolved.ini", config_text(config));
    std::fprintf(stderr, "prepared %zu markers and %zu test items with %zu features\n", data.markers.size(),
                 data.tests.size(), data.feature_names.size());
    return 0;
}

int cmd_synth(const RawOptions& raw) {
    const auto config = resolve(raw, Mode::synthetic);
    fs::create_directories(raw.out);
    const auto items = generate_synthetic(config.synthetic);
    std::vector<std::string> names;
    for (int f = 0; f < config.synthetic.features; ++f) names.push_back("f" + std::to_string(f));
    {
        std::ofstream out(fs::path(raw.out) / "items.csv", std::ios::binary);
        write_items_csv(out, items, names);
        if (!out) throw IoError("cannot write " + (fs::path(raw.out) / "items.csv").string());
    }
    std::fprintf(stderr, "generated %zu synthetic items\n", items.size());
    if (raw.run_after_synth) finish_run(run_synthetic(config));
    else write_text(fs::path(raw.out) / "config.resolved.ini", config_text(config));
    return 0;
}

int cmd_cluster(const RawOptions& raw) {
    const auto config = resolve(raw, Mode::cluster);
    auto in = open_in(raw.data);
    finish_run(run_cluster(config, read_items_csv(in)));
    return 0;
}

int cmd_run_ids(const RawOptions& raw, Mode mode) {
    auto config = resolve(raw, mode);
    auto in = open_in(raw.data);
    const auto data = prepare_kdd(in, config.feature_set, config.split, config.seed);
    config.split = data.split;
    finish_run(mode == Mode::antids_a ? run_antids_a(config, data) : run_antids_b(config, data));
    return 0;
}

int cmd_render(const RawOptions& raw) {
    auto in = open_in(raw.data);
    std::optional<GridDims> dims;
    if (raw.grid != "auto") dims = parse_grid(raw.grid);
    const auto snapshot = read_positions_csv(in, dims);
    fs::create_directories(raw.out);
    const auto stem = fs::path(raw.data).stem().string();
    for (const auto& [suffix, writer] :
         std::vector<std::pair<std::string, void (*)(std::ostream&, const Snapshot&)>>{{"_items.pgm", write_item_map_pgm},
                                                                                     {"_roles.pgm", write_role_map_pgm}}) {
        const auto path = fs::path(raw.out) / (stem + suffix);
        std::ofstream out(path, std::ios::binary);
        writer(out, snapshot);
        if (!out) throw IoError("cannot write " + path.string());
        std::fprintf(stderr, "wrote %s\n", path.string().c_str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ant-colony clustering and k-NN intrusion classification"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Flat key = value configuration file; command-line flags override it");

    RawOptions raw;
    auto& kp = raw.kernel;
    auto& sy = raw.synthetic;
    app.add_option("--data", raw.data, "Input file (KDD-99 CSV, item CSV, or positions CSV for render)");
    app.add_option("--out", raw.out, "Output directory")->capture_default_str();
    app.add_option("--seed", raw.seed, "Random seed")->capture_default_str();
    app.add_option("--features", raw.features, "full|reduced")->capture_default_str();
    app.add_option("--batch-size", raw.batch_size, "Test items per ANTIDS-b batch")->capture_default_str();
    app.add_option("--grid", raw.grid, "Grid size WxH or auto")->capture_default_str();
    app.add_option("--placement", raw.placement, "random|five-box|ten-stripe")->capture_default_str();
    app.add_option("--steps", raw.steps, "Simulation steps t_max")->capture_default_str();
    app.add_option("--snapshots", raw.snapshots, "geometric|list")->capture_default_str();
    app.add_option("--snapshot-steps", raw.snapshot_steps, "Comma-separated steps for --snapshots list");
    app.add_option("--ants", raw.ants, "Ant count or auto (one per ten items)")->capture_default_str();
    app.add_option("--split-train", raw.split_train, "Five per-class training counts or default")->capture_default_str();
    app.add_option("--split-test", raw.split_test, "Five per-class testing counts or default")->capture_default_str();
    app.add_option("--k", raw.k, "Neighbors for classification (odd)")->capture_default_str();
    app.add_option("--patch-side", raw.patch_side, "Patch side for spatial entropy")->capture_default_str();
    app.add_option("--vote-rule", raw.vote_rule, "strict|lenient")->capture_default_str();
    app.add_option("--beta", kp.beta)->capture_default_str();
    app.add_option("--sensory", kp.sensory)->capture_default_str();
    app.add_option("--k1", kp.k1)->capture_default_str();
    app.add_option("--k2", kp.k2)->capture_default_str();
    app.add_option("--theta-items", kp.theta_items)->capture_default_str();
    app.add_option("--steepness", kp.steepness)->capture_default_str();
    app.add_option("--eta", kp.eta)->capture_default_str();
    app.add_option("--alpha", kp.alpha)->capture_default_str();
    app.add_option("--evap", kp.evap)->capture_default_str();
    app.add_option("--direction-falloff", kp.direction_falloff)->capture_default_str();
    app.add_option("--classes", sy.classes, "Synthetic classes")->capture_default_str();
    app.add_option("--per-class", sy.per_class, "Synthetic items per class")->capture_default_str();
    app.add_option("--dims", sy.features, "Synthetic feature count")->capture_default_str();
    app.add_option("--separation", sy.separation, "Minimum distance between synthetic class means")->capture_default_str();
    app.add_option("--spread", sy.spread, "Synthetic per-feature standard deviation")->capture_default_str();
    app.add_option("--markers-per-class", sy.markers_per_class, "Synthetic markers per class")->capture_default_str();
    app.add_option("--jobs", raw.jobs, "Concurrent ANTIDS-b batches")->capture_default_str();
    // Present in resolved config files; the subcommand decides the mode.
    std::string ignored_mode;
    app.add_option("--mode", ignored_mode)->group("");

    auto* prepare = app.add_subcommand("prepare", "KDD-99 file -> normalized item table (markers + tests)");
    auto* synth = app.add_subcommand("synth", "Generate the synthetic Gaussian-cluster item table");
    synth->add_flag("--run", raw.run_after_synth, "Also cluster the generated items and export the run");
    auto* cluster = app.add_subcommand("cluster", "Cluster an item table and classify its test items");
    auto* run_a = app.add_subcommand("run-a", "ANTIDS-a: cluster all markers and test items at once");
    auto* run_b = app.add_subcommand("run-b", "ANTIDS-b: all markers plus successive test batches");
    auto* render = app.add_subcommand("render", "Positions CSV -> class and role PGM maps");
    for (auto* sub : {prepare, synth, cluster, run_a, run_b, render}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*prepare) return cmd_prepare(raw);
        if (*synth) return cmd_synth(raw);
        if (*cluster) return cmd_cluster(raw);
        if (*run_a) return cmd_run_ids(raw, Mode::antids_a);
        if (*run_b) return cmd_run_ids(raw, Mode::antids_b);
        if (*render) return cmd_render(raw);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return 1;
    } catch (const DomainError& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return 1;
    } catch (const DataError& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return 2;
    } catch (const fs::filesystem_error& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 3;
    }
    return 1;
}
