#pragma once

// Experiment protocols on top of the colony: synthetic sorting runs, the
// all-at-once (ANTIDS-a) and batched (ANTIDS-b) intrusion-detection runs, and
// the zoned marker layouts.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "antids/classifier.hpp"
#include "antids/dataset.hpp"
#include "antids/engine.hpp"

namespace antids {

enum class Mode : std::uint8_t { synthetic, cluster, antids_a, antids_b };
enum class MarkerPlacement : std::uint8_t { random, five_box, ten_stripe };
enum class ScheduleKind : std::uint8_t { geometric, list };

struct ExperimentConfig {
    Mode mode = Mode::synthetic;
    FeatureSet feature_set = FeatureSet::reduced;
    std::string data_path;  // KDD file for the IDS modes, item CSV for cluster
    std::optional<SplitCounts> split;  // default_split_counts() when empty
    std::size_t batch_size = 1000;
    RunParams run;
    std::optional<std::size_t> n_ants;
    std::uint64_t seed = 1;
    std::optional<GridDims> grid;
    MarkerPlacement placement = MarkerPlacement::random;
    ScheduleKind schedule = ScheduleKind::geometric;
    std::vector<std::uint64_t> schedule_steps;
    int k = 3;
    int patch_side = kDefaultPatchSide;
    unsigned jobs = 1;  // concurrent ANTIDS-b batches
    SyntheticSpec synthetic;
    std::string out_dir;

    // Throws ConfigError for the first invalid field.
    void validate() const;
};

std::string_view mode_name(Mode m) noexcept;
std::string_view placement_name(MarkerPlacement p) noexcept;
std::string_view vote_rule_name(VoteRule r) noexcept;
std::string_view feature_set_name(FeatureSet f) noexcept;
Mode parse_mode(std::string_view s);
MarkerPlacement parse_placement(std::string_view s);
VoteRule parse_vote_rule(std::string_view s);
FeatureSet parse_feature_set(std::string_view s);
// "WxH"
GridDims parse_grid(std::string_view s);

// Flat key = value listing of every resolved field, in a fixed order. Keys
// are the CLI long option names, so the listing is itself a valid config file.
std::vector<std::pair<std::string, std::string>> config_entries(const ExperimentConfig& config);

// Initial cells for every item: markers confined to their class zone, test
// items uniform over the remaining cells. Throws ConfigError when a zone is
// too small for its markers. `random` returns an empty vector (the engine
// then places everything uniformly).
std::vector<GridCoord> place_markers_zoned(std::span<const Item> items, const Grid& grid, MarkerPlacement mode,
                                           std::uint64_t seed);

struct PreparedData {
    std::vector<Item> markers;  // training records, role marker
    std::vector<Item> tests;    // testing records, role test
    std::vector<std::string> feature_names;
    SplitCounts split{};
};

// Parses, splits, scales (fit on train + test together) and projects.
PreparedData prepare_kdd(std::istream& in, FeatureSet features, const std::optional<SplitCounts>& split,
                         std::uint64_t seed);

struct BatchResult {
    std::size_t index = 0;
    std::uint64_t seed = 0;
    GridDims dims;
    std::size_t n_items = 0;
    std::size_t n_ants = 0;
    std::vector<Snapshot> snapshots;  // scheduled, before finalization
    Snapshot final_snapshot;          // after finalization
    // Per item of final_snapshot; empty for markers or when nothing is
    // classified.
    std::vector<std::optional<ClassLabel>> predictions;
    std::optional<EvaluationReport> evaluation;
    double seconds = 0.0;
};

struct RunReport {
    ExperimentConfig config;
    std::optional<SplitCounts> split;
    std::vector<BatchResult> batches;
    std::optional<EvaluationReport> aggregate;
};

// One clustering run over `items`, then finalization and, when the items
// contain labeled markers and labeled test items, k-NN classification.
BatchResult cluster_items(std::vector<Item> items, const ExperimentConfig& config, std::uint64_t seed,
                          std::size_t index = 0);

RunReport run_synthetic(const ExperimentConfig& config);
RunReport run_cluster(const ExperimentConfig& config, std::vector<Item> items);
RunReport run_antids_a(const ExperimentConfig& config, const PreparedData& data);
// Batch i clusters all markers plus test items [i*batch, (i+1)*batch) with
// seed + i; the aggregate is evaluated from the summed confusion matrices.
RunReport run_antids_b(const ExperimentConfig& config, const PreparedData& data);

}  // namespace antids
