#pragma once

// Classification of test items by the labels of nearby markers on the torus,
// plus the accuracy and spatial-entropy measures reported for a run.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "antids/engine.hpp"
#include "antids/habitat.hpp"
#include "antids/item.hpp"

namespace antids {

struct Marker {
    ItemId id{};
    GridCoord where;
    ClassLabel label = ClassLabel::normal;
};

using MarkerSet = std::vector<Marker>;

// Markers of a finalized snapshot (every item on the grid, labels present).
MarkerSet markers_from(const Snapshot& snapshot);

// k nearest markers by toroidal distance (ties by ascending marker id) vote;
// a tie in votes goes to the tied class owning the nearest marker, then to
// the lowest class. Throws ConfigError for even k, k < 1, k > |markers| or
// an empty marker set.
std::vector<ClassLabel> knn_classify(std::span<const GridCoord> tests, std::span<const Marker> markers, int k,
                                     GridDims dims);

struct EvaluationReport {
    // rows: true class, columns: predicted class
    std::array<std::array<std::uint64_t, kClassCount>, kClassCount> confusion{};
    // recall per class; empty for classes without test items
    std::array<std::optional<double>, kClassCount> per_class_accuracy{};
    std::optional<double> overall_accuracy;
    std::uint64_t n_test = 0;
};

EvaluationReport evaluate(std::span<const ClassLabel> predictions, std::span<const ClassLabel> truths);
// Sums the confusion matrices and recomputes accuracies from the sum.
EvaluationReport aggregate(std::span<const EvaluationReport> reports);

// Item-weighted mean Shannon entropy of the class mix inside
// patch_side x patch_side patches, normalized by log2 of the number of
// classes present. 0 means perfectly sorted. Carried and unlabeled items are
// ignored.
double spatial_entropy(const Snapshot& snapshot, int patch_side = kDefaultPatchSide);

}  // namespace antids
