#include "antids/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "antids/errors.hpp"

namespace antids {

MarkerSet markers_from(const Snapshot& snapshot) {
    MarkerSet out;
    for (const auto& p : snapshot.placements) {
        if (p.role != Role::marker) continue;
        if (!p.where) throw ContractViolation("marker " + std::to_string(to_index(p.item)) + " is not on the grid");
        if (!p.true_class) throw DataError("marker " + std::to_string(to_index(p.item)) + " has no class label");
        out.push_back({p.item, *p.where, *p.true_class});
    }
    return out;
}

namespace {

struct Neighbor {
    long long d2;
    std::uint32_t id;
    ClassLabel label;

    bool operator<(const Neighbor& o) const noexcept { return d2 != o.d2 ? d2 < o.d2 : id < o.id; }
};

ClassLabel vote(std::span<const Neighbor> nearest) {
    std::array<int, kClassCount> votes{};
    for (const auto& n : nearest) ++votes[static_cast<std::size_t>(to_int(n.label) - 1)];
    const int best = *std::max_element(votes.begin(), votes.end());
    // `nearest` is sorted, so the first tied class met is the nearest one.
    for (const auto& n : nearest) {
        if (votes[static_cast<std::size_t>(to_int(n.label) - 1)] == best) return n.label;
    }
    for (int c = 0; c < kClassCount; ++c) {
        if (votes[static_cast<std::size_t>(c)] == best) return class_from_int(c + 1);
    }
    return ClassLabel::normal;
}

}  // namespace

std::vector<ClassLabel> knn_classify(std::span<const GridCoord> tests, std::span<const Marker> markers, int k,
                                     GridDims dims) {
    if (markers.empty()) throw ConfigError("k-NN needs at least one marker");
    if (k < 1 || k % 2 == 0) throw ConfigError("k must be a positive odd number, got " + std::to_string(k));
    if (static_cast<std::size_t>(k) > markers.size()) {
        throw ConfigError("k = " + std::to_string(k) + " exceeds the " + std::to_string(markers.size()) + " markers");
    }
    const auto kk = static_cast<std::size_t>(k);
    std::vector<ClassLabel> out;
    out.reserve(tests.size());
    std::vector<Neighbor> best;
    best.reserve(kk + 1);
    for (const GridCoord t : tests) {
        best.clear();
        for (const auto& m : markers) {
            const Neighbor cand{toroidal_distance_sq(t, m.where, dims), to_index(m.id), m.label};
            if (best.size() == kk && !(cand < best.back())) continue;
            best.insert(std::upper_bound(best.begin(), best.end(), cand), cand);
            if (best.size() > kk) best.pop_back();
        }
        out.push_back(vote(best));
    }
    return out;
}

namespace {

void fill_accuracies(EvaluationReport& r) {
    std::uint64_t correct = 0;
    r.n_test = 0;
    for (std::size_t i = 0; i < static_cast<std::size_t>(kClassCount); ++i) {
        std::uint64_t row = 0;
        for (auto v : r.confusion[i]) row += v;
        r.n_test += row;
        correct += r.confusion[i][i];
        r.per_class_accuracy[i] =
            row == 0 ? std::nullopt : std::optional<double>(static_cast<double>(r.confusion[i][i]) / static_cast<double>(row));
    }
    r.overall_accuracy =
        r.n_test == 0 ? std::nullopt : std::optional<double>(static_cast<double>(correct) / static_cast<double>(r.n_test));
}

}  // namespace

EvaluationReport evaluate(std::span<const ClassLabel> predictions, std::span<const ClassLabel> truths) {
    if (predictions.size() != truths.size()) {
        throw ConfigError("prediction count " + std::to_string(predictions.size()) + " differs from truth count " +
                          std::to_string(truths.size()));
    }
    EvaluationReport r;
    for (std::size_t i = 0; i < truths.size(); ++i) {
        ++r.confusion[static_cast<std::size_t>(to_int(truths[i]) - 1)][static_cast<std::size_t>(to_int(predictions[i]) - 1)];
    }
    fill_accuracies(r);
    return r;
}

EvaluationReport aggregate(std::span<const EvaluationReport> reports) {
    EvaluationReport r;
    for (const auto& b : reports) {
        for (std::size_t i = 0; i < r.confusion.size(); ++i) {
            for (std::size_t j = 0; j < r.confusion[i].size(); ++j) r.confusion[i][j] += b.confusion[i][j];
        }
    }
    fill_accuracies(r);
    return r;
}

double spatial_entropy(const Snapshot& snapshot, int patch_side) {
    if (patch_side < 1) throw ConfigError("patch side must be at least 1");
    const int w = snapshot.dims.width;
    const int h = snapshot.dims.height;
    if (w <= 0 || h <= 0) return 0.0;
    const int px = (w + patch_side - 1) / patch_side;
    const int py = (h + patch_side - 1) / patch_side;

    std::vector<std::array<std::uint32_t, kClassCount>> counts(static_cast<std::size_t>(px) * static_cast<std::size_t>(py));
    std::array<bool, kClassCount> present{};
    std::uint64_t total = 0;
    for (const auto& p : snapshot.placements) {
        if (!p.where || !p.true_class) continue;
        const auto patch = static_cast<std::size_t>(p.where->y / patch_side) * static_cast<std::size_t>(px) +
                           static_cast<std::size_t>(p.where->x / patch_side);
        const auto c = static_cast<std::size_t>(to_int(*p.true_class) - 1);
        ++counts[patch][c];
        present[c] = true;
        ++total;
    }
    const auto n_classes = std::count(present.begin(), present.end(), true);
    if (total == 0 || n_classes < 2) return 0.0;

    double weighted = 0.0;
    for (const auto& patch : counts) {
        std::uint64_t m = 0;
        for (auto v : patch) m += v;
        if (m == 0) continue;
        double hp = 0.0;
        for (auto v : patch) {
            if (v == 0) continue;
            const double q = static_cast<double>(v) / static_cast<double>(m);
            hp -= q * std::log2(q);
        }
        weighted += static_cast<double>(m) * hp;
    }
    return weighted / static_cast<double>(total) / std::log2(static_cast<double>(n_classes));
}

}  // namespace antids
