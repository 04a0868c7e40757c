#pragma once

// KDD-99 connection records: parsing, attack categories, [0,1] scaling,
// reduced feature projection, stratified splitting. Also the synthetic
// Gaussian-cluster generator and the item CSV format shared by the tools.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "antids/item.hpp"

namespace antids {

inline constexpr std::size_t kKddFeatureCount = 41;
inline constexpr std::size_t kReducedFeatureCount = 12;

enum class FeatureKind : std::uint8_t { continuous, discrete };

struct FeatureInfo {
    std::string_view name;
    FeatureKind kind;
    std::string_view label;  // column letter
};

// The 41 connection features in file order.
const std::array<FeatureInfo, kKddFeatureCount>& kdd_features() noexcept;
// 1-based column numbers kept by the reduced set, in output order.
const std::array<std::size_t, kReducedFeatureCount>& reduced_feature_columns() noexcept;

struct ConnectionRecord {
    std::vector<std::string> raw;  // 41 fields
    std::string label;             // attack name without the trailing period
};

// One record per non-blank line. Throws ParseError with the line number when
// a line does not have 42 comma-separated fields.
std::vector<ConnectionRecord> parse_kdd(std::istream& in);

// Throws MappingError for labels outside the known table.
ClassLabel map_attack_class(std::string_view label);
// The known attack names with their categories ("normal" included).
const std::map<std::string, ClassLabel, std::less<>>& attack_class_table();

// Dense row-major matrix of scaled features.
struct FeatureMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;
    std::vector<std::string> column_names;

    std::span<const double> row(std::size_t r) const { return {values.data() + r * cols, cols}; }
    double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
};

class Scaler {
public:
    struct Column {
        FeatureKind kind = FeatureKind::continuous;
        double min = 0.0;
        double max = 0.0;
        std::vector<std::string> categories;  // sorted; code = rank
    };

    // Fits per-column ranges on records[fit_on[i]]. Throws ConfigError when
    // fit_on is empty.
    static Scaler fit(std::span<const ConnectionRecord> records, std::span<const std::size_t> fit_on);

    // Discrete values become their category rank, then every column is
    // min-max scaled and clamped to [0,1]; constant columns map to 0. Throws
    // EncodingError for categories not seen while fitting.
    FeatureMatrix apply(std::span<const ConnectionRecord> records) const;
    double scale(std::size_t column, std::string_view raw) const;
    // Inverse of scale for continuous columns (within the fitted range).
    double descale(std::size_t column, double scaled) const;

    const std::vector<Column>& columns() const noexcept { return columns_; }

private:
    std::vector<Column> columns_;
};

std::pair<FeatureMatrix, Scaler> fit_apply_scaler(std::span<const ConnectionRecord> records,
                                                  std::span<const std::size_t> fit_on);

enum class FeatureSet : std::uint8_t { full, reduced };

// Projects a 41-column matrix onto the 12 reduced columns. Throws ShapeError
// for any other width.
FeatureMatrix select_reduced_features(const FeatureMatrix& matrix);
FeatureMatrix select_features(const FeatureMatrix& matrix, FeatureSet set);

struct ClassSplit {
    std::size_t train = 0;
    std::size_t test = 0;
};

using SplitCounts = std::array<ClassSplit, kClassCount>;

inline constexpr std::size_t kDefaultTrainTotal = 5092;
inline constexpr std::size_t kDefaultTestTotal = 6890;

// DoS 3000/4202 and U2R 27/25 fixed; Normal, Probe and R2L share the
// remaining 2065/2663 in proportion to their frequency in the source
// (largest-remainder rounding).
SplitCounts default_split_counts(std::span<const ClassLabel> source_labels);

struct Split {
    std::vector<std::size_t> train;  // ascending record indices
    std::vector<std::size_t> test;
};

// Seeded sampling without replacement within each class. Throws SplitError
// naming the class when it has too few records.
Split stratified_split(std::span<const ClassLabel> labels, const SplitCounts& counts, std::uint64_t seed);

struct SyntheticSpec {
    int classes = 4;
    int per_class = 200;
    int features = 2;
    double separation = 0.5;
    double spread = 0.06;  // per-feature standard deviation
    int markers_per_class = 100;
    std::uint64_t seed = 1;
};

// Class means sit on vertices of the [0.15, 0.85]^F cube in Gray-code order,
// so neighboring class means are 0.7 apart. Throws ConfigError when the
// requested classes do not fit or cannot be `separation` apart.
std::vector<std::vector<double>> synthetic_means(int classes, int features, double separation);
std::vector<Item> generate_synthetic(const SyntheticSpec& spec);

// Item CSV: item_id,role,true_class,<feature columns>. true_class may be
// empty. Row order defines item ids on reading.
void write_items_csv(std::ostream& out, std::span<const Item> items, std::span<const std::string> feature_names);
std::vector<Item> read_items_csv(std::istream& in, std::vector<std::string>* feature_names = nullptr);

}  // namespace antids
