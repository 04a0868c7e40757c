#include "antids/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <set>

#include "antids/errors.hpp"
#include "antids/rng.hpp"

namespace antids {

namespace {

constexpr FeatureKind C = FeatureKind::continuous;
constexpr FeatureKind D = FeatureKind::discrete;

constexpr std::array<FeatureInfo, kKddFeatureCount> kFeatures{{
    {"duration", C, "A"},
    {"protocol_type", D, "B"},
    {"service", D, "C"},
    {"flag", D, "D"},
    {"src_bytes", C, "E"},
    {"dst_bytes", C, "F"},
    {"land", D, "G"},
    {"wrong_fragment", C, "H"},
    {"urgent", C, "I"},
    {"hot", C, "J"},
    {"num_failed_logins", C, "K"},
    {"logged_in", D, "L"},
    {"num_compromised", C, "M"},
    {"root_shell", C, "N"},
    {"su_attempted", C, "O"},
    {"num_root", C, "P"},
    {"num_file_creations", C, "Q"},
    {"num_shells", C, "R"},
    {"num_access_files", C, "S"},
    {"num_outbound_cmds", C, "T"},
    {"is_host_login", D, "U"},
    {"is_guest_login", D, "V"},
    {"count", C, "W"},
    {"srv_count", C, "X"},
    {"serror_rate", C, "Y"},
    {"srv_serror_rate", C, "Z"},  // some listings print this as a second "X"
    {"rerror_rate", C, "AA"},
    {"srv_rerror_rate", C, "AB"},
    {"same_srv_rate", C, "AC"},
    {"diff_srv_rate", C, "AD"},
    {"srv_diff_host_rate", C, "AE"},
    {"dst_host_count", C, "AF"},
    {"dst_host_srv_count", C, "AG"},
    {"dst_host_same_srv_rate", C, "AH"},
    {"dst_host_diff_srv_rate", C, "AI"},
    {"dst_host_same_src_port_rate", C, "AJ"},
    {"dst_host_srv_diff_host_rate", C, "AK"},
    {"dst_host_serror_rate", C, "AL"},
    {"dst_host_srv_serror_rate", C, "AM"},
    {"dst_host_rerror_rate", C, "AN"},
    {"dst_host_srv_rerror_rate", C, "AO"},
}};

// C, E, F, L, W, X, Y, AB, AE, AF, AG, AI
constexpr std::array<std::size_t, kReducedFeatureCount> kReduced{3, 5, 6, 12, 23, 24, 25, 28, 31, 32, 33, 35};

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

std::optional<double> parse_double(std::string_view s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

std::string format_double(double v) {
    std::array<char, 32> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

}  // namespace

const std::array<FeatureInfo, kKddFeatureCount>& kdd_features() noexcept { return kFeatures; }

const std::array<std::size_t, kReducedFeatureCount>& reduced_feature_columns() noexcept { return kReduced; }

std::vector<ConnectionRecord> parse_kdd(std::istream& in) {
    std::vector<ConnectionRecord> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto fields = split_commas(line);
        if (fields.size() != kKddFeatureCount + 1) {
            throw ParseError(line_no, "expected " + std::to_string(kKddFeatureCount + 1) + " fields, found " +
                                          std::to_string(fields.size()));
        }
        ConnectionRecord rec;
        rec.raw.reserve(kKddFeatureCount);
        for (std::size_t i = 0; i < kKddFeatureCount; ++i) rec.raw.emplace_back(fields[i]);
        auto label = fields.back();
        if (!label.empty() && label.back() == '.') label.remove_suffix(1);
        if (label.empty()) throw ParseError(line_no, "empty label");
        rec.label = std::string(label);
        out.push_back(std::move(rec));
    }
    return out;
}

const std::map<std::string, ClassLabel, std::less<>>& attack_class_table() {
    // Categories of the attack names occurring in the public 10% subset,
    // after the KDD Cup 1999 task description.
    static const std::map<std::string, ClassLabel, std::less<>> table{
        {"normal", ClassLabel::normal},
        {"satan", ClassLabel::probe},          {"ipsweep", ClassLabel::probe},
        {"nmap", ClassLabel::probe},           {"portsweep", ClassLabel::probe},
        {"back", ClassLabel::dos},             {"land", ClassLabel::dos},
        {"neptune", ClassLabel::dos},          {"pod", ClassLabel::dos},
        {"smurf", ClassLabel::dos},            {"teardrop", ClassLabel::dos},
        {"buffer_overflow", ClassLabel::u2r},  {"loadmodule", ClassLabel::u2r},
        {"perl", ClassLabel::u2r},             {"rootkit", ClassLabel::u2r},
        {"guess_passwd", ClassLabel::r2l},     {"ftp_write", ClassLabel::r2l},
        {"imap", ClassLabel::r2l},             {"phf", ClassLabel::r2l},
        {"multihop", ClassLabel::r2l},         {"warezmaster", ClassLabel::r2l},
        {"warezclient", ClassLabel::r2l},      {"spy", ClassLabel::r2l},
    };
    return table;
}

ClassLabel map_attack_class(std::string_view label) {
    const auto& table = attack_class_table();
    const auto it = table.find(label);
    if (it == table.end()) throw MappingError("unknown attack label '" + std::string(label) + "'");
    return it->second;
}

Scaler Scaler::fit(std::span<const ConnectionRecord> records, std::span<const std::size_t> fit_on) {
    if (fit_on.empty()) throw ConfigError("scaler needs at least one record to fit on");
    Scaler s;
    s.columns_.resize(kKddFeatureCount);
    for (std::size_t c = 0; c < kKddFeatureCount; ++c) {
        auto& col = s.columns_[c];
        col.kind = kFeatures[c].kind;
        if (col.kind == FeatureKind::discrete) {
            std::set<std::string, std::less<>> values;
            for (auto r : fit_on) values.insert(records[r].raw[c]);
            col.categories.assign(values.begin(), values.end());
            col.min = 0.0;
            col.max = static_cast<double>(col.categories.size() - 1);
        } else {
            col.min = INFINITY;
            col.max = -INFINITY;
            for (auto r : fit_on) {
                const auto v = parse_double(records[r].raw[c]);
                if (!v) {
                    throw DataError("record " + std::to_string(r) + ": column " + std::string(kFeatures[c].name) +
                                    " is not numeric ('" + records[r].raw[c] + "')");
                }
                col.min = std::min(col.min, *v);
                col.max = std::max(col.max, *v);
            }
        }
    }
    return s;
}

double Scaler::scale(std::size_t column, std::string_view raw) const {
    const auto& col = columns_.at(column);
    double v = 0.0;
    if (col.kind == FeatureKind::discrete) {
        const auto it = std::lower_bound(col.categories.begin(), col.categories.end(), raw);
        if (it == col.categories.end() || *it != raw) {
            throw EncodingError("unseen value '" + std::string(raw) + "' for " + std::string(kFeatures[column].name));
        }
        v = static_cast<double>(it - col.categories.begin());
    } else {
        const auto parsed = parse_double(raw);
        if (!parsed) {
            throw DataError("column " + std::string(kFeatures[column].name) + " is not numeric ('" + std::string(raw) + "')");
        }
        v = *parsed;
    }
    if (!(col.max > col.min)) return 0.0;
    return std::clamp((v - col.min) / (col.max - col.min), 0.0, 1.0);
}

double Scaler::descale(std::size_t column, double scaled) const {
    const auto& col = columns_.at(column);
    if (col.kind != FeatureKind::continuous) throw ConfigError("descale applies to continuous columns only");
    return col.min + scaled * (col.max - col.min);
}

FeatureMatrix Scaler::apply(std::span<const ConnectionRecord> records) const {
    FeatureMatrix m;
    m.rows = records.size();
    m.cols = kKddFeatureCount;
    m.values.reserve(m.rows * m.cols);
    for (const auto& f : kFeatures) m.column_names.emplace_back(f.name);
    for (std::size_t r = 0; r < records.size(); ++r) {
        if (records[r].raw.size() != kKddFeatureCount) throw ShapeError("record " + std::to_string(r) + " is not 41 wide");
        for (std::size_t c = 0; c < kKddFeatureCount; ++c) m.values.push_back(scale(c, records[r].raw[c]));
    }
    return m;
}

std::pair<FeatureMatrix, Scaler> fit_apply_scaler(std::span<const ConnectionRecord> records,
                                                  std::span<const std::size_t> fit_on) {
    Scaler s = Scaler::fit(records, fit_on);
    FeatureMatrix m = s.apply(records);
    return {std::move(m), std::move(s)};
}

FeatureMatrix select_reduced_features(const FeatureMatrix& matrix) {
    if (matrix.cols != kKddFeatureCount) {
        throw ShapeError("reduced projection needs 41 columns, got " + std::to_string(matrix.cols));
    }
    FeatureMatrix out;
    out.rows = matrix.rows;
    out.cols = kReducedFeatureCount;
    out.values.reserve(out.rows * out.cols);
    for (auto c : kReduced) out.column_names.push_back(matrix.column_names.at(c - 1));
    for (std::size_t r = 0; r < matrix.rows; ++r) {
        for (auto c : kReduced) out.values.push_back(matrix.at(r, c - 1));
    }
    return out;
}

FeatureMatrix select_features(const FeatureMatrix& matrix, FeatureSet set) {
    if (set == FeatureSet::reduced) return select_reduced_features(matrix);
    if (matrix.cols != kKddFeatureCount) throw ShapeError("full feature set needs 41 columns, got " + std::to_string(matrix.cols));
    return matrix;
}

SplitCounts default_split_counts(std::span<const ClassLabel> source_labels) {
    SplitCounts counts{};
    counts[2] = {3000, 4202};
    counts[3] = {27, 25};

    std::array<std::size_t, kClassCount> freq{};
    for (auto c : source_labels) ++freq[static_cast<std::size_t>(to_int(c) - 1)];
    constexpr std::array<std::size_t, 3> kFilled{0, 1, 4};
    std::size_t pool = 0;
    for (auto c : kFilled) pool += freq[c];

    auto apportion = [&](std::size_t total, auto member) {
        if (pool == 0) return;
        std::array<std::pair<double, std::size_t>, 3> remainders{};
        std::size_t assigned = 0;
        for (std::size_t i = 0; i < kFilled.size(); ++i) {
            const auto c = kFilled[i];
            const double exact = static_cast<double>(total) * static_cast<double>(freq[c]) / static_cast<double>(pool);
            const auto whole = static_cast<std::size_t>(std::floor(exact));
            counts[c].*member = whole;
            assigned += whole;
            remainders[i] = {exact - static_cast<double>(whole), i};
        }
        std::stable_sort(remainders.begin(), remainders.end(), [](auto a, auto b) { return a.first > b.first; });
        for (std::size_t k = 0; assigned < total; ++k, ++assigned) ++(counts[kFilled[remainders[k % 3].second]].*member);
    };
    apportion(kDefaultTrainTotal - 3000 - 27, &ClassSplit::train);
    apportion(kDefaultTestTotal - 4202 - 25, &ClassSplit::test);
    return counts;
}

Split stratified_split(std::span<const ClassLabel> labels, const SplitCounts& counts, std::uint64_t seed) {
    std::array<std::vector<std::size_t>, kClassCount> by_class;
    for (std::size_t i = 0; i < labels.size(); ++i) by_class[static_cast<std::size_t>(to_int(labels[i]) - 1)].push_back(i);

    Rng rng(seed);
    Split split;
    for (std::size_t c = 0; c < by_class.size(); ++c) {
        auto& pool = by_class[c];
        const auto want = counts[c].train + counts[c].test;
        if (pool.size() < want) {
            const auto label = class_from_int(static_cast<int>(c) + 1);
            throw SplitError("class " + std::to_string(c + 1) + " (" + std::string(class_name(label)) + ") has " +
                             std::to_string(pool.size()) + " records, " + std::to_string(want) + " requested");
        }
        for (std::size_t i = 0; i < want; ++i) {
            const auto j = i + rng.below(pool.size() - i);
            std::swap(pool[i], pool[j]);
        }
        split.train.insert(split.train.end(), pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(counts[c].train));
        split.test.insert(split.test.end(), pool.begin() + static_cast<std::ptrdiff_t>(counts[c].train),
                          pool.begin() + static_cast<std::ptrdiff_t>(want));
    }
    std::sort(split.train.begin(), split.train.end());
    std::sort(split.test.begin(), split.test.end());
    return split;
}

std::vector<std::vector<double>> synthetic_means(int classes, int features, double separation) {
    constexpr double lo = 0.15;
    constexpr double hi = 0.85;
    if (classes < 2 || classes > kClassCount) throw ConfigError("synthetic data needs 2..5 classes");
    if (features < 1) throw ConfigError("synthetic data needs at least one feature");
    if (features < 31 && (1LL << features) < classes) {
        throw ConfigError(std::to_string(classes) + " classes do not fit on the corners of a " +
                          std::to_string(features) + "-dimensional cube");
    }
    if (separation > hi - lo) {
        throw ConfigError("separation " + std::to_string(separation) + " exceeds the attainable " + std::to_string(hi - lo));
    }
    std::vector<std::vector<double>> means;
    for (int c = 0; c < classes; ++c) {
        const unsigned gray = static_cast<unsigned>(c) ^ (static_cast<unsigned>(c) >> 1);
        std::vector<double> m(static_cast<std::size_t>(features));
        for (int f = 0; f < features; ++f) m[static_cast<std::size_t>(f)] = (f < 31 && ((gray >> f) & 1U)) ? hi : lo;
        means.push_back(std::move(m));
    }
    return means;
}

std::vector<Item> generate_synthetic(const SyntheticSpec& spec) {
    if (spec.per_class < 1) throw ConfigError("synthetic data needs at least one item per class");
    if (spec.markers_per_class < 0 || spec.markers_per_class > spec.per_class) {
        throw ConfigError("markers per class must be within 0..per_class");
    }
    if (!(spec.spread >= 0.0)) throw ConfigError("spread must be nonnegative");
    const auto means = synthetic_means(spec.classes, spec.features, spec.separation);

    Rng rng(spec.seed);
    auto gaussian = [&rng]() {
        // Box-Muller on our own uniform stream keeps the output library-independent.
        const double u1 = 1.0 - rng.uniform01();
        const double u2 = rng.uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    };

    std::vector<Item> items;
    items.reserve(static_cast<std::size_t>(spec.classes) * static_cast<std::size_t>(spec.per_class));
    for (int c = 0; c < spec.classes; ++c) {
        for (int i = 0; i < spec.per_class; ++i) {
            Item item;
            item.id = ItemId{static_cast<std::uint32_t>(items.size())};
            item.true_class = class_from_int(c + 1);
            item.role = i < spec.markers_per_class ? Role::marker : Role::test;
            item.features.resize(static_cast<std::size_t>(spec.features));
            for (std::size_t f = 0; f < item.features.size(); ++f) {
                item.features[f] = std::clamp(means[static_cast<std::size_t>(c)][f] + spec.spread * gaussian(), 0.0, 1.0);
            }
            items.push_back(std::move(item));
        }
    }
    return items;
}

void write_items_csv(std::ostream& out, std::span<const Item> items, std::span<const std::string> feature_names) {
    out << "item_id,role,true_class";
    for (const auto& n : feature_names) out << ',' << n;
    out << '\n';
    for (const auto& item : items) {
        if (item.features.size() != feature_names.size()) throw ShapeError("feature names do not match item width");
        out << to_index(item.id) << ',' << role_name(item.role) << ',';
        if (item.true_class) out << to_int(*item.true_class);
        for (double v : item.features) out << ',' << format_double(v);
        out << '\n';
    }
}

std::vector<Item> read_items_csv(std::istream& in, std::vector<std::string>* feature_names) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError(1, "missing header");
    const auto header = split_commas(line);
    if (header.size() < 4 || header[0] != "item_id" || header[1] != "role" || header[2] != "true_class") {
        throw ParseError(1, "header must start with item_id,role,true_class and name at least one feature");
    }
    if (feature_names) {
        feature_names->clear();
        for (std::size_t i = 3; i < header.size(); ++i) feature_names->emplace_back(header[i]);
    }
    std::vector<Item> items;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split_commas(line);
        if (fields.size() != header.size()) {
            throw ParseError(line_no, "expected " + std::to_string(header.size()) + " fields, found " +
                                          std::to_string(fields.size()));
        }
        Item item;
        item.id = ItemId{static_cast<std::uint32_t>(items.size())};
        try {
            item.role = role_from_string(fields[1]);
            if (!fields[2].empty()) {
                const auto c = parse_double(fields[2]);
                if (!c || *c != std::floor(*c)) throw ConfigError("class label is not an integer");
                item.true_class = class_from_int(static_cast<int>(*c));
            }
        } catch (const ConfigError& e) {
            throw ParseError(line_no, e.what());
        }
        for (std::size_t i = 3; i < fields.size(); ++i) {
            const auto v = parse_double(fields[i]);
            if (!v) throw ParseError(line_no, "feature '" + std::string(header[i]) + "' is not numeric");
            item.features.push_back(*v);
        }
        items.push_back(std::move(item));
    }
    return items;
}

}  // namespace antids
