#include "antids/export.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "antids/errors.hpp"

namespace antids {

namespace {

using nlohmann::ordered_json;

double percent(double fraction) { return std::round(fraction * 10000.0) / 100.0; }

ordered_json evaluation_json(const EvaluationReport& r) {
    ordered_json j;
    ordered_json classes = ordered_json::array();
    ordered_json per_class = ordered_json::object();
    for (int c = 1; c <= kClassCount; ++c) {
        const auto name = std::string(class_name(class_from_int(c)));
        classes.push_back(name);
        const auto& acc = r.per_class_accuracy[static_cast<std::size_t>(c - 1)];
        per_class[name] = acc ? ordered_json(percent(*acc)) : ordered_json(nullptr);
    }
    j["classes"] = classes;
    j["confusion"] = r.confusion;
    j["per_class_accuracy"] = per_class;
    j["overall_accuracy"] = r.overall_accuracy ? ordered_json(percent(*r.overall_accuracy)) : ordered_json(nullptr);
    j["n_test"] = r.n_test;
    return j;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw IoError("write failed for " + path.string());
}

template <typename Writer>
void write_file(const std::filesystem::path& path, Writer&& writer) {
    auto out = open_out(path);
    writer(out);
    finish(out, path);
}

void write_pgm_header(std::ostream& out, GridDims dims) {
    out << "P2\n" << dims.width << ' ' << dims.height << "\n255\n";
}

template <typename PixelFn>
void write_pgm(std::ostream& out, GridDims dims, PixelFn pixel) {
    write_pgm_header(out, dims);
    for (int y = 0; y < dims.height; ++y) {
        for (int x = 0; x < dims.width; ++x) {
            if (x > 0) out << ' ';
            out << pixel(static_cast<std::size_t>(y) * static_cast<std::size_t>(dims.width) + static_cast<std::size_t>(x));
        }
        out << '\n';
    }
}

std::vector<int> raster(const Snapshot& s, int (*value)(const Placement&)) {
    std::vector<int> px(static_cast<std::size_t>(s.dims.width) * static_cast<std::size_t>(s.dims.height), 0);
    for (const auto& p : s.placements) {
        if (!p.where) continue;
        px[static_cast<std::size_t>(p.where->y) * static_cast<std::size_t>(s.dims.width) + static_cast<std::size_t>(p.where->x)] =
            value(p);
    }
    return px;
}

}  // namespace

void write_positions_csv(std::ostream& out, const Snapshot& snapshot, std::span<const std::optional<ClassLabel>> predictions) {
    if (!predictions.empty() && predictions.size() != snapshot.placements.size()) {
        throw ContractViolation("prediction count does not match the snapshot");
    }
    out << "item_id,x,y,role,true_class,predicted_class\n";
    for (std::size_t i = 0; i < snapshot.placements.size(); ++i) {
        const auto& p = snapshot.placements[i];
        out << to_index(p.item) << ',';
        if (p.where) out << p.where->x << ',' << p.where->y;
        else out << ',';
        out << ',' << role_name(p.role) << ',';
        if (p.true_class) out << to_int(*p.true_class);
        out << ',';
        if (!predictions.empty() && predictions[i]) out << to_int(*predictions[i]);
        out << '\n';
    }
}

void write_item_map_pgm(std::ostream& out, const Snapshot& snapshot) {
    const auto px = raster(snapshot, [](const Placement& p) { return p.true_class ? 50 * to_int(*p.true_class) : 0; });
    write_pgm(out, snapshot.dims, [&](std::size_t i) { return px[i]; });
}

void write_role_map_pgm(std::ostream& out, const Snapshot& snapshot) {
    const auto px = raster(snapshot, [](const Placement& p) { return p.role == Role::marker ? 255 : 128; });
    write_pgm(out, snapshot.dims, [&](std::size_t i) { return px[i]; });
}

void write_pheromone_pgm(std::ostream& out, GridDims dims, std::span<const double> field) {
    if (field.size() != static_cast<std::size_t>(dims.width) * static_cast<std::size_t>(dims.height)) {
        throw ContractViolation("pheromone field does not match the grid dimensions");
    }
    const double max = field.empty() ? 0.0 : *std::max_element(field.begin(), field.end());
    write_pgm(out, dims, [&](std::size_t i) {
        return max > 0.0 ? static_cast<int>(std::lround(255.0 * field[i] / max)) : 0;
    });
}

void write_entropy_csv(std::ostream& out, std::span<const Snapshot> snapshots) {
    out << "t,entropy\n";
    std::ostringstream line;
    line.precision(17);
    for (const auto& s : snapshots) {
        line.str({});
        line << s.t << ',' << s.entropy << '\n';
        out << line.str();
    }
}

std::string config_text(const ExperimentConfig& config) {
    std::string out = "# resolved configuration; usable again with --config\n";
    for (const auto& [key, value] : config_entries(config)) out += key + " = \"" + value + "\"\n";
    return out;
}

std::string report_json(const RunReport& report) {
    ordered_json j;
    ordered_json cfg = ordered_json::object();
    for (const auto& [key, value] : config_entries(report.config)) cfg[key] = value;
    j["config"] = cfg;

    if (report.split) {
        ordered_json train = ordered_json::array();
        ordered_json test = ordered_json::array();
        std::size_t train_total = 0;
        std::size_t test_total = 0;
        for (const auto& c : *report.split) {
            train.push_back(c.train);
            test.push_back(c.test);
            train_total += c.train;
            test_total += c.test;
        }
        j["split"] = {{"train", train}, {"test", test}, {"train_total", train_total}, {"test_total", test_total}};
    } else {
        j["split"] = nullptr;
    }

    ordered_json batches = ordered_json::array();
    for (const auto& b : report.batches) {
        ordered_json bj;
        bj["index"] = b.index;
        bj["seed"] = b.seed;
        bj["grid"] = {b.dims.width, b.dims.height};
        bj["items"] = b.n_items;
        bj["ants"] = b.n_ants;
        ordered_json trace = ordered_json::array();
        for (const auto& s : b.snapshots) trace.push_back({{"t", s.t}, {"entropy", s.entropy}});
        bj["entropy_trace"] = trace;
        bj["final_entropy"] = b.final_snapshot.entropy;
        const auto& ph = b.final_snapshot.pheromone;
        bj["pheromone"] = {{"min", ph.min}, {"max", ph.max}, {"mean", ph.mean}};
        bj["evaluation"] = b.evaluation ? evaluation_json(*b.evaluation) : ordered_json(nullptr);
        batches.push_back(bj);
    }
    j["batches"] = batches;
    j["aggregate"] = report.aggregate ? evaluation_json(*report.aggregate) : ordered_json(nullptr);
    return j.dump(2) + "\n";
}

std::string timings_json(const RunReport& report) {
    ordered_json j = ordered_json::array();
    double total = 0.0;
    for (const auto& b : report.batches) {
        j.push_back({{"index", b.index}, {"seconds", b.seconds}});
        total += b.seconds;
    }
    return ordered_json{{"batches", j}, {"total_seconds", total}}.dump(2) + "\n";
}

void export_artifacts(const RunReport& report, const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

    write_file(dir / "config.resolved.ini", [&](std::ostream& o) { o << config_text(report.config); });
    write_file(dir / "report.json", [&](std::ostream& o) { o << report_json(report); });
    write_file(dir / "timings.json", [&](std::ostream& o) { o << timings_json(report); });

    for (const auto& b : report.batches) {
        char name[32];
        std::snprintf(name, sizeof name, "batch_%02zu", b.index);
        const fs::path bdir = dir / name;
        fs::create_directories(bdir, ec);
        if (ec) throw IoError("cannot create " + bdir.string() + ": " + ec.message());

        write_file(bdir / "entropy.csv", [&](std::ostream& o) { write_entropy_csv(o, b.snapshots); });
        for (const auto& s : b.snapshots) {
            const auto tag = "_t" + std::to_string(s.t);
            write_file(bdir / ("positions" + tag + ".csv"), [&](std::ostream& o) { write_positions_csv(o, s); });
            write_file(bdir / ("items" + tag + ".pgm"), [&](std::ostream& o) { write_item_map_pgm(o, s); });
            write_file(bdir / ("roles" + tag + ".pgm"), [&](std::ostream& o) { write_role_map_pgm(o, s); });
            write_file(bdir / ("pheromone" + tag + ".pgm"),
                       [&](std::ostream& o) { write_pheromone_pgm(o, s.dims, s.pheromone_field); });
        }
        const auto& f = b.final_snapshot;
        write_file(bdir / "positions_final.csv", [&](std::ostream& o) { write_positions_csv(o, f, b.predictions); });
        write_file(bdir / "items_final.pgm", [&](std::ostream& o) { write_item_map_pgm(o, f); });
        write_file(bdir / "roles_final.pgm", [&](std::ostream& o) { write_role_map_pgm(o, f); });
    }
}

Snapshot read_positions_csv(std::istream& in, std::optional<GridDims> dims) {
    std::string line;
    if (!std::getline(in, line) || line.rfind("item_id,x,y,role,true_class", 0) != 0) {
        throw ParseError(1, "not a positions table (expected item_id,x,y,role,true_class,...)");
    }
    Snapshot s;
    std::size_t line_no = 1;
    int max_x = -1;
    int max_y = -1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) f.push_back(cell);
        if (!line.empty() && line.back() == ',') f.emplace_back();
        if (f.size() < 5) throw ParseError(line_no, "too few fields");
        try {
            Placement p;
            p.item = ItemId{static_cast<std::uint32_t>(std::stoul(f[0]))};
            if (!f[1].empty()) {
                p.where = GridCoord{std::stoi(f[1]), std::stoi(f[2])};
                max_x = std::max(max_x, p.where->x);
                max_y = std::max(max_y, p.where->y);
            }
            p.role = role_from_string(f[3]);
            if (!f[4].empty()) p.true_class = class_from_int(std::stoi(f[4]));
            s.placements.push_back(p);
        } catch (const std::exception& e) {
            throw ParseError(line_no, e.what());
        }
    }
    s.dims = dims ? *dims : GridDims{max_x + 1, max_y + 1};
    for (const auto& p : s.placements) {
        if (p.where && (p.where->x < 0 || p.where->y < 0 || p.where->x >= s.dims.width || p.where->y >= s.dims.height)) {
            throw DataError("position outside the " + std::to_string(s.dims.width) + "x" + std::to_string(s.dims.height) + " grid");
        }
    }
    return s;
}

}  // namespace antids
