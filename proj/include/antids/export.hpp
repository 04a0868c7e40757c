#pragma once

// Run artifacts: position tables, PGM renders, entropy traces and the JSON
// report. All writers are deterministic; wall-clock timings only ever go to
// timings.json.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "antids/experiment.hpp"

namespace antids {

// item_id,x,y,role,true_class,predicted_class; x and y are empty while an
// item is carried.
void write_positions_csv(std::ostream& out, const Snapshot& snapshot,
                         std::span<const std::optional<ClassLabel>> predictions = {});

// Plain PGM (P2), maxval 255. Class c is drawn at gray level 50*c, empty
// cells and unlabeled items at 0.
void write_item_map_pgm(std::ostream& out, const Snapshot& snapshot);
// Companion map: 0 empty, 128 test item, 255 marker.
void write_role_map_pgm(std::ostream& out, const Snapshot& snapshot);
// Field scaled so the maximum is 255; an all-zero field renders all zero.
void write_pheromone_pgm(std::ostream& out, GridDims dims, std::span<const double> field);

// t,entropy
void write_entropy_csv(std::ostream& out, std::span<const Snapshot> snapshots);

// Report JSON text (timings excluded), newline terminated.
std::string report_json(const RunReport& report);
std::string timings_json(const RunReport& report);
std::string config_text(const ExperimentConfig& config);

// Writes the whole artifact tree under `dir`:
//   config.resolved.ini, report.json, timings.json and per batch
//   batch_NN/{entropy.csv, positions_t<T>.csv, items_t<T>.pgm,
//   roles_t<T>.pgm, pheromone_t<T>.pgm, positions_final.csv,
//   items_final.pgm, roles_final.pgm}
void export_artifacts(const RunReport& report, const std::filesystem::path& dir);

// Reads a positions CSV back into a snapshot (for rendering). Dimensions
// come from `dims` or, when absent, from the largest coordinates.
Snapshot read_positions_csv(std::istream& in, std::optional<GridDims> dims = std::nullopt);

}  // namespace antids
