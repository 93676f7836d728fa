#pragma once

// File formats.
//
// Lattice: one JSON header line {"dims":[...],"dtype":"f64"} followed by raw
// little-endian 64-bit floats in row-major order. Masks use dtype "u8" with
// one byte per site. 2D lattices can also be read/written as CSV (one line
// per lattice row); the CSV path is chosen by the .csv extension.
// Rejection masks additionally export to binary PGM (P5, 0 = retain,
// 255 = reject). All writers go through a temp file + rename.

#include <filesystem>
#include <string>

#include "json.hpp"

#include "fdrl/fdr.hpp"
#include "fdrl/lattice.hpp"
#include "fdrl/lip.hpp"
#include "fdrl/null_dist.hpp"
#include "fdrl/sim.hpp"

namespace fdrl {

void write_lattice(const std::filesystem::path& path, const Lattice& lat);
Lattice read_lattice(const std::filesystem::path& path);

void write_mask(const std::filesystem::path& path, const Mask& mask);
Mask read_mask(const std::filesystem::path& path);

void write_mask_pgm(const std::filesystem::path& path, const Mask& mask);
void write_mask_csv(const std::filesystem::path& path, const Mask& mask);

nlohmann::json null_cdf_to_json(const NullCdf& g);
NullCdf null_cdf_from_json(const nlohmann::json& j);

void write_curve_csv(const std::filesystem::path& path, const FdrCurve& curve);
nlohmann::json curve_summary_json(const FdrCurve& curve);

nlohmann::json metrics_to_json(const MetricsReport& m);
nlohmann::json lip_report_to_json(const LipReport& rep);

// temp file + rename in the destination directory
void atomic_write_text(const std::filesystem::path& path, const std::string& content);

}  // namespace fdrl
