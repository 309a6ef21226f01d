#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "polyfreq/geometry.hpp"
#include "polyfreq/spectra.hpp"
#include "polyfreq/stability.hpp"
#include "polyfreq/symmetrize.hpp"

namespace polyfreq {

/// {"vertices": [[x0, y0], ...], "orientation": "ccw"}
nlohmann::json polygon_to_json(const Polygon& p);
Polygon polygon_from_json(const nlohmann::json& j);

/// {"x": [...], "r": [...], "alpha": a}
nlohmann::json manifold_to_json(const ManifoldPoint& m);
ManifoldPoint manifold_from_json(const nlohmann::json& j);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);
nlohmann::json read_json_file(const std::string& path);

/// FNV-1a 64-bit hash, hex encoded.
std::string fnv1a_hex(const std::string& data);

/// CSV with `#`-prefixed comment lines, a header row and one row per record.
/// NaN cells are written empty.
struct CsvTable {
  std::vector<std::string> comments;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::string str() const;
};

/// Plot tables. Column meanings are stated in the comment lines.
CsvTable emit_plot_data(const FlowTrace& trace);
CsvTable emit_plot_data(const SeriesReconstruction& series);
CsvTable emit_plot_data(const std::vector<FamilyPoint>& family);
CsvTable emit_plot_data(const SharpnessFit& fit);

}  // namespace polyfreq
