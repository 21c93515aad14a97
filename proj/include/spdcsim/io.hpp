#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "spdcsim/cavity.hpp"
#include "spdcsim/fock.hpp"
#include "spdcsim/homodyne.hpp"
#include "spdcsim/tomo.hpp"
#include "spdcsim/wigner.hpp"

namespace spdcsim {

// Shortest representation with up to 9 significant digits.
std::string format_sig9(double value);

nlohmann::json density_matrix_to_json(const DensityMatrix& rho);
DensityMatrix density_matrix_from_json(const nlohmann::json& j);

nlohmann::json dataset_meta_to_json(const DatasetMeta& meta);
DatasetMeta dataset_meta_from_json(const nlohmann::json& j);

nlohmann::json diagnostics_to_json(const TomoDiagnostics& info);

// Header "theta,x", one record per row, 9 significant digits.
std::string dataset_to_csv(const QuadratureDataset& data);
QuadratureDataset dataset_from_csv(const std::string& text);

// Header "x,p,w", row-major over the (x, p) lattice.
std::string wigner_to_csv(const WignerGrid& grid);
WignerGrid wigner_from_csv(const std::string& text);

// Header "r_m,r_i,enhancement,rate1_hz,rate2_hz,rate1_gain,rate2_gain".
std::string rate_table_to_csv(const std::vector<RatePoint>& rows);
std::vector<RatePoint> rate_table_from_csv(const std::string& text);

std::string read_file(const std::filesystem::path& path);

// Writes to a sibling temp file then renames into place.
void write_file_atomic(const std::filesystem::path& path,
                       const std::string& content);

}  // namespace spdcsim
