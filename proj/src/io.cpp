#include "spdcsim/io.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "spdcsim/errors.hpp"

namespace spdcsim {

namespace {

std::vector<double> parse_csv_row(const std::string& line, std::size_t n_fields,
                                  std::size_t line_number) {
  std::vector<double> fields;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      std::size_t consumed = 0;
      fields.push_back(std::stod(cell, &consumed));
      if (consumed != cell.size()) throw std::invalid_argument(cell);
    } catch (const std::exception&) {
      throw ConfigError("line " + std::to_string(line_number),
                        "malformed numeric field '" + cell + "'");
    }
  }
  if (fields.size() != n_fields) {
    throw ConfigError("line " + std::to_string(line_number),
                      "expected " + std::to_string(n_fields) + " fields, got " +
                          std::to_string(fields.size()));
  }
  return fields;
}

std::vector<std::vector<double>> parse_csv(const std::string& text,
                                           const std::string& header,
                                           std::size_t n_fields) {
  std::stringstream ss(text);
  std::string line;
  if (!std::getline(ss, line) || line != header) {
    throw ConfigError("line 1", "expected header '" + header + "'");
  }
  std::vector<std::vector<double>> rows;
  std::size_t line_number = 1;
  while (std::getline(ss, line)) {
    ++line_number;
    if (line.empty()) continue;
    rows.push_back(parse_csv_row(line, n_fields, line_number));
  }
  return rows;
}

}  // namespace

std::string format_sig9(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.9g", value);
  return buffer;
}

nlohmann::json density_matrix_to_json(const DensityMatrix& rho) {
  const int d = rho.dim();
  nlohmann::json re = nlohmann::json::array();
  nlohmann::json im = nlohmann::json::array();
  for (int m = 0; m < d; ++m) {
    nlohmann::json re_row = nlohmann::json::array();
    nlohmann::json im_row = nlohmann::json::array();
    for (int n = 0; n < d; ++n) {
      re_row.push_back(rho.elements(m, n).real());
      im_row.push_back(rho.elements(m, n).imag());
    }
    re.push_back(std::move(re_row));
    im.push_back(std::move(im_row));
  }
  return nlohmann::json{{"dim", d}, {"re", std::move(re)}, {"im", std::move(im)}};
}

DensityMatrix density_matrix_from_json(const nlohmann::json& j) {
  if (!j.contains("dim") || !j.contains("re") || !j.contains("im")) {
    throw ConfigError("density matrix", "requires fields dim, re, im");
  }
  const int d = j.at("dim").get<int>();
  if (d <= 0) throw ConfigError("dim", "must be positive");
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  if (static_cast<int>(re.size()) != d || static_cast<int>(im.size()) != d) {
    throw ConfigError("re/im", "row count must equal dim");
  }
  DensityMatrix rho;
  rho.elements.resize(d, d);
  for (int m = 0; m < d; ++m) {
    if (static_cast<int>(re[m].size()) != d ||
        static_cast<int>(im[m].size()) != d) {
      throw ConfigError("re/im row " + std::to_string(m),
                        "column count must equal dim");
    }
    for (int n = 0; n < d; ++n) {
      rho.elements(m, n) = std::complex<double>(re[m][n].get<double>(),
                                                im[m][n].get<double>());
    }
  }
  return rho;
}

nlohmann::json dataset_meta_to_json(const DatasetMeta& meta) {
  return nlohmann::json{{"seed", meta.seed},
                        {"n_samples", meta.n_samples},
                        {"eta_d", meta.eta_d},
                        {"eta_applied", meta.eta_applied},
                        {"source", meta.source}};
}

DatasetMeta dataset_meta_from_json(const nlohmann::json& j) {
  DatasetMeta meta;
  meta.seed = j.at("seed").get<std::uint64_t>();
  meta.n_samples = j.at("n_samples").get<std::size_t>();
  meta.eta_d = j.at("eta_d").get<double>();
  meta.eta_applied = j.at("eta_applied").get<bool>();
  meta.source = j.at("source").get<std::string>();
  return meta;
}

nlohmann::json diagnostics_to_json(const TomoDiagnostics& info) {
  return nlohmann::json{{"iterations", info.iterations},
                        {"loglik", info.loglik},
                        {"converged", info.converged}};
}

std::string dataset_to_csv(const QuadratureDataset& data) {
  std::string out = "theta,x\n";
  for (const auto& rec : data.records) {
    out += format_sig9(rec.theta);
    out += ',';
    out += format_sig9(rec.x);
    out += '\n';
  }
  return out;
}

QuadratureDataset dataset_from_csv(const std::string& text) {
  QuadratureDataset data;
  for (const auto& row : parse_csv(text, "theta,x", 2)) {
    data.records.push_back(QuadratureRecord{row[0], row[1]});
  }
  data.meta.n_samples = data.records.size();
  return data;
}

std::string wigner_to_csv(const WignerGrid& grid) {
  std::string out = "x,p,w\n";
  for (int i = 0; i < grid.xs.size(); ++i) {
    for (int j = 0; j < grid.ps.size(); ++j) {
      out += format_sig9(grid.xs[i]);
      out += ',';
      out += format_sig9(grid.ps[j]);
      out += ',';
      out += format_sig9(grid.values(i, j));
      out += '\n';
    }
  }
  return out;
}

WignerGrid wigner_from_csv(const std::string& text) {
  const auto rows = parse_csv(text, "x,p,w", 3);
  if (rows.empty()) throw ConfigError("wigner csv", "no data rows");
  std::set<double> xs_set;
  std::set<double> ps_set;
  for (const auto& row : rows) {
    xs_set.insert(row[0]);
    ps_set.insert(row[1]);
  }
  WignerGrid grid;
  grid.xs.resize(xs_set.size());
  grid.ps.resize(ps_set.size());
  int i = 0;
  for (double x : xs_set) grid.xs[i++] = x;
  i = 0;
  for (double p : ps_set) grid.ps[i++] = p;
  if (rows.size() != xs_set.size() * ps_set.size()) {
    throw ConfigError("wigner csv", "rows do not form a complete lattice");
  }
  grid.values.resize(grid.xs.size(), grid.ps.size());
  std::size_t k = 0;
  for (int xi = 0; xi < grid.xs.size(); ++xi) {
    for (int pj = 0; pj < grid.ps.size(); ++pj) {
      grid.values(xi, pj) = rows[k++][2];
    }
  }
  return grid;
}

std::string rate_table_to_csv(const std::vector<RatePoint>& rows) {
  std::string out = "r_m,r_i,enhancement,rate1_hz,rate2_hz,rate1_gain,rate2_gain\n";
  for (const auto& row : rows) {
    out += format_sig9(row.r_m);
    out += ',';
    out += format_sig9(row.r_i);
    out += ',';
    out += format_sig9(row.enhancement);
    out += ',';
    out += format_sig9(row.rate1_hz);
    out += ',';
    out += format_sig9(row.rate2_hz);
    out += ',';
    out += format_sig9(row.rate1_gain);
    out += ',';
    out += format_sig9(row.rate2_gain);
    out += '\n';
  }
  return out;
}

std::vector<RatePoint> rate_table_from_csv(const std::string& text) {
  std::vector<RatePoint> rows;
  for (const auto& row : parse_csv(
           text, "r_m,r_i,enhancement,rate1_hz,rate2_hz,rate1_gain,rate2_gain",
           7)) {
    rows.push_back(
        RatePoint{row[0], row[1], row[2], row[3], row[4], row[5], row[6]});
  }
  return rows;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string(), "cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::filesystem::path& path,
                       const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw Error("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace spdcsim
