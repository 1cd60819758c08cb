#pragma once

#include <fstream>
#include <string>
#include <string_view>

#include <json.hpp>

#include "nnops/analysis.hpp"
#include "nnops/operators.hpp"

namespace nnops {

inline void write_text_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw computation_error("cannot open '" + path + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw computation_error("short write to '" + path + "'");
}

// CSV with header y1,...,yr,<value_column>, rows in the field's row-major
// lexicographic grid order. '.' decimal separator, '\n' newlines; byte
// deterministic for identical fields.
inline std::string grid_field_csv(const grid_field& field, std::string_view value_column = "value") {
  std::string out;
  out.reserve(field.size() * 24);
  for (int i = 1; i <= field.dimension(); ++i) {
    out += 'y';
    out += std::to_string(i);
    out += ',';
  }
  out += value_column;
  out += '\n';
  std::vector<double> point(static_cast<std::size_t>(field.dimension()));
  for (std::size_t flat = 0; flat < field.size(); ++flat) {
    field.point_at(flat, point);
    for (double c : point) {
      out += format_double(c);
      out += ',';
    }
    out += format_double(field.values[flat]);
    out += '\n';
  }
  return out;
}

inline nlohmann::json grid_field_metadata(const grid_field& field) {
  nlohmann::json j;
  j["operator"] = std::string(to_string(field.kind));
  j["n"] = field.n;
  j["activation"] = field.activation;
  j["dimension"] = field.dimension();
  nlohmann::json dom = nlohmann::json::array();
  for (const auto& [a, b] : field.domain.intervals()) dom.push_back({a, b});
  j["domain"] = dom;
  j["points_per_axis"] = field.points_per_axis;
  j["tail_epsilon"] = field.tail_epsilon;
  j["axis_window"] = field.axis_window;
  j["full_lattice"] = field.full_lattice;
  j["max_omitted_lattice_points"] = field.truncation.max_omitted_lattice_points;
  j["omitted_tail_bound"] = field.truncation.omitted_tail_bound;
  return j;
}

inline void write_grid_field(const grid_field& field, const std::string& csv_path,
                             std::string_view value_column = "value") {
  write_text_file(csv_path, grid_field_csv(field, value_column));
  write_text_file(csv_path + ".meta.json", grid_field_metadata(field).dump(2) + "\n");
}

inline std::string error_table_csv(const error_table& table) {
  std::string out = "n,classical,max_product,max_min\n";
  for (const auto& row : table.rows) {
    out += std::to_string(row.n);
    out += ',';
    out += format_double(row.classical_error);
    out += ',';
    out += format_double(row.max_product_error);
    out += ',';
    out += format_double(row.max_min_error);
    out += '\n';
  }
  return out;
}

inline nlohmann::json bound_report_json(const bound_report& rep) {
  nlohmann::json j;
  j["n"] = rep.n;
  j["delta_n"] = rep.delta_n;
  j["omega_term"] = rep.omega_term;
  j["moment_term"] = rep.moment_term;
  j["bound"] = rep.bound;
  if (rep.observed_error == rep.observed_error) j["observed_error"] = rep.observed_error;
  j["omega_lower"] = rep.omega_lower;
  j["moment_value"] = rep.moment_value;
  j["moment_safety"] = rep.moment_safety;
  return j;
}

}  // namespace nnops
