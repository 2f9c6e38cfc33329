#include "datasignal/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace datasignal {

namespace {

using nlohmann::json;

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& rows, const char* name) {
  if (!rows.is_array() || rows.empty()) {
    throw Error(ErrorCode::ParseError, std::string(name) + " must be a nonempty array of rows");
  }
  const std::size_t cols = rows.front().size();
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const json& row = rows[i];
    if (!row.is_array() || row.size() != cols) {
      throw Error(ErrorCode::ParseError, std::string(name) + " rows must have equal length");
    }
    for (std::size_t j = 0; j < cols; ++j) {
      if (!row[j].is_number()) throw Error(ErrorCode::ParseError, std::string(name) + " entries must be numbers");
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = row[j].get<double>();
    }
  }
  return m;
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

}  // namespace

std::string model_to_json(const Signal& signal, const std::vector<std::string>& class_labels) {
  json doc;
  doc["format_version"] = kModelFormatVersion;
  doc["dim"] = signal.dim();
  doc["gamma"] = signal.config().gamma;
  doc["alpha"] = signal.config().alpha;
  if (!class_labels.empty()) doc["class_labels"] = class_labels;
  doc["centers"] = matrix_to_json(signal.centers());
  doc["coefficients"] = matrix_to_json(signal.coefficients());
  return doc.dump() + "\n";
}

StoredModel model_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, std::string("model is not valid JSON: ") + e.what());
  }
  try {
    if (doc.at("format_version").get<int>() != kModelFormatVersion) {
      throw Error(ErrorCode::ParseError, "unsupported model format_version");
    }
    KernelConfig config{doc.at("gamma").get<double>(), doc.at("alpha").get<double>()};
    Matrix centers = matrix_from_json(doc.at("centers"), "centers");
    Matrix coefficients = matrix_from_json(doc.at("coefficients"), "coefficients");
    if (doc.at("dim").get<Eigen::Index>() != centers.cols()) {
      throw Error(ErrorCode::ParseError, "dim does not match center width");
    }
    std::vector<std::string> labels;
    if (doc.contains("class_labels")) labels = doc["class_labels"].get<std::vector<std::string>>();
    return StoredModel{Signal(std::move(centers), std::move(coefficients), config), std::move(labels)};
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("malformed model: ") + e.what());
  }
}

void save_model(const std::filesystem::path& path, const Signal& signal,
                const std::vector<std::string>& class_labels) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << model_to_json(signal, class_labels);
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

StoredModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return model_from_json(buffer.str());
}

CsvTable parse_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split_fields(line);
    if (!have_header) {
      table.header = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != table.header.size()) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected " +
                                             std::to_string(table.header.size()) + " fields, got " +
                                             std::to_string(fields.size()));
    }
    table.rows.push_back(std::move(fields));
    table.lines.push_back(line_no);
  }
  return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  return parse_csv(in);
}

Matrix numeric_columns(const CsvTable& table, std::size_t first, std::size_t last) {
  Matrix m(static_cast<Eigen::Index>(table.rows.size()), static_cast<Eigen::Index>(last - first));
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    for (std::size_t j = first; j < last; ++j) {
      const std::string& field = table.rows[i][j];
      double value = 0.0;
      const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
      if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) {
        throw Error(ErrorCode::ParseError, "line " + std::to_string(table.lines[i]) +
                                               ": not a number: '" + field + "'");
      }
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j - first)) = value;
    }
  }
  return m;
}

void write_labeled_points_csv(const std::filesystem::path& path, const Matrix& points,
                              const std::vector<std::string>& labels) {
  if (points.cols() != 2 || static_cast<std::size_t>(points.rows()) != labels.size()) {
    throw Error(ErrorCode::DimensionMismatch, "expected 2D points with one label each");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << "x1,x2,label\n";
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    out << format_double(points(i, 0)) << ',' << format_double(points(i, 1)) << ','
        << labels[static_cast<std::size_t>(i)] << '\n';
  }
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

}  // namespace datasignal
