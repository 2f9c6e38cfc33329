#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "datasignal/kernel.hpp"

namespace datasignal {

inline constexpr int kModelFormatVersion = 1;

/// A signal as persisted on disk; class_labels is empty for scalar signals.
struct StoredModel {
  Signal signal;
  std::vector<std::string> class_labels;
};

/// JSON document:
///   {format_version, dim, gamma, alpha, class_labels?, centers, coefficients}
/// centers and coefficients are arrays of rows. Doubles are written with
/// shortest round-trip formatting, so a load reproduces every bit.
std::string model_to_json(const Signal& signal, const std::vector<std::string>& class_labels = {});
StoredModel model_from_json(const std::string& text);

void save_model(const std::filesystem::path& path, const Signal& signal,
                const std::vector<std::string>& class_labels = {});
StoredModel load_model(const std::filesystem::path& path);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  /// 1-based line number of each row in the source, for error messages.
  std::vector<std::size_t> lines;
};

/// Parses comma-separated text with a mandatory header line. Blank lines are
/// skipped; every row must have as many fields as the header.
CsvTable parse_csv(std::istream& in);
CsvTable read_csv(const std::filesystem::path& path);

/// Parses columns [first, last) of every row as doubles.
Matrix numeric_columns(const CsvTable& table, std::size_t first, std::size_t last);

/// Writes the `x1,x2,label` point format (LF line endings).
void write_labeled_points_csv(const std::filesystem::path& path, const Matrix& points,
                              const std::vector<std::string>& labels);

/// Shortest representation that parses back to the same double.
std::string format_double(double value);

}  // namespace datasignal
