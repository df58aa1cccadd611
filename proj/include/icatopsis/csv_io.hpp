#pragma once

// Comma-separated files with a mandatory header row. Matrix files carry a
// label in the first column; numbers are written with 17 significant digits
// so every double survives a round trip.

#include "icatopsis/decision.hpp"

#include <Eigen/Dense>

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace icatopsis {

std::string format_number(double value);

/// Splits one CSV record; double-quoted fields may contain commas and "".
std::vector<std::string> split_csv_line(std::string_view line, std::size_t line_number);

/// Quotes a field when it contains a comma, quote or leading/trailing blank.
std::string quote_csv_field(std::string_view field);

struct LabeledMatrix {
  std::string corner;
  std::vector<std::string> row_labels;
  std::vector<std::string> column_labels;
  Eigen::MatrixXd values;
};

LabeledMatrix read_labeled_matrix(std::istream& in);
LabeledMatrix read_labeled_matrix(const std::filesystem::path& path);
void write_labeled_matrix(std::ostream& out, const LabeledMatrix& matrix);

DecisionMatrix read_decision_matrix(std::istream& in);
DecisionMatrix read_decision_matrix(const std::filesystem::path& path);
void write_decision_matrix(std::ostream& out, const DecisionMatrix& decision);

/// `spec` is either a path to a weights file or an inline list such as
/// "0.5,0.5". A weights file holds one numeric row, optionally preceded by a
/// header row of criterion labels.
WeightVector parse_weights(const std::string& spec);

/// Writes to a sibling temporary file, then renames it over `path`.
void write_file_atomically(const std::filesystem::path& path, const std::string& content);

}  // namespace icatopsis
