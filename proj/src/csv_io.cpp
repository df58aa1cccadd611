#include "icatopsis/csv_io.hpp"

#include "icatopsis/errors.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace icatopsis {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

bool parse_double(const std::string& text, double& value) {
  if (text.empty()) return false;
  errno = 0;
  char* end = nullptr;
  value = std::strtod(text.c_str(), &end);
  return end == text.c_str() + text.size() && errno != ERANGE && std::isfinite(value);
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open '" + path.string() + "' for reading");
  return in;
}

bool blank(const std::string& line) { return line.find_first_not_of(" \t\r") == std::string::npos; }

}  // namespace

std::string format_number(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

std::vector<std::string> split_csv_line(std::string_view line, std::size_t line_number) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"' && trim(field).empty()) {
      quoted = true;
      was_quoted = true;
      field.clear();
    } else if (c == ',') {
      fields.push_back(was_quoted ? field : trim(field));
      field.clear();
      was_quoted = false;
    } else {
      field += c;
    }
  }
  if (quoted) throw ParseError("unterminated quoted field", line_number);
  fields.push_back(was_quoted ? field : trim(field));
  return fields;
}

std::string quote_csv_field(std::string_view field) {
  const bool needs = field.find_first_of(",\"\n") != std::string_view::npos ||
                     (!field.empty() && (field.front() == ' ' || field.back() == ' '));
  if (!needs) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

LabeledMatrix read_labeled_matrix(std::istream& in) {
  LabeledMatrix m;
  std::string line;
  std::size_t line_number = 0;
  bool have_header = false;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    ++line_number;
    if (blank(line)) continue;
    std::vector<std::string> fields = split_csv_line(line, line_number);
    if (!have_header) {
      if (fields.size() < 2) throw ParseError("header needs a label column and at least one value column", line_number);
      m.corner = fields.front();
      m.column_labels.assign(fields.begin() + 1, fields.end());
      have_header = true;
      continue;
    }
    if (fields.size() != m.column_labels.size() + 1) {
      throw ParseError("row has " + std::to_string(fields.size()) + " fields, expected " +
                           std::to_string(m.column_labels.size() + 1),
                       line_number);
    }
    std::vector<double> row(m.column_labels.size());
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (!parse_double(fields[j + 1], row[j])) {
        throw ParseError("field " + std::to_string(j + 2) + " ('" + fields[j + 1] + "') is not a finite number",
                         line_number);
      }
    }
    m.row_labels.push_back(fields.front());
    rows.push_back(std::move(row));
  }
  if (!have_header) throw ParseError("missing header row", line_number == 0 ? 1 : line_number);
  m.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(m.column_labels.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      m.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return m;
}

LabeledMatrix read_labeled_matrix(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  return read_labeled_matrix(in);
}

void write_labeled_matrix(std::ostream& out, const LabeledMatrix& m) {
  out << quote_csv_field(m.corner);
  for (const auto& label : m.column_labels) out << ',' << quote_csv_field(label);
  out << '\n';
  for (Eigen::Index i = 0; i < m.values.rows(); ++i) {
    out << quote_csv_field(m.row_labels[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j < m.values.cols(); ++j) out << ',' << format_number(m.values(i, j));
    out << '\n';
  }
}

DecisionMatrix read_decision_matrix(std::istream& in) {
  LabeledMatrix m = read_labeled_matrix(in);
  return DecisionMatrix(std::move(m.values), std::move(m.row_labels), std::move(m.column_labels));
}

DecisionMatrix read_decision_matrix(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  return read_decision_matrix(in);
}

void write_decision_matrix(std::ostream& out, const DecisionMatrix& decision) {
  write_labeled_matrix(out, {"alternative", decision.alternative_labels(), decision.criterion_labels(), decision.values()});
}

WeightVector parse_weights(const std::string& spec) {
  std::vector<double> weights;
  auto parse_fields = [&](const std::vector<std::string>& fields, std::size_t line_number) {
    for (const auto& f : fields) {
      double w = 0.0;
      if (!parse_double(f, w)) throw ParseError("weight '" + f + "' is not a finite number", line_number);
      weights.push_back(w);
    }
  };

  std::error_code ec;
  if (std::filesystem::is_regular_file(spec, ec)) {
    std::ifstream in = open_input(spec);
    std::string line;
    std::size_t line_number = 0;
    std::vector<std::vector<std::string>> records;
    std::vector<std::size_t> numbers;
    while (std::getline(in, line)) {
      ++line_number;
      if (blank(line)) continue;
      records.push_back(split_csv_line(line, line_number));
      numbers.push_back(line_number);
    }
    if (records.empty()) throw ParseError("weights file is empty", 1);
    if (records.size() > 2) throw ParseError("weights file has more than a header and one row", numbers[2]);
    parse_fields(records.back(), numbers.back());
  } else {
    parse_fields(split_csv_line(spec, 1), 1);
  }
  for (double w : weights)
    if (w < 0.0) throw InvalidInput("weights must be non-negative (got " + format_number(w) + ")");
  return WeightVector(std::move(weights));
}

void write_file_atomically(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidInput("cannot open '" + tmp.string() + "' for writing");
    out << content;
    out.flush();
    if (!out) throw InvalidInput("failed writing '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw InvalidInput("cannot move output into place at '" + path.string() + "'");
  }
}

}  // namespace icatopsis
