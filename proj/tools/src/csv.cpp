#include "fusionclust_cli/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fusionclust/errors.hpp"

namespace fusionclust::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::optional<double> to_number(std::string_view field) {
  field = trim(field);
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  if (field.empty()) return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size()) return std::nullopt;
  return v;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? comma : comma - start));
    if (comma == std::string_view::npos) return out;
    start = comma + 1;
  }
}

}  // namespace

DataMatrix parse_csv(std::string_view text) {
  std::vector<std::vector<double>> columns;
  std::size_t line_no = 0;
  bool first_row = true;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto nl = text.find('\n', start);
    const std::string_view line =
        text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
    start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (trim(line).empty()) continue;

    const auto fields = split_fields(line);
    std::vector<std::optional<double>> parsed;
    parsed.reserve(fields.size());
    std::size_t numeric = 0;
    for (const auto f : fields) {
      parsed.push_back(to_number(f));
      numeric += parsed.back() ? 1 : 0;
    }
    if (first_row) {
      first_row = false;
      columns.resize(fields.size());
      if (numeric == 0) continue;
    }
    if (fields.size() != columns.size()) {
      throw ParseError("line " + std::to_string(line_no) + ": expected " +
                           std::to_string(columns.size()) + " fields, found " +
                           std::to_string(fields.size()),
                       line_no);
    }
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (!parsed[c] || !std::isfinite(*parsed[c])) {
        throw ParseError("line " + std::to_string(line_no) + ": field " + std::to_string(c + 1) +
                             " is not a finite number: '" + std::string(trim(fields[c])) + "'",
                         line_no);
      }
      columns[c].push_back(*parsed[c]);
    }
  }
  if (columns.empty() || columns.front().empty()) throw ParseError("no data rows", 0);
  return DataMatrix::from_columns(columns);
}

DataMatrix read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string(), 0);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_csv(buffer.str());
}

}  // namespace fusionclust::cli
