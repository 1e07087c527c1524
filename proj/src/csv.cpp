#include "klentropy/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <vector>

#include "klentropy/error.hpp"

namespace klentropy {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<double> parse_row(std::string_view line, std::size_t line_no) {
  std::vector<double> row;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    const auto field = trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start));
    try {
      row.push_back(parse_real(field));
    } catch (const UsageError& e) {
      throw UsageError("csv line " + std::to_string(line_no) + ": " + e.what());
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return row;
}

Dataset read_rows(std::istream& in, SpaceKind kind, int dim) {
  std::vector<double> coords;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto content = trim(line);
    if (content.empty() || content.front() == '#') continue;
    const auto row = parse_row(content, line_no);
    if (dim == 0) dim = static_cast<int>(row.size());
    if (row.size() != static_cast<std::size_t>(dim)) {
      throw UsageError("csv line " + std::to_string(line_no) + ": expected " +
                       std::to_string(dim) + " columns, found " + std::to_string(row.size()));
    }
    coords.insert(coords.end(), row.begin(), row.end());
  }
  if (dim == 0) throw UsageError("csv: no data rows");
  const MetricSpace space =
      kind == SpaceKind::euclidean ? MetricSpace::euclidean(dim) : MetricSpace::flat_torus(dim);
  return Dataset(space, std::move(coords));
}

}  // namespace

std::string format_real(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  // to_chars ignores the locale, so the separator is always '.'.
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

double parse_real(std::string_view text) {
  text = trim(text);
  if (text == "inf" || text == "+inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw UsageError("cannot parse '" + std::string(text) + "' as a real number");
  }
  return value;
}

void write_dataset_csv(std::ostream& out, const Dataset& data) {
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto p = data.point(i);
    for (std::size_t d = 0; d < p.size(); ++d) {
      if (d > 0) out << ',';
      out << format_real(p[d]);
    }
    out << '\n';
  }
}

Dataset read_dataset_csv(std::istream& in, const MetricSpace& space) {
  return read_rows(in, space.kind(), space.dim());
}

Dataset read_dataset_csv(std::istream& in, SpaceKind kind) { return read_rows(in, kind, 0); }

}  // namespace klentropy
