#pragma once

#include <iosfwd>
#include <string>

#include "klentropy/dataset.hpp"

namespace klentropy {

/// Shortest-safe round-trip text for a double: 17 significant digits,
/// `.` decimal separator, "inf"/"-inf"/"nan" for non-finite values.
std::string format_real(double value);

/// Parse a real written by format_real (or any plain decimal). Throws UsageError.
double parse_real(std::string_view text);

/// One row per point, D comma-separated columns, LF line endings.
void write_dataset_csv(std::ostream& out, const Dataset& data);

/// Reads rows written by write_dataset_csv. Blank lines and lines starting
/// with '#' are skipped. Every row must have space.dim() columns.
Dataset read_dataset_csv(std::istream& in, const MetricSpace& space);

/// Reads a CSV whose dimension is taken from the first data row.
Dataset read_dataset_csv(std::istream& in, SpaceKind kind);

}  // namespace klentropy
