#pragma once

// Output records of the command-line tool: JSON lines with sorted keys, or
// CSV with a header row. Floats use 17 significant digits; exact values are
// passed as fraction strings and printed verbatim.

#include <map>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <variant>

namespace vertex_expand::output {

using Scalar = std::variant<double, long long, std::string>;

enum class Format { Json, Csv };
Format parse_format(std::string_view text);

/// Allowed provenance tags.
bool is_provenance(std::string_view tag);

struct OutputRecord {
  std::string quantity;
  std::map<std::string, Scalar> params;
  Scalar value;
  std::string provenance;  // quadrature, series, enumeration, transfer-matrix, pfaffian, exact-series
};

std::string format_double(double x);

/// One JSON object, keys sorted, no trailing newline.
std::string to_json(const OutputRecord& record);

/// JSON: one object per line. CSV: header "quantity,<param keys>,value,provenance"
/// over the union of parameter keys, then one row per record.
void write_records(std::ostream& out, std::span<const OutputRecord> records, Format format);

}  // namespace vertex_expand::output
