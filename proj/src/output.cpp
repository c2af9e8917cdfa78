#include "vertex_expand/output.hpp"

#include <cmath>
#include <cstdio>
#include <set>

#include "json.hpp"

#include "vertex_expand/errors.hpp"

namespace vertex_expand::output {

namespace {

std::string quoted(const std::string& s) { return nlohmann::json(s).dump(); }

std::string json_scalar(const Scalar& v) {
  if (const auto* d = std::get_if<double>(&v)) {
    return std::isfinite(*d) ? format_double(*d) : quoted(format_double(*d));
  }
  if (const auto* i = std::get_if<long long>(&v)) return std::to_string(*i);
  return quoted(std::get<std::string>(v));
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_scalar(const Scalar& v) {
  if (const auto* d = std::get_if<double>(&v)) return format_double(*d);
  if (const auto* i = std::get_if<long long>(&v)) return std::to_string(*i);
  return csv_field(std::get<std::string>(v));
}

}  // namespace

Format parse_format(std::string_view text) {
  if (text == "json") return Format::Json;
  if (text == "csv") return Format::Csv;
  throw InvalidArgument("unknown format '" + std::string(text) + "'");
}

bool is_provenance(std::string_view tag) {
  static const std::set<std::string_view> tags = {"quadrature",      "series",   "enumeration",
                                                  "transfer-matrix", "pfaffian", "exact-series"};
  return tags.contains(tag);
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string to_json(const OutputRecord& record) {
  if (!is_provenance(record.provenance)) {
    throw InvalidArgument("unknown provenance '" + record.provenance + "'");
  }
  std::string params = "{";
  bool first = true;
  for (const auto& [k, v] : record.params) {  // std::map: sorted
    if (!first) params += ",";
    first = false;
    params += quoted(k) + ":" + json_scalar(v);
  }
  params += "}";
  return "{\"params\":" + params + ",\"provenance\":" + quoted(record.provenance) +
         ",\"quantity\":" + quoted(record.quantity) + ",\"value\":" + json_scalar(record.value) +
         "}";
}

void write_records(std::ostream& out, std::span<const OutputRecord> records, Format format) {
  if (format == Format::Json) {
    for (const auto& r : records) out << to_json(r) << '\n';
    return;
  }
  std::set<std::string> keys;
  for (const auto& r : records) {
    if (!is_provenance(r.provenance)) {
      throw InvalidArgument("unknown provenance '" + r.provenance + "'");
    }
    for (const auto& [k, v] : r.params) keys.insert(k);
  }
  out << "quantity";
  for (const auto& k : keys) out << ',' << csv_field(k);
  out << ",value,provenance\n";
  for (const auto& r : records) {
    out << csv_field(r.quantity);
    for (const auto& k : keys) {
      out << ',';
      if (auto it = r.params.find(k); it != r.params.end()) out << csv_scalar(it->second);
    }
    out << ',' << csv_scalar(r.value) << ',' << r.provenance << '\n';
  }
}

}  // namespace vertex_expand::output
