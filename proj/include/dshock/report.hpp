#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace dshock {

using Cell = std::optional<double>;

struct Report {
  std::string mode;
  std::vector<std::pair<std::string, std::string>> meta;  // ordered key/value
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

namespace detail {

// shortest round-trip decimal, locale-independent
inline std::string format_double(double x) {
  if (!std::isfinite(x)) throw DataError("non-finite value in report");
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

inline std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

}  // namespace detail

inline std::string render_csv(const Report& r) {
  std::string out;
  for (std::size_t c = 0; c < r.columns.size(); ++c) {
    if (c) out += ',';
    out += r.columns[c];
  }
  out += '\n';
  for (const auto& row : r.rows) {
    if (row.size() != r.columns.size()) throw DataError("row width does not match header");
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      if (row[c]) out += detail::format_double(*row[c]);
    }
    out += '\n';
  }
  return out;
}

inline std::string render_json(const Report& r) {
  std::string out = "{\n  \"mode\": \"" + detail::json_escape(r.mode) + "\",\n  \"meta\": {";
  for (std::size_t i = 0; i < r.meta.size(); ++i) {
    if (i) out += ',';
    out += "\n    \"" + detail::json_escape(r.meta[i].first) + "\": \"" +
           detail::json_escape(r.meta[i].second) + "\"";
  }
  out += r.meta.empty() ? "},\n" : "\n  },\n";
  out += "  \"columns\": [";
  for (std::size_t c = 0; c < r.columns.size(); ++c) {
    if (c) out += ", ";
    out += "\"" + detail::json_escape(r.columns[c]) + "\"";
  }
  out += "],\n  \"rows\": [";
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    const auto& row = r.rows[i];
    if (row.size() != r.columns.size()) throw DataError("row width does not match header");
    out += i ? ",\n    [" : "\n    [";
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ", ";
      out += row[c] ? detail::format_double(*row[c]) : "null";
    }
    out += "]";
  }
  out += r.rows.empty() ? "]\n}\n" : "\n  ]\n}\n";
  return out;
}

inline void write_report(const Report& r, const std::string& path, const std::string& format) {
  std::string body;
  if (format == "csv") {
    body = render_csv(r);
  } else if (format == "json") {
    body = render_json(r);
  } else {
    throw ValidationError("unknown output format: " + format);
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open output path: " + path);
  f.write(body.data(), static_cast<std::streamsize>(body.size()));
  f.flush();
  if (!f) throw IoError("write failed: " + path);
}

}  // namespace dshock
