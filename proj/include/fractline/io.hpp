#pragma once

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fractline/analyze.hpp"
#include "fractline/bends.hpp"
#include "fractline/boxcount.hpp"
#include "fractline/errors.hpp"
#include "fractline/geometry.hpp"

namespace fractline {

enum class GeometryFormat { GeoJson, Wkt, CsvXy };

namespace detail {

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t offset) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

/// Shared closure convention: a repeated first/last vertex marks a ring; the
/// duplicate is dropped and the polyline stored as closed.
inline Polyline finalize_parsed(std::vector<Point> pts) {
  if (pts.size() < 2) throw parse_error("geometry needs at least 2 vertices");
  Polyline out;
  if (pts.size() >= 3 && pts.front() == pts.back()) {
    pts.pop_back();
    out.closed = true;
  }
  out.points = std::move(pts);
  try {
    validate_polyline(out);
  } catch (const std::invalid_argument& e) {
    throw parse_error(std::string("invalid geometry: ") + e.what());
  }
  if (out.closed && out.points.size() < 3) throw parse_error("ring needs at least 3 vertices");
  return out;
}

inline std::vector<Point> geojson_coordinates(const nlohmann::json& coords) {
  if (!coords.is_array()) throw parse_error("GeoJSON coordinates must be an array");
  std::vector<Point> pts;
  pts.reserve(coords.size());
  for (const auto& c : coords) {
    if (!c.is_array() || c.size() < 2 || !c[0].is_number() || !c[1].is_number())
      throw parse_error("GeoJSON coordinate must be a [x, y] number pair");
    pts.push_back({c[0].get<double>(), c[1].get<double>()});
  }
  return pts;
}

inline Polyline parse_geojson(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw parse_error(std::string("GeoJSON: ") + e.what(), 0, 0, e.byte);
  }
  const nlohmann::json* node = &doc;
  if (node->is_object() && node->value("type", "") == "FeatureCollection") {
    const auto it = node->find("features");
    if (it == node->end() || !it->is_array() || it->empty())
      throw parse_error("GeoJSON FeatureCollection has no features");
    node = &(*it)[0];
  }
  if (node->is_object() && node->value("type", "") == "Feature") {
    const auto it = node->find("geometry");
    if (it == node->end()) throw parse_error("GeoJSON Feature has no geometry");
    node = &*it;
  }
  if (!node->is_object()) throw parse_error("GeoJSON geometry must be an object");
  const std::string type = node->value("type", "");
  const auto coords = node->find("coordinates");
  if (coords == node->end()) throw parse_error("GeoJSON geometry has no coordinates");
  if (type == "LineString") {
    return finalize_parsed(geojson_coordinates(*coords));
  }
  if (type == "Polygon") {
    if (!coords->is_array() || coords->empty())
      throw parse_error("GeoJSON Polygon has no rings");
    // Exterior ring only.
    return finalize_parsed(geojson_coordinates((*coords)[0]));
  }
  throw parse_error("unsupported GeoJSON geometry type '" + type + "'");
}

inline Polyline parse_wkt(std::string_view text) {
  std::size_t i = 0;
  const auto fail = [&](const std::string& msg) -> parse_error {
    const auto [line, col] = line_column(text, i);
    return parse_error("WKT: " + msg, line, col);
  };
  const auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  skip_ws();
  std::string tag;
  while (i < text.size() && std::isalpha(static_cast<unsigned char>(text[i])))
    tag.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(text[i++]))));
  if (tag != "LINESTRING") throw fail("expected LINESTRING, got '" + tag + "'");
  skip_ws();
  if (text.compare(i, 5, "EMPTY") == 0) throw fail("LINESTRING EMPTY has no vertices");
  if (i >= text.size() || text[i] != '(') throw fail("expected '('");
  ++i;
  std::vector<Point> pts;
  while (true) {
    skip_ws();
    const auto read_number = [&]() -> double {
      const char* begin = text.data() + i;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) throw fail("expected a number");
      i += static_cast<std::size_t>(end - begin);
      return v;
    };
    const double x = read_number();
    skip_ws();
    const double y = read_number();
    pts.push_back({x, y});
    skip_ws();
    if (i < text.size() && text[i] == ',') {
      ++i;
      continue;
    }
    if (i < text.size() && text[i] == ')') {
      ++i;
      break;
    }
    throw fail("expected ',' or ')'");
  }
  skip_ws();
  if (i != text.size()) throw fail("trailing characters after LINESTRING");
  return finalize_parsed(std::move(pts));
}

inline Polyline parse_csv_xy(std::string_view text) {
  std::vector<Point> pts;
  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) {
      if (eol == text.size()) break;
      continue;
    }
    const std::string row(line);
    double x = 0.0, y = 0.0;
    char* end = nullptr;
    x = std::strtod(row.c_str(), &end);
    bool ok = end != row.c_str();
    if (ok) {
      while (*end == ' ' || *end == '\t') ++end;
      ok = *end == ',';
    }
    if (ok) {
      const char* ybegin = end + 1;
      char* yend = nullptr;
      y = std::strtod(ybegin, &yend);
      ok = yend != ybegin;
    }
    if (!ok) {
      // A single non-numeric leading row is accepted as a header.
      if (lineno == 1 && pts.empty()) {
        if (eol == text.size()) break;
        continue;
      }
      throw parse_error("CSV: expected 'x,y'", lineno);
    }
    pts.push_back({x, y});
    if (eol == text.size()) break;
  }
  return finalize_parsed(std::move(pts));
}

}  // namespace detail

inline Polyline parse_geometry_text(std::string_view text, GeometryFormat format) {
  switch (format) {
    case GeometryFormat::GeoJson: return detail::parse_geojson(text);
    case GeometryFormat::Wkt: return detail::parse_wkt(text);
    case GeometryFormat::CsvXy: return detail::parse_csv_xy(text);
  }
  throw std::invalid_argument("unknown geometry format");
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Polyline parse_geometry(const std::string& path, GeometryFormat format) {
  return parse_geometry_text(read_file(path), format);
}

/// Whitespace-separated list of numbers (the `ht` / `fit-powerlaw` input).
inline std::vector<double> parse_values_text(std::string_view text) {
  std::vector<double> values;
  std::size_t i = 0;
  std::size_t lineno = 1;
  while (i < text.size()) {
    const char c = text[i];
    if (c == '\n') {
      ++lineno;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c)) || c == ',') {
      ++i;
      continue;
    }
    const char* begin = text.data() + i;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) throw parse_error("expected a number", lineno);
    values.push_back(v);
    i += static_cast<std::size_t>(end - begin);
  }
  if (values.empty()) throw parse_error("no numbers found");
  return values;
}

inline std::vector<double> parse_values(const std::string& path) {
  return parse_values_text(read_file(path));
}

// ---------------------------------------------------------------------------
// Writers. Closed polylines are written with the first vertex repeated, which
// round-trips through the parsers' closure convention.
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<Point> with_closure(const Polyline& p) {
  std::vector<Point> pts = p.points;
  if (p.closed) pts.push_back(p.points.front());
  return pts;
}

}  // namespace detail

inline std::string to_csv(const Polyline& p) {
  std::string out = "x,y\n";
  for (const Point& q : detail::with_closure(p))
    out += detail::format_double(q.x) + "," + detail::format_double(q.y) + "\n";
  return out;
}

inline std::string to_wkt(const Polyline& p) {
  std::string out = "LINESTRING (";
  bool first = true;
  for (const Point& q : detail::with_closure(p)) {
    if (!first) out += ", ";
    out += detail::format_double(q.x) + " " + detail::format_double(q.y);
    first = false;
  }
  out += ")";
  return out;
}

inline std::string to_geojson(const Polyline& p) {
  nlohmann::ordered_json coords = nlohmann::ordered_json::array();
  for (const Point& q : detail::with_closure(p))
    coords.push_back(nlohmann::ordered_json::array({q.x, q.y}));
  nlohmann::ordered_json geometry;
  if (p.closed) {
    geometry = {{"type", "Polygon"}, {"coordinates", nlohmann::ordered_json::array({coords})}};
  } else {
    geometry = {{"type", "LineString"}, {"coordinates", coords}};
  }
  nlohmann::ordered_json feature = {
      {"type", "Feature"}, {"properties", nlohmann::ordered_json::object()}, {"geometry", geometry}};
  return feature.dump(2) + "\n";
}

inline std::string to_text(const Polyline& p, GeometryFormat format) {
  switch (format) {
    case GeometryFormat::GeoJson: return to_geojson(p);
    case GeometryFormat::Wkt: return to_wkt(p) + "\n";
    case GeometryFormat::CsvXy: return to_csv(p);
  }
  throw std::invalid_argument("unknown geometry format");
}

inline void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open '" + path + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw io_error("failed writing '" + path + "'");
}

inline void write_geometry(const Polyline& p, const std::string& path, GeometryFormat format) {
  write_file(path, to_text(p, format));
}

// ---------------------------------------------------------------------------
// Plot data. Plain CSV, one kind per file; consumed by external plotting.
// ---------------------------------------------------------------------------

/// rank,size rows, largest first.
inline std::string plot_rank_size(std::span<const double> values) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  std::string out = "rank,size\n";
  for (std::size_t i = 0; i < sorted.size(); ++i)
    out += std::to_string(i + 1) + "," + detail::format_double(sorted[i]) + "\n";
  return out;
}

/// x,ccdf rows with ccdf = P(X >= x), suitable for log-log plotting.
inline std::string plot_ccdf(std::span<const double> values) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  std::string out = "x,ccdf\n";
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double ccdf = (n - static_cast<double>(i)) / n;
    out += detail::format_double(sorted[i]) + "," + detail::format_double(ccdf) + "\n";
  }
  return out;
}

/// box_size,count rows of a box-counting ladder.
inline std::string plot_boxcount(const BoxCountEstimate& est) {
  std::string out = "box_size,count\n";
  for (const auto& level : est.levels)
    out += detail::format_double(level.box_size) + "," + std::to_string(level.count) + "\n";
  return out;
}

/// vertex,x,y,class rows, one per bend apex, for external recoloring of the
/// bend hierarchy.
inline std::string plot_classed_bends(const Polyline& curve, const BendDecomposition& d) {
  std::string out = "vertex,x,y,class\n";
  for (const Bend& b : d.bends) {
    const int v = d.chains[static_cast<std::size_t>(b.chain)][static_cast<std::size_t>(b.apex)];
    const Point q = curve.points[static_cast<std::size_t>(v)];
    out += std::to_string(v) + "," + detail::format_double(q.x) + "," +
           detail::format_double(q.y) + "," + std::to_string(b.cls) + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON report (schema 1). Field order is fixed, so identical analyses dump
// byte-identical text. NaN serializes as null.
// ---------------------------------------------------------------------------

inline nlohmann::ordered_json report_json(const AnalysisReport& r) {
  nlohmann::ordered_json j;
  j["schema"] = 1;
  j["curve_id"] = r.curve_id;
  j["n_vertices"] = r.n_vertices;
  j["n_bends"] = r.n_bends;
  j["ht_index"] = r.ht_index;
  j["recurrence_count"] = r.recurrence_count;
  j["is_fractal_def3"] = r.is_fractal_def3;
  if (std::isfinite(r.alpha)) j["alpha"] = r.alpha; else j["alpha"] = nullptr;
  if (std::isfinite(r.p)) j["p"] = r.p; else j["p"] = nullptr;
  j["box_dimension"] = r.box_dimension;
  j["r2"] = r.r2;
  j["seed"] = r.seed;
  j["head_tail"] = {{"breaks", r.head_tail.breaks},
                    {"class_counts", r.head_tail.class_counts},
                    {"head_limit", r.head_tail.head_limit}};
  if (std::isfinite(r.alpha)) {
    j["power_law"] = {{"xmin", r.power_law.xmin},     {"alpha", r.power_law.alpha},
                      {"ks", r.power_law.ks},         {"p", r.power_law.p},
                      {"n_tail", r.power_law.n_tail}, {"replicates", r.power_law.replicates}};
  } else {
    j["power_law"] = nullptr;
  }
  {
    nlohmann::ordered_json levels = nlohmann::ordered_json::array();
    for (const auto& level : r.boxes.levels)
      levels.push_back({{"box_size", level.box_size}, {"count", level.count}});
    j["box_counts"] = levels;
  }
  j["flags"] = r.flags;
  nlohmann::ordered_json params;
  for (const auto& [key, value] : r.parameters) params[key] = value;
  j["parameters"] = params;
  return j;
}

inline std::string report_json_text(const AnalysisReport& r) { return report_json(r).dump(2) + "\n"; }

}  // namespace fractline
