#include "framescale/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

#include "framescale/rng.hpp"

namespace framescale {

namespace {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", ch);
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

double parse_cell(std::string_view cell, std::size_t row, std::size_t col) {
  const auto t = trim(cell);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty())
    throw ParseError("row " + std::to_string(row) + ", column " + std::to_string(col) +
                     ": cannot parse '" + std::string(t) + "' as a number");
  return value;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(s.substr(start));
      break;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return parts;
}

void check_columns(const FrameDocument& doc) {
  for (std::size_t j = 0; j < doc.columns.size(); ++j) {
    double norm = 0.0;
    for (double v : doc.columns[j]) {
      if (!std::isfinite(v))
        throw ParseError("column v" + std::to_string(j + 1) + " has a non-finite entry");
      norm += v * v;
    }
    if (norm <= 0.0) throw ParseError("column v" + std::to_string(j + 1) + " has zero norm");
  }
}

FrameDocument parse_csv(std::string_view bytes) {
  std::vector<std::string_view> lines;
  for (auto line : split(bytes, '\n')) {
    if (!trim(line).empty()) lines.push_back(line);
  }
  if (lines.empty()) throw ParseError("empty CSV input");

  const auto header = split(lines[0], ',');
  const std::size_t m = header.size();
  for (std::size_t j = 0; j < m; ++j) {
    const std::string expected = "v" + std::to_string(j + 1);
    if (trim(header[j]) != expected)
      throw ParseError("header cell " + std::to_string(j + 1) + " must be '" + expected + "'");
  }

  FrameDocument doc;
  doc.count = m;
  doc.dim = lines.size() - 1;
  if (doc.dim == 0) throw ParseError("CSV input has no data rows");
  doc.columns.assign(m, std::vector<double>(doc.dim));
  for (std::size_t i = 0; i < doc.dim; ++i) {
    const auto cells = split(lines[i + 1], ',');
    if (cells.size() != m)
      throw ParseError("row " + std::to_string(i + 2) + " has " + std::to_string(cells.size()) +
                       " cells, expected " + std::to_string(m));
    for (std::size_t j = 0; j < m; ++j) doc.columns[j][i] = parse_cell(cells[j], i + 2, j + 1);
  }
  check_columns(doc);
  return doc;
}

FrameDocument parse_json(std::string_view bytes) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(bytes);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("frame document must be a JSON object");

  FrameDocument doc;
  if (!j.contains("formatVersion") || !j["formatVersion"].is_string())
    throw ParseError("missing string field 'formatVersion'");
  doc.format_version = j["formatVersion"].get<std::string>();
  if (doc.format_version != "1")
    throw ParseError("unrecognized formatVersion '" + doc.format_version + "'");

  if (!j.contains("dim") || !j["dim"].is_number_unsigned())
    throw ParseError("missing positive integer field 'dim'");
  if (!j.contains("count") || !j["count"].is_number_unsigned())
    throw ParseError("missing positive integer field 'count'");
  doc.dim = j["dim"].get<std::size_t>();
  doc.count = j["count"].get<std::size_t>();

  if (!j.contains("columns") || !j["columns"].is_array())
    throw ParseError("missing array field 'columns'");
  const auto& cols = j["columns"];
  if (cols.size() != doc.count)
    throw ParseError("'columns' has " + std::to_string(cols.size()) + " entries, expected " +
                     std::to_string(doc.count));
  doc.columns.resize(doc.count);
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (!cols[c].is_array() || cols[c].size() != doc.dim)
      throw ParseError("column v" + std::to_string(c + 1) + " must be an array of length " +
                       std::to_string(doc.dim));
    for (const auto& cell : cols[c]) {
      if (!cell.is_number())
        throw ParseError("column v" + std::to_string(c + 1) + " has a non-numeric entry");
      doc.columns[c].push_back(cell.get<double>());
    }
  }
  if (j.contains("metadata")) {
    if (!j["metadata"].is_object()) throw ParseError("'metadata' must be an object");
    for (const auto& [key, value] : j["metadata"].items()) {
      if (!value.is_string()) throw ParseError("metadata value for '" + key + "' must be a string");
      doc.metadata[key] = value.get<std::string>();
    }
  }
  check_columns(doc);
  return doc;
}

}  // namespace

FrameMatrix FrameDocument::to_frame() const {
  try {
    return FrameMatrix::from_columns(columns);
  } catch (const Error& e) {
    throw ParseError(e.what());
  }
}

FrameDocument parse_frame_document(std::string_view bytes, FrameFormat format) {
  return format == FrameFormat::kCsv ? parse_csv(bytes) : parse_json(bytes);
}

FrameMatrix parse_frame(std::string_view bytes, FrameFormat format) {
  return parse_frame_document(bytes, format).to_frame();
}

std::string serialize_frame(const FrameMatrix& frame, FrameFormat format,
                            const std::map<std::string, std::string>& metadata) {
  std::ostringstream out;
  if (format == FrameFormat::kCsv) {
    for (std::size_t j = 0; j < frame.count(); ++j) {
      if (j) out << ',';
      out << 'v' << (j + 1);
    }
    out << '\n';
    for (std::size_t i = 0; i < frame.dim(); ++i) {
      for (std::size_t j = 0; j < frame.count(); ++j) {
        if (j) out << ',';
        out << format_number(frame.entry(i, j));
      }
      out << '\n';
    }
    return out.str();
  }

  out << "{\n";
  out << "  \"formatVersion\": \"1\",\n";
  out << "  \"dim\": " << frame.dim() << ",\n";
  out << "  \"count\": " << frame.count() << ",\n";
  out << "  \"columns\": [\n";
  for (std::size_t j = 0; j < frame.count(); ++j) {
    out << "    [";
    for (std::size_t i = 0; i < frame.dim(); ++i) {
      if (i) out << ", ";
      out << format_number(frame.entry(i, j));
    }
    out << (j + 1 < frame.count() ? "],\n" : "]\n");
  }
  out << "  ]";
  if (!metadata.empty()) {
    out << ",\n  \"metadata\": {";
    bool first = true;
    for (const auto& [key, value] : metadata) {
      if (!first) out << ", ";
      first = false;
      out << '"' << json_escape(key) << "\": \"" << json_escape(value) << '"';
    }
    out << "}";
  }
  out << "\n}\n";
  return out.str();
}

namespace {

struct BuiltinName {
  std::string base;
  std::map<std::string, std::string> args;
};

BuiltinName parse_builtin_name(const std::string& name) {
  BuiltinName parsed;
  const auto open = name.find('(');
  if (open == std::string::npos) {
    parsed.base = name;
    return parsed;
  }
  if (name.back() != ')')
    throw ValidationError("malformed builtin name '" + name + "': missing ')'");
  parsed.base = name.substr(0, open);
  const std::string inner = name.substr(open + 1, name.size() - open - 2);
  if (inner.empty()) return parsed;
  for (auto part : split(inner, ',')) {
    const auto eq = part.find('=');
    if (eq == std::string_view::npos)
      throw ValidationError("malformed builtin argument '" + std::string(part) +
                            "': expected key=value");
    parsed.args[std::string(trim(part.substr(0, eq)))] = std::string(trim(part.substr(eq + 1)));
  }
  return parsed;
}

double arg_double(const BuiltinName& n, const std::string& key, double fallback) {
  const auto it = n.args.find(key);
  if (it == n.args.end()) return fallback;
  try {
    return std::stod(it->second);
  } catch (const std::exception&) {
    throw ValidationError("builtin argument '" + key + "' is not a number: " + it->second);
  }
}

std::size_t arg_size(const BuiltinName& n, const std::string& key, std::size_t fallback) {
  const double v = arg_double(n, key, static_cast<double>(fallback));
  if (v < 0 || v != std::floor(v))
    throw ValidationError("builtin argument '" + key + "' must be a nonnegative integer");
  return static_cast<std::size_t>(v);
}

FrameMatrix orthonormal_basis(std::size_t n) {
  std::vector<std::vector<double>> cols(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) cols[i][i] = 1.0;
  return FrameMatrix::from_columns(cols);
}

FrameMatrix mercedes_frame() {
  // unit vectors at 90, 210 and 330 degrees
  const double s3 = std::sqrt(3.0) / 2.0;
  return FrameMatrix::from_columns({{0.0, 1.0}, {-s3, -0.5}, {s3, -0.5}});
}

FrameMatrix op_nonunique_frame() {
  const double r = 1.0 / std::sqrt(2.0);
  return FrameMatrix::from_columns({{1.0, r, 0.0}, {r, 1.0, 0.0}, {0.0, 0.0, 1.0}});
}

FrameMatrix projection_example_frame() {
  return FrameMatrix::from_columns({{1.0, 0.0, 0.0}, {1.0, 1.0, 0.0}, {1.0, 0.0, 1.0}});
}

// Unit-norm family whose Frobenius-optimal operator is singular: the solve
// F c = g puts all weight on the first two vectors, which span only a plane.
FrameMatrix frob_singular_frame(double a, std::size_t n) {
  if (n < 3) throw ValidationError("frob-singular needs dimension n >= 3");
  if (!(a > 0.0) || !(a < 1.0 / std::sqrt(2.0)))
    throw ValidationError("frob-singular needs 0 < a < 1/sqrt(2) so that a < b");
  const double b = std::sqrt(1.0 - a * a);
  const double ab = a + b;
  const double c2 = (1.0 + a * a) / (1.0 + ab * ab);
  const double c = std::sqrt(c2);
  const double tail = std::sqrt(1.0 - 2.0 * c2);

  std::vector<std::vector<double>> cols;
  std::vector<double> v(n, 0.0);
  v[0] = 1.0;
  cols.push_back(v);
  std::fill(v.begin(), v.end(), 0.0);
  v[0] = a;
  v[1] = b;
  cols.push_back(v);
  for (std::size_t i = 2; i < n; ++i) {
    std::fill(v.begin(), v.end(), 0.0);
    v[0] = c;
    v[1] = c;
    v[i] = tail;
    cols.push_back(v);
  }
  return FrameMatrix::from_columns(cols);
}

FrameMatrix e1e2e1_frame() {
  return FrameMatrix::from_columns({{1.0, 0.0}, {0.0, 1.0}, {1.0, 0.0}});
}

FrameMatrix nonscalable2_frame() {
  const double r = 1.0 / std::sqrt(2.0);
  return FrameMatrix::from_columns({{1.0, 0.0}, {r, r}});
}

}  // namespace

FrameMatrix builtin_frame(const std::string& name) {
  const auto parsed = parse_builtin_name(name);
  const auto& base = parsed.base;

  if (base.rfind("onb", 0) == 0 && base.size() > 3) {
    const std::string digits = base.substr(3);
    if (std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      const auto n = static_cast<std::size_t>(std::stoul(digits));
      if (n == 0 || n > 64) throw ValidationError("onb size must be between 1 and 64");
      return orthonormal_basis(n);
    }
  }
  if (base == "mercedes") return mercedes_frame();
  if (base == "example-op-nonunique") return op_nonunique_frame();
  if (base == "projection-example") return projection_example_frame();
  if (base == "frob-singular")
    return frob_singular_frame(arg_double(parsed, "a", 0.6), arg_size(parsed, "n", 4));
  if (base == "near-degenerate")
    return near_degenerate_frame(arg_size(parsed, "n", 2), arg_size(parsed, "m", 2),
                                 arg_double(parsed, "delta", 0.05),
                                 arg_size(parsed, "seed", 1));
  if (base == "e1e2e1") return e1e2e1_frame();
  if (base == "nonscalable2") return nonscalable2_frame();

  std::string listing;
  for (const auto& candidate : builtin_frame_names()) {
    if (!listing.empty()) listing += ", ";
    listing += candidate;
  }
  throw ValidationError("unknown builtin frame '" + name + "'; available: " + listing);
}

std::vector<std::string> builtin_frame_names() {
  return {"onb<N>",
          "mercedes",
          "example-op-nonunique",
          "projection-example",
          "frob-singular(a=0.6,n=4)",
          "near-degenerate(delta=0.05,n=2,m=2,seed=1)",
          "e1e2e1",
          "nonscalable2"};
}

FrameMatrix random_unit_frame(std::size_t dim, std::size_t count, std::uint64_t seed) {
  if (dim == 0 || count == 0) throw ValidationError("frame dimensions must be positive");
  SeededRng rng(seed);
  std::vector<std::vector<double>> cols(count, std::vector<double>(dim));
  for (auto& col : cols) {
    double norm = 0.0;
    do {
      for (double& x : col) x = rng.normal();
      norm = norm2(col);
    } while (norm < 1e-12);
    for (double& x : col) x /= norm;
  }
  return FrameMatrix::from_columns(cols);
}

FrameMatrix near_degenerate_frame(std::size_t dim, std::size_t count, double delta,
                                  std::uint64_t seed) {
  if (dim == 0 || count == 0) throw ValidationError("frame dimensions must be positive");
  if (!(delta > 0.0)) throw ValidationError("delta must be positive");
  SeededRng rng(seed);
  std::vector<std::vector<double>> cols;
  cols.reserve(count);
  std::vector<double> v(dim, 0.0);
  v[0] = 1.0;
  cols.push_back(v);
  for (std::size_t j = 1; j < count; ++j) {
    std::fill(v.begin(), v.end(), 0.0);
    v[0] = 1.0;
    if (j < dim) {
      v[j] = delta;
    } else {
      std::vector<double> u(dim);
      double norm = 0.0;
      do {
        for (double& x : u) x = rng.normal();
        norm = norm2(u);
      } while (norm < 1e-12);
      for (std::size_t i = 0; i < dim; ++i) v[i] += delta * u[i] / norm;
    }
    const double norm = norm2(v);
    for (double& x : v) x /= norm;
    cols.push_back(v);
  }
  return FrameMatrix::from_columns(cols);
}

FrameMatrix extend_within_cone(const FrameMatrix& frame, std::size_t extra, std::uint64_t seed) {
  SeededRng rng(seed);
  std::vector<std::vector<double>> cols;
  cols.reserve(frame.count() + extra);
  for (std::size_t j = 0; j < frame.count(); ++j) cols.push_back(frame.column(j));
  for (std::size_t k = 0; k < extra; ++k) {
    const auto idx = static_cast<std::size_t>(rng.below(frame.count()));
    const double scale_factor = 0.5 + rng.uniform();
    auto copy = frame.column(idx);
    for (double& x : copy) x *= scale_factor;
    cols.push_back(std::move(copy));
  }
  return FrameMatrix::from_columns(cols);
}

}  // namespace framescale
