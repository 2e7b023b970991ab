#pragma once

// System files, CSV tables and provenance sidecars.
//
// A system file holds '#' comment lines, one JSON header object such as
// {"n": 3, "name": "conic"}, then one polynomial per line written as a JSON
// list of [coefficient, [e_1, ..., e_n]] terms. Coefficients are JSON
// integers or decimal strings for values beyond 64 bits.

#include <charconv>
#include <cstdio>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "vdc/errors.hpp"
#include "vdc/system.hpp"

namespace vdc {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kSidecarSchema = 1;

class ParseError : public InvalidInput {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : InvalidInput("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

struct SystemFile {
  std::size_t n = 0;
  std::string name;
  std::vector<unsigned> expected_degrees;  // optional "degrees" header entry
  PolySystem system;
};

namespace detail {

inline Integer parse_coefficient(const nlohmann::json& c, std::size_t line) {
  if (c.is_number_integer()) return c.is_number_unsigned() ? Integer(c.get<std::uint64_t>()) : Integer(c.get<std::int64_t>());
  if (c.is_string()) {
    const auto s = c.get<std::string>();
    const std::size_t start = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (s.size() == start || s.find_first_not_of("0123456789", start) != std::string::npos)
      throw ParseError(line, 1, "coefficient string '" + s + "' is not an integer");
    return Integer(s);
  }
  throw ParseError(line, 1, "coefficient must be an integer or a decimal string");
}

inline nlohmann::json parse_json_line(const std::string& text, std::size_t line) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(line, e.byte == 0 ? 1 : e.byte, "syntax error");
  }
}

}  // namespace detail

inline SystemFile parse_system_text(const std::string& text) {
  SystemFile out;
  std::istringstream in(text);
  std::string raw;
  std::size_t line = 0;
  bool have_header = false;
  std::vector<Polynomial> polys;
  while (std::getline(in, raw)) {
    ++line;
    const auto first = raw.find_first_not_of(" \t\r");
    if (first == std::string::npos || raw[first] == '#') continue;
    const nlohmann::json j = detail::parse_json_line(raw, line);
    if (!have_header) {
      if (!j.is_object() || !j.contains("n") || !j["n"].is_number_unsigned())
        throw ParseError(line, first + 1, "expected header object with a non-negative integer \"n\"");
      out.n = j["n"].get<std::size_t>();
      if (j.contains("name")) out.name = j["name"].get<std::string>();
      if (j.contains("degrees")) out.expected_degrees = j["degrees"].get<std::vector<unsigned>>();
      have_header = true;
      continue;
    }
    if (!j.is_array()) throw ParseError(line, first + 1, "expected a list of [coefficient, exponents] terms");
    Polynomial f(out.n);
    for (const auto& term : j) {
      if (!term.is_array() || term.size() != 2 || !term[1].is_array())
        throw ParseError(line, first + 1, "each term must be [coefficient, [exponents]]");
      if (term[1].size() != out.n)
        throw ParseError(line, first + 1,
                         "exponent vector has " + std::to_string(term[1].size()) + " entries, expected " + std::to_string(out.n));
      std::vector<unsigned> e;
      for (const auto& v : term[1]) {
        if (!v.is_number_unsigned()) throw ParseError(line, first + 1, "exponents must be non-negative integers");
        e.push_back(v.get<unsigned>());
      }
      f.add_term(Monomial(std::move(e)), detail::parse_coefficient(term[0], line));
    }
    const Degree d = f.degree();
    if (!d || *d <= 1) throw ParseError(line, first + 1, "member has degree <= 1");
    polys.push_back(std::move(f));
  }
  if (!have_header) throw ParseError(line == 0 ? 1 : line, 1, "missing header");
  if (polys.empty()) throw ParseError(line, 1, "system has no polynomials");
  out.system = PolySystem(out.n, std::move(polys));
  if (!out.expected_degrees.empty() && out.expected_degrees != out.system.multidegree())
    throw InvalidInput("degrees in header do not match the polynomials");
  return out;
}

inline SystemFile parse_system(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_system_text(buf.str());
}

/// Canonical text: header, then terms in descending grevlex order.
inline std::string emit_system(const PolySystem& s, const std::string& name = "") {
  std::ostringstream out;
  nlohmann::ordered_json h;
  h["n"] = s.nvars();
  if (!name.empty()) h["name"] = name;
  out << h.dump() << "\n";
  for (const auto& f : s.polys()) {
    out << "[";
    bool first = true;
    for (const auto& [m, c] : f.terms()) {
      out << (first ? "" : ",") << "[";
      first = false;
      if (c >= std::numeric_limits<std::int64_t>::min() && c <= std::numeric_limits<std::int64_t>::max())
        out << c.str();
      else
        out << "\"" << c.str() << "\"";
      out << ",[";
      for (std::size_t i = 0; i < m.nvars(); ++i) out << (i ? "," : "") << m[i];
      out << "]]";
    }
    out << "]\n";
  }
  return out.str();
}

/// FNV-1a over the canonical text.
inline std::string system_hash(const PolySystem& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : emit_system(s)) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

/// Shortest round-trip decimal form.
inline std::string format_double(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  void add(std::vector<std::string> row) {
    if (row.size() != columns_.size()) throw InvalidInput("CSV row width mismatch");
    rows_.push_back(std::move(row));
  }

  const std::vector<std::string>& columns() const { return columns_; }
  std::size_t size() const { return rows_.size(); }

  std::string str() const {
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "," : "") + quote(cells[i]);
      out += "\n";
    };
    line(columns_);
    for (const auto& r : rows_) line(r);
    return out;
  }

 private:
  static std::string quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  }

  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace vdc
