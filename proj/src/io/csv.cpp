#include "dsa/io/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace dsa::io {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0) return "0";  // also folds -0
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

namespace {

// Metadata lines must stay single-line comments.
std::string one_line(const std::string& s) {
  std::string out = s;
  for (char& c : out)
    if (c == '\n' || c == '\r') c = ' ';
  return out;
}

}  // namespace

void emit_csv(const ResultTable& table, std::ostream& out) {
  for (const auto& [k, v] : table.metadata) out << "# " << one_line(k) << ": " << one_line(v) << '\n';
  for (const auto& w : table.warnings) out << "# warning: " << one_line(w) << '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i)
    out << (i ? "," : "") << csv_field(table.columns[i]);
  out << '\n';
  for (const auto& row : table.rows) {
    out << std::to_string(row.n);
    for (double v : row.values) out << ',' << format_number(v);
    out << '\n';
  }
}

std::string to_csv(const ResultTable& table) {
  std::ostringstream ss;
  emit_csv(table, ss);
  return ss.str();
}

void emit_csv(const ResultTable& table, const std::string& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorKind::io, "cannot open " + path + " for writing");
  f << to_csv(table);
  f.flush();
  if (!f) throw Error(ErrorKind::io, "write to " + path + " failed");
}

}  // namespace dsa::io
