#pragma once

#include <ostream>
#include <string>

#include "dsa/io/run.hpp"

namespace dsa::io {

// Shortest decimal that parses back to the same double; '.' regardless of locale.
std::string format_number(double v);

// Quotes a field when it holds a comma, quote, or line break.
std::string csv_field(const std::string& s);

std::string to_csv(const ResultTable& table);
void emit_csv(const ResultTable& table, std::ostream& out);
// Throws Error(io) when the file cannot be written.
void emit_csv(const ResultTable& table, const std::string& path);

}  // namespace dsa::io
