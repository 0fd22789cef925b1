#pragma once

#include <string>
#include <utility>
#include <vector>

#include "dsa/io/config.hpp"

namespace dsa::io {

struct ResultRow {
  long n;
  std::vector<double> values;
};

// Column 0 is always "n"; every row carries one value per remaining column.
struct ResultTable {
  std::vector<std::string> columns;
  std::vector<ResultRow> rows;
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> warnings;

  void add_row(long n, std::vector<double> values);
  void meta(const std::string& key, const std::string& value);
  void meta(const std::string& key, double value);
  // Value of a metadata key, empty if absent.
  std::string find_meta(const std::string& key) const;
  // Column values by name.
  std::vector<double> column(const std::string& name) const;
};

// Dispatches the configured command. Module errors are rethrown with the command prefixed.
ResultTable run(const RunConfig& cfg);

}  // namespace dsa::io
