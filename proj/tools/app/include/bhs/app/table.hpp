#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "bhs/columns.hpp"

namespace bhs::app {

/// Column-labelled numeric table, the common output of every mode.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::size_t column_index(std::string_view name) const;  // throws std::out_of_range
};

/// t, witness columns, then `*_se` columns when the report has errors.
Table report_table(const CriteriaReport& report);

/// Stochastic table extended with ref_*, diff_* and z_* columns.
/// z is diff / se and NaN where the standard error vanishes.
Table compare_table(const CriteriaReport& stochastic, const CriteriaReport& reference);

/// Header row then one line per row, 17 significant digits, LF endings.
void write_csv(std::ostream& out, const Table& table);

/// One JSON object: resolved settings plus one array per column.
void write_json(std::ostream& out, const Table& table,
                const std::vector<std::pair<std::string, std::string>>& settings);

}  // namespace bhs::app
