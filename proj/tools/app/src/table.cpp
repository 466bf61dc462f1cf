#include "bhs/app/table.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace bhs::app {
namespace {

std::vector<std::string> witness_names(std::string_view prefix, std::string_view suffix) {
  std::vector<std::string> out;
  for (auto name : kColumnNames) {
    out.push_back(std::string(prefix) + std::string(name) + std::string(suffix));
  }
  return out;
}

void append(std::vector<std::string>& to, const std::vector<std::string>& from) {
  to.insert(to.end(), from.begin(), from.end());
}

}  // namespace

std::size_t Table::column_index(std::string_view name) const {
  for (std::size_t k = 0; k < columns.size(); ++k) {
    if (columns[k] == name) return k;
  }
  throw std::out_of_range("no column '" + std::string(name) + "'");
}

Table report_table(const CriteriaReport& report) {
  Table t;
  t.columns.push_back("t");
  append(t.columns, witness_names("", ""));
  if (report.has_se()) append(t.columns, witness_names("", "_se"));
  for (std::size_t k = 0; k < report.size(); ++k) {
    std::vector<double> row{report.t[k]};
    row.insert(row.end(), report.value[k].begin(), report.value[k].end());
    if (report.has_se()) row.insert(row.end(), report.se[k].begin(), report.se[k].end());
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table compare_table(const CriteriaReport& stochastic, const CriteriaReport& reference) {
  if (stochastic.size() != reference.size() || !stochastic.has_se()) {
    throw std::invalid_argument("compare needs a stochastic report and a reference on one grid");
  }
  Table t = report_table(stochastic);
  append(t.columns, witness_names("ref_", ""));
  append(t.columns, witness_names("diff_", ""));
  append(t.columns, witness_names("z_", ""));
  for (std::size_t k = 0; k < stochastic.size(); ++k) {
    std::vector<double>& row = t.rows[k];
    const Row& v = stochastic.value[k];
    const Row& se = stochastic.se[k];
    const Row& ref = reference.value[k];
    Row diff{}, z{};
    for (std::size_t c = 0; c < kColumnCount; ++c) {
      diff[c] = v[c] - ref[c];
      z[c] = se[c] > 0.0 ? diff[c] / se[c] : std::numeric_limits<double>::quiet_NaN();
    }
    row.insert(row.end(), ref.begin(), ref.end());
    row.insert(row.end(), diff.begin(), diff.end());
    row.insert(row.end(), z.begin(), z.end());
  }
  return t;
}

void write_csv(std::ostream& out, const Table& table) {
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    out << (c ? "," : "") << table.columns[c];
  }
  out << '\n';
  char buf[32];
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      // print -0 as 0
      std::snprintf(buf, sizeof buf, "%.17g", row[c] == 0.0 ? 0.0 : row[c]);
      out << (c ? "," : "") << buf;
    }
    out << '\n';
  }
}

void write_json(std::ostream& out, const Table& table,
                const std::vector<std::pair<std::string, std::string>>& settings) {
  nlohmann::ordered_json doc;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  for (const auto& [k, v] : settings) {
    double num = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), num);
    if (ec == std::errc() && ptr == v.data() + v.size()) {
      config[k] = num;
    } else {
      config[k] = v;
    }
  }
  doc["config"] = std::move(config);
  nlohmann::ordered_json columns = nlohmann::ordered_json::object();
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    nlohmann::ordered_json col = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
      // JSON has no NaN; null marks undefined entries
      if (std::isfinite(row[c])) {
        col.push_back(row[c]);
      } else {
        col.push_back(nullptr);
      }
    }
    columns[table.columns[c]] = std::move(col);
  }
  doc["columns"] = std::move(columns);
  out << doc.dump(1) << '\n';
}

}  // namespace bhs::app
