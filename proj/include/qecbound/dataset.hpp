#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

namespace qecbound {

// Empty cells and NaN doubles serialize as blank CSV fields.
using Cell = std::variant<std::monostate, double, std::int64_t, std::string>;

class ScenarioDataset {
  public:
    ScenarioDataset() = default;
    explicit ScenarioDataset(std::vector<std::string> columns);

    const std::vector<std::string> &columns() const { return columns_; }
    const std::vector<std::vector<Cell>> &rows() const { return rows_; }
    std::size_t size() const { return rows_.size(); }

    void add_row(std::vector<Cell> row);
    std::size_t column_index(std::string_view name) const;
    // Numeric view of a cell; blank cells give NaN, strings throw.
    double number(std::size_t row, std::string_view column) const;
    const Cell &cell(std::size_t row, std::string_view column) const;

    nlohmann::json meta;

    void write_csv(std::ostream &out) const;
    void write_csv(const std::string &path) const;

  private:
    std::vector<std::string> columns_;
    std::vector<std::vector<Cell>> rows_;
};

// 17 significant digits; NaN gives an empty field.
std::string format_number(double x);

}  // namespace qecbound
