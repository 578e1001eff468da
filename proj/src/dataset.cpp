#include "qecbound/dataset.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace qecbound {

ScenarioDataset::ScenarioDataset(std::vector<std::string> columns) : columns_(std::move(columns)) {
    meta = nlohmann::json::object();
}

void ScenarioDataset::add_row(std::vector<Cell> row) {
    if (row.size() != columns_.size()) {
        throw std::invalid_argument("row has " + std::to_string(row.size()) + " cells, expected " +
                                    std::to_string(columns_.size()));
    }
    rows_.push_back(std::move(row));
}

std::size_t ScenarioDataset::column_index(std::string_view name) const {
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        if (columns_[i] == name) {
            return i;
        }
    }
    throw std::out_of_range("no column named '" + std::string(name) + "'");
}

const Cell &ScenarioDataset::cell(std::size_t row, std::string_view column) const {
    return rows_.at(row).at(column_index(column));
}

double ScenarioDataset::number(std::size_t row, std::string_view column) const {
    const Cell &c = cell(row, column);
    if (std::holds_alternative<double>(c)) return std::get<double>(c);
    if (std::holds_alternative<std::int64_t>(c)) return static_cast<double>(std::get<std::int64_t>(c));
    if (std::holds_alternative<std::monostate>(c)) return std::nan("");
    throw std::invalid_argument("column '" + std::string(column) + "' is not numeric");
}

std::string format_number(double x) {
    if (std::isnan(x)) {
        return "";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void ScenarioDataset::write_csv(std::ostream &out) const {
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        out << (i ? "," : "") << columns_[i];
    }
    out << '\n';
    for (const auto &row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            std::visit(
                [&out](const auto &v) {
                    using T = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<T, double>) {
                        out << format_number(v);
                    } else if constexpr (std::is_same_v<T, std::int64_t>) {
                        out << v;
                    } else if constexpr (std::is_same_v<T, std::string>) {
                        out << v;
                    }
                },
                row[i]);
        }
        out << '\n';
    }
}

void ScenarioDataset::write_csv(const std::string &path) const {
    std::ofstream f(path);
    if (!f) {
        throw std::runtime_error("cannot open " + path + " for writing");
    }
    write_csv(f);
    if (!f) {
        throw std::runtime_error("write to " + path + " failed");
    }
}

}  // namespace qecbound
