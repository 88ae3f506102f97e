#include "diffusia/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace diffusia {

namespace {

constexpr std::size_t kMinRows = 24;

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(cell);
            cell.clear();
        } else if (c != '\r') {
            cell += c;
        }
    }
    cells.push_back(cell);
    return cells;
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t");
    std::size_t b = s.find_last_not_of(" \t");
    if (a == std::string::npos) return "";
    return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(const std::string& source, std::size_t row, const std::string& message) {
    throw ValidationError(source + ": row " + std::to_string(row) + ": " + message);
}

double parse_number(const std::string& source, std::size_t row, const std::string& column,
                    const std::string& cell) {
    const std::string v = trim(cell);
    if (v.empty()) fail(source, row, "empty cell in column '" + column + "'");
    try {
        std::size_t pos = 0;
        const double value = std::stod(v, &pos);
        if (pos != v.size()) {
            fail(source, row, "non-numeric cell '" + cell + "' in column '" + column + "'");
        }
        if (!std::isfinite(value)) {
            fail(source, row, "non-finite value in column '" + column + "'");
        }
        return value;
    } catch (const ValidationError&) {
        throw;
    } catch (const std::exception&) {
        fail(source, row, "non-numeric cell '" + cell + "' in column '" + column + "'");
    }
}

// ISO YYYY-MM -> months since year 0. Returns false on malformed input.
bool parse_iso_month(const std::string& cell, long& month_index) {
    const std::string v = trim(cell);
    if (v.size() != 7 || v[4] != '-') return false;
    int year = 0;
    int month = 0;
    auto [p1, e1] = std::from_chars(v.data(), v.data() + 4, year);
    auto [p2, e2] = std::from_chars(v.data() + 5, v.data() + 7, month);
    if (e1 != std::errc{} || e2 != std::errc{} || p1 != v.data() + 4 || p2 != v.data() + 7) {
        return false;
    }
    if (month < 1 || month > 12) return false;
    month_index = 12L * year + (month - 1);
    return true;
}

} // namespace

SalesSeries ingest_sales_csv(std::istream& in, const std::string& source_name) {
    std::string line;
    if (!std::getline(in, line)) {
        throw ValidationError(source_name + ": empty file");
    }
    // Strip a UTF-8 BOM if present.
    if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF &&
        static_cast<unsigned char>(line[1]) == 0xBB &&
        static_cast<unsigned char>(line[2]) == 0xBF) {
        line.erase(0, 3);
    }

    const auto header = split_csv_line(line);
    if (header.size() != 3) {
        fail(source_name, 1, "expected 3 columns 't,<brand1>,<brand2>', got " +
                                 std::to_string(header.size()));
    }
    const std::string time_column = trim(header[0]);
    const bool iso_months = (time_column == "month");
    if (!iso_months && time_column != "t") {
        fail(source_name, 1, "first column must be 't' or 'month', got '" + header[0] + "'");
    }
    const std::string name1 = trim(header[1]);
    const std::string name2 = trim(header[2]);

    std::vector<double> sales1;
    std::vector<double> sales2;
    long previous_month = 0;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) {
            fail(source_name, row, "blank line");
        }
        const auto cells = split_csv_line(line);
        if (cells.size() != 3) {
            fail(source_name, row, "expected 3 cells, got " + std::to_string(cells.size()));
        }

        const std::size_t index = sales1.size();  // months read so far
        if (iso_months) {
            long month_index = 0;
            if (!parse_iso_month(cells[0], month_index)) {
                fail(source_name, row, "malformed ISO month '" + cells[0] + "' (want YYYY-MM)");
            }
            if (index == 0) {
                previous_month = month_index;
            } else if (month_index != previous_month + 1) {
                fail(source_name, row, "non-consecutive month '" + cells[0] + "'");
            } else {
                previous_month = month_index;
            }
        } else {
            const double t = parse_number(source_name, row, time_column, cells[0]);
            const double expected = static_cast<double>(index + 1);
            if (t != expected) {
                fail(source_name, row,
                     "t must be consecutive from 1; expected " + std::to_string(index + 1) +
                         ", got '" + cells[0] + "'");
            }
        }

        const double v1 = parse_number(source_name, row, name1, cells[1]);
        const double v2 = parse_number(source_name, row, name2, cells[2]);
        if (v1 < 0.0) fail(source_name, row, "negative sales in column '" + name1 + "'");
        if (v2 < 0.0) fail(source_name, row, "negative sales in column '" + name2 + "'");
        sales1.push_back(v1);
        sales2.push_back(v2);
    }

    if (sales1.size() < kMinRows) {
        throw ValidationError(source_name + ": needs at least " + std::to_string(kMinRows) +
                              " rows, got " + std::to_string(sales1.size()));
    }
    return SalesSeries::from_instantaneous({name1, name2}, std::move(sales1), std::move(sales2));
}

SalesSeries ingest_sales_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open input file: " + path.string());
    }
    return ingest_sales_csv(in, path.filename().string());
}

} // namespace diffusia
