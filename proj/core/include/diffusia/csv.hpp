#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>

#include "diffusia/sales_series.hpp"

namespace diffusia {

/// Input-validation failure with a row/column-locating message.
class ValidationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/**
 * Reads monthly two-brand sales from CSV. The header must be
 * `t,<name1>,<name2>` with t = 1..N consecutive integers, or
 * `month,<name1>,<name2>` with consecutive ISO YYYY-MM months
 * (auto-converted to t = 1..N). Requires at least 24 rows, nonnegative
 * numeric sales, UTF-8, comma separators. Violations raise ValidationError
 * naming the offending row (1-based, header = row 1) and column.
 */
SalesSeries ingest_sales_csv(std::istream& in, const std::string& source_name = "<stream>");
SalesSeries ingest_sales_csv(const std::filesystem::path& path);

} // namespace diffusia
