#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace diffusia {

/**
 * Monthly per-brand sales: instantaneous packages/month observed on the grid
 * t = 1..N months since launch, plus the derived cumulative series.
 */
struct SalesSeries {
    std::array<std::string, 2> brand_names{"brand1", "brand2"};
    std::vector<double> t;       // 1..N
    std::vector<double> sales1;  // instantaneous
    std::vector<double> sales2;
    std::vector<double> cum1;    // running sums
    std::vector<double> cum2;

    std::size_t months() const { return t.size(); }

    /**
     * Builds the series from instantaneous sales, deriving t = 1..N and the
     * cumulative columns. Throws std::invalid_argument on length mismatch or
     * negative sales.
     */
    static SalesSeries from_instantaneous(std::array<std::string, 2> names,
                                          std::vector<double> sales1,
                                          std::vector<double> sales2);

    /// Swaps the two brand columns (names included).
    SalesSeries swapped() const;
};

} // namespace diffusia
