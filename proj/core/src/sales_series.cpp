#include "diffusia/sales_series.hpp"

#include <stdexcept>
#include <utility>

namespace diffusia {

SalesSeries SalesSeries::from_instantaneous(std::array<std::string, 2> names,
                                            std::vector<double> sales1,
                                            std::vector<double> sales2) {
    if (sales1.size() != sales2.size()) {
        throw std::invalid_argument("SalesSeries: brand series lengths differ");
    }
    if (sales1.empty()) {
        throw std::invalid_argument("SalesSeries: empty series");
    }
    for (std::size_t i = 0; i < sales1.size(); ++i) {
        if (sales1[i] < 0.0 || sales2[i] < 0.0) {
            throw std::invalid_argument("SalesSeries: negative sales at month " +
                                        std::to_string(i + 1));
        }
    }

    SalesSeries s;
    s.brand_names = std::move(names);
    const std::size_t n = sales1.size();
    s.t.resize(n);
    s.cum1.resize(n);
    s.cum2.resize(n);
    double c1 = 0.0;
    double c2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        s.t[i] = static_cast<double>(i + 1);
        c1 += sales1[i];
        c2 += sales2[i];
        s.cum1[i] = c1;
        s.cum2[i] = c2;
    }
    s.sales1 = std::move(sales1);
    s.sales2 = std::move(sales2);
    return s;
}

SalesSeries SalesSeries::swapped() const {
    SalesSeries s = *this;
    std::swap(s.brand_names[0], s.brand_names[1]);
    std::swap(s.sales1, s.sales2);
    std::swap(s.cum1, s.cum2);
    return s;
}

} // namespace diffusia
