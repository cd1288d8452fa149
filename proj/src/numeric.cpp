#include "pipeforge/numeric.hpp"

#include <cmath>
#include <string>

namespace pipeforge {

Matrix to_matrix(const DataTable& table, const char* who) {
    Matrix m(table.n_rows(), table.n_cols());
    for (std::size_t j = 0; j < table.n_cols(); ++j) {
        const Column& c = table.col(j);
        if (c.kind() != ColumnKind::Numeric)
            throw DataError(std::string(who) + ": column '" + c.name() + "' is categorical");
        for (std::size_t i = 0; i < table.n_rows(); ++i) {
            if (c.is_na(i))
                throw DataError(std::string(who) + ": column '" + c.name() + "' has an NA cell");
            m.at(i, j) = c.num(i);
        }
    }
    return m;
}

DataTable from_matrix(const Matrix& m, const std::vector<std::string>& names) {
    std::vector<Column> cols;
    cols.reserve(m.cols);
    for (std::size_t j = 0; j < m.cols; ++j) {
        std::vector<double> v(m.rows);
        for (std::size_t i = 0; i < m.rows; ++i) v[i] = m.at(i, j);
        cols.push_back(Column::numeric(names[j], std::move(v)));
    }
    if (cols.empty()) return DataTable(m.rows);
    return DataTable(std::move(cols));
}

double quantile_sorted(const std::vector<double>& sorted, double p) {
    const std::size_t n = sorted.size();
    if (n == 0) return 0.0;
    if (n == 1) return sorted[0];
    double h = p * static_cast<double>(n - 1);
    std::size_t lo = static_cast<std::size_t>(h);
    if (lo >= n - 1) return sorted[n - 1];
    double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

Moments column_moments(const std::vector<double>& values) {
    Moments m;
    m.n = values.size();
    if (m.n == 0) return m;
    double s = 0.0;
    for (double v : values) s += v;
    m.mean = s / static_cast<double>(m.n);
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : values) {
        double d = v - m.mean;
        double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    double n = static_cast<double>(m.n);
    m2 /= n;
    m3 /= n;
    m4 /= n;
    m.var = m2;
    if (m2 > 1e-300) {
        m.skewness = m3 / std::pow(m2, 1.5);
        m.kurtosis = m4 / (m2 * m2) - 3.0;
    }
    return m;
}

}  // namespace pipeforge
