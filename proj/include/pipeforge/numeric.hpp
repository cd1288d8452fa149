#pragma once

#include <cstddef>
#include <vector>

#include "pipeforge/data.hpp"

namespace pipeforge {

// Row-major dense matrix used at the numeric boundary between tables and the
// scalers/extractors/learners.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> a;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0.0) {}

    double* row(std::size_t i) { return a.data() + i * cols; }
    const double* row(std::size_t i) const { return a.data() + i * cols; }
    double& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    double at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

// Requires an all-numeric NA-free table.
Matrix to_matrix(const DataTable& table, const char* who);

// Rebuilds a table from a matrix with the given column names.
DataTable from_matrix(const Matrix& m, const std::vector<std::string>& names);

// Quantile by linear interpolation on the sorted sample (R type 7).
double quantile_sorted(const std::vector<double>& sorted, double p);

struct Moments {
    std::size_t n = 0;
    double mean = 0.0;
    double var = 0.0;       // population variance
    double skewness = 0.0;  // 0 when undefined
    double kurtosis = 0.0;  // excess kurtosis, 0 when undefined
};
Moments column_moments(const std::vector<double>& values);

}  // namespace pipeforge
