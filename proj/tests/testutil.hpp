#pragma once

#include <string>
#include <vector>

#include "pipeforge/common.hpp"
#include "pipeforge/data.hpp"
#include "pipeforge/expr.hpp"

namespace testutil {

using namespace pipeforge;

struct Dataset {
    DataTable table;
    TargetVector target;
};

// two well-separated 2-D Gaussian classes
inline Dataset two_gaussians(std::size_t n, double center_distance, double sigma,
                             std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> x1(n), x2(n);
    std::vector<std::string> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
        bool pos = i % 2 == 0;
        double cx = pos ? center_distance / 2 : -center_distance / 2;
        x1[i] = cx + sigma * rng.normal();
        x2[i] = -cx + sigma * rng.normal();
        labels[i] = pos ? "pos" : "neg";
    }
    Dataset d;
    d.table = DataTable({Column::numeric("x1", std::move(x1)), Column::numeric("x2", std::move(x2))});
    d.target = TargetVector::from_labels(labels);
    return d;
}

// XOR quadrant labels; linearly inseparable
inline Dataset xor_data(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> x1(n), x2(n);
    std::vector<std::string> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
        x1[i] = rng.uniform() * 2.0 - 1.0;
        x2[i] = rng.uniform() * 2.0 - 1.0;
        labels[i] = (x1[i] > 0) == (x2[i] > 0) ? "same" : "diff";
    }
    Dataset d;
    d.table = DataTable({Column::numeric("x1", std::move(x1)), Column::numeric("x2", std::move(x2))});
    d.target = TargetVector::from_labels(labels);
    return d;
}

// mixed-type table with a scattered NA pattern
inline Dataset mixed_na_table(std::size_t n_rows, std::size_t n_cat, std::size_t n_num,
                              double na_rate, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Column> cols;
    const char* cats[] = {"a", "b", "c", "d"};
    for (std::size_t j = 0; j < n_cat; ++j) {
        std::vector<std::string> v(n_rows);
        std::vector<std::uint8_t> na(n_rows, 0);
        for (std::size_t i = 0; i < n_rows; ++i) {
            if (rng.uniform() < na_rate) na[i] = 1;
            else v[i] = cats[rng.below(4)];
        }
        cols.push_back(Column::categorical("c" + std::to_string(j), v, std::move(na)));
    }
    for (std::size_t j = 0; j < n_num; ++j) {
        std::vector<double> v(n_rows);
        std::vector<std::uint8_t> na(n_rows, 0);
        for (std::size_t i = 0; i < n_rows; ++i) {
            if (rng.uniform() < na_rate) na[i] = 1;
            else v[i] = rng.normal() * (1.0 + static_cast<double>(j));
        }
        cols.push_back(Column::numeric("n" + std::to_string(j), std::move(v), std::move(na)));
    }
    std::vector<std::string> labels(n_rows);
    for (std::size_t i = 0; i < n_rows; ++i) labels[i] = rng.uniform() < 0.5 ? "home" : "away";
    Dataset d;
    d.table = DataTable(std::move(cols));
    d.target = TargetVector::from_labels(labels);
    return d;
}

// random AST already in canonical (flattened) form
inline ExprAst random_canonical_ast(Rng& rng, int depth = 0) {
    const char* names[] = {"catf", "numf", "ohe", "noop", "stdsc", "minmax",
                           "pca",  "ica",  "fa",  "rf",   "lsvc",  "x_1"};
    double leaf_bias = depth >= 3 ? 1.0 : 0.35 + 0.2 * depth;
    if (rng.uniform() < leaf_bias) return ExprAst::name(names[rng.below(12)]);
    bool pipe = rng.uniform() < 0.5;
    std::size_t arity = 2 + rng.below(3);
    std::vector<ExprAst> children;
    for (std::size_t i = 0; i < arity; ++i) {
        for (;;) {
            ExprAst child = random_canonical_ast(rng, depth + 1);
            // keep the children one level less of the same kind so the result
            // stays flattened
            if (pipe && child.kind() == ExprAst::Kind::Pipe) continue;
            if (!pipe && child.kind() == ExprAst::Kind::Union) continue;
            children.push_back(std::move(child));
            break;
        }
    }
    return pipe ? ExprAst::pipe(std::move(children)) : ExprAst::union_of(std::move(children));
}

inline bool tables_cell_equal(const DataTable& a, const DataTable& b) {
    if (a.n_rows() != b.n_rows() || a.n_cols() != b.n_cols()) return false;
    for (std::size_t j = 0; j < a.n_cols(); ++j) {
        if (a.col(j).name() != b.col(j).name()) return false;
        if (!a.col(j).cells_equal(b.col(j))) return false;
    }
    return true;
}

}  // namespace testutil
