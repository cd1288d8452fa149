#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pipeforge/data.hpp"
#include "pipeforge/expr.hpp"
#include "pipeforge/pipeline.hpp"
#include "pipeforge/threadpool.hpp"

namespace pipeforge {

// Stratified fold assignment: within each class the rows are shuffled by seed
// and dealt round-robin; the dealing cursor carries across classes so no fold
// is left empty while k <= n_rows.
struct FoldPlan {
    int k = 0;
    std::vector<int> assignments;  // fold index per row

    std::vector<std::vector<std::size_t>> fold_rows() const;
    std::vector<std::size_t> train_rows(int fold) const;
};

FoldPlan make_folds(const TargetVector& target, int k, std::uint64_t seed);

struct CvResult {
    double mean_err = 0.0;               // percent, mean over folds
    double std_err = 0.0;                // sample std over folds
    std::vector<double> fold_errors;     // percent per fold
    double wall_time = 0.0;              // seconds
    std::string signature;               // canonical expression text
};

// 10-fold-style CV of one learner-terminated candidate. Fold f trains a fresh
// workflow seeded from (seed, f) on the other folds and scores on fold f; the
// folds may run on the pool but the result is identical to serial execution.
CvResult crossvalidate(const ExprAst& ast, const ComponentRegistry& registry,
                       const DataTable& table, const TargetVector& target, int k,
                       std::uint64_t seed, ThreadPool* pool = nullptr);

}  // namespace pipeforge
