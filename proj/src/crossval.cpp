#include "pipeforge/crossval.hpp"

#include <chrono>
#include <cmath>

namespace pipeforge {

std::vector<std::vector<std::size_t>> FoldPlan::fold_rows() const {
    std::vector<std::vector<std::size_t>> folds(k);
    for (std::size_t i = 0; i < assignments.size(); ++i) folds[assignments[i]].push_back(i);
    return folds;
}

std::vector<std::size_t> FoldPlan::train_rows(int fold) const {
    std::vector<std::size_t> rows;
    rows.reserve(assignments.size());
    for (std::size_t i = 0; i < assignments.size(); ++i)
        if (assignments[i] != fold) rows.push_back(i);
    return rows;
}

FoldPlan make_folds(const TargetVector& target, int k, std::uint64_t seed) {
    if (k < 2) throw DataError("make_folds: k must be at least 2");
    if (static_cast<std::size_t>(k) > target.size())
        throw DataError("make_folds: k=" + std::to_string(k) + " exceeds " +
                        std::to_string(target.size()) + " rows");
    FoldPlan plan;
    plan.k = k;
    plan.assignments.assign(target.size(), 0);

    int cursor = 0;
    const int n_classes = static_cast<int>(target.n_classes());
    for (int c = 0; c < n_classes; ++c) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < target.size(); ++i)
            if (target.code(i) == c) members.push_back(i);
        if (members.empty()) continue;
        Rng rng(hash_combine(seed, static_cast<std::uint64_t>(c) + 1));
        rng.shuffle(members);
        for (std::size_t m : members) {
            plan.assignments[m] = cursor;
            cursor = (cursor + 1) % k;
        }
    }
    return plan;
}

CvResult crossvalidate(const ExprAst& ast, const ComponentRegistry& registry,
                       const DataTable& table, const TargetVector& target, int k,
                       std::uint64_t seed, ThreadPool* pool) {
    const auto start = std::chrono::steady_clock::now();

    {
        // validate structure up front; fold workflows are compiled per fold
        Workflow probe = compile(ast, registry, seed);
        if (!probe.terminal_is_learner())
            throw PipelineError("crossvalidate: candidate is not terminated by a learner");
    }
    FoldPlan plan = make_folds(target, k, seed);
    auto folds = plan.fold_rows();

    CvResult result;
    result.signature = render(ast);
    result.fold_errors.assign(k, 0.0);

    auto run_fold = [&](std::size_t f) {
        std::vector<std::size_t> train = plan.train_rows(static_cast<int>(f));
        const std::vector<std::size_t>& test = folds[f];
        Workflow w = compile(ast, registry, hash_combine(seed, f));
        w.fit_transform(table.take_rows(train), target.take(train));
        DataTable out = w.transform(table.take_rows(test));
        if (out.n_cols() != 1)
            throw PipelineError("crossvalidate: expected a single prediction column");
        const Column& pred = out.col(0);
        std::size_t wrong = 0;
        for (std::size_t i = 0; i < test.size(); ++i) {
            if (pred.is_na(i) || pred.label(i) != target.label(test[i])) ++wrong;
        }
        result.fold_errors[f] =
            100.0 * static_cast<double>(wrong) / static_cast<double>(test.size());
    };

    if (pool) {
        pool->parallel_for(static_cast<std::size_t>(k), run_fold);
    } else {
        for (int f = 0; f < k; ++f) run_fold(static_cast<std::size_t>(f));
    }

    double mean = 0.0;
    for (double e : result.fold_errors) mean += e;
    mean /= static_cast<double>(k);
    double ss = 0.0;
    for (double e : result.fold_errors) ss += (e - mean) * (e - mean);
    result.mean_err = mean;
    result.std_err = k > 1 ? std::sqrt(ss / static_cast<double>(k - 1)) : 0.0;
    result.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

}  // namespace pipeforge
