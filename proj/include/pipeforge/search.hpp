#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "pipeforge/crossval.hpp"
#include "pipeforge/data.hpp"
#include "pipeforge/expr.hpp"
#include "pipeforge/pipeline.hpp"
#include "pipeforge/threadpool.hpp"

namespace pipeforge {

struct SearchSpace {
    std::vector<std::string> scalers;
    std::vector<std::string> extractors;
    std::vector<std::string> learners;

    static SearchSpace defaults();
    void validate(const ComponentRegistry& registry) const;
};

struct Candidate {
    ExprAst ast;
    std::string signature;
    std::string sc1, fx1, sc2, fx2, learner;  // sc2/fx2 empty for one-block rows
};

struct CandidateResult {
    Candidate candidate;
    CvResult cv;
    bool failed = false;       // hard failure; mean_err carries the 100% sentinel
    std::string error;
    int rank = 0;              // 1-based by (mean_err, enumeration order)
};

struct StrategyReport {
    std::string strategy;      // "all-all" | "one-all" | "all-one"
    int blocks = 1;
    std::vector<CandidateResult> results;  // enumeration order
    std::size_t best_index = 0;
    std::size_t cv_op_count = 0;
    double wall_time = 0.0;

    const CandidateResult& best() const { return results[best_index]; }
};

// colnarm(10%) |> rownarm (target filtered alongside) |> (catf |> ohe) + numf;
// output is all-numeric and NA-free.
std::pair<DataTable, TargetVector> base_clean(const DataTable& table, const TargetVector& target);

// (sc, fx) blocks in lexicographic order of the space lists
std::vector<std::pair<std::string, std::string>> enumerate_blocks(const SearchSpace& space);

// all (sc |> fx) |> lr triples; 6x4x6 = 144 on the default space
std::vector<Candidate> enumerate_one_block(const SearchSpace& space);

// all ordered pairs of distinct blocks crossed with learners; 552x6 = 3312 on
// the default space. min_noops > 0 keeps only pairs with at least that many
// noop slots; if that empties the set and the space has noop in both roles,
// the all-noop self-pair stands in.
std::vector<Candidate> enumerate_two_block(const SearchSpace& space, int min_noops = 0);

ExprAst default_surrogate_pipeline();  // (catf |> ohe) + numf |> robustsc

StrategyReport all_all(const SearchSpace& space, const ComponentRegistry& registry,
                       const DataTable& table, const TargetVector& target, int k,
                       std::uint64_t seed, int blocks, ThreadPool* pool = nullptr);

StrategyReport one_all(const SearchSpace& space, const ComponentRegistry& registry,
                       const DataTable& table, const TargetVector& target, int k,
                       std::uint64_t seed, const std::string& surrogate_learner,
                       ThreadPool* pool = nullptr);

StrategyReport all_one(const SearchSpace& space, const ComponentRegistry& registry,
                       const DataTable& table, const TargetVector& target, int k,
                       std::uint64_t seed, const ExprAst& surrogate_pipeline, int blocks,
                       int min_noops = 0, ThreadPool* pool = nullptr);

// candidate count of the exhaustive search over the same blocks, divided by
// the number this run evaluated
double exhaustive_speedup(const SearchSpace& space, int blocks, std::size_t evaluated);

// signature,strategy,mean_err,std_err,wall_time_s,rank_in_run,sc1,fx1,sc2,fx2,learner
void write_results_csv(const std::string& path, const StrategyReport& report);

std::string run_summary(const StrategyReport& report, const SearchSpace& space);

}  // namespace pipeforge
