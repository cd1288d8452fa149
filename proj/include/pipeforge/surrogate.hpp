#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "pipeforge/data.hpp"
#include "pipeforge/learners.hpp"
#include "pipeforge/search.hpp"
#include "pipeforge/threadpool.hpp"

namespace pipeforge {

// Fixed 12-entry dataset descriptor, computed on raw (pre-cleaning) data with
// NA cells excluded per statistic; undefined entries default to 0.
struct Metafeatures {
    static constexpr std::size_t kCount = 12;
    std::array<double, kCount> values{};

    static const std::array<const char*, kCount>& names();
};

Metafeatures extract_metafeatures(const DataTable& table, const TargetVector& target);

// Two-block signature complexity from its noop count n: n in {0,1} -> 1,
// n=2 -> 2, n=3 -> 3, n=4 -> 4. More noops = simpler pipeline.
int complexity_of_signature(const std::string& signature);

enum class LearnerGroup { Ensemble, Svm };

const char* group_name(LearnerGroup g);
LearnerGroup group_of_learner(const std::string& learner);  // dt counts as Ensemble
std::vector<std::string> group_members(LearnerGroup g, const std::vector<std::string>& roster);

enum class SurrogateKind { Prp, Lr };

// Per-dataset groundwork shared by both surrogates: metafeatures on raw data
// plus an all-one two-block run on the cleaned data.
struct CorpusDataset {
    std::string id;
    DataTable table;
    TargetVector target;
};

struct CorpusRun {
    std::vector<std::string> dataset_ids;
    std::vector<Metafeatures> metafeatures;
    std::vector<StrategyReport> reports;       // unpruned all-one two-block per dataset
    std::vector<std::string> best_signatures;
    std::vector<std::string> best_learners;
    std::vector<int> categories;               // of best_signatures
    std::vector<LearnerGroup> groups;          // of best_learners
};

CorpusRun run_corpus(const std::vector<CorpusDataset>& corpus, const SearchSpace& space,
                     const ComponentRegistry& registry, int k, std::uint64_t seed,
                     ThreadPool* pool = nullptr);

// Metafeature -> label classifier (the project's own random forest) plus its
// training manifest. Persisted as a self-describing JSON document that reloads
// to bit-identical predictions.
struct SurrogateModel {
    SurrogateKind kind = SurrogateKind::Prp;
    FittedLearner forest;
    std::vector<std::string> feature_names;
    std::vector<std::string> dataset_ids;
    std::vector<std::string> labels;
    std::uint64_t seed = 0;

    int predict_category(const Metafeatures& mf) const;        // PRP
    LearnerGroup predict_group(const Metafeatures& mf) const;  // LR

    void save(const std::string& path) const;
    static SurrogateModel load(const std::string& path);
};

SurrogateModel train_surrogate(SurrogateKind kind, const CorpusRun& run, std::uint64_t seed);
SurrogateModel train_surrogate(SurrogateKind kind, const std::vector<CorpusDataset>& corpus,
                               const SearchSpace& space, const ComponentRegistry& registry, int k,
                               std::uint64_t seed, ThreadPool* pool = nullptr);

// LR restricts the learner roster to the predicted group; PRP restricts the
// two-block enumeration to candidates at least as simple as predicted
// (noop count >= predicted category). An emptied space falls back to the
// unpruned one.
struct PruneDecision {
    SearchSpace space;
    int min_noops = 0;
    int predicted_category = 0;   // 0 = no PRP model given
    int predicted_group = -1;     // cast of LearnerGroup, -1 = no LR model
    bool fallback = false;
};

PruneDecision prune_space(const SearchSpace& space, const SurrogateModel* prp,
                          const SurrogateModel* lr, const DataTable& table,
                          const TargetVector& target);

}  // namespace pipeforge
