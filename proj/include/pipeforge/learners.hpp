#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pipeforge/data.hpp"
#include "pipeforge/numeric.hpp"

namespace pipeforge {

enum class LearnerMode { Dt, Rf, Ada, Gb, Lsvc, RbfSvc };

const char* learner_name(LearnerMode mode);

struct LearnerConfig {
    LearnerMode mode = LearnerMode::Dt;
    int max_depth = 12;  // per-tree depth for the mode (dt/rf 12, gb 3, ada stumps 1)
    int min_leaf = 1;
    int n_estimators = 100;
    double learning_rate = 0.1;
    double svm_lambda = 1e-4;
    int svm_epochs = 20;
    bool bootstrap = true;        // rf
    int features_per_split = 0;   // rf; 0 = floor(sqrt(d))
    std::uint64_t seed = 0;

    static LearnerConfig defaults(LearnerMode mode, std::uint64_t seed);
};

struct TreeNode {
    int feature = -1;  // -1 = leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    std::int32_t label = -1;  // classification leaf
    double value = 0.0;       // regression leaf
};

struct Tree {
    std::vector<TreeNode> nodes;
    int leaf_index(const double* row) const;
    std::int32_t predict_label(const double* row) const { return nodes[leaf_index(row)].label; }
    double predict_value(const double* row) const { return nodes[leaf_index(row)].value; }
};

struct FittedLearner {
    LearnerMode mode = LearnerMode::Dt;
    std::vector<std::string> class_set;
    std::vector<std::string> feature_names;

    // dt / rf
    std::vector<Tree> trees;
    // ada (SAMME)
    std::vector<Tree> stumps;
    std::vector<double> stump_weights;
    // gb (one-vs-rest binomial deviance)
    std::vector<std::vector<Tree>> gb_trees;  // [class][round]
    std::vector<double> gb_prior;             // per-class initial log-odds
    double gb_learning_rate = 0.1;
    std::vector<double> gb_deviance;          // training deviance, index 0 = before boosting
    // lsvc (one-vs-rest Pegasos, trailing weight is the bias term)
    std::vector<std::vector<double>> svm_weights;
    // rbfsvc (kernelized Pegasos)
    Matrix support;
    std::vector<std::vector<double>> kernel_coef;  // [class][support row]
    double rbf_gamma = 0.0;

    std::int32_t predict_code(const double* row, std::size_t d) const;
};

FittedLearner learner_fit(const LearnerConfig& config, const DataTable& features,
                          const TargetVector& target);
TargetVector learner_predict(const FittedLearner& model, const DataTable& features);

}  // namespace pipeforge
