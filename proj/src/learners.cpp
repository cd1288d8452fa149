#include "pipeforge/learners.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pipeforge/common.hpp"
#include "pipeforge/kernels.hpp"

namespace pipeforge {

const char* learner_name(LearnerMode mode) {
    switch (mode) {
        case LearnerMode::Dt: return "dt";
        case LearnerMode::Rf: return "rf";
        case LearnerMode::Ada: return "ada";
        case LearnerMode::Gb: return "gb";
        case LearnerMode::Lsvc: return "lsvc";
        case LearnerMode::RbfSvc: return "rbfsvc";
    }
    return "?";
}

LearnerConfig LearnerConfig::defaults(LearnerMode mode, std::uint64_t seed) {
    LearnerConfig c;
    c.mode = mode;
    c.seed = seed;
    switch (mode) {
        case LearnerMode::Dt:
        case LearnerMode::Rf: c.max_depth = 12; break;
        case LearnerMode::Ada: c.max_depth = 1; break;
        case LearnerMode::Gb: c.max_depth = 3; break;
        default: break;
    }
    return c;
}

int Tree::leaf_index(const double* row) const {
    int i = 0;
    while (nodes[i].feature >= 0)
        i = row[nodes[i].feature] <= nodes[i].threshold ? nodes[i].left : nodes[i].right;
    return i;
}

// ---------------------------------------------------------------------------
// CART builders

namespace {

struct ClsTreeParams {
    int max_depth = 12;
    int min_leaf = 1;
    int features_per_split = 0;  // 0 = all
    int n_classes = 2;
};

// Sorted subset of feature indices to scan at one node; ascending order keeps
// the first-feature tie-break independent of sampling order.
std::vector<int> pick_features(std::size_t d, int per_split, Rng* rng) {
    std::vector<int> all(d);
    std::iota(all.begin(), all.end(), 0);
    if (per_split <= 0 || static_cast<std::size_t>(per_split) >= d || rng == nullptr) return all;
    for (int i = 0; i < per_split; ++i) {
        std::size_t j = i + static_cast<std::size_t>(rng->below(d - i));
        std::swap(all[i], all[j]);
    }
    all.resize(per_split);
    std::sort(all.begin(), all.end());
    return all;
}

std::int32_t weighted_majority(const std::vector<double>& class_weight) {
    std::int32_t best = 0;
    for (std::size_t k = 1; k < class_weight.size(); ++k)
        if (class_weight[k] > class_weight[best]) best = static_cast<std::int32_t>(k);
    return best;
}

double gini(const std::vector<double>& class_weight, double total) {
    if (total <= 0.0) return 0.0;
    double s = 0.0;
    for (double w : class_weight) {
        double p = w / total;
        s += p * p;
    }
    return 1.0 - s;
}

class ClassificationTreeBuilder {
public:
    ClassificationTreeBuilder(const Matrix& x, const std::vector<std::int32_t>& y,
                              const std::vector<double>& weights, const ClsTreeParams& params,
                              Rng* rng)
        : x_(x), y_(y), weights_(weights), params_(params), rng_(rng) {}

    Tree build(std::vector<std::size_t> rows) {
        Tree t;
        grow(t, std::move(rows), 0);
        return t;
    }

private:
    double weight_of(std::size_t row) const { return weights_.empty() ? 1.0 : weights_[row]; }

    int grow(Tree& t, std::vector<std::size_t> rows, int depth) {
        std::vector<double> counts(params_.n_classes, 0.0);
        double total = 0.0;
        for (std::size_t r : rows) {
            counts[y_[r]] += weight_of(r);
            total += weight_of(r);
        }
        const int node_id = static_cast<int>(t.nodes.size());
        t.nodes.emplace_back();
        t.nodes[node_id].label = weighted_majority(counts);

        double node_gini = gini(counts, total);
        if (depth >= params_.max_depth || node_gini <= 1e-12 ||
            rows.size() < static_cast<std::size_t>(2 * params_.min_leaf))
            return node_id;

        int best_feature = -1;
        double best_threshold = 0.0;
        double best_impurity = node_gini - 1e-12;
        std::vector<int> features = pick_features(x_.cols, params_.features_per_split, rng_);
        std::vector<std::pair<double, std::size_t>> order;
        std::vector<double> left(params_.n_classes);
        for (int f : features) {
            order.clear();
            order.reserve(rows.size());
            for (std::size_t r : rows) order.emplace_back(x_.at(r, f), r);
            std::sort(order.begin(), order.end());
            std::fill(left.begin(), left.end(), 0.0);
            double wl = 0.0;
            for (std::size_t i = 0; i + 1 < order.size(); ++i) {
                std::size_t r = order[i].second;
                left[y_[r]] += weight_of(r);
                wl += weight_of(r);
                if (order[i].first == order[i + 1].first) continue;
                const std::size_t nl = i + 1, nr = order.size() - nl;
                if (nl < static_cast<std::size_t>(params_.min_leaf) ||
                    nr < static_cast<std::size_t>(params_.min_leaf))
                    continue;
                double gl = 0.0, gr = 0.0;
                double wr = total - wl;
                {
                    double sl = 0.0, sr = 0.0;
                    for (int k = 0; k < params_.n_classes; ++k) {
                        double pl = wl > 0 ? left[k] / wl : 0.0;
                        double pr = wr > 0 ? (counts[k] - left[k]) / wr : 0.0;
                        sl += pl * pl;
                        sr += pr * pr;
                    }
                    gl = 1.0 - sl;
                    gr = 1.0 - sr;
                }
                double impurity = (wl * gl + wr * gr) / (total > 0 ? total : 1.0);
                if (impurity < best_impurity - 1e-12) {
                    best_impurity = impurity;
                    best_feature = f;
                    best_threshold = 0.5 * (order[i].first + order[i + 1].first);
                }
            }
        }
        if (best_feature < 0) return node_id;

        std::vector<std::size_t> left_rows, right_rows;
        for (std::size_t r : rows)
            (x_.at(r, best_feature) <= best_threshold ? left_rows : right_rows).push_back(r);
        if (left_rows.empty() || right_rows.empty()) return node_id;
        rows.clear();
        rows.shrink_to_fit();

        t.nodes[node_id].feature = best_feature;
        t.nodes[node_id].threshold = best_threshold;
        int l = grow(t, std::move(left_rows), depth + 1);
        t.nodes[node_id].left = l;
        int r = grow(t, std::move(right_rows), depth + 1);
        t.nodes[node_id].right = r;
        return node_id;
    }

    const Matrix& x_;
    const std::vector<std::int32_t>& y_;
    const std::vector<double>& weights_;
    ClsTreeParams params_;
    Rng* rng_;
};

class RegressionTreeBuilder {
public:
    RegressionTreeBuilder(const Matrix& x, const std::vector<double>& target, int max_depth,
                          int min_leaf)
        : x_(x), target_(target), max_depth_(max_depth), min_leaf_(min_leaf) {}

    Tree build(std::vector<std::size_t> rows) {
        Tree t;
        grow(t, std::move(rows), 0);
        return t;
    }

private:
    int grow(Tree& t, std::vector<std::size_t> rows, int depth) {
        double s1 = 0.0, s2 = 0.0;
        for (std::size_t r : rows) {
            s1 += target_[r];
            s2 += target_[r] * target_[r];
        }
        const double n = static_cast<double>(rows.size());
        const int node_id = static_cast<int>(t.nodes.size());
        t.nodes.emplace_back();
        t.nodes[node_id].value = s1 / n;

        double node_sse = s2 - s1 * s1 / n;
        if (depth >= max_depth_ || node_sse <= 1e-12 ||
            rows.size() < static_cast<std::size_t>(2 * min_leaf_))
            return node_id;

        int best_feature = -1;
        double best_threshold = 0.0;
        double best_sse = node_sse - 1e-12;
        std::vector<std::pair<double, std::size_t>> order;
        for (std::size_t f = 0; f < x_.cols; ++f) {
            order.clear();
            order.reserve(rows.size());
            for (std::size_t r : rows) order.emplace_back(x_.at(r, f), r);
            std::sort(order.begin(), order.end());
            double l1 = 0.0, l2 = 0.0;
            for (std::size_t i = 0; i + 1 < order.size(); ++i) {
                double v = target_[order[i].second];
                l1 += v;
                l2 += v * v;
                if (order[i].first == order[i + 1].first) continue;
                const double nl = static_cast<double>(i + 1);
                const double nr = n - nl;
                if (nl < min_leaf_ || nr < min_leaf_) continue;
                double r1 = s1 - l1, r2 = s2 - l2;
                double sse = (l2 - l1 * l1 / nl) + (r2 - r1 * r1 / nr);
                if (sse < best_sse - 1e-12) {
                    best_sse = sse;
                    best_feature = static_cast<int>(f);
                    best_threshold = 0.5 * (order[i].first + order[i + 1].first);
                }
            }
        }
        if (best_feature < 0) return node_id;

        std::vector<std::size_t> left_rows, right_rows;
        for (std::size_t r : rows)
            (x_.at(r, best_feature) <= best_threshold ? left_rows : right_rows).push_back(r);
        if (left_rows.empty() || right_rows.empty()) return node_id;
        rows.clear();
        rows.shrink_to_fit();

        t.nodes[node_id].feature = best_feature;
        t.nodes[node_id].threshold = best_threshold;
        int l = grow(t, std::move(left_rows), depth + 1);
        t.nodes[node_id].left = l;
        int r = grow(t, std::move(right_rows), depth + 1);
        t.nodes[node_id].right = r;
        return node_id;
    }

    const Matrix& x_;
    const std::vector<double>& target_;
    int max_depth_;
    int min_leaf_;
};

std::vector<std::size_t> all_rows(std::size_t n) {
    std::vector<std::size_t> rows(n);
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    return rows;
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// ---------------------------------------------------------------------------
// per-mode training

void fit_dt(FittedLearner& model, const LearnerConfig& cfg, const Matrix& x,
            const std::vector<std::int32_t>& y, int n_classes) {
    ClsTreeParams params{cfg.max_depth, cfg.min_leaf, 0, n_classes};
    ClassificationTreeBuilder builder(x, y, {}, params, nullptr);
    model.trees.push_back(builder.build(all_rows(x.rows)));
}

void fit_rf(FittedLearner& model, const LearnerConfig& cfg, const Matrix& x,
            const std::vector<std::int32_t>& y, int n_classes) {
    int per_split = cfg.features_per_split;
    if (per_split <= 0)
        per_split = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(x.cols))));
    ClsTreeParams params{cfg.max_depth, cfg.min_leaf, per_split, n_classes};
    model.trees.reserve(cfg.n_estimators);
    for (int t = 0; t < cfg.n_estimators; ++t) {
        Rng rng(hash_combine(cfg.seed, static_cast<std::uint64_t>(t) + 1));
        std::vector<std::size_t> rows;
        if (cfg.bootstrap) {
            rows.resize(x.rows);
            for (auto& r : rows) r = static_cast<std::size_t>(rng.below(x.rows));
        } else {
            rows = all_rows(x.rows);
        }
        ClassificationTreeBuilder builder(x, y, {}, params, &rng);
        model.trees.push_back(builder.build(std::move(rows)));
    }
}

void fit_ada(FittedLearner& model, const LearnerConfig& cfg, const Matrix& x,
             const std::vector<std::int32_t>& y, int n_classes) {
    const std::size_t n = x.rows;
    const double k = static_cast<double>(n_classes);
    std::vector<double> w(n, 1.0 / static_cast<double>(n));
    ClsTreeParams params{cfg.max_depth, cfg.min_leaf, 0, n_classes};
    for (int round = 0; round < cfg.n_estimators; ++round) {
        ClassificationTreeBuilder builder(x, y, w, params, nullptr);
        Tree stump = builder.build(all_rows(n));
        double err = 0.0;
        std::vector<std::int32_t> pred(n);
        for (std::size_t i = 0; i < n; ++i) {
            pred[i] = stump.predict_label(x.row(i));
            if (pred[i] != y[i]) err += w[i];
        }
        if (err >= 1.0 - 1.0 / k) {
            if (model.stumps.empty()) {
                // degenerate data: keep one constant-majority stump
                model.stumps.push_back(stump);
                model.stump_weights.push_back(1.0);
            }
            break;
        }
        err = std::max(err, 1e-12);
        double alpha = std::log((1.0 - err) / err) + std::log(k - 1.0);
        model.stumps.push_back(stump);
        model.stump_weights.push_back(alpha);
        if (err <= 1e-12) break;  // perfect stump, nothing left to reweight
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (pred[i] != y[i]) w[i] *= std::exp(alpha);
            total += w[i];
        }
        for (auto& wi : w) wi /= total;
    }
}

void fit_gb(FittedLearner& model, const LearnerConfig& cfg, const Matrix& x,
            const std::vector<std::int32_t>& y, int n_classes) {
    const std::size_t n = x.rows;
    const double dn = static_cast<double>(n);
    model.gb_learning_rate = cfg.learning_rate;
    model.gb_trees.assign(n_classes, {});
    model.gb_prior.assign(n_classes, 0.0);

    std::vector<std::vector<double>> f(n_classes, std::vector<double>(n, 0.0));
    for (int c = 0; c < n_classes; ++c) {
        double pos = 0.0;
        for (std::size_t i = 0; i < n; ++i) pos += y[i] == c ? 1.0 : 0.0;
        double p = std::clamp(pos / dn, 1e-12, 1.0 - 1e-12);
        model.gb_prior[c] = std::log(p / (1.0 - p));
        std::fill(f[c].begin(), f[c].end(), model.gb_prior[c]);
    }

    auto deviance = [&] {
        double dev = 0.0;
        for (int c = 0; c < n_classes; ++c) {
            for (std::size_t i = 0; i < n; ++i) {
                double p = std::clamp(sigmoid(f[c][i]), 1e-12, 1.0 - 1e-12);
                dev -= y[i] == c ? std::log(p) : std::log(1.0 - p);
            }
        }
        return dev;
    };
    model.gb_deviance.push_back(deviance());

    std::vector<double> resid(n);
    for (int round = 0; round < cfg.n_estimators; ++round) {
        for (int c = 0; c < n_classes; ++c) {
            std::vector<double> p(n);
            for (std::size_t i = 0; i < n; ++i) {
                p[i] = sigmoid(f[c][i]);
                resid[i] = (y[i] == c ? 1.0 : 0.0) - p[i];
            }
            RegressionTreeBuilder builder(x, resid, cfg.max_depth, cfg.min_leaf);
            Tree tree = builder.build(all_rows(n));
            // Newton leaf values for binomial deviance
            std::vector<double> num(tree.nodes.size(), 0.0), den(tree.nodes.size(), 0.0);
            std::vector<int> leaf_of(n);
            for (std::size_t i = 0; i < n; ++i) {
                int leaf = tree.leaf_index(x.row(i));
                leaf_of[i] = leaf;
                num[leaf] += resid[i];
                den[leaf] += p[i] * (1.0 - p[i]);
            }
            for (std::size_t j = 0; j < tree.nodes.size(); ++j) {
                if (tree.nodes[j].feature >= 0) continue;
                tree.nodes[j].value = den[j] > 1e-12 ? num[j] / den[j] : 0.0;
            }
            for (std::size_t i = 0; i < n; ++i)
                f[c][i] += cfg.learning_rate * tree.nodes[leaf_of[i]].value;
            model.gb_trees[c].push_back(std::move(tree));
        }
        model.gb_deviance.push_back(deviance());
    }
}

void fit_lsvc(FittedLearner& model, const LearnerConfig& cfg, const Matrix& x,
              const std::vector<std::int32_t>& y, int n_classes) {
    const std::size_t n = x.rows;
    const std::size_t d = x.cols + 1;  // trailing bias feature fixed at 1
    Matrix xb(n, d);
    for (std::size_t i = 0; i < n; ++i) {
        const double* src = x.row(i);
        double* dst = xb.row(i);
        std::copy(src, src + x.cols, dst);
        dst[x.cols] = 1.0;
    }
    model.svm_weights.assign(n_classes, std::vector<double>(d, 0.0));
    for (int c = 0; c < n_classes; ++c) {
        std::vector<double>& w = model.svm_weights[c];
        std::vector<std::size_t> order = all_rows(n);
        std::uint64_t t = 0;
        for (int epoch = 0; epoch < cfg.svm_epochs; ++epoch) {
            Rng rng(hash_combine(hash_combine(cfg.seed, static_cast<std::uint64_t>(c) + 101),
                                 static_cast<std::uint64_t>(epoch) + 1));
            rng.shuffle(order);
            for (std::size_t i : order) {
                ++t;
                const double eta = 1.0 / (cfg.svm_lambda * static_cast<double>(t));
                const double yi = y[i] == c ? 1.0 : -1.0;
                const double margin = yi * kernels::dot(w.data(), xb.row(i), d);
                const double keep = 1.0 - eta * cfg.svm_lambda;
                kernels::affine(w.data(), 0.0, keep, w.data(), d);
                if (margin < 1.0) kernels::add_scaled(w.data(), xb.row(i), eta * yi, d);
            }
        }
    }
}

double median_pairwise_distance(const Matrix& x, std::uint64_t seed) {
    std::vector<std::size_t> rows = all_rows(x.rows);
    constexpr std::size_t cap = 1024;
    if (rows.size() > cap) {
        Rng rng(hash_combine(seed, 0x3d157ULL));
        rng.shuffle(rows);
        rows.resize(cap);
        std::sort(rows.begin(), rows.end());
    }
    std::vector<double> dists;
    dists.reserve(rows.size() * (rows.size() - 1) / 2);
    for (std::size_t a = 0; a < rows.size(); ++a)
        for (std::size_t b = a + 1; b < rows.size(); ++b)
            dists.push_back(std::sqrt(kernels::sq_dist(x.row(rows[a]), x.row(rows[b]), x.cols)));
    if (dists.empty()) return 1.0;
    std::sort(dists.begin(), dists.end());
    double med = quantile_sorted(dists, 0.5);
    return med > 0.0 ? med : 1.0;
}

void fit_rbfsvc(FittedLearner& model, const LearnerConfig& cfg, const Matrix& x,
                const std::vector<std::int32_t>& y, int n_classes) {
    const std::size_t n = x.rows;
    double sigma = median_pairwise_distance(x, cfg.seed);
    model.rbf_gamma = 1.0 / (2.0 * sigma * sigma);
    model.support = x;

    // Gram rows on demand above the memory cap
    const bool precompute = n <= 3000;
    Matrix gram;
    if (precompute) {
        gram = Matrix(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            gram.at(i, i) = 1.0;
            for (std::size_t j = i + 1; j < n; ++j) {
                double kij = std::exp(-model.rbf_gamma * kernels::sq_dist(x.row(i), x.row(j), x.cols));
                gram.at(i, j) = kij;
                gram.at(j, i) = kij;
            }
        }
    }
    auto kernel_row = [&](std::size_t i, std::vector<double>& out) {
        if (precompute) {
            const double* g = gram.row(i);
            out.assign(g, g + n);
            return;
        }
        out.resize(n);
        for (std::size_t j = 0; j < n; ++j)
            out[j] = std::exp(-model.rbf_gamma * kernels::sq_dist(x.row(i), x.row(j), x.cols));
    };

    model.kernel_coef.assign(n_classes, std::vector<double>(n, 0.0));
    const std::uint64_t total_steps =
        static_cast<std::uint64_t>(cfg.svm_epochs) * static_cast<std::uint64_t>(n);
    std::vector<double> krow;
    for (int c = 0; c < n_classes; ++c) {
        std::vector<double> alpha(n, 0.0);
        std::vector<double> score(n, 0.0);  // score[i] = sum_j alpha_j y_j K(ij)
        std::vector<std::size_t> order = all_rows(n);
        std::uint64_t t = 0;
        for (int epoch = 0; epoch < cfg.svm_epochs; ++epoch) {
            Rng rng(hash_combine(hash_combine(cfg.seed, static_cast<std::uint64_t>(c) + 501),
                                 static_cast<std::uint64_t>(epoch) + 1));
            rng.shuffle(order);
            for (std::size_t i : order) {
                ++t;
                const double yi = y[i] == c ? 1.0 : -1.0;
                const double margin =
                    yi * score[i] / (cfg.svm_lambda * static_cast<double>(t));
                if (margin < 1.0) {
                    alpha[i] += 1.0;
                    kernel_row(i, krow);
                    kernels::add_scaled(score.data(), krow.data(), yi, n);
                }
            }
        }
        std::vector<double>& coef = model.kernel_coef[c];
        const double scale = 1.0 / (cfg.svm_lambda * static_cast<double>(total_steps));
        for (std::size_t i = 0; i < n; ++i)
            coef[i] = alpha[i] * (y[i] == c ? 1.0 : -1.0) * scale;
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// public surface

std::int32_t FittedLearner::predict_code(const double* row, std::size_t d) const {
    const int k = static_cast<int>(class_set.size());
    switch (mode) {
        case LearnerMode::Dt:
        case LearnerMode::Rf: {
            std::vector<int> votes(k, 0);
            for (const Tree& t : trees) ++votes[t.predict_label(row)];
            int best = 0;
            for (int c = 1; c < k; ++c)
                if (votes[c] > votes[best]) best = c;
            return best;
        }
        case LearnerMode::Ada: {
            std::vector<double> score(k, 0.0);
            for (std::size_t m = 0; m < stumps.size(); ++m)
                score[stumps[m].predict_label(row)] += stump_weights[m];
            int best = 0;
            for (int c = 1; c < k; ++c)
                if (score[c] > score[best]) best = c;
            return best;
        }
        case LearnerMode::Gb: {
            int best = 0;
            double best_score = -1e308;
            for (int c = 0; c < k; ++c) {
                double f = gb_prior[c];
                for (const Tree& t : gb_trees[c]) f += gb_learning_rate * t.predict_value(row);
                if (f > best_score) {
                    best_score = f;
                    best = c;
                }
            }
            return best;
        }
        case LearnerMode::Lsvc: {
            int best = 0;
            double best_score = -1e308;
            std::vector<double> xb(svm_weights[0].size());
            std::copy(row, row + d, xb.begin());
            xb.back() = 1.0;
            for (int c = 0; c < k; ++c) {
                double s = kernels::dot(svm_weights[c].data(), xb.data(), xb.size());
                if (s > best_score) {
                    best_score = s;
                    best = c;
                }
            }
            return best;
        }
        case LearnerMode::RbfSvc: {
            std::vector<double> kvec(support.rows);
            for (std::size_t j = 0; j < support.rows; ++j)
                kvec[j] = std::exp(-rbf_gamma * kernels::sq_dist(row, support.row(j), d));
            int best = 0;
            double best_score = -1e308;
            for (int c = 0; c < k; ++c) {
                double s = kernels::dot(kernel_coef[c].data(), kvec.data(), kvec.size());
                if (s > best_score) {
                    best_score = s;
                    best = c;
                }
            }
            return best;
        }
    }
    return 0;
}

FittedLearner learner_fit(const LearnerConfig& config, const DataTable& features,
                          const TargetVector& target) {
    if (features.n_cols() == 0) throw DataError("learner: empty feature set");
    if (features.n_rows() != target.size())
        throw DataError("learner: feature rows and target length differ");
    if (target.distinct_present() < 2) throw DataError("learner: single-class target");

    Matrix x = to_matrix(features, learner_name(config.mode));
    std::vector<std::int32_t> y(target.size());
    for (std::size_t i = 0; i < target.size(); ++i) y[i] = target.code(i);
    const int n_classes = static_cast<int>(target.n_classes());

    FittedLearner model;
    model.mode = config.mode;
    model.class_set = target.class_set();
    for (std::size_t j = 0; j < features.n_cols(); ++j)
        model.feature_names.push_back(features.col(j).name());

    switch (config.mode) {
        case LearnerMode::Dt: fit_dt(model, config, x, y, n_classes); break;
        case LearnerMode::Rf: fit_rf(model, config, x, y, n_classes); break;
        case LearnerMode::Ada: fit_ada(model, config, x, y, n_classes); break;
        case LearnerMode::Gb: fit_gb(model, config, x, y, n_classes); break;
        case LearnerMode::Lsvc: fit_lsvc(model, config, x, y, n_classes); break;
        case LearnerMode::RbfSvc: fit_rbfsvc(model, config, x, y, n_classes); break;
    }
    return model;
}

TargetVector learner_predict(const FittedLearner& model, const DataTable& features) {
    if (features.n_cols() != model.feature_names.size())
        throw DataError("learner: prediction column count differs from fit");
    for (std::size_t j = 0; j < model.feature_names.size(); ++j)
        if (features.col(j).name() != model.feature_names[j])
            throw DataError("learner: prediction column '" + features.col(j).name() +
                            "' does not match fit-time column '" + model.feature_names[j] + "'");
    Matrix x = to_matrix(features, learner_name(model.mode));
    std::vector<std::int32_t> codes(x.rows);
    for (std::size_t i = 0; i < x.rows; ++i) codes[i] = model.predict_code(x.row(i), x.cols);
    return TargetVector::from_codes(std::move(codes), model.class_set);
}

}  // namespace pipeforge
