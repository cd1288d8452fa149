#include "pipeforge/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "pipeforge/numeric.hpp"

namespace pipeforge {

using nlohmann::json;

// ---------------------------------------------------------------------------
// metafeatures

const std::array<const char*, Metafeatures::kCount>& Metafeatures::names() {
    static const std::array<const char*, kCount> n = {
        "n_rows",         "n_cols",           "n_numeric",      "n_categorical",
        "n_classes",      "class_entropy",    "na_fraction",    "dimensionality_ratio",
        "mean_abs_skew",  "mean_kurtosis",    "mean_abs_corr",  "mean_cat_cardinality"};
    return n;
}

namespace {

std::vector<double> non_na_values(const Column& c) {
    std::vector<double> v;
    v.reserve(c.size());
    for (std::size_t i = 0; i < c.size(); ++i)
        if (!c.is_na(i)) v.push_back(c.num(i));
    return v;
}

double pairwise_abs_corr_mean(const DataTable& table, const std::vector<std::size_t>& numeric) {
    double total = 0.0;
    std::size_t pairs = 0;
    for (std::size_t a = 0; a < numeric.size(); ++a) {
        for (std::size_t b = a + 1; b < numeric.size(); ++b) {
            const Column& ca = table.col(numeric[a]);
            const Column& cb = table.col(numeric[b]);
            double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
            std::size_t n = 0;
            for (std::size_t i = 0; i < table.n_rows(); ++i) {
                if (ca.is_na(i) || cb.is_na(i)) continue;
                double x = ca.num(i), y = cb.num(i);
                sx += x;
                sy += y;
                sxx += x * x;
                syy += y * y;
                sxy += x * y;
                ++n;
            }
            if (n < 2) continue;
            double dn = static_cast<double>(n);
            double vx = sxx - sx * sx / dn;
            double vy = syy - sy * sy / dn;
            if (vx <= 1e-300 || vy <= 1e-300) continue;
            double cov = sxy - sx * sy / dn;
            total += std::abs(cov / std::sqrt(vx * vy));
            ++pairs;
        }
    }
    return pairs ? total / static_cast<double>(pairs) : 0.0;
}

}  // namespace

Metafeatures extract_metafeatures(const DataTable& table, const TargetVector& target) {
    Metafeatures mf;
    const double n_rows = static_cast<double>(table.n_rows());
    const double n_cols = static_cast<double>(table.n_cols());

    std::vector<std::size_t> numeric, categorical;
    for (std::size_t j = 0; j < table.n_cols(); ++j)
        (table.col(j).kind() == ColumnKind::Numeric ? numeric : categorical).push_back(j);

    double entropy = 0.0;
    if (target.size()) {
        std::vector<double> counts(target.n_classes(), 0.0);
        for (std::size_t i = 0; i < target.size(); ++i) counts[target.code(i)] += 1.0;
        for (double c : counts) {
            if (c <= 0.0) continue;
            double p = c / static_cast<double>(target.size());
            entropy -= p * std::log(p);
        }
    }

    double skew = 0.0, kurt = 0.0;
    for (std::size_t j : numeric) {
        Moments m = column_moments(non_na_values(table.col(j)));
        skew += std::abs(m.skewness);
        kurt += m.kurtosis;
    }
    if (!numeric.empty()) {
        skew /= static_cast<double>(numeric.size());
        kurt /= static_cast<double>(numeric.size());
    }

    double cardinality = 0.0;
    for (std::size_t j : categorical) cardinality += static_cast<double>(table.col(j).dict().size());
    if (!categorical.empty()) cardinality /= static_cast<double>(categorical.size());

    mf.values = {n_rows,
                 n_cols,
                 static_cast<double>(numeric.size()),
                 static_cast<double>(categorical.size()),
                 static_cast<double>(target.n_classes()),
                 entropy,
                 n_rows * n_cols > 0.0 ? static_cast<double>(table.na_count()) / (n_rows * n_cols)
                                       : 0.0,
                 n_rows > 0.0 ? n_cols / n_rows : 0.0,
                 skew,
                 kurt,
                 pairwise_abs_corr_mean(table, numeric),
                 cardinality};
    return mf;
}

// ---------------------------------------------------------------------------
// signatures and groups

int complexity_of_signature(const std::string& signature) {
    ExprAst ast = parse(signature);
    const ExprAst* prpl = &ast;
    if (ast.kind() == ExprAst::Kind::Pipe) {
        if (ast.children().size() != 2 || ast.children().back().kind() != ExprAst::Kind::Name)
            throw DataError("complexity: signature is not a two-block pipeline");
        prpl = &ast.children().front();
    }
    if (prpl->kind() != ExprAst::Kind::Union || prpl->children().size() != 2)
        throw DataError("complexity: signature is not a two-block pipeline");
    for (const ExprAst& block : prpl->children()) {
        if (block.kind() != ExprAst::Kind::Pipe || block.children().size() != 2 ||
            block.children()[0].kind() != ExprAst::Kind::Name ||
            block.children()[1].kind() != ExprAst::Kind::Name)
            throw DataError("complexity: signature is not a two-block pipeline");
    }
    int noops = noop_count(*prpl);
    return std::max(1, noops);
}

const char* group_name(LearnerGroup g) {
    return g == LearnerGroup::Ensemble ? "ensemble" : "svm";
}

LearnerGroup group_of_learner(const std::string& learner) {
    if (learner == "rf" || learner == "ada" || learner == "gb" || learner == "dt")
        return LearnerGroup::Ensemble;
    if (learner == "lsvc" || learner == "rbfsvc") return LearnerGroup::Svm;
    throw DataError("unknown learner '" + learner + "' for grouping");
}

std::vector<std::string> group_members(LearnerGroup g, const std::vector<std::string>& roster) {
    std::vector<std::string> members;
    for (const auto& l : roster)
        if (group_of_learner(l) == g) members.push_back(l);
    return members;
}

// ---------------------------------------------------------------------------
// training

CorpusRun run_corpus(const std::vector<CorpusDataset>& corpus, const SearchSpace& space,
                     const ComponentRegistry& registry, int k, std::uint64_t seed,
                     ThreadPool* pool) {
    if (corpus.size() < 2) throw DataError("surrogate training needs at least 2 datasets");
    CorpusRun run;
    run.dataset_ids.reserve(corpus.size());
    for (const auto& ds : corpus) {
        run.dataset_ids.push_back(ds.id);
        run.metafeatures.push_back(extract_metafeatures(ds.table, ds.target));
        auto [cleaned, target] = base_clean(ds.table, ds.target);
        StrategyReport report = all_one(space, registry, cleaned, target, k, seed,
                                        default_surrogate_pipeline(), 2, 0, pool);
        const CandidateResult& best = report.best();
        run.best_signatures.push_back(best.candidate.signature);
        run.best_learners.push_back(best.candidate.learner);
        run.categories.push_back(complexity_of_signature(best.candidate.signature));
        run.groups.push_back(group_of_learner(best.candidate.learner));
        run.reports.push_back(std::move(report));
    }
    return run;
}

namespace {

DataTable metafeature_table(const std::vector<Metafeatures>& mfs) {
    std::vector<Column> cols;
    for (std::size_t j = 0; j < Metafeatures::kCount; ++j) {
        std::vector<double> v(mfs.size());
        for (std::size_t i = 0; i < mfs.size(); ++i) v[i] = mfs[i].values[j];
        cols.push_back(Column::numeric(Metafeatures::names()[j], std::move(v)));
    }
    return DataTable(std::move(cols));
}

}  // namespace

SurrogateModel train_surrogate(SurrogateKind kind, const CorpusRun& run, std::uint64_t seed) {
    SurrogateModel model;
    model.kind = kind;
    model.seed = seed;
    model.dataset_ids = run.dataset_ids;
    for (const char* n : Metafeatures::names()) model.feature_names.push_back(n);
    for (std::size_t i = 0; i < run.dataset_ids.size(); ++i) {
        model.labels.push_back(kind == SurrogateKind::Prp ? std::to_string(run.categories[i])
                                                          : group_name(run.groups[i]));
    }
    std::size_t distinct = 0;
    {
        std::vector<std::string> sorted = model.labels;
        std::sort(sorted.begin(), sorted.end());
        distinct = std::unique(sorted.begin(), sorted.end()) - sorted.begin();
    }
    if (distinct < 2)
        throw DataError("surrogate training corpus is single-label ('" + model.labels.front() +
                        "' everywhere)");
    model.forest = learner_fit(LearnerConfig::defaults(LearnerMode::Rf, seed),
                               metafeature_table(run.metafeatures),
                               TargetVector::from_labels(model.labels));
    return model;
}

SurrogateModel train_surrogate(SurrogateKind kind, const std::vector<CorpusDataset>& corpus,
                               const SearchSpace& space, const ComponentRegistry& registry, int k,
                               std::uint64_t seed, ThreadPool* pool) {
    return train_surrogate(kind, run_corpus(corpus, space, registry, k, seed, pool), seed);
}

// ---------------------------------------------------------------------------
// prediction & pruning

namespace {

std::string predict_label(const SurrogateModel& model, const Metafeatures& mf) {
    std::vector<Column> cols;
    for (std::size_t j = 0; j < Metafeatures::kCount; ++j)
        cols.push_back(Column::numeric(model.feature_names[j], {mf.values[j]}));
    TargetVector pred = learner_predict(model.forest, DataTable(std::move(cols)));
    return pred.label(0);
}

}  // namespace

int SurrogateModel::predict_category(const Metafeatures& mf) const {
    if (kind != SurrogateKind::Prp) throw DataError("not a PRP surrogate model");
    return std::stoi(predict_label(*this, mf));
}

LearnerGroup SurrogateModel::predict_group(const Metafeatures& mf) const {
    if (kind != SurrogateKind::Lr) throw DataError("not an LR surrogate model");
    return predict_label(*this, mf) == "svm" ? LearnerGroup::Svm : LearnerGroup::Ensemble;
}

PruneDecision prune_space(const SearchSpace& space, const SurrogateModel* prp,
                          const SurrogateModel* lr, const DataTable& table,
                          const TargetVector& target) {
    PruneDecision d;
    d.space = space;
    Metafeatures mf = extract_metafeatures(table, target);

    if (lr) {
        LearnerGroup g = lr->predict_group(mf);
        d.predicted_group = static_cast<int>(g);
        std::vector<std::string> members = group_members(g, space.learners);
        if (members.empty()) {
            d.fallback = true;  // keep the unpruned roster
        } else {
            d.space.learners = std::move(members);
        }
    }
    if (prp) {
        int category = prp->predict_category(mf);
        d.predicted_category = category;
        d.min_noops = category <= 1 ? 0 : category;
        if (enumerate_two_block(d.space, d.min_noops).empty()) {
            d.fallback = true;
            d.min_noops = 0;
        }
    }
    return d;
}

// ---------------------------------------------------------------------------
// persistence

namespace {

json tree_to_json(const Tree& t) {
    json nodes = json::array();
    for (const TreeNode& n : t.nodes) {
        nodes.push_back({{"f", n.feature},
                         {"t", n.threshold},
                         {"l", n.left},
                         {"r", n.right},
                         {"c", n.label}});
    }
    return nodes;
}

Tree tree_from_json(const json& nodes) {
    Tree t;
    for (const auto& n : nodes) {
        TreeNode node;
        node.feature = n.at("f").get<int>();
        node.threshold = n.at("t").get<double>();
        node.left = n.at("l").get<int>();
        node.right = n.at("r").get<int>();
        node.label = n.at("c").get<std::int32_t>();
        t.nodes.push_back(node);
    }
    return t;
}

}  // namespace

void SurrogateModel::save(const std::string& path) const {
    json doc;
    doc["format"] = "pipeforge-surrogate-v1";
    doc["kind"] = kind == SurrogateKind::Prp ? "prp" : "lr";
    doc["feature_names"] = feature_names;
    doc["seed"] = seed;
    doc["manifest"] = {{"dataset_ids", dataset_ids}, {"labels", labels}};
    doc["groups"] = {{"ensemble", {"rf", "ada", "gb", "dt"}}, {"svm", {"lsvc", "rbfsvc"}}};
    json trees = json::array();
    for (const Tree& t : forest.trees) trees.push_back(tree_to_json(t));
    doc["forest"] = {{"class_set", forest.class_set},
                     {"feature_names", forest.feature_names},
                     {"trees", std::move(trees)}};
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError(path + ": cannot open file for writing");
    out << doc.dump(1, '\t') << '\n';
    if (!out) throw DataError(path + ": write failed");
}

SurrogateModel SurrogateModel::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError(path + ": cannot open model file");
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw DataError(path + ": model parse error: " + e.what());
    }
    try {
        if (doc.at("format").get<std::string>() != "pipeforge-surrogate-v1")
            throw DataError(path + ": unknown model format");
        SurrogateModel model;
        model.kind = doc.at("kind").get<std::string>() == "prp" ? SurrogateKind::Prp
                                                                : SurrogateKind::Lr;
        model.feature_names = doc.at("feature_names").get<std::vector<std::string>>();
        model.seed = doc.at("seed").get<std::uint64_t>();
        model.dataset_ids = doc.at("manifest").at("dataset_ids").get<std::vector<std::string>>();
        model.labels = doc.at("manifest").at("labels").get<std::vector<std::string>>();
        model.forest.mode = LearnerMode::Rf;
        model.forest.class_set = doc.at("forest").at("class_set").get<std::vector<std::string>>();
        model.forest.feature_names =
            doc.at("forest").at("feature_names").get<std::vector<std::string>>();
        for (const auto& t : doc.at("forest").at("trees")) model.forest.trees.push_back(tree_from_json(t));
        return model;
    } catch (const json::exception& e) {
        throw DataError(path + ": model parse error: " + e.what());
    }
}

}  // namespace pipeforge
