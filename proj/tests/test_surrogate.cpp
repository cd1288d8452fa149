#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <set>

#include "pipeforge/surrogate.hpp"
#include "testutil.hpp"

using namespace pipeforge;

namespace {

Metafeatures mf_of(const testutil::Dataset& d) { return extract_metafeatures(d.table, d.target); }

}  // namespace

TEST_CASE("metafeature definitions") {
    auto d = testutil::two_gaussians(100, 2.0, 1.0, 3);
    Metafeatures mf = mf_of(d);
    CHECK(mf.values[0] == 100.0);                      // n_rows
    CHECK(mf.values[1] == 2.0);                        // n_cols
    CHECK(mf.values[2] == 2.0);                        // numeric
    CHECK(mf.values[3] == 0.0);                        // categorical
    CHECK(mf.values[4] == 2.0);                        // classes
    CHECK(mf.values[5] == doctest::Approx(std::log(2.0)));  // balanced entropy
    CHECK(mf.values[6] == 0.0);                        // na fraction
    CHECK(mf.values[7] == doctest::Approx(0.02));      // 2/100
    CHECK(mf.values[11] == 0.0);                       // no categorical cardinality
}

TEST_CASE("jm1-shaped NA fraction") {
    // 22 feature columns x 10885 rows with exactly 25 NA cells
    std::vector<Column> cols;
    Rng rng(4);
    for (int j = 0; j < 22; ++j) {
        std::vector<double> v(10885);
        for (auto& x : v) x = rng.normal();
        std::vector<std::uint8_t> na(10885, 0);
        cols.push_back(Column::numeric("f" + std::to_string(j), std::move(v), std::move(na)));
    }
    DataTable t(std::move(cols));
    // punch in 25 NAs via reconstruction of one column
    std::vector<double> v(10885);
    std::vector<std::uint8_t> na(10885, 0);
    for (int i = 0; i < 25; ++i) na[i * 7] = 1;
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = na[i] ? 0.0 : 1.5;
    std::vector<Column> rebuilt = t.columns();
    rebuilt[0] = Column::numeric("f0", std::move(v), std::move(na));
    DataTable jm1(std::move(rebuilt));

    std::vector<std::string> labels(10885);
    for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = i % 5 ? "n" : "y";
    Metafeatures mf = extract_metafeatures(jm1, TargetVector::from_labels(labels));
    CHECK(mf.values[6] == doctest::Approx(25.0 / (22.0 * 10885.0)).epsilon(1e-9));
    CHECK(mf.values[6] == doctest::Approx(1.04e-4).epsilon(0.01));
}

TEST_CASE("metafeatures are total on degenerate tables") {
    // all-NA numeric column, constant column, zero rows of categorical data
    std::vector<std::uint8_t> all_na(10, 1);
    DataTable weird({Column::numeric("dead", std::vector<double>(10, 0.0), all_na),
                     Column::numeric("const", std::vector<double>(10, 3.0)),
                     Column::categorical("c", std::vector<std::string>(10, "only"))});
    std::vector<std::string> labels(10, "a");
    labels[0] = "b";
    Metafeatures mf = extract_metafeatures(weird, TargetVector::from_labels(labels));
    for (double v : mf.values) CHECK(std::isfinite(v));
    Metafeatures again = extract_metafeatures(weird, TargetVector::from_labels(labels));
    CHECK(mf.values == again.values);

    DataTable empty{std::size_t{0}};
    Metafeatures zero = extract_metafeatures(empty, TargetVector{});
    for (double v : zero.values) CHECK(std::isfinite(v));
}

TEST_CASE("mean absolute correlation reacts to duplicated features") {
    Rng rng(12);
    std::vector<double> a(200);
    for (auto& x : a) x = rng.normal();
    std::vector<double> b = a;  // perfectly correlated
    DataTable t({Column::numeric("a", std::move(a)), Column::numeric("b", std::move(b))});
    std::vector<std::string> labels(200);
    for (std::size_t i = 0; i < 200; ++i) labels[i] = i % 2 ? "x" : "y";
    Metafeatures mf = extract_metafeatures(t, TargetVector::from_labels(labels));
    CHECK(mf.values[10] == doctest::Approx(1.0));
}

TEST_CASE("complexity categories by noop count") {
    CHECK(complexity_of_signature("(robustsc |> noop) + (norm |> pca) |> rf") == 1);
    CHECK(complexity_of_signature("(noop |> noop) + (noop |> noop) |> lsvc") == 4);
    CHECK(complexity_of_signature("(minmax |> noop) + (powertf |> fa)") == 1);
    CHECK(complexity_of_signature("(stdsc |> noop) + (noop |> noop) |> gb") == 3);
    CHECK(complexity_of_signature("(noop |> pca) + (noop |> noop)") == 3);

    // invariant under block order swap
    CHECK(complexity_of_signature("(noop |> noop) + (stdsc |> noop) |> gb") ==
          complexity_of_signature("(stdsc |> noop) + (noop |> noop) |> gb"));

    CHECK_THROWS_AS(complexity_of_signature("stdsc |> pca |> rf"), DataError);
    CHECK_THROWS_AS(complexity_of_signature("rf"), DataError);
}

TEST_CASE("learner groups partition the roster") {
    SearchSpace d = SearchSpace::defaults();
    auto ens = group_members(LearnerGroup::Ensemble, d.learners);
    auto svm = group_members(LearnerGroup::Svm, d.learners);
    CHECK(ens == std::vector<std::string>{"rf", "ada", "dt", "gb"});
    CHECK(svm == std::vector<std::string>{"lsvc", "rbfsvc"});
    CHECK(ens.size() + svm.size() == d.learners.size());
    CHECK(group_of_learner("dt") == LearnerGroup::Ensemble);
    CHECK_THROWS_AS(group_of_learner("zzz"), DataError);
}

TEST_CASE("surrogate model persistence reproduces predictions bit for bit") {
    // small direct training set for the forest: metafeature rows with labels
    Rng rng(9);
    CorpusRun run;
    for (int i = 0; i < 8; ++i) {
        Metafeatures mf;
        for (auto& v : mf.values) v = rng.normal() * 10;
        run.metafeatures.push_back(mf);
        run.dataset_ids.push_back("ds" + std::to_string(i));
        run.categories.push_back(i % 2 ? 2 : 4);
        run.groups.push_back(i % 2 ? LearnerGroup::Ensemble : LearnerGroup::Svm);
        run.best_signatures.push_back("sig");
        run.best_learners.push_back(i % 2 ? "rf" : "lsvc");
    }
    SurrogateModel prp = train_surrogate(SurrogateKind::Prp, run, 7);
    SurrogateModel lr = train_surrogate(SurrogateKind::Lr, run, 7);

    const std::string prp_path = "/tmp/pipeforge_prp.json";
    const std::string lr_path = "/tmp/pipeforge_lr.json";
    prp.save(prp_path);
    lr.save(lr_path);
    SurrogateModel prp2 = SurrogateModel::load(prp_path);
    SurrogateModel lr2 = SurrogateModel::load(lr_path);
    CHECK(prp2.kind == SurrogateKind::Prp);
    CHECK(prp2.dataset_ids == prp.dataset_ids);
    CHECK(prp2.labels == prp.labels);

    for (int i = 0; i < 40; ++i) {
        Metafeatures probe;
        for (auto& v : probe.values) v = rng.normal() * 10;
        CHECK(prp.predict_category(probe) == prp2.predict_category(probe));
        CHECK(lr.predict_group(probe) == lr2.predict_group(probe));
    }
    CHECK_THROWS_AS(SurrogateModel::load("/tmp/pipeforge_missing_model.json"), DataError);
    std::remove(prp_path.c_str());
    std::remove(lr_path.c_str());

    // wrong-kind queries are rejected
    CHECK_THROWS_AS(prp.predict_group(run.metafeatures[0]), DataError);
    CHECK_THROWS_AS(lr.predict_category(run.metafeatures[0]), DataError);
}

TEST_CASE("single-label corpora are rejected") {
    Rng rng(10);
    CorpusRun run;
    for (int i = 0; i < 4; ++i) {
        Metafeatures mf;
        for (auto& v : mf.values) v = rng.normal();
        run.metafeatures.push_back(mf);
        run.dataset_ids.push_back("d" + std::to_string(i));
        run.categories.push_back(2);
        run.groups.push_back(LearnerGroup::Svm);
        run.best_signatures.push_back("sig");
        run.best_learners.push_back("lsvc");
    }
    CHECK_THROWS_AS(train_surrogate(SurrogateKind::Prp, run, 1), DataError);
    CHECK_THROWS_AS(train_surrogate(SurrogateKind::Lr, run, 1), DataError);
}

TEST_CASE("pruning restricts learners and the two-block floor") {
    Rng rng(21);
    CorpusRun run;
    // engineer two metafeature clusters with known labels
    for (int i = 0; i < 10; ++i) {
        Metafeatures mf;
        for (auto& v : mf.values) v = rng.normal();
        bool simple = i % 2 == 0;
        mf.values[0] = simple ? 100.0 : 5000.0;
        mf.values[8] = simple ? 0.1 : 4.0;
        run.metafeatures.push_back(mf);
        run.dataset_ids.push_back("d" + std::to_string(i));
        run.categories.push_back(simple ? 4 : 2);
        run.groups.push_back(simple ? LearnerGroup::Svm : LearnerGroup::Ensemble);
        run.best_signatures.push_back("sig");
        run.best_learners.push_back(simple ? "lsvc" : "rf");
    }
    SurrogateModel prp = train_surrogate(SurrogateKind::Prp, run, 3);
    SurrogateModel lr = train_surrogate(SurrogateKind::Lr, run, 3);

    auto simple_data = testutil::two_gaussians(100, 3.0, 0.4, 5);
    // resubstitution-like probe: hand the model a metafeature-compatible table
    SearchSpace space = SearchSpace::defaults();
    PruneDecision d = prune_space(space, &prp, &lr, simple_data.table, simple_data.target);
    CHECK(d.predicted_category >= 1);
    CHECK(d.predicted_category <= 4);
    if (d.predicted_group == static_cast<int>(LearnerGroup::Svm))
        CHECK(d.space.learners == std::vector<std::string>{"lsvc", "rbfsvc"});
    else
        CHECK(d.space.learners == std::vector<std::string>{"rf", "ada", "dt", "gb"});

    // pruned enumeration is a subset of the unpruned one (categories 1-3)
    if (d.min_noops > 0 && d.predicted_category < 4) {
        auto pruned = enumerate_two_block(d.space, d.min_noops);
        auto full = enumerate_two_block(d.space);
        CHECK(pruned.size() < full.size());
        std::set<std::string> all;
        for (const auto& c : full) all.insert(c.signature);
        for (const auto& c : pruned) CHECK(all.count(c.signature) == 1);
    }

    // extreme category: only the all-noop self-pair survives, per learner
    // group member
    SearchSpace svm_only = space;
    svm_only.learners = {"lsvc", "rbfsvc"};
    auto extreme = enumerate_two_block(svm_only, 4);
    CHECK(extreme.size() == 2);
    for (const auto& c : extreme) CHECK(complexity_of_signature(c.signature) == 4);

    // category 2 candidate count sits strictly between the extremes
    auto cat2 = enumerate_two_block(space, 2);
    CHECK(cat2.size() == 102 * 6);
    CHECK(cat2.size() > 6);
    CHECK(cat2.size() < 3312);
}
