#include <doctest.h>

#include <cstring>
#include <memory>
#include <set>

#include "pipeforge/kernels.hpp"
#include "pipeforge/pipeline.hpp"
#include "pipeforge/transformers.hpp"
#include "testutil.hpp"

using namespace pipeforge;

namespace {

// test-only transformer that records a hash of every input it is fitted on
class InputProbe final : public Machine {
public:
    explicit InputProbe(std::shared_ptr<std::vector<std::uint64_t>> sink) : sink_(std::move(sink)) {}
    const std::string& name() const override { return name_; }
    void fit(const DataTable& input, const TargetVector&) override {
        sink_->push_back(table_hash(input));
    }
    DataTable transform(const DataTable& input) const override { return input; }

    static std::uint64_t table_hash(const DataTable& t) {
        std::uint64_t h = mix64(t.n_rows() * 31 + t.n_cols());
        for (std::size_t j = 0; j < t.n_cols(); ++j)
            for (std::size_t i = 0; i < t.n_rows(); ++i) {
                if (t.col(j).is_na(i)) continue;
                std::uint64_t bits;
                double v = t.col(j).kind() == ColumnKind::Numeric
                               ? t.col(j).num(i)
                               : static_cast<double>(t.col(j).code(i));
                static_assert(sizeof(bits) == sizeof(v));
                std::memcpy(&bits, &v, sizeof(bits));
                h = hash_combine(h, bits);
            }
        return h;
    }

private:
    std::string name_ = "probe";
    std::shared_ptr<std::vector<std::uint64_t>> sink_;
};

// constant-output learner for tie-break checks
class ConstLearner final : public Machine {
public:
    ConstLearner(std::string name, std::string label)
        : name_(std::move(name)), label_(std::move(label)) {}
    const std::string& name() const override { return name_; }
    bool is_learner() const override { return true; }
    void fit(const DataTable&, const TargetVector&) override { fitted_ = true; }
    DataTable transform(const DataTable& input) const override {
        if (!fitted_) throw PipelineError(name_ + ": transform before fit");
        std::vector<std::string> labels(input.n_rows(), label_);
        return DataTable({Column::categorical("prediction", labels)});
    }

private:
    std::string name_;
    std::string label_;
    bool fitted_ = false;
};

}  // namespace

TEST_CASE("the default registry serves the full component roster") {
    ComponentRegistry reg = default_registry();
    const char* transformers[] = {"catf", "numf",  "ohe",     "noop",    "stdsc",  "minmax",
                                  "robustsc", "norm", "powertf", "pca", "ica", "fa",
                                  "colnarm",  "rownarm"};
    const char* learners[] = {"rf", "ada", "dt", "gb", "lsvc", "rbfsvc"};
    for (const char* n : transformers) CHECK(reg.kind_of(n) == ComponentKind::Transformer);
    for (const char* n : learners) CHECK(reg.kind_of(n) == ComponentKind::Learner);
    CHECK(reg.names().size() == 20);
    CHECK_FALSE(reg.contains("nonsense"));
    CHECK_THROWS_AS(reg.kind_of("nonsense"), PipelineError);
    CHECK_THROWS_AS((void)reg.make("nonsense", 0), PipelineError);
}

TEST_CASE("factories hand out independent instances") {
    ComponentRegistry reg = default_registry();
    auto a = reg.make("minmax", 1);
    auto b = reg.make("minmax", 1);
    TargetVector y = TargetVector::from_labels({"p", "q", "p"});
    DataTable t({Column::numeric("x", {1, 2, 3})});
    a->fit(t, y);
    // b must still be unfitted
    CHECK_THROWS_AS(b->transform(t), PipelineError);
}

TEST_CASE("compiling the full example expression and running it end to end") {
    ComponentRegistry reg = default_registry();
    ExprAst ast = parse("((catf |> ohe) + (numf |> minmax |> pca)) |> rf");
    auto d = testutil::mixed_na_table(90, 3, 4, 0.0, 17);
    Workflow w = compile(ast, reg, 5);
    CHECK(w.terminal_is_learner());
    DataTable out = w.fit_transform(d.table, d.target);
    REQUIRE(out.n_cols() == 1);
    CHECK(out.col(0).name() == "prediction");
    CHECK(out.n_rows() == 90);
    std::set<std::string> classes(d.target.class_set().begin(), d.target.class_set().end());
    for (std::size_t i = 0; i < out.n_rows(); ++i) CHECK(classes.count(out.col(0).label(i)) == 1);
}

TEST_CASE("a single name compiles to a leaf") {
    ComponentRegistry reg = default_registry();
    auto d = testutil::two_gaussians(60, 3.0, 0.5, 2);
    Workflow w = compile(parse("dt"), reg, 1);
    CHECK(w.terminal_is_learner());
    DataTable out = w.fit_transform(d.table, d.target);
    CHECK(out.n_cols() == 1);
}

TEST_CASE("learners are rejected outside the terminal position") {
    ComponentRegistry reg = default_registry();
    CHECK_THROWS_WITH_AS(compile(parse("rf |> pca"), reg, 1),
                         doctest::Contains("non-terminal"), PipelineError);
    CHECK_THROWS_WITH_AS(compile(parse("(numf |> rf) + catf |> dt"), reg, 1),
                         doctest::Contains("union"), PipelineError);
    CHECK_THROWS_WITH_AS(compile(parse("numf + rf |> dt"), reg, 1),
                         doctest::Contains("union"), PipelineError);
    CHECK_THROWS_WITH_AS(compile(parse("mystery |> rf"), reg, 1),
                         doctest::Contains("unregistered"), PipelineError);
}

TEST_CASE("a transformer-terminated pipeline is a legal feature filter") {
    ComponentRegistry reg = default_registry();
    auto d = testutil::mixed_na_table(40, 2, 3, 0.0, 23);
    Workflow w = compile(parse("numf |> minmax"), reg, 9);
    CHECK_FALSE(w.terminal_is_learner());
    DataTable out = w.fit_transform(d.table, d.target);
    CHECK(out.n_cols() == 3);
    for (std::size_t j = 0; j < out.n_cols(); ++j) {
        for (std::size_t i = 0; i < out.n_rows(); ++i) {
            CHECK(out.col(j).num(i) >= 0.0);
            CHECK(out.col(j).num(i) <= 1.0);
        }
    }
}

TEST_CASE("union of complementary selectors is a column permutation") {
    ComponentRegistry reg = default_registry();
    auto d = testutil::mixed_na_table(30, 3, 2, 0.0, 29);
    Workflow w = compile(parse("catf + numf"), reg, 1);
    DataTable out = w.fit_transform(d.table, d.target);
    REQUIRE(out.n_cols() == d.table.n_cols());
    std::multiset<std::string> before, after;
    for (std::size_t j = 0; j < d.table.n_cols(); ++j) before.insert(d.table.col(j).name());
    for (std::size_t j = 0; j < out.n_cols(); ++j) after.insert(out.col(j).name());
    CHECK(before == after);
    for (std::size_t j = 0; j < out.n_cols(); ++j) {
        const Column* orig = d.table.find(out.col(j).name());
        REQUIRE(orig != nullptr);
        CHECK(out.col(j).cells_equal(*orig));
    }
}

TEST_CASE("fitted state is applied, never re-estimated") {
    ComponentRegistry reg = default_registry();
    TargetVector y = TargetVector::from_labels({"p", "q", "p"});
    Workflow w = compile(parse("minmax"), reg, 1);
    w.fit_transform(DataTable({Column::numeric("x", {1, 2, 3})}), y);
    DataTable out = w.transform(DataTable({Column::numeric("x", {2.0})}));
    CHECK(out.col(0).num(0) == doctest::Approx(0.5));

    // one-hot keeps its fit-time dictionary: unseen category encodes to zeros
    Workflow ohe = compile(parse("ohe"), reg, 1);
    ohe.fit_transform(DataTable({Column::categorical("c", {"a", "b"})}),
                      TargetVector::from_labels({"p", "q"}));
    DataTable enc = ohe.transform(DataTable({Column::categorical("c", {"c"})}));
    REQUIRE(enc.n_cols() == 2);
    CHECK(enc.col(0).num(0) == 0.0);
    CHECK(enc.col(1).num(0) == 0.0);
}

TEST_CASE("transform before fit is an error") {
    ComponentRegistry reg = default_registry();
    Workflow w = compile(parse("minmax |> pca"), reg, 1);
    CHECK_THROWS_AS(w.transform(DataTable({Column::numeric("x", {1.0})})), PipelineError);
}

TEST_CASE("union children all see the untouched parent input") {
    ComponentRegistry reg = default_registry();
    auto sink = std::make_shared<std::vector<std::uint64_t>>();
    reg.add("probe", ComponentKind::Transformer,
            [sink](std::uint64_t) { return std::make_unique<InputProbe>(sink); });
    auto d = testutil::mixed_na_table(25, 2, 2, 0.0, 31);
    Workflow w = compile(parse("probe + (noop |> probe) + probe"), reg, 1);
    w.fit_transform(d.table, d.target);
    REQUIRE(sink->size() == 3);
    CHECK((*sink)[0] == (*sink)[1]);
    CHECK((*sink)[1] == (*sink)[2]);
    CHECK((*sink)[0] == InputProbe::table_hash(d.table));
}

TEST_CASE("n-ary pipe equals the nested binary evaluation") {
    ComponentRegistry reg = default_registry();
    auto d = testutil::mixed_na_table(35, 2, 3, 0.0, 37);
    Workflow flat = compile(parse("numf |> minmax |> stdsc"), reg, 4);
    DataTable out_flat = flat.fit_transform(d.table, d.target);

    Workflow first = compile(parse("numf |> minmax"), reg, 4);
    DataTable mid = first.fit_transform(d.table, d.target);
    Workflow second = compile(parse("stdsc"), reg, 4);
    DataTable out_nested = second.fit_transform(mid, d.target);
    CHECK(testutil::tables_cell_equal(out_flat, out_nested));
}

TEST_CASE("identical seed and data give identical outputs") {
    ComponentRegistry reg = default_registry();
    auto d = testutil::two_gaussians(150, 2.0, 1.0, 41);
    ExprAst ast = parse("stdsc |> rf");
    Workflow a = compile(ast, reg, 99);
    Workflow b = compile(ast, reg, 99);
    DataTable out_a = a.fit_transform(d.table, d.target);
    DataTable out_b = b.fit_transform(d.table, d.target);
    CHECK(testutil::tables_cell_equal(out_a, out_b));
}

TEST_CASE("errors carry the failing element's path") {
    ComponentRegistry reg = default_registry();
    // stdsc inside the union sees a categorical column and fails
    auto d = testutil::mixed_na_table(20, 2, 2, 0.0, 43);
    Workflow w = compile(parse("(stdsc |> noop) + numf |> dt"), reg, 1);
    try {
        w.fit_transform(d.table, d.target);
        FAIL("expected a failure");
    } catch (const PipelineError& e) {
        std::string msg = e.what();
        CHECK(msg.find("pipe[0]") != std::string::npos);
        CHECK(msg.find("union[0]") != std::string::npos);
        CHECK(msg.find("stdsc") != std::string::npos);
    }
}

TEST_CASE("degenerate single-class training falls back to a constant predictor") {
    ComponentRegistry reg = default_registry();
    DataTable t({Column::numeric("x", {1, 2, 3})});
    TargetVector y = TargetVector::from_labels({"only", "only", "only"});
    Workflow w = compile(parse("rf"), reg, 1);
    DataTable out = w.fit_transform(t, y);
    for (std::size_t i = 0; i < 3; ++i) CHECK(out.col(0).label(i) == "only");
}

TEST_CASE("vote ensemble: plurality, identity, and first-member ties") {
    ComponentRegistry reg = default_registry();
    reg.add("always_b", ComponentKind::Learner,
            [](std::uint64_t) { return std::make_unique<ConstLearner>("always_b", "b"); });
    reg.add("always_a", ComponentKind::Learner,
            [](std::uint64_t) { return std::make_unique<ConstLearner>("always_a", "a"); });
    auto d = testutil::two_gaussians(80, 3.0, 0.5, 51);

    // single member behaves exactly like the learner
    VoteEnsemble solo({"dt"}, reg, 7);
    solo.fit(d.table, d.target);
    auto solo_pred = solo.predict(d.table);
    Workflow lone = compile(parse("dt"), reg, hash_combine(7, 1));
    DataTable lone_out = lone.fit_transform(d.table, d.target);
    for (std::size_t i = 0; i < solo_pred.size(); ++i)
        CHECK(solo_pred[i] == lone_out.col(0).label(i));

    // 2-vs-1 plurality
    VoteEnsemble majority({"always_b", "always_b", "always_a"}, reg, 1);
    majority.fit(d.table, d.target);
    for (const auto& p : majority.predict(d.table)) CHECK(p == "b");

    // full disagreement: the first member wins every row
    VoteEnsemble tie({"always_b", "always_a"}, reg, 1);
    tie.fit(d.table, d.target);
    for (const auto& p : tie.predict(d.table)) CHECK(p == "b");

    CHECK_THROWS_AS(VoteEnsemble(std::vector<std::string>{}, reg, 1), PipelineError);
    CHECK_THROWS_AS(VoteEnsemble({"minmax"}, reg, 1), PipelineError);
}
