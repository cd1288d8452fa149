#include "pipeforge/search.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <unordered_set>

#include "pipeforge/transformers.hpp"

namespace pipeforge {

SearchSpace SearchSpace::defaults() {
    SearchSpace s;
    s.scalers = {"stdsc", "minmax", "robustsc", "norm", "powertf", "noop"};
    s.extractors = {"pca", "ica", "fa", "noop"};
    s.learners = {"rf", "ada", "dt", "gb", "lsvc", "rbfsvc"};
    return s;
}

void SearchSpace::validate(const ComponentRegistry& registry) const {
    auto check = [&](const std::vector<std::string>& names, ComponentKind kind, const char* role) {
        std::unordered_set<std::string> seen;
        for (const auto& n : names) {
            if (!seen.insert(n).second)
                throw PipelineError(std::string("search space: duplicate ") + role + " '" + n + "'");
            if (registry.kind_of(n) != kind)
                throw PipelineError(std::string("search space: '") + n + "' is not a " + role);
        }
    };
    check(scalers, ComponentKind::Transformer, "scaler");
    check(extractors, ComponentKind::Transformer, "extractor");
    check(learners, ComponentKind::Learner, "learner");
}

// ---------------------------------------------------------------------------
// cleaning

std::pair<DataTable, TargetVector> base_clean(const DataTable& table, const TargetVector& target) {
    if (target.size() != table.n_rows())
        throw DataError("base_clean: target length does not match table rows");
    TargetVector dummy;
    ColumnNaFilter colnarm;
    colnarm.fit(table, dummy);
    DataTable cols_kept = colnarm.transform(table);

    std::vector<std::size_t> rows = rows_without_na(cols_kept);
    if (cols_kept.n_rows() > 0 && rows.empty())
        throw DataError("base_clean: every row contains an NA");
    DataTable cleaned = cols_kept.take_rows(rows);
    TargetVector target_kept = target.take(rows);

    DataTable cat = select_features(cleaned, ColumnKind::Categorical);
    DataTable num = select_features(cleaned, ColumnKind::Numeric);
    OneHotEncoder ohe;
    DataTable encoded = ohe.fit_transform(cat, target_kept);
    return {hconcat(encoded, num), target_kept};
}

// ---------------------------------------------------------------------------
// enumeration

std::vector<std::pair<std::string, std::string>> enumerate_blocks(const SearchSpace& space) {
    std::vector<std::pair<std::string, std::string>> blocks;
    blocks.reserve(space.scalers.size() * space.extractors.size());
    for (const auto& sc : space.scalers)
        for (const auto& fx : space.extractors) blocks.emplace_back(sc, fx);
    return blocks;
}

namespace {

ExprAst block_ast(const std::string& sc, const std::string& fx) {
    std::vector<ExprAst> parts;
    parts.push_back(ExprAst::name(sc));
    parts.push_back(ExprAst::name(fx));
    return ExprAst::pipe(std::move(parts));
}

ExprAst with_learner(ExprAst prpl, const std::string& learner) {
    std::vector<ExprAst> parts;
    parts.push_back(std::move(prpl));
    parts.push_back(ExprAst::name(learner));
    return ExprAst::pipe(std::move(parts));
}

ExprAst pair_ast(const std::pair<std::string, std::string>& b1,
                 const std::pair<std::string, std::string>& b2) {
    std::vector<ExprAst> blocks;
    blocks.push_back(block_ast(b1.first, b1.second));
    blocks.push_back(block_ast(b2.first, b2.second));
    return ExprAst::union_of(std::move(blocks));
}

int block_noops(const std::pair<std::string, std::string>& b) {
    return (b.first == "noop" ? 1 : 0) + (b.second == "noop" ? 1 : 0);
}

Candidate make_candidate(ExprAst ast, std::string sc1, std::string fx1, std::string sc2,
                         std::string fx2, std::string learner) {
    Candidate c;
    c.signature = render(ast);
    c.ast = std::move(ast);
    c.sc1 = std::move(sc1);
    c.fx1 = std::move(fx1);
    c.sc2 = std::move(sc2);
    c.fx2 = std::move(fx2);
    c.learner = std::move(learner);
    return c;
}

bool space_has_noop(const SearchSpace& space) {
    return std::count(space.scalers.begin(), space.scalers.end(), "noop") &&
           std::count(space.extractors.begin(), space.extractors.end(), "noop");
}

}  // namespace

std::vector<Candidate> enumerate_one_block(const SearchSpace& space) {
    std::vector<Candidate> out;
    out.reserve(space.scalers.size() * space.extractors.size() * space.learners.size());
    for (const auto& sc : space.scalers)
        for (const auto& fx : space.extractors)
            for (const auto& lr : space.learners)
                out.push_back(
                    make_candidate(with_learner(block_ast(sc, fx), lr), sc, fx, "", "", lr));
    return out;
}

std::vector<Candidate> enumerate_two_block(const SearchSpace& space, int min_noops) {
    auto blocks = enumerate_blocks(space);
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        for (std::size_t j = 0; j < blocks.size(); ++j) {
            if (i == j) continue;
            if (block_noops(blocks[i]) + block_noops(blocks[j]) < min_noops) continue;
            pairs.emplace_back(i, j);
        }
    }
    std::vector<Candidate> out;
    if (pairs.empty() && min_noops > 0 && space_has_noop(space)) {
        // only the identity preprocessing qualifies; pair the all-noop block
        // with itself
        for (const auto& lr : space.learners) {
            ExprAst prpl = pair_ast({"noop", "noop"}, {"noop", "noop"});
            out.push_back(make_candidate(with_learner(std::move(prpl), lr), "noop", "noop", "noop",
                                         "noop", lr));
        }
        return out;
    }
    out.reserve(pairs.size() * space.learners.size());
    for (auto [i, j] : pairs) {
        for (const auto& lr : space.learners) {
            ExprAst prpl = pair_ast(blocks[i], blocks[j]);
            out.push_back(make_candidate(with_learner(std::move(prpl), lr), blocks[i].first,
                                         blocks[i].second, blocks[j].first, blocks[j].second, lr));
        }
    }
    return out;
}

ExprAst default_surrogate_pipeline() {
    std::vector<ExprAst> union_parts;
    union_parts.push_back(block_ast("catf", "ohe"));
    union_parts.push_back(ExprAst::name("numf"));
    std::vector<ExprAst> pipe_parts;
    pipe_parts.push_back(ExprAst::union_of(std::move(union_parts)));
    pipe_parts.push_back(ExprAst::name("robustsc"));
    return ExprAst::pipe(std::move(pipe_parts));
}

// ---------------------------------------------------------------------------
// evaluation

namespace {

std::vector<CandidateResult> evaluate_candidates(std::vector<Candidate> candidates,
                                                 const ComponentRegistry& registry,
                                                 const DataTable& table,
                                                 const TargetVector& target, int k,
                                                 std::uint64_t seed, ThreadPool* pool) {
    std::vector<CandidateResult> results(candidates.size());
    auto evaluate_one = [&](std::size_t i) {
        CandidateResult& r = results[i];
        r.candidate = std::move(candidates[i]);
        try {
            r.cv = crossvalidate(r.candidate.ast, registry, table, target, k, seed, nullptr);
        } catch (const std::exception& e) {
            r.failed = true;
            r.error = e.what();
            r.cv = CvResult{};
            r.cv.mean_err = 100.0;  // sentinel: record-and-continue
            r.cv.signature = r.candidate.signature;
            r.cv.fold_errors.assign(k, 100.0);
        }
    };
    if (pool) pool->parallel_for(results.size(), evaluate_one);
    else
        for (std::size_t i = 0; i < results.size(); ++i) evaluate_one(i);
    return results;
}

std::size_t best_of_range(const std::vector<CandidateResult>& results, std::size_t begin,
                          std::size_t end) {
    std::size_t best = begin;
    for (std::size_t i = begin + 1; i < end; ++i)
        if (results[i].cv.mean_err < results[best].cv.mean_err) best = i;
    return best;
}

void assign_ranks(std::vector<CandidateResult>& results) {
    std::vector<std::size_t> order(results.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return results[a].cv.mean_err < results[b].cv.mean_err;
    });
    for (std::size_t pos = 0; pos < order.size(); ++pos)
        results[order[pos]].rank = static_cast<int>(pos) + 1;
}

}  // namespace

StrategyReport all_all(const SearchSpace& space, const ComponentRegistry& registry,
                       const DataTable& table, const TargetVector& target, int k,
                       std::uint64_t seed, int blocks, ThreadPool* pool) {
    const auto start = std::chrono::steady_clock::now();
    space.validate(registry);
    auto candidates = blocks == 1 ? enumerate_one_block(space) : enumerate_two_block(space);
    StrategyReport report;
    report.strategy = "all-all";
    report.blocks = blocks;
    report.results = evaluate_candidates(std::move(candidates), registry, table, target, k, seed, pool);
    if (report.results.empty()) throw PipelineError("all-all: empty candidate set");
    report.best_index = best_of_range(report.results, 0, report.results.size());
    assign_ranks(report.results);
    report.cv_op_count = static_cast<std::size_t>(k) * report.results.size();
    report.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

StrategyReport one_all(const SearchSpace& space, const ComponentRegistry& registry,
                       const DataTable& table, const TargetVector& target, int k,
                       std::uint64_t seed, const std::string& surrogate_learner,
                       ThreadPool* pool) {
    const auto start = std::chrono::steady_clock::now();
    space.validate(registry);
    if (!std::count(space.learners.begin(), space.learners.end(), surrogate_learner))
        throw PipelineError("one-all: surrogate learner '" + surrogate_learner +
                            "' is not in the search space");

    // stage 1: every one-block PRPL under the surrogate learner
    auto blocks = enumerate_blocks(space);
    std::vector<Candidate> stage1;
    stage1.reserve(blocks.size());
    for (const auto& [sc, fx] : blocks)
        stage1.push_back(make_candidate(with_learner(block_ast(sc, fx), surrogate_learner), sc, fx,
                                        "", "", surrogate_learner));
    StrategyReport report;
    report.strategy = "one-all";
    report.blocks = 1;
    report.results = evaluate_candidates(std::move(stage1), registry, table, target, k, seed, pool);
    std::size_t best_prpl = best_of_range(report.results, 0, report.results.size());
    const std::string sc = report.results[best_prpl].candidate.sc1;
    const std::string fx = report.results[best_prpl].candidate.fx1;

    // stage 2: the winning PRPL under every learner
    std::vector<Candidate> stage2;
    stage2.reserve(space.learners.size());
    for (const auto& lr : space.learners)
        stage2.push_back(make_candidate(with_learner(block_ast(sc, fx), lr), sc, fx, "", "", lr));
    auto stage2_results =
        evaluate_candidates(std::move(stage2), registry, table, target, k, seed, pool);
    const std::size_t stage2_begin = report.results.size();
    for (auto& r : stage2_results) report.results.push_back(std::move(r));

    report.best_index = best_of_range(report.results, stage2_begin, report.results.size());
    assign_ranks(report.results);
    report.cv_op_count = static_cast<std::size_t>(k) * report.results.size();
    report.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

StrategyReport all_one(const SearchSpace& space, const ComponentRegistry& registry,
                       const DataTable& table, const TargetVector& target, int k,
                       std::uint64_t seed, const ExprAst& surrogate_pipeline, int blocks,
                       int min_noops, ThreadPool* pool) {
    const auto start = std::chrono::steady_clock::now();
    space.validate(registry);
    {
        Workflow probe = compile(surrogate_pipeline, registry, seed);
        if (probe.terminal_is_learner())
            throw PipelineError("all-one: the surrogate pipeline must be learner-free");
    }

    // stage 1: every learner on the surrogate pipeline
    std::vector<Candidate> stage1;
    stage1.reserve(space.learners.size());
    for (const auto& lr : space.learners)
        stage1.push_back(make_candidate(with_learner(surrogate_pipeline, lr), "", "", "", "", lr));
    StrategyReport report;
    report.strategy = "all-one";
    report.blocks = blocks;
    report.results = evaluate_candidates(std::move(stage1), registry, table, target, k, seed, pool);
    std::size_t best_lr_idx = best_of_range(report.results, 0, report.results.size());
    const std::string best_lr = report.results[best_lr_idx].candidate.learner;

    // stage 2: the winning learner on every enumerated PRPL
    std::vector<Candidate> stage2;
    if (blocks == 1) {
        for (const auto& [sc, fx] : enumerate_blocks(space))
            stage2.push_back(
                make_candidate(with_learner(block_ast(sc, fx), best_lr), sc, fx, "", "", best_lr));
    } else {
        SearchSpace narrowed = space;
        narrowed.learners = {best_lr};
        stage2 = enumerate_two_block(narrowed, min_noops);
    }
    auto stage2_results =
        evaluate_candidates(std::move(stage2), registry, table, target, k, seed, pool);
    const std::size_t stage2_begin = report.results.size();
    for (auto& r : stage2_results) report.results.push_back(std::move(r));

    report.best_index = best_of_range(report.results, stage2_begin, report.results.size());
    assign_ranks(report.results);
    report.cv_op_count = static_cast<std::size_t>(k) * report.results.size();
    report.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

double exhaustive_speedup(const SearchSpace& space, int blocks, std::size_t evaluated) {
    if (evaluated == 0) return 0.0;
    std::size_t full;
    if (blocks == 1) {
        full = space.scalers.size() * space.extractors.size() * space.learners.size();
    } else {
        std::size_t b = space.scalers.size() * space.extractors.size();
        full = b * (b - 1) * space.learners.size();
    }
    return static_cast<double>(full) / static_cast<double>(evaluated);
}

void write_results_csv(const std::string& path, const StrategyReport& report) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError(path + ": cannot open file for writing");
    out << "signature,strategy,mean_err,std_err,wall_time_s,rank_in_run,sc1,fx1,sc2,fx2,learner\n";
    std::vector<std::size_t> order(report.results.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                         return report.results[a].rank < report.results[b].rank;
                     });
    for (std::size_t i : order) {
        const CandidateResult& r = report.results[i];
        out << r.candidate.signature << ',' << report.strategy << ','
            << format_double(r.cv.mean_err) << ',' << format_double(r.cv.std_err) << ','
            << format_double(r.cv.wall_time) << ',' << r.rank << ',' << r.candidate.sc1 << ','
            << r.candidate.fx1 << ',' << r.candidate.sc2 << ',' << r.candidate.fx2 << ','
            << r.candidate.learner << '\n';
    }
    if (!out) throw DataError(path + ": write failed");
}

std::string run_summary(const StrategyReport& report, const SearchSpace& space) {
    const CandidateResult& b = report.best();
    char ratio[32];
    std::snprintf(ratio, sizeof(ratio), "%.1f",
                  exhaustive_speedup(space, report.blocks, report.results.size()));
    char err[64];
    std::snprintf(err, sizeof(err), "%.2f ± %.2f", b.cv.mean_err, b.cv.std_err);
    char wall[32];
    std::snprintf(wall, sizeof(wall), "%.2f", report.wall_time);
    std::string s;
    s += "strategy=" + report.strategy;
    s += " blocks=" + std::to_string(report.blocks);
    s += " best=\"" + b.candidate.signature + "\"";
    s += " mean_err=" + std::string(err);
    s += " candidates=" + std::to_string(report.results.size());
    s += " cv_ops=" + std::to_string(report.cv_op_count);
    s += " speedup_vs_all_all=" + std::string(ratio) + "x";
    s += " wall_s=" + std::string(wall);
    return s;
}

}  // namespace pipeforge
