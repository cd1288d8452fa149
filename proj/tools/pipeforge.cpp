// Command-line surface: dataset ingestion, strategy runs, surrogate
// training/application, result export.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <thread>

#include "pipeforge/data.hpp"
#include "pipeforge/search.hpp"
#include "pipeforge/surrogate.hpp"
#include "pipeforge/threadpool.hpp"

namespace fs = std::filesystem;
using namespace pipeforge;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBadArgs = 2;
constexpr int kExitDataError = 3;
constexpr int kExitSearchFailure = 4;

unsigned default_threads() {
    if (const char* env = std::getenv("PIPEFORGE_THREADS")) {
        int v = std::atoi(env);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

struct CommonOpts {
    std::string data;
    std::string target;
    int folds = 10;
    std::uint64_t seed = 1;
    unsigned threads = default_threads();
    std::string out;
    bool no_clean = false;
    std::vector<std::string> registry_names;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_clean) {
    cmd->add_option("--data", o.data, "input CSV file")->required();
    cmd->add_option("--target", o.target, "target column name")->required();
    cmd->add_option("--folds", o.folds, "CV fold count (k >= 2)");
    cmd->add_option("--seed", o.seed, "run seed");
    cmd->add_option("--threads", o.threads, "worker count (default $PIPEFORGE_THREADS)");
    cmd->add_option("--out", o.out, "results CSV path");
    cmd->add_option("--registry", o.registry_names,
                    "comma-separated component subset for the search space")
        ->delimiter(',');
    if (with_clean) cmd->add_flag("--no-clean", o.no_clean, "skip the base cleaning pipeline");
}

SearchSpace build_space(const std::vector<std::string>& registry_names,
                        const ComponentRegistry& registry) {
    SearchSpace space = SearchSpace::defaults();
    if (registry_names.empty()) return space;
    for (const auto& n : registry_names) {
        if (!registry.contains(n))
            throw CLI::ValidationError("--registry", "unknown component '" + n + "'");
    }
    auto filter = [&](std::vector<std::string>& list) {
        std::vector<std::string> kept;
        for (const auto& n : list)
            if (std::count(registry_names.begin(), registry_names.end(), n)) kept.push_back(n);
        list = std::move(kept);
    };
    filter(space.scalers);
    filter(space.extractors);
    filter(space.learners);
    if (space.scalers.empty() || space.extractors.empty() || space.learners.empty())
        throw CLI::ValidationError(
            "--registry", "subset must keep at least one scaler, one extractor and one learner");
    return space;
}

LoadedDataset load_and_check(const CommonOpts& o) {
    LoadedDataset ds = load_csv(o.data, o.target);
    if (ds.target.n_classes() < 2)
        throw DataError(o.data + ": target has fewer than 2 classes");
    return ds;
}

int run_search(const CommonOpts& o, const std::string& strategy, int blocks,
               const std::string& surrogate_learner, const std::string& surrogate_pipeline) {
    ComponentRegistry registry = default_registry();
    SearchSpace space = build_space(o.registry_names, registry);
    ThreadPool pool(o.threads);

    LoadedDataset ds = load_and_check(o);
    DataTable table = ds.table;
    TargetVector target = ds.target;
    if (!o.no_clean) std::tie(table, target) = base_clean(table, target);

    StrategyReport report;
    if (strategy == "all-all") {
        report = all_all(space, registry, table, target, o.folds, o.seed, blocks, &pool);
    } else if (strategy == "one-all") {
        report = one_all(space, registry, table, target, o.folds, o.seed, surrogate_learner, &pool);
    } else {
        ExprAst surrogate =
            surrogate_pipeline.empty() ? default_surrogate_pipeline() : parse(surrogate_pipeline);
        report = all_one(space, registry, table, target, o.folds, o.seed, surrogate, blocks, 0,
                         &pool);
    }
    if (!o.out.empty()) write_results_csv(o.out, report);
    std::cout << run_summary(report, space) << "\n";
    return kExitOk;
}

std::vector<CorpusDataset> load_corpus(const std::string& dir) {
    fs::path manifest = fs::path(dir) / "manifest.csv";
    if (!fs::exists(manifest))
        throw DataError(manifest.string() + ": corpus manifest not found");
    std::vector<CorpusDataset> corpus;
    // manifest schema: file,target — one dataset per row
    LoadedDataset m = load_csv(manifest.string(), "target");
    const Column* file_col = m.table.find("file");
    if (!file_col || file_col->kind() != ColumnKind::Categorical)
        throw DataError(manifest.string() + ": manifest needs a 'file' column");
    for (std::size_t i = 0; i < m.table.n_rows(); ++i) {
        if (file_col->is_na(i)) throw DataError(manifest.string() + ": empty file entry");
        CorpusDataset ds;
        ds.id = file_col->label(i);
        LoadedDataset loaded = load_csv((fs::path(dir) / ds.id).string(), m.target.label(i));
        ds.table = std::move(loaded.table);
        ds.target = std::move(loaded.target);
        corpus.push_back(std::move(ds));
    }
    return corpus;
}

int run_surrogate_train(const std::string& corpus_dir, const CommonOpts& o,
                        const std::string& prp_out, const std::string& lr_out) {
    ComponentRegistry registry = default_registry();
    SearchSpace space = build_space(o.registry_names, registry);
    ThreadPool pool(o.threads);

    std::vector<CorpusDataset> corpus = load_corpus(corpus_dir);
    CorpusRun run = run_corpus(corpus, space, registry, o.folds, o.seed, &pool);
    for (std::size_t i = 0; i < run.dataset_ids.size(); ++i) {
        std::cout << "dataset=" << run.dataset_ids[i] << " best=\"" << run.best_signatures[i]
                  << "\" category=" << run.categories[i]
                  << " group=" << group_name(run.groups[i]) << "\n";
    }
    if (!prp_out.empty()) {
        train_surrogate(SurrogateKind::Prp, run, o.seed).save(prp_out);
        std::cout << "wrote PRP surrogate to " << prp_out << "\n";
    }
    if (!lr_out.empty()) {
        train_surrogate(SurrogateKind::Lr, run, o.seed).save(lr_out);
        std::cout << "wrote LR surrogate to " << lr_out << "\n";
    }
    return kExitOk;
}

int run_surrogate_apply(const CommonOpts& o, const std::string& prp_path,
                        const std::string& lr_path) {
    ComponentRegistry registry = default_registry();
    SearchSpace space = build_space(o.registry_names, registry);
    ThreadPool pool(o.threads);

    std::optional<SurrogateModel> prp, lr;
    if (!prp_path.empty()) prp = SurrogateModel::load(prp_path);
    if (!lr_path.empty()) lr = SurrogateModel::load(lr_path);

    LoadedDataset ds = load_and_check(o);
    PruneDecision decision =
        prune_space(space, prp ? &*prp : nullptr, lr ? &*lr : nullptr, ds.table, ds.target);
    if (decision.fallback)
        std::cerr << "warning: pruning emptied the space; falling back to the unpruned space\n";

    DataTable table = ds.table;
    TargetVector target = ds.target;
    if (!o.no_clean) std::tie(table, target) = base_clean(table, target);

    StrategyReport report = all_one(decision.space, registry, table, target, o.folds, o.seed,
                                    default_surrogate_pipeline(), 2, decision.min_noops, &pool);
    if (!o.out.empty()) write_results_csv(o.out, report);

    const std::size_t unpruned =
        space.learners.size() + enumerate_two_block(space).size() / space.learners.size();
    char reduction[32];
    std::snprintf(reduction, sizeof(reduction), "%.1f",
                  static_cast<double>(unpruned) / static_cast<double>(report.results.size()));
    std::cout << run_summary(report, decision.space) << "\n";
    std::cout << "pruned candidates=" << report.results.size() << " unpruned=" << unpruned
              << " reduction=" << reduction << "x";
    if (decision.predicted_category > 0)
        std::cout << " predicted_category=" << decision.predicted_category;
    if (decision.predicted_group >= 0)
        std::cout << " predicted_group="
                  << group_name(static_cast<LearnerGroup>(decision.predicted_group));
    std::cout << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pipeline expression search toolkit"};
    app.require_subcommand(1);

    CommonOpts search_opts;
    std::string strategy;
    int blocks = 1;
    std::string surrogate_learner = "rf";
    std::string surrogate_pipeline;
    CLI::App* search_cmd = app.add_subcommand("search", "cross-validated pipeline search");
    add_common(search_cmd, search_opts, true);
    search_cmd->add_option("--strategy", strategy, "all-all | one-all | all-one")
        ->required()
        ->check(CLI::IsMember({"all-all", "one-all", "all-one"}));
    search_cmd->add_option("--blocks", blocks, "PRPL blocks (1 or 2)")->check(CLI::Range(1, 2));
    search_cmd->add_option("--surrogate-learner", surrogate_learner,
                           "stage-1 learner for one-all (default rf)");
    search_cmd->add_option("--surrogate-pipeline", surrogate_pipeline,
                           "stage-1 pipeline expression for all-one");

    CLI::App* surrogate_cmd = app.add_subcommand("surrogate", "train or apply surrogate models");
    surrogate_cmd->require_subcommand(1);

    CommonOpts train_opts;
    std::string corpus_dir;
    std::string train_prp, train_lr;
    CLI::App* train_cmd = surrogate_cmd->add_subcommand("train", "train PRP/LR surrogates");
    train_cmd->add_option("--data", corpus_dir, "corpus directory (CSVs + manifest.csv)")
        ->required();
    train_cmd->add_option("--folds", train_opts.folds, "CV fold count (k >= 2)");
    train_cmd->add_option("--seed", train_opts.seed, "run seed");
    train_cmd->add_option("--threads", train_opts.threads, "worker count");
    train_cmd->add_option("--registry", train_opts.registry_names,
                          "component subset for the search space")
        ->delimiter(',');
    train_cmd->add_option("--surrogate-prp", train_prp, "output path for the PRP model");
    train_cmd->add_option("--surrogate-lr", train_lr, "output path for the LR model");

    CommonOpts apply_opts;
    std::string apply_prp, apply_lr;
    CLI::App* apply_cmd =
        surrogate_cmd->add_subcommand("apply", "all-one two-block on the pruned space");
    add_common(apply_cmd, apply_opts, true);
    apply_cmd->add_option("--surrogate-prp", apply_prp, "PRP model file");
    apply_cmd->add_option("--surrogate-lr", apply_lr, "LR model file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitBadArgs;
    }

    try {
        if (search_cmd->parsed()) {
            if (search_opts.folds < 2) {
                std::cerr << "error: --folds must be at least 2\n";
                return kExitBadArgs;
            }
            if (strategy == "one-all" && blocks != 1) {
                std::cerr << "error: one-all runs one-block PRPLs only\n";
                return kExitBadArgs;
            }
            return run_search(search_opts, strategy, blocks, surrogate_learner,
                              surrogate_pipeline);
        }
        if (train_cmd->parsed()) {
            if (train_opts.folds < 2) {
                std::cerr << "error: --folds must be at least 2\n";
                return kExitBadArgs;
            }
            if (train_prp.empty() && train_lr.empty()) {
                std::cerr << "error: give --surrogate-prp and/or --surrogate-lr output paths\n";
                return kExitBadArgs;
            }
            return run_surrogate_train(corpus_dir, train_opts, train_prp, train_lr);
        }
        if (apply_cmd->parsed()) {
            if (apply_opts.folds < 2) {
                std::cerr << "error: --folds must be at least 2\n";
                return kExitBadArgs;
            }
            if (apply_prp.empty() && apply_lr.empty()) {
                std::cerr << "error: give --surrogate-prp and/or --surrogate-lr model files\n";
                return kExitBadArgs;
            }
            return run_surrogate_apply(apply_opts, apply_prp, apply_lr);
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadArgs;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadArgs;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDataError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSearchFailure;
    }
    return kExitBadArgs;
}
