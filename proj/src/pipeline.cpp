#include "pipeforge/pipeline.hpp"

#include <map>

#include "pipeforge/learners.hpp"
#include "pipeforge/transformers.hpp"

namespace pipeforge {

// ---------------------------------------------------------------------------
// registry

void ComponentRegistry::add(std::string name, ComponentKind kind, Factory factory) {
    if (find(name)) throw PipelineError("registry: duplicate component '" + name + "'");
    order_.push_back(std::move(name));
    entries_.push_back({kind, std::move(factory)});
}

const ComponentRegistry::Entry* ComponentRegistry::find(std::string_view name) const {
    for (std::size_t i = 0; i < order_.size(); ++i)
        if (order_[i] == name) return &entries_[i];
    return nullptr;
}

bool ComponentRegistry::contains(std::string_view name) const { return find(name) != nullptr; }

ComponentKind ComponentRegistry::kind_of(std::string_view name) const {
    const Entry* e = find(name);
    if (!e) throw PipelineError("registry: unknown component '" + std::string(name) + "'");
    return e->kind;
}

std::unique_ptr<Machine> ComponentRegistry::make(std::string_view name, std::uint64_t seed) const {
    const Entry* e = find(name);
    if (!e) throw PipelineError("registry: unknown component '" + std::string(name) + "'");
    return e->factory(seed);
}

ComponentRegistry ComponentRegistry::subset(const std::vector<std::string>& keep) const {
    ComponentRegistry out;
    for (const auto& name : keep) {
        const Entry* e = find(name);
        if (!e) throw PipelineError("registry: unknown component '" + name + "'");
        out.add(name, e->kind, e->factory);
    }
    return out;
}

namespace {

// learner leaf: predictions come back as one categorical column. A fold whose
// training slice collapses to one class degrades to a constant predictor
// instead of erroring.
class LearnerMachine final : public Machine {
public:
    LearnerMachine(LearnerMode mode, std::uint64_t seed)
        : config_(LearnerConfig::defaults(mode, seed)), name_(learner_name(mode)) {}

    const std::string& name() const override { return name_; }
    bool is_learner() const override { return true; }

    void fit(const DataTable& input, const TargetVector& target) override {
        if (target.size() != input.n_rows())
            throw DataError(name_ + ": target length does not match input rows");
        if (target.size() == 0) throw DataError(name_ + ": empty training input");
        if (target.distinct_present() < 2) {
            constant_label_ = target.label(0);
            constant_ = true;
        } else {
            model_ = learner_fit(config_, input, target);
            constant_ = false;
        }
        fitted_ = true;
    }

    DataTable transform(const DataTable& input) const override {
        if (!fitted_) throw PipelineError(name_ + ": transform before fit");
        std::vector<std::string> labels;
        labels.reserve(input.n_rows());
        if (constant_) {
            labels.assign(input.n_rows(), constant_label_);
        } else {
            TargetVector pred = learner_predict(model_, input);
            for (std::size_t i = 0; i < pred.size(); ++i) labels.push_back(pred.label(i));
        }
        return DataTable({Column::categorical("prediction", labels)});
    }

private:
    LearnerConfig config_;
    std::string name_;
    FittedLearner model_;
    std::string constant_label_;
    bool constant_ = false;
    bool fitted_ = false;
};

template <typename M, typename... Args>
ComponentRegistry::Factory make_factory(Args... args) {
    return [args...](std::uint64_t) { return std::make_unique<M>(args...); };
}

}  // namespace

ComponentRegistry default_registry() {
    ComponentRegistry reg;
    reg.add("catf", ComponentKind::Transformer,
            make_factory<FeatureSelector>(ColumnKind::Categorical));
    reg.add("numf", ComponentKind::Transformer, make_factory<FeatureSelector>(ColumnKind::Numeric));
    reg.add("ohe", ComponentKind::Transformer, make_factory<OneHotEncoder>());
    reg.add("noop", ComponentKind::Transformer, make_factory<NoopTransformer>());
    reg.add("stdsc", ComponentKind::Transformer, make_factory<Scaler>(ScalerMode::Standard));
    reg.add("minmax", ComponentKind::Transformer, make_factory<Scaler>(ScalerMode::MinMax));
    reg.add("robustsc", ComponentKind::Transformer, make_factory<Scaler>(ScalerMode::Robust));
    reg.add("norm", ComponentKind::Transformer, make_factory<Scaler>(ScalerMode::Normalizer));
    reg.add("powertf", ComponentKind::Transformer, make_factory<Scaler>(ScalerMode::Power));
    reg.add("pca", ComponentKind::Transformer,
            [](std::uint64_t seed) { return std::make_unique<Extractor>(ExtractorMode::Pca, seed); });
    reg.add("ica", ComponentKind::Transformer,
            [](std::uint64_t seed) { return std::make_unique<Extractor>(ExtractorMode::Ica, seed); });
    reg.add("fa", ComponentKind::Transformer,
            [](std::uint64_t seed) { return std::make_unique<Extractor>(ExtractorMode::Fa, seed); });
    auto add_learner = [&](const char* name, LearnerMode mode) {
        reg.add(name, ComponentKind::Learner, [mode](std::uint64_t seed) {
            return std::make_unique<LearnerMachine>(mode, seed);
        });
    };
    add_learner("rf", LearnerMode::Rf);
    add_learner("ada", LearnerMode::Ada);
    add_learner("dt", LearnerMode::Dt);
    add_learner("gb", LearnerMode::Gb);
    add_learner("lsvc", LearnerMode::Lsvc);
    add_learner("rbfsvc", LearnerMode::RbfSvc);
    reg.add("colnarm", ComponentKind::Transformer, make_factory<ColumnNaFilter>(0.10));
    reg.add("rownarm", ComponentKind::Transformer, make_factory<RowNaFilter>());
    return reg;
}

// ---------------------------------------------------------------------------
// workflow

namespace {

enum class Position { Terminal, NonTerminal, InsideUnion };

}  // namespace

Workflow compile(const ExprAst& ast, const ComponentRegistry& registry, std::uint64_t seed) {
    std::vector<std::uint32_t> path;
    std::function<Workflow(const ExprAst&, Position)> build =
        [&](const ExprAst& node, Position pos) -> Workflow {
        Workflow w;
        switch (node.kind()) {
            case ExprAst::Kind::Name: {
                if (!registry.contains(node.ident()))
                    throw PipelineError("unregistered component '" + node.ident() + "'");
                bool learner = registry.kind_of(node.ident()) == ComponentKind::Learner;
                if (learner && pos == Position::NonTerminal)
                    throw PipelineError("learner '" + node.ident() + "' in non-terminal position");
                if (learner && pos == Position::InsideUnion)
                    throw PipelineError("learner '" + node.ident() + "' inside a feature union");
                w.kind_ = Workflow::Kind::Leaf;
                w.machine_ = registry.make(node.ident(), hash_path(seed, path));
                w.has_learner_ = learner;
                return w;
            }
            case ExprAst::Kind::Pipe: {
                w.kind_ = Workflow::Kind::Pipe;
                const auto& kids = node.children();
                for (std::size_t i = 0; i < kids.size(); ++i) {
                    Position child_pos;
                    if (i + 1 < kids.size())
                        child_pos = pos == Position::InsideUnion ? Position::InsideUnion
                                                                 : Position::NonTerminal;
                    else
                        child_pos = pos;
                    path.push_back(static_cast<std::uint32_t>(i));
                    w.children_.push_back(build(kids[i], child_pos));
                    path.pop_back();
                    w.has_learner_ = w.has_learner_ || w.children_.back().has_learner_;
                }
                return w;
            }
            case ExprAst::Kind::Union: {
                w.kind_ = Workflow::Kind::Union;
                for (std::size_t i = 0; i < node.children().size(); ++i) {
                    path.push_back(static_cast<std::uint32_t>(i));
                    w.children_.push_back(build(node.children()[i], Position::InsideUnion));
                    path.pop_back();
                }
                return w;
            }
        }
        throw PipelineError("malformed expression tree");
    };
    return build(ast, Position::Terminal);
}

namespace {

[[noreturn]] void rethrow_with_segment(const char* node, std::size_t index,
                                       const std::exception& e) {
    throw PipelineError(std::string(node) + "[" + std::to_string(index) + "]/" + e.what());
}

}  // namespace

DataTable Workflow::fit_transform(const DataTable& input, const TargetVector& target) {
    switch (kind_) {
        case Kind::Leaf: {
            fitted_ = true;
            return machine_->fit_transform(input, target);
        }
        case Kind::Pipe: {
            DataTable current = input;
            for (std::size_t i = 0; i < children_.size(); ++i) {
                try {
                    current = children_[i].fit_transform(current, target);
                } catch (const std::exception& e) {
                    rethrow_with_segment("pipe", i, e);
                }
            }
            fitted_ = true;
            return current;
        }
        case Kind::Union: {
            DataTable out(input.n_rows());
            for (std::size_t i = 0; i < children_.size(); ++i) {
                try {
                    out = hconcat(out, children_[i].fit_transform(input, target));
                } catch (const std::exception& e) {
                    rethrow_with_segment("union", i, e);
                }
            }
            fitted_ = true;
            return out;
        }
    }
    throw PipelineError("malformed workflow");
}

DataTable Workflow::transform(const DataTable& input) const {
    if (!fitted_) throw PipelineError("workflow: transform before fit");
    switch (kind_) {
        case Kind::Leaf:
            return machine_->transform(input);
        case Kind::Pipe: {
            DataTable current = input;
            for (std::size_t i = 0; i < children_.size(); ++i) {
                try {
                    current = children_[i].transform(current);
                } catch (const std::exception& e) {
                    rethrow_with_segment("pipe", i, e);
                }
            }
            return current;
        }
        case Kind::Union: {
            DataTable out(input.n_rows());
            for (std::size_t i = 0; i < children_.size(); ++i) {
                try {
                    out = hconcat(out, children_[i].transform(input));
                } catch (const std::exception& e) {
                    rethrow_with_segment("union", i, e);
                }
            }
            return out;
        }
    }
    throw PipelineError("malformed workflow");
}

bool Workflow::terminal_is_learner() const {
    switch (kind_) {
        case Kind::Leaf: return machine_->is_learner();
        case Kind::Pipe: return children_.back().terminal_is_learner();
        case Kind::Union: return false;
    }
    return false;
}

// ---------------------------------------------------------------------------
// majority-vote ensemble

VoteEnsemble::VoteEnsemble(std::vector<std::string> members, const ComponentRegistry& registry,
                           std::uint64_t seed) {
    if (members.empty()) throw PipelineError("vote ensemble: empty member list");
    for (std::size_t i = 0; i < members.size(); ++i) {
        if (registry.kind_of(members[i]) != ComponentKind::Learner)
            throw PipelineError("vote ensemble: member '" + members[i] + "' is not a learner");
        members_.push_back(registry.make(members[i], hash_combine(seed, i + 1)));
    }
}

void VoteEnsemble::fit(const DataTable& input, const TargetVector& target) {
    for (auto& m : members_) m->fit(input, target);
    fitted_ = true;
}

std::vector<std::string> VoteEnsemble::predict(const DataTable& input) const {
    if (!fitted_) throw PipelineError("vote ensemble: predict before fit");
    std::vector<std::vector<std::string>> votes;
    votes.reserve(members_.size());
    for (const auto& m : members_) {
        DataTable out = m->transform(input);
        const Column& pred = out.col(0);
        std::vector<std::string> labels;
        labels.reserve(input.n_rows());
        for (std::size_t i = 0; i < input.n_rows(); ++i) labels.push_back(pred.label(i));
        votes.push_back(std::move(labels));
    }
    std::vector<std::string> result;
    result.reserve(input.n_rows());
    for (std::size_t i = 0; i < input.n_rows(); ++i) {
        std::map<std::string, int> tally;
        for (const auto& v : votes) ++tally[v[i]];
        int best = 0;
        for (const auto& [label, count] : tally) best = std::max(best, count);
        // earliest member whose vote is in the argmax set wins the tie
        for (const auto& v : votes) {
            if (tally[v[i]] == best) {
                result.push_back(v[i]);
                break;
            }
        }
    }
    return result;
}

}  // namespace pipeforge
