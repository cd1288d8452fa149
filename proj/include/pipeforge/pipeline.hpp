#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "pipeforge/data.hpp"
#include "pipeforge/expr.hpp"

namespace pipeforge {

// fit/transform contract shared by every component. For a transformer the
// pair is estimate-then-apply; for a learner it is train-then-predict (the
// prediction comes back as a single categorical column named "prediction").
class Machine {
public:
    virtual ~Machine() = default;
    virtual const std::string& name() const = 0;
    virtual bool is_learner() const { return false; }
    virtual void fit(const DataTable& input, const TargetVector& target) = 0;
    virtual DataTable transform(const DataTable& input) const = 0;

    DataTable fit_transform(const DataTable& input, const TargetVector& target) {
        fit(input, target);
        return transform(input);
    }
};

enum class ComponentKind { Transformer, Learner };

class ComponentRegistry {
public:
    using Factory = std::function<std::unique_ptr<Machine>(std::uint64_t seed)>;

    void add(std::string name, ComponentKind kind, Factory factory);
    bool contains(std::string_view name) const;
    ComponentKind kind_of(std::string_view name) const;  // throws on unknown name
    std::unique_ptr<Machine> make(std::string_view name, std::uint64_t seed) const;
    const std::vector<std::string>& names() const { return order_; }

    // registry restricted to the given names (unknown name -> error)
    ComponentRegistry subset(const std::vector<std::string>& keep) const;

private:
    struct Entry {
        ComponentKind kind;
        Factory factory;
    };
    std::vector<std::string> order_;
    std::vector<Entry> entries_;
    const Entry* find(std::string_view name) const;
};

// All built-in components under their expression names:
// catf numf ohe noop stdsc minmax robustsc norm powertf pca ica fa
// rf ada dt gb lsvc rbfsvc colnarm rownarm
ComponentRegistry default_registry();

// Executable tree compiled from an ExprAst. Pipe nodes thread the table
// left-to-right through fit_transform; Union nodes give every child the same
// input and hconcat the outputs in child order.
class Workflow {
public:
    DataTable fit_transform(const DataTable& input, const TargetVector& target);
    DataTable transform(const DataTable& input) const;

    bool fitted() const { return fitted_; }
    bool terminal_is_learner() const;

private:
    friend Workflow compile(const ExprAst&, const ComponentRegistry&, std::uint64_t);

    enum class Kind { Leaf, Pipe, Union };
    Kind kind_ = Kind::Leaf;
    std::unique_ptr<Machine> machine_;
    std::vector<Workflow> children_;
    bool fitted_ = false;
    bool has_learner_ = false;
};

// Validates structure (a learner may only terminate the outermost sequence;
// unions are learner-free) and instantiates every leaf with a seed derived
// from (seed, path-from-root) so scheduling order cannot matter.
Workflow compile(const ExprAst& ast, const ComponentRegistry& registry, std::uint64_t seed);

// Majority-vote ensemble over independently fitted learners. Ties go to the
// earliest member whose prediction is among the tied labels.
class VoteEnsemble {
public:
    VoteEnsemble(std::vector<std::string> members, const ComponentRegistry& registry,
                 std::uint64_t seed);
    void fit(const DataTable& input, const TargetVector& target);
    std::vector<std::string> predict(const DataTable& input) const;

private:
    std::vector<std::unique_ptr<Machine>> members_;
    bool fitted_ = false;
};

}  // namespace pipeforge
