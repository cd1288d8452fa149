#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pipeforge/data.hpp"
#include "pipeforge/numeric.hpp"
#include "pipeforge/pipeline.hpp"

namespace pipeforge {

// columns of the requested kind, original order; empty selection keeps n_rows
DataTable select_features(const DataTable& input, ColumnKind kind);

class FeatureSelector final : public Machine {
public:
    explicit FeatureSelector(ColumnKind kind);
    const std::string& name() const override { return name_; }
    void fit(const DataTable&, const TargetVector&) override {}
    DataTable transform(const DataTable& input) const override;

private:
    ColumnKind kind_;
    std::string name_;
};

// 0/1 columns named "src=category"; categories recorded at fit time in
// first-appearance order, unseen transform-time categories encode as all
// zeros for that source column.
class OneHotEncoder final : public Machine {
public:
    const std::string& name() const override { return name_; }
    void fit(const DataTable& input, const TargetVector&) override;
    DataTable transform(const DataTable& input) const override;

private:
    std::string name_ = "ohe";
    std::vector<std::string> source_names_;
    std::vector<std::vector<std::string>> categories_;  // per source column
    bool fitted_ = false;
};

enum class ScalerMode { Standard, MinMax, Robust, Normalizer, Power, Noop };

const char* scaler_name(ScalerMode mode);

class Scaler final : public Machine {
public:
    explicit Scaler(ScalerMode mode) : mode_(mode), name_(scaler_name(mode)) {}
    const std::string& name() const override { return name_; }
    void fit(const DataTable& input, const TargetVector&) override;
    DataTable transform(const DataTable& input) const override;

    ScalerMode mode() const { return mode_; }
    const std::vector<double>& lambdas() const { return lambda_; }  // power mode

private:
    ScalerMode mode_;
    std::string name_;
    bool fitted_ = false;
    std::vector<std::string> fit_names_;
    // per-column statistics; meaning depends on mode
    std::vector<double> shift_;  // mean / min / median / post-power mean
    std::vector<double> scale_;  // 1/std / 1/range / 1/IQR / 1/post-power std (0 when degenerate)
    std::vector<double> lambda_;
};

// Yeo-Johnson transform and its profile log-likelihood; exposed for the
// grid-search oracle in the tests.
double yeo_johnson(double x, double lambda);
double yeo_johnson_log_likelihood(const std::vector<double>& values, double lambda);
double fit_yeo_johnson_lambda(const std::vector<double>& values);  // argmax over [-5, 5]

enum class ExtractorMode { Pca, Ica, Fa, Noop };

const char* extractor_name(ExtractorMode mode);

class Extractor final : public Machine {
public:
    explicit Extractor(ExtractorMode mode, std::uint64_t seed = 0,
                       std::optional<std::size_t> k = std::nullopt)
        : mode_(mode), seed_(seed), k_request_(k), name_(extractor_name(mode)) {}
    const std::string& name() const override { return name_; }
    void fit(const DataTable& input, const TargetVector&) override;
    DataTable transform(const DataTable& input) const override;

    ExtractorMode mode() const { return mode_; }
    // k x d projection applied to centered input; orthonormal rows for pca
    const Matrix& components() const { return components_; }
    const std::vector<double>& centering() const { return center_; }
    bool converged() const { return converged_; }

private:
    void fit_pca(const Matrix& x, std::size_t k);
    void fit_ica(const Matrix& x, std::size_t k);
    void fit_fa(const Matrix& x, std::size_t k);

    ExtractorMode mode_;
    std::uint64_t seed_;
    std::optional<std::size_t> k_request_;
    std::string name_;
    bool fitted_ = false;
    bool converged_ = true;
    std::vector<std::string> fit_names_;
    Matrix components_;
    std::vector<double> center_;
};

// Drops every column whose fit-time NA count exceeds threshold * n_rows
// (strict), remembers the survivors.
class ColumnNaFilter final : public Machine {
public:
    explicit ColumnNaFilter(double threshold = 0.10) : threshold_(threshold) {}
    const std::string& name() const override { return name_; }
    void fit(const DataTable& input, const TargetVector&) override;
    DataTable transform(const DataTable& input) const override;
    double threshold() const { return threshold_; }

private:
    double threshold_;
    std::string name_ = "colnarm";
    bool fitted_ = false;
    std::vector<std::string> kept_;
};

// Drops every row containing at least one NA. Stateless.
class RowNaFilter final : public Machine {
public:
    const std::string& name() const override { return name_; }
    void fit(const DataTable&, const TargetVector&) override {}
    DataTable transform(const DataTable& input) const override;

private:
    std::string name_ = "rownarm";
};

// rows that survive a row-wise NA filter, for callers that must keep the
// target aligned
std::vector<std::size_t> rows_without_na(const DataTable& input);

class NoopTransformer final : public Machine {
public:
    const std::string& name() const override { return name_; }
    void fit(const DataTable&, const TargetVector&) override {}
    DataTable transform(const DataTable& input) const override { return input; }

private:
    std::string name_ = "noop";
};

}  // namespace pipeforge
