#include "pipeforge/transformers.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "pipeforge/kernels.hpp"

namespace pipeforge {

namespace {

void require_numeric_no_na(const DataTable& input, const char* who) {
    for (std::size_t j = 0; j < input.n_cols(); ++j) {
        const Column& c = input.col(j);
        if (c.kind() != ColumnKind::Numeric)
            throw DataError(std::string(who) + ": column '" + c.name() + "' is categorical");
        if (c.na_count() > 0)
            throw DataError(std::string(who) + ": column '" + c.name() + "' has NA cells");
    }
}

std::vector<std::string> column_names(const DataTable& t) {
    std::vector<std::string> names;
    names.reserve(t.n_cols());
    for (std::size_t j = 0; j < t.n_cols(); ++j) names.push_back(t.col(j).name());
    return names;
}

void require_same_schema(const DataTable& input, const std::vector<std::string>& fit_names,
                         const char* who) {
    if (input.n_cols() != fit_names.size())
        throw DataError(std::string(who) + ": transform-time column count " +
                        std::to_string(input.n_cols()) + " differs from fit-time " +
                        std::to_string(fit_names.size()));
    for (std::size_t j = 0; j < fit_names.size(); ++j) {
        if (input.col(j).name() != fit_names[j])
            throw DataError(std::string(who) + ": transform-time column '" + input.col(j).name() +
                            "' does not match fit-time column '" + fit_names[j] + "'");
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// selectors

DataTable select_features(const DataTable& input, ColumnKind kind) {
    std::vector<Column> cols;
    for (std::size_t j = 0; j < input.n_cols(); ++j)
        if (input.col(j).kind() == kind) cols.push_back(input.col(j));
    if (cols.empty()) return DataTable(input.n_rows());
    return DataTable(std::move(cols));
}

FeatureSelector::FeatureSelector(ColumnKind kind)
    : kind_(kind), name_(kind == ColumnKind::Categorical ? "catf" : "numf") {}

DataTable FeatureSelector::transform(const DataTable& input) const {
    return select_features(input, kind_);
}

// ---------------------------------------------------------------------------
// one-hot

void OneHotEncoder::fit(const DataTable& input, const TargetVector&) {
    source_names_.clear();
    categories_.clear();
    for (std::size_t j = 0; j < input.n_cols(); ++j) {
        const Column& c = input.col(j);
        if (c.kind() != ColumnKind::Categorical)
            throw DataError("ohe: column '" + c.name() + "' is numeric");
        if (c.na_count() > 0)
            throw DataError("ohe: column '" + c.name() + "' has NA cells at fit time");
        source_names_.push_back(c.name());
        categories_.push_back(c.dict());
    }
    fitted_ = true;
}

DataTable OneHotEncoder::transform(const DataTable& input) const {
    if (!fitted_) throw PipelineError("ohe: transform before fit");
    require_same_schema(input, source_names_, "ohe");
    std::vector<Column> cols;
    const std::size_t n = input.n_rows();
    for (std::size_t j = 0; j < source_names_.size(); ++j) {
        const Column& src = input.col(j);
        for (const std::string& cat : categories_[j]) {
            std::vector<double> v(n, 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                if (!src.is_na(i) && src.label(i) == cat) v[i] = 1.0;
            }
            cols.push_back(Column::numeric(src.name() + "=" + cat, std::move(v)));
        }
    }
    if (cols.empty()) return DataTable(n);
    return DataTable(std::move(cols));
}

// ---------------------------------------------------------------------------
// scalers

const char* scaler_name(ScalerMode mode) {
    switch (mode) {
        case ScalerMode::Standard: return "stdsc";
        case ScalerMode::MinMax: return "minmax";
        case ScalerMode::Robust: return "robustsc";
        case ScalerMode::Normalizer: return "norm";
        case ScalerMode::Power: return "powertf";
        case ScalerMode::Noop: return "noop";
    }
    return "?";
}

double yeo_johnson(double x, double lambda) {
    constexpr double eps = 1e-12;
    if (x >= 0.0) {
        if (std::abs(lambda) > eps) return (std::pow(x + 1.0, lambda) - 1.0) / lambda;
        return std::log1p(x);
    }
    if (std::abs(lambda - 2.0) > eps) return -(std::pow(1.0 - x, 2.0 - lambda) - 1.0) / (2.0 - lambda);
    return -std::log1p(-x);
}

double yeo_johnson_log_likelihood(const std::vector<double>& values, double lambda) {
    const std::size_t n = values.size();
    if (n == 0) return -1e308;
    double mean = 0.0;
    std::vector<double> t(n);
    for (std::size_t i = 0; i < n; ++i) {
        t[i] = yeo_johnson(values[i], lambda);
        if (!std::isfinite(t[i])) return -1e308;
        mean += t[i];
    }
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double v : t) var += (v - mean) * (v - mean);
    var /= static_cast<double>(n);
    if (!(var > 1e-300)) return -1e308;
    double jac = 0.0;
    for (double x : values) jac += (x >= 0.0 ? 1.0 : -1.0) * std::log1p(std::abs(x));
    return -0.5 * static_cast<double>(n) * std::log(var) + (lambda - 1.0) * jac;
}

double fit_yeo_johnson_lambda(const std::vector<double>& values) {
    if (values.size() < 2) return 1.0;
    double lo = values.front(), hi = values.front();
    for (double v : values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (hi - lo <= 0.0) return 1.0;  // constant column, identity

    double best_lambda = 1.0;
    double best_ll = -1e308;
    for (int i = 0; i <= 1000; ++i) {
        double lambda = -5.0 + 0.01 * static_cast<double>(i);
        double ll = yeo_johnson_log_likelihood(values, lambda);
        if (ll > best_ll) {
            best_ll = ll;
            best_lambda = lambda;
        }
    }
    // golden-section refinement around the grid argmax
    double a = std::max(-5.0, best_lambda - 0.01);
    double b = std::min(5.0, best_lambda + 0.01);
    constexpr double invphi = 0.6180339887498949;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = yeo_johnson_log_likelihood(values, c);
    double fd = yeo_johnson_log_likelihood(values, d);
    while (b - a > 1e-7) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = yeo_johnson_log_likelihood(values, c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = yeo_johnson_log_likelihood(values, d);
        }
    }
    double mid = 0.5 * (a + b);
    return yeo_johnson_log_likelihood(values, mid) >= best_ll ? mid : best_lambda;
}

void Scaler::fit(const DataTable& input, const TargetVector&) {
    if (mode_ == ScalerMode::Noop || mode_ == ScalerMode::Normalizer) {
        fitted_ = true;
        return;
    }
    require_numeric_no_na(input, name_.c_str());
    fit_names_ = column_names(input);
    const std::size_t d = input.n_cols();
    shift_.assign(d, 0.0);
    scale_.assign(d, 0.0);
    lambda_.assign(d, 1.0);

    for (std::size_t j = 0; j < d; ++j) {
        const std::vector<double>& v = input.col(j).nums();
        const double n = static_cast<double>(v.size());
        switch (mode_) {
            case ScalerMode::Standard: {
                double mean = kernels::sum(v.data(), v.size()) / n;
                double var = 0.0;
                for (double x : v) var += (x - mean) * (x - mean);
                var /= n;
                shift_[j] = mean;
                scale_[j] = var > 0.0 ? 1.0 / std::sqrt(var) : 0.0;
                break;
            }
            case ScalerMode::MinMax: {
                auto [mn, mx] = std::minmax_element(v.begin(), v.end());
                shift_[j] = *mn;
                scale_[j] = *mx > *mn ? 1.0 / (*mx - *mn) : 0.0;
                break;
            }
            case ScalerMode::Robust: {
                std::vector<double> sorted(v);
                std::sort(sorted.begin(), sorted.end());
                double q1 = quantile_sorted(sorted, 0.25);
                double q3 = quantile_sorted(sorted, 0.75);
                shift_[j] = quantile_sorted(sorted, 0.5);
                scale_[j] = q3 > q1 ? 1.0 / (q3 - q1) : 0.0;
                break;
            }
            case ScalerMode::Power: {
                double lambda = fit_yeo_johnson_lambda(v);
                lambda_[j] = lambda;
                std::vector<double> t(v.size());
                for (std::size_t i = 0; i < v.size(); ++i) t[i] = yeo_johnson(v[i], lambda);
                double mean = kernels::sum(t.data(), t.size()) / n;
                double var = 0.0;
                for (double x : t) var += (x - mean) * (x - mean);
                var /= n;
                shift_[j] = mean;
                scale_[j] = var > 0.0 ? 1.0 / std::sqrt(var) : 0.0;
                break;
            }
            default: break;
        }
    }
    fitted_ = true;
}

DataTable Scaler::transform(const DataTable& input) const {
    if (mode_ == ScalerMode::Noop) return input;
    require_numeric_no_na(input, name_.c_str());
    if (mode_ == ScalerMode::Normalizer) {
        Matrix m = to_matrix(input, name_.c_str());
        for (std::size_t i = 0; i < m.rows; ++i) {
            double* r = m.row(i);
            double norm = std::sqrt(kernels::sumsq(r, m.cols));
            if (norm > 0.0) kernels::affine(r, 0.0, 1.0 / norm, r, m.cols);
        }
        return from_matrix(m, column_names(input));
    }
    if (!fitted_) throw PipelineError(name_ + ": transform before fit");
    require_same_schema(input, fit_names_, name_.c_str());

    std::vector<Column> cols;
    cols.reserve(input.n_cols());
    for (std::size_t j = 0; j < input.n_cols(); ++j) {
        const std::vector<double>& v = input.col(j).nums();
        std::vector<double> out(v.size());
        if (mode_ == ScalerMode::Power) {
            for (std::size_t i = 0; i < v.size(); ++i)
                out[i] = (yeo_johnson(v[i], lambda_[j]) - shift_[j]) * scale_[j];
        } else {
            kernels::affine(v.data(), shift_[j], scale_[j], out.data(), v.size());
        }
        cols.push_back(Column::numeric(input.col(j).name(), std::move(out)));
    }
    if (cols.empty()) return DataTable(input.n_rows());
    return DataTable(std::move(cols));
}

// ---------------------------------------------------------------------------
// extractors

const char* extractor_name(ExtractorMode mode) {
    switch (mode) {
        case ExtractorMode::Pca: return "pca";
        case ExtractorMode::Ica: return "ica";
        case ExtractorMode::Fa: return "fa";
        case ExtractorMode::Noop: return "noop";
    }
    return "?";
}

namespace {

using EMatrix = Eigen::MatrixXd;
using EVector = Eigen::VectorXd;

EMatrix to_eigen_centered(const Matrix& x, std::vector<double>& center) {
    EMatrix m(x.rows, x.cols);
    center.assign(x.cols, 0.0);
    for (std::size_t j = 0; j < x.cols; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < x.rows; ++i) s += x.at(i, j);
        center[j] = s / static_cast<double>(x.rows);
    }
    for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t j = 0; j < x.cols; ++j) m(i, j) = x.at(i, j) - center[j];
    return m;
}

// eigenpairs of a symmetric matrix, eigenvalues descending
void sym_eigen_desc(const EMatrix& s, EVector& values, EMatrix& vectors) {
    Eigen::SelfAdjointEigenSolver<EMatrix> solver(s);
    const auto& v = solver.eigenvalues();
    const auto& u = solver.eigenvectors();
    const Eigen::Index d = s.rows();
    values.resize(d);
    vectors.resize(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        values(i) = v(d - 1 - i);
        vectors.col(i) = u.col(d - 1 - i);
    }
}

// flip each row so its largest-magnitude entry is positive
void fix_signs(EMatrix& rows) {
    for (Eigen::Index i = 0; i < rows.rows(); ++i) {
        Eigen::Index arg = 0;
        rows.row(i).cwiseAbs().maxCoeff(&arg);
        if (rows(i, arg) < 0.0) rows.row(i) = -rows.row(i);
    }
}

// W <- (W W^T)^{-1/2} W
void symmetric_decorrelate(EMatrix& w) {
    EVector values;
    EMatrix vectors;
    sym_eigen_desc(w * w.transpose(), values, vectors);
    double top = std::max(values(0), 1e-300);
    EVector inv_sqrt(values.size());
    for (Eigen::Index i = 0; i < values.size(); ++i)
        inv_sqrt(i) = 1.0 / std::sqrt(std::max(values(i), top * 1e-12));
    w = vectors * inv_sqrt.asDiagonal() * vectors.transpose() * w;
}

Matrix from_eigen(const EMatrix& m) {
    Matrix out(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) out.at(i, j) = m(i, j);
    return out;
}

}  // namespace

void Extractor::fit_pca(const Matrix& x, std::size_t k) {
    EMatrix xc = to_eigen_centered(x, center_);
    EMatrix cov = (xc.transpose() * xc) / static_cast<double>(x.rows - 1);
    EVector values;
    EMatrix vectors;
    sym_eigen_desc(cov, values, vectors);
    EMatrix comp = vectors.leftCols(k).transpose();
    fix_signs(comp);
    components_ = from_eigen(comp);
}

void Extractor::fit_ica(const Matrix& x, std::size_t k) {
    EMatrix xc = to_eigen_centered(x, center_);
    const double n = static_cast<double>(x.rows);
    EMatrix cov = (xc.transpose() * xc) / (n - 1.0);
    EVector values;
    EMatrix vectors;
    sym_eigen_desc(cov, values, vectors);

    std::size_t rank = 0;
    double top = values.size() ? std::max(values(0), 0.0) : 0.0;
    for (Eigen::Index i = 0; i < values.size(); ++i)
        if (values(i) > std::max(top * 1e-12, 1e-300)) ++rank;
    std::size_t m = std::min(k, rank);
    if (m == 0) {
        components_ = Matrix(0, x.cols);
        return;
    }

    EMatrix whiten(m, x.cols);
    for (std::size_t i = 0; i < m; ++i)
        whiten.row(i) = vectors.col(i).transpose() / std::sqrt(values(i));
    EMatrix xw = xc * whiten.transpose();  // n x m, unit covariance

    Rng rng(hash_combine(seed_, 0x1caULL));
    EMatrix w(m, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) w(i, j) = rng.normal();
    symmetric_decorrelate(w);

    converged_ = false;
    for (int iter = 0; iter < 200; ++iter) {
        EMatrix u = xw * w.transpose();               // n x m
        EMatrix g = u.array().tanh().matrix();        // logcosh contrast
        EVector gprime_mean(m);
        for (std::size_t j = 0; j < m; ++j)
            gprime_mean(j) = (1.0 - g.col(j).array().square()).mean();
        EMatrix w1 = (g.transpose() * xw) / n - gprime_mean.asDiagonal() * w;
        symmetric_decorrelate(w1);
        double lim = 0.0;
        for (std::size_t i = 0; i < m; ++i)
            lim = std::max(lim, std::abs(std::abs(w1.row(i).dot(w.row(i))) - 1.0));
        w = w1;
        if (lim < 1e-4) {
            converged_ = true;
            break;
        }
    }
    components_ = from_eigen(w * whiten);
}

void Extractor::fit_fa(const Matrix& x, std::size_t k) {
    const std::size_t d = x.cols;
    const double n = static_cast<double>(x.rows);
    EMatrix z(x.rows, d);
    center_.assign(d, 0.0);
    std::vector<double> inv_std(d, 0.0);
    for (std::size_t j = 0; j < d; ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < x.rows; ++i) mean += x.at(i, j);
        mean /= n;
        double var = 0.0;
        for (std::size_t i = 0; i < x.rows; ++i) var += (x.at(i, j) - mean) * (x.at(i, j) - mean);
        var /= n;
        center_[j] = mean;
        inv_std[j] = var > 0.0 ? 1.0 / std::sqrt(var) : 0.0;
        for (std::size_t i = 0; i < x.rows; ++i) z(i, j) = (x.at(i, j) - mean) * inv_std[j];
    }
    EMatrix r = (z.transpose() * z) / n;

    // principal-axis factoring on the reduced correlation matrix
    EVector h(d);
    for (std::size_t i = 0; i < d; ++i) {
        double best = 0.0;
        for (std::size_t j = 0; j < d; ++j)
            if (i != j) best = std::max(best, std::abs(r(i, j)));
        h(i) = d > 1 ? best : 1.0;
    }
    EMatrix loadings(d, k);
    for (int iter = 0; iter < 50; ++iter) {
        EMatrix reduced = r;
        for (std::size_t i = 0; i < d; ++i) reduced(i, i) = h(i);
        EVector values;
        EMatrix vectors;
        sym_eigen_desc(reduced, values, vectors);
        for (std::size_t j = 0; j < k; ++j) {
            double lam = std::max(values(j), 0.0);
            loadings.col(j) = vectors.col(j) * std::sqrt(lam);
        }
        for (std::size_t i = 0; i < d; ++i)
            h(i) = std::min(loadings.row(i).squaredNorm(), 1.0);
    }
    {
        EMatrix lt = loadings.transpose();
        fix_signs(lt);
        loadings = lt.transpose();
    }

    // regression factor scores: F = Z R^+ L, folded into one linear operator
    EVector values;
    EMatrix vectors;
    sym_eigen_desc(r, values, vectors);
    double top = std::max(values(0), 1e-300);
    EVector inv(values.size());
    for (Eigen::Index i = 0; i < values.size(); ++i)
        inv(i) = values(i) > top * 1e-10 ? 1.0 / values(i) : 0.0;
    EMatrix r_pinv = vectors * inv.asDiagonal() * vectors.transpose();
    EMatrix op = r_pinv * loadings;  // d x k, applied to standardized data
    for (std::size_t j = 0; j < d; ++j) op.row(j) *= inv_std[j];
    components_ = from_eigen(op.transpose());
}

void Extractor::fit(const DataTable& input, const TargetVector&) {
    if (mode_ == ExtractorMode::Noop) {
        fitted_ = true;
        return;
    }
    require_numeric_no_na(input, name_.c_str());
    if (input.n_rows() < 2) throw DataError(name_ + ": needs at least 2 rows");
    fit_names_ = column_names(input);
    Matrix x = to_matrix(input, name_.c_str());
    const std::size_t max_k = std::min(x.rows, x.cols);
    std::size_t k = k_request_.value_or(max_k);
    if (k > max_k)
        throw DataError(name_ + ": k=" + std::to_string(k) + " exceeds min(rows, cols)=" +
                        std::to_string(max_k));
    converged_ = true;
    if (x.cols == 0 || k == 0) {
        components_ = Matrix(0, x.cols);
        center_.assign(x.cols, 0.0);
    } else {
        switch (mode_) {
            case ExtractorMode::Pca: fit_pca(x, k); break;
            case ExtractorMode::Ica: fit_ica(x, k); break;
            case ExtractorMode::Fa: fit_fa(x, k); break;
            default: break;
        }
    }
    fitted_ = true;
}

DataTable Extractor::transform(const DataTable& input) const {
    if (mode_ == ExtractorMode::Noop) return input;
    if (!fitted_) throw PipelineError(name_ + ": transform before fit");
    require_numeric_no_na(input, name_.c_str());
    require_same_schema(input, fit_names_, name_.c_str());
    Matrix x = to_matrix(input, name_.c_str());
    const std::size_t k = components_.rows;
    Matrix out(x.rows, k);
    std::vector<double> centered(x.cols);
    for (std::size_t i = 0; i < x.rows; ++i) {
        const double* r = x.row(i);
        for (std::size_t j = 0; j < x.cols; ++j) centered[j] = r[j] - center_[j];
        for (std::size_t c = 0; c < k; ++c)
            out.at(i, c) = kernels::dot(centered.data(), components_.row(c), x.cols);
    }
    std::vector<std::string> names(k);
    const char* prefix = mode_ == ExtractorMode::Pca ? "pc" : (mode_ == ExtractorMode::Ica ? "ic" : "fa");
    for (std::size_t c = 0; c < k; ++c) names[c] = prefix + std::to_string(c + 1);
    return from_matrix(out, names);
}

// ---------------------------------------------------------------------------
// NA filters

void ColumnNaFilter::fit(const DataTable& input, const TargetVector&) {
    kept_.clear();
    const double limit = threshold_ * static_cast<double>(input.n_rows());
    for (std::size_t j = 0; j < input.n_cols(); ++j) {
        if (static_cast<double>(input.col(j).na_count()) <= limit)
            kept_.push_back(input.col(j).name());
    }
    if (input.n_cols() > 0 && kept_.empty())
        throw DataError("colnarm: every column exceeds the NA threshold");
    fitted_ = true;
}

DataTable ColumnNaFilter::transform(const DataTable& input) const {
    if (!fitted_) throw PipelineError("colnarm: transform before fit");
    std::vector<Column> cols;
    cols.reserve(kept_.size());
    for (const auto& name : kept_) {
        const Column* c = input.find(name);
        if (!c) throw DataError("colnarm: column '" + name + "' missing at transform time");
        cols.push_back(*c);
    }
    if (cols.empty()) return DataTable(input.n_rows());
    return DataTable(std::move(cols));
}

std::vector<std::size_t> rows_without_na(const DataTable& input) {
    std::vector<std::size_t> keep;
    keep.reserve(input.n_rows());
    for (std::size_t i = 0; i < input.n_rows(); ++i) {
        bool has_na = false;
        for (std::size_t j = 0; j < input.n_cols() && !has_na; ++j) has_na = input.col(j).is_na(i);
        if (!has_na) keep.push_back(i);
    }
    return keep;
}

DataTable RowNaFilter::transform(const DataTable& input) const {
    std::vector<std::size_t> keep = rows_without_na(input);
    if (input.n_rows() > 0 && keep.empty())
        throw DataError("rownarm: every row contains an NA");
    return input.take_rows(keep);
}

}  // namespace pipeforge
