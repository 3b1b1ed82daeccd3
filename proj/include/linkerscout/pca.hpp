#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "linkerscout/common.hpp"
#include "linkerscout/matrix.hpp"

namespace linkerscout {

struct StandardizeResult {
    FeatureMatrix z;
    std::vector<double> means;
    std::vector<double> stds;
};

/// Column-wise z-scoring with sample (n-1) standard deviation. A constant
/// column is an error: the invariants are continuous quantities, so zero
/// variance signals a degenerate dataset rather than a feature to keep.
inline StandardizeResult standardize(const FeatureMatrix& x) {
    const std::size_t n = x.rows(), c = x.cols();
    if (n < 2) throw std::invalid_argument("standardize needs at least 2 rows");

    StandardizeResult out;
    out.z = x;
    out.means.resize(c);
    out.stds.resize(c);
    for (std::size_t j = 0; j < c; ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) mean += x.at(i, j);
        mean /= static_cast<double>(n);
        double ss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double d = x.at(i, j) - mean;
            ss += d * d;
        }
        double sd = std::sqrt(ss / static_cast<double>(n - 1));
        if (sd == 0.0)
            throw std::invalid_argument("zero variance in column '" + x.col_labels[j] + "'");
        out.means[j] = mean;
        out.stds[j] = sd;
        for (std::size_t i = 0; i < n; ++i) out.z.at(i, j) = (x.at(i, j) - mean) / sd;
    }
    return out;
}

/// Fitted PCA. `components` is dim x dim row-major with eigenvectors as
/// columns, eigenvalue-descending; `means`/`stds` carry the standardization
/// of the original features so a persisted model is self-contained.
struct PcaModel {
    std::size_t dim = 0;
    std::vector<double> means;
    std::vector<double> stds;
    std::vector<double> eigenvalues;  // non-increasing, non-negative
    std::vector<double> components;   // row-major dim x dim, columns = eigenvectors

    double component(std::size_t var, std::size_t pc) const { return components[var * dim + pc]; }
};

/// Eigendecomposition of the sample covariance of standardized data.
/// Deterministic sign convention: the largest-magnitude coefficient of each
/// eigenvector is made positive (first such coefficient on magnitude ties).
inline PcaModel fit_pca(const FeatureMatrix& z) {
    const std::size_t n = z.rows(), c = z.cols();
    if (n <= c) throw std::invalid_argument("fit_pca needs more rows than columns");

    using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    Eigen::Map<const RowMajor> Z(z.data.data(), static_cast<Eigen::Index>(n),
                                 static_cast<Eigen::Index>(c));
    Eigen::RowVectorXd mean = Z.colwise().mean();
    Eigen::MatrixXd centered = Z.rowwise() - mean;
    Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(n - 1);
    if (!cov.allFinite()) throw std::runtime_error("covariance matrix is not finite");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    if (solver.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");

    PcaModel model;
    model.dim = c;
    model.means.assign(c, 0.0);
    model.stds.assign(c, 1.0);
    model.eigenvalues.resize(c);
    model.components.resize(c * c);

    // Eigen returns ascending eigenvalues; reverse into descending order.
    for (std::size_t j = 0; j < c; ++j) {
        auto src = static_cast<Eigen::Index>(c - 1 - j);
        model.eigenvalues[j] = std::max(solver.eigenvalues()(src), 0.0);
        Eigen::VectorXd v = solver.eigenvectors().col(src);
        Eigen::Index imax = 0;
        v.cwiseAbs().maxCoeff(&imax);
        if (v(imax) < 0) v = -v;
        for (std::size_t i = 0; i < c; ++i) model.components[i * c + j] = v(static_cast<Eigen::Index>(i));
    }
    return model;
}

inline PcaModel fit_pca(const StandardizeResult& sr) {
    PcaModel model = fit_pca(sr.z);
    model.means = sr.means;
    model.stds = sr.stds;
    return model;
}

struct ComponentPolicy {
    enum class Kind { fixed, variance };
    Kind kind = Kind::variance;
    int m = 0;
    double theta = 0.99;

    static ComponentPolicy fixed(int m) { return {Kind::fixed, m, 0.0}; }
    static ComponentPolicy variance(double theta) { return {Kind::variance, 0, theta}; }

    // "fixed:8" | "variance:0.99"
    static ComponentPolicy parse(const std::string& text) {
        auto colon = text.find(':');
        if (colon == std::string::npos) throw std::invalid_argument("bad pc policy '" + text + "'");
        std::string kind = text.substr(0, colon), arg = text.substr(colon + 1);
        if (kind == "fixed") {
            int m = 0;
            if (!parse_int(arg, m)) throw std::invalid_argument("bad pc policy '" + text + "'");
            return fixed(m);
        }
        if (kind == "variance") {
            double theta = 0.0;
            if (!parse_double(arg, theta)) throw std::invalid_argument("bad pc policy '" + text + "'");
            return variance(theta);
        }
        throw std::invalid_argument("bad pc policy '" + text + "'");
    }

    std::string str() const {
        return kind == Kind::fixed ? "fixed:" + std::to_string(m) : "variance:" + fmt_g17(theta);
    }
};

/// variance(theta): smallest m whose leading eigenvalues cover >= theta of
/// total variance; fixed(m): m clamped into [1, dim].
inline int select_components(const PcaModel& model, const ComponentPolicy& policy) {
    const int dim = static_cast<int>(model.dim);
    if (policy.kind == ComponentPolicy::Kind::fixed)
        return std::clamp(policy.m, 1, dim);

    if (!(policy.theta > 0.0 && policy.theta <= 1.0))
        throw std::invalid_argument("variance threshold must be in (0, 1]");
    double total = std::accumulate(model.eigenvalues.begin(), model.eigenvalues.end(), 0.0);
    double cum = 0.0;
    for (int m = 1; m <= dim; ++m) {
        cum += model.eigenvalues[m - 1];
        if (cum / total >= policy.theta) return m;
    }
    return dim;
}

/// Project standardized rows onto the leading m principal components.
inline FeatureMatrix transform(const FeatureMatrix& z, const PcaModel& model, int m) {
    if (z.cols() != model.dim) throw std::invalid_argument("column count does not match model");
    if (m < 1 || m > static_cast<int>(model.dim)) throw std::invalid_argument("m out of range");

    std::vector<std::string> pc_labels;
    for (int j = 1; j <= m; ++j) pc_labels.push_back("pc" + std::to_string(j));
    FeatureMatrix out(z.row_ids, std::move(pc_labels));
    for (std::size_t i = 0; i < z.rows(); ++i) {
        for (int j = 0; j < m; ++j) {
            double s = 0.0;
            for (std::size_t v = 0; v < model.dim; ++v) s += z.at(i, v) * model.component(v, j);
            out.at(i, static_cast<std::size_t>(j)) = s;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Flat text persistence, 17 significant digits.

inline void save_pca_model(const PcaModel& model, std::ostream& os) {
    os << "pca_model\t" << model.dim << "\n";
    auto row = [&os](const char* tag, const std::vector<double>& v) {
        os << tag;
        for (double x : v) os << "\t" << fmt_g17(x);
        os << "\n";
    };
    row("means", model.means);
    row("stds", model.stds);
    row("eigenvalues", model.eigenvalues);
    for (std::size_t i = 0; i < model.dim; ++i) {
        os << "components";
        for (std::size_t j = 0; j < model.dim; ++j) os << "\t" << fmt_g17(model.component(i, j));
        os << "\n";
    }
}

inline PcaModel load_pca_model(std::istream& is) {
    PcaModel model;
    std::string line;
    std::size_t comp_row = 0;
    std::size_t ln = 0;
    while (std::getline(is, line)) {
        ++ln;
        if (trim(line).empty()) continue;
        auto f = split(line, '\t');
        auto nums = [&](std::vector<double>& v) {
            v.clear();
            for (std::size_t i = 1; i < f.size(); ++i) {
                double x = 0;
                if (!parse_double(f[i], x)) throw ParseError("bad number in model file", ln);
                v.push_back(x);
            }
        };
        if (f[0] == "pca_model") {
            int d = 0;
            if (f.size() != 2 || !parse_int(f[1], d)) throw ParseError("bad model header", ln);
            model.dim = static_cast<std::size_t>(d);
            model.components.assign(model.dim * model.dim, 0.0);
        } else if (f[0] == "means") {
            nums(model.means);
        } else if (f[0] == "stds") {
            nums(model.stds);
        } else if (f[0] == "eigenvalues") {
            nums(model.eigenvalues);
        } else if (f[0] == "components") {
            std::vector<double> v;
            nums(v);
            if (v.size() != model.dim || comp_row >= model.dim)
                throw ParseError("bad components row", ln);
            for (std::size_t j = 0; j < model.dim; ++j) model.components[comp_row * model.dim + j] = v[j];
            ++comp_row;
        } else {
            throw ParseError("unknown model record '" + std::string(f[0]) + "'", ln);
        }
    }
    if (comp_row != model.dim) throw ParseError("incomplete components matrix");
    return model;
}

}  // namespace linkerscout
