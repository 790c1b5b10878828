#include "causekit/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace causekit {

namespace {

// Continued-fraction evaluation for the incomplete beta function
// (modified Lentz), convergent for x < (a+1)/(a+b+2).
double beta_cf(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 3e-16;
    constexpr double kTiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h;
}

// Regularized incomplete beta I_x(a, b).
double reg_inc_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double log_bt = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log1p(-x);
    const double bt = std::exp(log_bt);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return bt * beta_cf(a, b, x) / a;
    }
    return 1.0 - bt * beta_cf(b, a, 1.0 - x) / b;
}

}  // namespace

double student_t_two_sided_p(double t, int df) {
    if (df < 1) throw std::invalid_argument("student_t_two_sided_p: df must be >= 1");
    if (!std::isfinite(t)) throw std::invalid_argument("student_t_two_sided_p: non-finite t");
    const double d = static_cast<double>(df);
    // P(|T| >= |t|) = I_{df/(df+t^2)}(df/2, 1/2); even in t, so symmetry is exact.
    return reg_inc_beta(d / 2.0, 0.5, d / (d + t * t));
}

double log1p_count(long count) {
    if (count < 0) throw std::invalid_argument("log1p_count: negative count");
    return std::log1p(static_cast<double>(count));
}

RegressionResult ols(const std::vector<std::string>& predictor_names,
                     const std::vector<std::vector<double>>& predictors,
                     const std::vector<double>& y) {
    if (predictor_names.size() != predictors.size()) {
        throw std::invalid_argument("ols: names/columns mismatch");
    }
    const std::size_t n = y.size();
    const std::size_t p = predictors.size() + 1;  // + intercept
    if (n < p + 1) {
        throw std::invalid_argument("ols: need at least " + std::to_string(p + 1) +
                                    " observations for " + std::to_string(p) + " columns");
    }
    for (const auto& col : predictors) {
        if (col.size() != n) throw std::invalid_argument("ols: column length mismatch");
    }

    // Column-major design matrix with leading intercept column.
    std::vector<std::vector<double>> a(p, std::vector<double>(n));
    std::fill(a[0].begin(), a[0].end(), 1.0);
    for (std::size_t j = 1; j < p; ++j) a[j] = predictors[j - 1];

    std::vector<std::string> names;
    names.reserve(p);
    names.emplace_back("intercept");
    for (const auto& s : predictor_names) names.push_back(s);

    // Householder QR in place; z accumulates Q^T y.
    std::vector<double> z = y;
    std::vector<double> rdiag(p, 0.0);
    std::vector<std::size_t> deficient;
    for (std::size_t k = 0; k < p; ++k) {
        double norm = 0.0;
        for (std::size_t i = k; i < n; ++i) norm += a[k][i] * a[k][i];
        norm = std::sqrt(norm);
        if (norm == 0.0) {
            deficient.push_back(k);
            rdiag[k] = 0.0;
            continue;
        }
        const double alpha = a[k][k] >= 0.0 ? -norm : norm;
        // Reflector v = x - alpha*e1, stored over column k below the diagonal.
        a[k][k] -= alpha;
        double vtv = 0.0;
        for (std::size_t i = k; i < n; ++i) vtv += a[k][i] * a[k][i];
        if (vtv > 0.0) {
            for (std::size_t j = k + 1; j < p; ++j) {
                double dot = 0.0;
                for (std::size_t i = k; i < n; ++i) dot += a[k][i] * a[j][i];
                const double f = 2.0 * dot / vtv;
                for (std::size_t i = k; i < n; ++i) a[j][i] -= f * a[k][i];
            }
            double dot = 0.0;
            for (std::size_t i = k; i < n; ++i) dot += a[k][i] * z[i];
            const double f = 2.0 * dot / vtv;
            for (std::size_t i = k; i < n; ++i) z[i] -= f * a[k][i];
        }
        rdiag[k] = alpha;
    }

    double max_diag = 0.0;
    for (double r : rdiag) max_diag = std::max(max_diag, std::fabs(r));
    for (std::size_t k = 0; k < p; ++k) {
        if (std::fabs(rdiag[k]) <= max_diag * 1e-10 &&
            std::find(deficient.begin(), deficient.end(), k) == deficient.end()) {
            deficient.push_back(k);
        }
    }
    if (!deficient.empty()) {
        std::string msg = "ols: design matrix is rank deficient; collinear columns:";
        std::sort(deficient.begin(), deficient.end());
        for (std::size_t k : deficient) msg += " " + names[k];
        throw std::invalid_argument(msg);
    }

    // R is upper triangular: R[k][j] = a[j][k] for j > k, diagonal in rdiag.
    auto r_at = [&](std::size_t row, std::size_t col) {
        return row == col ? rdiag[row] : a[col][row];
    };

    std::vector<double> beta(p, 0.0);
    for (std::size_t k = p; k-- > 0;) {
        double s = z[k];
        for (std::size_t j = k + 1; j < p; ++j) s -= r_at(k, j) * beta[j];
        beta[k] = s / rdiag[k];
    }

    // Residuals against the original inputs (not the transformed copy).
    double ssr = 0.0, sst = 0.0, mean_y = 0.0;
    for (double v : y) mean_y += v;
    mean_y /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        double fitted = beta[0];
        for (std::size_t j = 1; j < p; ++j) fitted += beta[j] * predictors[j - 1][i];
        const double r = y[i] - fitted;
        ssr += r * r;
        sst += (y[i] - mean_y) * (y[i] - mean_y);
    }

    // (X'X)^{-1} = R^{-1} R^{-T} from the triangular inverse.
    std::vector<std::vector<double>> rinv(p, std::vector<double>(p, 0.0));
    for (std::size_t j = 0; j < p; ++j) {
        rinv[j][j] = 1.0 / rdiag[j];
        for (std::size_t k = j; k-- > 0;) {
            double s = 0.0;
            for (std::size_t m = k + 1; m <= j; ++m) s += r_at(k, m) * rinv[m][j];
            rinv[k][j] = -s / rdiag[k];
        }
    }

    const int df = static_cast<int>(n - p);
    const double s2 = ssr / static_cast<double>(df);

    RegressionResult result;
    result.names = std::move(names);
    result.coefficients = beta;
    result.n = n;
    result.df = df;
    result.r_squared = sst > 0.0 ? 1.0 - ssr / sst : 1.0;
    double min_diag = std::fabs(rdiag[0]);
    for (double r : rdiag) min_diag = std::min(min_diag, std::fabs(r));
    result.condition_estimate = max_diag / min_diag;

    result.standard_errors.resize(p);
    result.t_statistics.resize(p);
    result.p_values.resize(p);
    for (std::size_t j = 0; j < p; ++j) {
        double cjj = 0.0;
        for (std::size_t m = j; m < p; ++m) cjj += rinv[j][m] * rinv[j][m];
        result.standard_errors[j] = std::sqrt(s2 * cjj);
        if (result.standard_errors[j] > 0.0) {
            result.t_statistics[j] = beta[j] / result.standard_errors[j];
            result.p_values[j] = student_t_two_sided_p(result.t_statistics[j], df);
        } else {
            // Exact fit: zero residual variance makes a nonzero coefficient
            // infinitely significant.
            result.t_statistics[j] =
                beta[j] == 0.0 ? 0.0
                               : std::copysign(std::numeric_limits<double>::infinity(), beta[j]);
            result.p_values[j] = beta[j] == 0.0 ? 1.0 : 0.0;
        }
    }
    return result;
}

RegressionResult ols_fit(const std::vector<EntityDesignRow>& rows) {
    std::vector<double> x1, x2, x3, y;
    x1.reserve(rows.size());
    x2.reserve(rows.size());
    x3.reserve(rows.size());
    y.reserve(rows.size());
    for (const auto& r : rows) {
        x1.push_back(r.x1);
        x2.push_back(r.x2);
        x3.push_back(r.x3);
        y.push_back(r.y);
    }
    return ols({"non_support", "low_commit", "high_commit"}, {x1, x2, x3}, y);
}

}  // namespace causekit
