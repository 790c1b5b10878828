#pragma once

#include <string>
#include <vector>

namespace causekit {

/// OLS fit with an intercept: coefficients, standard errors, t statistics,
/// and two-sided p values, in column order [intercept, predictors...].
struct RegressionResult {
    std::vector<std::string> names;  // "intercept" then predictor names
    std::vector<double> coefficients;
    std::vector<double> standard_errors;
    std::vector<double> t_statistics;
    std::vector<double> p_values;
    double r_squared = 0.0;
    std::size_t n = 0;
    int df = 0;  // n - number of columns
    double condition_estimate = 0.0;
};

/// One entity's regression row: log-transformed confident class counts
/// against its third-party rating.
struct EntityDesignRow {
    std::string entity_id;
    double x1 = 0.0;  // log1p(non-support count)
    double x2 = 0.0;  // log1p(low-commitment count)
    double x3 = 0.0;  // log1p(high-commitment count)
    double y = 0.0;   // third-party rating
};

/// General OLS via Householder QR. An intercept column is always included.
/// Throws on rank deficiency (naming the collinear columns) or when
/// n < columns + 1. condition_estimate above 1e8 signals an ill-conditioned
/// design; callers should surface a warning.
RegressionResult ols(const std::vector<std::string>& predictor_names,
                     const std::vector<std::vector<double>>& predictors,
                     const std::vector<double>& y);

/// The standard three-predictor regression of ratings on log class counts.
RegressionResult ols_fit(const std::vector<EntityDesignRow>& rows);

/// P(|T| >= |t|) for Student's t with df degrees of freedom, computed through
/// the regularized incomplete beta function. Absolute accuracy ~1e-12.
double student_t_two_sided_p(double t, int df);

/// ln(1 + count); the log transform applied to class counts so entities with
/// zero messages in a class stay in the regression. Throws on negative input.
double log1p_count(long count);

}  // namespace causekit
