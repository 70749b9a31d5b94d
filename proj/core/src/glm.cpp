#include "gridsweep/glm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/QR>

namespace gridsweep {

namespace {

// log(1 + exp(x)) without overflow.
long double log1pexp(long double x) {
  if (x > 0.0L) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

// Evaluated in long double: near the optimum, genuine improvements of the
// step-halving search sit below the double ULP of the total.
long double log_likelihood(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                           const Eigen::VectorXd& beta) {
  const Eigen::VectorXd eta = x * beta;
  long double ll = 0.0L;
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    const auto eta_i = static_cast<long double>(eta[i]);
    ll += static_cast<long double>(y[i]) * eta_i - log1pexp(eta_i);
  }
  return ll;
}

// Fitted probabilities, kept strictly inside (0, 1).
Eigen::VectorXd fitted_probs(const Eigen::MatrixXd& x, const Eigen::VectorXd& beta) {
  const double eps = std::numeric_limits<double>::epsilon();
  Eigen::VectorXd eta = x * beta;
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    const double p = 1.0 / (1.0 + std::exp(-eta[i]));
    eta[i] = std::clamp(p, eps, 1.0 - eps);
  }
  return eta;
}

void check_full_rank(const DesignMatrix& design) {
  const auto n = design.n_rows();
  const auto p = design.n_cols();
  if (n <= p) {
    throw SingularDesignError(
        "design has " + std::to_string(n) + " rows for " + std::to_string(p) +
            " columns; cannot identify all coefficients",
        "");
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design.predictors);
  if (qr.rank() < p) {
    // The first pivot beyond the numerical rank is a column expressible in
    // terms of the ones already accepted.
    const auto offending =
        static_cast<std::size_t>(qr.colsPermutation().indices()[qr.rank()]);
    const std::string name = offending < design.column_names.size()
                                 ? design.column_names[offending]
                                 : "#" + std::to_string(offending);
    throw SingularDesignError(
        "design is rank deficient (rank " + std::to_string(qr.rank()) + " of " +
            std::to_string(p) + "); column '" + name + "' is collinear",
        name);
  }
}

}  // namespace

FitResult fit_logit(const DesignMatrix& design, const FitOptions& options) {
  const auto n = design.n_rows();
  const auto p = design.n_cols();
  if (n == 0) throw EmptyDesignError("design matrix has no rows");
  if (design.response.size() != n) {
    throw InvalidArgumentError("response length does not match design rows");
  }
  if (options.tol <= 0.0) throw InvalidArgumentError("tol must be positive");
  if (options.max_iter < 1) throw InvalidArgumentError("max_iter must be >= 1");

  const double y_sum = design.response.sum();
  if (y_sum == 0.0 || y_sum == static_cast<double>(n)) {
    throw DegenerateResponseError(
        "response is constant (" + std::to_string(static_cast<long long>(y_sum)) +
        " ones in " + std::to_string(n) + " rows); likelihood has no optimum");
  }
  check_full_rank(design);

  const Eigen::MatrixXd& x = design.predictors;
  const Eigen::VectorXd& y = design.response;

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  long double ll = log_likelihood(x, y, beta);
  bool converged = false;
  int iterations = 0;

  for (int iter = 0; iter < options.max_iter; ++iter) {
    const Eigen::VectorXd probs = fitted_probs(x, beta);
    const Eigen::VectorXd score = x.transpose() * (y - probs);
    if (score.lpNorm<Eigen::Infinity>() <= options.tol) {
      converged = true;
      break;
    }

    const Eigen::VectorXd weights = probs.array() * (1.0 - probs.array());
    const Eigen::MatrixXd info = x.transpose() * weights.asDiagonal() * x;
    const Eigen::VectorXd direction = info.ldlt().solve(score);

    // Expected gain of the Newton step; once it reaches rounding scale the
    // improvement can no longer be measured, so take the pure step and let
    // the gradient test at the top of the loop decide.
    const double expected_gain = score.dot(direction);
    const bool terminal =
        expected_gain <= 1e-12 * (1.0 + std::abs(static_cast<double>(ll)));

    Eigen::VectorXd candidate = beta + direction;
    long double candidate_ll = log_likelihood(x, y, candidate);
    if (!terminal) {
      // Step halving keeps the log-likelihood non-decreasing.
      double step = 1.0;
      int halvings = 0;
      while (candidate_ll < ll && halvings < options.max_step_halvings) {
        step *= 0.5;
        candidate = beta + step * direction;
        candidate_ll = log_likelihood(x, y, candidate);
        ++halvings;
      }
      if (candidate_ll < ll) break;  // no improving step; gradient check decides
    }

    beta = candidate;
    ll = candidate_ll;
    iterations = iter + 1;

    if (beta.lpNorm<Eigen::Infinity>() > options.separation_bound) {
      std::ostringstream msg;
      msg << "coefficient magnitude exceeded " << options.separation_bound
          << " on the logit scale; data are likely separated";
      throw SeparationError(msg.str());
    }
  }

  const Eigen::VectorXd probs = fitted_probs(x, beta);
  if (!converged) {
    const Eigen::VectorXd score = x.transpose() * (y - probs);
    converged = score.lpNorm<Eigen::Infinity>() <= options.tol;
  }

  const Eigen::VectorXd weights = probs.array() * (1.0 - probs.array());
  const Eigen::MatrixXd info = x.transpose() * weights.asDiagonal() * x;
  const Eigen::MatrixXd covariance =
      info.ldlt().solve(Eigen::MatrixXd::Identity(p, p));

  FitResult result;
  result.coefficient_names = design.column_names;
  result.coefficients.resize(p);
  result.standard_errors.resize(p);
  result.z_values.resize(p);
  result.p_one_tailed_positive.resize(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    result.coefficients[j] = beta[j];
    result.standard_errors[j] = std::sqrt(covariance(j, j));
    result.z_values[j] = beta[j] / result.standard_errors[j];
    result.p_one_tailed_positive[j] = one_tailed_p_positive(result.z_values[j]);
  }
  result.converged = converged;
  result.n_iterations = iterations;
  result.n_obs = static_cast<int>(n);
  result.log_likelihood = static_cast<double>(ll);
  return result;
}

double one_tailed_p_positive(double z) {
  if (!std::isfinite(z)) {
    throw InvalidArgumentError("z value must be finite");
  }
  // 1 - Phi(z) = erfc(z / sqrt(2)) / 2
  return 0.5 * std::erfc(z / std::sqrt(2.0));
}

double two_tailed_p(double z) {
  if (!std::isfinite(z)) {
    throw InvalidArgumentError("z value must be finite");
  }
  return std::erfc(std::abs(z) / std::sqrt(2.0));
}

DesignMatrix listwise_delete(const GridPanel& panel,
                             const std::vector<std::string>& variable_names) {
  const auto outcome = panel.outcome_index();
  if (!outcome) throw ConfigError("panel has no outcome variable");
  const std::string& outcome_name = panel.variables()[*outcome].name;

  std::vector<std::size_t> columns;
  columns.reserve(variable_names.size());
  for (const auto& name : variable_names) {
    if (name == outcome_name) {
      throw ConfigError("outcome variable '" + name + "' cannot be a covariate");
    }
    const auto index = panel.index_of(name);
    if (!index) throw ConfigError("unknown variable '" + name + "'");
    if (std::find(columns.begin(), columns.end(), *index) != columns.end()) {
      throw ConfigError("covariate '" + name + "' listed twice");
    }
    columns.push_back(*index);
  }

  std::vector<std::size_t> rows;
  rows.reserve(panel.size());
  for (std::size_t r = 0; r < panel.size(); ++r) {
    if (is_missing(panel.value(r, *outcome))) continue;
    bool complete = true;
    for (const auto c : columns) {
      if (is_missing(panel.value(r, c))) {
        complete = false;
        break;
      }
    }
    if (complete) rows.push_back(r);
  }
  if (rows.empty()) {
    throw EmptyDesignError("no complete cases remain after listwise deletion");
  }

  DesignMatrix design;
  design.column_names.reserve(columns.size() + 1);
  design.column_names.emplace_back("(Intercept)");
  for (const auto& name : variable_names) design.column_names.push_back(name);

  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto p = static_cast<Eigen::Index>(columns.size() + 1);
  design.predictors.resize(n, p);
  design.response.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::size_t r = rows[static_cast<std::size_t>(i)];
    design.predictors(i, 0) = 1.0;
    for (std::size_t c = 0; c < columns.size(); ++c) {
      design.predictors(i, static_cast<Eigen::Index>(c + 1)) =
          panel.value(r, columns[c]);
    }
    design.response[i] = panel.value(r, *outcome);
  }

  const auto treatment = panel.treatment_index();
  if (treatment) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (columns[c] == *treatment) {
        design.treatment_column = static_cast<int>(c + 1);
        break;
      }
    }
  }
  return design;
}

}  // namespace gridsweep
