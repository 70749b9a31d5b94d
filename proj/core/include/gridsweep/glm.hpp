#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gridsweep/grid.hpp"

namespace gridsweep {

/// Complete-case design for a binary-response regression. The first column is
/// always the intercept (all ones); `treatment_column` indexes the column that
/// carries the treatment role, or -1 when none of the covariates does.
struct DesignMatrix {
  std::vector<std::string> column_names;
  Eigen::MatrixXd predictors;  // n x p, p == column_names.size()
  Eigen::VectorXd response;    // n entries, each 0 or 1
  int treatment_column = -1;

  Eigen::Index n_rows() const { return predictors.rows(); }
  Eigen::Index n_cols() const { return predictors.cols(); }
};

struct FitOptions {
  double tol = 1e-8;             // convergence: max-norm of the score
  int max_iter = 50;
  int max_step_halvings = 20;
  double separation_bound = 30.0;  // |coefficient| beyond this aborts the fit
};

struct FitResult {
  std::vector<std::string> coefficient_names;
  std::vector<double> coefficients;        // log-odds scale
  std::vector<double> standard_errors;
  std::vector<double> z_values;            // coefficient / standard error
  std::vector<double> p_one_tailed_positive;  // 1 - Phi(z)
  bool converged = false;
  int n_iterations = 0;
  int n_obs = 0;
  double log_likelihood = 0.0;
};

/// Maximum-likelihood logistic regression by iteratively reweighted least
/// squares with step halving. Standard errors come from the inverse observed
/// information at the optimum (observed equals expected under the canonical
/// logit link). If max_iter is reached the best iterate is returned with
/// converged == false.
///
/// Throws:
///   EmptyDesignError       no rows
///   DegenerateResponseError response all 0 or all 1
///   SingularDesignError    rank-deficient design (names an offending column)
///   SeparationError        a coefficient crossed the separation bound
FitResult fit_logit(const DesignMatrix& design, const FitOptions& options = {});

/// Upper-tail probability 1 - Phi(z) for the hypothesis that a coefficient is
/// positive. Absolute error below 1e-10 over the working range.
double one_tailed_p_positive(double z);

/// Conventional two-sided p-value, 2 * (1 - Phi(|z|)).
double two_tailed_p(double z);

/// Build a complete-case design from a panel: rows with a MISSING outcome or
/// a MISSING value in any named covariate are dropped, an intercept column is
/// prepended, and the treatment-role column is flagged for reporting.
DesignMatrix listwise_delete(const GridPanel& panel,
                             const std::vector<std::string>& variable_names);

}  // namespace gridsweep
