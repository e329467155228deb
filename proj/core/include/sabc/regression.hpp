#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace sabc {

struct IrlsOptions {
  int max_iter = 100;
  /// Convergence when the max-norm of the penalized score is at most this.
  double score_tol = 1e-8;
  int max_halvings = 40;
};

/// Binary logistic fit. `beta` has one entry per design column; column 0 is
/// treated as the intercept and is not penalized.
struct LogisticFit {
  Eigen::VectorXd beta;
  bool converged = false;
  int iterations = 0;
  /// Unpenalized deviance -2 log L at beta.
  double deviance = 0.0;
  double score_norm = 0.0;
  /// Penalized objective (deviance + ridge |beta_{-0}|^2) at the start and
  /// after every accepted step. Non-increasing by construction.
  std::vector<double> objective_trace;

  Eigen::VectorXd linear_predictor(const Eigen::MatrixXd& x) const { return x * beta; }
  Eigen::VectorXd predict(const Eigen::MatrixXd& x) const;
};

/// IRLS (Newton) with step halving, maximizing
///   log L(beta) - ridge/2 |beta_{-intercept}|^2.
/// `y` holds 0/1 labels. Throws DegenerateFitError if only one class is
/// present and DimensionError on shape or non-finite input. A fit that does
/// not reach the score tolerance is returned with converged == false.
LogisticFit fit_logistic(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double ridge = 0.0,
                         const IrlsOptions& options = {});

/// Softmax regression with the last class as reference. `beta` is
/// cols x (n_classes - 1).
struct MultinomialFit {
  Eigen::MatrixXd beta;
  int n_classes = 0;
  bool converged = false;
  int iterations = 0;
  double deviance = 0.0;
  double score_norm = 0.0;
  std::vector<double> objective_trace;

  /// Class probabilities for one covariate row (length n_classes).
  Eigen::VectorXd predict_row(const Eigen::VectorXd& row) const;
  /// rows x n_classes.
  Eigen::MatrixXd predict(const Eigen::MatrixXd& x) const;
};

/// Labels are 0-based class indices in [0, n_classes). Throws
/// DegenerateFitError when fewer than two classes are requested, any class is
/// absent, or a non-intercept covariate column is constant.
MultinomialFit fit_multinomial(const Eigen::MatrixXd& x, std::span<const int> labels,
                               int n_classes, double ridge = 0.0,
                               const IrlsOptions& options = {});

struct OlsFit {
  Eigen::VectorXd beta;
  Eigen::VectorXd residuals;
  int rank = 0;
};

/// Least squares through column-pivoted QR. Requires rows >= cols and a
/// numerical rank equal to cols (pivots below 1e-10 relative count as zero);
/// otherwise throws DegenerateFitError.
OlsFit fit_ols(const Eigen::MatrixXd& x, const Eigen::VectorXd& y);

}  // namespace sabc
