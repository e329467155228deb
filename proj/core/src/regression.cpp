#include "sabc/regression.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "sabc/error.hpp"

namespace sabc {
namespace {

// log(1 + e^eta) without overflow.
double softplus(double eta) {
  return eta > 0 ? eta + std::log1p(std::exp(-eta)) : std::log1p(std::exp(eta));
}

double sigmoid(double eta) {
  if (eta >= 0) return 1.0 / (1.0 + std::exp(-eta));
  const double e = std::exp(eta);
  return e / (1.0 + e);
}

void check_finite(const Eigen::MatrixXd& x, const char* what) {
  if (!x.allFinite()) throw DimensionError(std::string(what) + " has non-finite entries");
}

double binary_deviance(const Eigen::VectorXd& eta, const Eigen::VectorXd& y) {
  double d = 0.0;
  for (Eigen::Index i = 0; i < eta.size(); ++i) d += softplus(eta[i]) - y[i] * eta[i];
  return 2.0 * d;
}

double penalty(const Eigen::VectorXd& beta, double ridge) {
  return beta.size() > 1 ? ridge * beta.tail(beta.size() - 1).squaredNorm() : 0.0;
}

/// Solves h * delta = g for a symmetric positive (semi)definite h stored in
/// its lower triangle, adding diagonal jitter if the factorization fails.
Eigen::VectorXd solve_spd(Eigen::MatrixXd h, const Eigen::VectorXd& g) {
  double jitter = 0.0;
  const double scale = std::max(1.0, h.diagonal().cwiseAbs().maxCoeff());
  for (int attempt = 0; attempt < 12; ++attempt) {
    Eigen::LDLT<Eigen::MatrixXd, Eigen::Lower> ldlt(h);
    if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
      Eigen::VectorXd delta = ldlt.solve(g);
      if (delta.allFinite()) return delta;
    }
    const double next = jitter == 0.0 ? 1e-12 * scale : jitter * 10.0;
    h.diagonal().array() += next - jitter;
    jitter = next;
  }
  throw DegenerateFitError("Newton system is singular");
}

}  // namespace

// ---------------------------------------------------------------------------
// Binary logistic

Eigen::VectorXd LogisticFit::predict(const Eigen::MatrixXd& x) const {
  Eigen::VectorXd eta = x * beta;
  for (Eigen::Index i = 0; i < eta.size(); ++i) eta[i] = sigmoid(eta[i]);
  return eta;
}

LogisticFit fit_logistic(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double ridge,
                         const IrlsOptions& options) {
  if (x.rows() != y.size()) throw DimensionError("design rows and response length differ");
  if (x.rows() == 0 || x.cols() == 0) throw DimensionError("empty design matrix");
  if (ridge < 0) throw DimensionError("ridge must be non-negative");
  check_finite(x, "design matrix");
  Eigen::Index ones = 0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (y[i] != 0.0 && y[i] != 1.0) throw DimensionError("logistic response must be 0/1");
    ones += y[i] == 1.0;
  }
  if (ones == 0 || ones == y.size()) {
    throw DegenerateFitError("logistic fit needs both classes present");
  }

  const Eigen::Index p = x.cols();
  LogisticFit fit;
  fit.beta = Eigen::VectorXd::Zero(p);

  Eigen::VectorXd eta = Eigen::VectorXd::Zero(x.rows());
  double objective = binary_deviance(eta, y);
  fit.objective_trace.push_back(objective);

  Eigen::VectorXd prob(x.rows());
  Eigen::VectorXd sqrt_w(x.rows());
  int flat_steps = 0;
  for (int iter = 0;; ++iter) {
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
      prob[i] = sigmoid(eta[i]);
      sqrt_w[i] = std::sqrt(prob[i] * (1.0 - prob[i]));
    }
    Eigen::VectorXd score = x.transpose() * (y - prob);
    if (p > 1) score.tail(p - 1) -= ridge * fit.beta.tail(p - 1);
    fit.score_norm = score.lpNorm<Eigen::Infinity>();
    fit.iterations = iter;
    if (fit.score_norm <= options.score_tol) {
      fit.converged = true;
      break;
    }
    if (iter >= options.max_iter || flat_steps >= 2) break;

    const Eigen::MatrixXd xw = x.array().colwise() * sqrt_w.array();
    Eigen::MatrixXd hessian = Eigen::MatrixXd::Zero(p, p);
    hessian.selfadjointView<Eigen::Lower>().rankUpdate(xw.transpose());
    if (p > 1) hessian.diagonal().tail(p - 1).array() += ridge;
    const Eigen::VectorXd delta = solve_spd(std::move(hessian), score);

    // Step halving on the penalized objective.
    double step = 1.0;
    bool accepted = false;
    Eigen::VectorXd trial_beta;
    Eigen::VectorXd trial_eta;
    double trial_objective = objective;
    for (int h = 0; h <= options.max_halvings; ++h, step *= 0.5) {
      trial_beta = fit.beta + step * delta;
      trial_eta = x * trial_beta;
      trial_objective = binary_deviance(trial_eta, y) + penalty(trial_beta, ridge);
      // Differences below 1e-13 relative are evaluation noise near the optimum.
      if (trial_objective <= objective + 1e-13 * (1.0 + std::fabs(objective))) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;

    const double decrease = objective - trial_objective;
    flat_steps = decrease <= 1e-14 * (1.0 + std::fabs(objective)) ? flat_steps + 1 : 0;
    fit.beta = std::move(trial_beta);
    eta = std::move(trial_eta);
    objective = trial_objective;
    fit.objective_trace.push_back(objective);
  }
  fit.deviance = binary_deviance(eta, y);
  return fit;
}

// ---------------------------------------------------------------------------
// Multinomial

Eigen::VectorXd MultinomialFit::predict_row(const Eigen::VectorXd& row) const {
  Eigen::VectorXd eta(n_classes);
  eta.head(n_classes - 1) = beta.transpose() * row;
  eta[n_classes - 1] = 0.0;
  const double m = eta.maxCoeff();
  Eigen::VectorXd e = (eta.array() - m).exp();
  return e / e.sum();
}

Eigen::MatrixXd MultinomialFit::predict(const Eigen::MatrixXd& x) const {
  Eigen::MatrixXd out(x.rows(), n_classes);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    out.row(i) = predict_row(x.row(i).transpose()).transpose();
  }
  return out;
}

namespace {

struct SoftmaxState {
  Eigen::MatrixXd prob;  // rows x K
  double deviance = 0.0;
};

SoftmaxState softmax_state(const Eigen::MatrixXd& x, const Eigen::MatrixXd& beta,
                           std::span<const int> labels, int k) {
  SoftmaxState s;
  s.prob.resize(x.rows(), k);
  const Eigen::MatrixXd eta = x * beta;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    double m = 0.0;
    for (int c = 0; c < k - 1; ++c) m = std::max(m, eta(i, c));
    double z = std::exp(-m);
    for (int c = 0; c < k - 1; ++c) z += std::exp(eta(i, c) - m);
    const double log_z = m + std::log(z);
    for (int c = 0; c < k; ++c) {
      const double e = c < k - 1 ? eta(i, c) : 0.0;
      s.prob(i, c) = std::exp(e - log_z);
    }
    const int y = labels[static_cast<std::size_t>(i)];
    s.deviance -= 2.0 * ((y < k - 1 ? eta(i, y) : 0.0) - log_z);
  }
  return s;
}

}  // namespace

MultinomialFit fit_multinomial(const Eigen::MatrixXd& x, std::span<const int> labels,
                               int n_classes, double ridge, const IrlsOptions& options) {
  if (static_cast<std::size_t>(x.rows()) != labels.size()) {
    throw DimensionError("design rows and label count differ");
  }
  if (x.rows() == 0 || x.cols() == 0) throw DimensionError("empty design matrix");
  check_finite(x, "design matrix");
  if (n_classes < 2) throw DegenerateFitError("multinomial fit needs at least two classes");
  std::vector<Eigen::Index> counts(static_cast<std::size_t>(n_classes), 0);
  for (int y : labels) {
    if (y < 0 || y >= n_classes) throw DimensionError("label out of range");
    ++counts[static_cast<std::size_t>(y)];
  }
  for (int c = 0; c < n_classes; ++c) {
    if (counts[static_cast<std::size_t>(c)] == 0) {
      throw DegenerateFitError("class " + std::to_string(c) + " has no observations");
    }
  }
  for (Eigen::Index j = 1; j < x.cols(); ++j) {
    if ((x.col(j).array() == x(0, j)).all()) {
      throw DegenerateFitError("covariate column " + std::to_string(j) + " is constant");
    }
  }

  const int k = n_classes;
  const Eigen::Index p = x.cols();
  const Eigen::Index dim = p * (k - 1);

  MultinomialFit fit;
  fit.n_classes = k;
  fit.beta = Eigen::MatrixXd::Zero(p, k - 1);

  auto objective_of = [&](const Eigen::MatrixXd& beta, double deviance) {
    return p > 1 ? deviance + ridge * beta.bottomRows(p - 1).squaredNorm() : deviance;
  };

  SoftmaxState state = softmax_state(x, fit.beta, labels, k);
  double objective = objective_of(fit.beta, state.deviance);
  fit.objective_trace.push_back(objective);

  int flat_steps = 0;
  for (int iter = 0;; ++iter) {
    // Score, stacked class-major: entries [c * p, (c + 1) * p).
    Eigen::VectorXd score(dim);
    for (int c = 0; c < k - 1; ++c) {
      Eigen::VectorXd resid = -state.prob.col(c);
      for (Eigen::Index i = 0; i < x.rows(); ++i) {
        if (labels[static_cast<std::size_t>(i)] == c) resid[i] += 1.0;
      }
      Eigen::VectorXd g = x.transpose() * resid;
      if (p > 1) g.tail(p - 1) -= ridge * fit.beta.col(c).tail(p - 1);
      score.segment(c * p, p) = g;
    }
    fit.score_norm = score.lpNorm<Eigen::Infinity>();
    fit.iterations = iter;
    if (fit.score_norm <= options.score_tol) {
      fit.converged = true;
      break;
    }
    if (iter >= options.max_iter || flat_steps >= 2) break;

    Eigen::MatrixXd hessian = Eigen::MatrixXd::Zero(dim, dim);
    for (int a = 0; a < k - 1; ++a) {
      for (int b = 0; b <= a; ++b) {
        Eigen::VectorXd w = state.prob.col(a).cwiseProduct(
            (a == b ? 1.0 : 0.0) * Eigen::VectorXd::Ones(x.rows()) - state.prob.col(b));
        const Eigen::MatrixXd block = x.transpose() * w.asDiagonal() * x;
        hessian.block(a * p, b * p, p, p) = block;
        if (a != b) hessian.block(b * p, a * p, p, p) = block.transpose();
      }
      if (p > 1) {
        hessian.diagonal().segment(a * p + 1, p - 1).array() += ridge;
      }
    }
    const Eigen::VectorXd delta_flat = solve_spd(std::move(hessian), score);
    const Eigen::Map<const Eigen::MatrixXd> delta(delta_flat.data(), p, k - 1);

    double step = 1.0;
    bool accepted = false;
    Eigen::MatrixXd trial_beta;
    SoftmaxState trial_state;
    double trial_objective = objective;
    for (int h = 0; h <= options.max_halvings; ++h, step *= 0.5) {
      trial_beta = fit.beta + step * delta;
      trial_state = softmax_state(x, trial_beta, labels, k);
      trial_objective = objective_of(trial_beta, trial_state.deviance);
      // Differences below 1e-13 relative are evaluation noise near the optimum.
      if (trial_objective <= objective + 1e-13 * (1.0 + std::fabs(objective))) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;

    const double decrease = objective - trial_objective;
    flat_steps = decrease <= 1e-14 * (1.0 + std::fabs(objective)) ? flat_steps + 1 : 0;
    fit.beta = std::move(trial_beta);
    state = std::move(trial_state);
    objective = trial_objective;
    fit.objective_trace.push_back(objective);
  }
  fit.deviance = state.deviance;
  return fit;
}

// ---------------------------------------------------------------------------
// Least squares

OlsFit fit_ols(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  if (x.rows() != y.size()) throw DimensionError("design rows and response length differ");
  if (x.rows() < x.cols()) throw DimensionError("least squares needs rows >= cols");
  check_finite(x, "design matrix");
  if (!y.allFinite()) throw DimensionError("response has non-finite entries");

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  qr.setThreshold(1e-10);
  OlsFit fit;
  fit.rank = static_cast<int>(qr.rank());
  if (fit.rank < x.cols()) {
    throw DegenerateFitError("design is rank deficient (rank " + std::to_string(fit.rank) +
                             " < " + std::to_string(x.cols()) + ")");
  }
  fit.beta = qr.solve(y);
  fit.residuals = y - x * fit.beta;
  return fit;
}

}  // namespace sabc
