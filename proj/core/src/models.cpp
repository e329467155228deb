#include "sabc/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "sabc/error.hpp"
#include "sabc/quadrature.hpp"
#include "sabc/special.hpp"

namespace sabc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kBinomialTrials = 10;
const double kLaplaceScale = 1.0 / std::sqrt(2.0);
// Half-width of the quadrature window around the data midrange.
constexpr double kQuadratureHalfWidth = 40.0;

bool is_count(double x) { return x >= 0.0 && x == std::floor(x) && std::isfinite(x); }

std::string describe(const ModelSpec& model, std::span<const double> theta) {
  std::string s = model.id + " theta=(";
  for (std::size_t i = 0; i < theta.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(theta[i]);
  }
  return s + ")";
}

void check_theta(const ModelSpec& model, std::span<const double> theta) {
  if (theta.size() != model.param_dim()) {
    throw DomainError("parameter dimension mismatch for " + describe(model, theta));
  }
  for (std::size_t i = 0; i < theta.size(); ++i) {
    if (!model.priors[i].support().contains(theta[i]) || !std::isfinite(theta[i])) {
      throw DomainError("parameter outside support: " + describe(model, theta));
    }
  }
  if (model.family == Family::kGeometric && theta[0] <= 0.0) {
    throw DomainError("geometric success probability must be positive: " +
                      describe(model, theta));
  }
}

std::vector<ModelSpec> build_registry() {
  return {
      {"A1", Family::kPoisson, {ParamPrior::exponential(1.0)}},
      {"A2", Family::kGeometric, {ParamPrior::uniform(0.0, 1.0)}},
      {"A3", Family::kBinomial10, {ParamPrior::beta_one(9.0)}},
      {"B1", Family::kLaplace, {ParamPrior::normal(0.0, 2.0)}},
      {"B2", Family::kNormal, {ParamPrior::normal(0.0, 2.0)}},
      {"C1", Family::kGkKurtosis, {ParamPrior::uniform(-0.5, 5.0)}},
      {"C2", Family::kGkSkewKurt, {ParamPrior::uniform(0.0, 4.0), ParamPrior::uniform(-0.5, 5.0)}},
  };
}

}  // namespace

// ---------------------------------------------------------------------------
// ParamPrior

ParamPrior ParamPrior::exponential(double rate) {
  if (!(rate > 0)) throw DomainError("exponential rate must be positive");
  return {Kind::kExponential, rate, 0.0};
}

ParamPrior ParamPrior::uniform(double lo, double hi) {
  if (!(hi > lo)) throw DomainError("uniform prior needs lo < hi");
  return {Kind::kUniform, lo, hi};
}

ParamPrior ParamPrior::beta_one(double b) {
  if (!(b > 0)) throw DomainError("beta shape must be positive");
  return {Kind::kBetaOne, b, 0.0};
}

ParamPrior ParamPrior::normal(double mean, double sd) {
  if (!(sd > 0)) throw DomainError("normal sd must be positive");
  return {Kind::kNormal, mean, sd};
}

Interval ParamPrior::support() const {
  switch (kind_) {
    case Kind::kExponential: return {0.0, kInf};
    case Kind::kUniform: return {a_, b_};
    case Kind::kBetaOne: return {0.0, 1.0};
    case Kind::kNormal: return {-kInf, kInf};
  }
  return {-kInf, kInf};
}

double ParamPrior::cdf(double x) const {
  switch (kind_) {
    case Kind::kExponential: return x <= 0 ? 0.0 : -std::expm1(-a_ * x);
    case Kind::kUniform: return std::clamp((x - a_) / (b_ - a_), 0.0, 1.0);
    case Kind::kBetaOne:
      if (x <= 0) return 0.0;
      if (x >= 1) return 1.0;
      return -std::expm1(a_ * std::log1p(-x));
    case Kind::kNormal: return normal_cdf((x - a_) / b_);
  }
  return 0.0;
}

double ParamPrior::quantile(double u) const {
  switch (kind_) {
    case Kind::kExponential: return -std::log1p(-u) / a_;
    case Kind::kUniform: return a_ + (b_ - a_) * u;
    case Kind::kBetaOne: return -std::expm1(std::log1p(-u) / a_);
    case Kind::kNormal: return a_ + b_ * normal_quantile(u);
  }
  return 0.0;
}

double ParamPrior::log_pdf(double x) const {
  if (!support().contains(x)) return -kInf;
  switch (kind_) {
    case Kind::kExponential: return std::log(a_) - a_ * x;
    case Kind::kUniform: return -std::log(b_ - a_);
    case Kind::kBetaOne:
      return x >= 1.0 ? (a_ == 1.0 ? 0.0 : (a_ > 1.0 ? -kInf : kInf))
                      : std::log(a_) + (a_ - 1.0) * std::log1p(-x);
    case Kind::kNormal: {
      const double z = (x - a_) / b_;
      return -0.5 * z * z - std::log(b_) - 0.5 * std::log(2.0 * std::numbers::pi);
    }
  }
  return -kInf;
}

double ParamPrior::sample(Rng& rng) const { return quantile(uniform_open(rng)); }

// ---------------------------------------------------------------------------
// Registry

std::vector<Interval> ModelSpec::support() const {
  std::vector<Interval> out;
  out.reserve(priors.size());
  for (const auto& p : priors) out.push_back(p.support());
  return out;
}

bool ModelSpec::has_exact_marginal() const {
  return family != Family::kGkKurtosis && family != Family::kGkSkewKurt;
}

const std::vector<ModelSpec>& all_models() {
  static const std::vector<ModelSpec> registry = build_registry();
  return registry;
}

const ModelSpec& model_by_id(std::string_view id) {
  for (const auto& m : all_models()) {
    if (m.id == id) return m;
  }
  throw ConfigError("unknown model id: " + std::string(id));
}

Example parse_example(std::string_view name) {
  if (name == "A_binary" || name == "A") return Example::kABinary;
  if (name == "B") return Example::kB;
  if (name == "C") return Example::kC;
  if (name == "A_three") return Example::kAThree;
  throw ConfigError("unknown example: " + std::string(name));
}

std::string_view example_name(Example ex) {
  switch (ex) {
    case Example::kABinary: return "A_binary";
    case Example::kB: return "B";
    case Example::kC: return "C";
    case Example::kAThree: return "A_three";
  }
  return "";
}

std::vector<ModelSpec> example_models(Example ex) {
  switch (ex) {
    case Example::kABinary: return {model_by_id("A1"), model_by_id("A2")};
    case Example::kB: return {model_by_id("B1"), model_by_id("B2")};
    case Example::kC: return {model_by_id("C1"), model_by_id("C2")};
    case Example::kAThree:
      return {model_by_id("A1"), model_by_id("A2"), model_by_id("A3")};
  }
  return {};
}

// ---------------------------------------------------------------------------
// Sampling

ParamVector sample_prior(const ModelSpec& model, Rng& rng) {
  ParamVector theta;
  theta.reserve(model.param_dim());
  for (const auto& p : model.priors) theta.push_back(p.sample(rng));
  return theta;
}

double prior_log_density(const ModelSpec& model, std::span<const double> theta) {
  if (theta.size() != model.param_dim()) {
    throw DomainError("parameter dimension mismatch for " + model.id);
  }
  double lp = 0.0;
  for (std::size_t i = 0; i < theta.size(); ++i) lp += model.priors[i].log_pdf(theta[i]);
  return lp;
}

double gk_quantile(double u, double a, double b, double g, double k, double c) {
  const double z = normal_quantile(u);
  // (1 - e^{-gz}) / (1 + e^{-gz}) == tanh(gz / 2)
  const double skew = 1.0 + c * std::tanh(0.5 * g * z);
  return a + b * skew * std::pow(1.0 + z * z, k) * z;
}

Dataset simulate(const ModelSpec& model, std::span<const double> theta, std::size_t n,
                 Rng& rng) {
  if (n == 0) throw DomainError("simulate needs n >= 1");
  check_theta(model, theta);

  Dataset out(n);
  const double t0 = theta[0];
  switch (model.family) {
    case Family::kPoisson: {
      if (t0 == 0.0) {
        std::fill(out.begin(), out.end(), 0.0);
        break;
      }
      std::poisson_distribution<long> dist(t0);
      for (auto& x : out) x = static_cast<double>(dist(rng));
      break;
    }
    case Family::kGeometric: {
      // Inverse CDF: P(X >= x) = (1 - theta)^x.
      if (t0 >= 1.0) {
        std::fill(out.begin(), out.end(), 0.0);
        break;
      }
      const double log_fail = std::log1p(-t0);
      for (auto& x : out) x = std::floor(std::log(uniform_open(rng)) / log_fail);
      break;
    }
    case Family::kBinomial10: {
      std::binomial_distribution<int> dist(kBinomialTrials, t0);
      for (auto& x : out) x = static_cast<double>(dist(rng));
      break;
    }
    case Family::kLaplace: {
      for (auto& x : out) {
        const double u = uniform_open(rng);
        x = u < 0.5 ? t0 + kLaplaceScale * std::log(2.0 * u)
                    : t0 - kLaplaceScale * std::log(2.0 * (1.0 - u));
      }
      break;
    }
    case Family::kNormal: {
      for (auto& x : out) x = t0 + normal_quantile(uniform_open(rng));
      break;
    }
    case Family::kGkKurtosis: {
      for (auto& x : out) x = gk_quantile(uniform_open(rng), 0.0, 1.0, 0.0, t0);
      break;
    }
    case Family::kGkSkewKurt: {
      const double k = theta[1];
      for (auto& x : out) x = gk_quantile(uniform_open(rng), 0.0, 1.0, t0, k);
      break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Likelihoods and evidences

double log_likelihood(const ModelSpec& model, std::span<const double> theta,
                      const Dataset& data) {
  if (theta.size() != model.param_dim()) {
    throw DomainError("parameter dimension mismatch for " + model.id);
  }
  const double t = theta[0];
  const double n = static_cast<double>(data.size());
  double ll = 0.0;
  switch (model.family) {
    case Family::kPoisson: {
      if (t < 0) return -kInf;
      for (double x : data) {
        if (!is_count(x)) return -kInf;
        if (x > 0) {
          if (t == 0) return -kInf;
          ll += x * std::log(t);
        }
        ll -= std::lgamma(x + 1.0);
      }
      return ll - n * t;
    }
    case Family::kGeometric: {
      if (t <= 0 || t > 1) return -kInf;
      double sum = 0.0;
      for (double x : data) {
        if (!is_count(x)) return -kInf;
        sum += x;
      }
      ll = n * std::log(t);
      if (sum > 0) ll += sum * std::log1p(-t);
      return ll;
    }
    case Family::kBinomial10: {
      if (t < 0 || t > 1) return -kInf;
      for (double x : data) {
        if (!is_count(x) || x > kBinomialTrials) return -kInf;
        ll += log_choose(kBinomialTrials, x);
        if (x > 0) ll += x * std::log(t);
        if (x < kBinomialTrials) ll += (kBinomialTrials - x) * std::log1p(-t);
      }
      return ll;
    }
    case Family::kLaplace: {
      double abs_sum = 0.0;
      for (double x : data) abs_sum += std::fabs(x - t);
      return -n * std::log(2.0 * kLaplaceScale) - abs_sum / kLaplaceScale;
    }
    case Family::kNormal: {
      double sq = 0.0;
      for (double x : data) sq += (x - t) * (x - t);
      return -0.5 * n * std::log(2.0 * std::numbers::pi) - 0.5 * sq;
    }
    case Family::kGkKurtosis:
    case Family::kGkSkewKurt:
      break;
  }
  throw UnsupportedModelError("no tractable likelihood for " + model.id);
}

double quadrature_log_marginal(const ModelSpec& model, const Dataset& data, double rel_tol) {
  if (!model.has_exact_marginal() || model.param_dim() != 1) {
    throw UnsupportedModelError("no quadrature marginal for " + model.id);
  }
  if (data.empty()) return 0.0;

  const auto [mn, mx] = std::minmax_element(data.begin(), data.end());
  const Interval support = model.priors[0].support();
  const double mid = 0.5 * (*mn + *mx);
  double lo = std::max(support.lo, mid - kQuadratureHalfWidth);
  double hi = std::min(support.hi, mid + kQuadratureHalfWidth);
  if (model.family == Family::kPoisson) {
    lo = 0.0;
    hi = *mx + kQuadratureHalfWidth;
  }

  const ParamPrior& prior = model.priors[0];
  auto log_integrand = [&](double t) {
    const double theta[1] = {t};
    return log_likelihood(model, theta, data) + prior.log_pdf(t);
  };

  // The Laplace likelihood has a kink at every observation.
  std::vector<double> breaks;
  if (model.family == Family::kLaplace) breaks = data;
  const LogIntegral r = integrate_log(log_integrand, lo, hi, breaks, rel_tol);
  return r.log_value;
}

double exact_log_marginal(const ModelSpec& model, const Dataset& data) {
  const double n = static_cast<double>(data.size());
  const ParamPrior prior = model.priors.at(0);
  switch (model.family) {
    case Family::kPoisson: {
      // int theta^S e^{-n theta} rate e^{-rate theta} dtheta / prod x!
      const double rate = prior.first();
      double sum = 0.0;
      double log_fact = 0.0;
      for (double x : data) {
        if (!is_count(x)) return -kInf;
        sum += x;
        log_fact += std::lgamma(x + 1.0);
      }
      return std::log(rate) + std::lgamma(sum + 1.0) - (sum + 1.0) * std::log(n + rate) -
             log_fact;
    }
    case Family::kGeometric: {
      // Uniform(0, 1) prior: int theta^n (1 - theta)^S dtheta = B(n + 1, S + 1).
      double sum = 0.0;
      for (double x : data) {
        if (!is_count(x)) return -kInf;
        sum += x;
      }
      return log_beta(n + 1.0, sum + 1.0);
    }
    case Family::kBinomial10: {
      // Beta(1, b) prior.
      const double b = prior.first();
      double sum = 0.0;
      double log_coef = 0.0;
      for (double x : data) {
        if (!is_count(x) || x > kBinomialTrials) return -kInf;
        sum += x;
        log_coef += log_choose(kBinomialTrials, x);
      }
      return log_coef + log_beta(1.0 + sum, b + kBinomialTrials * n - sum) - log_beta(1.0, b);
    }
    case Family::kNormal: {
      // x ~ N(m 1, I + s^2 1 1^T)
      const double m = prior.first();
      const double s2 = prior.second() * prior.second();
      double sum = 0.0;
      double sq = 0.0;
      for (double x : data) {
        sum += x - m;
        sq += (x - m) * (x - m);
      }
      const double denom = 1.0 + n * s2;
      return -0.5 * n * std::log(2.0 * std::numbers::pi) - 0.5 * std::log(denom) -
             0.5 * (sq - s2 * sum * sum / denom);
    }
    case Family::kLaplace:
      return quadrature_log_marginal(model, data);
    case Family::kGkKurtosis:
    case Family::kGkSkewKurt:
      break;
  }
  throw UnsupportedModelError("exact marginal likelihood unavailable for " + model.id);
}

}  // namespace sabc
