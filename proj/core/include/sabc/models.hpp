#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sabc/random.hpp"

namespace sabc {

using Dataset = std::vector<double>;
using ParamVector = std::vector<double>;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double x) const { return x >= lo && x <= hi; }
  double width() const { return hi - lo; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// One-dimensional prior on a single parameter. Table-1 priors are all
/// independent across parameters and have closed-form CDF and quantile.
class ParamPrior {
 public:
  enum class Kind { kExponential, kUniform, kBetaOne, kNormal };

  static ParamPrior exponential(double rate);
  static ParamPrior uniform(double lo, double hi);
  /// Beta(1, b): density b (1 - x)^(b - 1) on [0, 1].
  static ParamPrior beta_one(double b);
  static ParamPrior normal(double mean, double sd);

  Kind kind() const { return kind_; }
  /// Rate, lower bound, b, or mean depending on kind.
  double first() const { return a_; }
  /// Upper bound or sd depending on kind; unused otherwise.
  double second() const { return b_; }
  Interval support() const;
  double cdf(double x) const;
  double quantile(double u) const;
  double log_pdf(double x) const;
  double sample(Rng& rng) const;
  /// Prior probability of [iv.lo, iv.hi].
  double mass(const Interval& iv) const { return cdf(iv.hi) - cdf(iv.lo); }

 private:
  ParamPrior(Kind kind, double a, double b) : kind_(kind), a_(a), b_(b) {}

  Kind kind_;
  double a_;
  double b_;
};

/// Observation families of the example suite.
enum class Family {
  kPoisson,      // A1
  kGeometric,    // A2, pmf theta (1 - theta)^x on {0, 1, ...}
  kBinomial10,   // A3
  kLaplace,      // B1, location theta, scale 1/sqrt(2)
  kNormal,       // B2, mean theta, sd 1
  kGkKurtosis,   // C1, gk(0, 1, 0, k)
  kGkSkewKurt,   // C2, gk(0, 1, g, k)
};

struct ModelSpec {
  std::string id;
  Family family;
  std::vector<ParamPrior> priors;

  std::size_t param_dim() const { return priors.size(); }
  std::vector<Interval> support() const;
  bool has_exact_marginal() const;
};

/// Model ids "A1", "A2", "A3", "B1", "B2", "C1", "C2".
const ModelSpec& model_by_id(std::string_view id);
const std::vector<ModelSpec>& all_models();

enum class Example { kABinary, kB, kC, kAThree };

Example parse_example(std::string_view name);
std::string_view example_name(Example ex);
std::vector<ModelSpec> example_models(Example ex);

ParamVector sample_prior(const ModelSpec& model, Rng& rng);

/// -inf outside the support.
double prior_log_density(const ModelSpec& model, std::span<const double> theta);

/// Throws DomainError when theta is outside the support or n == 0.
Dataset simulate(const ModelSpec& model, std::span<const double> theta, std::size_t n,
                 Rng& rng);

/// Log-likelihood of iid data. Throws UnsupportedModelError for g-and-k.
double log_likelihood(const ModelSpec& model, std::span<const double> theta,
                      const Dataset& data);

/// log of the evidence, integrating theta against the prior. Closed form for
/// A1, A2, A3, B2; adaptive quadrature for B1. Throws UnsupportedModelError
/// for C1 and C2.
double exact_log_marginal(const ModelSpec& model, const Dataset& data);

/// B1 evidence by adaptive quadrature; exposed separately so the same
/// integrator can be checked against closed forms.
double quadrature_log_marginal(const ModelSpec& model, const Dataset& data,
                               double rel_tol = 1e-10);

/// g-and-k quantile function with c = 0.8:
///   A + B [1 + c (1 - e^{-g z}) / (1 + e^{-g z})] (1 + z^2)^k z,  z = Phi^{-1}(u).
double gk_quantile(double u, double a, double b, double g, double k, double c = 0.8);

}  // namespace sabc
