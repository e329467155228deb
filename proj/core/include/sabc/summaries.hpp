#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "sabc/models.hpp"

namespace sabc {

using SummaryVector = std::vector<double>;

/// Fitted logits are clamped to this range before entering distances.
inline constexpr double kLogitClamp = 30.0;

/// (x^(5), x^(15), ..., x^(95)) of a 100-point dataset.
SummaryVector s10(const Dataset& data);

enum class LiteratureExample { kB, kC };

/// B: 4th and 6th central sample moments. C: empirical 10% and 90% quantiles
/// x^(ceil(0.1 n)) and x^(ceil(0.9 n)).
SummaryVector literature_summary(LiteratureExample example, const Dataset& data);

/// (1, x^(1), ..., x^(n)). Throws DimensionError unless data.size() == n.
std::vector<double> basis_expand(const Dataset& data, std::size_t n = 100);

/// Pairwise logistic model-choice summaries. Row r of `coefficients` holds
/// beta for pair `pairs[r]` against the order-statistic basis of `basis_n`
/// observations; the summary is the linear predictor (logit of the
/// probability of the pair's first model).
struct FittedSummary {
  std::vector<std::pair<int, int>> pairs;
  Eigen::MatrixXd coefficients;
  std::size_t basis_n = 100;

  std::size_t output_dim() const { return pairs.size(); }
  std::size_t basis_dim() const { return basis_n + 1; }
  std::string basis_name() const { return "order_stats_" + std::to_string(basis_n + 1); }
};

/// Linear predictors beta^T f(data), each clamped to [-kLogitClamp, kLogitClamp].
SummaryVector eval_fitted(const FittedSummary& summary, const Dataset& data);

/// {"pairs": [[i,j],...], "coefficients": [[...],...], "basis": "order_stats_101"}
std::string fitted_summary_to_json(const FittedSummary& summary);
FittedSummary fitted_summary_from_json(const std::string& text);

/// Tagged summary definition used by the pipeline and experiment runner.
class SummaryDef {
 public:
  enum class Kind { kOrderStats10, kLiteratureB, kLiteratureC, kFullOrderBasis, kFitted };

  static SummaryDef order_stats_10() { return SummaryDef(Kind::kOrderStats10); }
  static SummaryDef literature(LiteratureExample ex) {
    return SummaryDef(ex == LiteratureExample::kB ? Kind::kLiteratureB : Kind::kLiteratureC);
  }
  static SummaryDef full_order_basis(std::size_t n = 100) {
    SummaryDef d(Kind::kFullOrderBasis);
    d.basis_n_ = n;
    return d;
  }
  static SummaryDef fitted(FittedSummary fit) {
    SummaryDef d(Kind::kFitted);
    d.basis_n_ = fit.basis_n;
    d.fit_ = std::move(fit);
    return d;
  }

  Kind kind() const { return kind_; }
  std::size_t output_dim() const;
  SummaryVector evaluate(const Dataset& data) const;
  const FittedSummary& fit() const { return fit_; }

 private:
  explicit SummaryDef(Kind kind) : kind_(kind) {}

  Kind kind_;
  std::size_t basis_n_ = 100;
  FittedSummary fit_;
};

}  // namespace sabc
