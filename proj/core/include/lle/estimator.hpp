#pragma once

// Recursive least-squares line fit with a time-varying weighting factor.
//
// One update with regressor psi, observation y and factor lambda:
//
//   K     = P psi / (psi' P psi + lambda)
//   theta = theta + K (y - psi' theta)
//   P     = (P - P psi psi' P / (psi' P psi + lambda)) / lambda
//
// lambda = 1 is the ordinary (uniformly weighted) recursion. Since the
// information matrix evolves as P_k^-1 = lambda_k P_{k-1}^-1 + psi psi', after
// n updates theta is the weighted least-squares solution with
//
//   w_k = prod_{j=k+1..n} lambda_j       (data weights)
//   W_0 = prod_{j=1..n}   lambda_j       (weight on the P_0^-1 prior)
//
// so lambda > 1 discounts *later* observations: lambda(k) = 1 + c/k gives
// w_k ~ (n/k)^c.

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lle/lbe.hpp"

namespace lle {

using Vec2 = std::array<double, 2>;
using Mat2 = std::array<Vec2, 2>;

inline constexpr double kDefaultP0 = 1e6;
inline constexpr double kDefaultLambdaC = 1.02;

struct RlsState {
  Vec2 theta{};  // slope, intercept
  Mat2 P{};
  std::size_t k = 0;
};

/// theta = 0, P = p0·I. Throws InvalidArgument unless p0 > 0.
RlsState rls_init(double p0 = kDefaultP0);

/// One weighted update (see header comment). P is re-symmetrized. Throws
/// InvalidArgument for lambda <= 0 and DegenerateGain if psi'P psi + lambda
/// is not positive.
RlsState rls_update(const RlsState& state, const Vec2& psi, double y,
                    double lambda);

/// The unweighted recursion written in its classic gain form,
/// P = P - K psi' P. Equal to rls_update(..., 1.0) up to rounding.
RlsState rls_update_classic(const RlsState& state, const Vec2& psi, double y);

class LambdaSchedule {
 public:
  enum class Kind { Constant, InverseK };

  static LambdaSchedule constant() { return LambdaSchedule(Kind::Constant, 0.0); }
  /// lambda(k) = 1 + c/k. Throws InvalidArgument for c <= -1 (lambda(1) <= 0).
  static LambdaSchedule inverse_k(double c = kDefaultLambdaC);

  Kind kind() const noexcept { return kind_; }
  double c() const noexcept { return c_; }

  /// Throws InvalidArgument for k = 0.
  double at(std::size_t k) const;

  /// "constant" or "variable(c=1.02)".
  std::string label() const;

  friend bool operator==(const LambdaSchedule&, const LambdaSchedule&) = default;

 private:
  LambdaSchedule(Kind kind, double c) : kind_(kind), c_(c) {}
  Kind kind_;
  double c_;
};

double lambda_at(const LambdaSchedule& schedule, std::size_t k);

/// The weights an n-step run of the schedule implicitly applies.
struct WeightProfile {
  std::vector<double> data;  // w_1..w_n
  double prior = 1.0;        // W_0
};
WeightProfile induced_weights(const LambdaSchedule& schedule, std::size_t n);

struct FitResult {
  /// slope / time_scale.
  double lle = 0.0;
  double slope = 0.0;
  double intercept = 0.0;
  std::size_t n_points = 0;
  /// First step number in the window; the regressor is k - first_k + 1.
  std::size_t first_k = 0;
  FitWindow window;
  LambdaSchedule schedule = LambdaSchedule::constant();
};

/// Feeds the window points as psi = (j, 1), j = k - first_k + 1, with
/// lambda = lambda_at(schedule, m) for the m-th update. Throws WindowTooShort
/// for fewer than 10 points.
FitResult estimate_lle(const LbeSeries& series, const LambdaSchedule& schedule,
                       double p0 = kDefaultP0);

struct Observation {
  Vec2 psi;
  double y;
};

/// Direct solve of (sum w_i psi_i psi_i' + P_0^-1) theta = sum w_i psi_i y_i
/// with P_0 = p0·I. Throws InvalidArgument for fewer than 2 points or a
/// weight count mismatch, SingularSystem when the 2x2 matrix is singular.
Vec2 batch_wls_oracle(std::span<const Observation> points,
                      std::span<const double> weights, double p0);

}  // namespace lle
