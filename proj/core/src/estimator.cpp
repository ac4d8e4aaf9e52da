#include "lle/estimator.hpp"

#include <cmath>

#include <fmt/format.h>

namespace lle {
namespace {

Vec2 mat_vec(const Mat2& m, const Vec2& v) {
  return {m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]};
}

double dot(const Vec2& a, const Vec2& b) { return a[0] * b[0] + a[1] * b[1]; }

void symmetrize(Mat2& p) {
  const double off = 0.5 * (p[0][1] + p[1][0]);
  p[0][1] = off;
  p[1][0] = off;
}

double gain_denominator(const Mat2& p, const Vec2& psi, double lambda) {
  const double den = dot(psi, mat_vec(p, psi)) + lambda;
  if (!(den > 0) || !std::isfinite(den)) {
    throw Error(ErrorCode::DegenerateGain,
                fmt::format("psi'P psi + lambda = {} is not positive", den));
  }
  return den;
}

}  // namespace

RlsState rls_init(double p0) {
  if (!(p0 > 0) || !std::isfinite(p0)) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("initial covariance scale must be positive, got {}",
                            p0));
  }
  RlsState s;
  s.P = {{{p0, 0.0}, {0.0, p0}}};
  return s;
}

RlsState rls_update(const RlsState& state, const Vec2& psi, double y,
                    double lambda) {
  if (!(lambda > 0)) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("lambda must be positive, got {}", lambda));
  }
  const Vec2 p_psi = mat_vec(state.P, psi);
  const double den = gain_denominator(state.P, psi, lambda);
  const Vec2 gain = {p_psi[0] / den, p_psi[1] / den};
  const double innovation = y - dot(psi, state.theta);

  RlsState next;
  next.k = state.k + 1;
  next.theta = {state.theta[0] + gain[0] * innovation,
                state.theta[1] + gain[1] * innovation};
  // P psi psi' P / den = K (P psi)' since P is symmetric.
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      next.P[i][j] = (state.P[i][j] - gain[i] * p_psi[j]) / lambda;
    }
  }
  symmetrize(next.P);
  return next;
}

RlsState rls_update_classic(const RlsState& state, const Vec2& psi, double y) {
  const Vec2 p_psi = mat_vec(state.P, psi);
  const double den = gain_denominator(state.P, psi, 1.0);
  const Vec2 gain = {p_psi[0] / den, p_psi[1] / den};
  const double innovation = y - dot(psi, state.theta);

  // psi' P as a row vector.
  const Vec2 psi_p = {psi[0] * state.P[0][0] + psi[1] * state.P[1][0],
                      psi[0] * state.P[0][1] + psi[1] * state.P[1][1]};
  RlsState next;
  next.k = state.k + 1;
  next.theta = {state.theta[0] + gain[0] * innovation,
                state.theta[1] + gain[1] * innovation};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      next.P[i][j] = state.P[i][j] - gain[i] * psi_p[j];
    }
  }
  symmetrize(next.P);
  return next;
}

LambdaSchedule LambdaSchedule::inverse_k(double c) {
  if (!(c > -1.0) || !std::isfinite(c)) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("lambda(k) = 1 + c/k needs c > -1, got {}", c));
  }
  return LambdaSchedule(Kind::InverseK, c);
}

double LambdaSchedule::at(std::size_t k) const {
  if (k == 0) {
    throw Error(ErrorCode::InvalidArgument, "lambda(k) is defined for k >= 1");
  }
  if (kind_ == Kind::Constant) return 1.0;
  return 1.0 + c_ / static_cast<double>(k);
}

std::string LambdaSchedule::label() const {
  if (kind_ == Kind::Constant) return "constant";
  return fmt::format("variable(c={})", c_);
}

double lambda_at(const LambdaSchedule& schedule, std::size_t k) {
  return schedule.at(k);
}

WeightProfile induced_weights(const LambdaSchedule& schedule, std::size_t n) {
  WeightProfile w;
  w.data.assign(n, 1.0);
  double tail = 1.0;  // prod_{j=k+1..n}
  for (std::size_t k = n; k >= 1; --k) {
    w.data[k - 1] = tail;
    tail *= schedule.at(k);
  }
  w.prior = tail;
  return w;
}

FitResult estimate_lle(const LbeSeries& series, const LambdaSchedule& schedule,
                       double p0) {
  const auto points = series.window_points();
  if (points.size() < kMinWindowPoints) {
    throw Error(ErrorCode::WindowTooShort,
                fmt::format("{} points in the fit window, need {}",
                            points.size(), kMinWindowPoints));
  }
  const std::size_t first_k = points.front().k;
  RlsState s = rls_init(p0);
  for (std::size_t m = 0; m < points.size(); ++m) {
    const double j = static_cast<double>(points[m].k - first_k + 1);
    s = rls_update(s, {j, 1.0}, points[m].y, schedule.at(m + 1));
  }
  FitResult r;
  r.slope = s.theta[0];
  r.intercept = s.theta[1];
  r.lle = s.theta[0] / series.time_scale;
  r.n_points = points.size();
  r.first_k = first_k;
  r.window = series.window;
  r.schedule = schedule;
  return r;
}

Vec2 batch_wls_oracle(std::span<const Observation> points,
                      std::span<const double> weights, double p0) {
  if (points.size() < 2 || points.size() != weights.size()) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("need >= 2 points and one weight each ({} points, "
                            "{} weights)",
                            points.size(), weights.size()));
  }
  if (!(p0 > 0)) {
    throw Error(ErrorCode::InvalidArgument, "p0 must be positive");
  }
  // Normal equations accumulated in long double, then Cramer's rule.
  long double a00 = 1.0L / p0, a01 = 0, a11 = 1.0L / p0, b0 = 0, b1 = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const long double w = weights[i];
    const long double x0 = points[i].psi[0];
    const long double x1 = points[i].psi[1];
    a00 += w * x0 * x0;
    a01 += w * x0 * x1;
    a11 += w * x1 * x1;
    b0 += w * x0 * points[i].y;
    b1 += w * x1 * points[i].y;
  }
  const long double det = a00 * a11 - a01 * a01;
  const long double scale = std::fabs(a00 * a11) + a01 * a01;
  if (!(std::fabs(det) > 1e-14L * scale)) {
    throw Error(ErrorCode::SingularSystem,
                fmt::format("normal matrix is singular (det {})",
                            static_cast<double>(det)));
  }
  return {static_cast<double>((a11 * b0 - a01 * b1) / det),
          static_cast<double>((a00 * b1 - a01 * b0) / det)};
}

}  // namespace lle
