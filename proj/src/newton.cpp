#include "rnewton/newton.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "rnewton/error.hpp"

namespace rnewton {

std::string to_string(NewtonStatus s) {
  switch (s) {
    case NewtonStatus::converged_zero: return "converged-zero";
    case NewtonStatus::converged_stationary: return "converged-stationary";
    case NewtonStatus::max_steps: return "max-steps";
    case NewtonStatus::diverged: return "diverged";
  }
  return "unknown";
}

std::string format_trace_line(std::size_t step, double residual, std::optional<double> shift) {
  char buf[128];
  if (shift) {
    std::snprintf(buf, sizeof buf, "Step %4d:  residual = %9.2e    shift = %9.2e", static_cast<int>(step),
                  residual, *shift);
  } else {
    std::snprintf(buf, sizeof buf, "Step %4d:  residual = %9.2e", static_cast<int>(step), residual);
  }
  return buf;
}

std::string format_trace(const IterationTrace& trace) {
  std::string out;
  for (std::size_t j = 0; j < trace.residuals.size(); ++j) {
    std::optional<double> shift;
    if (j > 0) shift = trace.shifts[j - 1];
    out += format_trace_line(j, trace.residuals[j], shift);
    out += '\n';
  }
  return out;
}

namespace {

Vector checked_eval(const Mapping& f, const Vector& x, std::size_t step) {
  Vector y = f(x);
  if (!y.allFinite()) {
    throw DivergenceError("non-finite mapping value at step " + std::to_string(step));
  }
  return y;
}

}  // namespace

IterationTrace rank_r_newton(const Mapping& f, const Vector& x0, const NewtonOptions& opts) {
  const std::size_t n = f.domain.total_dim();
  const std::size_t m = f.codomain.total_dim();
  if (opts.rank < 1 || opts.rank > std::min(n, m)) {
    throw RankDeficiencyError("projection rank " + std::to_string(opts.rank) + " outside [1, " +
                                  std::to_string(std::min(n, m)) + "]",
                              opts.rank);
  }
  if (!x0.allFinite()) throw DivergenceError("initial iterate is not finite");

  IterationTrace trace;
  trace.rank = opts.rank;
  Vector x = x0;
  Vector fx = checked_eval(f, x, 0);
  const double shift_tol = opts.shift_tol.value_or(1e-14 * std::max(1.0, x0.norm()));
  const double residual_tol = opts.residual_tol.value_or(1e-12 * (1.0 + fx.norm()));
  if (!(shift_tol > 0.0) || !(residual_tol > 0.0)) {
    throw DimensionError("Newton tolerances must be positive");
  }

  trace.residuals.push_back(fx.norm());
  if (opts.trace) *opts.trace << format_trace_line(0, trace.residuals.back(), std::nullopt) << '\n';

  std::size_t small_shifts = 0;
  if (trace.residuals.back() <= residual_tol) trace.status = NewtonStatus::converged_zero;

  for (std::size_t step = 1; step <= opts.max_steps && !trace.converged(); ++step) {
    RankRProjection proj = [&] {
      try {
        return rank_r_project(f.jacobian_at(x), opts.rank);
      } catch (const RankDeficiencyError&) {
        throw RankDeficiencyError("Jacobian has rank below " + std::to_string(opts.rank) +
                                      " at step " + std::to_string(step - 1),
                                  opts.rank);
      }
    }();
    const Vector dx = proj.pinv_apply(fx);
    x -= dx;
    if (!x.allFinite()) throw DivergenceError("non-finite iterate at step " + std::to_string(step));
    fx = checked_eval(f, x, step);

    const double shift = dx.norm();
    const double prev = trace.residuals.back();
    const double res = fx.norm();
    trace.shifts.push_back(shift);
    trace.residuals.push_back(res);
    if (opts.trace) *opts.trace << format_trace_line(step, res, shift) << '\n';

    if (res <= residual_tol) {
      trace.status = NewtonStatus::converged_zero;
      break;
    }
    const bool plateau = std::abs(res - prev) <= 0.01 * prev;
    small_shifts = shift <= shift_tol ? small_shifts + 1 : 0;
    if (small_shifts >= 2 && plateau) trace.status = NewtonStatus::converged_stationary;
  }

  const SvdFactors final_svd = svd(f.jacobian_at(x));
  const auto r = static_cast<Eigen::Index>(opts.rank);
  const double sr = final_svd.sigma(r - 1);
  trace.condition = sr > 0.0 ? 1.0 / sr : std::numeric_limits<double>::infinity();
  trace.relative_condition = sr > 0.0 ? final_svd.sigma(0) / sr : std::numeric_limits<double>::infinity();
  trace.gap = (r < final_svd.sigma.size() && final_svd.sigma(r) > 0.0)
                  ? sr / final_svd.sigma(r)
                  : std::numeric_limits<double>::infinity();
  trace.rank_gap_warning = trace.gap < kRankGapWarning;
  trace.final_point = std::move(x);
  return trace;
}

double condition_estimate(const Mapping& f, const Vector& x, std::size_t r) {
  return rank_r_project(f.jacobian_at(x), r).pinv_norm();
}

double quadratic_ratio(const std::vector<double>& shifts, std::size_t count, double floor) {
  std::vector<double> above;
  for (double s : shifts) {
    if (s > floor) above.push_back(s);
    else break;
  }
  if (above.size() > count) above.erase(above.begin(), above.end() - static_cast<std::ptrdiff_t>(count));
  double worst = 0.0;
  for (std::size_t j = 1; j < above.size(); ++j) {
    worst = std::max(worst, above[j] / (above[j - 1] * above[j - 1]));
  }
  return worst;
}

}  // namespace rnewton
