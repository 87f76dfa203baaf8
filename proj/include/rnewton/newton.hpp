#pragma once

// Rank-r Newton iteration
//
//   x_{j+1} = x_j - J(x_j)_{rank-r}^+ f(x_j)
//
// where J_{rank-r}^+ is the Moore-Penrose inverse of the truncated SVD of
// the Jacobian. With r equal to the full column rank this is Gauss-Newton
// (and plain Newton for square nonsingular systems). On perturbed data the
// iteration settles at a stationary point where J^+ f = 0 although f != 0.

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "rnewton/linalg.hpp"
#include "rnewton/mapping.hpp"

namespace rnewton {

struct NewtonOptions {
  std::size_t rank = 1;
  std::size_t max_steps = 50;
  /// Defaults to 1e-14 * max(1, ||x0||).
  std::optional<double> shift_tol;
  /// Defaults to 1e-12 * (1 + ||f(x0)||).
  std::optional<double> residual_tol;
  /// Streams trace lines while iterating when set.
  std::ostream* trace = nullptr;
};

enum class NewtonStatus { converged_zero, converged_stationary, max_steps, diverged };

std::string to_string(NewtonStatus s);

struct IterationTrace {
  /// residuals[j] = ||f(x_j)||, from step 0.
  std::vector<double> residuals;
  /// shifts[j] = ||x_{j+1} - x_j||, so shifts[0] belongs to step 1.
  std::vector<double> shifts;
  NewtonStatus status = NewtonStatus::max_steps;
  /// ||J(x_final)_{rank-r}^+||_2 = 1 / sigma_r.
  double condition = 0.0;
  /// sigma_1 / sigma_r at the final iterate.
  double relative_condition = 0.0;
  /// sigma_r / sigma_{r+1} at the final iterate.
  double gap = 0.0;
  /// Set when gap < 10 at the final iterate.
  bool rank_gap_warning = false;
  Vector final_point;
  std::size_t rank = 0;

  std::size_t steps() const noexcept { return shifts.size(); }
  bool converged() const noexcept {
    return status == NewtonStatus::converged_zero || status == NewtonStatus::converged_stationary;
  }
  double final_residual() const { return residuals.back(); }
};

/// "Step %4d:  residual = %9.2e" for step 0, with "    shift = %9.2e"
/// appended from step 1 on.
std::string format_trace_line(std::size_t step, double residual, std::optional<double> shift);
std::string format_trace(const IterationTrace& trace);

/// Runs the iteration from x0. Throws RankDeficiencyError when sigma_r of
/// the Jacobian vanishes at some step and DivergenceError on non-finite
/// values; returns with status max_steps when the budget runs out.
IterationTrace rank_r_newton(const Mapping& f, const Vector& x0, const NewtonOptions& opts);

/// 1 / sigma_r(J(x)), the norm of the rank-r pseudoinverse of the Jacobian.
double condition_estimate(const Mapping& f, const Vector& x, std::size_t r);

/// Largest observed ratio shift_{j+1} / shift_j^2 over the last `count`
/// steps whose shifts lie above `floor`; used as a quadratic-convergence
/// diagnostic. Returns 0 when fewer than two such steps exist.
double quadratic_ratio(const std::vector<double>& shifts, std::size_t count, double floor);

}  // namespace rnewton
