#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "subsplit/matrix.hpp"
#include "subsplit/splitting.hpp"

namespace subsplit {

enum class StopTarget { kGoverning, kShadow };

struct StopRule {
    double epsilon = 1e-6;
    std::size_t max_iters = 10000;
    StopTarget target = StopTarget::kGoverning;
};

/// Errors are Euclidean distances to the a-priori limits: the governing
/// limit is P_fix·z0 and the shadow limit is P_Z applied to the scheme's
/// reference point of z0. Entry k of each list is the error after k steps
/// (entry 0 is the start), so converged_at is the first k whose tracked
/// error is ≤ ε.
struct IterationTrace {
    double lambda = 0.0;
    std::size_t iterations_run = 0;
    std::vector<double> governing_errors;
    std::vector<double> shadow_errors;
    std::optional<std::size_t> converged_at;
    Vector limit_governing;
    Vector limit_shadow;
    /// λ ≥ 1: convergence is not guaranteed, the run is still performed.
    bool unguaranteed = false;
};

/// (1 − λ)·Id + λ·T.
Matrix relax(const Matrix& t, double lambda);

IterationTrace iterate(const SplittingScheme& scheme, std::span<const double> z0, double lambda,
                       const StopRule& stop);

/// Affine iteration by conjugation: z_k = a + L_λ^k (z0 − a).
IterationTrace iterate_affine(const SplittingScheme& scheme, const AffineConjugation& conj,
                              std::span<const double> z0, double lambda, const StopRule& stop);

/// Geometric mean of consecutive governing-error ratios over the last
/// `window` steps before the errors fall to the floor max(1e-14, 1e-10·e_0).
/// The relative part keeps the window off the rounding plateau, which sits
/// near 1e-12·‖z0‖ for slowly contracting schemes.
double estimate_rate(const IterationTrace& trace, std::size_t window = 50);

/// Iterations needed for the governing and the shadow sequence to reach ε.
/// Runs that hit max_iters or blow up are censored at max_iters.
struct ConvergenceCounts {
    std::size_t governing = 0;
    std::size_t shadow = 0;
    bool governing_censored = false;
    bool shadow_censored = false;
};

ConvergenceCounts count_iterations(const SplittingScheme& scheme, const Matrix& relaxed,
                                   std::span<const double> z0, double epsilon,
                                   std::size_t max_iters);

/// Distances of the governing and shadow iterates to their limits for
/// k = 0..iterations (inclusive).
struct DistanceSeries {
    std::vector<double> governing;
    std::vector<double> shadow;
};

DistanceSeries distance_series(const SplittingScheme& scheme, const Matrix& relaxed,
                               std::span<const double> z0, std::size_t iterations);

/// CSV with header `k,governing_error,shadow_error`.
void write_trace_csv(std::ostream& out, const IterationTrace& trace);

}  // namespace subsplit
