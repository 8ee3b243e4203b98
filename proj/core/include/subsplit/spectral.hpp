#pragma once

#include <utility>

#include "subsplit/matrix.hpp"
#include "subsplit/splitting.hpp"

namespace subsplit {

/// Bounds on the linear rate of T_λ^k → P_fix: the spectral radius of
/// T_λ − P_fix is a lower bound and its operator norm an upper bound.
struct RateBounds {
    double lambda = 0.0;
    double spectral_radius = 0.0;
    double operator_norm = 0.0;
    /// |ρ − ‖·‖| ≤ 1e-8.
    bool is_radial = false;
};

inline constexpr double kRadialTolerance = 1e-8;

/// relax(T, λ) − P_fix.
Matrix rate_matrix(const SplittingScheme& scheme, double lambda);

RateBounds rate_bounds(const SplittingScheme& scheme, double lambda);

/// Three lines through the origin in ℝ² at angles 0, θ, 2θ: the two
/// eigenvalues of the relaxed POCS operator,
/// 1 − 4λ/3 and 1 + (4λ/3)(2 sin⁴θ − 3 sin²θ). Requires 0 < θ < π/2.
std::pair<double, double> pocs_three_lines_eigenvalues(double theta, double lambda);

/// Operator norm of the same 2×2 matrix, from its closed-form singular values.
double pocs_three_lines_norm(double theta, double lambda);

/// Projector onto ℝ·(cos φ, sin φ).
Matrix line_projector(double phi);

}  // namespace subsplit
