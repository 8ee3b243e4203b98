#include "subsplit/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "subsplit/error.hpp"
#include "subsplit/iteration.hpp"
#include "subsplit/linalg.hpp"

namespace subsplit {

namespace {

void require_open_angle(double theta) {
    if (!(theta > 0.0 && theta < std::numbers::pi / 2.0)) {
        throw Error(ErrorCode::kInvalidArgument, "theta must lie in (0, pi/2)");
    }
}

}  // namespace

Matrix rate_matrix(const SplittingScheme& scheme, double lambda) {
    return relax(scheme.T, lambda) - scheme.P_fix;
}

RateBounds rate_bounds(const SplittingScheme& scheme, double lambda) {
    const Matrix r = rate_matrix(scheme, lambda);
    RateBounds b;
    b.lambda = lambda;
    b.spectral_radius = spectral_radius(r);
    b.operator_norm = operator_norm(r);
    b.is_radial = std::abs(b.spectral_radius - b.operator_norm) <= kRadialTolerance;
    return b;
}

std::pair<double, double> pocs_three_lines_eigenvalues(double theta, double lambda) {
    require_open_angle(theta);
    const double s2 = std::sin(theta) * std::sin(theta);
    const double c = 4.0 * lambda / 3.0;
    return {1.0 - c, 1.0 + c * (2.0 * s2 * s2 - 3.0 * s2)};
}

double pocs_three_lines_norm(double theta, double lambda) {
    require_open_angle(theta);
    // T_λ = α Id + β cos²θ [[cos 2θ, 0], [sin 2θ, 0]] with α = 1 − 4λ/3, β = 4λ/3,
    // i.e. [[a, 0], [c, α]]; σ²_max = (F + sqrt(F² − 4 det²)) / 2, F = ‖·‖²_F.
    const double alpha = 1.0 - 4.0 * lambda / 3.0;
    const double beta = (4.0 * lambda / 3.0) * std::cos(theta) * std::cos(theta);
    const double a = alpha + beta * std::cos(2.0 * theta);
    const double c = beta * std::sin(2.0 * theta);
    const double f = a * a + c * c + alpha * alpha;
    const double det = a * alpha;
    const double disc = std::max(0.0, f * f - 4.0 * det * det);
    return std::sqrt(0.5 * (f + std::sqrt(disc)));
}

Matrix line_projector(double phi) {
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    return Matrix{{c * c, s * c}, {s * c, s * s}};
}

}  // namespace subsplit
