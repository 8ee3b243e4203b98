#include "subsplit/iteration.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "subsplit/error.hpp"

namespace subsplit {

namespace {

constexpr double kErrorFloor = 1e-14;
constexpr double kRelativeErrorFloor = 1e-10;
// An error this many times larger than the starting error means the run
// diverged (only possible for λ outside (0, 1)).
constexpr double kDivergenceFactor = 1e12;

void require_state(const SplittingScheme& scheme, std::span<const double> z0) {
    if (z0.size() != scheme.state_dim) {
        throw Error(ErrorCode::kDimensionMismatch,
                    "start has length " + std::to_string(z0.size()) + ", scheme state is " +
                        std::to_string(scheme.state_dim));
    }
    if (!all_finite(z0)) throw Error(ErrorCode::kNonFinite, "start vector is not finite");
}

void require_lambda(double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw Error(ErrorCode::kInvalidArgument, "relaxation parameter must be positive");
    }
}

void require_stop(const StopRule& stop) {
    if (!(stop.epsilon > 0.0) || stop.max_iters < 1) {
        throw Error(ErrorCode::kInvalidArgument, "stop rule needs epsilon > 0 and max_iters >= 1");
    }
}

// Shared driver: state_k = offset + L_λ^k (z0 − offset) tracked through
// the linear part; shadow points get shadow_offset added.
IterationTrace run(const SplittingScheme& scheme, const Vector& offset, const Vector& shadow_offset,
                   std::span<const double> z0, double lambda, const StopRule& stop) {
    require_state(scheme, z0);
    require_lambda(lambda);
    require_stop(stop);
    const Matrix relaxed = relax(scheme.T, lambda);

    IterationTrace trace;
    trace.lambda = lambda;
    trace.unguaranteed = lambda >= 1.0;

    Vector lin(z0.begin(), z0.end());
    for (std::size_t i = 0; i < lin.size(); ++i) lin[i] -= offset[i];
    const Vector lin_limit = matvec(scheme.P_fix, lin);
    trace.limit_governing = lin_limit + offset;
    const Vector ref_full(z0.begin(), z0.end());
    trace.limit_shadow = matvec(scheme.P_Z, matvec(scheme.reference, ref_full));
    const bool affine = norm(offset) > 0.0 || norm(shadow_offset) > 0.0;
    if (affine) {
        trace.limit_shadow = matvec(scheme.shadow, trace.limit_governing) + shadow_offset;
    }

    Vector next(lin.size());
    Vector full(lin.size());
    Vector shadow_point(scheme.ambient_dim);
    for (std::size_t k = 0;; ++k) {
        for (std::size_t i = 0; i < lin.size(); ++i) full[i] = lin[i] + offset[i];
        apply_into(scheme.shadow, full, shadow_point);
        for (std::size_t i = 0; i < shadow_point.size(); ++i) shadow_point[i] += shadow_offset[i];
        const double gov = distance(lin, lin_limit);
        const double sha = distance(shadow_point, trace.limit_shadow);
        if (!std::isfinite(gov) || !std::isfinite(sha)) {
            throw Error(ErrorCode::kNonFinite,
                        "iterate became non-finite at iteration " + std::to_string(k));
        }
        trace.governing_errors.push_back(gov);
        trace.shadow_errors.push_back(sha);
        const double tracked = stop.target == StopTarget::kGoverning ? gov : sha;
        if (tracked <= stop.epsilon) {
            trace.converged_at = k;
            break;
        }
        if (k == stop.max_iters) break;
        apply_into(relaxed, lin, next);
        lin.swap(next);
        trace.iterations_run = k + 1;
    }
    return trace;
}

}  // namespace

Matrix relax(const Matrix& t, double lambda) {
    if (!t.is_square()) throw Error(ErrorCode::kDimensionMismatch, "relax: T not square");
    return (1.0 - lambda) * Matrix::identity(t.rows()) + lambda * t;
}

IterationTrace iterate(const SplittingScheme& scheme, std::span<const double> z0, double lambda,
                       const StopRule& stop) {
    return run(scheme, Vector(scheme.state_dim, 0.0), Vector(scheme.ambient_dim, 0.0), z0, lambda,
               stop);
}

IterationTrace iterate_affine(const SplittingScheme& scheme, const AffineConjugation& conj,
                              std::span<const double> z0, double lambda, const StopRule& stop) {
    if (conj.a.size() != scheme.state_dim || conj.shadow_offset.size() != scheme.ambient_dim) {
        throw Error(ErrorCode::kDimensionMismatch, "affine conjugation does not fit the scheme");
    }
    IterationTrace trace = run(scheme, conj.a, conj.shadow_offset, z0, lambda, stop);
#ifndef NDEBUG
    // Direct stepping z ← L_λ z + λ b must track a + L_λ^k (z0 − a).
    const Matrix relaxed = relax(scheme.T, lambda);
    Vector z(z0.begin(), z0.end());
    for (std::size_t k = 0; k < trace.governing_errors.size(); ++k) {
        const double direct = distance(z, trace.limit_governing);
        const double scale = 1.0 + norm(z);
        if (std::abs(direct - trace.governing_errors[k]) > 1e-8 * scale) {
            throw Error(ErrorCode::kDegenerate,
                        "affine conjugation drifted from direct stepping at iteration " +
                            std::to_string(k));
        }
        Vector next = matvec(relaxed, z);
        for (std::size_t i = 0; i < next.size(); ++i) next[i] += lambda * conj.b[i];
        z.swap(next);
    }
#endif
    return trace;
}

double estimate_rate(const IterationTrace& trace, std::size_t window) {
    const auto& e = trace.governing_errors;
    if (window == 0) throw Error(ErrorCode::kInvalidArgument, "estimate_rate: window must be >= 1");
    const double floor = e.empty() ? kErrorFloor : std::max(kErrorFloor, kRelativeErrorFloor * e[0]);
    std::size_t usable = 0;
    while (usable < e.size() && e[usable] > floor) ++usable;
    if (usable < window + 1) {
        throw Error(ErrorCode::kInvalidArgument,
                    "estimate_rate: only " + std::to_string(usable) +
                        " usable error entries, need " + std::to_string(window + 1));
    }
    const double last = e[usable - 1];
    const double first = e[usable - 1 - window];
    // Product of consecutive ratios telescopes to last/first.
    return std::pow(last / first, 1.0 / static_cast<double>(window));
}

ConvergenceCounts count_iterations(const SplittingScheme& scheme, const Matrix& relaxed,
                                   std::span<const double> z0, double epsilon,
                                   std::size_t max_iters) {
    require_state(scheme, z0);
    const Vector gov_limit = matvec(scheme.P_fix, z0);
    const Vector sha_limit =
        matvec(scheme.P_Z, matvec(scheme.reference, Vector(z0.begin(), z0.end())));

    ConvergenceCounts counts{max_iters, max_iters, true, true};
    Vector z(z0.begin(), z0.end());
    Vector next(z.size());
    Vector shadow_point(scheme.ambient_dim);
    double blowup = 0.0;
    for (std::size_t k = 0; k <= max_iters; ++k) {
        const double gov = distance(z, gov_limit);
        if (k == 0) blowup = kDivergenceFactor * (1.0 + gov);
        if (!std::isfinite(gov) || gov > blowup) break;
        if (counts.governing_censored && gov <= epsilon) {
            counts.governing = k;
            counts.governing_censored = false;
        }
        if (counts.shadow_censored) {
            apply_into(scheme.shadow, z, shadow_point);
            if (distance(shadow_point, sha_limit) <= epsilon) {
                counts.shadow = k;
                counts.shadow_censored = false;
            }
        }
        if (!counts.governing_censored && !counts.shadow_censored) break;
        if (k == max_iters) break;
        apply_into(relaxed, z, next);
        z.swap(next);
    }
    return counts;
}

DistanceSeries distance_series(const SplittingScheme& scheme, const Matrix& relaxed,
                               std::span<const double> z0, std::size_t iterations) {
    require_state(scheme, z0);
    const Vector gov_limit = matvec(scheme.P_fix, z0);
    const Vector sha_limit =
        matvec(scheme.P_Z, matvec(scheme.reference, Vector(z0.begin(), z0.end())));
    DistanceSeries out;
    out.governing.reserve(iterations + 1);
    out.shadow.reserve(iterations + 1);
    Vector z(z0.begin(), z0.end());
    Vector next(z.size());
    Vector shadow_point(scheme.ambient_dim);
    for (std::size_t k = 0; k <= iterations; ++k) {
        apply_into(scheme.shadow, z, shadow_point);
        out.governing.push_back(distance(z, gov_limit));
        out.shadow.push_back(distance(shadow_point, sha_limit));
        if (k == iterations) break;
        apply_into(relaxed, z, next);
        z.swap(next);
    }
    return out;
}

void write_trace_csv(std::ostream& out, const IterationTrace& trace) {
    out << "k,governing_error,shadow_error\n";
    for (std::size_t k = 0; k < trace.governing_errors.size(); ++k) {
        out << k << ',' << format_double(trace.governing_errors[k]) << ','
            << format_double(trace.shadow_errors[k]) << '\n';
    }
}

}  // namespace subsplit
