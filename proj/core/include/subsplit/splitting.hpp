#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "subsplit/matrix.hpp"
#include "subsplit/subspace.hpp"

namespace subsplit {

enum class SchemeKind { kRyu, kMalitskyTam, kCampoy, kPocs };

std::string_view to_string(SchemeKind kind);
/// Accepts "ryu", "mt", "campoy", "pocs".
SchemeKind parse_scheme_kind(std::string_view name);

/// A splitting operator for normal cones of linear subspaces, in matrix form.
///
/// The state lives in (ℝ^d)^{n−1} for Ryu (n = 3), Malitsky–Tam and Campoy,
/// and in ℝ^d for POCS. `shadow` maps a state to the average of the outputs
/// of the inner map M (the shadow point); `reference` maps a start state to
/// the point whose projection onto Z the shadow sequence converges to.
struct SplittingScheme {
    SchemeKind kind;
    std::size_t ambient_dim;
    std::size_t n_subspaces;
    std::size_t state_dim;
    Matrix T;
    Matrix M;
    Matrix P_fix;
    Matrix P_Z;
    Matrix shadow;
    Matrix reference;
};

/// Resolvent (Id + A)^{-1} supplied as a callable. The callable must be
/// firmly nonexpansive; debug builds spot-check nonexpansiveness.
struct ResolventOracle {
    std::function<Vector(std::span<const double>)> fn;
    std::size_t ambient_dim;

    Vector operator()(std::span<const double> x) const;
};

ResolventOracle projector_resolvent(const Subspace& s);
ResolventOracle affine_resolvent(const AffineSubspace& s);

/// Samples `pairs` random pairs and checks ‖Jx − Jy‖ ≤ ‖x − y‖(1 + 1e-12).
bool spot_check_nonexpansive(const ResolventOracle& j, int pairs, std::uint64_t seed);

SplittingScheme build_ryu(const Subspace& u, const Subspace& v, const Subspace& w);

/// The last subspace closes the cascade (x_n = P_n(x_1 + x_{n−1} − z_{n−1})).
SplittingScheme build_mt(std::span<const Subspace> subspaces);

/// The last subspace is U_n, the one averaged over the diagonal.
SplittingScheme build_campoy(std::span<const Subspace> subspaces);

/// Exactly three subspaces: T = (4/3)·P_W P_V P_U − (1/3)·Id.
SplittingScheme build_pocs(std::span<const Subspace> subspaces);

SplittingScheme build_scheme(SchemeKind kind, std::span<const Subspace> subspaces);

/// One unrelaxed application of T using only resolvent calls.
///
/// Resolvent order follows the builders: (A, B, C) for Ryu, (A_1, …, A_n)
/// for MT, and (U, V, W) for POCS. For Campoy the last oracle must be the
/// resolvent of (1/(n−1))·A_n; for normal cones that is the projector itself.
Vector apply_generic_step(SchemeKind kind, std::span<const ResolventOracle> resolvents,
                          std::span<const double> state);

/// The shadow point (average of the outputs of M) via resolvent calls.
Vector apply_generic_shadow(SchemeKind kind, std::span<const ResolventOracle> resolvents,
                            std::span<const double> state);

/// Translation data reducing an affine instance to its parallel linear one:
/// T(x) = L x + b, shadow(x) = shadow_L x + shadow_offset, and
/// T^k x = a + L^k (x − a) with a = (Id − L)† b.
struct AffineConjugation {
    Vector a;
    Vector b;
    Vector shadow_offset;
};

std::pair<SplittingScheme, AffineConjugation> build_affine(
    SchemeKind kind, std::span<const AffineSubspace> affine_subspaces);

/// Intersection of affine subspaces as (anchor, parallel space). Throws
/// kInconsistentAffine when the intersection is empty.
AffineSubspace intersect_affine(std::span<const AffineSubspace> affine_subspaces);

/// Writes T, M, P_fix, P_Z, shadow as "name\n<matrix text>" sections.
void write_scheme(std::ostream& out, const SplittingScheme& scheme);
/// Writes one file per matrix (T.txt, M.txt, …) into an existing directory.
void write_scheme_dir(const std::string& dir, const SplittingScheme& scheme);

}  // namespace subsplit
