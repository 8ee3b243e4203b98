#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "subsplit/matrix.hpp"

namespace subsplit {

/// A linear subspace of ℝ^d, carried by its orthogonal projector.
///
/// The projector is symmetric and idempotent to within 1e-9 and its trace is
/// within 1e-6 of an integer, which is the dimension. A basis is kept only
/// when the subspace was built from one.
class Subspace {
public:
    /// Validates p as an orthogonal projector (symmetrizes, polishes once if
    /// needed) and throws kDegenerate if it is not one.
    static Subspace from_projector(Matrix p, std::optional<Matrix> basis = std::nullopt);

    std::size_t ambient_dim() const noexcept { return projector_.rows(); }
    std::size_t dim() const noexcept { return dim_; }
    const Matrix& projector() const noexcept { return projector_; }
    const std::optional<Matrix>& basis() const noexcept { return basis_; }

    Vector project(std::span<const double> x) const { return matvec(projector_, x); }

private:
    Subspace(Matrix p, std::size_t dim, std::optional<Matrix> basis)
        : projector_(std::move(p)), dim_(dim), basis_(std::move(basis)) {}

    Matrix projector_;
    std::size_t dim_;
    std::optional<Matrix> basis_;
};

/// V = anchor + parallel.
struct AffineSubspace {
    Subspace parallel;
    Vector anchor;

    AffineSubspace(Subspace parallel_space, Vector anchor_point);

    /// x ↦ P_U x + P_{U^⊥} anchor.
    Vector project(std::span<const double> x) const;
};

/// P = B·B†; the dimension is the numerical rank of B. A zero basis gives {0}.
Subspace from_basis(const Matrix& basis);

/// Id − P.
Subspace complement(const Subspace& s);

/// Anderson–Duffin: P_{U∩V} = 2·P_U·(P_U + P_V)†·P_V.
Subspace intersect2(const Subspace& u, const Subspace& v);

/// Left fold of intersect2; throws on an empty list.
Subspace intersect_many(std::span<const Subspace> subspaces);

/// P_{U+V} = Id − P_{U^⊥ ∩ V^⊥}.
Subspace sum_projector(const Subspace& u, const Subspace& v);

/// Diagonal of (ℝ^d)^copies: every block of the projector is Id_d / copies.
Subspace diagonal_projector(std::size_t ambient_dim, std::size_t copies);

/// U_1 × … × U_m, projector diag(P_1, …, P_m).
Subspace product_projector(std::span<const Subspace> subspaces);

/// Column space of a: P = A·A†. Singular values at or below absolute_floor
/// count as zero, which keeps rounding noise in projector-built matrices
/// from reading as rank.
Subspace range_projector(const Matrix& a, double absolute_floor = 0.0);

/// Singular-value floor for matrices assembled from projectors (unit scale).
inline constexpr double kProjectorRankFloor = 1e-10;

/// Whole space ℝ^d and the zero subspace.
Subspace full_space(std::size_t d);
Subspace zero_space(std::size_t d);

/// ‖P² − P‖_F.
double idempotency_residual(const Matrix& p);

}  // namespace subsplit
