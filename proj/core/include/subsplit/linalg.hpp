#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "subsplit/matrix.hpp"

namespace subsplit {

using ComplexValue = std::complex<double>;

struct EigResult {
    std::vector<ComplexValue> eigenvalues;
    /// Orthonormal eigenvectors as columns; present only for the symmetric path.
    std::optional<Matrix> eigenvectors;
};

/// Cyclic Jacobi eigensolver. The input is symmetrized first, so small
/// roundoff asymmetry (projector products) is harmless. Eigenvalues are real
/// and sorted descending; column j of the eigenvector matrix pairs with
/// eigenvalue j.
EigResult jacobi_symmetric_eig(const Matrix& a);

/// Singular value decomposition A = U·diag(s)·Vᵀ (thin), via one-sided
/// Jacobi rotations. Singular values are sorted descending.
struct Svd {
    Matrix u;  // rows × k
    Vector singular_values;
    Matrix v;  // cols × k
};
Svd jacobi_svd(const Matrix& a);

/// Moore–Penrose pseudoinverse. Singular values at or below
/// max(max(rows, cols)·σ_max·1e-13, absolute_floor) are treated as zero.
Matrix pseudoinverse(const Matrix& a, double absolute_floor = 0.0);

/// All eigenvalues with multiplicity: Householder reduction to Hessenberg
/// form, then Francis double-shift QR. Throws kNoConvergence after
/// max_iterations total QR steps (default 100·n).
std::vector<ComplexValue> general_eigenvalues(const Matrix& a,
                                              std::optional<int> max_iterations = std::nullopt);

double spectral_radius(const Matrix& a);

/// Largest singular value, sqrt of the top eigenvalue of AᵀA.
double operator_norm(const Matrix& a);

}  // namespace subsplit
