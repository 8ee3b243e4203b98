#pragma once

// Reference constructions used only by the tests. They deliberately avoid
// the library's pseudoinverse and Anderson–Duffin routes.

#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

#include "subsplit/linalg.hpp"
#include "subsplit/matrix.hpp"
#include "subsplit/subspace.hpp"

namespace oracle {

using subsplit::Matrix;
using subsplit::Vector;

inline Matrix naive_matmul(const Matrix& a, const Matrix& b) {
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < b.cols(); ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
            c(i, j) = s;
        }
    }
    return c;
}

inline Matrix gaussian(std::mt19937_64& gen, std::size_t rows, std::size_t cols) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = normal(gen);
    }
    return m;
}

inline Vector gaussian_vector(std::mt19937_64& gen, std::size_t n) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Vector v(n);
    for (double& x : v) x = normal(gen);
    return v;
}

/// Orthonormal basis of the column space by modified Gram–Schmidt with
/// reorthogonalization; columns whose residual falls below tol·‖col‖ are dropped.
inline std::vector<Vector> orthonormal_columns(const Matrix& b, double tol = 1e-10) {
    std::vector<Vector> q;
    for (std::size_t j = 0; j < b.cols(); ++j) {
        Vector v = b.col(j);
        const double original = subsplit::norm(v);
        if (original == 0.0) continue;
        for (int pass = 0; pass < 2; ++pass) {
            for (const Vector& e : q) {
                const double c = subsplit::dot(e, v);
                for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * e[i];
            }
        }
        const double r = subsplit::norm(v);
        if (r <= tol * original) continue;
        for (double& x : v) x /= r;
        q.push_back(std::move(v));
    }
    return q;
}

inline Matrix projector_from_orthonormal(const std::vector<Vector>& q, std::size_t d) {
    Matrix p(d, d);
    for (const Vector& e : q) {
        for (std::size_t r = 0; r < d; ++r) {
            for (std::size_t c = 0; c < d; ++c) p(r, c) += e[r] * e[c];
        }
    }
    return p;
}

/// Q·Qᵀ from Gram–Schmidt on the columns of b.
inline Matrix gs_projector(const Matrix& b) {
    return projector_from_orthonormal(orthonormal_columns(b), b.rows());
}

/// Horizontal concatenation [a, b].
inline Matrix hcat(const Matrix& a, const Matrix& b) {
    Matrix c(a.rows(), a.cols() + b.cols());
    c.set_block(0, 0, a);
    c.set_block(0, a.cols(), b);
    return c;
}

/// Intersection of column spaces: x = B_1·c with (Id − P_k)·B_1·c = 0 for
/// k ≥ 2, where P_k comes from Gram–Schmidt. The kernel in c is read off the
/// symmetric eigendecomposition of the stacked normal matrix.
inline Matrix basis_intersection(const std::vector<Matrix>& bases) {
    const Matrix& b1 = bases.front();
    const std::size_t d = b1.rows();
    const std::vector<Vector> q1 = orthonormal_columns(b1);
    Matrix q1m(d, q1.size());
    for (std::size_t j = 0; j < q1.size(); ++j) {
        for (std::size_t i = 0; i < d; ++i) q1m(i, j) = q1[j][i];
    }
    Matrix normal(q1.size(), q1.size());
    for (std::size_t k = 1; k < bases.size(); ++k) {
        const Matrix comp = Matrix::identity(d) - gs_projector(bases[k]);
        const Matrix a = naive_matmul(comp, q1m);
        normal += naive_matmul(a.transpose(), a);
    }
    const subsplit::EigResult eig = subsplit::jacobi_symmetric_eig(normal);
    std::vector<Vector> kernel;
    for (std::size_t j = 0; j < q1.size(); ++j) {
        if (eig.eigenvalues[j].real() > 1e-10) continue;
        Vector x(d, 0.0);
        for (std::size_t m = 0; m < q1.size(); ++m) {
            const double c = (*eig.eigenvectors)(m, j);
            for (std::size_t i = 0; i < d; ++i) x[i] += c * q1[m][i];
        }
        kernel.push_back(std::move(x));
    }
    Matrix kb(d, std::max<std::size_t>(kernel.size(), 1));
    for (std::size_t j = 0; j < kernel.size(); ++j) {
        for (std::size_t i = 0; i < d; ++i) kb(i, j) = kernel[j][i];
    }
    return kernel.empty() ? Matrix(d, d) : gs_projector(kb);
}

/// Random orthogonal matrix (Gram–Schmidt on a Gaussian square matrix).
inline Matrix random_orthogonal(std::mt19937_64& gen, std::size_t n) {
    const std::vector<Vector> q = orthonormal_columns(gaussian(gen, n, n));
    Matrix m(n, n);
    for (std::size_t j = 0; j < q.size(); ++j) {
        for (std::size_t i = 0; i < n; ++i) m(i, j) = q[j][i];
    }
    return m;
}

/// Three random subspaces of ℝ^d with their Gaussian bases.
struct RandomTriple {
    std::vector<Matrix> bases;
    std::vector<subsplit::Subspace> subspaces;
};

inline RandomTriple random_subspaces(std::mt19937_64& gen, std::size_t d,
                                     const std::vector<std::size_t>& dims) {
    RandomTriple t;
    for (std::size_t k : dims) {
        t.bases.push_back(gaussian(gen, d, k));
        t.subspaces.push_back(subsplit::from_basis(t.bases.back()));
    }
    return t;
}

inline double max_abs_diff(const Vector& a, const Vector& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace oracle
