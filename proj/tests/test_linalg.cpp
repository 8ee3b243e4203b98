#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include "oracles.hpp"
#include "subsplit/error.hpp"
#include "subsplit/linalg.hpp"

namespace {

using subsplit::ComplexValue;
using subsplit::Matrix;
using subsplit::Vector;

double penrose_scale(const Matrix& a) { return 1e-9 * (1.0 + a.frobenius_norm()); }

void expect_penrose(const Matrix& a) {
    const Matrix p = subsplit::pseudoinverse(a);
    const double tol = penrose_scale(a);
    EXPECT_LE(subsplit::distance(a * p * a, a), tol);
    EXPECT_LE(subsplit::distance(p * a * p, p), tol);
    const Matrix ap = a * p;
    const Matrix pa = p * a;
    EXPECT_LE(subsplit::distance(ap.transpose(), ap), tol);
    EXPECT_LE(subsplit::distance(pa.transpose(), pa), tol);
}

std::vector<ComplexValue> sorted(std::vector<ComplexValue> v) {
    std::sort(v.begin(), v.end(), [](ComplexValue a, ComplexValue b) {
        if (std::abs(a.real() - b.real()) > 1e-9) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return v;
}

TEST(JacobiEig, DiagonalInput) {
    const auto r = subsplit::jacobi_symmetric_eig(Matrix{{3, 0}, {0, 1}});
    ASSERT_EQ(r.eigenvalues.size(), 2u);
    EXPECT_DOUBLE_EQ(r.eigenvalues[0].real(), 3.0);
    EXPECT_DOUBLE_EQ(r.eigenvalues[1].real(), 1.0);
    EXPECT_LE(subsplit::distance(*r.eigenvectors, Matrix::identity(2)), 1e-15);
}

TEST(JacobiEig, SwapMatrix) {
    const auto r = subsplit::jacobi_symmetric_eig(Matrix{{0, 1}, {1, 0}});
    EXPECT_NEAR(r.eigenvalues[0].real(), 1.0, 1e-15);
    EXPECT_NEAR(r.eigenvalues[1].real(), -1.0, 1e-15);
}

TEST(JacobiEig, RandomSymmetricReconstructs) {
    std::mt19937_64 gen(21);
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix g = oracle::gaussian(gen, 6, 6);
        const Matrix a = g + g.transpose();
        const auto r = subsplit::jacobi_symmetric_eig(a);
        const Matrix& q = *r.eigenvectors;
        Vector diag;
        for (auto ev : r.eigenvalues) {
            EXPECT_EQ(ev.imag(), 0.0);
            diag.push_back(ev.real());
        }
        EXPECT_TRUE(std::is_sorted(diag.rbegin(), diag.rend()));
        const Matrix recon = q * Matrix::diagonal(diag) * q.transpose();
        EXPECT_LE(subsplit::distance(recon, a), 1e-10 * (1.0 + a.frobenius_norm()));
        EXPECT_LE(subsplit::distance(q.transpose() * q, Matrix::identity(6)), 1e-12);
    }
}

TEST(JacobiEig, NonSquareIsRejected) {
    EXPECT_THROW(subsplit::jacobi_symmetric_eig(Matrix(2, 3)), subsplit::Error);
}

TEST(Pseudoinverse, ProjectorIsItsOwnPseudoinverse) {
    const Matrix p{{1, 0}, {0, 0}};
    EXPECT_LE(subsplit::distance(subsplit::pseudoinverse(p), p), 1e-15);
}

TEST(Pseudoinverse, RankOneFormula) {
    // A† = Aᵀ/σ² with σ² = 4.
    const Matrix a{{0, 2}, {0, 0}};
    EXPECT_LE(subsplit::distance(subsplit::pseudoinverse(a), Matrix{{0, 0}, {0.5, 0}}), 1e-15);
}

TEST(Pseudoinverse, PenroseConditionsOnRandomTall) {
    std::mt19937_64 gen(22);
    for (int trial = 0; trial < 20; ++trial) expect_penrose(oracle::gaussian(gen, 6, 5));
}

TEST(Pseudoinverse, PenroseConditionsOnWideAndRankDeficient) {
    std::mt19937_64 gen(23);
    for (int trial = 0; trial < 10; ++trial) {
        expect_penrose(oracle::gaussian(gen, 3, 7));
        // Rank 2 in 6×6: exact zero singular values must be cut.
        const Matrix low = oracle::gaussian(gen, 6, 2) * oracle::gaussian(gen, 2, 6);
        expect_penrose(low);
        // Sum of two projectors, the Anderson–Duffin input.
        const Matrix pu = oracle::gs_projector(oracle::gaussian(gen, 6, 5));
        const Matrix pv = oracle::gs_projector(oracle::gaussian(gen, 6, 5));
        expect_penrose(pu + pv);
    }
}

TEST(Pseudoinverse, ZeroMatrix) {
    EXPECT_EQ(subsplit::pseudoinverse(Matrix(3, 2)), Matrix(2, 3));
}

TEST(GeneralEigenvalues, PlaneRotation) {
    const auto ev = sorted(subsplit::general_eigenvalues(Matrix{{0, -1}, {1, 0}}));
    ASSERT_EQ(ev.size(), 2u);
    EXPECT_NEAR(std::abs(ev[0] - ComplexValue(0, -1)), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(ev[1] - ComplexValue(0, 1)), 0.0, 1e-14);
}

TEST(GeneralEigenvalues, UpperTriangularDiagonal) {
    const Matrix a{{2, 5, -1}, {0, -1, 3}, {0, 0, 0.5}};
    const auto ev = sorted(subsplit::general_eigenvalues(a));
    EXPECT_NEAR(ev[0].real(), -1.0, 1e-13);
    EXPECT_NEAR(ev[1].real(), 0.5, 1e-13);
    EXPECT_NEAR(ev[2].real(), 2.0, 1e-13);
    for (auto e : ev) EXPECT_EQ(e.imag(), 0.0);
}

TEST(GeneralEigenvalues, CompanionOfGoldenQuadratic) {
    // x² − x − 1: roots (1 ± √5)/2.
    const Matrix c{{1, 1}, {1, 0}};
    const auto ev = sorted(subsplit::general_eigenvalues(c));
    EXPECT_NEAR(ev[0].real(), (1.0 - std::sqrt(5.0)) / 2.0, 1e-14);
    EXPECT_NEAR(ev[1].real(), (1.0 + std::sqrt(5.0)) / 2.0, 1e-14);
}

TEST(GeneralEigenvalues, CharacteristicResidualAndConjugateClosure) {
    std::mt19937_64 gen(24);
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix a = oracle::gaussian(gen, 8, 8);
        const auto ev = subsplit::general_eigenvalues(a);
        ASSERT_EQ(ev.size(), 8u);
        for (auto e : ev) {
            const bool has_conjugate = std::any_of(ev.begin(), ev.end(), [&](ComplexValue f) {
                return std::abs(f - std::conj(e)) <= 1e-8 * (1.0 + std::abs(e));
            });
            EXPECT_TRUE(has_conjugate);
        }
        // The eigenvalues sum to the trace; each real one makes A − μI singular.
        ComplexValue sum = 0.0;
        for (auto e : ev) sum += e;
        EXPECT_NEAR(sum.real(), a.trace(), 1e-9);
        EXPECT_NEAR(sum.imag(), 0.0, 1e-9);
        for (auto e : ev) {
            if (e.imag() != 0.0) continue;
            const Matrix shifted = a - e.real() * Matrix::identity(8);
            const auto svd = subsplit::jacobi_svd(shifted);
            EXPECT_LE(svd.singular_values.back(), 1e-9 * (1.0 + a.frobenius_norm()));
        }
    }
}

TEST(GeneralEigenvalues, AgreesWithJacobiOnSymmetric) {
    std::mt19937_64 gen(25);
    for (int trial = 0; trial < 10; ++trial) {
        const Matrix g = oracle::gaussian(gen, 7, 7);
        const Matrix a = g + g.transpose();
        const auto general = sorted(subsplit::general_eigenvalues(a));
        const auto sym = sorted(subsplit::jacobi_symmetric_eig(a).eigenvalues);
        for (std::size_t i = 0; i < general.size(); ++i) {
            EXPECT_NEAR(general[i].real(), sym[i].real(), 1e-8);
            EXPECT_NEAR(general[i].imag(), 0.0, 1e-8);
        }
    }
}

TEST(GeneralEigenvalues, ExhaustedBudgetIsStructuredError) {
    std::mt19937_64 gen(26);
    const Matrix a = oracle::gaussian(gen, 6, 6);
    try {
        subsplit::general_eigenvalues(a, 1);
        FAIL() << "expected no-convergence";
    } catch (const subsplit::Error& e) {
        EXPECT_EQ(e.code(), subsplit::ErrorCode::kNoConvergence);
    }
}

TEST(SpectralRadius, Examples) {
    EXPECT_EQ(subsplit::spectral_radius(Matrix(3, 3)), 0.0);
    EXPECT_NEAR(subsplit::spectral_radius(Matrix{{0, -1}, {1, 0}}), 1.0, 1e-14);
}

TEST(OperatorNorm, Examples) {
    EXPECT_NEAR(subsplit::operator_norm(Matrix{{3, 0}, {0, -2}}), 3.0, 1e-14);
    std::mt19937_64 gen(27);
    const Matrix p = oracle::gs_projector(oracle::gaussian(gen, 5, 2));
    EXPECT_NEAR(subsplit::operator_norm(p), 1.0, 1e-12);
}

TEST(OperatorNorm, BoundsRadiusAndIsOrthogonallyInvariant) {
    std::mt19937_64 gen(28);
    for (int trial = 0; trial < 30; ++trial) {
        const Matrix a = oracle::gaussian(gen, 6, 6);
        const double norm = subsplit::operator_norm(a);
        EXPECT_LE(subsplit::spectral_radius(a), norm + 1e-10);
        const Matrix q = oracle::random_orthogonal(gen, 6);
        EXPECT_NEAR(subsplit::operator_norm(q.transpose() * a * q), norm, 1e-10);
    }
}

TEST(OperatorNorm, RectangularMatchesSvd) {
    std::mt19937_64 gen(29);
    const Matrix a = oracle::gaussian(gen, 4, 9);
    EXPECT_NEAR(subsplit::operator_norm(a), subsplit::jacobi_svd(a).singular_values.front(), 1e-12);
}

}  // namespace
