#include "subsplit/subspace.hpp"

#include <cmath>
#include <sstream>

#include "subsplit/error.hpp"
#include "subsplit/linalg.hpp"

namespace subsplit {

namespace {

constexpr double kPolishThreshold = 1e-11;
constexpr double kProjectorTolerance = 1e-9;
constexpr double kTraceTolerance = 1e-6;

void require_same_ambient(const Subspace& u, const Subspace& v, const char* op) {
    if (u.ambient_dim() != v.ambient_dim()) {
        std::ostringstream msg;
        msg << op << ": ambient dimensions " << u.ambient_dim() << " and " << v.ambient_dim();
        throw Error(ErrorCode::kDimensionMismatch, msg.str());
    }
}

}  // namespace

double idempotency_residual(const Matrix& p) { return distance(matmul(p, p), p); }

Subspace Subspace::from_projector(Matrix p, std::optional<Matrix> basis) {
    if (!p.is_square()) throw Error(ErrorCode::kDimensionMismatch, "projector must be square");
    if (!p.all_finite()) throw Error(ErrorCode::kNonFinite, "projector has non-finite entries");
    p = symmetrize(p);
    if (idempotency_residual(p) > kPolishThreshold) {
        // P ← 3P² − 2P³ pushes eigenvalues toward {0, 1}.
        const Matrix p2 = matmul(p, p);
        p = symmetrize(3.0 * p2 - 2.0 * matmul(p2, p));
    }
    const double residual = idempotency_residual(p);
    if (residual > kProjectorTolerance) {
        std::ostringstream msg;
        msg << "not an orthogonal projector: ||P^2 - P||_F = " << residual;
        throw Error(ErrorCode::kDegenerate, msg.str());
    }
    const double tr = p.trace();
    const double rounded = std::round(tr);
    if (std::abs(tr - rounded) > kTraceTolerance || rounded < 0.0) {
        std::ostringstream msg;
        msg << "projector trace " << tr << " is not near an integer";
        throw Error(ErrorCode::kDegenerate, msg.str());
    }
    if (basis && basis->rows() != p.rows()) {
        throw Error(ErrorCode::kDimensionMismatch, "basis rows differ from ambient dimension");
    }
    if (basis && distance(matmul(p, *basis), *basis) > 1e-9 * (1.0 + basis->frobenius_norm())) {
        throw Error(ErrorCode::kDegenerate, "basis columns are not in the projector's range");
    }
    return Subspace(std::move(p), static_cast<std::size_t>(rounded), std::move(basis));
}

AffineSubspace::AffineSubspace(Subspace parallel_space, Vector anchor_point)
    : parallel(std::move(parallel_space)), anchor(std::move(anchor_point)) {
    if (anchor.size() != parallel.ambient_dim()) {
        throw Error(ErrorCode::kDimensionMismatch, "anchor length differs from ambient dimension");
    }
    if (!all_finite(anchor)) throw Error(ErrorCode::kNonFinite, "anchor has non-finite entries");
}

Vector AffineSubspace::project(std::span<const double> x) const {
    // P_U x + (Id − P_U) anchor
    const Vector px = parallel.project(x);
    const Vector pa = parallel.project(anchor);
    Vector out(px.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = px[i] + anchor[i] - pa[i];
    return out;
}

Subspace from_basis(const Matrix& basis) {
    Matrix p = matmul(basis, pseudoinverse(basis));
    return Subspace::from_projector(std::move(p), basis);
}

Subspace complement(const Subspace& s) {
    return Subspace::from_projector(Matrix::identity(s.ambient_dim()) - s.projector());
}

Subspace intersect2(const Subspace& u, const Subspace& v) {
    require_same_ambient(u, v, "intersect2");
    const Matrix sum_pinv = pseudoinverse(u.projector() + v.projector(), kProjectorRankFloor);
    Matrix p = 2.0 * matmul(matmul(u.projector(), sum_pinv), v.projector());
    return Subspace::from_projector(std::move(p));
}

Subspace intersect_many(std::span<const Subspace> subspaces) {
    if (subspaces.empty()) throw Error(ErrorCode::kInvalidArgument, "intersect_many: empty list");
    Subspace acc = subspaces.front();
    for (std::size_t i = 1; i < subspaces.size(); ++i) acc = intersect2(acc, subspaces[i]);
    return acc;
}

Subspace sum_projector(const Subspace& u, const Subspace& v) {
    require_same_ambient(u, v, "sum_projector");
    const Subspace meet = intersect2(complement(u), complement(v));
    return Subspace::from_projector(Matrix::identity(u.ambient_dim()) - meet.projector());
}

Subspace diagonal_projector(std::size_t ambient_dim, std::size_t copies) {
    if (copies < 2) throw Error(ErrorCode::kInvalidArgument, "diagonal_projector: copies < 2");
    if (ambient_dim < 1) throw Error(ErrorCode::kInvalidArgument, "diagonal_projector: d < 1");
    const std::size_t n = ambient_dim * copies;
    Matrix p(n, n);
    const double w = 1.0 / static_cast<double>(copies);
    for (std::size_t bi = 0; bi < copies; ++bi)
        for (std::size_t bj = 0; bj < copies; ++bj)
            for (std::size_t k = 0; k < ambient_dim; ++k)
                p(bi * ambient_dim + k, bj * ambient_dim + k) = w;
    return Subspace::from_projector(std::move(p));
}

Subspace product_projector(std::span<const Subspace> subspaces) {
    if (subspaces.empty()) {
        throw Error(ErrorCode::kInvalidArgument, "product_projector: empty list");
    }
    std::vector<Matrix> blocks;
    blocks.reserve(subspaces.size());
    for (const auto& s : subspaces) blocks.push_back(s.projector());
    return Subspace::from_projector(block_diagonal(blocks));
}

Subspace range_projector(const Matrix& a, double absolute_floor) {
    return Subspace::from_projector(matmul(a, pseudoinverse(a, absolute_floor)));
}

Subspace full_space(std::size_t d) { return Subspace::from_projector(Matrix::identity(d)); }

Subspace zero_space(std::size_t d) { return Subspace::from_projector(Matrix(d, d)); }

}  // namespace subsplit
