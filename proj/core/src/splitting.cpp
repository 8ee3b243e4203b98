#include "subsplit/splitting.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>

#include "subsplit/error.hpp"
#include "subsplit/linalg.hpp"
#include "subsplit/rng.hpp"

namespace subsplit {

namespace {

void require_common_ambient(std::span<const Subspace> subspaces, const char* who) {
    for (const auto& s : subspaces) {
        if (s.ambient_dim() != subspaces.front().ambient_dim()) {
            throw Error(ErrorCode::kDimensionMismatch,
                        std::string(who) + ": subspaces live in different ambient spaces");
        }
    }
}

// d × (m·d) selector of block i.
Matrix selector(std::size_t d, std::size_t blocks, std::size_t i) {
    Matrix e(d, d * blocks);
    for (std::size_t k = 0; k < d; ++k) e(k, i * d + k) = 1.0;
    return e;
}

// d × (m·d) block average (Id … Id)/m.
Matrix block_average(std::size_t d, std::size_t blocks) {
    Matrix e(d, d * blocks);
    const double w = 1.0 / static_cast<double>(blocks);
    for (std::size_t i = 0; i < blocks; ++i)
        for (std::size_t k = 0; k < d; ++k) e(k, i * d + k) = w;
    return e;
}

// Stack of d × c matrices into (m·d) × c.
Matrix stack_rows(std::span<const Matrix> parts) {
    BlockGrid grid;
    for (const auto& p : parts) grid.push_back({p});
    return block_assemble(grid);
}

// Average of the m block rows of a (m·d) × c matrix.
Matrix average_block_rows(const Matrix& m, std::size_t d) {
    const std::size_t blocks = m.rows() / d;
    Matrix avg(d, m.cols());
    for (std::size_t i = 0; i < blocks; ++i) avg += m.block(i * d, 0, d, m.cols());
    avg *= 1.0 / static_cast<double>(blocks);
    return avg;
}

std::span<const double> block_of(std::span<const double> v, std::size_t d, std::size_t i) {
    return v.subspan(i * d, d);
}

Vector combine(std::span<const double> a, double sa, std::span<const double> b, double sb) {
    Vector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = sa * a[i] + sb * b[i];
    return r;
}

Vector average_blocks(std::span<const double> v, std::size_t d) {
    const std::size_t blocks = v.size() / d;
    Vector avg(d, 0.0);
    for (std::size_t i = 0; i < blocks; ++i)
        for (std::size_t k = 0; k < d; ++k) avg[k] += v[i * d + k];
    for (double& x : avg) x /= static_cast<double>(blocks);
    return avg;
}

Subspace intersection_of(std::span<const Subspace> subspaces) { return intersect_many(subspaces); }

void require_arity(SchemeKind kind, std::span<const ResolventOracle> resolvents,
                   std::span<const double> state) {
    const std::size_t n = resolvents.size();
    if (n == 0) throw Error(ErrorCode::kInvalidArgument, "no resolvents");
    const std::size_t d = resolvents.front().ambient_dim;
    for (const auto& r : resolvents) {
        if (r.ambient_dim != d) {
            throw Error(ErrorCode::kDimensionMismatch, "resolvents differ in ambient dimension");
        }
    }
    switch (kind) {
    case SchemeKind::kRyu:
    case SchemeKind::kPocs:
        if (n != 3) throw Error(ErrorCode::kInvalidArgument, "scheme needs exactly 3 resolvents");
        break;
    case SchemeKind::kMalitskyTam:
    case SchemeKind::kCampoy:
        if (n < 3) throw Error(ErrorCode::kInvalidArgument, "scheme needs at least 3 resolvents");
        break;
    }
    const std::size_t expected = kind == SchemeKind::kPocs ? d : (n - 1) * d;
    if (state.size() != expected) {
        throw Error(ErrorCode::kDimensionMismatch, "state length " + std::to_string(state.size()) +
                                                       ", expected " + std::to_string(expected));
    }
#ifndef NDEBUG
    for (std::size_t i = 0; i < n; ++i) {
        if (!spot_check_nonexpansive(resolvents[i], 4, 0x5eed + i)) {
            throw Error(ErrorCode::kInvalidArgument,
                        "resolvent " + std::to_string(i) + " failed the nonexpansiveness spot check");
        }
    }
#endif
}

struct GenericEval {
    Vector next;
    Vector shadow;
};

GenericEval generic_eval(SchemeKind kind, std::span<const ResolventOracle> j,
                         std::span<const double> z) {
    require_arity(kind, j, z);
    const std::size_t n = j.size();
    const std::size_t d = j.front().ambient_dim;
    GenericEval out;
    switch (kind) {
    case SchemeKind::kRyu: {
        const auto x = block_of(z, d, 0);
        const auto y = block_of(z, d, 1);
        const Vector a = j[0](x);
        const Vector b = j[1](a + Vector(y.begin(), y.end()));
        Vector arg(d);
        for (std::size_t k = 0; k < d; ++k) arg[k] = a[k] - x[k] + b[k] - y[k];
        const Vector c = j[2](arg);
        out.next.resize(2 * d);
        for (std::size_t k = 0; k < d; ++k) {
            out.next[k] = x[k] + c[k] - a[k];
            out.next[d + k] = y[k] + c[k] - b[k];
        }
        out.shadow.resize(d);
        for (std::size_t k = 0; k < d; ++k) out.shadow[k] = (a[k] + b[k] + c[k]) / 3.0;
        break;
    }
    case SchemeKind::kMalitskyTam: {
        std::vector<Vector> x(n);
        x[0] = j[0](block_of(z, d, 0));
        for (std::size_t i = 1; i + 1 < n; ++i) {
            Vector arg(d);
            const auto zi = block_of(z, d, i);
            const auto zp = block_of(z, d, i - 1);
            for (std::size_t k = 0; k < d; ++k) arg[k] = x[i - 1][k] + zi[k] - zp[k];
            x[i] = j[i](arg);
        }
        {
            Vector arg(d);
            const auto zl = block_of(z, d, n - 2);
            for (std::size_t k = 0; k < d; ++k) arg[k] = x[0][k] + x[n - 2][k] - zl[k];
            x[n - 1] = j[n - 1](arg);
        }
        out.next.assign(z.begin(), z.end());
        for (std::size_t i = 0; i + 1 < n; ++i)
            for (std::size_t k = 0; k < d; ++k) out.next[i * d + k] += x[i + 1][k] - x[i][k];
        out.shadow.assign(d, 0.0);
        for (const auto& xi : x)
            for (std::size_t k = 0; k < d; ++k) out.shadow[k] += xi[k] / static_cast<double>(n);
        break;
    }
    case SchemeKind::kCampoy: {
        const Vector p = j[n - 1](average_blocks(z, d));
        out.next.assign(z.begin(), z.end());
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const auto zi = block_of(z, d, i);
            const Vector xi = j[i](combine(p, 2.0, zi, -1.0));
            for (std::size_t k = 0; k < d; ++k) out.next[i * d + k] += 2.0 * (xi[k] - p[k]);
        }
        out.shadow = p;
        break;
    }
    case SchemeKind::kPocs: {
        const Vector c = j[2](j[1](j[0](z)));
        out.next = combine(c, 4.0 / 3.0, z, -1.0 / 3.0);
        out.shadow.assign(z.begin(), z.end());
        break;
    }
    }
    return out;
}

}  // namespace

std::string_view to_string(SchemeKind kind) {
    switch (kind) {
    case SchemeKind::kRyu: return "ryu";
    case SchemeKind::kMalitskyTam: return "mt";
    case SchemeKind::kCampoy: return "campoy";
    case SchemeKind::kPocs: return "pocs";
    }
    return "unknown";
}

SchemeKind parse_scheme_kind(std::string_view name) {
    if (name == "ryu") return SchemeKind::kRyu;
    if (name == "mt") return SchemeKind::kMalitskyTam;
    if (name == "campoy") return SchemeKind::kCampoy;
    if (name == "pocs") return SchemeKind::kPocs;
    throw Error(ErrorCode::kInvalidArgument, "unknown algorithm '" + std::string(name) + "'");
}

Vector ResolventOracle::operator()(std::span<const double> x) const {
    if (x.size() != ambient_dim) {
        throw Error(ErrorCode::kDimensionMismatch, "resolvent input length mismatch");
    }
    Vector y = fn(x);
    if (y.size() != ambient_dim) {
        throw Error(ErrorCode::kDimensionMismatch, "resolvent output length mismatch");
    }
    return y;
}

ResolventOracle projector_resolvent(const Subspace& s) {
    return {[p = s.projector()](std::span<const double> x) { return matvec(p, x); },
            s.ambient_dim()};
}

ResolventOracle affine_resolvent(const AffineSubspace& s) {
    return {[s](std::span<const double> x) { return s.project(x); }, s.parallel.ambient_dim()};
}

bool spot_check_nonexpansive(const ResolventOracle& j, int pairs, std::uint64_t seed) {
    CounterRng rng(seed, CounterRng::derive({0x4a}));
    std::normal_distribution<double> normal;
    for (int t = 0; t < pairs; ++t) {
        Vector x(j.ambient_dim);
        Vector y(j.ambient_dim);
        for (auto& v : x) v = normal(rng);
        for (auto& v : y) v = normal(rng);
        if (distance(j(x), j(y)) > distance(x, y) * (1.0 + 1e-12) + 1e-14) return false;
    }
    return true;
}

SplittingScheme build_ryu(const Subspace& u, const Subspace& v, const Subspace& w) {
    const std::vector<Subspace> all{u, v, w};
    require_common_ambient(all, "build_ryu");
    const std::size_t d = u.ambient_dim();
    const Matrix id = Matrix::identity(d);
    const Matrix zero(d, d);
    const Matrix& pu = u.projector();
    const Matrix& pv = v.projector();
    const Matrix& pw = w.projector();
    const Matrix pvpu = pv * pu;

    const Matrix m = block_assemble({
        {pu, zero},
        {pvpu, pv},
        {pw * pu + pw * pvpu - pw, pw * pv - pw},
    });
    // T = Id + [(Q3 − Q1)M; (Q3 − Q2)M]
    const Matrix diff = block_assemble({{-1.0 * id, zero, id}, {zero, -1.0 * id, id}});
    const Matrix t = Matrix::identity(2 * d) + diff * m;

    const Subspace z = intersection_of(all);

    // E = (U^⊥ × V^⊥) ∩ (Δ^⊥ + {0} × W^⊥)
    const std::vector<Subspace> perp{complement(u), complement(v)};
    const Subspace left = product_projector(perp);
    const Matrix ones = block_assemble({{id, id}, {id, id}});
    const Matrix x_times_w = block_assemble({{id, zero}, {zero, pw}});
    const Matrix gram = block_assemble({{3.0 * id, id}, {id, id + 2.0 * pw}});
    const Subspace right = Subspace::from_projector(Matrix::identity(2 * d) -
                                                    2.0 * (ones * pseudoinverse(gram) * x_times_w));
    const Subspace e = intersect2(left, right);

    Matrix p_fix = e.projector();
    p_fix.set_block(0, 0, p_fix.block(0, 0, d, d) + z.projector());

    Matrix shadow = average_block_rows(m, d);
    return SplittingScheme{SchemeKind::kRyu,
                           d,
                           3,
                           2 * d,
                           t,
                           m,
                           Subspace::from_projector(std::move(p_fix)).projector(),
                           z.projector(),
                           std::move(shadow),
                           selector(d, 2, 0)};
}

SplittingScheme build_mt(std::span<const Subspace> subspaces) {
    const std::size_t n = subspaces.size();
    if (n < 3) throw Error(ErrorCode::kInvalidArgument, "build_mt: needs at least 3 subspaces");
    require_common_ambient(subspaces, "build_mt");
    const std::size_t d = subspaces.front().ambient_dim();
    const std::size_t blocks = n - 1;
    const std::size_t sd = blocks * d;

    // Row-block maps x_i = X_i z, propagated through the cascade.
    std::vector<Matrix> x;
    x.reserve(n);
    x.push_back(subspaces[0].projector() * selector(d, blocks, 0));
    for (std::size_t i = 1; i + 1 < n; ++i) {
        Matrix arg = x[i - 1] + selector(d, blocks, i) - selector(d, blocks, i - 1);
        x.push_back(subspaces[i].projector() * arg);
    }
    {
        Matrix arg = x[0] + x[n - 2] - selector(d, blocks, n - 2);
        x.push_back(subspaces[n - 1].projector() * arg);
    }
    const Matrix m = stack_rows(x);

    std::vector<Matrix> steps;
    steps.reserve(blocks);
    for (std::size_t i = 0; i < blocks; ++i) steps.push_back(x[i + 1] - x[i]);
    const Matrix t = Matrix::identity(sd) + stack_rows(steps);

    const Subspace z = intersection_of(subspaces);

    // P_D: every block P_Z/(n−1).
    Matrix p_d(sd, sd);
    const Matrix pz_scaled = z.projector() * (1.0 / static_cast<double>(blocks));
    for (std::size_t i = 0; i < blocks; ++i)
        for (std::size_t k = 0; k < blocks; ++k) p_d.set_block(i * d, k * d, pz_scaled);

    // Ψ: block-lower-triangular partial sums of complement projectors.
    Matrix psi(sd, sd);
    for (std::size_t i = 0; i < blocks; ++i) {
        for (std::size_t k = 0; k <= i; ++k) {
            psi.set_block(i * d, k * d, Matrix::identity(d) - subspaces[k].projector());
        }
    }
    std::vector<Subspace> tail;
    for (std::size_t i = 0; i + 1 < blocks; ++i) tail.push_back(full_space(d));
    tail.push_back(complement(subspaces[n - 1]));
    const Subspace e = intersect2(range_projector(psi, kProjectorRankFloor), product_projector(tail));

    return SplittingScheme{SchemeKind::kMalitskyTam,
                           d,
                           n,
                           sd,
                           t,
                           m,
                           Subspace::from_projector(p_d + e.projector()).projector(),
                           z.projector(),
                           average_block_rows(m, d),
                           block_average(d, blocks)};
}

SplittingScheme build_campoy(std::span<const Subspace> subspaces) {
    const std::size_t n = subspaces.size();
    if (n < 3) throw Error(ErrorCode::kInvalidArgument, "build_campoy: needs at least 3 subspaces");
    require_common_ambient(subspaces, "build_campoy");
    const std::size_t d = subspaces.front().ambient_dim();
    const std::size_t blocks = n - 1;
    const std::size_t sd = blocks * d;
    const Matrix& pn = subspaces[n - 1].projector();

    Matrix m(sd, sd);
    const Matrix pn_scaled = pn * (1.0 / static_cast<double>(blocks));
    for (std::size_t i = 0; i < blocks; ++i)
        for (std::size_t k = 0; k < blocks; ++k) m.set_block(i * d, k * d, pn_scaled);

    const Subspace v_tilde = product_projector(subspaces.first(blocks));
    const Matrix id = Matrix::identity(sd);
    const Matrix s = v_tilde.projector() * (2.0 * m - id);
    const Matrix t = id + 2.0 * s - 2.0 * m;

    // Ũ = U_n^{n−1} ∩ Δ has projector P_{U_n^{n−1}} P_Δ, which is M itself.
    const Subspace u_tilde = Subspace::from_projector(m);
    const Subspace meet = intersect2(u_tilde, v_tilde);
    const Subspace meet_perp = intersect2(complement(u_tilde), complement(v_tilde));
    const double cross = (meet.projector() * meet_perp.projector()).frobenius_norm();
    if (cross > 1e-8) {
        throw Error(ErrorCode::kDegenerate,
                    "build_campoy: fixed-point components not orthogonal (" +
                        std::to_string(cross) + ")");
    }

    return SplittingScheme{SchemeKind::kCampoy,
                           d,
                           n,
                           sd,
                           t,
                           m,
                           Subspace::from_projector(meet.projector() + meet_perp.projector())
                               .projector(),
                           intersection_of(subspaces).projector(),
                           m.block(0, 0, d, sd),
                           block_average(d, blocks)};
}

SplittingScheme build_pocs(std::span<const Subspace> subspaces) {
    if (subspaces.size() != 3) {
        throw Error(ErrorCode::kInvalidArgument, "build_pocs: exactly 3 subspaces are supported");
    }
    require_common_ambient(subspaces, "build_pocs");
    const std::size_t d = subspaces.front().ambient_dim();
    const Matrix composition =
        subspaces[2].projector() * subspaces[1].projector() * subspaces[0].projector();
    const Matrix t = (4.0 / 3.0) * composition - (1.0 / 3.0) * Matrix::identity(d);
    const Matrix pz = intersection_of(subspaces).projector();
    return SplittingScheme{SchemeKind::kPocs,
                           d,
                           3,
                           d,
                           t,
                           composition,
                           pz,
                           pz,
                           Matrix::identity(d),
                           Matrix::identity(d)};
}

SplittingScheme build_scheme(SchemeKind kind, std::span<const Subspace> subspaces) {
    switch (kind) {
    case SchemeKind::kRyu:
        if (subspaces.size() != 3) {
            throw Error(ErrorCode::kInvalidArgument, "build_ryu: exactly 3 subspaces required");
        }
        return build_ryu(subspaces[0], subspaces[1], subspaces[2]);
    case SchemeKind::kMalitskyTam: return build_mt(subspaces);
    case SchemeKind::kCampoy: return build_campoy(subspaces);
    case SchemeKind::kPocs: return build_pocs(subspaces);
    }
    throw Error(ErrorCode::kInvalidArgument, "unknown scheme kind");
}

Vector apply_generic_step(SchemeKind kind, std::span<const ResolventOracle> resolvents,
                          std::span<const double> state) {
    return generic_eval(kind, resolvents, state).next;
}

Vector apply_generic_shadow(SchemeKind kind, std::span<const ResolventOracle> resolvents,
                            std::span<const double> state) {
    return generic_eval(kind, resolvents, state).shadow;
}

std::pair<SplittingScheme, AffineConjugation> build_affine(
    SchemeKind kind, std::span<const AffineSubspace> affine_subspaces) {
    if (affine_subspaces.empty()) {
        throw Error(ErrorCode::kInvalidArgument, "build_affine: no subspaces");
    }
    // Fix T can be nonempty for an empty intersection (POCS cycles), so the
    // intersection itself is checked first.
    intersect_affine(affine_subspaces);
    std::vector<Subspace> parallel;
    std::vector<ResolventOracle> resolvents;
    for (const auto& a : affine_subspaces) {
        parallel.push_back(a.parallel);
        resolvents.push_back(affine_resolvent(a));
    }
    SplittingScheme scheme = build_scheme(kind, parallel);

    const Vector origin(scheme.state_dim, 0.0);
    const GenericEval at_origin = generic_eval(kind, resolvents, origin);
    AffineConjugation conj;
    conj.b = at_origin.next;
    conj.shadow_offset = at_origin.shadow;

    const Matrix id_minus_l = Matrix::identity(scheme.state_dim) - scheme.T;
    conj.a = matvec(pseudoinverse(id_minus_l), conj.b);
    const double residual = distance(matvec(id_minus_l, conj.a), conj.b);
    if (residual > 1e-8 * (1.0 + norm(conj.b))) {
        std::ostringstream msg;
        msg << "(Id - L)a = b has residual " << residual << "; the subspaces do not intersect";
        throw Error(ErrorCode::kInconsistentAffine, msg.str());
    }
    return {std::move(scheme), std::move(conj)};
}

AffineSubspace intersect_affine(std::span<const AffineSubspace> affine_subspaces) {
    if (affine_subspaces.empty()) {
        throw Error(ErrorCode::kInvalidArgument, "intersect_affine: no subspaces");
    }
    const std::size_t d = affine_subspaces.front().parallel.ambient_dim();
    // Least-squares point y with (Id − P_i) y = (Id − P_i) v_i for all i.
    std::vector<Matrix> rows;
    Vector rhs;
    std::vector<Subspace> parallel;
    for (const auto& a : affine_subspaces) {
        const Matrix perp = Matrix::identity(d) - a.parallel.projector();
        rows.push_back(perp);
        const Vector r = matvec(perp, a.anchor);
        rhs.insert(rhs.end(), r.begin(), r.end());
        parallel.push_back(a.parallel);
    }
    const Matrix stacked = stack_rows(rows);
    const Vector y = matvec(pseudoinverse(stacked), rhs);
    const double residual = distance(matvec(stacked, y), rhs);
    if (residual > 1e-8 * (1.0 + norm(rhs))) {
        std::ostringstream msg;
        msg << "affine subspaces have empty intersection (residual " << residual << ")";
        throw Error(ErrorCode::kInconsistentAffine, msg.str());
    }
    return AffineSubspace(intersect_many(parallel), y);
}

void write_scheme(std::ostream& out, const SplittingScheme& scheme) {
    const std::pair<const char*, const Matrix*> named[] = {
        {"T", &scheme.T},           {"M", &scheme.M},           {"P_fix", &scheme.P_fix},
        {"P_Z", &scheme.P_Z},       {"shadow", &scheme.shadow},
    };
    for (const auto& [name, m] : named) {
        out << name << '\n';
        write_matrix(out, *m);
    }
}

void write_scheme_dir(const std::string& dir, const SplittingScheme& scheme) {
    write_matrix_file(dir + "/T.txt", scheme.T);
    write_matrix_file(dir + "/M.txt", scheme.M);
    write_matrix_file(dir + "/P_fix.txt", scheme.P_fix);
    write_matrix_file(dir + "/P_Z.txt", scheme.P_Z);
    write_matrix_file(dir + "/shadow.txt", scheme.shadow);
}

}  // namespace subsplit
