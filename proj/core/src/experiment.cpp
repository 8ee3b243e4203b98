#include "subsplit/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <thread>

#include "subsplit/error.hpp"
#include "subsplit/iteration.hpp"
#include "subsplit/linalg.hpp"
#include "subsplit/rng.hpp"
#include "subsplit/spectral.hpp"

namespace subsplit {

namespace {

constexpr std::uint64_t kInstanceTag = 1;
constexpr std::uint64_t kStartTag = 2;

// Eigenvalues of Σ(Id − P_i) at or below this belong to the intersection;
// eigenvalues strictly between the two thresholds make the split ambiguous.
constexpr double kKernelTolerance = 1e-9;
constexpr double kKernelGap = 1e-6;
constexpr double kOracleTolerance = 1e-8;

// Runs body(i) for i in [0, count) on up to `threads` workers. Each work
// item writes only its own slot, so results do not depend on scheduling.
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& body) {
    threads = std::max<std::size_t>(1, std::min(threads, count));
    if (threads == 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (std::size_t i = t; i < count; i += threads) body(i);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

double round12(double x) { return std::round(x * 1e12) / 1e12; }

std::vector<double> decimal_grid(double step, int first, int last) {
    std::vector<double> grid;
    for (int k = first; k <= last; ++k) grid.push_back(round12(step * k));
    return grid;
}

void require_grid(const std::vector<double>& grid, const char* name) {
    if (grid.empty()) {
        throw Error(ErrorCode::kInvalidArgument, std::string(name) + " grid is empty");
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!std::isfinite(grid[i])) {
            throw Error(ErrorCode::kInvalidArgument, std::string(name) + " grid is not finite");
        }
        if (i > 0 && !(grid[i] > grid[i - 1])) {
            throw Error(ErrorCode::kInvalidArgument,
                        std::string(name) + " grid must be strictly increasing");
        }
    }
}

Matrix gaussian_matrix(CounterRng& rng, std::size_t rows, std::size_t cols) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> entries(rows * cols);
    for (double& v : entries) v = normal(rng);
    return Matrix(rows, cols, std::move(entries));
}

std::vector<InstanceRecord> make_instances(const ExperimentConfig& c) {
    std::vector<std::optional<InstanceRecord>> slots(c.n_instances);
    parallel_for(c.n_instances, c.threads, [&](std::size_t i) {
        slots[i] = random_instance(c.seed, i, c.d, c.subspace_dims);
    });
    std::vector<InstanceRecord> out;
    out.reserve(slots.size());
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

std::vector<Vector> make_starts(const ExperimentConfig& c) {
    std::vector<Vector> out;
    out.reserve(c.n_starts);
    for (std::size_t s = 0; s < c.n_starts; ++s) out.push_back(random_start(c.seed, s, c.d));
    return out;
}

double fixed_lambda_for(const ExperimentConfig& c, SchemeKind kind) {
    auto it = c.fixed_lambda.find(kind);
    return it != c.fixed_lambda.end() ? it->second : exp3_default_lambda(kind);
}

const char* kStatNames[] = {"median", "min", "max"};

double stat_value(const Summary& s, int which) {
    switch (which) {
        case 0: return s.median;
        case 1: return s.min;
        default: return s.max;
    }
}

std::ofstream open_output(const std::string& path) {
    std::ofstream f(path);
    if (!f) throw Error(ErrorCode::kIo, "cannot open output file " + path);
    return f;
}

}  // namespace

double exp3_default_lambda(SchemeKind kind) {
    switch (kind) {
        case SchemeKind::kRyu: return 0.99;
        case SchemeKind::kMalitskyTam: return 0.97;
        case SchemeKind::kCampoy: return 0.57;
        case SchemeKind::kPocs: return 0.99;
    }
    return 0.99;
}

std::vector<double> default_lambda_grid(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::kExp1: return decimal_grid(0.01, 1, 110);
        case ExperimentKind::kExp2: return decimal_grid(0.01, 1, 199);
        case ExperimentKind::kThreeLines: return decimal_grid(0.05, 1, 39);
        case ExperimentKind::kExp3:
        case ExperimentKind::kSolve: return {};
    }
    return {};
}

std::vector<double> default_theta_grid() {
    std::vector<double> grid;
    for (int k = 1; k <= 5; ++k) grid.push_back(k * std::numbers::pi / 12.0);
    return grid;
}

std::vector<double> parse_grid(const std::string& spec) {
    std::vector<double> parts;
    std::size_t pos = 0;
    while (true) {
        const std::size_t next = spec.find(':', pos);
        const std::string token = spec.substr(pos, next == std::string::npos ? next : next - pos);
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
        if (token.empty() || ec != std::errc() || ptr != token.data() + token.size()) {
            throw Error(ErrorCode::kParse, "bad grid '" + spec + "': expected start:step:end");
        }
        parts.push_back(v);
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    if (parts.size() == 1) return parts;
    if (parts.size() != 3) {
        throw Error(ErrorCode::kParse, "bad grid '" + spec + "': expected start:step:end");
    }
    const double start = parts[0];
    const double step = parts[1];
    const double end = parts[2];
    if (!(step > 0.0) || end < start) {
        throw Error(ErrorCode::kInvalidArgument,
                    "bad grid '" + spec + "': need step > 0 and end >= start");
    }
    const auto count = static_cast<std::size_t>(std::floor((end - start) / step + 1e-9)) + 1;
    std::vector<double> grid;
    grid.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        grid.push_back(round12(start + step * static_cast<double>(k)));
    }
    return grid;
}

ExperimentConfig resolve(ExperimentConfig c) {
    if (c.d < 1) throw Error(ErrorCode::kInvalidArgument, "dimension must be >= 1");
    if (c.subspace_dims.empty()) {
        const std::size_t dflt = std::min(c.d, 1 + (2 * c.d + 2) / 3);
        c.subspace_dims.assign(3, dflt);
    }
    if (c.subspace_dims.size() < 3) {
        throw Error(ErrorCode::kInvalidArgument, "need at least three subspaces");
    }
    for (std::size_t di : c.subspace_dims) {
        if (di < 1 || di > c.d) {
            throw Error(ErrorCode::kInvalidArgument,
                        "subspace dimensions must lie in [1, " + std::to_string(c.d) + "]");
        }
    }
    if (c.algorithms.empty()) throw Error(ErrorCode::kInvalidArgument, "no algorithms selected");
    const bool has_pocs =
        std::find(c.algorithms.begin(), c.algorithms.end(), SchemeKind::kPocs) != c.algorithms.end();
    if (has_pocs && c.subspace_dims.size() != 3 && c.experiment != ExperimentKind::kThreeLines &&
        c.experiment != ExperimentKind::kSolve) {
        throw Error(ErrorCode::kInvalidArgument, "pocs needs exactly three subspaces");
    }
    if (!(c.epsilon > 0.0)) throw Error(ErrorCode::kInvalidArgument, "epsilon must be positive");
    if (c.max_iters < 1) throw Error(ErrorCode::kInvalidArgument, "max_iters must be >= 1");
    if (c.n_instances < 1 || c.n_starts < 1) {
        throw Error(ErrorCode::kInvalidArgument, "instances and starts must be >= 1");
    }
    if (c.lambda_grid.empty()) c.lambda_grid = default_lambda_grid(c.experiment);
    if (c.experiment == ExperimentKind::kExp1 || c.experiment == ExperimentKind::kExp2 ||
        c.experiment == ExperimentKind::kThreeLines) {
        require_grid(c.lambda_grid, "lambda");
        for (double l : c.lambda_grid) {
            if (!(l > 0.0)) throw Error(ErrorCode::kInvalidArgument, "lambda must be positive");
        }
    }
    if (c.experiment == ExperimentKind::kThreeLines) {
        if (c.theta_grid.empty()) c.theta_grid = default_theta_grid();
        require_grid(c.theta_grid, "theta");
        for (double t : c.theta_grid) {
            if (!(t > 0.0 && t < std::numbers::pi / 2.0)) {
                throw Error(ErrorCode::kInvalidArgument, "theta must lie in (0, pi/2)");
            }
        }
    }
    for (const auto& [kind, l] : c.fixed_lambda) {
        if (!(l > 0.0) || !std::isfinite(l)) {
            throw Error(ErrorCode::kInvalidArgument, "lambda must be positive");
        }
    }
    if (c.experiment == ExperimentKind::kExp3 && c.exp3_iterations < 1) {
        throw Error(ErrorCode::kInvalidArgument, "exp3 needs at least one iteration");
    }
    if (c.threads < 1) c.threads = 1;
    return c;
}

Subspace nullspace_intersection(const std::vector<Subspace>& subspaces) {
    if (subspaces.empty()) throw Error(ErrorCode::kInvalidArgument, "no subspaces to intersect");
    const std::size_t d = subspaces.front().ambient_dim();
    Matrix gram(d, d);
    for (const Subspace& s : subspaces) {
        if (s.ambient_dim() != d) {
            throw Error(ErrorCode::kDimensionMismatch, "subspaces live in different spaces");
        }
        gram += Matrix::identity(d) - s.projector();
    }
    const EigResult eig = jacobi_symmetric_eig(gram);
    const Matrix& vecs = *eig.eigenvectors;
    std::vector<std::size_t> kernel;
    for (std::size_t j = 0; j < d; ++j) {
        const double ev = eig.eigenvalues[j].real();
        if (ev <= kKernelTolerance) {
            kernel.push_back(j);
        } else if (ev < kKernelGap) {
            throw Error(ErrorCode::kDegenerate,
                        "intersection is numerically ambiguous (eigenvalue " + format_double(ev) +
                            ")");
        }
    }
    Matrix p(d, d);
    for (std::size_t j : kernel) {
        for (std::size_t r = 0; r < d; ++r) {
            for (std::size_t c = 0; c < d; ++c) p(r, c) += vecs(r, j) * vecs(c, j);
        }
    }
    return Subspace::from_projector(std::move(p));
}

InstanceRecord random_instance(std::uint64_t seed, std::size_t instance_id, std::size_t d,
                               const std::vector<std::size_t>& dims) {
    std::string last_reason;
    for (std::uint64_t attempt = 0; attempt < 2; ++attempt) {
        CounterRng rng(seed, CounterRng::derive({kInstanceTag, instance_id, attempt}));
        std::vector<Subspace> subspaces;
        bool ok = true;
        for (std::size_t di : dims) {
            Matrix b = gaussian_matrix(rng, d, di);
            Subspace s = from_basis(b);
            if (s.dim() != di) {
                ok = false;
                last_reason = "basis rank " + std::to_string(s.dim()) + " < " + std::to_string(di);
                break;
            }
            subspaces.push_back(std::move(s));
        }
        if (!ok) continue;
        try {
            Subspace intersection = intersect_many(subspaces);
            const Subspace oracle = nullspace_intersection(subspaces);
            const double gap = distance(intersection.projector(), oracle.projector());
            if (gap > kOracleTolerance) {
                last_reason = "intersection disagrees with nullspace oracle by " + format_double(gap);
                continue;
            }
            return InstanceRecord{instance_id, std::move(subspaces), std::move(intersection)};
        } catch (const Error& e) {
            if (e.code() != ErrorCode::kDegenerate) throw;
            last_reason = e.what();
        }
    }
    throw Error(ErrorCode::kDegenerate, "instance " + std::to_string(instance_id) +
                                            " is degenerate after a redraw: " + last_reason);
}

Vector random_start(std::uint64_t seed, std::size_t start_id, std::size_t d) {
    CounterRng rng(seed, CounterRng::derive({kStartTag, start_id}));
    std::normal_distribution<double> normal(0.0, 1.0);
    Vector x(d);
    for (double& v : x) v = normal(rng);
    return x;
}

Vector lift_start(const SplittingScheme& scheme, std::span<const double> x0) {
    if (x0.size() != scheme.ambient_dim) {
        throw Error(ErrorCode::kDimensionMismatch, "start point does not match the ambient space");
    }
    Vector z;
    z.reserve(scheme.state_dim);
    while (z.size() < scheme.state_dim) z.insert(z.end(), x0.begin(), x0.end());
    return z;
}

Summary summarize(std::vector<double> values) {
    Summary s;
    s.samples = values.size();
    if (values.empty()) {
        s.median = s.min = s.max = std::numeric_limits<double>::quiet_NaN();
        return s;
    }
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    s.min = values.front();
    s.max = values.back();
    s.median = n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
    return s;
}

void run_exp1(const ExperimentConfig& config, std::ostream& out) {
    const ExperimentConfig c = resolve(config);
    const std::vector<InstanceRecord> instances = make_instances(c);
    const std::size_t na = c.algorithms.size();
    const std::size_t nl = c.lambda_grid.size();
    const std::size_t ni = instances.size();

    // Slot (a, l, i) holds the bounds, or a failure reason.
    struct Cell {
        double radius = 0.0;
        double norm = 0.0;
        std::string failure;
    };
    std::vector<Cell> cells(na * nl * ni);
    parallel_for(ni * na, c.threads, [&](std::size_t job) {
        const std::size_t i = job / na;
        const std::size_t a = job % na;
        std::optional<SplittingScheme> built;
        try {
            built = build_scheme(c.algorithms[a], instances[i].subspaces);
        } catch (const Error& e) {
            for (std::size_t l = 0; l < nl; ++l) cells[(a * nl + l) * ni + i].failure = e.what();
            return;
        }
        const SplittingScheme& scheme = *built;
        for (std::size_t l = 0; l < nl; ++l) {
            Cell& cell = cells[(a * nl + l) * ni + i];
            try {
                const RateBounds b = rate_bounds(scheme, c.lambda_grid[l]);
                cell.radius = b.spectral_radius;
                cell.norm = b.operator_norm;
            } catch (const Error& e) {
                cell.failure = e.what();
            }
        }
    });

    out << "algorithm,lambda,stat,spectral_radius,operator_norm,samples\n";
    for (std::size_t a = 0; a < na; ++a) {
        for (std::size_t l = 0; l < nl; ++l) {
            std::vector<double> radii;
            std::vector<double> norms;
            std::vector<std::string> reasons;
            for (std::size_t i = 0; i < ni; ++i) {
                const Cell& cell = cells[(a * nl + l) * ni + i];
                if (cell.failure.empty()) {
                    radii.push_back(cell.radius);
                    norms.push_back(cell.norm);
                } else {
                    reasons.push_back("instance " + std::to_string(i) + ": " + cell.failure);
                }
            }
            const Summary rs = summarize(radii);
            const Summary ns = summarize(norms);
            const std::string prefix = std::string(to_string(c.algorithms[a])) + ',' +
                                       format_double(c.lambda_grid[l]) + ',';
            if (!radii.empty()) {
                for (int st = 0; st < 3; ++st) {
                    out << prefix << kStatNames[st] << ',' << format_double(stat_value(rs, st))
                        << ',' << format_double(stat_value(ns, st)) << ',' << rs.samples << '\n';
                }
            }
            if (!reasons.empty()) {
                out << prefix << "skipped,,," << reasons.size() << '\n';
                for (const auto& r : reasons) {
                    std::cerr << "exp1 skipped " << to_string(c.algorithms[a]) << " lambda "
                              << format_double(c.lambda_grid[l]) << ' ' << r << '\n';
                }
            }
        }
    }
}

void run_exp2(const ExperimentConfig& config, std::ostream& out) {
    const ExperimentConfig c = resolve(config);
    const std::vector<InstanceRecord> instances = make_instances(c);
    const std::vector<Vector> starts = make_starts(c);
    const std::size_t na = c.algorithms.size();
    const std::size_t nl = c.lambda_grid.size();
    const std::size_t ni = instances.size();
    const std::size_t ns = starts.size();

    // counts[((a*nl + l)*ni + i)*ns + s]
    std::vector<ConvergenceCounts> counts(na * nl * ni * ns);
    parallel_for(ni * na, c.threads, [&](std::size_t job) {
        const std::size_t i = job / na;
        const std::size_t a = job % na;
        const SplittingScheme scheme = build_scheme(c.algorithms[a], instances[i].subspaces);
        std::vector<Vector> lifted;
        lifted.reserve(ns);
        for (const Vector& x0 : starts) lifted.push_back(lift_start(scheme, x0));
        for (std::size_t l = 0; l < nl; ++l) {
            const Matrix relaxed = relax(scheme.T, c.lambda_grid[l]);
            for (std::size_t s = 0; s < ns; ++s) {
                counts[((a * nl + l) * ni + i) * ns + s] =
                    count_iterations(scheme, relaxed, lifted[s], c.epsilon, c.max_iters);
            }
        }
    });

    out << "algorithm,lambda,sequence,stat,iterations,samples\n";
    for (std::size_t a = 0; a < na; ++a) {
        for (std::size_t l = 0; l < nl; ++l) {
            std::vector<double> gov;
            std::vector<double> sha;
            gov.reserve(ni * ns);
            sha.reserve(ni * ns);
            for (std::size_t k = 0; k < ni * ns; ++k) {
                const ConvergenceCounts& cc = counts[(a * nl + l) * ni * ns + k];
                gov.push_back(static_cast<double>(cc.governing));
                sha.push_back(static_cast<double>(cc.shadow));
            }
            const std::string prefix = std::string(to_string(c.algorithms[a])) + ',' +
                                       format_double(c.lambda_grid[l]) + ',';
            const Summary summaries[2] = {summarize(gov), summarize(sha)};
            const char* sequences[2] = {"governing", "shadow"};
            for (int q = 0; q < 2; ++q) {
                for (int st = 0; st < 3; ++st) {
                    out << prefix << sequences[q] << ',' << kStatNames[st] << ','
                        << format_double(stat_value(summaries[q], st)) << ','
                        << summaries[q].samples << '\n';
                }
            }
        }
    }
}

void run_exp3(const ExperimentConfig& config, std::ostream& out) {
    const ExperimentConfig c = resolve(config);
    const std::vector<InstanceRecord> instances = make_instances(c);
    const std::vector<Vector> starts = make_starts(c);
    const std::size_t na = c.algorithms.size();
    const std::size_t ni = instances.size();
    const std::size_t ns = starts.size();
    const std::size_t nk = c.exp3_iterations;

    // series[(a*ni + i)*ns + s]
    std::vector<DistanceSeries> series(na * ni * ns);
    parallel_for(ni * na, c.threads, [&](std::size_t job) {
        const std::size_t i = job / na;
        const std::size_t a = job % na;
        const SplittingScheme scheme = build_scheme(c.algorithms[a], instances[i].subspaces);
        const Matrix relaxed = relax(scheme.T, fixed_lambda_for(c, c.algorithms[a]));
        for (std::size_t s = 0; s < ns; ++s) {
            series[(a * ni + i) * ns + s] =
                distance_series(scheme, relaxed, lift_start(scheme, starts[s]), nk);
        }
    });

    out << "# lambda:";
    for (SchemeKind kind : c.algorithms) {
        out << ' ' << to_string(kind) << '=' << format_double(fixed_lambda_for(c, kind));
        if (kind == SchemeKind::kPocs && !c.fixed_lambda.contains(kind)) {
            out << " (pocs: library default)";
        }
    }
    out << '\n';
    out << "algorithm,k,sequence,stat,distance,samples\n";
    for (std::size_t a = 0; a < na; ++a) {
        const char* sequences[2] = {"governing", "shadow"};
        for (int q = 0; q < 2; ++q) {
            for (std::size_t k = 1; k <= nk; ++k) {
                std::vector<double> vals;
                vals.reserve(ni * ns);
                for (std::size_t j = 0; j < ni * ns; ++j) {
                    const DistanceSeries& ds = series[a * ni * ns + j];
                    vals.push_back(q == 0 ? ds.governing[k] : ds.shadow[k]);
                }
                const Summary sm = summarize(std::move(vals));
                for (int st = 0; st < 3; ++st) {
                    out << to_string(c.algorithms[a]) << ',' << k << ',' << sequences[q] << ','
                        << kStatNames[st] << ',' << format_double(stat_value(sm, st)) << ','
                        << sm.samples << '\n';
                }
            }
        }
    }
}

void run_three_lines(const ExperimentConfig& config, std::ostream& out) {
    const ExperimentConfig c = resolve(config);
    out << "algorithm,theta,lambda,spectral_radius,operator_norm,closed_form_radius,"
           "closed_form_norm\n";
    for (SchemeKind kind : c.algorithms) {
        for (double theta : c.theta_grid) {
            const std::vector<Subspace> lines{Subspace::from_projector(line_projector(0.0)),
                                              Subspace::from_projector(line_projector(theta)),
                                              Subspace::from_projector(line_projector(2.0 * theta))};
            const SplittingScheme scheme = build_scheme(kind, lines);
            for (double lambda : c.lambda_grid) {
                const RateBounds b = rate_bounds(scheme, lambda);
                out << to_string(kind) << ',' << format_double(theta) << ','
                    << format_double(lambda) << ',' << format_double(b.spectral_radius) << ','
                    << format_double(b.operator_norm) << ',';
                if (kind == SchemeKind::kPocs) {
                    const auto [e1, e2] = pocs_three_lines_eigenvalues(theta, lambda);
                    out << format_double(std::max(std::abs(e1), std::abs(e2))) << ','
                        << format_double(pocs_three_lines_norm(theta, lambda));
                } else {
                    out << ',';
                }
                out << '\n';
            }
        }
    }
}

SolveResult solve_projection(SchemeKind kind, const std::vector<AffineSubspace>& subspaces,
                             std::span<const double> x0, double lambda, double epsilon,
                             std::size_t max_iters) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw Error(ErrorCode::kInvalidArgument, "lambda must be positive");
    }
    if (!(epsilon > 0.0)) throw Error(ErrorCode::kInvalidArgument, "epsilon must be positive");
    if (!all_finite(x0)) throw Error(ErrorCode::kNonFinite, "start vector is not finite");
    const AffineSubspace target = intersect_affine(subspaces);
    auto [scheme, conj] = build_affine(kind, subspaces);

    SolveResult result;
    result.algorithm = kind;
    result.lambda = lambda;
    result.anderson_duffin_answer = target.project(x0);

    // z ← L_λ z + λ b; stop once the shadow moves by at most ε/1000 for
    // ten consecutive steps (covers contraction factors up to 0.999).
    const Matrix relaxed = relax(scheme.T, lambda);
    constexpr std::size_t kQuietSteps = 10;
    const double quiet = 1e-3 * epsilon;
    Vector z = lift_start(scheme, x0);
    Vector next(z.size());
    Vector shadow = matvec(scheme.shadow, z) + conj.shadow_offset;
    std::size_t quiet_run = 0;
    std::size_t k = 0;
    while (k < max_iters) {
        apply_into(relaxed, z, next);
        for (std::size_t i = 0; i < next.size(); ++i) next[i] += lambda * conj.b[i];
        z.swap(next);
        ++k;
        Vector s = matvec(scheme.shadow, z) + conj.shadow_offset;
        if (!all_finite(s)) throw Error(ErrorCode::kNonFinite, "solve iteration diverged");
        const double step = distance(s, shadow);
        shadow = std::move(s);
        quiet_run = step <= quiet ? quiet_run + 1 : 0;
        if (quiet_run >= kQuietSteps) {
            result.converged = true;
            break;
        }
    }
    result.iterations = k;
    result.splitting_answer = shadow;
    result.distance = distance(result.splitting_answer, result.anderson_duffin_answer);
    return result;
}

void run_solve(const ExperimentConfig& config, std::ostream& out) {
    ExperimentConfig c = config;
    c.experiment = ExperimentKind::kSolve;
    if (c.basis_files.size() < 3) {
        throw Error(ErrorCode::kInvalidArgument, "solve needs at least three subspace files");
    }
    if (c.start_file.empty()) throw Error(ErrorCode::kInvalidArgument, "solve needs a start file");
    if (!c.anchor_files.empty() && c.anchor_files.size() != c.basis_files.size()) {
        throw Error(ErrorCode::kInvalidArgument, "need one anchor file per subspace file");
    }
    const Matrix start = read_matrix_file(c.start_file);
    if (start.rows() != 1 && start.cols() != 1) {
        throw Error(ErrorCode::kDimensionMismatch, "start file must hold a row or column vector");
    }
    const Vector x0 = start.data();
    std::vector<AffineSubspace> subspaces;
    for (std::size_t i = 0; i < c.basis_files.size(); ++i) {
        const Matrix m = read_matrix_file(c.basis_files[i]);
        Subspace s = c.files_are_projectors ? Subspace::from_projector(m) : from_basis(m);
        if (s.ambient_dim() != x0.size()) {
            throw Error(ErrorCode::kDimensionMismatch,
                        c.basis_files[i] + " does not match the start vector's dimension");
        }
        Vector anchor(x0.size(), 0.0);
        if (!c.anchor_files.empty()) {
            const Matrix a = read_matrix_file(c.anchor_files[i]);
            if (a.data().size() != x0.size() || (a.rows() != 1 && a.cols() != 1)) {
                throw Error(ErrorCode::kDimensionMismatch,
                            c.anchor_files[i] + " must hold a vector of the start's dimension");
            }
            anchor = a.data();
        }
        subspaces.emplace_back(std::move(s), std::move(anchor));
    }
    if (c.algorithms.empty()) throw Error(ErrorCode::kInvalidArgument, "no algorithm selected");

    out << "algorithm,lambda,iterations,converged,distance,component,splitting,anderson_duffin\n";
    for (SchemeKind kind : c.algorithms) {
        const SolveResult r = solve_projection(kind, subspaces, x0, fixed_lambda_for(c, kind),
                                               c.epsilon, c.max_iters);
        for (std::size_t j = 0; j < x0.size(); ++j) {
            out << to_string(kind) << ',' << format_double(r.lambda) << ',' << r.iterations << ','
                << (r.converged ? "true" : "false") << ',' << format_double(r.distance) << ','
                << j << ',' << format_double(r.splitting_answer[j]) << ','
                << format_double(r.anderson_duffin_answer[j]) << '\n';
        }
    }
}

void run_experiment(const ExperimentConfig& config, std::ostream& out) {
    auto dispatch = [&](std::ostream& os) {
        switch (config.experiment) {
            case ExperimentKind::kExp1: run_exp1(config, os); break;
            case ExperimentKind::kExp2: run_exp2(config, os); break;
            case ExperimentKind::kExp3: run_exp3(config, os); break;
            case ExperimentKind::kThreeLines: run_three_lines(config, os); break;
            case ExperimentKind::kSolve: run_solve(config, os); break;
        }
    };
    if (config.output_path.empty()) {
        dispatch(out);
        return;
    }
    std::ofstream f = open_output(config.output_path);
    dispatch(f);
    if (!f) throw Error(ErrorCode::kIo, "failed writing " + config.output_path);
}

}  // namespace subsplit
