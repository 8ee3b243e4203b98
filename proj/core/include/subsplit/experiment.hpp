#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "subsplit/matrix.hpp"
#include "subsplit/splitting.hpp"
#include "subsplit/subspace.hpp"

namespace subsplit {

enum class ExperimentKind { kExp1, kExp2, kExp3, kThreeLines, kSolve };

/// Settings shared by every experiment. Unset grids fall back to the
/// per-experiment defaults (see default_lambda_grid).
struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::kExp1;
    std::uint64_t seed = 20220525;
    std::size_t d = 6;
    /// Empty: every subspace gets dimension 1 + ceil(2d/3).
    std::vector<std::size_t> subspace_dims;
    std::size_t n_instances = 100;
    std::size_t n_starts = 100;
    std::vector<double> lambda_grid;
    std::vector<double> theta_grid;
    double epsilon = 1e-6;
    std::size_t max_iters = 10000;
    std::size_t exp3_iterations = 150;
    std::vector<SchemeKind> algorithms{SchemeKind::kRyu, SchemeKind::kMalitskyTam,
                                       SchemeKind::kCampoy, SchemeKind::kPocs};
    /// Per-algorithm λ for exp3 and solve; missing entries use exp3_default_lambda.
    std::map<SchemeKind, double> fixed_lambda;
    std::size_t threads = 1;
    std::string output_path;

    // solve
    std::vector<std::string> basis_files;
    std::vector<std::string> anchor_files;
    std::string start_file;
    bool files_are_projectors = false;
};

/// Ryu 0.99, MT 0.97, Campoy 0.57, POCS 0.99.
double exp3_default_lambda(SchemeKind kind);

/// exp1: 0.01·k, k = 1..110; exp2: 0.01·k, k = 1..199; three-lines: 0.05·k,
/// k = 1..39; exp3/solve: empty (fixed per-algorithm λ).
std::vector<double> default_lambda_grid(ExperimentKind kind);
std::vector<double> default_theta_grid();

/// "start:step:end" inclusive; values are rounded to 12 decimals so that
/// 0.01·k lands on the decimal grid.
std::vector<double> parse_grid(const std::string& spec);

/// Resolves defaults (dims, grids) and checks invariants. Throws on invalid input.
ExperimentConfig resolve(ExperimentConfig config);

struct InstanceRecord {
    std::size_t instance_id;
    std::vector<Subspace> subspaces;
    Subspace intersection;
};

/// Stacked-nullspace intersection: kernel of Σ(Id − P_i), from the symmetric
/// eigendecomposition. Independent of the Anderson–Duffin route.
Subspace nullspace_intersection(const std::vector<Subspace>& subspaces);

/// Gaussian bases B_i ∈ ℝ^{d×d_i} from the (seed, instance) substream,
/// P_i = B_i B_i†. A draw whose ranks fall short or whose intersection
/// disagrees with the nullspace route by more than 1e-8 is redrawn once.
InstanceRecord random_instance(std::uint64_t seed, std::size_t instance_id, std::size_t d,
                               const std::vector<std::size_t>& dims);

/// Start point x0 ∈ ℝ^d from the (seed, start) substream.
Vector random_start(std::uint64_t seed, std::size_t start_id, std::size_t d);

/// (x0, …, x0) for product-space schemes, x0 for POCS.
Vector lift_start(const SplittingScheme& scheme, std::span<const double> x0);

struct Summary {
    double median = 0.0;
    double min = 0.0;
    double max = 0.0;
    std::size_t samples = 0;
};
Summary summarize(std::vector<double> values);

void run_exp1(const ExperimentConfig& config, std::ostream& out);
void run_exp2(const ExperimentConfig& config, std::ostream& out);
void run_exp3(const ExperimentConfig& config, std::ostream& out);
void run_three_lines(const ExperimentConfig& config, std::ostream& out);

struct SolveResult {
    SchemeKind algorithm;
    double lambda = 0.0;
    Vector splitting_answer;
    Vector anderson_duffin_answer;
    double distance = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
};

/// Best approximation of x0 onto the intersection by the chosen splitting
/// method, compared with the direct Anderson–Duffin projection. Affine
/// subspaces are supported through anchors (empty = linear).
SolveResult solve_projection(SchemeKind kind, const std::vector<AffineSubspace>& subspaces,
                             std::span<const double> x0, double lambda, double epsilon,
                             std::size_t max_iters);

void run_solve(const ExperimentConfig& config, std::ostream& out);

/// Dispatches on config.experiment.
void run_experiment(const ExperimentConfig& config, std::ostream& out);

}  // namespace subsplit
