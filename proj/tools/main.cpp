#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

#include "subsplit/error.hpp"
#include "subsplit/experiment.hpp"

namespace {

using subsplit::ExperimentConfig;
using subsplit::ExperimentKind;

struct CliOptions {
    std::vector<std::size_t> subspace_dims;
    std::string lambda_grid;
    std::string theta_grid;
    std::vector<std::string> algorithms;
    double lambda = 0.0;
    bool paper_scale = false;
};

std::vector<subsplit::SchemeKind> parse_algorithms(const std::vector<std::string>& names) {
    std::vector<subsplit::SchemeKind> kinds;
    for (const auto& n : names) kinds.push_back(subsplit::parse_scheme_kind(n));
    return kinds;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Splitting methods for the best approximation onto an intersection of subspaces"};
    app.set_config("--config", "", "Flat key=value file with any of the long options");
    app.require_subcommand(1);

    ExperimentConfig config;
    CliOptions cli;
    std::size_t instances_flag = 0;

    app.add_option("--seed", config.seed, "Seed for instances and starting points")
        ->capture_default_str();
    app.add_option("--dim", config.d, "Ambient dimension d")->capture_default_str();
    app.add_option("--subspace-dims", cli.subspace_dims,
                   "Subspace dimensions (default 1 + ceil(2d/3), three subspaces)")
        ->delimiter(',');
    app.add_option("--instances", instances_flag, "Number of random instances (default 100)");
    app.add_option("--starts", config.n_starts, "Number of starting points")
        ->capture_default_str();
    app.add_option("--lambda-grid", cli.lambda_grid, "Relaxation grid start:step:end");
    app.add_option("--lambda", cli.lambda, "Fixed relaxation parameter (exp3, solve)");
    app.add_option("--theta-grid", cli.theta_grid, "Angle grid start:step:end (three-lines)");
    app.add_option("--epsilon", config.epsilon, "Convergence tolerance")->capture_default_str();
    app.add_option("--max-iters", config.max_iters, "Iteration cap")->capture_default_str();
    app.add_option("--iterations", config.exp3_iterations, "Iterations recorded by exp3")
        ->capture_default_str();
    app.add_option("--algorithms", cli.algorithms, "Subset of ryu,mt,campoy,pocs")
        ->delimiter(',');
    app.add_option("--threads", config.threads, "Worker threads")->capture_default_str();
    app.add_option("--out", config.output_path, "Output CSV path (default stdout)");
    app.add_flag("--paper-scale", cli.paper_scale,
                 "Use 1000 instances for exp1 unless --instances is given");

    auto* exp1 = app.add_subcommand("exp1", "Rate bounds over a lambda grid");
    auto* exp2 = app.add_subcommand("exp2", "Iterations to convergence over a lambda grid");
    auto* exp3 = app.add_subcommand("exp3", "Distance to the limit per iteration");
    auto* lines = app.add_subcommand("three-lines", "Rate bounds for three lines in the plane");
    auto* solve = app.add_subcommand("solve", "Project a point onto an intersection from files");
    solve->add_option("--subspace", config.basis_files,
                      "Matrix file with basis columns (repeat per subspace)")
        ->required();
    solve->add_option("--anchor", config.anchor_files,
                      "Vector file with a point of the affine subspace (repeat per subspace)");
    solve->add_option("--start", config.start_file, "Vector file with the point to project")
        ->required();
    solve->add_flag("--projector", config.files_are_projectors,
                    "Read subspace files as projector matrices");
    for (auto* sub : {exp1, exp2, exp3, lines, solve}) sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        if (exp1->parsed()) config.experiment = ExperimentKind::kExp1;
        if (exp2->parsed()) config.experiment = ExperimentKind::kExp2;
        if (exp3->parsed()) config.experiment = ExperimentKind::kExp3;
        if (lines->parsed()) config.experiment = ExperimentKind::kThreeLines;
        if (solve->parsed()) config.experiment = ExperimentKind::kSolve;

        config.subspace_dims = cli.subspace_dims;
        if (instances_flag > 0) {
            config.n_instances = instances_flag;
        } else if (cli.paper_scale && config.experiment == ExperimentKind::kExp1) {
            config.n_instances = 1000;
        }
        if (!cli.lambda_grid.empty()) config.lambda_grid = subsplit::parse_grid(cli.lambda_grid);
        if (!cli.theta_grid.empty()) config.theta_grid = subsplit::parse_grid(cli.theta_grid);
        if (!cli.algorithms.empty()) config.algorithms = parse_algorithms(cli.algorithms);
        if (app.count("--lambda") > 0) {
            for (auto kind : config.algorithms) config.fixed_lambda[kind] = cli.lambda;
        }
        subsplit::run_experiment(config, std::cout);
    } catch (const subsplit::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
