#include <iostream>

#include <CLI11.hpp>

#include "harness.hpp"

int main(int argc, char** argv) {
    using tgx::harness::RunConfig;

    CLI::App app{"Tensor-sequence extrapolation experiment harness"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string from_manifest;

    CLI::App* run = app.add_subcommand("run", "Run an experiment and emit a CSV trace");
    run->add_option("experiment", cfg.experiment,
                    "one of: linear1, linear2, completion, nonlinear");
    run->add_option("--method", cfg.method, "none|mpe|rre|arnoldi-mpe|arnoldi-rre")
        ->check(CLI::IsMember({"none", "mpe", "rre", "arnoldi-mpe", "arnoldi-rre"}));
    run->add_option("--width", cfg.width, "extrapolation window width (d-bar)");
    run->add_option("--skip", cfg.skip, "terms to skip before each window (n)");
    run->add_option("--max-cycles", cfg.max_cycles, "restart cycle cap");
    run->add_option("--max-iters", cfg.max_iters, "plain-iteration cap");
    run->add_option("--tol", cfg.tol, "relative-error target");
    run->add_option("--seed", cfg.seed, "instance seed");
    run->add_option("--dims", cfg.dims, "problem dimension");
    run->add_option("--rank", cfg.rank, "CP rank (completion)");
    run->add_option("--p-obs", cfg.p_obs, "observation probability (completion)");
    run->add_option("--noise", cfg.noise, "noise level (completion)");
    run->add_option("--out", cfg.out_path, "CSV output path (default: stdout)");
    run->add_option("--manifest-out", cfg.manifest_out, "write a reproduction manifest");
    run->add_option("--from-manifest", from_manifest, "load the run configuration from a manifest");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : tgx::harness::kExitUsage;
    }

    if (!from_manifest.empty()) {
        try {
            std::string out = cfg.out_path;
            std::string manifest_out = cfg.manifest_out;
            cfg = tgx::harness::from_manifest(tgx::read_manifest(from_manifest));
            cfg.out_path = out;
            cfg.manifest_out = manifest_out;
        } catch (const tgx::Error& e) {
            std::cerr << e.what() << '\n';
            return tgx::harness::kExitIo;
        }
    }
    if (cfg.experiment.empty()) {
        std::cerr << "missing experiment name (or --from-manifest)\n";
        return tgx::harness::kExitUsage;
    }
    return tgx::harness::run(cfg);
}
