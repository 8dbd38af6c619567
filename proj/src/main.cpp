#include "fracmono/runner.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <optional>
#include <string>

int main(int argc, char** argv) {
    CLI::App app{"fracmono: monotonicity-based inversion of the fractional "
                 "Schroedinger equation in one dimension"};
    app.require_subcommand(1);

    fracmono::RunOptions opts;
    std::optional<std::uint64_t> seed;
    std::string mode_override;

    struct Sub {
        const char* name;
        const char* desc;
    };
    constexpr Sub subs[] = {
        {"verify", "run the randomized order, inequality and doubling property suites"},
        {"forward", "solve the exterior-value problem for the scenario potential"},
        {"dtn", "assemble and export the measurement matrix (order verdict for pairs)"},
        {"recon-potential", "per-pixel sup reconstruction of the potential"},
        {"recon-shape", "support of q1 - q0 from the difference of measurement maps"},
        {"localize", "exterior data concentrating solution energy on an interior mask"},
    };
    for (const auto& s : subs) {
        CLI::App* sub = app.add_subcommand(s.name, s.desc);
        sub->add_option("--scenario", opts.scenario_path, "scenario JSON file")->required();
        sub->add_option("--out", opts.out_dir,
                        "output directory (default: the scenario's output_dir)");
        sub->add_option("--seed", seed, "override the scenario seed for randomized trials");
        sub->add_option("--threads", opts.threads, "worker threads for per-pixel sweeps");
        if (std::string(s.name) == "recon-shape")
            sub->add_option("--mode", mode_override,
                            "indefinite | definite (overrides the scenario)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    opts.command = app.get_subcommands().front()->get_name();
    opts.seed = seed;
    opts.mode_override = mode_override;
    return fracmono::run_command(opts);
}
