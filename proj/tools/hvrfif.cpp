#include "hvrfif/cli.hpp"

#include "CLI11.hpp"

#include <map>
#include <string>

int main(int argc, char** argv) {
    CLI::App app{"Hidden-variable recurrent fractal interpolation: build, certify, solve, and render."};
    app.require_subcommand(1);

    hvrfif::Invocation inv;
    std::string config, out;
    std::uint64_t seed = 0;

    const std::map<std::string, std::string> about = {
        {"validate", "build the system and print its contraction certificate"},
        {"solve", "iterate to the fixed point and write solution.csv"},
        {"chaos", "run the chaos game and write cloud.csv"},
        {"render", "solve and write field.pgm"},
        {"verify", "solve and run every numerical check; exit 2 on failure"},
        {"example", "run a builtin example and write all outputs"}};

    for (const auto& name : hvrfif::command_names()) {
        auto* sub = app.add_subcommand(name, about.at(name));
        if (name == "example") {
            std::string help = "builtin example:";
            for (const auto& n : hvrfif::builtin_example_names()) help += " " + n;
            sub->add_option("name", inv.example, help)->required();
        } else {
            sub->add_option("--config", config, "JSON run configuration")->required();
        }
        sub->add_option("--out", out, "output directory");
        sub->add_option("--seed", seed, "seed for the chaos game and sampled checks");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : hvrfif::kExitValidation;
    }

    auto* sub = app.get_subcommands().front();
    inv.command = sub->get_name();
    if (!config.empty()) inv.config_path = config;
    if (sub->count("--out")) inv.out_dir = out;
    if (sub->count("--seed")) inv.seed = seed;
    return hvrfif::run_invocation(inv);
}
