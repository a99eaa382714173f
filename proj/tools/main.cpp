#include <CLI11.hpp>
#include <cstdint>
#include <iostream>
#include <string>

#include "pdekit/problem.hpp"

namespace {

int dispatch(const std::string& verb, const std::string& file, const std::string& out,
             std::uint64_t seed, bool has_seed) {
    using namespace pdekit;
    try {
        ProblemFile pf = parse_problem_file(file);
        RunReport rep;
        if (verb == "solve")
            rep = run_solve(pf, out);
        else if (verb == "verify")
            rep = run_verify(pf, out);
        else
            rep = run_converge(pf, out, seed, has_seed);
        std::cout << rep.message << "\n";
        for (const auto& o : rep.outputs) std::cout << "wrote " << o << "\n";
        return rep.exit_code;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 3;
    } catch (const std::domain_error& e) {
        std::cerr << "invalid problem: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pdekit: batch solver and verification front-end"};
    app.require_subcommand(1);

    std::string file, out;
    std::uint64_t seed = 0;
    bool has_seed = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("file", file, "problem definition file")->required();
        sub->add_option("--out", out, "override output path");
        sub->add_option("--seed", seed, "override RNG seed")
            ->each([&](const std::string&) { has_seed = true; });
    };
    add_common(app.add_subcommand("solve", "run a solver and write its grid"));
    add_common(app.add_subcommand("verify", "run a residual or principle check"));
    add_common(app.add_subcommand("converge", "run a parameter sweep study"));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 3;
    }
    const std::string verb = app.get_subcommands().front()->get_name();
    return dispatch(verb, file, out, seed, has_seed);
}
