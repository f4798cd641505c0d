// qwell.cpp
// Command-line front end: static reports, energy and time sweeps, entangled
// gain grids and Monte Carlo estimation runs, all written as CSV.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <fmt/core.h>

#include "qwell/cli.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

constexpr const char* kUnits =
    "Natural units (hbar = m = 1). Widths are in the caller's length unit, energies in 1/a^2,\n"
    "times in a^2, QFI in 1/length^2; QSNR = a^2 H is dimensionless.\n"
    "States: eigen:<n>, super:<n>:<m>:<alpha>, poly:<p>, parabolic, custom:@<file>.\n"
    "Values: comma lists of numbers or inclusive start:stop:count ranges.";

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Width estimation in an infinite square well: quantum Fisher information tables as CSV"};
    app.footer(kUnits);
    app.require_subcommand(1);
    app.fallthrough();

    std::string output;
    int truncation = 50;
    app.add_option("-o,--output", output, "Write CSV here instead of stdout");
    app.add_option("--truncation", truncation, "Energy-basis truncation N_max")->check(CLI::PositiveNumber);

    std::vector<std::string> static_states;
    std::string static_widths = "1";
    auto* st = app.add_subcommand("static", "QFI, position and energy FI, QSNR per state and width");
    st->add_option("--state", static_states, "State descriptor (repeatable)")->required();
    st->add_option("--a", static_widths, "Well widths");

    std::string energies;
    int levels = 20;
    auto* en = app.add_subcommand("energy", "Eigenstate and polynomial QSNR against mean energy (a = 1)");
    en->add_option("--energy", energies, "Energy values; default merges the first --levels family energies");
    en->add_option("--levels", levels, "Family members on the default energy axis")->check(CLI::PositiveNumber);

    std::string time_widths = "1";
    std::string times = "0:2:101";
    auto* tm = app.add_subcommand("time", "QSNR of the evolved parabolic state over widths and times");
    tm->add_option("--a", time_widths, "Well widths");
    tm->add_option("--t", times, "Evolution times");

    std::string family = "eigen";
    std::string index_range = "1:20";
    auto* ent = app.add_subcommand("entangled", "Two-particle QSNR gain grid");
    ent->add_option("--family", family, "eigen or poly");
    ent->add_option("--range", index_range, "Inclusive index range lo:hi");

    std::string mc_state = "poly:3";
    std::string mc_widths = "1";
    std::string mc_sizes = "2000";
    int replicas = 200;
    std::uint64_t seed = 0;
    auto* mc = app.add_subcommand("montecarlo", "Maximum-likelihood replicas against the Cramer-Rao bound");
    mc->add_option("--state", mc_state, "State descriptor");
    mc->add_option("--a", mc_widths, "True well widths");
    mc->add_option("--M", mc_sizes, "Outcomes per replica (comma list)");
    mc->add_option("--replicas", replicas, "Replicas per row");
    mc->add_option("--seed", seed, "Seed of the replica streams");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    std::ostringstream buffer;
    try {
        using namespace qwell::cli;
        if (st->parsed()) {
            cmd_static(buffer, static_states, parse_values(static_widths), truncation);
        } else if (en->parsed()) {
            cmd_energy(buffer, energies.empty() ? default_energy_axis(levels) : parse_values(energies));
        } else if (tm->parsed()) {
            cmd_time(buffer, parse_values(time_widths), parse_values(times), truncation);
        } else if (ent->parsed()) {
            cmd_entangled(buffer, parse_family(family), parse_index_range(index_range));
        } else if (mc->parsed()) {
            cmd_montecarlo(buffer, mc_state, parse_values(mc_widths), parse_ints(mc_sizes), replicas, seed,
                           truncation);
        }
    } catch (const qwell::cli::UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }

    if (output.empty()) {
        std::cout << buffer.str();
    } else {
        std::ofstream file(output);
        if (!file) {
            std::cerr << "error: cannot open output file '" << output << "'\n";
            return kExitRuntime;
        }
        file << buffer.str();
    }
    return 0;
}
