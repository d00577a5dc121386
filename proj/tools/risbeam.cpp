// SPDX-License-Identifier: Apache-2.0
#include "risbeam/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    using namespace risbeam;
    CLI::App app{"RIS channel modelling and reflective beam design"};
    app.set_version_flag("--version", kVersion);
    RunConfig rc;
    std::string cmds;
    for (const auto& c : subcommands()) cmds += (cmds.empty() ? "" : ", ") + c;
    app.add_option("subcommand", rc.subcommand, "one of: " + cmds)->required();
    app.add_option("--config", rc.config_path, "scenario JSON file")->required();
    app.add_option("--out", rc.out_dir, "output directory (created if missing)");
    app.add_option("--seed", rc.seed, "base RNG seed; overrides the config");
    app.add_option("--workers", rc.workers, "worker threads for independent trials")->check(CLI::PositiveNumber);
    app.add_flag("--verbose", rc.verbose, "log progress to stderr");
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "risbeam: error[usage]: " << e.what() << '\n';
        return static_cast<int>(ExitCode::Usage);
    }
    return dispatch(rc, std::cout, std::cerr);
}
