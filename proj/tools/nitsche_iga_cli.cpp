// nitsche-iga: command-line front end over the C interface.

#include "nitsche_iga/nitsche_iga.h"

#include <CLI11.hpp>

#include <cstdio>
#include <string>

namespace {

int report_failure(niga_status s) {
    std::fprintf(stderr, "nitsche-iga: error [%s]: %s\n", niga_status_string(s), niga_last_error());
    return niga_exit_code(s);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Space-time Nitsche isogeometric solver for parabolic problems", "nitsche-iga"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(niga_version()));

    std::string config_path;
    std::string out_dir;
    int threads = 0;

    for (const char* name : {"solve", "convergence", "calibrate"}) {
        const char* help = std::string(name) == "solve"         ? "Run one simulation on the finest level"
                           : std::string(name) == "convergence" ? "Run all levels and fit the error slope"
                                                                : "Penalty floor and coercivity audits";
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_path, "Configuration file")->required();
        sub->add_option("--out", out_dir, "Output directory (overrides the config)");
        sub->add_option("--threads", threads, "Worker threads (overrides the config)")->check(CLI::PositiveNumber);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    const std::string command = app.get_subcommands().front()->get_name();

    niga_config* cfg = nullptr;
    if (niga_status s = niga_config_load(config_path.c_str(), &cfg); s != NIGA_OK) return report_failure(s);
    if (niga_status s = niga_config_validate(cfg); s != NIGA_OK) {
        niga_config_destroy(cfg);
        return report_failure(s);
    }

    niga_report* report = nullptr;
    const niga_status s = niga_run(command.c_str(), cfg, out_dir.empty() ? nullptr : out_dir.c_str(), threads, &report);
    niga_config_destroy(cfg);
    if (s != NIGA_OK) return report_failure(s);
    std::fputs(niga_report_text(report), stdout);
    niga_report_destroy(report);
    return 0;
}
