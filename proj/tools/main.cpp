#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "conefoliate/io.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Minimal hypersurfaces near quadratic cones: spectra, foliation leaves, gluing and solves"};
    app.require_subcommand(1, 1);

    std::string config_path, config_json, output_dir;
    long long seed = 0;
    int threads = 0;
    std::map<std::string, CLI::App*> subs;
    for (const auto& name : conefoliate::subcommand_names()) {
        CLI::App* s = app.add_subcommand(name);
        auto* cfg = s->add_option("-c,--config", config_path, "JSON config file");
        s->add_option("--config-json", config_json, "inline JSON config")->excludes(cfg);
        s->add_option("-o,--output-dir", output_dir, "directory for CSV and report files");
        s->add_option("--seed", seed, "random seed");
        s->add_option("-j,--threads", threads, "worker threads")->check(CLI::Range(1, 1024));
        subs[name] = s;
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : conefoliate::kExitSchema;
    }

    std::string sub;
    for (const auto& [name, s] : subs)
        if (s->parsed()) sub = name;

    std::string text = config_json;
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) {
            std::cerr << "schema error: cannot read config file " << config_path << '\n';
            return conefoliate::kExitSchema;
        }
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }

    conefoliate::GlobalOverrides ov;
    const CLI::App* s = subs[sub];
    if (s->count("--output-dir")) ov.output_dir = output_dir;
    if (s->count("--seed")) ov.seed = seed;
    if (s->count("--threads")) ov.threads = threads;
    return conefoliate::run_command(sub, text, ov, std::cerr);
}
