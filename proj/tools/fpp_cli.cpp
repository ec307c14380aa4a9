#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "fpp/experiment.hpp"

namespace {

int run(const std::string& command, const std::string& config_path, const std::string& out_dir, unsigned threads) {
    std::ifstream in(config_path, std::ios::binary);
    if (!in) {
        std::cerr << "fpp: cannot read config " << config_path << "\n";
        return fpp::exit_codes::config;
    }
    std::stringstream text;
    text << in.rdbuf();

    fpp::ExperimentConfig config;
    try {
        config = fpp::parse_config(text.str());
    } catch (const fpp::config_error& e) {
        std::cerr << "fpp: " << e.what() << "\n";
        return fpp::exit_codes::config;
    }
    if (command != fpp::to_string(config.experiment)) {
        std::cerr << "fpp: subcommand '" << command << "' does not match config experiment '"
                  << fpp::to_string(config.experiment) << "'\n";
        return fpp::exit_codes::config;
    }

    const auto result = fpp::run_experiment(config, threads);
    try {
        fpp::write_outputs(result, out_dir);
    } catch (const std::exception& e) {
        std::cerr << "fpp: cannot write outputs: " << e.what() << "\n";
        return fpp::exit_codes::resource;
    }
    for (const auto& error : result.summary["errors"]) std::cerr << "fpp: " << error["message"].get<std::string>() << "\n";
    return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"First-passage percolation experiments"};
    app.set_version_flag("--version", std::string(fpp::tool_version));
    app.require_subcommand(1);

    std::string config_path, out_dir;
    unsigned threads = 1;
    for (const char* name : {"simulate", "verify", "p2p-variance", "random-regular", "oracle-check"}) {
        auto* sub = app.add_subcommand(name, std::string("run a ") + name + " experiment");
        sub->add_option("--config", config_path, "experiment config (JSON)")->required();
        sub->add_option("--out-dir", out_dir, "directory for samples.csv and summary.json")->required();
        sub->add_option("--threads", threads, "worker threads")->check(CLI::Range(1u, 1024u));
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : fpp::exit_codes::config;
    }
    return run(app.get_subcommands().front()->get_name(), config_path, out_dir, threads);
}
