// zpflab: configuration-driven experiment runner.

#include <fftw3.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

#include <CLI11.hpp>

#include "config.hpp"
#include "experiments.hpp"
#include "zpf/errors.hpp"
#include "zpf/parallel.hpp"

namespace fs = std::filesystem;
using namespace zpflab;

namespace {

constexpr const char* kVersion = ZPFLAB_VERSION;

struct Flags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    bool deterministic = false;
    unsigned threads = 0;
};

struct Failure {
    int code;
    std::string kind;
    std::string message;
};

json versions() {
    return {{"zpflab", kVersion},
            {"fftw", std::string(fftw_version)},
            {"compiler", __VERSION__},
            {"cxx", static_cast<long>(__cplusplus)}};
}

void write_report(const fs::path& dir, const json& report) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    std::ofstream out(dir / "run_report.json");
    out << report.dump(2) << "\n";
    if (!out) std::cerr << "zpflab: could not write " << (dir / "run_report.json").string() << "\n";
}

int run(const std::string& name, const Flags& flags) {
    const auto start = std::chrono::steady_clock::now();
    json report = {{"experiment", name}, {"status", "ok"}, {"exit_code", 0}, {"versions", versions()}};
    fs::path dir = flags.out.empty() ? fs::path("zpflab_out") / name : fs::path(flags.out);
    std::optional<OutputDir> out;
    std::optional<Failure> failure;
    json summary = json::object();

    try {
        const json doc = flags.config.empty() ? json::object() : read_json_file(flags.config);
        RunConfig cfg = parse_config(doc, name);
        if (flags.seed) cfg.seed = *flags.seed;
        if (flags.out.empty() && !cfg.output.empty()) dir = cfg.output;
        cfg.output = dir.string();

        Params params(cfg.parameters, "parameters");
        Job job;
        try {
            job = experiment(name).plan(params, cfg);
            params.finish();
        } catch (const zpf::ArgumentError& e) {
            throw ConfigError(e.what());
        }
        report["config"] = {{"experiment", name},
                            {"seed", cfg.seed},
                            {"output", cfg.output},
                            {"units", cfg.units},
                            {"parameters", params.echo()}};
        out.emplace(dir);
        job(*out, summary);
    } catch (const ConfigError& e) {
        failure = Failure{2, "config", e.what()};
    } catch (const zpf::ArgumentError& e) {
        failure = Failure{2, e.kind(), e.what()};
    } catch (const zpf::Error& e) {
        failure = Failure{1, e.kind(), e.what()};
    } catch (const std::exception& e) {
        failure = Failure{1, "io", e.what()};
    }

    if (failure) {
        report["status"] = "error";
        report["exit_code"] = failure->code;
        report["error"] = {{"class", failure->kind}, {"message", failure->message}};
        std::cerr << "zpflab " << name << ": " << failure->kind << " error: " << failure->message << "\n";
    }
    report["summary"] = summary;
    try {
        report["outputs"] = out ? out->manifest() : json::array();
    } catch (const std::exception& e) {
        report["outputs"] = json::array();
        std::cerr << "zpflab: manifest failed: " << e.what() << "\n";
    }
    report["deterministic"] = flags.deterministic;
    report["threads"] = zpf::thread_count();
    if (!flags.deterministic)
        report["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_report(dir, report);
    return failure ? failure->code : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"zpflab: zero-point field, filament and toroid experiments"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    Flags flags;
    std::string selected;

    auto common = [&](CLI::App* sub, const std::string& name) {
        sub->add_option("--config", flags.config, "JSON experiment config")->check(CLI::ExistingFile);
        sub->add_option("--seed", flags.seed, "seed (overrides the config)");
        sub->add_option("--out", flags.out, "output directory");
        sub->add_flag("--deterministic", flags.deterministic, "one thread unless --threads is given; no wall-clock fields in the report");
        sub->add_option("--threads", flags.threads, "worker threads (0 = hardware)");
        sub->callback([&selected, name] { selected = name; });
    };
    common(app.add_subcommand("fringe", "fourth-order fringe scan"), "fringe");
    common(app.add_subcommand("splitter", "beam-splitter interference and coalescence"), "splitter");
    common(app.add_subcommand("dipole-flux", "interference flux through a sphere around a dipole"), "dipole-flux");
    auto* fil = app.add_subcommand("filament", "self-trapped filament");
    fil->require_subcommand(1);
    common(fil->add_subcommand("solve", "stationary radial profile"), "filament-solve");
    common(fil->add_subcommand("propagate", "split-step propagation of the solved profile"), "filament-propagate");
    common(app.add_subcommand("toroid", "curvature fixed point and winding quantization"), "toroid");
    common(app.add_subcommand("planck", "mean mode energy versus temperature"), "planck");
    common(app.add_subcommand("quantum", "action quantum of monochromatic pulses"), "quantum");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    // results never depend on the thread count; --deterministic only changes the default
    zpf::set_thread_count(flags.threads ? flags.threads
                                        : (flags.deterministic ? 1u : std::thread::hardware_concurrency()));
    return run(selected, flags);
}
