#include <Eigen/Core>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "config.hpp"
#include "scenarios.hpp"

#ifndef RYDFLOQ_VERSION
#define RYDFLOQ_VERSION "0.0.0"
#endif

using namespace rydfloq::cli;
using nlohmann::json;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_runtime = 1;
constexpr int exit_usage = 2;
constexpr const char* output_root_env = "RYDFLOQ_OUTPUT_ROOT";

json versions()
{
    auto v = [](int a, int b, int c) {
        return std::to_string(a) + "." + std::to_string(b) + "." + std::to_string(c);
    };
    return {{"rydfloq", RYDFLOQ_VERSION},
            {"eigen", v(EIGEN_WORLD_VERSION, EIGEN_MAJOR_VERSION, EIGEN_MINOR_VERSION)},
            {"nlohmann_json", v(NLOHMANN_JSON_VERSION_MAJOR, NLOHMANN_JSON_VERSION_MINOR, NLOHMANN_JSON_VERSION_PATCH)},
            {"cli11", CLI11_VERSION},
            {"compiler", __VERSION__}};
}

// FNV-1a, stable across platforms, for default run directory names.
std::string short_hash(const std::string& s)
{
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf).substr(0, 10);
}

std::string utc_now()
{
    std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

RunConfig load(const std::string& path, const std::vector<std::string>& overrides)
{
    LocatedJson src = load_config_file(path);
    apply_overrides(src, overrides);
    return build_config(src);
}

int cmd_validate(const std::string& path, const std::vector<std::string>& overrides)
{
    RunConfig cfg = load(path, overrides);
    json rep = validation_report(cfg);
    std::cout << rep.dump(2) << '\n';
    for (const auto& w : cfg.warnings) std::cerr << "warning: " << w << '\n';
    return exit_ok;
}

int cmd_run(const std::string& path, const std::vector<std::string>& overrides, const std::string& root_flag)
{
    RunConfig cfg = load(path, overrides);
    for (const auto& w : cfg.warnings) std::cerr << "warning: " << w << '\n';

    std::filesystem::path root = "runs";
    if (const char* env = std::getenv(output_root_env); env && *env) root = env;
    if (!root_flag.empty()) root = root_flag;
    std::string name = cfg.output.directory.empty() ? cfg.scenario + "-" + short_hash(cfg.effective.dump())
                                                    : cfg.output.directory;
    std::filesystem::path dir = root / name;

    json manifest = {{"scenario", cfg.scenario},
                     {"config", cfg.effective},
                     {"config_file", path},
                     {"overrides", overrides},
                     {"versions", versions()},
                     {"started_at", utc_now()},
                     {"warnings", cfg.warnings}};
    auto write_manifest = [&](const RunOutput* out) {
        std::filesystem::create_directories(dir);
        if (out) manifest["files"] = out->files();
        std::ofstream f(dir / "manifest.json", std::ios::binary);
        f << manifest.dump(2) << '\n';
        if (!f) throw std::runtime_error("cannot write manifest in " + dir.string());
    };

    const auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); };
    std::unique_ptr<RunOutput> out;
    try {
        out = std::make_unique<RunOutput>(dir, cfg.output);
        run_scenario(cfg, *out);
    } catch (const std::exception& e) {
        manifest["status"] = "failed";
        manifest["error"] = e.what();
        manifest["partial"] = out && !out->files().empty();
        manifest["wall_time_seconds"] = elapsed();
        try {
            write_manifest(out.get());
        } catch (const std::exception& m) {
            std::cerr << "error: " << m.what() << '\n';
        }
        std::cerr << "error: " << e.what() << '\n';
        return exit_runtime;
    }
    manifest["status"] = "ok";
    manifest["partial"] = false;
    manifest["wall_time_seconds"] = elapsed();
    manifest["summary"] = out->summary;
    write_manifest(out.get());
    std::cout << dir.string() << '\n';
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Floquet-engineered Rydberg chain simulator"};
    app.set_version_flag("--version", std::string(RYDFLOQ_VERSION));
    app.require_subcommand(1);

    std::string config_path, output_root;
    std::vector<std::string> overrides;

    auto* run = app.add_subcommand("run", "Run the scenario named in a config file");
    run->add_option("config", config_path, "JSON config file")->required();
    run->add_option("--set", overrides, "Override a config field, e.g. --set physics.L=12 (repeatable)");
    run->add_option("--output-root", output_root,
                    std::string("Directory that receives run folders (default: $") + output_root_env + " or ./runs)");

    auto* validate = app.add_subcommand("validate", "Check a config and report derived quantities");
    validate->add_option("config", config_path, "JSON config file")->required();
    validate->add_option("--set", overrides, "Override a config field (repeatable)");

    auto* list = app.add_subcommand("list-scenarios", "Print the available scenarios");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    try {
        if (list->parsed()) {
            for (const auto& s : scenario_list()) std::cout << s.name << "\t" << s.summary << '\n';
            return exit_ok;
        }
        if (validate->parsed()) return cmd_validate(config_path, overrides);
        return cmd_run(config_path, overrides, output_root);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_runtime;
    }
}
