#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "rydfloq/basis.hpp"
#include "rydfloq/hardware.hpp"
#include "rydfloq/propagator.hpp"

namespace rydfloq::cli {

// Bad input: the message already carries its source location.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Physics {
    int L = 16;
    Boundary bc = Boundary::periodic;
    double omega = 1.0;
    double tau = 2 * M_PI / 1.3;
    double epsilon = -0.45;
    double gamma = 1.0;
    double theta = 0.15;
};

struct Runtime {
    int n_cycles = 150;
    int samples_per_cycle = 41;
    Backend backend = Backend::automatic;
    double dt_over_w = 0.05;
    double w_over_tau = 0.046;
    double delta_mf = 0.09;
    double t_star = 15 * 2 * M_PI;
    int snapshot_stride = 10;
    int grid_points = 41;
    Integrator integrator = Integrator::cfm4;
    bool calibrate_delta_mf = true;
    bool check_convergence = true;
};

struct Output {
    std::string directory;  // empty: derived from scenario and config hash
    bool csv = true;
    bool json = true;
};

struct RunConfig {
    std::string scenario;
    Physics physics;
    Runtime runtime;
    Output output;
    long long seed = 0;
    std::map<std::string, std::vector<double>> sweep;  // parameter -> values
    nlohmann::json effective;                          // merged document after overrides
    std::vector<std::string> warnings;
};

struct ScenarioInfo {
    std::string name;
    std::string summary;
};

const std::vector<ScenarioInfo>& scenario_list();
bool is_scenario(const std::string& name);

// Scenario defaults as a config document.
nlohmann::json scenario_defaults(const std::string& name);

// Parse with key locations recorded as JSON pointers -> line numbers.
struct LocatedJson {
    nlohmann::json doc;
    std::map<std::string, int> lines;
    std::string source;
};

LocatedJson parse_located(const std::string& text, const std::string& source);
LocatedJson load_config_file(const std::filesystem::path& path);

// Apply "a.b.c=value" overrides. Values parse as JSON when possible, else as strings.
void apply_overrides(LocatedJson& cfg, const std::vector<std::string>& overrides);

// Strict schema check, scenario defaults, and conversion.
RunConfig build_config(const LocatedJson& cfg);

// Fixed-size Hilbert-space dimension without enumerating it.
std::size_t constrained_dim(int L, Boundary bc);

nlohmann::json validation_report(const RunConfig& cfg);

}  // namespace rydfloq::cli
