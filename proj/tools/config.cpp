#include "config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "rydfloq/coherence.hpp"
#include "rydfloq/effective.hpp"

namespace rydfloq::cli {

using nlohmann::json;

namespace {

constexpr std::size_t dense_warn_dim = 5000;

// Input iterator over a string that counts the newlines it has passed, so
// parser callbacks can ask for the current line.
class LineCountingIterator {
public:
    using iterator_category = std::input_iterator_tag;
    using value_type = char;
    using difference_type = std::ptrdiff_t;
    using pointer = const char*;
    using reference = const char&;

    LineCountingIterator(const char* p, int* line) : p_(p), line_(line) {}
    reference operator*() const { return *p_; }
    LineCountingIterator& operator++()
    {
        if (*p_ == '\n') ++*line_;
        ++p_;
        return *this;
    }
    LineCountingIterator operator++(int)
    {
        auto old = *this;
        ++*this;
        return old;
    }
    bool operator==(const LineCountingIterator& o) const { return p_ == o.p_; }
    bool operator!=(const LineCountingIterator& o) const { return p_ != o.p_; }

private:
    const char* p_;
    int* line_;
};

std::string escape_pointer_token(const std::string& s)
{
    std::string out;
    for (char c : s) {
        if (c == '~') out += "~0";
        else if (c == '/') out += "~1";
        else out += c;
    }
    return out;
}

std::string dotted(const std::string& pointer)
{
    std::string out = pointer.size() > 1 ? pointer.substr(1) : pointer;
    for (char& c : out)
        if (c == '/') c = '.';
    return out;
}

class Checker {
public:
    explicit Checker(const LocatedJson& src) : src_(src) {}

    std::string where(const std::string& ptr) const
    {
        // Walk up to the closest located ancestor.
        std::string p = ptr;
        while (true) {
            auto it = src_.lines.find(p);
            if (it != src_.lines.end()) {
                if (it->second <= 0) return "--set " + dotted(p);
                return src_.source + ":" + std::to_string(it->second);
            }
            auto cut = p.find_last_of('/');
            if (cut == std::string::npos || p.empty()) break;
            p = p.substr(0, cut);
        }
        return src_.source;
    }

    [[noreturn]] void fail(const std::string& ptr, const std::string& msg) const
    {
        throw ConfigError(where(ptr) + ": " + (ptr.empty() ? "" : dotted(ptr) + ": ") + msg);
    }

    void only_keys(const json& obj, const std::string& ptr, const std::set<std::string>& allowed) const
    {
        if (!obj.is_object()) fail(ptr, "expected an object");
        for (const auto& [k, v] : obj.items()) {
            if (allowed.count(k)) continue;
            std::string known;
            for (const auto& a : allowed) known += (known.empty() ? "" : ", ") + a;
            fail(ptr + "/" + escape_pointer_token(k), "unknown field (expected one of: " + known + ")");
        }
    }

    double number(const json& v, const std::string& ptr) const
    {
        if (!v.is_number()) fail(ptr, "expected a number");
        double x = v.get<double>();
        if (!std::isfinite(x)) fail(ptr, "must be finite");
        return x;
    }

    double positive(const json& v, const std::string& ptr) const
    {
        double x = number(v, ptr);
        if (!(x > 0.0)) fail(ptr, "must be positive");
        return x;
    }

    long long integer(const json& v, const std::string& ptr, long long lo, long long hi) const
    {
        if (!v.is_number_integer()) fail(ptr, "expected an integer");
        long long x = v.get<long long>();
        if (x < lo || x > hi) fail(ptr, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
        return x;
    }

    std::string string(const json& v, const std::string& ptr) const
    {
        if (!v.is_string()) fail(ptr, "expected a string");
        return v.get<std::string>();
    }

    bool boolean(const json& v, const std::string& ptr) const
    {
        if (!v.is_boolean()) fail(ptr, "expected true or false");
        return v.get<bool>();
    }

private:
    const LocatedJson& src_;
};

std::vector<double> parse_grid(const Checker& ck, const json& v, const std::string& ptr)
{
    std::vector<double> out;
    if (v.is_array()) {
        if (v.empty()) ck.fail(ptr, "grid must not be empty");
        for (std::size_t k = 0; k < v.size(); ++k) out.push_back(ck.number(v[k], ptr + "/" + std::to_string(k)));
        return out;
    }
    ck.only_keys(v, ptr, {"start", "stop", "points"});
    for (const char* req : {"start", "stop", "points"})
        if (!v.contains(req)) ck.fail(ptr, std::string("range needs '") + req + "'");
    double a = ck.number(v["start"], ptr + "/start"), b = ck.number(v["stop"], ptr + "/stop");
    long long n = ck.integer(v["points"], ptr + "/points", 1, 10000);
    for (long long k = 0; k < n; ++k) out.push_back(n == 1 ? a : a + (b - a) * k / (n - 1));
    return out;
}

bool needs_even(const std::string& s)
{
    return s == "fig2-entanglement" || s == "figS2-gamma-sweep" || s == "figS3-distances" || s == "fig3a-domainwall";
}

bool needs_periodic(const std::string& s)
{
    return s == "fig3a-domainwall" || s == "figS3-distances" || s == "fig4-hardware" || s == "figS4-coherence-sweep";
}

std::set<std::string> sweep_keys(const std::string& s)
{
    if (s == "figS2-gamma-sweep") return {"gamma"};
    if (s == "figS4-coherence-sweep") return {"tau", "epsilon"};
    return {};
}

}  // namespace

const std::vector<ScenarioInfo>& scenario_list()
{
    static const std::vector<ScenarioInfo> list = {
        {"fig2-entanglement", "stroboscopic run from |Z2>: density, staggered order, GHZ fidelity, QFI, zz correlations"},
        {"fig1b-micromotion", "Rydberg density within drive cycles together with stroboscopic samples"},
        {"fig3a-domainwall", "two-domain-wall band, resonance window and exact check of the pair sector"},
        {"fig3c-phase-diagram", "Bethe-ansatz Luttinger parameter K and J/h against filling"},
        {"figS2-gamma-sweep", "gamma grid: Z2 populations, QFI and staggered order per point"},
        {"figS3-distances", "distance distribution of domain-wall pairs during the stroboscopic run"},
        {"fig4-hardware", "single-excitation walk: van der Waals model with Gaussian pulses against delta-pulse PXP"},
        {"figS4-coherence-sweep", "coherence time fits over a (tau, |epsilon|) grid for the pure-hopping drive"},
        {"effective-report", "closed-form (J, h, g) with Floquet-Magnus diagnostics against the exact Floquet unitary"},
    };
    return list;
}

bool is_scenario(const std::string& name)
{
    for (const auto& s : scenario_list())
        if (s.name == name) return true;
    return false;
}

json scenario_defaults(const std::string& name)
{
    json d = {{"physics",
               {{"L", 16}, {"bc", "pbc"}, {"omega", 1.0}, {"tau", 2 * M_PI / 1.3}, {"epsilon", -0.45},
                {"gamma", 1.0}, {"theta", 0.15}}},
              {"runtime",
               {{"n_cycles", 150}, {"samples_per_cycle", 41}, {"backend", "auto"}, {"dt_over_w", 0.05},
                {"w_over_tau", 0.046}, {"delta_mf", 0.09}, {"t_star", "default"}, {"snapshot_stride", 10},
                {"grid_points", 41}, {"integrator", "cfm4"}, {"calibrate_delta_mf", true},
                {"check_convergence", true}}},
              {"output", {{"formats", {"csv", "json"}}}},
              {"seed", 0}};
    if (name == "fig1b-micromotion") d["runtime"]["n_cycles"] = 3;
    if (name == "fig3a-domainwall") d["runtime"]["grid_points"] = 201;
    if (name == "fig3c-phase-diagram") d["runtime"]["grid_points"] = 101;
    if (name == "figS2-gamma-sweep") d["sweep"] = {{"gamma", {{"start", 0.5}, {"stop", 1.5}, {"points", 11}}}};
    if (name == "fig4-hardware") {
        d["physics"]["L"] = 12;
        d["physics"]["epsilon"] = 0.45;
        d["physics"]["gamma"] = -0.9;
        d["physics"]["theta"] = -0.45;
        d["runtime"]["n_cycles"] = 30;
    }
    if (name == "figS4-coherence-sweep") {
        d["physics"]["epsilon"] = -0.45;
        d["physics"]["gamma"] = 0.9;
        d["physics"]["theta"] = 0.45;
        d["sweep"] = {{"tau", {{"start", 2.0}, {"stop", 6.0}, {"points", 8}}},
                      {"epsilon", {{"start", 0.1}, {"stop", 0.6}, {"points", 8}}}};
    }
    if (name == "effective-report") {
        d["physics"]["L"] = 8;
        d["runtime"]["backend"] = "dense";
    }
    return d;
}

LocatedJson parse_located(const std::string& text, const std::string& source)
{
    LocatedJson out;
    out.source = source;
    int line = 1;
    struct Frame {
        bool array;
        std::string key;
        long index = -1;
    };
    std::vector<Frame> stack;
    auto pointer = [&stack] {
        std::string p;
        for (const auto& f : stack) p += "/" + (f.array ? std::to_string(f.index) : escape_pointer_token(f.key));
        return p;
    };
    auto bump = [&stack] {
        if (!stack.empty() && stack.back().array) ++stack.back().index;
    };
    json::parser_callback_t cb = [&](int, json::parse_event_t ev, json& parsed) {
        switch (ev) {
        case json::parse_event_t::object_start:
        case json::parse_event_t::array_start:
            bump();
            stack.push_back({ev == json::parse_event_t::array_start, {}, -1});
            if (stack.size() == 1 || !stack[stack.size() - 2].array) break;
            out.lines.emplace(pointer().substr(0, pointer().find_last_of('/')), line);
            break;
        case json::parse_event_t::object_end:
        case json::parse_event_t::array_end:
            stack.pop_back();
            break;
        case json::parse_event_t::key:
            stack.back().key = parsed.get<std::string>();
            out.lines[pointer()] = line;
            break;
        case json::parse_event_t::value:
            bump();
            if (!stack.empty() && stack.back().array) out.lines.emplace(pointer(), line);
            break;
        }
        return true;
    };
    const char* b = text.data();
    try {
        out.doc = json::parse(LineCountingIterator(b, &line), LineCountingIterator(b + text.size(), &line), cb);
    } catch (const json::parse_error& e) {
        std::string what = e.what();
        auto at = what.find("syntax error");
        throw ConfigError(source + ":" + std::to_string(line) + ": " +
                          (at == std::string::npos ? what : what.substr(at)));
    }
    if (!out.doc.is_object()) throw ConfigError(source + ":1: top level must be a JSON object");
    return out;
}

LocatedJson load_config_file(const std::filesystem::path& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError(path.string() + ": cannot open config file");
    std::stringstream ss;
    ss << f.rdbuf();
    if (ss.str().find_first_not_of(" \t\r\n") == std::string::npos)
        throw ConfigError(path.string() + ": config file is empty");
    return parse_located(ss.str(), path.string());
}

void apply_overrides(LocatedJson& cfg, const std::vector<std::string>& overrides)
{
    for (const auto& o : overrides) {
        auto eq = o.find('=');
        if (eq == std::string::npos || eq == 0) throw ConfigError("--set " + o + ": expected key=value");
        std::string key = o.substr(0, eq), raw = o.substr(eq + 1);
        json value;
        try {
            value = json::parse(raw);
        } catch (const json::parse_error&) {
            value = raw;
        }
        std::string ptr;
        std::stringstream ks(key);
        for (std::string part; std::getline(ks, part, '.');) {
            if (part.empty()) throw ConfigError("--set " + o + ": empty path component");
            ptr += "/" + escape_pointer_token(part);
        }
        cfg.doc[json::json_pointer(ptr)] = value;
        // Line 0 marks a command-line origin.
        cfg.lines[ptr] = 0;
    }
}

std::size_t constrained_dim(int L, Boundary bc)
{
    // Open chains: Fibonacci F(L+2). Rings: Lucas L_L.
    std::vector<std::size_t> f = {0, 1};
    for (int k = 2; k <= L + 2; ++k) f.push_back(f[k - 1] + f[k - 2]);
    if (bc == Boundary::open) return f[L + 2];
    return f[L - 1] + f[L + 1];
}

RunConfig build_config(const LocatedJson& src)
{
    Checker ck(src);
    const json& file = src.doc;
    ck.only_keys(file, "", {"scenario", "physics", "runtime", "output", "seed", "sweep"});
    if (!file.contains("scenario")) ck.fail("", "missing required field 'scenario'");
    RunConfig cfg;
    cfg.scenario = ck.string(file["scenario"], "/scenario");
    if (!is_scenario(cfg.scenario)) ck.fail("/scenario", "unknown scenario '" + cfg.scenario + "' (see list-scenarios)");

    if (file.contains("physics"))
        ck.only_keys(file["physics"], "/physics", {"L", "bc", "omega", "tau", "epsilon", "gamma", "theta"});
    if (file.contains("runtime"))
        ck.only_keys(file["runtime"], "/runtime",
                     {"n_cycles", "samples_per_cycle", "backend", "dt_over_w", "w_over_tau", "delta_mf", "t_star",
                      "snapshot_stride", "grid_points", "integrator", "calibrate_delta_mf", "check_convergence"});
    if (file.contains("output")) ck.only_keys(file["output"], "/output", {"directory", "formats"});
    auto allowed_sweeps = sweep_keys(cfg.scenario);
    if (file.contains("sweep")) {
        if (allowed_sweeps.empty()) ck.fail("/sweep", "scenario '" + cfg.scenario + "' takes no sweep");
        ck.only_keys(file["sweep"], "/sweep", allowed_sweeps);
    }

    json merged = scenario_defaults(cfg.scenario);
    merged.merge_patch(file);
    if (file.contains("sweep") && merged.contains("sweep")) merged["sweep"] = file["sweep"];
    // merge_patch drops nulls; a null anywhere in the file is therefore an error.
    for (const auto& [ptr, line] : src.lines) {
        (void)line;
        auto p = json::json_pointer(ptr);
        if (file.contains(p) && file[p].is_null()) ck.fail(ptr, "null is not a valid value");
    }
    cfg.effective = merged;

    const json& ph = merged["physics"];
    cfg.physics.L = static_cast<int>(ck.integer(ph["L"], "/physics/L", 2, max_sites));
    try {
        cfg.physics.bc = boundary_from_string(ck.string(ph["bc"], "/physics/bc"));
    } catch (const std::invalid_argument& e) {
        ck.fail("/physics/bc", e.what());
    }
    cfg.physics.omega = ck.positive(ph["omega"], "/physics/omega");
    cfg.physics.tau = ck.positive(ph["tau"], "/physics/tau");
    cfg.physics.epsilon = ck.number(ph["epsilon"], "/physics/epsilon");
    cfg.physics.gamma = ck.number(ph["gamma"], "/physics/gamma");
    cfg.physics.theta = ck.number(ph["theta"], "/physics/theta");

    const json& rt = merged["runtime"];
    auto& r = cfg.runtime;
    r.n_cycles = static_cast<int>(ck.integer(rt["n_cycles"], "/runtime/n_cycles", 1, 1000000));
    r.samples_per_cycle = static_cast<int>(ck.integer(rt["samples_per_cycle"], "/runtime/samples_per_cycle", 2, 100000));
    try {
        r.backend = backend_from_string(ck.string(rt["backend"], "/runtime/backend"));
    } catch (const std::invalid_argument& e) {
        ck.fail("/runtime/backend", e.what());
    }
    r.dt_over_w = ck.positive(rt["dt_over_w"], "/runtime/dt_over_w");
    if (r.dt_over_w > 0.05) ck.fail("/runtime/dt_over_w", "must be at most 0.05 (20 points per pulse width)");
    r.w_over_tau = ck.positive(rt["w_over_tau"], "/runtime/w_over_tau");
    r.delta_mf = ck.number(rt["delta_mf"], "/runtime/delta_mf");
    if (rt["t_star"].is_string()) {
        std::string ts = rt["t_star"].get<std::string>();
        if (ts == "default") r.t_star = default_t_star;
        else if (ts == "alternative") r.t_star = alternative_t_star;
        else ck.fail("/runtime/t_star", "expected a positive number, \"default\" or \"alternative\"");
    } else {
        r.t_star = ck.positive(rt["t_star"], "/runtime/t_star");
    }
    r.snapshot_stride = static_cast<int>(ck.integer(rt["snapshot_stride"], "/runtime/snapshot_stride", 0, 1000000));
    r.grid_points = static_cast<int>(ck.integer(rt["grid_points"], "/runtime/grid_points", 2, 100000));
    try {
        r.integrator = integrator_from_string(ck.string(rt["integrator"], "/runtime/integrator"));
    } catch (const std::invalid_argument& e) {
        ck.fail("/runtime/integrator", e.what());
    }
    r.calibrate_delta_mf = ck.boolean(rt["calibrate_delta_mf"], "/runtime/calibrate_delta_mf");
    r.check_convergence = ck.boolean(rt["check_convergence"], "/runtime/check_convergence");

    const json& out = merged["output"];
    if (out.contains("directory")) cfg.output.directory = ck.string(out["directory"], "/output/directory");
    if (!out["formats"].is_array() || out["formats"].empty()) ck.fail("/output/formats", "expected a nonempty array");
    cfg.output.csv = cfg.output.json = false;
    for (std::size_t k = 0; k < out["formats"].size(); ++k) {
        std::string ptr = "/output/formats/" + std::to_string(k);
        std::string f = ck.string(out["formats"][k], ptr);
        if (f == "csv") cfg.output.csv = true;
        else if (f == "json") cfg.output.json = true;
        else ck.fail(ptr, "unknown format '" + f + "' (csv, json)");
    }
    cfg.seed = ck.integer(merged["seed"], "/seed", std::numeric_limits<long long>::min(),
                          std::numeric_limits<long long>::max());

    if (merged.contains("sweep"))
        for (const auto& [k, v] : merged["sweep"].items()) cfg.sweep[k] = parse_grid(ck, v, "/sweep/" + k);

    // Scenario-specific constraints.
    const auto& p = cfg.physics;
    if (needs_even(cfg.scenario) && p.L % 2) ck.fail("/physics/L", "scenario needs an even chain length");
    if (needs_periodic(cfg.scenario) && p.bc != Boundary::periodic)
        ck.fail("/physics/bc", "scenario needs periodic boundaries");
    if (cfg.scenario == "fig3a-domainwall" && p.L < 6) ck.fail("/physics/L", "pair sector needs L >= 6");
    if (cfg.scenario == "fig4-hardware") {
        if (p.L > max_full_space_sites)
            ck.fail("/physics/L", "full-space model needs L <= " + std::to_string(max_full_space_sites));
        if (std::abs(p.gamma + 2 * p.epsilon) > 1e-12 || std::abs(p.theta + p.epsilon) > 1e-12)
            cfg.warnings.push_back("gamma and theta are set from epsilon (-2 eps = gamma = 2 theta); given values ignored");
    }
    if (cfg.scenario == "figS4-coherence-sweep") {
        if (std::abs(p.gamma + 2 * p.epsilon) > 1e-12 || std::abs(p.theta + p.epsilon) > 1e-12)
            cfg.warnings.push_back("the sweep uses -2 eps = gamma = 2 theta; physics.gamma and physics.theta are ignored");
        for (double t : cfg.sweep["tau"])
            if (!(p.omega * t < 2 * M_PI) || t <= 0) ck.fail("/sweep/tau", "every tau needs 0 < omega tau < 2 pi");
    }
    if (cfg.scenario == "figS2-gamma-sweep" && !cfg.sweep.count("gamma")) ck.fail("/sweep", "needs a gamma grid");

    // Resource guards.
    std::size_t dim = constrained_dim(p.L, p.bc);
    if (r.backend == Backend::dense_eigen && dim > dense_warn_dim) {
        std::ostringstream os;
        os << "dense backend at L=" << p.L << " (dim " << dim << ") needs about "
           << 3.0 * 16 * double(dim) * double(dim) / 1e9 << " GB; switching to krylov";
        cfg.warnings.push_back(os.str());
        r.backend = Backend::krylov;
    }
    if (cfg.scenario == "effective-report" && dim > 2000)
        ck.fail("/physics/L", "the Magnus report builds dense operators; use L <= 14");
    for (const auto& w : closed_form_coefficients(p.omega, p.tau, p.epsilon, p.gamma, p.theta).warnings)
        cfg.warnings.push_back(w);
    return cfg;
}

json validation_report(const RunConfig& cfg)
{
    const auto& p = cfg.physics;
    const auto& r = cfg.runtime;
    json rep;
    rep["scenario"] = cfg.scenario;
    rep["parsed"] = cfg.effective;
    rep["parsed"]["runtime"]["backend"] = to_string(r.backend);
    rep["parsed"]["runtime"]["t_star"] = r.t_star;
    for (const auto& [k, v] : cfg.sweep) rep["sweep_points"][k] = v;

    std::size_t dim = constrained_dim(p.L, p.bc);
    rep["dim"] = dim;
    auto c = closed_form_coefficients(p.omega, p.tau, p.epsilon, p.gamma, p.theta);
    rep["predicted"] = {{"J", c.J}, {"h", c.h}, {"g", c.g}};

    // Rough peak memory: state vectors plus the generator, or the dense
    // eigendecomposition when that backend is used.
    double bytes = 0.0;
    const double d = static_cast<double>(dim);
    bool dense = r.backend == Backend::dense_eigen || (r.backend == Backend::automatic && dim <= dense_auto_limit);
    if (cfg.scenario == "effective-report") dense = true;
    if (dense) bytes = 4 * 16 * d * d;
    else bytes = 60 * 16 * d + 20 * d * (p.L + 1);
    if (cfg.scenario == "fig2-entanglement") bytes += 8 * double(p.L) * p.L * (r.n_cycles / std::max(1, r.snapshot_stride) + 1);
    if (cfg.scenario == "fig4-hardware") {
        double full = std::ldexp(1.0, p.L);
        bytes += 60 * 16 * full + 20 * full * (p.L + 1) + 16 * full * (r.n_cycles + 1) * 2;
    }
    if (cfg.scenario == "fig3a-domainwall") {
        double m = std::pow(p.L / 2.0, 2);
        bytes += 3 * 16 * m * m;
    }
    rep["memory_estimate_bytes"] = bytes;
    rep["warnings"] = cfg.warnings;

    if (!cfg.sweep.empty()) {
        // Expanded per-point physics blocks.
        json points = json::array();
        if (cfg.sweep.count("gamma")) {
            for (double g : cfg.sweep.at("gamma")) {
                auto cc = closed_form_coefficients(p.omega, p.tau, p.epsilon, g, p.theta);
                json pt = cfg.effective["physics"];
                pt["gamma"] = g;
                points.push_back({{"physics", pt}, {"predicted", {{"J", cc.J}, {"h", cc.h}, {"g", cc.g}}}});
            }
        } else {
            for (double t : cfg.sweep.at("tau"))
                for (double e : cfg.sweep.at("epsilon")) {
                    double eps = -std::abs(e);
                    auto cc = closed_form_coefficients(p.omega, t, eps, -2 * eps, -eps);
                    json pt = cfg.effective["physics"];
                    pt["tau"] = t;
                    pt["epsilon"] = eps;
                    pt["gamma"] = -2 * eps;
                    pt["theta"] = -eps;
                    points.push_back({{"physics", pt}, {"predicted", {{"J", cc.J}, {"h", cc.h}, {"g", cc.g}}}});
                }
        }
        rep["expanded"] = points;
    }
    return rep;
}

}  // namespace rydfloq::cli
