#include "rissa/runspec.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include <json.hpp>

namespace rissa::cli {
namespace {

using json = nlohmann::json;

int line_at(std::string_view text, std::size_t pos) {
    pos = std::min(pos, text.size());
    return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(pos), '\n'));
}

// Best-effort source line of a JSON pointer: follows the object keys in order.
int line_of(std::string_view text, const std::string& pointer) {
    if (text.empty()) return 0;
    std::size_t pos = 0;
    bool found = false;
    std::stringstream ss(pointer);
    std::string part;
    while (std::getline(ss, part, '/')) {
        if (part.empty() || std::all_of(part.begin(), part.end(), ::isdigit)) continue;
        const auto at = text.find("\"" + part + "\"", pos);
        if (at == std::string_view::npos) break;
        pos = at;
        found = true;
    }
    return found ? line_at(text, pos) : 0;
}

using Fail = std::function<void(const std::string& pointer, const std::string& message)>;

double as_real(const json& j, const std::string& ptr, const Fail& fail) {
    if (!j.is_number()) fail(ptr, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail(ptr, "must be finite");
    return v;
}

long as_integer(const json& j, const std::string& ptr, const Fail& fail) {
    if (j.is_number_integer()) return j.get<long>();
    if (j.is_number_float()) {
        const double v = j.get<double>();
        if (std::isfinite(v) && v == std::floor(v) && std::abs(v) < 9e15) return static_cast<long>(v);
    }
    fail(ptr, "expected an integer");
    return 0;
}

std::string as_string(const json& j, const std::string& ptr, const Fail& fail) {
    if (!j.is_string()) fail(ptr, "expected a string");
    return j.get<std::string>();
}

void only_keys(const json& obj, const std::string& ptr, std::initializer_list<std::string_view> allowed,
               const Fail& fail) {
    if (!obj.is_object()) fail(ptr.empty() ? "/" : ptr, "expected an object");
    for (const auto& [key, value] : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            fail(ptr + "/" + key, "unknown key '" + key + "'");
        }
    }
}

RicianParams parse_hop(const json& j, const std::string& ptr, const Fail& fail) {
    only_keys(j, ptr, {"mu", "sigma2"}, fail);
    RicianParams h;
    if (j.contains("mu")) h.mu = as_real(j["mu"], ptr + "/mu", fail);
    if (j.contains("sigma2")) h.sigma2 = as_real(j["sigma2"], ptr + "/sigma2", fail);
    return h;
}

json hop_json(const RicianParams& h) { return {{"mu", h.mu}, {"sigma2", h.sigma2}}; }

const char* sweep_key(SweepVar v) {
    switch (v) {
        case SweepVar::p_db: return "p_db";
        case SweepVar::q_db: return "q_db";
        case SweepVar::n: return "n";
        case SweepVar::gamma_th_db: return "gamma_th_db";
    }
    return "";
}

void validate_impl(const RunSpec& s, const Fail& fail) {
    if (s.grid.empty()) fail("/sweep/grid", "sweep grid is empty");
    for (std::size_t i = 0; i < s.grid.size(); ++i) {
        const std::string ptr = "/sweep/grid/" + std::to_string(i);
        if (!std::isfinite(s.grid[i])) fail(ptr, "must be finite");
        if (s.sweep_var == SweepVar::n && (s.grid[i] < 1 || s.grid[i] != std::floor(s.grid[i]))) {
            fail(ptr, "N must be a positive integer");
        }
    }
    if (s.n < 1) fail("/n", "N must be >= 1");
    auto finite = [&](double v, const char* key) {
        if (!std::isfinite(v)) fail(std::string("/") + key, "must be finite");
    };
    finite(s.p_db, "p_db");
    finite(s.q_db, "q_db");
    finite(s.lambda_db, "lambda_db");
    finite(s.gamma_th_db, "gamma_th_db");
    finite(s.n0_db, "n0_db");
    auto hop = [&](const RicianParams& h, const char* key) {
        if (!(h.mu >= 0.0) || !std::isfinite(h.mu)) fail(std::string("/") + key + "/mu", "must be finite and >= 0");
        if (!(h.sigma2 > 0.0) || !std::isfinite(h.sigma2)) {
            fail(std::string("/") + key + "/sigma2", "must be finite and > 0");
        }
    };
    hop(s.hop1, "hop1");
    hop(s.hop2, "hop2");
    if (s.metrics.empty()) fail("/metrics", "at least one metric is required");
    if (s.modes.empty()) fail("/modes", "at least one mode is required");
    if (!(s.modulation.zeta > 0.0) || !(s.modulation.delta > 0.0) || !std::isfinite(s.modulation.zeta) ||
        !std::isfinite(s.modulation.delta)) {
        fail("/modulation", "zeta and delta must be finite and > 0");
    }
    if (s.mc.samples < 10'000) fail("/mc/samples", "at least 10000 samples are required");
    if (s.mc.batch < 1) fail("/mc/batch", "must be >= 1");
}

}  // namespace

ConfigError::ConfigError(const std::string& message, std::string field, int line)
    : Error((line > 0 ? "line " + std::to_string(line) + ": " : std::string()) +
            (field.empty() ? std::string() : field + ": ") + message),
      field_(std::move(field)),
      line_(line) {}

std::string_view to_string(SweepVar var) { return sweep_key(var); }

std::optional<SweepVar> parse_sweep_var(std::string_view name) {
    for (SweepVar v : {SweepVar::p_db, SweepVar::q_db, SweepVar::n, SweepVar::gamma_th_db}) {
        if (name == sweep_key(v)) return v;
    }
    return std::nullopt;
}

std::string_view to_string(RunMode mode) { return mode.mc ? "mc" : to_string(mode.analytic); }

std::string_view to_string(Metric metric) {
    switch (metric) {
        case Metric::outage: return "outage";
        case Metric::capacity: return "capacity";
        case Metric::ber: return "ber";
    }
    return "";
}

std::optional<Metric> parse_metric(std::string_view name) {
    for (Metric m : {Metric::outage, Metric::capacity, Metric::ber}) {
        if (name == to_string(m)) return m;
    }
    return std::nullopt;
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

RunSpec parse_runspec(std::string_view text) {
    json root;
    try {
        root = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ConfigError(e.what(), "", line_at(text, e.byte > 0 ? e.byte - 1 : 0));
    }
    const Fail fail = [&](const std::string& ptr, const std::string& msg) {
        throw ConfigError(msg, ptr, line_of(text, ptr));
    };

    only_keys(root, "",
              {"name", "assumptions", "sweep", "n", "p_db", "q_db", "lambda_db", "gamma_th_db", "n0_db", "hop1",
               "hop2", "metrics", "modes", "modulation", "mc"},
              fail);

    RunSpec s;
    if (root.contains("name")) s.name = as_string(root["name"], "/name", fail);
    if (root.contains("assumptions")) {
        const auto& a = root["assumptions"];
        if (!a.is_array()) fail("/assumptions", "expected an array of strings");
        for (std::size_t i = 0; i < a.size(); ++i) {
            s.assumptions.push_back(as_string(a[i], "/assumptions/" + std::to_string(i), fail));
        }
    }

    if (!root.contains("sweep")) fail("/sweep", "missing sweep");
    const auto& sw = root["sweep"];
    only_keys(sw, "/sweep", {"var", "grid"}, fail);
    if (!sw.contains("var")) fail("/sweep/var", "missing sweep variable");
    const auto var = parse_sweep_var(as_string(sw["var"], "/sweep/var", fail));
    if (!var) fail("/sweep/var", "sweep variable must be one of p_db, q_db, n, gamma_th_db");
    s.sweep_var = *var;
    if (!sw.contains("grid") || !sw["grid"].is_array()) fail("/sweep/grid", "expected an array");
    for (std::size_t i = 0; i < sw["grid"].size(); ++i) {
        s.grid.push_back(as_real(sw["grid"][i], "/sweep/grid/" + std::to_string(i), fail));
    }
    if (root.contains(sweep_key(s.sweep_var))) {
        fail(std::string("/") + sweep_key(s.sweep_var), "is the sweep variable and cannot also be fixed");
    }

    if (root.contains("n")) {
        const long n = as_integer(root["n"], "/n", fail);
        if (n < 1 || n > 1'000'000) fail("/n", "N must be in [1, 1e6]");
        s.n = static_cast<int>(n);
    }
    auto real = [&](const char* key, double& out) {
        if (root.contains(key)) out = as_real(root[key], std::string("/") + key, fail);
    };
    real("p_db", s.p_db);
    real("q_db", s.q_db);
    real("lambda_db", s.lambda_db);
    real("gamma_th_db", s.gamma_th_db);
    real("n0_db", s.n0_db);
    if (root.contains("hop1")) s.hop1 = parse_hop(root["hop1"], "/hop1", fail);
    if (root.contains("hop2")) s.hop2 = parse_hop(root["hop2"], "/hop2", fail);

    if (!root.contains("metrics") || !root["metrics"].is_array()) fail("/metrics", "expected an array");
    for (std::size_t i = 0; i < root["metrics"].size(); ++i) {
        const std::string ptr = "/metrics/" + std::to_string(i);
        const auto m = parse_metric(as_string(root["metrics"][i], ptr, fail));
        if (!m) fail(ptr, "metric must be one of outage, capacity, ber");
        if (std::find(s.metrics.begin(), s.metrics.end(), *m) != s.metrics.end()) fail(ptr, "duplicate metric");
        s.metrics.push_back(*m);
    }

    if (!root.contains("modes") || !root["modes"].is_array()) fail("/modes", "expected an array");
    for (std::size_t i = 0; i < root["modes"].size(); ++i) {
        const std::string ptr = "/modes/" + std::to_string(i);
        std::string name = as_string(root["modes"][i], ptr, fail);
        std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) { return std::tolower(c); });
        RunMode mode;
        if (name == "mc") {
            mode.mc = true;
        } else {
            try {
                mode.analytic = parse_mode(name);
            } catch (const DomainError&) {
                fail(ptr, "mode must be one of exact, asymptotic, asymptotic_infinite_p, oracle, mc");
            }
        }
        if (std::find(s.modes.begin(), s.modes.end(), mode) != s.modes.end()) fail(ptr, "duplicate mode");
        s.modes.push_back(mode);
    }

    if (root.contains("modulation")) {
        const auto& m = root["modulation"];
        if (m.is_string()) {
            try {
                s.modulation = modulation(m.get<std::string>());
            } catch (const DomainError& e) {
                fail("/modulation", e.what());
            }
        } else {
            only_keys(m, "/modulation", {"name", "zeta", "delta"}, fail);
            if (!m.contains("zeta") || !m.contains("delta")) fail("/modulation", "needs zeta and delta");
            s.modulation.zeta = as_real(m["zeta"], "/modulation/zeta", fail);
            s.modulation.delta = as_real(m["delta"], "/modulation/delta", fail);
            s.modulation.name = m.contains("name") ? as_string(m["name"], "/modulation/name", fail) : "custom";
        }
    }

    if (root.contains("mc")) {
        const auto& m = root["mc"];
        only_keys(m, "/mc", {"samples", "seed", "batch", "sampler"}, fail);
        if (m.contains("samples")) s.mc.samples = as_integer(m["samples"], "/mc/samples", fail);
        if (m.contains("batch")) s.mc.batch = as_integer(m["batch"], "/mc/batch", fail);
        if (m.contains("seed")) {
            const auto& seed = m["seed"];
            if (seed.is_number_unsigned()) {
                s.mc.seed = seed.get<std::uint64_t>();
            } else {
                fail("/mc/seed", "expected an unsigned 64-bit integer");
            }
        }
        if (m.contains("sampler")) {
            try {
                s.mc.sampler = mc::parse_sampler(as_string(m["sampler"], "/mc/sampler", fail));
            } catch (const DomainError&) {
                fail("/mc/sampler", "sampler must be rician or gamma");
            }
        }
    }

    validate_impl(s, fail);
    return s;
}

RunSpec load_runspec(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open '" + path + "'", "", 0);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_runspec(ss.str());
}

void validate(const RunSpec& spec) {
    validate_impl(spec, [](const std::string& ptr, const std::string& msg) { throw ConfigError(msg, ptr, 0); });
}

std::string serialize(const RunSpec& s) {
    json root = json::object();
    root["name"] = s.name;
    if (!s.assumptions.empty()) root["assumptions"] = s.assumptions;
    root["sweep"] = {{"var", sweep_key(s.sweep_var)}, {"grid", s.grid}};
    auto fixed = [&](SweepVar v, const char* key, const json& value) {
        if (s.sweep_var != v) root[key] = value;
    };
    fixed(SweepVar::n, "n", s.n);
    fixed(SweepVar::p_db, "p_db", s.p_db);
    fixed(SweepVar::q_db, "q_db", s.q_db);
    root["lambda_db"] = s.lambda_db;
    fixed(SweepVar::gamma_th_db, "gamma_th_db", s.gamma_th_db);
    root["n0_db"] = s.n0_db;
    root["hop1"] = hop_json(s.hop1);
    root["hop2"] = hop_json(s.hop2);
    json metrics = json::array();
    for (Metric m : s.metrics) metrics.push_back(std::string(to_string(m)));
    root["metrics"] = metrics;
    json modes = json::array();
    for (RunMode m : s.modes) modes.push_back(std::string(to_string(m)));
    root["modes"] = modes;
    root["modulation"] = {{"name", s.modulation.name}, {"zeta", s.modulation.zeta}, {"delta", s.modulation.delta}};
    root["mc"] = {{"samples", s.mc.samples},
                  {"seed", s.mc.seed},
                  {"batch", s.mc.batch},
                  {"sampler", std::string(mc::to_string(s.mc.sampler))}};
    return root.dump(2) + "\n";
}

SystemParams point_params(const RunSpec& spec, std::size_t i) {
    SystemParams p;
    p.n_elements = spec.n;
    p.hop1 = spec.hop1;
    p.hop2 = spec.hop2;
    p.lambda = db_to_linear(spec.lambda_db);
    p.q = db_to_linear(spec.q_db);
    p.p = db_to_linear(spec.p_db);
    p.n0 = db_to_linear(spec.n0_db);
    const double g = spec.grid.at(i);
    switch (spec.sweep_var) {
        case SweepVar::p_db: p.p = db_to_linear(g); break;
        case SweepVar::q_db: p.q = db_to_linear(g); break;
        case SweepVar::n: p.n_elements = static_cast<int>(g); break;
        case SweepVar::gamma_th_db: break;
    }
    return p;
}

double point_gamma_th(const RunSpec& spec, std::size_t i) {
    return db_to_linear(spec.sweep_var == SweepVar::gamma_th_db ? spec.grid.at(i) : spec.gamma_th_db);
}

std::vector<PlanRow> plan(const RunSpec& spec) {
    std::vector<PlanRow> rows;
    for (std::size_t i = 0; i < spec.grid.size(); ++i) {
        for (Metric m : spec.metrics) {
            for (RunMode mode : spec.modes) rows.push_back({i, spec.grid[i], m, mode});
        }
    }
    return rows;
}

}  // namespace rissa::cli
