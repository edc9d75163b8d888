#include "nsch/config.hpp"

#include <charconv>
#include <cstdlib>
#include <sstream>
#include <vector>

#include "nsch/errors.hpp"

namespace nsch {

namespace {

std::string trim(const std::string& s) {
    const std::string ws = " \t\r\n";
    const std::size_t b = s.find_first_not_of(ws);
    if (b == std::string::npos) return {};
    const std::size_t e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

struct Binder {
    const std::map<std::string, std::string>& kv;
    std::vector<std::string> errors;
    std::map<std::string, bool> seen;

    const std::string* get(const std::string& key) {
        seen[key] = true;
        auto it = kv.find(key);
        if (it == kv.end()) return nullptr;
        if (it->second.empty()) {
            errors.push_back("missing value for key '" + key + "'");
            return nullptr;
        }
        return &it->second;
    }

    void bind(const std::string& key, double& out) {
        if (const std::string* v = get(key)) {
            const char* c = v->c_str();
            char* end = nullptr;
            const double d = std::strtod(c, &end);
            if (end == c || *end != '\0')
                errors.push_back("invalid number '" + *v + "' for key '" +
                                 key + "'");
            else
                out = d;
        }
    }

    void bind(const std::string& key, int& out) {
        if (const std::string* v = get(key)) {
            const char* c = v->c_str();
            char* end = nullptr;
            const long d = std::strtol(c, &end, 10);
            if (end == c || *end != '\0' || d < -2147483647L ||
                d > 2147483647L)
                errors.push_back("invalid integer '" + *v + "' for key '" +
                                 key + "'");
            else
                out = static_cast<int>(d);
        }
    }

    void bind(const std::string& key, std::uint64_t& out) {
        if (const std::string* v = get(key)) {
            const char* c = v->c_str();
            char* end = nullptr;
            const unsigned long long d = std::strtoull(c, &end, 10);
            if (end == c || *end != '\0')
                errors.push_back("invalid integer '" + *v + "' for key '" +
                                 key + "'");
            else
                out = d;
        }
    }

    void bind(const std::string& key, bool& out) {
        if (const std::string* v = get(key)) {
            if (*v == "true" || *v == "1")
                out = true;
            else if (*v == "false" || *v == "0")
                out = false;
            else
                errors.push_back("invalid boolean '" + *v + "' for key '" +
                                 key + "' (use true/false)");
        }
    }

    void bind(const std::string& key, ChScheme& out) {
        if (const std::string* v = get(key)) {
            if (*v == "stabilized")
                out = ChScheme::Stabilized;
            else if (*v == "explicit")
                out = ChScheme::Explicit;
            else
                errors.push_back("invalid scheme '" + *v + "' for key '" +
                                 key + "' (stabilized or explicit)");
        }
    }

    void bind(const std::string& key, IcType& out) {
        if (const std::string* v = get(key)) {
            if (*v == "random")
                out = IcType::Random;
            else if (*v == "stripe")
                out = IcType::Stripe;
            else if (*v == "disk")
                out = IcType::Disk;
            else if (*v == "constant")
                out = IcType::Constant;
            else
                errors.push_back("invalid ic type '" + *v + "' for key '" +
                                 key + "'");
        }
    }

    void bind(const std::string& key, std::vector<double>& out) {
        if (const std::string* v = get(key)) {
            std::vector<double> vals;
            std::stringstream ss(*v);
            std::string item;
            bool ok = true;
            while (std::getline(ss, item, ',')) {
                item = trim(item);
                const char* c = item.c_str();
                char* end = nullptr;
                const double d = std::strtod(c, &end);
                if (item.empty() || end == c || *end != '\0') {
                    errors.push_back("invalid list entry '" + item +
                                     "' for key '" + key + "'");
                    ok = false;
                    break;
                }
                vals.push_back(d);
            }
            if (ok) out = std::move(vals);
        }
    }
};

std::string fmt(double x) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, p);
}

}  // namespace

std::map<std::string, std::string> parse_config_text(
    const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": empty key");
        kv[key] = value;
    }
    return kv;
}

SimConfig make_sim_config(const std::map<std::string, std::string>& kv) {
    SimConfig cfg;
    Binder b{kv, {}, {}};
    b.bind("grid.nx", cfg.nx);
    b.bind("grid.ny", cfg.ny);
    b.bind("grid.lx", cfg.lx);
    b.bind("grid.ly", cfg.ly);
    b.bind("material.rho1", cfg.material.rho1);
    b.bind("material.rho2", cfg.material.rho2);
    b.bind("material.eta1", cfg.material.eta1);
    b.bind("material.eta2", cfg.material.eta2);
    b.bind("material.a0", cfg.material.a0);
    b.bind("material.a1", cfg.material.a1);
    b.bind("material.eps", cfg.material.eps);
    b.bind("time.dt", cfg.dt);
    b.bind("time.t_end", cfg.t_end);
    b.bind("ch.scheme", cfg.scheme);
    b.bind("ch.c_stab", cfg.c_stab);
    b.bind("ch.stab_s", cfg.stab_s);
    b.bind("ch.tol", cfg.ch_tol);
    b.bind("ic.type", cfg.ic_type);
    b.bind("ic.mean", cfg.ic_mean);
    b.bind("ic.amp", cfg.ic_amp);
    b.bind("ic.width", cfg.ic_width);
    b.bind("ic.radius", cfg.ic_radius);
    b.bind("ic.x0", cfg.ic_x0);
    b.bind("ic.y0", cfg.ic_y0);
    b.bind("ic.cap", cfg.ic_cap);
    b.bind("ic.seed", cfg.seed);
    b.bind("flow.enabled", cfg.flow_enabled);
    b.bind("flow.v0_amp", cfg.v0_amp);
    b.bind("flow.v0_modes", cfg.v0_modes);
    b.bind("flow.include_bj", cfg.include_bj);
    b.bind("flow.tol_visc", cfg.tol_visc);
    b.bind("flow.tol_poisson", cfg.tol_poisson);
    b.bind("sim.ns_first", cfg.ns_first);
    b.bind("sim.report_every", cfg.report_every);
    b.bind("sim.snap_every", cfg.snap_every);
    b.bind("sim.max_iter_factor", cfg.max_iter_factor);
    b.bind("sweep.eps", cfg.sweep_eps);

    for (const auto& [key, value] : kv)
        if (!b.seen.count(key))
            b.errors.push_back("unknown key '" + key + "'");
    if (!b.errors.empty()) {
        std::string msg = "configuration errors:";
        for (const std::string& e : b.errors) msg += "\n  " + e;
        throw ConfigError(msg);
    }
    return cfg;
}

std::string echo_config(const SimConfig& cfg) {
    std::ostringstream os;
    os << "grid.nx = " << cfg.nx << "\n";
    os << "grid.ny = " << cfg.ny << "\n";
    os << "grid.lx = " << fmt(cfg.lx) << "\n";
    os << "grid.ly = " << fmt(cfg.ly) << "\n";
    os << "material.rho1 = " << fmt(cfg.material.rho1) << "\n";
    os << "material.rho2 = " << fmt(cfg.material.rho2) << "\n";
    os << "material.eta1 = " << fmt(cfg.material.eta1) << "\n";
    os << "material.eta2 = " << fmt(cfg.material.eta2) << "\n";
    os << "material.a0 = " << fmt(cfg.material.a0) << "\n";
    os << "material.a1 = " << fmt(cfg.material.a1) << "\n";
    os << "material.eps = " << fmt(cfg.material.eps) << "\n";
    os << "time.dt = " << fmt(cfg.dt) << "\n";
    os << "time.t_end = " << fmt(cfg.t_end) << "\n";
    os << "ch.scheme = "
       << (cfg.scheme == ChScheme::Stabilized ? "stabilized" : "explicit")
       << "\n";
    os << "ch.c_stab = " << fmt(cfg.c_stab) << "\n";
    os << "ch.stab_s = " << fmt(cfg.stab_s) << "\n";
    os << "ch.tol = " << fmt(cfg.ch_tol) << "\n";
    const char* ic = "random";
    if (cfg.ic_type == IcType::Stripe) ic = "stripe";
    if (cfg.ic_type == IcType::Disk) ic = "disk";
    if (cfg.ic_type == IcType::Constant) ic = "constant";
    os << "ic.type = " << ic << "\n";
    os << "ic.mean = " << fmt(cfg.ic_mean) << "\n";
    os << "ic.amp = " << fmt(cfg.ic_amp) << "\n";
    os << "ic.width = " << fmt(cfg.ic_width) << "\n";
    os << "ic.radius = " << fmt(cfg.ic_radius) << "\n";
    os << "ic.x0 = " << fmt(cfg.ic_x0) << "\n";
    os << "ic.y0 = " << fmt(cfg.ic_y0) << "\n";
    os << "ic.cap = " << fmt(cfg.ic_cap) << "\n";
    os << "ic.seed = " << cfg.seed << "\n";
    os << "flow.enabled = " << (cfg.flow_enabled ? "true" : "false") << "\n";
    os << "flow.v0_amp = " << fmt(cfg.v0_amp) << "\n";
    os << "flow.v0_modes = " << cfg.v0_modes << "\n";
    os << "flow.include_bj = " << (cfg.include_bj ? "true" : "false") << "\n";
    os << "flow.tol_visc = " << fmt(cfg.tol_visc) << "\n";
    os << "flow.tol_poisson = " << fmt(cfg.tol_poisson) << "\n";
    os << "sim.ns_first = " << (cfg.ns_first ? "true" : "false") << "\n";
    os << "sim.report_every = " << cfg.report_every << "\n";
    os << "sim.snap_every = " << cfg.snap_every << "\n";
    os << "sim.max_iter_factor = " << cfg.max_iter_factor << "\n";
    if (!cfg.sweep_eps.empty()) {
        os << "sweep.eps = ";
        for (std::size_t k = 0; k < cfg.sweep_eps.size(); ++k)
            os << (k ? "," : "") << fmt(cfg.sweep_eps[k]);
        os << "\n";
    }
    return os.str();
}

}  // namespace nsch
