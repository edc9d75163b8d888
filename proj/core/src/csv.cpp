#include "nsch/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "nsch/errors.hpp"

namespace nsch {

namespace {

void append(std::string& s, double x, bool first = false) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", x);
    if (!first) s += ',';
    s += buf;
}

double parse_field(const std::string& s, const std::string& path) {
    const char* c = s.c_str();
    char* end = nullptr;
    const double d = std::strtod(c, &end);
    if (end == c || *end != '\0')
        throw CorruptSnapshot("malformed number '" + s + "' in " + path);
    return d;
}

}  // namespace

std::string series_row(const EnergyReport& r) {
    std::string s;
    append(s, r.t, true);
    append(s, r.e_kin);
    append(s, r.e_free);
    append(s, r.e_tot);
    append(s, r.d_visc);
    append(s, r.d_flux);
    append(s, r.mass);
    append(s, r.g_eps_int);
    append(s, r.lapA_sq_cum);
    append(s, r.psi_ln_prime_sq_cum);
    append(s, r.phi_min);
    append(s, r.phi_max);
    s += "\r\n";
    return s;
}

std::string sweep_row(const SweepRow& r) {
    std::string s;
    append(s, r.summary.eps, true);
    append(s, r.summary.sup_e_tot);
    append(s, r.summary.lapA_sq_cum);
    append(s, r.summary.eps3_psiln_sq);
    append(s, r.summary.jhat_sq_cum);
    append(s, r.dist_phi_prev);
    append(s, r.dist_gradA_prev);
    s += "\r\n";
    return s;
}

std::vector<EnergyReport> read_series_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw CorruptSnapshot("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(is, line))
        throw CorruptSnapshot("'" + path + "' is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kSeriesHeader)
        throw CorruptSnapshot("unexpected header in '" + path + "'");
    std::vector<EnergyReport> rows;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> parts;
        std::stringstream ss(line);
        std::string item;
        while (std::getline(ss, item, ',')) parts.push_back(item);
        if (parts.size() != 12)
            throw CorruptSnapshot("row with " +
                                  std::to_string(parts.size()) +
                                  " fields in '" + path + "'");
        EnergyReport r;
        r.t = parse_field(parts[0], path);
        r.e_kin = parse_field(parts[1], path);
        r.e_free = parse_field(parts[2], path);
        r.e_tot = parse_field(parts[3], path);
        r.d_visc = parse_field(parts[4], path);
        r.d_flux = parse_field(parts[5], path);
        r.mass = parse_field(parts[6], path);
        r.g_eps_int = parse_field(parts[7], path);
        r.lapA_sq_cum = parse_field(parts[8], path);
        r.psi_ln_prime_sq_cum = parse_field(parts[9], path);
        r.phi_min = parse_field(parts[10], path);
        r.phi_max = parse_field(parts[11], path);
        rows.push_back(r);
    }
    return rows;
}

}  // namespace nsch
