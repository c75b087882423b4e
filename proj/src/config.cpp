// config.cpp
#include "upb/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace upb::cli {

namespace {

// Frequency-valued keys: accept "<key> = <num>k" (kappa units) or
// "<key>_hz = <num>" (SI, needs kappa_hz).
const std::set<std::string>& frequency_keys() {
    static const std::set<std::string> keys = {
        "omega_m", "delta_l", "delta_c", "eps_l",  "gamma_spin", "gamma_m",
        "g",       "g0",      "lambda",  "G",      "G0",         "Lambda",
        "kappa_a", "g_lin",   "gamma_m0"};
    return keys;
}

const std::set<std::string>& plain_keys() {
    static const std::set<std::string> keys = {
        "nbar", "nbar0", "q_m", "tmax", "tau_max",
        "kappa_hz", "t2_ms", "omega_m_si_hz", "temperature_mk"};
    return keys;
}

const std::set<std::string>& int_keys() {
    static const std::set<std::string> keys = {"photon_cutoff", "phonon_cutoff",
                                               "points", "tau_points"};
    return keys;
}

const std::set<std::string>& list_keys() {
    static const std::set<std::string> keys = {"axis1", "axis2", "outputs",
                                               "tie_to_optimal"};
    return keys;
}

const std::vector<std::string>& required_keys() {
    static const std::vector<std::string> keys = {
        "omega_m", "delta_l", "delta_c", "eps_l", "gamma_m",
        "g|G", "g0|G0", "lambda|Lambda"};
    return keys;
}

struct Raw {
    std::string value;
    int line = 0;
    bool si = false;  // came from the _hz form
};

[[noreturn]] void fail(int line, const std::string& what) {
    std::ostringstream os;
    if (line > 0) os << "line " << line << ": ";
    os << what;
    throw ParseError(os.str());
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& s, int line) {
    if (s.empty()) fail(line, "empty numeric value");
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size()) fail(line, "malformed number '" + s + "'");
    return v;
}

double parse_kappa_value(const std::string& s, int line) {
    if (s.empty() || (s.back() != 'k' && s.back() != 'K'))
        fail(line, "frequency value '" + s + "' needs the kappa-unit suffix 'k'");
    return parse_number(s.substr(0, s.size() - 1), line);
}

int parse_int(const std::string& s, int line) {
    const double v = parse_number(s, line);
    if (v != std::floor(v)) fail(line, "expected an integer, got '" + s + "'");
    return int(v);
}

struct Parsed {
    std::map<std::string, Raw> entries;  // canonical key -> raw value
    bool any_kappa_units = false;
    bool any_si_units = false;
};

Parsed read_key_values(const std::vector<std::pair<int, std::string>>& lines,
                       bool allow_provenance_keys) {
    Parsed p;
    for (const auto& [lineno, text] : lines) {
        const auto eq = text.find('=');
        if (eq == std::string::npos) fail(lineno, "expected 'key = value'");
        std::string key = trim(text.substr(0, eq));
        std::string value = trim(text.substr(eq + 1));
        if (key.empty()) fail(lineno, "missing key");
        if (allow_provenance_keys &&
            (key == "subcommand" || key.rfind("tolerance_", 0) == 0 || key == "tool"))
            continue;

        bool si = false;
        std::string canonical = key;
        if (key.size() > 3 && key.ends_with("_hz") &&
            frequency_keys().count(key.substr(0, key.size() - 3))) {
            canonical = key.substr(0, key.size() - 3);
            si = true;
        } else if (frequency_keys().count(key)) {
            si = false;
        } else if (!plain_keys().count(key) && !int_keys().count(key) &&
                   !list_keys().count(key)) {
            fail(lineno, "unknown key '" + key + "'");
        }
        if (p.entries.count(canonical)) {
            const Raw& prev = p.entries[canonical];
            if (frequency_keys().count(canonical) && prev.si != si)
                fail(lineno, "unit mix: '" + canonical + "' given in both kappa units and Hz");
            fail(lineno, "duplicate key '" + canonical + "'");
        }
        if (frequency_keys().count(canonical)) {
            (si ? p.any_si_units : p.any_kappa_units) = true;
        }
        p.entries[canonical] = Raw{value, lineno, si};
    }
    if (p.any_si_units && p.any_kappa_units)
        fail(0, "unit mix: the file uses both kappa-unit and _hz frequency keys");
    return p;
}

harness::AxisSpec parse_axis(const std::string& value, int line) {
    std::istringstream is(value);
    std::string name, lo_s, hi_s, count_s, mode;
    if (!(is >> name >> lo_s >> hi_s >> count_s >> mode))
        fail(line, "axis needs 'name lo hi count linear|log'");
    std::string extra;
    if (is >> extra) fail(line, "trailing token '" + extra + "' in axis");
    harness::AxisSpec ax;
    ax.name = name;
    const bool freq = frequency_keys().count(name) > 0;
    ax.lo = freq ? parse_kappa_value(lo_s, line) : parse_number(lo_s, line);
    ax.hi = freq ? parse_kappa_value(hi_s, line) : parse_number(hi_s, line);
    ax.count = parse_int(count_s, line);
    if (mode == "linear" || mode == "lin") ax.log10 = false;
    else if (mode == "log") ax.log10 = true;
    else fail(line, "axis mode must be linear or log, got '" + mode + "'");
    return ax;
}

RunConfig build_config(const Parsed& p) {
    RunConfig cfg;

    double kappa_hz = cfg.params.kappa_hz;
    if (auto it = p.entries.find("kappa_hz"); it != p.entries.end())
        kappa_hz = parse_number(it->second.value, it->second.line);
    if (kappa_hz <= 0) fail(0, "kappa_hz must be positive");
    cfg.params.kappa_hz = kappa_hz;

    auto freq = [&](const std::string& key, double* dst) {
        auto it = p.entries.find(key);
        if (it == p.entries.end()) return false;
        *dst = it->second.si ? parse_number(it->second.value, it->second.line) / kappa_hz
                             : parse_kappa_value(it->second.value, it->second.line);
        return true;
    };
    auto plain = [&](const std::string& key, double* dst) {
        auto it = p.entries.find(key);
        if (it == p.entries.end()) return false;
        *dst = parse_number(it->second.value, it->second.line);
        return true;
    };
    auto integer = [&](const std::string& key, int* dst) {
        auto it = p.entries.find(key);
        if (it == p.entries.end()) return false;
        *dst = parse_int(it->second.value, it->second.line);
        return true;
    };

    // required system block
    std::vector<std::string> missing;
    auto need = [&](const char* label, bool ok) {
        if (!ok) missing.push_back(label);
    };
    need("omega_m", freq("omega_m", &cfg.params.omega_m));
    need("delta_l", freq("delta_l", &cfg.params.delta_l));
    need("delta_c", freq("delta_c", &cfg.params.delta_c));
    need("eps_l", freq("eps_l", &cfg.params.eps_l));
    need("gamma_m", freq("gamma_m", &cfg.params.gamma_m_eff));

    auto coupling = [&](const char* bare, const char* renorm, double scale_key,
                        double* dst, const char* label) {
        const bool has_bare = p.entries.count(bare) > 0;
        const bool has_renorm = p.entries.count(renorm) > 0;
        if (has_bare && has_renorm)
            fail(p.entries.at(renorm).line,
                 std::string("give either ") + bare + " or " + renorm + ", not both");
        if (has_bare) {
            freq(bare, dst);
        } else if (has_renorm) {
            double r = 0;
            freq(renorm, &r);
            if (r < 0) fail(p.entries.at(renorm).line, "renormalized coupling negative");
            *dst = std::sqrt(r * scale_key);
        } else {
            missing.push_back(label);
        }
    };
    coupling("g", "G", cfg.params.omega_m, &cfg.params.g, "g|G");
    coupling("g0", "G0", cfg.params.delta_l, &cfg.params.g0, "g0|G0");
    coupling("lambda", "Lambda", cfg.params.delta_l, &cfg.params.lambda, "lambda|Lambda");

    if (!missing.empty()) {
        std::ostringstream os;
        os << "missing required keys:";
        for (const auto& m : missing) os << " " << m;
        os << " (required: ";
        for (std::size_t i = 0; i < required_keys().size(); ++i)
            os << (i ? ", " : "") << required_keys()[i];
        os << ")";
        fail(0, os.str());
    }

    freq("gamma_spin", &cfg.params.gamma_spin);
    plain("nbar", &cfg.params.nbar);
    double t2_ms = cfg.params.t2_seconds * 1e3;
    if (plain("t2_ms", &t2_ms)) cfg.params.t2_seconds = t2_ms * 1e-3;

    integer("photon_cutoff", &cfg.space.photon_cutoff);
    integer("phonon_cutoff", &cfg.space.phonon_cutoff);
    plain("tmax", &cfg.tmax);
    integer("points", &cfg.points);
    plain("tau_max", &cfg.tau_max);
    integer("tau_points", &cfg.tau_points);

    // cooling block
    freq("kappa_a", &cfg.cool.kappa_a);
    freq("g_lin", &cfg.cool.g_lin);
    freq("gamma_m0", &cfg.cool.gamma_m0);
    plain("nbar0", &cfg.cool.nbar0);
    cfg.cool.omega_m = cfg.params.omega_m;
    plain("omega_m_si_hz", &cfg.omega_m_si_hz);
    plain("temperature_mk", &cfg.temperature_mk);
    plain("q_m", &cfg.q_m);

    if (auto it = p.entries.find("tie_to_optimal"); it != p.entries.end()) {
        const std::string v = it->second.value;
        if (v == "none") cfg.tie = harness::Tie::none;
        else if (v == "delta_c") cfg.tie = harness::Tie::delta_c;
        else if (v == "g0") cfg.tie = harness::Tie::g0;
        else fail(it->second.line, "tie_to_optimal must be none, delta_c or g0");
    }
    if (auto it = p.entries.find("outputs"); it != p.entries.end()) {
        cfg.outputs.clear();
        std::istringstream is(it->second.value);
        std::string name;
        while (is >> name) {
            if (!harness::output_recognized(name))
                fail(it->second.line, "unrecognized output '" + name + "'");
            cfg.outputs.push_back(name);
        }
        if (cfg.outputs.empty()) fail(it->second.line, "outputs list is empty");
    }
    if (p.entries.count("axis2") && !p.entries.count("axis1"))
        fail(p.entries.at("axis2").line, "axis2 given without axis1");
    for (const char* ax : {"axis1", "axis2"})
        if (auto it = p.entries.find(ax); it != p.entries.end())
            cfg.axes.push_back(parse_axis(it->second.value, it->second.line));

    cfg.space.validate();
    cfg.params.validate();
    return cfg;
}

std::vector<std::pair<int, std::string>> read_lines(const std::string& path,
                                                    bool provenance) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::vector<std::pair<int, std::string>> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (provenance) {
            if (line.rfind("#", 0) != 0) break;  // header ends at first data line
            line = trim(line.substr(1));
            if (line.rfind(kToolVersion, 0) == 0) continue;  // version banner
        } else {
            const auto hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            line = trim(line);
        }
        if (line.empty()) continue;
        out.emplace_back(lineno, line);
    }
    return out;
}

std::string full_precision(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

RunConfig parse_config(const std::string& path) {
    const auto lines = read_lines(path, false);
    if (lines.empty()) {
        std::ostringstream os;
        os << "empty config; required keys: ";
        for (std::size_t i = 0; i < required_keys().size(); ++i)
            os << (i ? ", " : "") << required_keys()[i];
        throw ParseError(os.str());
    }
    return build_config(read_key_values(lines, false));
}

RunConfig parse_provenance(const std::string& path) {
    const auto lines = read_lines(path, true);
    if (lines.empty()) throw ParseError("no provenance header in '" + path + "'");
    return build_config(read_key_values(lines, true));
}

std::vector<std::string> provenance_lines(const RunConfig& cfg,
                                          const std::string& subcommand) {
    std::vector<std::string> out;
    out.push_back(kToolVersion);
    out.push_back("subcommand = " + subcommand);
    auto kv = [&](const std::string& k, const std::string& v) { out.push_back(k + " = " + v); };
    auto freq = [&](const std::string& k, double v) { kv(k, full_precision(v) + "k"); };
    auto plain = [&](const std::string& k, double v) { kv(k, full_precision(v)); };

    plain("kappa_hz", cfg.params.kappa_hz);
    freq("omega_m", cfg.params.omega_m);
    freq("delta_l", cfg.params.delta_l);
    freq("delta_c", cfg.params.delta_c);
    freq("g", cfg.params.g);
    freq("g0", cfg.params.g0);
    freq("lambda", cfg.params.lambda);
    freq("eps_l", cfg.params.eps_l);
    freq("gamma_spin", cfg.params.gamma_spin);
    freq("gamma_m", cfg.params.gamma_m_eff);
    plain("nbar", cfg.params.nbar);
    plain("t2_ms", cfg.params.t2_seconds * 1e3);
    kv("photon_cutoff", std::to_string(cfg.space.photon_cutoff));
    kv("phonon_cutoff", std::to_string(cfg.space.phonon_cutoff));
    plain("tmax", cfg.tmax);
    kv("points", std::to_string(cfg.points));
    plain("tau_max", cfg.tau_max);
    kv("tau_points", std::to_string(cfg.tau_points));
    switch (cfg.tie) {
        case harness::Tie::none: kv("tie_to_optimal", "none"); break;
        case harness::Tie::delta_c: kv("tie_to_optimal", "delta_c"); break;
        case harness::Tie::g0: kv("tie_to_optimal", "g0"); break;
    }
    {
        std::string olist;
        for (const auto& o : cfg.outputs) olist += (olist.empty() ? "" : " ") + o;
        kv("outputs", olist);
    }
    for (std::size_t i = 0; i < cfg.axes.size(); ++i) {
        const auto& ax = cfg.axes[i];
        const bool f = frequency_keys().count(ax.name) > 0;
        std::ostringstream os;
        os << ax.name << " " << full_precision(ax.lo) << (f ? "k " : " ")
           << full_precision(ax.hi) << (f ? "k " : " ") << ax.count << " "
           << (ax.log10 ? "log" : "linear");
        kv(i == 0 ? "axis1" : "axis2", os.str());
    }
    freq("kappa_a", cfg.cool.kappa_a);
    freq("g_lin", cfg.cool.g_lin);
    freq("gamma_m0", cfg.cool.gamma_m0);
    plain("nbar0", cfg.cool.nbar0);
    plain("omega_m_si_hz", cfg.omega_m_si_hz);
    plain("temperature_mk", cfg.temperature_mk);
    plain("q_m", cfg.q_m);
    kv("tolerance_evolve", "1e-09");
    kv("tolerance_steady_residual", "1e-09");
    return out;
}

std::string format_value(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void write_table(const std::string& path,
                 const std::vector<std::string>& header_lines,
                 const std::vector<std::string>& columns,
                 const std::vector<std::vector<double>>& rows) {
    namespace fs = std::filesystem;
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw Error("cannot write '" + tmp + "'");
        for (const auto& h : header_lines) out << "# " << h << "\n";
        for (std::size_t c = 0; c < columns.size(); ++c)
            out << columns[c] << (c + 1 < columns.size() ? "," : "");
        out << "\n";
        for (const auto& row : rows) {
            for (std::size_t c = 0; c < row.size(); ++c)
                out << format_value(row[c]) << (c + 1 < row.size() ? "," : "");
            out << "\n";
        }
        if (!out.good()) throw Error("write failed for '" + tmp + "'");
    }
    fs::rename(tmp, path);
}

}  // namespace upb::cli
