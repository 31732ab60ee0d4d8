#include "hyperbound/config.hpp"

#include "hyperbound/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace hyperbound {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

double to_real(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("bad real for key '" + key + "': '" + v + "'");
    }
}

long to_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const long x = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("bad integer for key '" + key + "': '" + v + "'");
    }
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(to_real(key, item));
    }
    if (out.empty()) throw ConfigError("empty list for key '" + key + "'");
    return out;
}

} // namespace

RunConfig parse_config_text(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": empty key or value");
        if (kv.count(key)) throw ConfigError("duplicate key '" + key + "'");
        kv[key] = val;
    }

    RunConfig cfg;
    int M = 2;
    if (kv.count("M")) {
        M = static_cast<int>(to_int("M", kv["M"]));
        if (M < 2) throw ConfigError("M must be >= 2");
        kv.erase("M");
    }
    std::vector<double> f(static_cast<size_t>(M - 1), 0.0);
    std::vector<double> g(static_cast<size_t>(M), 0.0);

    for (auto it = kv.begin(); it != kv.end();) {
        const std::string& key = it->first;
        bool used = false;
        if (key.size() > 2 && (key[0] == 'f' || key[0] == 'g') && key[1] == '.') {
            const long idx = to_int(key, key.substr(2));
            if (key[0] == 'f') {
                if (idx < 2 || idx > M) throw ConfigError("key '" + key + "' outside 2..M");
                f[static_cast<size_t>(idx - 2)] = to_real(key, it->second);
            } else {
                if (idx < 1 || idx > M) throw ConfigError("key '" + key + "' outside 1..M");
                g[static_cast<size_t>(idx - 1)] = to_real(key, it->second);
            }
            used = true;
        }
        it = used ? kv.erase(it) : std::next(it);
    }
    cfg.spec = PotentialSpec(M, std::move(f), std::move(g));

    auto take_real = [&](const char* key, double& dst) {
        if (kv.count(key)) {
            dst = to_real(key, kv[key]);
            kv.erase(key);
        }
    };
    auto take_size = [&](const char* key, std::size_t& dst) {
        if (kv.count(key)) {
            const long v = to_int(key, kv[key]);
            if (v < 0) throw ConfigError(std::string("key '") + key + "' must be >= 0");
            dst = static_cast<std::size_t>(v);
            kv.erase(key);
        }
    };
    take_real("a", cfg.a);
    take_real("kappa.min", cfg.kappa_min);
    take_real("kappa.max", cfg.kappa_max);
    take_size("grid", cfg.grid_points);
    if (kv.count("eps")) {
        cfg.epsilons = to_list("eps", kv["eps"]);
        kv.erase("eps");
    }
    take_real("tol.series", cfg.tol_series);
    take_real("tol.root", cfg.tol_root);
    if (kv.count("format")) {
        cfg.format = kv["format"];
        kv.erase("format");
    }
    if (kv.count("out")) {
        cfg.out_path = kv["out"];
        kv.erase("out");
    }
    take_real("numerov.half_width", cfg.half_width);
    take_size("numerov.points", cfg.points);
    take_real("numerov.match_point", cfg.match_point);
    take_real("validate.bound", cfg.validate_bound);

    if (!kv.empty()) throw ConfigError("unknown key '" + kv.begin()->first + "'");
    cfg.validate();
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

void RunConfig::validate() const {
    if (tol_series <= 0.0 || tol_root <= 0.0) throw ConfigError("tolerances must be > 0");
    if (epsilons.empty()) throw ConfigError("eps must be non-empty");
    for (double e : epsilons)
        if (!(e > 0.0 && e <= 0.5)) throw ConfigError("each eps must be in (0, 0.5]");
    for (std::size_t i = 1; i < epsilons.size(); ++i)
        if (epsilons[i] >= epsilons[i - 1]) throw ConfigError("eps must be strictly decreasing");
    if (format != "table" && format != "json" && format != "csv")
        throw ConfigError("format must be table, json or csv");
    if (kappa_min <= 0.0) throw ConfigError("kappa.min must be > 0");
}

double RunConfig::resolved_kappa_max() const {
    if (kappa_max > 0.0) return kappa_max;
    return std::sqrt(spec.max_depth()) + 1.0;
}

SpectrumConfig RunConfig::spectrum_config() const {
    SpectrumConfig sc;
    sc.epsilons = epsilons;
    sc.grid_points = std::max<std::size_t>(grid_points, 32);
    sc.tol = tol_root;
    sc.series_tol = tol_series;
    return sc;
}

GridConfig RunConfig::grid_config(double kappa_min_expected) const {
    GridConfig gc;
    const double kmin = std::max(kappa_min_expected, 1e-2);
    gc.half_width = (half_width > 0.0) ? half_width : std::max(40.0, 26.0 / kmin);
    if (points > 0) {
        gc.points = points;
    } else {
        std::size_t n = static_cast<std::size_t>(2.0 * gc.half_width / 2.5e-3) + 1;
        if (n % 2 == 0) ++n;
        gc.points = std::clamp<std::size_t>(n, 20001, 640001);
    }
    gc.match_point = match_point;
    return gc;
}

std::string format_full(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string spectrum_json(const RunConfig& config, const std::vector<MatchResult>& results) {
    nlohmann::ordered_json root;
    nlohmann::ordered_json jc;
    jc["M"] = config.spec.order();
    nlohmann::ordered_json jf = nlohmann::ordered_json::object();
    nlohmann::ordered_json jg = nlohmann::ordered_json::object();
    for (int m = 2; m <= config.spec.order(); ++m) jf[std::to_string(m)] = config.spec.f(m);
    for (int n = 1; n <= config.spec.order(); ++n) jg[std::to_string(n)] = config.spec.g(n);
    jc["f"] = jf;
    jc["g"] = jg;
    jc["a"] = config.a;
    jc["kappa_min"] = config.kappa_min;
    jc["kappa_max"] = config.resolved_kappa_max();
    jc["epsilons"] = config.epsilons;
    jc["grid"] = config.grid_points;
    jc["tol_series"] = config.tol_series;
    jc["tol_root"] = config.tol_root;
    root["config"] = jc;

    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const MatchResult& r : results) {
        nlohmann::ordered_json jr;
        jr["kappa"] = r.kappa;
        jr["energy"] = r.energy;
        jr["mixing_M"] = r.mixing_M;
        jr["mixing_N"] = r.mixing_N;
        jr["residual"] = r.residual;
        if (r.near_threshold) jr["near_threshold"] = true;
        arr.push_back(jr);
    }
    root["results"] = arr;
    return root.dump(2) + "\n";
}

std::string spectrum_table(const std::vector<MatchResult>& results) {
    std::ostringstream os;
    os << "  #            kappa            energy        mixing_M        mixing_N    residual\n";
    int i = 0;
    for (const MatchResult& r : results) {
        char line[256];
        std::snprintf(line, sizeof(line), "%3d %16.10f %17.10f %15.8f %15.8f %11.2e%s\n", i++,
                      r.kappa, r.energy, r.mixing_M, r.mixing_N, r.residual,
                      r.near_threshold ? "  [near threshold]" : "");
        os << line;
    }
    if (results.empty()) os << "  (no bound states in range)\n";
    return os.str();
}

std::string wavefunction_csv(const std::vector<WavefunctionSample>& samples) {
    std::ostringstream os;
    os << "x,psi,dpsi\n";
    for (const WavefunctionSample& s : samples)
        os << format_full(s.x) << ',' << format_full(s.psi) << ',' << format_full(s.dpsi) << '\n';
    return os.str();
}

} // namespace hyperbound
