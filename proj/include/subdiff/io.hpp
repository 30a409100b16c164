#pragma once

// Run configuration (flat key-value file with [section] headers, environment
// overrides), full-precision CSV / gnuplot writers, and the JSON-lines
// manifest.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "subdiff/kernels.hpp"

namespace subdiff {

// 17 significant digits, round-trip exact
inline std::string fmt_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

class KeyValueConfig {
   public:
    // "section.key" -> raw string value
    static KeyValueConfig parse(const std::string& text) {
        KeyValueConfig cfg;
        std::istringstream in(text);
        std::string line, section;
        while (std::getline(in, line)) {
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            auto trim = [](std::string s) {
                const auto b = s.find_first_not_of(" \t\r");
                const auto e = s.find_last_not_of(" \t\r");
                return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
            };
            line = trim(line);
            if (line.empty()) continue;
            if (line.front() == '[' && line.back() == ']') {
                section = trim(line.substr(1, line.size() - 2));
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos) {
                cfg.problems_.push_back("unparseable line: '" + line + "'");
                continue;
            }
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            cfg.map_[section.empty() ? key : section + "." + key] = value;
        }
        return cfg;
    }

    static KeyValueConfig parse_file(const std::filesystem::path& path) {
        std::ifstream in(path);
        if (!in) {
            KeyValueConfig cfg;
            cfg.problems_.push_back("cannot open config file " + path.string());
            return cfg;
        }
        std::ostringstream ss;
        ss << in.rdbuf();
        return parse(ss.str());
    }

    // environment overrides: SUBDIFF_<SECTION>_<KEY>=value for every known key
    void apply_env(const char* prefix = "SUBDIFF_") {
        static const char* known[] = {
            "kernel.family", "kernel.alpha", "kernel.gamma", "kernel.terms",
            "grid.T",        "grid.N",       "grid.grading", "mesh.L",
            "mesh.M",        "params.mu",    "params.nu",    "params.gamma_ode",
            "params.alpha",  "params.p",     "params.m",     "params.u0",
            "params.mu_asympt",
            "run.seed",      "run.jobs",     "run.trials"};
        for (const char* key : known) {
            std::string env_name = prefix;
            for (const char* c = key; *c; ++c)
                env_name += *c == '.' ? '_' : char(std::toupper(*c));
            if (const char* ev = std::getenv(env_name.c_str())) map_[key] = ev;
        }
    }

    std::optional<std::string> get(const std::string& key) const {
        auto it = map_.find(key);
        if (it == map_.end()) return std::nullopt;
        return it->second;
    }
    void set(const std::string& key, std::string value) { map_[key] = std::move(value); }

    double get_double(const std::string& key, double fallback,
                      std::vector<std::string>& problems) const {
        auto v = get(key);
        if (!v) return fallback;
        try {
            std::size_t pos = 0;
            const double d = std::stod(*v, &pos);
            if (pos != v->size()) throw std::invalid_argument("trailing junk");
            return d;
        } catch (const std::exception&) {
            problems.push_back("field '" + key + "': not a number ('" + *v + "')");
            return fallback;
        }
    }
    std::size_t get_size(const std::string& key, std::size_t fallback,
                         std::vector<std::string>& problems) const {
        const double d = get_double(key, double(fallback), problems);
        if (d < 0.0 || d != std::floor(d)) {
            problems.push_back("field '" + key + "': not a nonnegative integer");
            return fallback;
        }
        return std::size_t(d);
    }
    std::vector<double> get_list(const std::string& key,
                                 std::vector<double> fallback,
                                 std::vector<std::string>& problems) const {
        auto v = get(key);
        if (!v) return fallback;
        std::vector<double> out;
        std::istringstream ss(*v);
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                out.push_back(std::stod(item));
            } catch (const std::exception&) {
                problems.push_back("field '" + key + "': bad list entry '" + item + "'");
            }
        }
        if (out.empty())
            problems.push_back("field '" + key + "': empty list");
        return out;
    }

    const std::vector<std::string>& parse_problems() const { return problems_; }
    const std::map<std::string, std::string>& entries() const { return map_; }

   private:
    std::map<std::string, std::string> map_;
    std::vector<std::string> problems_;
};

struct RunConfig {
    // kernel
    std::string family = "fractional";
    double alpha = 0.5;
    double gamma = 1.0;
    std::vector<SumTerm> terms{{1.0, 0.3}, {1.0, 0.7}};
    // grids
    double T = 50.0;
    std::size_t N = 2000;
    double grading = 0.0;  // 0 = auto (2/alpha)
    // mesh
    double L = M_PI;
    std::size_t M = 47;
    // parameters
    std::vector<double> mu{0.1, 1.0, 10.0};
    // desk-scale horizons resolve the asymptotic regime for mu >= O(1) only
    std::vector<double> mu_asympt{1.0, 10.0};
    double nu = 1.0;
    std::vector<double> gamma_ode{0.5, 1.0, 2.0, 3.0};
    std::vector<double> alphas{0.3, 0.5, 0.7};
    std::vector<double> p_list{1.5, 2.5, 3.0};
    std::vector<double> m_list{0.5, 2.0, 3.0};
    double u0 = 1.0;
    // run control
    std::uint64_t seed = 20240815;
    std::size_t jobs = 1;
    std::size_t trials = 10000;

    double grading_for(double a) const {
        return grading >= 1.0 ? grading : 2.0 / a;
    }

    static RunConfig from(const KeyValueConfig& kv, std::vector<std::string>& problems) {
        RunConfig c;
        problems.insert(problems.end(), kv.parse_problems().begin(),
                        kv.parse_problems().end());
        if (auto f = kv.get("kernel.family")) c.family = *f;
        c.alpha = kv.get_double("kernel.alpha", c.alpha, problems);
        c.gamma = kv.get_double("kernel.gamma", c.gamma, problems);
        if (auto t = kv.get("kernel.terms")) {
            c.terms.clear();
            std::istringstream ss(*t);
            std::string item;
            while (std::getline(ss, item, ',')) {
                const auto colon = item.find(':');
                try {
                    if (colon == std::string::npos) throw std::invalid_argument("no colon");
                    c.terms.push_back({std::stod(item.substr(0, colon)),
                                       std::stod(item.substr(colon + 1))});
                } catch (const std::exception&) {
                    problems.push_back("field 'kernel.terms': expect delta:alpha, got '" +
                                       item + "'");
                }
            }
        }
        c.T = kv.get_double("grid.T", c.T, problems);
        c.N = kv.get_size("grid.N", c.N, problems);
        if (auto g = kv.get("grid.grading"); g && *g != "auto")
            c.grading = kv.get_double("grid.grading", 0.0, problems);
        c.L = kv.get_double("mesh.L", c.L, problems);
        c.M = kv.get_size("mesh.M", c.M, problems);
        c.mu = kv.get_list("params.mu", c.mu, problems);
        c.mu_asympt = kv.get_list("params.mu_asympt", c.mu_asympt, problems);
        c.nu = kv.get_double("params.nu", c.nu, problems);
        c.gamma_ode = kv.get_list("params.gamma_ode", c.gamma_ode, problems);
        c.alphas = kv.get_list("params.alpha", c.alphas, problems);
        c.p_list = kv.get_list("params.p", c.p_list, problems);
        c.m_list = kv.get_list("params.m", c.m_list, problems);
        c.u0 = kv.get_double("params.u0", c.u0, problems);
        c.seed = std::uint64_t(kv.get_double("run.seed", double(c.seed), problems));
        c.jobs = kv.get_size("run.jobs", c.jobs, problems);
        c.trials = kv.get_size("run.trials", c.trials, problems);
        return c;
    }

    // structural validation; returns one message per violated field
    std::vector<std::string> validate() const {
        std::vector<std::string> bad;
        const std::vector<std::string> families = {
            "fractional",        "fractional_exp",       "switched_exp",
            "sum_fractional",    "distributed_order",    "switched_distributed"};
        bool found = false;
        for (const auto& f : families) found = found || f == family;
        if (!found) bad.push_back("kernel.family: unknown family '" + family + "'");
        if (!(alpha > 0.0 && alpha < 1.0)) bad.push_back("kernel.alpha: need (0,1)");
        if (!(gamma > 0.0)) bad.push_back("kernel.gamma: need > 0");
        for (const auto& t : terms) {
            if (!(t.delta > 0.0)) bad.push_back("kernel.terms: delta must be > 0");
            if (!(t.alpha > 0.0 && t.alpha < 1.0))
                bad.push_back("kernel.terms: alpha must be in (0,1)");
        }
        if (!(T > 0.0)) bad.push_back("grid.T: need > 0");
        if (N < 2) bad.push_back("grid.N: need >= 2");
        if (grading != 0.0 && grading < 1.0) bad.push_back("grid.grading: need >= 1 or auto");
        if (!(L > 0.0)) bad.push_back("mesh.L: need > 0");
        if (M < 3) bad.push_back("mesh.M: need >= 3");
        if (mu.empty()) bad.push_back("params.mu: empty list");
        if (mu_asympt.empty()) bad.push_back("params.mu_asympt: empty list");
        for (double m : mu_asympt)
            if (!(m > 0.0)) bad.push_back("params.mu_asympt: entries must be > 0");
        for (double m : mu)
            if (m < 0.0) bad.push_back("params.mu: entries must be >= 0");
        if (!(nu > 0.0)) bad.push_back("params.nu: need > 0");
        for (double a : alphas)
            if (!(a > 0.0 && a < 1.0)) bad.push_back("params.alpha: entries in (0,1)");
        for (double g : gamma_ode)
            if (!(g > 0.0)) bad.push_back("params.gamma_ode: entries > 0");
        for (double p : p_list)
            if (!(p > 1.0)) bad.push_back("params.p: entries > 1");
        for (double m : m_list)
            if (!(m > 0.0)) bad.push_back("params.m: entries > 0");
        if (!(u0 > 0.0)) bad.push_back("params.u0: need > 0");
        return bad;
    }

    KernelPair make_pair() const {
        if (family == "fractional") return KernelPair::fractional(alpha);
        if (family == "fractional_exp") return KernelPair::fractional_exp(alpha, gamma);
        if (family == "switched_exp") return KernelPair::switched_exp(alpha, gamma);
        if (family == "sum_fractional") return KernelPair::sum_fractional(terms);
        if (family == "distributed_order") return KernelPair::distributed_order();
        if (family == "switched_distributed") return KernelPair::switched_distributed();
        throw std::invalid_argument("unknown kernel family: " + family);
    }

    nlohmann::json echo() const {
        nlohmann::json j;
        j["kernel"] = {{"family", family}, {"alpha", alpha}, {"gamma", gamma}};
        j["grid"] = {{"T", T}, {"N", N}, {"grading", grading == 0.0 ? -1.0 : grading}};
        j["mesh"] = {{"L", L}, {"M", M}};
        j["params"] = {{"mu", mu},        {"mu_asympt", mu_asympt},
                       {"nu", nu},        {"gamma_ode", gamma_ode},
                       {"alpha", alphas}, {"p", p_list},
                       {"m", m_list},     {"u0", u0}};
        j["run"] = {{"seed", seed}, {"jobs", jobs}, {"trials", trials}};
        return j;
    }
};

// Column-oriented CSV with full-precision scientific entries; also emits the
// gnuplot-ready two-column .dat sibling from the first two columns.
class CsvWriter {
   public:
    CsvWriter(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    void row(const std::vector<double>& values) {
        if (values.size() != columns_.size())
            throw std::invalid_argument("CsvWriter: row width mismatch");
        rows_.push_back(values);
    }

    std::string to_string() const {
        std::string out;
        for (std::size_t c = 0; c < columns_.size(); ++c)
            out += (c ? "," : "") + columns_[c];
        out += "\n";
        for (const auto& r : rows_) {
            for (std::size_t c = 0; c < r.size(); ++c)
                out += (c ? "," : "") + fmt_full(r[c]);
            out += "\n";
        }
        return out;
    }

    std::string to_dat() const {
        std::string out = "# " + columns_[0] + " " +
                          (columns_.size() > 1 ? columns_[1] : "value") + "\n";
        for (const auto& r : rows_) {
            out += fmt_full(r[0]) + " " + fmt_full(r.size() > 1 ? r[1] : 0.0) + "\n";
        }
        return out;
    }

   private:
    std::vector<std::string> columns_;
    std::vector<std::vector<double>> rows_;
};

inline void write_text_file(const std::filesystem::path& path,
                            const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file " + path.string());
    out << text;
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace subdiff
