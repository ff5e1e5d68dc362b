#include "ghostsim/scenario.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace ghostsim {

namespace {

struct Entry {
    std::string value;
    int line;
    bool used = false;
};

using Table = std::map<std::string, std::map<std::string, Entry>>;

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(const std::string& name, int line, const std::string& msg) {
    throw ConfigError(name + ":" + std::to_string(line) + ": " + msg);
}

Table tokenize(const std::string& text, const std::string& name) {
    static const std::map<std::string, std::set<std::string>> grammar = {
        {"source", {"sigma", "omega", "hbar", "mass"}},
        {"slits", {"y0", "epsilon"}},
        {"kinematics", {"mode", "t0", "t", "lambda_d", "L1", "L2"}},
        {"grid", {"n1", "n2", "extent1", "extent2", "boundary_floor"}},
        {"scan", {"particle", "fixed", "min", "max", "count"}},
    };
    Table t;
    std::istringstream in(text);
    std::string raw, section;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string s = trim(raw);
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') fail(name, line, "unterminated section header");
            section = trim(s.substr(1, s.size() - 2));
            if (!grammar.count(section))
                fail(name, line, "unknown section [" + section + "]");
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            fail(name, line, "expected key = value, got '" + s + "'");
        if (section.empty()) fail(name, line, "key outside any [section]");
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        if (!grammar.at(section).count(key))
            fail(name, line, "unknown key '" + key + "' in [" + section + "]");
        if (value.empty()) fail(name, line, "empty value for '" + key + "'");
        if (t[section].count(key))
            fail(name, line, "duplicate key '" + key + "' in [" + section + "]");
        t[section][key] = Entry{value, line};
    }
    return t;
}

class Reader {
   public:
    Reader(Table& t, std::string name) : t_(t), name_(std::move(name)) {}

    bool has_section(const std::string& s) const { return t_.count(s) > 0; }
    bool has(const std::string& s, const std::string& k) const {
        return t_.count(s) && t_.at(s).count(k);
    }

    std::string str(const std::string& s, const std::string& k) {
        if (!has(s, k))
            throw ConfigError(name_ + ": missing required key '" + k + "' in [" +
                              s + "]");
        Entry& e = t_[s][k];
        e.used = true;
        return e.value;
    }

    double num(const std::string& s, const std::string& k) {
        const std::string v = str(s, k);
        return parse_double(s, k, v);
    }

    double num_or(const std::string& s, const std::string& k, double fallback) {
        return has(s, k) ? num(s, k) : fallback;
    }

    int integer(const std::string& s, const std::string& k) {
        const std::string v = str(s, k);
        size_t pos = 0;
        int out = 0;
        try {
            out = std::stoi(v, &pos);
        } catch (const std::exception&) {
            pos = std::string::npos;
        }
        if (pos != v.size())
            fail(name_, t_[s][k].line, "invalid integer for '" + k + "': " + v);
        return out;
    }

    int line_of(const std::string& s, const std::string& k) const {
        return t_.at(s).at(k).line;
    }

    void finish() const {
        for (const auto& [sec, keys] : t_)
            for (const auto& [key, e] : keys)
                if (!e.used)
                    fail(name_, e.line,
                         "key '" + key + "' is not valid for this configuration");
    }

    const std::string& name() const { return name_; }

   private:
    double parse_double(const std::string& s, const std::string& k,
                        const std::string& v) {
        size_t pos = 0;
        double out = 0.0;
        try {
            out = std::stod(v, &pos);
        } catch (const std::exception&) {
            pos = std::string::npos;
        }
        if (pos != v.size())
            fail(name_, t_[s][k].line, "invalid number for '" + k + "': " + v);
        return out;
    }

    Table& t_;
    std::string name_;
};

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

Scenario parse_scenario_text(const std::string& text, const std::string& name) {
    Table table = tokenize(text, name);
    Reader r(table, name);

    auto build = [&](auto fn, const std::string& section) {
        try {
            return fn();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(name + ": in [" + section + "]: " + e.what());
        }
    };

    const SourceParams source = build(
        [&] {
            return SourceParams(r.num("source", "sigma"), r.num("source", "omega"),
                                r.num("source", "hbar"), r.num("source", "mass"));
        },
        "source");
    const SlitPair slits = build(
        [&] { return SlitPair(r.num("slits", "y0"), r.num("slits", "epsilon")); },
        "slits");

    const std::string mode = r.str("kinematics", "mode");
    KinematicsConfig kin = build(
        [&]() -> KinematicsConfig {
            if (mode == "time")
                return KinematicsConfig::time_domain(
                    r.num("kinematics", "t0"), r.num("kinematics", "t"),
                    r.num_or("kinematics", "lambda_d", 0.0));
            if (mode == "distance")
                return KinematicsConfig::distance_domain(
                    r.num("kinematics", "lambda_d"), r.num("kinematics", "L1"),
                    r.num("kinematics", "L2"));
            fail(name, r.line_of("kinematics", "mode"),
                 "mode must be 'time' or 'distance', got '" + mode + "'");
        },
        "kinematics");

    Scenario sc{source, slits, kin, std::nullopt, std::nullopt};

    if (r.has_section("grid"))
        sc.grid = build(
            [&] {
                return GridSpec(r.integer("grid", "n1"), r.integer("grid", "n2"),
                                r.num("grid", "extent1"), r.num("grid", "extent2"),
                                r.num_or("grid", "boundary_floor", 1e-8));
            },
            "grid");

    if (r.has_section("scan")) {
        ScanDefaults d;
        const std::string p = r.str("scan", "particle");
        if (p == "P1")
            d.particle = Particle::P1;
        else if (p == "P2")
            d.particle = Particle::P2;
        else
            fail(name, r.line_of("scan", "particle"),
                 "particle must be P1 or P2, got '" + p + "'");
        const std::string fixed = r.str("scan", "fixed");
        if (fixed == "marginal") {
            d.marginal = true;
        } else {
            size_t pos = 0;
            try {
                d.fixed = std::stod(fixed, &pos);
            } catch (const std::exception&) {
                pos = std::string::npos;
            }
            if (pos != fixed.size())
                fail(name, r.line_of("scan", "fixed"),
                     "fixed must be a position in metres or 'marginal'");
        }
        d.range_min = r.num("scan", "min");
        d.range_max = r.num("scan", "max");
        d.count = r.integer("scan", "count");
        if (d.count < 64)
            fail(name, r.line_of("scan", "count"), "count must be >= 64");
        if (!(d.range_min < d.range_max))
            fail(name, r.line_of("scan", "min"), "scan range must satisfy min < max");
        sc.scan = d;
    }

    r.finish();
    return sc;
}

Scenario parse_scenario(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError(path + ": cannot open scenario file");
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse_scenario_text(buf.str(), path);
}

std::string scan_csv_string(const ScanResult& s) {
    std::string out = "# ghostsim v1\nposition_m,density\n";
    for (size_t i = 0; i < s.positions.size(); ++i) {
        out += format_double(s.positions[i]);
        out += ',';
        out += format_double(s.densities[i]);
        out += '\n';
    }
    return out;
}

void write_scan_csv(const ScanResult& s, const std::string& path) {
    std::ofstream f(path, std::ios::binary);  // binary: keep LF endings exact
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f << scan_csv_string(s);
}

ScanResult read_scan_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError(path + ": cannot open CSV file");
    std::string line;
    int ln = 0;
    auto next = [&](const char* what) {
        if (!std::getline(f, line))
            fail(path, ln + 1, std::string("unexpected end of file, expected ") + what);
        ++ln;
        if (!line.empty() && line.back() == '\r') line.pop_back();
    };
    next("'# ghostsim v1' header");
    if (line != "# ghostsim v1")
        fail(path, ln, "bad header, expected '# ghostsim v1', got '" + line + "'");
    next("'position_m,density' column line");
    if (line != "position_m,density")
        fail(path, ln, "bad column line, expected 'position_m,density'");

    ScanResult s;
    s.scanned_particle = Particle::P2;
    while (std::getline(f, line)) {
        ++ln;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            fail(path, ln, "expected 'position,density', got '" + line + "'");
        size_t p1 = 0, p2 = 0;
        double pos = 0.0, den = 0.0;
        const std::string a = line.substr(0, comma), b = line.substr(comma + 1);
        try {
            pos = std::stod(a, &p1);
            den = std::stod(b, &p2);
        } catch (const std::exception&) {
            fail(path, ln, "invalid number in '" + line + "'");
        }
        if (p1 != a.size() || p2 != b.size())
            fail(path, ln, "trailing characters in '" + line + "'");
        if (!s.positions.empty() && pos <= s.positions.back())
            fail(path, ln, "positions must be strictly increasing");
        s.positions.push_back(pos);
        s.densities.push_back(den);
    }
    if (s.positions.empty()) fail(path, ln, "CSV holds no samples");
    return s;
}

}  // namespace ghostsim
