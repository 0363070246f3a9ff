#include "lim/cli/config.hpp"

#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace lim {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool valid_name(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
    return true;
}

bool parse_real(const std::string& s, double& out) {
    if (s.empty()) return false;
    char* end = nullptr;
    errno = 0;
    out = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size() && errno == 0 && std::isfinite(out);
}

bool parse_int(const std::string& s, long long& out) {
    if (s.empty()) return false;
    char* end = nullptr;
    errno = 0;
    out = std::strtoll(s.c_str(), &end, 10);
    if (end == s.c_str() + s.size() && errno == 0) return true;
    // accept 1e5-style integers
    double d;
    if (parse_real(s, d) && d == std::floor(d) && std::abs(d) < 9e18) {
        out = static_cast<long long>(d);
        return true;
    }
    return false;
}

std::string range_text(const ParamDef& d) {
    std::ostringstream os;
    os << (d.lo_open ? "(" : "[");
    if (d.lo <= -1e300) os << "-inf"; else os << d.lo;
    os << ", ";
    if (d.hi >= 1e300) os << "inf"; else os << d.hi;
    os << (d.hi_open ? ")" : "]");
    return os.str();
}

bool in_range(const ParamDef& d, double v) {
    if (d.lo_open ? !(v > d.lo) : !(v >= d.lo)) return false;
    if (d.hi_open ? !(v < d.hi) : !(v <= d.hi)) return false;
    return true;
}

// Empty string when the value is acceptable.
std::string check_value(const ParamDef& d, const std::string& v) {
    switch (d.kind) {
    case ParamKind::Int:
    case ParamKind::Real: {
        double x = 0;
        long long n = 0;
        if (d.kind == ParamKind::Int ? !parse_int(v, n) : !parse_real(v, x))
            return "'" + v + "' is not " + (d.kind == ParamKind::Int ? "an integer" : "a number");
        if (d.kind == ParamKind::Int) x = double(n);
        if (!in_range(d, x)) return d.key + " = " + v + " is outside " + range_text(d);
        return "";
    }
    case ParamKind::IntList:
    case ParamKind::RealList: {
        auto items = split_list(v);
        if (items.empty()) return d.key + " needs at least one value";
        for (const auto& it : items) {
            ParamDef single = d;
            single.kind = d.kind == ParamKind::IntList ? ParamKind::Int : ParamKind::Real;
            auto m = check_value(single, it);
            if (!m.empty()) return m;
        }
        return "";
    }
    case ParamKind::Choice:
        for (const auto& c : d.choices)
            if (c == v) return "";
        {
            std::string all;
            for (const auto& c : d.choices) all += (all.empty() ? "" : "|") + c;
            return d.key + " = " + v + " is not one of " + all;
        }
    case ParamKind::Flag:
        if (v == "true" || v == "false") return "";
        return d.key + " must be true or false";
    case ParamKind::Text:
        return v.empty() ? d.key + " must not be empty" : "";
    }
    return "";
}

} // namespace

ConfigError::ConfigError(std::size_t line_, std::string key_, const std::string& msg)
    : Error((line_ ? "line " + std::to_string(line_) + ": " : std::string()) + (key_.empty() ? "" : key_ + ": ") + msg),
      line(line_), key(std::move(key_)) {}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

Config Config::parse(std::istream& in) {
    Config c;
    std::string raw, section;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        auto cut = raw.find_first_of("#;");
        std::string line = trim(cut == std::string::npos ? raw : raw.substr(0, cut));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(lineno, "", "unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (!valid_name(section)) throw ConfigError(lineno, section, "bad section name");
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(lineno, "", "expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
        if (!valid_name(key)) throw ConfigError(lineno, key, "bad key name");
        std::string full = section.empty() ? key : section + "." + key;
        if (c.entries_.count(full)) throw ConfigError(lineno, full, "duplicate key");
        c.entries_[full] = {value, lineno};
    }
    return c;
}

Config Config::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(0, "", "cannot open " + path);
    return parse(in);
}

Config Config::parse_string(const std::string& text) {
    std::istringstream in(text);
    return parse(in);
}

const Config::Entry& Config::at(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) throw ConfigError(0, key, "missing key");
    return it->second;
}

void Config::set(const std::string& key, std::string value) { entries_[key] = {std::move(value), 0}; }

std::string to_string(const Diagnostic& d) {
    std::string s;
    if (d.line) s += "line " + std::to_string(d.line) + ": ";
    if (!d.key.empty()) s += d.key + ": ";
    return s + d.message;
}

std::vector<Diagnostic> check_params(const Config& cfg, const std::vector<ParamDef>& schema) {
    std::vector<Diagnostic> out;
    std::map<std::string, const ParamDef*> defs;
    for (const auto& d : schema) defs[d.key] = &d;
    for (const auto& [k, e] : cfg.entries()) {
        auto it = defs.find(k);
        if (it == defs.end()) {
            out.push_back({e.line, k, "unknown key"});
            continue;
        }
        auto m = check_value(*it->second, e.value);
        if (!m.empty()) out.push_back({e.line, k, m});
    }
    return out;
}

Params::Params(const Config& cfg, const std::vector<ParamDef>& schema, bool paper_scale) {
    auto diags = check_params(cfg, schema);
    if (!diags.empty()) throw ConfigError(diags.front().line, diags.front().key, diags.front().message);
    for (const auto& d : schema) {
        defs_[d.key] = d;
        Config::Entry e;
        if (cfg.has(d.key))
            e = cfg.at(d.key);
        else
            e.value = paper_scale && !d.paper.empty() ? d.paper : d.desk;
        values_[d.key] = e;
        order_.emplace_back(d.key, e.value);
    }
}

const ParamDef& Params::def(const std::string& key) const {
    auto it = defs_.find(key);
    if (it == defs_.end()) throw ConfigError(0, key, "not part of this experiment's schema");
    return it->second;
}

std::size_t Params::line(const std::string& key) const {
    def(key);
    return values_.at(key).line;
}

std::string Params::str(const std::string& key) const {
    def(key);
    return values_.at(key).value;
}

double Params::real(const std::string& key) const {
    double x;
    if (!parse_real(str(key), x)) throw ConfigError(line(key), key, "not a number");
    return x;
}

long long Params::integer(const std::string& key) const {
    long long n;
    if (!parse_int(str(key), n)) throw ConfigError(line(key), key, "not an integer");
    return n;
}

std::size_t Params::count(const std::string& key) const {
    long long n = integer(key);
    if (n < 0) throw ConfigError(line(key), key, "must be non-negative");
    return std::size_t(n);
}

std::vector<double> Params::reals(const std::string& key) const {
    std::vector<double> out;
    for (const auto& s : split_list(str(key))) {
        double x;
        if (!parse_real(s, x)) throw ConfigError(line(key), key, "'" + s + "' is not a number");
        out.push_back(x);
    }
    return out;
}

std::vector<long long> Params::integers(const std::string& key) const {
    std::vector<long long> out;
    for (const auto& s : split_list(str(key))) {
        long long n;
        if (!parse_int(s, n)) throw ConfigError(line(key), key, "'" + s + "' is not an integer");
        out.push_back(n);
    }
    return out;
}

bool Params::flag(const std::string& key) const { return str(key) == "true"; }

} // namespace lim
