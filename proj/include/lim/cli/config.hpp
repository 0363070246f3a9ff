#pragma once
#include <cstddef>
#include <istream>
#include <map>
#include <string>
#include <vector>

#include "lim/core/errors.hpp"

namespace lim {

// Parse or schema error; line is 0 when the key came from a default or a flag.
struct ConfigError : Error {
    ConfigError(std::size_t line, std::string key, const std::string& msg);
    std::size_t line;
    std::string key;
};

// key = value lines, optional [section] headers, '#' or ';' comments.
// Keys inside a section are stored as "section.key".
class Config {
  public:
    struct Entry {
        std::string value;
        std::size_t line = 0;
    };
    static Config parse(std::istream& in);
    static Config parse_file(const std::string& path);
    static Config parse_string(const std::string& text);

    bool has(const std::string& key) const { return entries_.count(key) > 0; }
    const Entry& at(const std::string& key) const;
    // Overrides keep line 0.
    void set(const std::string& key, std::string value);
    const std::map<std::string, Entry>& entries() const { return entries_; }

  private:
    std::map<std::string, Entry> entries_;
};

enum class ParamKind { Int, Real, IntList, RealList, Choice, Flag, Text };

struct ParamDef {
    std::string key;
    ParamKind kind = ParamKind::Real;
    std::string desk;   // default value
    std::string paper;  // default under --paper-scale; empty means same as desk
    std::string doc;
    double lo = -1e300, hi = 1e300;
    bool lo_open = false, hi_open = false;
    std::vector<std::string> choices;
};

// A config checked against a schema, with defaults filled in.
class Params {
  public:
    Params() = default;
    Params(const Config& cfg, const std::vector<ParamDef>& schema, bool paper_scale);

    std::string str(const std::string& key) const;
    double real(const std::string& key) const;
    long long integer(const std::string& key) const;
    std::size_t count(const std::string& key) const;  // integer >= 0
    std::vector<double> reals(const std::string& key) const;
    std::vector<long long> integers(const std::string& key) const;
    bool flag(const std::string& key) const;
    std::size_t line(const std::string& key) const;
    // Resolved key = value pairs in schema order.
    const std::vector<std::pair<std::string, std::string>>& resolved() const { return order_; }

  private:
    const ParamDef& def(const std::string& key) const;
    std::map<std::string, ParamDef> defs_;
    std::map<std::string, Config::Entry> values_;
    std::vector<std::pair<std::string, std::string>> order_;
};

struct Diagnostic {
    std::size_t line = 0;
    std::string key;
    std::string message;
};
std::string to_string(const Diagnostic& d);

// Type and range check of every value against its definition.
std::vector<Diagnostic> check_params(const Config& cfg, const std::vector<ParamDef>& schema);

std::vector<std::string> split_list(const std::string& s);

} // namespace lim
