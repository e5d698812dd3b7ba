#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

// Key-value configuration for the CLI: a schema per subcommand, values
// layered from defaults, a config file, --set overrides and per-key flags.

namespace cli {

/// Thrown for anything the user can fix in the config; maps to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Kind {
    Real,
    Integer,
    Flag,
    Text,
    RealList, // comma-separated reals
};

struct Key {
    std::string name;
    std::string fallback;
    Kind kind = Kind::Real;
    std::string help;
    std::vector<std::string> words; // extra accepted literals, e.g. "auto"
};

class Config {
public:
    Config(std::string section, std::vector<Key> schema);

    const std::string& section() const { return section_; }
    const std::vector<Key>& schema() const { return schema_; }

    /// Validates and stores value; source names the origin in messages.
    void set(const std::string& key, const std::string& value, const std::string& source);

    /// Reads a config file. Either INI-style text (top-level keys and a
    /// [section] named after the subcommand apply, other subcommand sections
    /// are skipped) or a JSON output of an earlier run with a "config" object.
    void load_file(const std::string& path, const std::vector<std::string>& known_sections);

    bool has_word(const std::string& key, const std::string& word) const;
    double real(const std::string& key) const;
    int integer(const std::string& key) const;
    bool flag(const std::string& key) const;
    const std::string& text(const std::string& key) const;
    std::vector<double> reals(const std::string& key) const;

    /// (key, value) in schema order, as echoed into outputs.
    std::vector<std::pair<std::string, std::string>> resolved() const;

private:
    const Key& find(const std::string& key) const;
    const std::string& raw(const std::string& key) const;

    std::string section_;
    std::vector<Key> schema_;
    std::map<std::string, std::string> values_;
};

/// Shortest representation that parses back to the same double.
std::string shortest(double x);

/// Fixed 12-significant-digit formatting used for every computed number.
std::string fmt12(double x);

double parse_real(const std::string& text, const std::string& what);
std::vector<double> parse_reals(const std::string& text, const std::string& what);

} // namespace cli
