#include "config.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace cli {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) {
        return "";
    }
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string lower(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

bool parse_flag(const std::string& text, bool& out)
{
    const std::string v = lower(text);
    if (v == "1" || v == "true" || v == "yes" || v == "on") {
        out = true;
        return true;
    }
    if (v == "0" || v == "false" || v == "no" || v == "off") {
        out = false;
        return true;
    }
    return false;
}

// Canonical text for a validated value, so that echoed configs compare equal
// regardless of how the value was spelled.
std::string canonical(const Key& key, const std::string& value, const std::string& where)
{
    const std::string v = trim(value);
    if (std::find(key.words.begin(), key.words.end(), v) != key.words.end()) {
        return v;
    }
    switch (key.kind) {
    case Kind::Real:
        return shortest(parse_real(v, where));
    case Kind::Integer: {
        long out = 0;
        const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
        if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
            throw ConfigError(where + ": expected an integer, got '" + v + "'");
        }
        return std::to_string(out);
    }
    case Kind::Flag: {
        bool out = false;
        if (!parse_flag(v, out)) {
            throw ConfigError(where + ": expected true or false, got '" + v + "'");
        }
        return out ? "true" : "false";
    }
    case Kind::Text:
        return v;
    case Kind::RealList: {
        std::string out;
        for (double x : parse_reals(v, where)) {
            out += (out.empty() ? "" : ",") + shortest(x);
        }
        return out;
    }
    }
    return v;
}

std::string json_scalar(const nlohmann::json& v)
{
    if (v.is_string()) {
        return v.get<std::string>();
    }
    if (v.is_boolean()) {
        return v.get<bool>() ? "true" : "false";
    }
    if (v.is_number_integer()) {
        return std::to_string(v.get<long long>());
    }
    if (v.is_number()) {
        return shortest(v.get<double>());
    }
    throw ConfigError("config value must be a scalar, got " + v.dump());
}

} // namespace

std::string shortest(double x)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::string fmt12(double x)
{
    if (std::isnan(x)) {
        return "nan";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x == 0.0 ? 0.0 : x);
    return buf;
}

double parse_real(const std::string& text, const std::string& what)
{
    const std::string v = trim(text);
    double out = 0.0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (v.empty() || res.ec != std::errc() || res.ptr != v.data() + v.size() || !std::isfinite(out)) {
        throw ConfigError(what + ": expected a finite number, got '" + v + "'");
    }
    return out;
}

std::vector<double> parse_reals(const std::string& text, const std::string& what)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!trim(item).empty()) {
            out.push_back(parse_real(item, what));
        }
    }
    return out;
}

Config::Config(std::string section, std::vector<Key> schema) : section_(std::move(section)), schema_(std::move(schema))
{
    for (const Key& k : schema_) {
        values_[k.name] = canonical(k, k.fallback, "default for " + k.name);
    }
}

const Key& Config::find(const std::string& key) const
{
    for (const Key& k : schema_) {
        if (k.name == key) {
            return k;
        }
    }
    throw ConfigError("unknown key '" + key + "' for " + section_);
}

void Config::set(const std::string& key, const std::string& value, const std::string& source)
{
    const Key& k = find(trim(key));
    values_[k.name] = canonical(k, value, source + ": " + k.name);
}

void Config::load_file(const std::string& path, const std::vector<std::string>& known_sections)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read config file '" + path + "'");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string content = buf.str();
    const std::string first = trim(content);

    if (!first.empty() && first.front() == '{') {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(content);
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(path + ": invalid JSON: " + e.what());
        }
        if (!doc.contains("config") || !doc["config"].is_object()) {
            throw ConfigError(path + ": JSON config needs a \"config\" object");
        }
        for (const auto& [k, v] : doc["config"].items()) {
            set(k, json_scalar(v), path);
        }
        return;
    }

    std::istringstream lines(content);
    std::string line;
    std::string current;
    int lineno = 0;
    while (std::getline(lines, line)) {
        ++lineno;
        const std::string where = path + ":" + std::to_string(lineno);
        const auto hash = line.find_first_of("#;");
        const std::string body = trim(hash == std::string::npos ? line : line.substr(0, hash));
        if (body.empty()) {
            continue;
        }
        if (body.front() == '[') {
            if (body.back() != ']') {
                throw ConfigError(where + ": malformed section header '" + body + "'");
            }
            current = trim(body.substr(1, body.size() - 2));
            if (std::find(known_sections.begin(), known_sections.end(), current) == known_sections.end()) {
                throw ConfigError(where + ": unknown section [" + current + "]");
            }
            continue;
        }
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(where + ": expected key = value, got '" + body + "'");
        }
        if (!current.empty() && current != section_) {
            continue;
        }
        const std::string key = trim(body.substr(0, eq));
        try {
            find(key);
        } catch (const ConfigError&) {
            throw ConfigError(where + ": unknown key '" + key + "' for " + section_);
        }
        set(key, body.substr(eq + 1), where);
    }
}

bool Config::has_word(const std::string& key, const std::string& word) const
{
    return raw(key) == word;
}

const std::string& Config::raw(const std::string& key) const
{
    find(key);
    return values_.at(key);
}

double Config::real(const std::string& key) const
{
    return parse_real(raw(key), key);
}

int Config::integer(const std::string& key) const
{
    return std::stoi(raw(key));
}

bool Config::flag(const std::string& key) const
{
    return raw(key) == "true";
}

const std::string& Config::text(const std::string& key) const
{
    return raw(key);
}

std::vector<double> Config::reals(const std::string& key) const
{
    return parse_reals(raw(key), key);
}

std::vector<std::pair<std::string, std::string>> Config::resolved() const
{
    std::vector<std::pair<std::string, std::string>> out;
    for (const Key& k : schema_) {
        out.emplace_back(k.name, values_.at(k.name));
    }
    return out;
}

} // namespace cli
