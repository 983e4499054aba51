#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "eqfd/error.hpp"
#include "eqfd/io.hpp"

// Config files are INI-style:
//
//   # comment
//   command = mesh1d
//   [mesh]
//   segments = 50
//   [weight]
//   type = gaussian_well
//
// A key inside [section] is addressed as "section.key". Every key must be
// declared in the command's schema; values are typed and canonicalized, and
// the resolved set (defaults filled in) is what gets written as a manifest.

namespace eqfd::config {

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(ErrorKind::input, what) {}
};

enum class ValueType { real, integer, boolean, text, real_list };

struct KeySpec {
    std::string key;
    ValueType type;
    std::string fallback;
    std::vector<std::string> choices{};
};

struct Entry {
    std::string key;
    std::string value;
    int line = 0;
};

namespace detail {

inline std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

inline double parse_real(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    double v = 0.0;
    const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || end != t.data() + t.size() || t.empty() || !std::isfinite(v)) {
        throw ConfigError("'" + key + "': expected a real number, got '" + text + "'");
    }
    return v;
}

inline long long parse_integer(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    long long v = 0;
    const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || end != t.data() + t.size() || t.empty()) {
        throw ConfigError("'" + key + "': expected an integer, got '" + text + "'");
    }
    return v;
}

inline bool parse_bool(const std::string& key, const std::string& text) {
    std::string t = trim(text);
    std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
    if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
    if (t == "false" || t == "0" || t == "no" || t == "off") return false;
    throw ConfigError("'" + key + "': expected a boolean, got '" + text + "'");
}

inline std::vector<double> parse_list(const std::string& key, const std::string& text) {
    std::vector<double> out;
    const std::string t = trim(text);
    if (t.empty()) return out;
    std::stringstream ss(t);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_real(key, item));
    return out;
}

inline std::string canonical(const KeySpec& spec, const std::string& raw) {
    switch (spec.type) {
        case ValueType::real: return format_double(parse_real(spec.key, raw));
        case ValueType::integer: return std::to_string(parse_integer(spec.key, raw));
        case ValueType::boolean: return parse_bool(spec.key, raw) ? "true" : "false";
        case ValueType::real_list: {
            std::string out;
            for (double v : parse_list(spec.key, raw)) out += (out.empty() ? "" : ", ") + format_double(v);
            return out;
        }
        case ValueType::text: {
            std::string t = trim(raw);
            if (!spec.choices.empty() && std::find(spec.choices.begin(), spec.choices.end(), t) == spec.choices.end()) {
                std::string allowed;
                for (const auto& c : spec.choices) allowed += (allowed.empty() ? "" : "|") + c;
                throw ConfigError("'" + spec.key + "': '" + t + "' is not one of " + allowed);
            }
            return t;
        }
    }
    return raw;
}

}  // namespace detail

/// Raw key/value pairs in file order.
inline std::vector<Entry> parse(std::istream& in, const std::string& source = "<config>") {
    std::vector<Entry> entries;
    std::string section;
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        const std::string t = detail::trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']') throw ConfigError(source + ":" + std::to_string(number) + ": unterminated section");
            section = detail::trim(std::string_view(t).substr(1, t.size() - 2));
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(source + ":" + std::to_string(number) + ": expected 'key = value'");
        }
        std::string key = detail::trim(std::string_view(t).substr(0, eq));
        if (key.empty()) throw ConfigError(source + ":" + std::to_string(number) + ": empty key");
        if (!section.empty()) key = section + "." + key;
        for (const auto& e : entries) {
            if (e.key == key) throw ConfigError(source + ":" + std::to_string(number) + ": duplicate key '" + key + "'");
        }
        entries.push_back({key, detail::trim(std::string_view(t).substr(eq + 1)), number});
    }
    return entries;
}

inline std::vector<Entry> load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
    return parse(in, path.string());
}

/// Schema-checked configuration with every declared key present.
class Resolved {
public:
    Resolved(std::span<const KeySpec> schema, const std::vector<Entry>& entries) : schema_(schema.begin(), schema.end()) {
        for (const auto& e : entries) {
            if (!find(e.key)) {
                throw ConfigError("unknown key '" + e.key + "'" + (e.line ? " (line " + std::to_string(e.line) + ")" : ""));
            }
        }
        for (const auto& spec : schema_) {
            const auto it = std::find_if(entries.begin(), entries.end(), [&](const Entry& e) { return e.key == spec.key; });
            values_.push_back(detail::canonical(spec, it != entries.end() ? it->value : spec.fallback));
        }
    }

    void set(const std::string& key, const std::string& raw) {
        const auto idx = index(key);
        values_[idx] = detail::canonical(schema_[idx], raw);
    }

    const std::string& text(const std::string& key) const { return values_[index(key)]; }
    double real(const std::string& key) const { return detail::parse_real(key, text(key)); }
    long long integer(const std::string& key) const { return detail::parse_integer(key, text(key)); }
    bool boolean(const std::string& key) const { return detail::parse_bool(key, text(key)); }
    std::vector<double> reals(const std::string& key) const { return detail::parse_list(key, text(key)); }

    std::size_t count(const std::string& key) const {
        const auto v = integer(key);
        if (v < 0) throw ValidationError("'" + key + "' must be non-negative");
        return static_cast<std::size_t>(v);
    }

    /// Re-loadable INI text: top-level keys first, then one block per section.
    void write(std::ostream& os) const {
        os << "# eqfd run manifest (fully resolved configuration)\n";
        std::vector<std::string> sections;
        for (std::size_t i = 0; i < schema_.size(); ++i) {
            const auto dot = schema_[i].key.find('.');
            if (dot == std::string::npos) {
                os << schema_[i].key << " = " << values_[i] << '\n';
            } else if (const auto s = schema_[i].key.substr(0, dot);
                       std::find(sections.begin(), sections.end(), s) == sections.end()) {
                sections.push_back(s);
            }
        }
        for (const auto& s : sections) {
            os << "\n[" << s << "]\n";
            for (std::size_t i = 0; i < schema_.size(); ++i) {
                const auto& key = schema_[i].key;
                if (key.size() > s.size() && key.compare(0, s.size(), s) == 0 && key[s.size()] == '.' &&
                    key.find('.', s.size() + 1) == std::string::npos) {
                    os << key.substr(s.size() + 1) << " = " << values_[i] << '\n';
                }
            }
        }
    }

private:
    const KeySpec* find(const std::string& key) const {
        const auto it = std::find_if(schema_.begin(), schema_.end(), [&](const KeySpec& s) { return s.key == key; });
        return it == schema_.end() ? nullptr : &*it;
    }

    std::size_t index(const std::string& key) const {
        const auto* spec = find(key);
        if (!spec) throw ConfigError("key '" + key + "' is not part of this command's schema");
        return static_cast<std::size_t>(spec - schema_.data());
    }

    std::vector<KeySpec> schema_;
    std::vector<std::string> values_;
};

}  // namespace eqfd::config
