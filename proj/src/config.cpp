#include "plis/config.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "plis/error.hpp"

namespace plis {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_top_level(const std::string& s, char separator) {
    std::vector<std::string> out;
    std::string current;
    int depth = 0;
    for (char ch : s) {
        if (ch == '[' || ch == '(') {
            ++depth;
        } else if (ch == ']' || ch == ')') {
            --depth;
        }
        if (ch == separator && depth == 0) {
            auto piece = trim(current);
            if (!piece.empty()) {
                out.push_back(piece);
            }
            current.clear();
        } else {
            current.push_back(ch);
        }
    }
    auto piece = trim(current);
    if (!piece.empty()) {
        out.push_back(piece);
    }
    return out;
}

std::string format_double(double value) {
    if (std::isinf(value)) {
        return value > 0 ? "inf" : "-inf";
    }
    if (std::isnan(value)) {
        return "nan";
    }
    char buffer[64];
    const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, result.ptr);
}

double parse_double(const std::string& text, const std::string& context) {
    const auto t = trim(text);
    if (t.empty()) {
        throw Error(ErrorKind::parse_error, context + ": empty number");
    }
    char* end = nullptr;
    errno = 0;
    const double value = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size() || errno == ERANGE) {
        throw Error(ErrorKind::parse_error, context + ": cannot read '" + t + "' as a number");
    }
    return value;
}

KeyValueConfig KeyValueConfig::parse(const std::string& text, const std::string& source) {
    KeyValueConfig config;
    config.source_ = source;
    std::istringstream in(text);
    std::string line;
    int line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorKind::parse_error, source + ":" + std::to_string(line_number) + ": expected 'key = value'");
        }
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw Error(ErrorKind::parse_error, source + ":" + std::to_string(line_number) + ": empty key");
        }
        if (config.has(key)) {
            throw Error(ErrorKind::parse_error,
                        source + ":" + std::to_string(line_number) + ": duplicate key '" + key + "'");
        }
        config.set(key, value);
    }
    return config;
}

KeyValueConfig KeyValueConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::io_error, "cannot open '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str(), path);
}

const std::string& KeyValueConfig::get(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) {
        throw Error(ErrorKind::config_error, source_ + ": missing key '" + key + "'");
    }
    return it->second;
}

std::optional<std::string> KeyValueConfig::find(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::string KeyValueConfig::get_string(const std::string& key, const std::string& fallback) const {
    return has(key) ? get(key) : fallback;
}

double KeyValueConfig::get_double(const std::string& key) const {
    try {
        return parse_double(get(key), source_ + ": key '" + key + "'");
    } catch (const Error& e) {
        throw Error(ErrorKind::config_error, e.what());
    }
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

long long KeyValueConfig::get_int(const std::string& key) const {
    const auto& text = get(key);
    long long value = 0;
    const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
    if (result.ec != std::errc() || result.ptr != text.data() + text.size()) {
        throw Error(ErrorKind::config_error, source_ + ": key '" + key + "' is not an integer: '" + text + "'");
    }
    return value;
}

long long KeyValueConfig::get_int(const std::string& key, long long fallback) const {
    return has(key) ? get_int(key) : fallback;
}

bool KeyValueConfig::get_bool(const std::string& key, bool fallback) const {
    if (!has(key)) {
        return fallback;
    }
    const auto& v = get(key);
    if (v == "true" || v == "1" || v == "yes") {
        return true;
    }
    if (v == "false" || v == "0" || v == "no") {
        return false;
    }
    throw Error(ErrorKind::config_error, source_ + ": key '" + key + "' is not a boolean: '" + v + "'");
}

void KeyValueConfig::set(const std::string& key, const std::string& value) {
    if (!has(key)) {
        order_.push_back(key);
    }
    values_[key] = value;
}

void KeyValueConfig::set(const std::string& key, double value) {
    set(key, format_double(value));
}

std::string KeyValueConfig::to_string() const {
    std::string out;
    for (const auto& key : order_) {
        out += key + " = " + values_.at(key) + "\n";
    }
    return out;
}

} // namespace plis
