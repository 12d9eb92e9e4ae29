#ifndef PLIS_CONFIG_HPP
#define PLIS_CONFIG_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace plis {

/**
 * Ordered `key = value` text configuration.
 *
 * One entry per line; `#` starts a comment; blank lines are ignored; keys are unique.
 * Values are kept as trimmed strings and converted on access.
 */
class KeyValueConfig {
public:
    static KeyValueConfig parse(const std::string& text, const std::string& source = "<config>");
    static KeyValueConfig load(const std::string& path);

    bool has(const std::string& key) const { return values_.count(key) > 0; }
    const std::string& get(const std::string& key) const;
    std::optional<std::string> find(const std::string& key) const;

    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    long long get_int(const std::string& key) const;
    long long get_int(const std::string& key, long long fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;

    void set(const std::string& key, const std::string& value);
    void set(const std::string& key, double value);

    const std::vector<std::string>& keys() const { return order_; }
    std::string to_string() const;

private:
    std::map<std::string, std::string> values_;
    std::vector<std::string> order_;
    std::string source_ = "<config>";
};

std::string trim(const std::string& s);

/// Splits on `separator` at bracket depth zero, trimming each piece and dropping empty ones.
std::vector<std::string> split_top_level(const std::string& s, char separator);

/// Shortest text that reads back to the same double.
std::string format_double(double value);

double parse_double(const std::string& text, const std::string& context);

} // namespace plis

#endif // PLIS_CONFIG_HPP
