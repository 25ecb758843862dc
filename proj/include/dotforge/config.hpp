#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace dotforge::config {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// INI-style key=value sections; '#' and ';' start comments. Keys are tracked as they
// are consumed so that typos can be rejected and the effective configuration can be
// re-emitted in a reparseable form.
class Config {
  public:
    Config() = default;
    static Config parse_file(const std::string& path);
    static Config parse_text(const std::string& text, const std::string& origin = "<inline>");

    // command-line overrides of the form section.key=value
    void set_override(const std::string& dotted, const std::string& value);

    double get_double(const std::string& section, const std::string& key, double fallback) const;
    int get_int(const std::string& section, const std::string& key, int fallback) const;
    std::string get_string(const std::string& section, const std::string& key,
                           const std::string& fallback) const;
    std::vector<double> get_list(const std::string& section, const std::string& key,
                                 const std::vector<double>& fallback) const;

    bool has(const std::string& section, const std::string& key) const;

    // every key present in the file/overrides must have been consumed by a getter
    void reject_unknown() const;

    // effective configuration: every consumed key with the value actually used
    std::string effective() const;

  private:
    std::map<std::string, std::map<std::string, std::string>> values_;
    mutable std::map<std::string, std::map<std::string, std::string>> effective_;
    mutable std::map<std::string, std::map<std::string, bool>> consumed_;

    const std::string* lookup(const std::string& section, const std::string& key) const;
};

std::string format_g9(double v);  // fixed 9-significant-digit float formatting
std::string format_g17(double v); // round-trippable

// A CSV/JSON emittable table with deterministic ordering.
struct Table {
    using Cell = std::variant<double, std::string>;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add_row(std::vector<Cell> cells);
    std::string to_csv() const;  // header + rows, LF endings, %.9g floats
    std::string to_json() const; // array of objects mirroring the CSV content
};

} // namespace dotforge::config
