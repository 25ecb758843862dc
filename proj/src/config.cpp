#include "dotforge/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace dotforge::config {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

} // namespace

Config Config::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_text(ss.str(), path);
}

Config Config::parse_text(const std::string& text, const std::string& origin) {
    Config cfg;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key=value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
        cfg.values_[section][key] = value;
    }
    return cfg;
}

void Config::set_override(const std::string& dotted, const std::string& value) {
    size_t d = dotted.find('.');
    if (d == std::string::npos)
        throw ConfigError("config: override '" + dotted + "' must be section.key=value");
    values_[dotted.substr(0, d)][dotted.substr(d + 1)] = value;
}

const std::string* Config::lookup(const std::string& section, const std::string& key) const {
    auto s = values_.find(section);
    if (s == values_.end()) return nullptr;
    auto k = s->second.find(key);
    if (k == s->second.end()) return nullptr;
    consumed_[section][key] = true;
    return &k->second;
}

bool Config::has(const std::string& section, const std::string& key) const {
    auto s = values_.find(section);
    return s != values_.end() && s->second.count(key) > 0;
}

double Config::get_double(const std::string& section, const std::string& key, double fallback) const {
    const std::string* v = lookup(section, key);
    double out = fallback;
    if (v) {
        try {
            size_t pos = 0;
            out = std::stod(*v, &pos);
            if (pos != v->size()) throw std::invalid_argument("");
        } catch (...) {
            throw ConfigError("config: [" + section + "] " + key + ": expected a number, got '" + *v + "'");
        }
    }
    effective_[section][key] = format_g17(out);
    return out;
}

int Config::get_int(const std::string& section, const std::string& key, int fallback) const {
    const std::string* v = lookup(section, key);
    int out = fallback;
    if (v) {
        try {
            size_t pos = 0;
            out = std::stoi(*v, &pos);
            if (pos != v->size()) throw std::invalid_argument("");
        } catch (...) {
            throw ConfigError("config: [" + section + "] " + key + ": expected an integer, got '" + *v +
                              "'");
        }
    }
    effective_[section][key] = std::to_string(out);
    return out;
}

std::string Config::get_string(const std::string& section, const std::string& key,
                               const std::string& fallback) const {
    const std::string* v = lookup(section, key);
    std::string out = v ? *v : fallback;
    effective_[section][key] = out;
    return out;
}

std::vector<double> Config::get_list(const std::string& section, const std::string& key,
                                     const std::vector<double>& fallback) const {
    const std::string* v = lookup(section, key);
    std::vector<double> out;
    if (!v) {
        out = fallback;
    } else {
        std::stringstream ss(*v);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (item.empty()) continue;
            try {
                size_t pos = 0;
                out.push_back(std::stod(item, &pos));
                if (pos != item.size()) throw std::invalid_argument("");
            } catch (...) {
                throw ConfigError("config: [" + section + "] " + key + ": bad list element '" + item +
                                  "'");
            }
        }
        if (out.empty())
            throw ConfigError("config: [" + section + "] " + key + ": empty list");
    }
    std::string joined;
    for (size_t i = 0; i < out.size(); ++i)
        joined += (i ? "," : "") + format_g17(out[i]);
    effective_[section][key] = joined;
    return out;
}

void Config::reject_unknown() const {
    for (const auto& [section, kv] : values_)
        for (const auto& [key, value] : kv)
            if (!consumed_.count(section) || !consumed_.at(section).count(key))
                throw ConfigError("config: unknown key [" + section + "] " + key);
}

std::string Config::effective() const {
    std::string out;
    for (const auto& [section, kv] : effective_) {
        out += "[" + section + "]\n";
        for (const auto& [key, value] : kv) out += key + "=" + value + "\n";
    }
    return out;
}

std::string format_g9(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void Table::add_row(std::vector<Cell> cells) {
    if (cells.size() != columns.size())
        throw std::invalid_argument("Table: row width does not match header");
    rows.push_back(std::move(cells));
}

std::string Table::to_csv() const {
    std::string out;
    for (size_t i = 0; i < columns.size(); ++i) out += (i ? "," : "") + columns[i];
    out += "\n";
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) out += ",";
            if (std::holds_alternative<double>(row[i]))
                out += format_g9(std::get<double>(row[i]));
            else
                out += std::get<std::string>(row[i]);
        }
        out += "\n";
    }
    return out;
}

std::string Table::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& row : rows) {
        nlohmann::json obj;
        for (size_t i = 0; i < row.size(); ++i) {
            if (std::holds_alternative<double>(row[i])) {
                // repformat so the JSON mirrors the CSV precision
                obj[columns[i]] = std::stod(format_g9(std::get<double>(row[i])));
            } else {
                obj[columns[i]] = std::get<std::string>(row[i]);
            }
        }
        arr.push_back(obj);
    }
    return arr.dump(2) + "\n";
}

} // namespace dotforge::config
