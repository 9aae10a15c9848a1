#include "dealdesk/kv_config.hpp"

#include <fstream>

#include "dealdesk/csv.hpp"
#include "dealdesk/error.hpp"

namespace dealdesk {

KeyValueConfig KeyValueConfig::parse(std::istream& in) {
    KeyValueConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string body = line;
        bool in_quote = false;
        for (std::size_t i = 0; i < body.size(); ++i) {
            if (body[i] == '"') in_quote = !in_quote;
            if (body[i] == '#' && !in_quote) {
                body.resize(i);
                break;
            }
        }
        body = csv::trim(body);
        if (body.empty()) continue;
        auto eq = body.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorKind::ConfigInvalid, "line " + std::to_string(lineno) + ": expected key = value");
        std::string key = csv::trim(body.substr(0, eq));
        std::string value = csv::trim(body.substr(eq + 1));
        if (key.empty()) throw Error(ErrorKind::ConfigInvalid, "line " + std::to_string(lineno) + ": empty key");
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
        cfg.set(std::move(key), std::move(value));
    }
    return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::ConfigInvalid, "cannot open config file " + path);
    return parse(in);
}

std::optional<std::string> KeyValueConfig::get(std::string_view key) const {
    for (const auto& [k, v] : entries_)
        if (k == key) return v;
    return std::nullopt;
}

void KeyValueConfig::set(std::string key, std::string value) {
    for (auto& [k, v] : entries_) {
        if (k == key) {
            v = std::move(value);
            return;
        }
    }
    entries_.emplace_back(std::move(key), std::move(value));
}

}  // namespace dealdesk
