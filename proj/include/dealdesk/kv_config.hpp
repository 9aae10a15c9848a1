#pragma once

#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dealdesk {

/// `key = value` lines; `#` starts a comment, values may be double-quoted.
/// Later keys overwrite earlier ones in place; entries keep file order.
class KeyValueConfig {
public:
    static KeyValueConfig parse(std::istream& in);
    static KeyValueConfig load(const std::string& path);

    bool contains(std::string_view key) const { return get(key).has_value(); }
    std::optional<std::string> get(std::string_view key) const;
    const std::vector<std::pair<std::string, std::string>>& entries() const noexcept { return entries_; }

    void set(std::string key, std::string value);

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

}  // namespace dealdesk
