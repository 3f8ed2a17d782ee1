#pragma once

#include <string>
#include <vector>

namespace xlab {

/// One `section.key = value` assignment and the line it came from.
struct ConfigEntry {
    std::string key;
    std::string value;
    std::size_t line = 0;
};

/// Parses the key-value config grammar: one `section.key = value` per line,
/// `#` starts a comment, blank lines ignored. Keys are not interpreted here.
std::vector<ConfigEntry> parse_kv_text(const std::string& text);

std::vector<ConfigEntry> parse_kv_file(const std::string& path);

}  // namespace xlab
