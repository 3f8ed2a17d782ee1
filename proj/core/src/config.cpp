#include "xlab/config.hpp"

#include <fstream>
#include <sstream>

#include "xlab/errors.hpp"

namespace xlab {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<ConfigEntry> parse_kv_text(const std::string& text) {
    std::vector<ConfigEntry> out;
    std::stringstream ss(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(ss, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": expected 'section.key = value', got '" + stripped + "'");
        ConfigEntry e;
        e.key = trim(stripped.substr(0, eq));
        e.value = trim(stripped.substr(eq + 1));
        e.line = line_no;
        if (e.key.empty() || e.key.find('.') == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": key must look like section.key, got '" + e.key + "'");
        out.push_back(std::move(e));
    }
    return out;
}

std::vector<ConfigEntry> parse_kv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_kv_text(buf.str());
}

}  // namespace xlab
