#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace grs {

struct DefError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flat key/value definition format with optional [section] headers.
// Lines: `key = value`, `key[i][j] = "expr"`, blank lines, `#` comments.
struct DefEntry {
    std::string section; // "" before any header
    std::string key;     // name without index brackets
    std::vector<int> indices;
    std::string value;   // quotes stripped
    int line = 0;
};

std::vector<DefEntry> parse_def_text(const std::string& text);
std::string read_text_file(const std::string& path);

} // namespace grs
