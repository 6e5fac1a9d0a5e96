#include "deffile.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace grs {

namespace {
std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}
} // namespace

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DefError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<DefEntry> parse_def_text(const std::string& text) {
    std::vector<DefEntry> entries;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[' && line.back() == ']') {
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw DefError("empty section name at line " + std::to_string(lineno));
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw DefError("expected 'key = value' at line " + std::to_string(lineno));
        std::string lhs = trim(line.substr(0, eq));
        std::string rhs = trim(line.substr(eq + 1));
        if (rhs.size() >= 2 && rhs.front() == '"' && rhs.back() == '"')
            rhs = rhs.substr(1, rhs.size() - 2);
        if (lhs.empty() || rhs.empty())
            throw DefError("empty key or value at line " + std::to_string(lineno));

        DefEntry e;
        e.section = section;
        e.line = lineno;
        e.value = rhs;
        std::size_t br = lhs.find('[');
        e.key = trim(lhs.substr(0, br));
        while (br != std::string::npos) {
            std::size_t close = lhs.find(']', br);
            if (close == std::string::npos)
                throw DefError("unterminated index bracket at line " + std::to_string(lineno));
            std::string num = trim(lhs.substr(br + 1, close - br - 1));
            try {
                e.indices.push_back(std::stoi(num));
            } catch (const std::exception&) {
                throw DefError("bad index '" + num + "' at line " + std::to_string(lineno));
            }
            br = lhs.find('[', close);
        }
        if (e.key.empty())
            throw DefError("missing key name at line " + std::to_string(lineno));
        entries.push_back(std::move(e));
    }
    return entries;
}

} // namespace grs
