#pragma once

#include <sstream>
#include <string>
#include <vector>

namespace rdfex {

/// 1-based position attached to parse and validation diagnostics.
struct SourceLocation {
    std::string file;
    int line = 0;
    int column = 0;

    bool known() const { return line > 0; }
    std::string str() const {
        if (!known()) return file.empty() ? std::string("<input>") : file;
        std::ostringstream os;
        os << (file.empty() ? "<input>" : file) << ":" << line << ":" << column;
        return os.str();
    }
};

struct Diagnostic {
    SourceLocation loc;
    std::string message;

    std::string str() const { return loc.str() + ": " + message; }
};

using Diagnostics = std::vector<Diagnostic>;

inline std::string join_diagnostics(const Diagnostics& ds) {
    std::string out;
    for (const auto& d : ds) {
        out += d.str();
        out += '\n';
    }
    return out;
}

}  // namespace rdfex
