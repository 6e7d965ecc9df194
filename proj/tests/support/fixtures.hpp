#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "rdfex/textio.hpp"

namespace testsupport {

inline std::string read_fixture(const std::string& name) {
    std::string path = std::string(RDFEX_FIXTURE_DIR) + "/" + name;
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("missing fixture " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

inline rdfex::Setting fixture_setting(const std::string& name) {
    auto parsed = rdfex::parse_setting(read_fixture(name), name);
    if (!parsed.ok())
        throw std::runtime_error("fixture " + name + " failed to parse:\n" +
                                 rdfex::join_diagnostics(parsed.diagnostics));
    return *parsed;
}

inline rdfex::SourceInstance fixture_instance(const std::string& name,
                                              const rdfex::RelationalSchema& schema) {
    auto parsed = rdfex::parse_instance(read_fixture(name), schema, name);
    if (!parsed.ok())
        throw std::runtime_error("fixture " + name + " failed to parse:\n" +
                                 rdfex::join_diagnostics(parsed.diagnostics));
    return *parsed;
}

inline rdfex::TypedGraph fixture_graph(const std::string& name) {
    auto parsed = rdfex::parse_graph(read_fixture(name), name);
    if (!parsed.ok())
        throw std::runtime_error("fixture " + name + " failed to parse:\n" +
                                 rdfex::join_diagnostics(parsed.diagnostics));
    return *parsed;
}

}  // namespace testsupport
