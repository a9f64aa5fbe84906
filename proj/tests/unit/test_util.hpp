#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "lsvwip/cadlag.hpp"
#include "lsvwip/rng.hpp"

namespace lsvwip::test {

inline std::filesystem::path fixture(const std::string& name) { return std::filesystem::path(LSVWIP_FIXTURES) / name; }

/// Fresh scratch directory under the test working directory.
inline std::filesystem::path scratch_dir(const std::string& name) {
    const auto dir = std::filesystem::current_path() / "scratch" / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

/// Exit status of a shell command.
inline int run_shell(const std::string& cmd) {
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

/// True when python3's XML parser accepts the file.
inline bool well_formed_xml(const std::filesystem::path& p) {
    const std::string cmd = std::string(LSVWIP_PYTHON) + " -c \"import sys, xml.dom.minidom; xml.dom.minidom.parse(sys.argv[1])\" '" +
                            p.string() + "' > /dev/null 2>&1";
    return run_shell(cmd) == 0;
}

}  // namespace lsvwip::test
