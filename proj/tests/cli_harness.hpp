#pragma once

// Drives the installed binary through a shell, one scratch directory per
// test, capturing exit code and both streams.

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace cli_harness {

struct Result {
    int code = -1;
    std::string out;
    std::string err;
};

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

inline void write_file(const std::filesystem::path& p, const std::string& content) {
    std::ofstream os(p, std::ios::binary);
    os << content;
}

inline std::filesystem::path fresh_dir(const std::string& tag) {
    static int counter = 0;
    const std::filesystem::path dir =
        std::filesystem::temp_directory_path() /
        ("fraclag_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline Result run_cli(const std::string& args, const std::filesystem::path& cwd) {
    const std::filesystem::path out = cwd / "_stdout.txt";
    const std::filesystem::path err = cwd / "_stderr.txt";
    const std::string cmd = "cd '" + cwd.string() + "' && '" + FRACLAG_BIN + "' " + args + " > '" +
                            out.string() + "' 2> '" + err.string() + "'";
    const int raw = std::system(cmd.c_str());
    Result r;
    if (raw != -1 && WIFEXITED(raw)) {
        r.code = WEXITSTATUS(raw);
    }
    r.out = read_file(out);
    r.err = read_file(err);
    return r;
}

inline std::size_t count_lines(const std::string& text) {
    std::size_t n = 0;
    for (char c : text) {
        if (c == '\n') ++n;
    }
    return n;
}

}  // namespace cli_harness
