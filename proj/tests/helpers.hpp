#pragma once

// shared test utilities: data paths, random-walk scheme generation, and
// (for the acceptance binary) a driver that shells out to the CLI.

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

#include "flipsearch/comm_moves.hpp"
#include "flipsearch/moves.hpp"
#include "flipsearch/tensors.hpp"

namespace testutil {

inline std::string data_path(const std::string& name) {
    return std::string(TEST_DATA_DIR) + "/" + name;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::filesystem::path temp_dir() {
    static std::filesystem::path dir = [] {
        auto d = std::filesystem::temp_directory_path() /
                 ("flipsearch_test_" + std::to_string(::getpid()));
        std::filesystem::create_directories(d);
        return d;
    }();
    return dir;
}

inline std::string temp_path(const std::string& name) {
    static int counter = 0;
    return (temp_dir() / (std::to_string(counter++) + "_" + name)).string();
}

// random verified scheme: walk the flip graph from the standard start;
// every walker move preserves the represented tensor, so the result verifies
inline flipsearch::Scheme random_walk_scheme(flipsearch::Mode mode, flipsearch::Dims dims,
                                             int moves, uint64_t seed) {
    using namespace flipsearch;
    std::mt19937_64 rng(seed);
    if (mode == Mode::commutative) {
        CommWalker w(standard_scheme(mode, dims));
        for (int i = 0; i < moves; i++)
            if (!w.random_flip(rng)) w.random_plus(rng);
        return w.scheme();
    }
    FlipWalker w(standard_scheme(mode, dims));
    for (int i = 0; i < moves; i++)
        if (!w.random_flip(rng)) w.random_plus(rng);
    return w.scheme();
}

#ifdef FLIPSEARCH_CLI

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

inline CliResult run_cli(const std::string& args) {
    std::string out_file = temp_path("stdout.txt");
    std::string err_file = temp_path("stderr.txt");
    std::string cmd =
        std::string(FLIPSEARCH_CLI) + " " + args + " >" + out_file + " 2>" + err_file;
    int status = std::system(cmd.c_str());
    CliResult r;
    r.code = (status >= 0 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
    r.out = read_file(out_file);
    r.err = read_file(err_file);
    return r;
}

#endif

}  // namespace testutil
