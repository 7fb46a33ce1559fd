#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "flipsearch/tensors.hpp"

namespace flipsearch {

class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

struct ReadResult {
    Scheme scheme;
    bool verified = false;  // whether the scheme reproduces its target
};

// text format: header "mmscheme v1 <mode> <l> <m> <n> <rank> gf2" followed by
// one line per term holding three 0/1 strings (two factors and the output
// vector), LF line endings
void write_scheme(std::ostream& out, const Scheme& s);
void write_scheme_file(const std::string& path, const Scheme& s);

// strict parse; throws ParseError with a 1-based line number on any defect
ReadResult read_scheme(std::istream& in);
ReadResult read_scheme_file(const std::string& path);

// human-readable product list and per-output sums; throws
// std::invalid_argument unless the scheme verifies
std::string render_algorithm(const Scheme& s);

}  // namespace flipsearch
