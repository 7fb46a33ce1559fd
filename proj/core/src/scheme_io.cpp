#include "flipsearch/scheme_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "flipsearch/gf2.hpp"

namespace flipsearch {

namespace {

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
}

int parse_int(const std::string& tok, int line, const char* what) {
    int v = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || p != tok.data() + tok.size())
        throw ParseError(line, std::string("bad ") + what + " '" + tok + "'");
    return v;
}

BitVec parse_bits(const std::string& tok, uint32_t want, int line, const char* what) {
    if (tok.size() != want)
        throw ParseError(line, std::string(what) + " has length " + std::to_string(tok.size()) +
                                   ", expected " + std::to_string(want));
    for (char c : tok)
        if (c != '0' && c != '1')
            throw ParseError(line, std::string(what) + " contains characters other than 0/1");
    return BitVec::parse(tok);
}

}  // namespace

void write_scheme(std::ostream& out, const Scheme& s) {
    out << "mmscheme v1 " << mode_name(s.mode) << ' ' << s.dims.l << ' ' << s.dims.m << ' '
        << s.dims.n << ' ' << s.terms.size() << " gf2\n";
    for (const Term& t : s.terms) {
        const Term c = s.mode == Mode::commutative ? canonical_comm(t) : t;
        out << c.u.to_string() << ' ' << c.v.to_string() << ' ' << c.w.to_string() << '\n';
    }
}

void write_scheme_file(const std::string& path, const Scheme& s) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    write_scheme(out, s);
    out.flush();
    if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

ReadResult read_scheme(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError(1, "missing header");
    auto toks = split_ws(line);
    if (toks.size() != 8) throw ParseError(1, "header must have 8 fields");
    if (toks[0] != "mmscheme") throw ParseError(1, "not a scheme file (bad magic)");
    if (toks[1] != "v1") throw ParseError(1, "unsupported version '" + toks[1] + "'");
    auto mode = mode_from_name(toks[2]);
    if (!mode) throw ParseError(1, "unknown mode '" + toks[2] + "'");
    Dims d{parse_int(toks[3], 1, "dimension"), parse_int(toks[4], 1, "dimension"),
           parse_int(toks[5], 1, "dimension")};
    if (!dims_valid(d)) throw ParseError(1, "dimensions out of supported range");
    int rank = parse_int(toks[6], 1, "rank");
    if (rank < 0) throw ParseError(1, "negative rank");
    if (toks[7] != "gf2") throw ParseError(1, "unsupported field '" + toks[7] + "'");
    SlotDims sd = slot_dims(*mode, d);
    Scheme s{*mode, d, {}};
    s.terms.reserve(static_cast<size_t>(std::min(rank, 4096)));
    for (int t = 0; t < rank; t++) {
        int ln = t + 2;
        if (!std::getline(in, line))
            throw ParseError(ln, "unexpected end of file: expected " + std::to_string(rank) +
                                     " terms, got " + std::to_string(t));
        auto f = split_ws(line);
        if (f.size() != 3) throw ParseError(ln, "term line must have 3 fields");
        Term term{parse_bits(f[0], sd.s1, ln, "first factor"),
                  parse_bits(f[1], sd.s2, ln, "second factor"),
                  parse_bits(f[2], sd.s3, ln, "output vector")};
        if (*mode == Mode::commutative &&
            lex_compare(term.u, term.v) == std::strong_ordering::greater)
            throw ParseError(ln, "factors not in canonical order");
        s.terms.push_back(std::move(term));
    }
    int ln = rank + 2;
    while (std::getline(in, line)) {
        if (!split_ws(line).empty()) throw ParseError(ln, "trailing content after last term");
        ln++;
    }
    ReadResult r{std::move(s), false};
    r.verified = verify(r.scheme);
    return r;
}

ReadResult read_scheme_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    return read_scheme(in);
}

std::string render_algorithm(const Scheme& s) {
    if (!verify(s)) throw std::invalid_argument("render_algorithm: scheme does not verify");
    auto factor = [&](const BitVec& v, int slot) {
        std::string f = "(";
        bool first = true;
        v.for_each_set([&](uint32_t i) {
            if (!first) f += " + ";
            f += slot_label(s.mode, s.dims, slot, i);
            first = false;
        });
        return f + ")";
    };
    std::string out;
    for (size_t t = 0; t < s.terms.size(); t++)
        out += "m_" + std::to_string(t + 1) + " = " + factor(s.terms[t].u, 0) +
               factor(s.terms[t].v, 1) + "\n";
    for (int i = 1; i <= s.dims.l; i++) {
        for (int k = 1; k <= s.dims.n; k++) {
            uint32_t ci = c_index(s.dims, k, i);
            std::string line = slot_label(s.mode, s.dims, 2, ci) + " =";
            bool any = false;
            for (size_t t = 0; t < s.terms.size(); t++) {
                if (s.terms[t].w.test(ci)) {
                    line += any ? " + m_" : " m_";
                    line += std::to_string(t + 1);
                    any = true;
                }
            }
            if (!any) line += " 0";
            out += line + "\n";
        }
    }
    return out;
}

}  // namespace flipsearch
