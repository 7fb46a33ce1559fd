#pragma once

// independent symbolic oracle: parse the rendered algorithm text and check,
// by GF(2) polynomial arithmetic on variable labels, that every output entry
// equals sum_j A_ij * B_jk.  Non-commutative renderings keep (A,B) products
// ordered; commutative ones treat xy = yx.

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "flipsearch/tensors.hpp"

namespace testutil {

using Monomial = std::pair<std::string, std::string>;
using Poly = std::set<Monomial>;  // GF(2): monomial present = coefficient 1

inline void poly_xor(Poly& p, const Monomial& m) {
    auto it = p.find(m);
    if (it == p.end())
        p.insert(m);
    else
        p.erase(it);
}

inline std::vector<std::string> split_labels(const std::string& factor) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : factor) {
        if (c == ' ' || c == '+') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

// returns "" on success, else a description of the first defect
inline std::string check_rendered(const flipsearch::Scheme& s, const std::string& text) {
    using namespace flipsearch;
    // only the standard layout keeps every A entry left of its B partner;
    // the split and quotient layouts are valid over commuting entries
    bool comm = s.mode != Mode::standard;

    std::vector<Poly> products;       // m_1.. in order
    std::map<std::string, Poly> outputs;  // C_ik -> polynomial

    std::string line;
    size_t start = 0;
    while (start < text.size()) {
        size_t end = text.find('\n', start);
        if (end == std::string::npos) end = text.size();
        line = text.substr(start, end - start);
        start = end + 1;
        if (line.empty()) continue;

        size_t eq = line.find(" = ");
        if (eq == std::string::npos) return "line without ' = ': " + line;
        std::string lhs = line.substr(0, eq);
        std::string rhs = line.substr(eq + 3);

        if (lhs.rfind("m_", 0) == 0) {
            size_t open1 = rhs.find('('), close1 = rhs.find(')');
            size_t open2 = rhs.find('(', close1), close2 = rhs.rfind(')');
            if (open1 != 0 || close1 == std::string::npos || open2 != close1 + 1 ||
                close2 != rhs.size() - 1 || close2 <= open2)
                return "malformed product: " + line;
            auto left = split_labels(rhs.substr(open1 + 1, close1 - open1 - 1));
            auto right = split_labels(rhs.substr(open2 + 1, close2 - open2 - 1));
            size_t idx = std::stoul(lhs.substr(2));
            if (idx != products.size() + 1) return "products out of order at " + lhs;
            Poly p;
            for (const auto& x : left)
                for (const auto& y : right) {
                    Monomial m = comm && y < x ? Monomial{y, x} : Monomial{x, y};
                    poly_xor(p, m);
                }
            products.push_back(std::move(p));
        } else if (lhs.rfind("C_", 0) == 0) {
            Poly p;
            for (const auto& tok : split_labels(rhs)) {
                if (tok == "0") continue;
                if (tok.rfind("m_", 0) != 0) return "bad term in " + line;
                size_t idx = std::stoul(tok.substr(2));
                if (idx < 1 || idx > products.size()) return "undefined product in " + line;
                for (const auto& m : products[idx - 1]) poly_xor(p, m);
            }
            if (outputs.count(lhs)) return "duplicate output " + lhs;
            outputs[lhs] = std::move(p);
        } else {
            return "unrecognized line: " + line;
        }
    }

    if (products.size() != s.terms.size()) return "product count mismatch";

    for (int i = 1; i <= s.dims.l; i++) {
        for (int k = 1; k <= s.dims.n; k++) {
            std::string name = "C_" + std::to_string(i) + std::to_string(k);
            auto it = outputs.find(name);
            if (it == outputs.end()) return "missing output " + name;
            Poly expect;
            for (int j = 1; j <= s.dims.m; j++) {
                std::string a = "A_" + std::to_string(i) + std::to_string(j);
                std::string b = "B_" + std::to_string(j) + std::to_string(k);
                Monomial m = comm && b < a ? Monomial{b, a} : Monomial{a, b};
                poly_xor(expect, m);
            }
            if (it->second != expect) return name + " does not equal the matrix product";
            outputs.erase(it);
        }
    }
    if (!outputs.empty()) return "unexpected output " + outputs.begin()->first;
    return "";
}

}  // namespace testutil
