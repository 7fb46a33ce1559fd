#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "flipsearch/gf2.hpp"

namespace flipsearch {

// Which flip graph a scheme lives in:
//   standard    - plain l x m x n matrix multiplication tensor
//   marakov     - split tensor with a/b variables spread over the first two
//                 slots by column parity; encodes a commutative product
//                 term-by-term while keeping the ordinary flip moves
//   commutative - quotient of U1 (x) U1 (x) U2 that identifies the first two
//                 slots, so a term is an unordered pair of U1 vectors
enum class Mode { standard, marakov, commutative };

std::string mode_name(Mode m);
std::optional<Mode> mode_from_name(std::string_view s);

struct Dims {
    int l = 0, m = 0, n = 0;
    friend bool operator==(const Dims&, const Dims&) = default;
};

// keeps every slot space within BitVec capacity
inline constexpr int max_size = 7;

bool dims_valid(Dims d);

struct SlotDims {
    uint32_t s1 = 0, s2 = 0, s3 = 0;
    friend bool operator==(const SlotDims&, const SlotDims&) = default;
};

SlotDims slot_dims(Mode mode, Dims d);

// One rank-one summand. Slot vectors live in the mode's slot spaces. In
// commutative mode (u, v) is an unordered pair over U1, stored with
// lex_compare(u, v) <= 0, and w lives over U2.
struct Term {
    BitVec u, v, w;
    friend bool operator==(const Term&, const Term&) = default;
};

// canonical representative of the unordered (u, v) pair
Term canonical_comm(Term t);

struct Scheme {
    Mode mode = Mode::standard;
    Dims dims;
    std::vector<Term> terms;

    int rank() const { return static_cast<int>(terms.size()); }
    friend bool operator==(const Scheme&, const Scheme&) = default;
};

// Basis bookkeeping. Variable indices i, j, k are 1-based (i over rows of A,
// j over columns of A / rows of B, k over columns of B); bit indices are
// 0-based positions inside a slot space. The orderings are part of the file
// format contract:
//   a block: a_11 .. a_1m, a_21 .. a_lm          (row-major)
//   b block: b_11 .. b_1n, b_21 .. b_mn          (row-major)
//   c block: c_11 .. c_1l, c_21 .. c_nl          (row-major; basis vector
//            c_ki pairs with output entry C_ik)
//   standard:    slot1 = a block, slot2 = b block, slot3 = c block
//   marakov:     slot1 = a's with odd j then b's with even j, slot2 = a's
//                with even j then b's with odd j (each row-major among the
//                surviving indices), slot3 = c block
//   commutative: U1 = a block then b block (slots 1 and 2), U2 = c block
struct SlotCoord {
    int slot;        // 0-based slot of the unit vector; for commutative mode,
                     // 0 marks the a-side and 1 the b-side of a product term
                     // (both indices address the same U1 space)
    uint32_t index;  // bit position inside that slot space
};

SlotCoord a_coord(Mode mode, Dims d, int i, int j);
SlotCoord b_coord(Mode mode, Dims d, int j, int k);
uint32_t c_index(Dims d, int k, int i);

// name of basis element `index` of slot `slot` ("A_ij", "B_jk" or "C_ik",
// 1-based); used by rendering and mismatch diagnostics
std::string slot_label(Mode mode, Dims d, int slot, uint32_t index);

// the rank-one summand of the mode's target for multiplicand triple (i, j, k)
Term standard_term(Mode mode, Dims d, int i, int j, int k);

// full definitional scheme of rank l*m*n: all (i, j, k) in row-major order
Scheme standard_scheme(Mode mode, Dims d);

// Dense GF(2) coefficient array of a full tensor. Standard/marakov lay rows
// out as slot1 x slot2 with packed slot3 bits per row; commutative lays rows
// out as unordered U1 index pairs (i <= j, row-major upper triangle) with
// packed U2 bits per row.
class DenseTensor {
public:
    DenseTensor() = default;

    static DenseTensor zero(Mode mode, Dims d);
    static DenseTensor target(Mode mode, Dims d);

    void xor_term(const Term& t);
    DenseTensor& operator^=(const DenseTensor& o);

    bool is_zero() const;
    uint32_t rows() const { return rows_; }
    bool test(uint32_t row, uint32_t bit) const;

    // first set coordinate as (row, bit), or nothing when zero
    std::optional<std::pair<uint32_t, uint32_t>> first_set() const;
    // human-readable coordinate name, e.g. "(A_11, B_12, C_21)"
    std::string coord_label(uint32_t row, uint32_t bit) const;

    friend bool operator==(const DenseTensor&, const DenseTensor&) = default;

private:
    Mode mode_ = Mode::standard;
    Dims dims_;
    SlotDims sd_;
    uint32_t rows_ = 0, words_ = 0;
    std::vector<uint64_t> bits_;

    void xor_row(uint32_t row, const BitVec& w);
    uint32_t sym_row(uint32_t i, uint32_t j) const;  // i <= j
};

// image of p (x) q (x) w in the quotient space, as a commutative-shaped tensor
DenseTensor sym_embed(const BitVec& p, const BitVec& q, const BitVec& w, Dims d);

// XOR of the embeddings of all terms
DenseTensor embed_sum(const Scheme& s);

// true when the scheme's terms sum to its mode's target
bool verify(const Scheme& s);

// empty when verified; otherwise describes the first mismatching coordinate
std::optional<std::string> verify_mismatch(const Scheme& s);

}  // namespace flipsearch
