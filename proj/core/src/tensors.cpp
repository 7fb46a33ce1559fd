#include "flipsearch/tensors.hpp"

#include <stdexcept>
#include <utility>

namespace flipsearch {

std::string mode_name(Mode m) {
    switch (m) {
        case Mode::standard: return "standard";
        case Mode::marakov: return "marakov";
        case Mode::commutative: return "commutative";
    }
    throw std::logic_error("mode_name: bad mode");
}

std::optional<Mode> mode_from_name(std::string_view s) {
    if (s == "standard") return Mode::standard;
    if (s == "marakov") return Mode::marakov;
    if (s == "commutative") return Mode::commutative;
    return std::nullopt;
}

bool dims_valid(Dims d) {
    return d.l >= 1 && d.l <= max_size && d.m >= 1 && d.m <= max_size &&
           d.n >= 1 && d.n <= max_size;
}

static void check_dims(Dims d) {
    if (!dims_valid(d))
        throw std::invalid_argument("dims out of supported range");
}

// counts of odd / even column indices j in 1..m
static uint32_t odd_count(int m) { return static_cast<uint32_t>((m + 1) / 2); }
static uint32_t even_count(int m) { return static_cast<uint32_t>(m / 2); }

SlotDims slot_dims(Mode mode, Dims d) {
    check_dims(d);
    auto l = static_cast<uint32_t>(d.l), m = static_cast<uint32_t>(d.m),
         n = static_cast<uint32_t>(d.n);
    switch (mode) {
        case Mode::standard:
            return {l * m, m * n, n * l};
        case Mode::marakov: {
            uint32_t om = odd_count(d.m), em = even_count(d.m);
            return {l * om + em * n, l * em + om * n, n * l};
        }
        case Mode::commutative:
            return {l * m + m * n, l * m + m * n, n * l};
    }
    throw std::logic_error("slot_dims: bad mode");
}

SlotCoord a_coord(Mode mode, Dims d, int i, int j) {
    check_dims(d);
    if (i < 1 || i > d.l || j < 1 || j > d.m)
        throw std::out_of_range("a_coord: index out of range");
    auto idx = static_cast<uint32_t>((i - 1) * d.m + (j - 1));
    switch (mode) {
        case Mode::standard:
        case Mode::commutative:
            return {0, idx};
        case Mode::marakov: {
            uint32_t om = odd_count(d.m), em = even_count(d.m);
            if (j % 2 == 1)
                return {0, static_cast<uint32_t>(i - 1) * om + static_cast<uint32_t>((j - 1) / 2)};
            return {1, static_cast<uint32_t>(i - 1) * em + static_cast<uint32_t>(j / 2 - 1)};
        }
    }
    throw std::logic_error("a_coord: bad mode");
}

SlotCoord b_coord(Mode mode, Dims d, int j, int k) {
    check_dims(d);
    if (j < 1 || j > d.m || k < 1 || k > d.n)
        throw std::out_of_range("b_coord: index out of range");
    auto idx = static_cast<uint32_t>((j - 1) * d.n + (k - 1));
    switch (mode) {
        case Mode::standard:
            return {1, idx};
        case Mode::commutative:
            return {1, static_cast<uint32_t>(d.l * d.m) + idx};
        case Mode::marakov: {
            uint32_t om = odd_count(d.m), em = even_count(d.m);
            auto l = static_cast<uint32_t>(d.l), n = static_cast<uint32_t>(d.n);
            if (j % 2 == 0)
                return {0, l * om + static_cast<uint32_t>(j / 2 - 1) * n + static_cast<uint32_t>(k - 1)};
            return {1, l * em + static_cast<uint32_t>((j - 1) / 2) * n + static_cast<uint32_t>(k - 1)};
        }
    }
    throw std::logic_error("b_coord: bad mode");
}

uint32_t c_index(Dims d, int k, int i) {
    check_dims(d);
    if (k < 1 || k > d.n || i < 1 || i > d.l)
        throw std::out_of_range("c_index: index out of range");
    return static_cast<uint32_t>((k - 1) * d.l + (i - 1));
}

static std::string var_label(char kind, int first, int second) {
    return std::string(1, kind) + "_" + std::to_string(first) + std::to_string(second);
}

std::string slot_label(Mode mode, Dims d, int slot, uint32_t index) {
    check_dims(d);
    auto l = static_cast<uint32_t>(d.l), m = static_cast<uint32_t>(d.m),
         n = static_cast<uint32_t>(d.n);
    SlotDims sd = slot_dims(mode, d);
    uint32_t size = slot == 0 ? sd.s1 : slot == 1 ? sd.s2 : sd.s3;
    if (slot < 0 || slot > 2 || index >= size)
        throw std::out_of_range("slot_label: index out of range");
    if (slot == 2) {
        // c_ki names the output entry C_ik
        int k = static_cast<int>(index / l) + 1, i = static_cast<int>(index % l) + 1;
        return var_label('C', i, k);
    }
    switch (mode) {
        case Mode::standard:
            if (slot == 0)
                return var_label('A', static_cast<int>(index / m) + 1, static_cast<int>(index % m) + 1);
            return var_label('B', static_cast<int>(index / n) + 1, static_cast<int>(index % n) + 1);
        case Mode::commutative: {
            if (index < l * m)
                return var_label('A', static_cast<int>(index / m) + 1, static_cast<int>(index % m) + 1);
            uint32_t r = index - l * m;
            return var_label('B', static_cast<int>(r / n) + 1, static_cast<int>(r % n) + 1);
        }
        case Mode::marakov: {
            uint32_t om = odd_count(d.m), em = even_count(d.m);
            if (slot == 0) {
                if (index < l * om)
                    return var_label('A', static_cast<int>(index / om) + 1,
                                     static_cast<int>(index % om) * 2 + 1);
                uint32_t r = index - l * om;
                return var_label('B', static_cast<int>(r / n + 1) * 2, static_cast<int>(r % n) + 1);
            }
            if (index < l * em)
                return var_label('A', static_cast<int>(index / em) + 1,
                                 static_cast<int>(index % em + 1) * 2);
            uint32_t r = index - l * em;
            return var_label('B', static_cast<int>(r / n) * 2 + 1, static_cast<int>(r % n) + 1);
        }
    }
    throw std::logic_error("slot_label: bad mode");
}

Term canonical_comm(Term t) {
    if (lex_compare(t.u, t.v) == std::strong_ordering::greater)
        std::swap(t.u, t.v);
    return t;
}

Term standard_term(Mode mode, Dims d, int i, int j, int k) {
    SlotDims sd = slot_dims(mode, d);
    SlotCoord ac = a_coord(mode, d, i, j);
    SlotCoord bc = b_coord(mode, d, j, k);
    BitVec w = BitVec::unit(sd.s3, c_index(d, k, i));
    switch (mode) {
        case Mode::standard:
            return {BitVec::unit(sd.s1, ac.index), BitVec::unit(sd.s2, bc.index), std::move(w)};
        case Mode::marakov:
            // exactly one of the a/b unit vectors lands in slot 1 (odd j puts
            // a there, even j puts b there)
            if (ac.slot == 0)
                return {BitVec::unit(sd.s1, ac.index), BitVec::unit(sd.s2, bc.index), std::move(w)};
            return {BitVec::unit(sd.s1, bc.index), BitVec::unit(sd.s2, ac.index), std::move(w)};
        case Mode::commutative:
            return canonical_comm(
                {BitVec::unit(sd.s1, ac.index), BitVec::unit(sd.s1, bc.index), std::move(w)});
    }
    throw std::logic_error("standard_term: bad mode");
}

Scheme standard_scheme(Mode mode, Dims d) {
    check_dims(d);
    Scheme s{mode, d, {}};
    s.terms.reserve(static_cast<size_t>(d.l) * d.m * d.n);
    for (int i = 1; i <= d.l; i++)
        for (int j = 1; j <= d.m; j++)
            for (int k = 1; k <= d.n; k++)
                s.terms.push_back(standard_term(mode, d, i, j, k));
    return s;
}

DenseTensor DenseTensor::zero(Mode mode, Dims d) {
    DenseTensor t;
    t.mode_ = mode;
    t.dims_ = d;
    t.sd_ = slot_dims(mode, d);
    t.rows_ = mode == Mode::commutative ? t.sd_.s1 * (t.sd_.s1 + 1) / 2
                                        : t.sd_.s1 * t.sd_.s2;
    t.words_ = (t.sd_.s3 + 63) / 64;
    t.bits_.assign(static_cast<size_t>(t.rows_) * t.words_, 0);
    return t;
}

uint32_t DenseTensor::sym_row(uint32_t i, uint32_t j) const {
    // row-major upper triangle over the U1 space: (0,0), (0,1), ..., (1,1), ...
    uint32_t d1 = sd_.s1;
    return i * d1 - i * (i - 1) / 2 + (j - i);
}

void DenseTensor::xor_row(uint32_t row, const BitVec& w) {
    uint64_t* p = bits_.data() + static_cast<size_t>(row) * words_;
    for (uint32_t k = 0; k < words_ && k < 2; k++) p[k] ^= w.word(static_cast<int>(k));
}

void DenseTensor::xor_term(const Term& t) {
    if (t.w.dim() != sd_.s3)
        throw std::invalid_argument("xor_term: slot 3 dimension mismatch");
    if (mode_ == Mode::commutative) {
        if (t.u.dim() != sd_.s1 || t.v.dim() != sd_.s1)
            throw std::invalid_argument("xor_term: U1 dimension mismatch");
        // visiting every (i from u, j from v) and folding into the unordered
        // cell accumulates exactly u_i*v_j + u_j*v_i off the diagonal and
        // u_i*v_i on it
        t.u.for_each_set([&](uint32_t i) {
            t.v.for_each_set([&](uint32_t j) {
                xor_row(i <= j ? sym_row(i, j) : sym_row(j, i), t.w);
            });
        });
        return;
    }
    if (t.u.dim() != sd_.s1 || t.v.dim() != sd_.s2)
        throw std::invalid_argument("xor_term: slot dimension mismatch");
    t.u.for_each_set([&](uint32_t i) {
        t.v.for_each_set([&](uint32_t j) { xor_row(i * sd_.s2 + j, t.w); });
    });
}

DenseTensor& DenseTensor::operator^=(const DenseTensor& o) {
    if (mode_ != o.mode_ || !(dims_ == o.dims_))
        throw std::invalid_argument("DenseTensor: shape mismatch");
    for (size_t k = 0; k < bits_.size(); k++) bits_[k] ^= o.bits_[k];
    return *this;
}

bool DenseTensor::is_zero() const {
    for (uint64_t w : bits_)
        if (w) return false;
    return true;
}

bool DenseTensor::test(uint32_t row, uint32_t bit) const {
    return (bits_[static_cast<size_t>(row) * words_ + bit / 64] >> (bit % 64)) & 1;
}

std::optional<std::pair<uint32_t, uint32_t>> DenseTensor::first_set() const {
    for (size_t k = 0; k < bits_.size(); k++) {
        if (bits_[k]) {
            auto row = static_cast<uint32_t>(k / words_);
            auto bit = static_cast<uint32_t>((k % words_) * 64 + std::countr_zero(bits_[k]));
            return std::make_pair(row, bit);
        }
    }
    return std::nullopt;
}

std::string DenseTensor::coord_label(uint32_t row, uint32_t bit) const {
    if (mode_ == Mode::commutative) {
        // invert the triangular row index
        uint32_t d1 = sd_.s1, i = 0, off = 0;
        while (off + (d1 - i) <= row) {
            off += d1 - i;
            i++;
        }
        uint32_t j = i + (row - off);
        return "(" + slot_label(mode_, dims_, 0, i) + ", " + slot_label(mode_, dims_, 0, j) +
               ", " + slot_label(mode_, dims_, 2, bit) + ")";
    }
    return "(" + slot_label(mode_, dims_, 0, row / sd_.s2) + ", " +
           slot_label(mode_, dims_, 1, row % sd_.s2) + ", " + slot_label(mode_, dims_, 2, bit) +
           ")";
}

DenseTensor DenseTensor::target(Mode mode, Dims d) {
    DenseTensor t = zero(mode, d);
    for (int i = 1; i <= d.l; i++) {
        for (int j = 1; j <= d.m; j++) {
            for (int k = 1; k <= d.n; k++) {
                uint32_t ci = c_index(d, k, i);
                BitVec w = BitVec::unit(t.sd_.s3, ci);
                SlotCoord ac = a_coord(mode, d, i, j);
                SlotCoord bc = b_coord(mode, d, j, k);
                switch (mode) {
                    case Mode::standard:
                        t.xor_row(ac.index * t.sd_.s2 + bc.index, w);
                        break;
                    case Mode::marakov:
                        if (ac.slot == 0)
                            t.xor_row(ac.index * t.sd_.s2 + bc.index, w);
                        else
                            t.xor_row(bc.index * t.sd_.s2 + ac.index, w);
                        break;
                    case Mode::commutative:
                        // a indices precede b indices inside U1
                        t.xor_row(t.sym_row(ac.index, bc.index), w);
                        break;
                }
            }
        }
    }
    return t;
}

DenseTensor sym_embed(const BitVec& p, const BitVec& q, const BitVec& w, Dims d) {
    DenseTensor t = DenseTensor::zero(Mode::commutative, d);
    t.xor_term({p, q, w});
    return t;
}

DenseTensor embed_sum(const Scheme& s) {
    DenseTensor acc = DenseTensor::zero(s.mode, s.dims);
    for (const Term& t : s.terms) acc.xor_term(t);
    return acc;
}

bool verify(const Scheme& s) {
    return embed_sum(s) == DenseTensor::target(s.mode, s.dims);
}

std::optional<std::string> verify_mismatch(const Scheme& s) {
    DenseTensor diff = embed_sum(s);
    diff ^= DenseTensor::target(s.mode, s.dims);
    auto fs = diff.first_set();
    if (!fs) return std::nullopt;
    return diff.coord_label(fs->first, fs->second);
}

}  // namespace flipsearch
