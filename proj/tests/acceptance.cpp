// acceptance suite: end-to-end checks of the search engine, the move
// algebra, the bound table, and the CLI.  Each criterion prints one
// PASS/FAIL line; the process exits nonzero if any criterion fails.

#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "flipsearch/bounds.hpp"
#include "flipsearch/comm_moves.hpp"
#include "flipsearch/moves.hpp"
#include "flipsearch/scheme_io.hpp"
#include "flipsearch/search.hpp"
#include "flipsearch/tensors.hpp"
#include "helpers.hpp"
#include "symbolic.hpp"

using namespace flipsearch;
using testutil::data_path;
using testutil::run_cli;
using testutil::temp_path;

namespace {

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

// ---------- 1. bound table -------------------------------------------------

struct OracleRow {
    int l, m, n, ros, imp;
};

// independent restatement of the bound: count one product per even-m pairing
// step plus the odd-row remainder; here in closed form with explicit parity
// handling, checked to divide exactly
std::vector<OracleRow> oracle_table(int max) {
    auto ros = [](int l, int m, int n) {
        long long base = 1LL * m * (1LL * l * n + l + n - 1);
        long long extra = (m % 2 == 1 && n % 2 == 0) ? l - 1 : 0;
        if ((base + extra) % 2 != 0) throw std::logic_error("bound not integral");
        return static_cast<int>((base + extra) / 2);
    };
    std::vector<OracleRow> rows;
    for (int l = 2; l <= max; l++)
        for (int m = 2; m <= max; m++)
            for (int n = l; n <= max; n++)
                rows.push_back({l, m, n, ros(l, m, n), std::min(ros(l, m, n), ros(n, m, l))});
    return rows;
}

std::string check_table() {
    auto oracle = oracle_table(5);
    if (oracle.size() != 40) return "oracle row count";

    auto lib = results_table(5);
    if (lib.size() != oracle.size()) return "library row count mismatch";
    for (size_t i = 0; i < oracle.size(); i++) {
        const auto& o = oracle[i];
        const auto& r = lib[i];
        if (r.l != o.l || r.m != o.m || r.n != o.n || r.rosowski != o.ros || r.improved != o.imp)
            return fmt("library row %zu disagrees for %d,%d,%d", i, o.l, o.m, o.n);
    }

    auto text = run_cli("table --max 5");
    if (text.code != 0) return "table exit code " + std::to_string(text.code);
    std::istringstream in(text.out);
    std::string header;
    std::getline(in, header);
    if (header != "l m n rosowski improved") return "bad text header: " + header;
    for (size_t i = 0; i < oracle.size(); i++) {
        OracleRow r{};
        if (!(in >> r.l >> r.m >> r.n >> r.ros >> r.imp)) return "short text table";
        const auto& o = oracle[i];
        if (r.l != o.l || r.m != o.m || r.n != o.n || r.ros != o.ros || r.imp != o.imp)
            return fmt("text row %zu disagrees", i);
    }
    int trailing;
    if (in >> trailing) return "extra text rows";

    auto js = run_cli("table --max 5 --format json");
    if (js.code != 0) return "json table exit code " + std::to_string(js.code);
    auto arr = nlohmann::json::parse(js.out);
    if (!arr.is_array() || arr.size() != oracle.size()) return "json shape";
    for (size_t i = 0; i < oracle.size(); i++) {
        const auto& o = oracle[i];
        const auto& j = arr[i];
        if (j.at("l") != o.l || j.at("m") != o.m || j.at("n") != o.n ||
            j.at("rosowski") != o.ros || j.at("improved") != o.imp)
            return fmt("json row %zu disagrees", i);
    }
    return "";
}

// ---------- 2. CLI verify --------------------------------------------------

std::string check_cli_verify() {
    auto r = run_cli("verify " + data_path("strassen.mms"));
    if (r.code != 0) return "exit code " + std::to_string(r.code);
    if (r.out.rfind("VERIFIED rank=7", 0) != 0) return "unexpected output: " + r.out;

    // corrupting one bit must flip the verdict and the exit code
    std::string text = testutil::read_file(data_path("strassen.mms"));
    text[text.find('\n') + 1] = '0';  // clear the first bit of the first factor
    std::string bad = temp_path("corrupt.mms");
    std::ofstream(bad, std::ios::binary) << text;
    auto rb = run_cli("verify " + bad);
    if (rb.code != 1) return "corrupt file exit code " + std::to_string(rb.code);
    if (rb.out.rfind("NOT VERIFIED", 0) != 0) return "corrupt verdict: " + rb.out;
    return "";
}

// ---------- 3-5. search success rates --------------------------------------

int count_successes(Mode mode, Dims d, int target, uint64_t iterations, int seeds,
                    int needed) {
    int ok = 0;
    for (int seed = 1; seed <= seeds; seed++) {
        SearchParams p = default_params(mode);
        p.max_iterations = iterations;
        p.target_rank = target;
        p.seed = static_cast<uint64_t>(seed) * 7919;
        SearchReport r = adaptive_search(standard_scheme(mode, d), p);
        if (r.best_rank <= target) ok++;
        // stop early once the criterion is decided either way
        if (ok >= needed || ok + (seeds - seed) < needed) break;
    }
    return ok;
}

std::string check_standard_search() {
    int ok = count_successes(Mode::standard, {2, 2, 2}, 7, 1'000'000, 10, 9);
    if (ok < 9) return fmt("rank 7 reached in %d/10 runs (need 9)", ok);
    return "";
}

std::string check_commutative_search() {
    struct Row {
        Dims d;
        int target;
    };
    for (Row row : {Row{{2, 2, 2}, 7}, Row{{2, 2, 3}, 10}, Row{{2, 3, 2}, 11},
                    Row{{2, 3, 3}, 15}}) {
        int ok = count_successes(Mode::commutative, row.d, row.target, 10'000'000, 10, 8);
        if (ok < 8)
            return fmt("%dx%dx%d rank %d reached in %d/10 runs (need 8)", row.d.l, row.d.m,
                       row.d.n, row.target, ok);
    }
    return "";
}

std::string check_marakov_search() {
    struct Row {
        Dims d;
        int target;
    };
    for (Row row : {Row{{2, 2, 2}, 7}, Row{{2, 3, 3}, 15}, Row{{3, 3, 3}, 22}}) {
        int ok = count_successes(Mode::marakov, row.d, row.target, 10'000'000, 10, 8);
        if (ok < 8)
            return fmt("%dx%dx%d rank %d reached in %d/10 runs (need 8)", row.d.l, row.d.m,
                       row.d.n, row.target, ok);
    }
    return "";
}

// ---------- 6. combined pipeline -------------------------------------------

std::string check_combined() {
    using clock = std::chrono::steady_clock;
    auto t0 = clock::now();
    for (int seed = 1; seed <= 5; seed++) {
        SearchParams pm = default_params(Mode::marakov);
        SearchParams pc = default_params(Mode::commutative);
        pm.max_iterations = 2'500'000;
        pc.max_iterations = 7'500'000;
        pm.seed = pc.seed = static_cast<uint64_t>(seed) * 104729;
        pm.target_rank = pc.target_rank = 21;
        SearchReport r = combined_search({3, 3, 3}, pm, pc);
        if (r.best_rank <= 21 && verify(r.best) && r.best.mode == Mode::commutative) return "";
        double mins = std::chrono::duration<double>(clock::now() - t0).count() / 60.0;
        if (mins > 25.0) return fmt("no rank-21 scheme within the time budget (%d seeds)", seed);
    }
    return "no rank-21 scheme in 5 seeded attempts";
}

// ---------- 7. move soundness ----------------------------------------------

std::string walker_route(Mode mode, Dims d, int moves) {
    DenseTensor target = DenseTensor::target(mode, d);
    std::mt19937_64 rng(31 + d.l * 100 + d.m * 10 + d.n);
    auto step_check = [&](auto& w, int i) -> std::string {
        if (!(embed_sum(w.scheme()) == target))
            return fmt("sum broken at move %d (%s %dx%dx%d)", i, mode_name(mode), d.l, d.m, d.n);
        if (i % 10'000 == 0 && !w.check_consistency()) return "walker index out of sync";
        return "";
    };
    if (mode == Mode::commutative) {
        CommWalker w(standard_scheme(mode, d));
        for (int i = 0; i < moves; i++) {
            if (!w.random_flip(rng)) w.random_plus(rng);
            if (auto e = step_check(w, i); !e.empty()) return e;
        }
    } else {
        FlipWalker w(standard_scheme(mode, d));
        for (int i = 0; i < moves; i++) {
            if (!w.random_flip(rng)) w.random_plus(rng);
            if (auto e = step_check(w, i); !e.empty()) return e;
        }
    }
    return "";
}

std::string value_route(Mode mode, Dims d, int moves) {
    DenseTensor target = DenseTensor::target(mode, d);
    Scheme s = standard_scheme(mode, d);
    std::mt19937_64 rng(47 + d.l * 100 + d.m * 10 + d.n);
    bool comm = mode == Mode::commutative;
    for (int i = 0; i < moves; i++) {
        size_t before = s.rank();
        bool want_plus = (i % 5000) == 4999;
        bool did_plus = false;
        if (!want_plus) {
            if (comm) {
                auto flips = find_comm_flips(s);
                if (!flips.empty())
                    apply_comm_flip(s, flips[rng() % flips.size()]);
                else
                    want_plus = true;
            } else {
                auto flips = find_flips(s);
                if (!flips.empty())
                    apply_flip(s, flips[rng() % flips.size()]);
                else
                    want_plus = true;
            }
        }
        if (want_plus) {
            uint32_t i1 = rng() % s.rank(), i2 = rng() % s.rank();
            if (i1 == i2) i2 = (i2 + 1) % s.rank();
            if (comm)
                apply_comm_plus(s, i1, i2, static_cast<int>(rng() % 3));
            else
                apply_plus(s, i1, i2, static_cast<int>(rng() % 3));
            did_plus = true;
        }
        size_t after = s.rank();
        if (did_plus && after != before + 1)
            return fmt("plus changed rank %zu -> %zu", before, after);
        if (!did_plus && after != before) return fmt("flip changed rank %zu -> %zu", before, after);
        if (!(embed_sum(s) == target))
            return fmt("sum broken at move %d (%s %dx%dx%d)", i, mode_name(mode), d.l, d.m, d.n);
    }
    return "";
}

std::string check_moves() {
    for (Mode mode : {Mode::standard, Mode::marakov, Mode::commutative}) {
        for (Dims d : {Dims{2, 2, 2}, Dims{2, 3, 2}, Dims{2, 2, 3}}) {
            if (auto e = walker_route(mode, d, 100'000); !e.empty()) return "walker: " + e;
            if (auto e = value_route(mode, d, 100'000); !e.empty()) return "value ops: " + e;
        }
    }
    return "";
}

// ---------- 8. symmetric embedding -----------------------------------------

std::string check_sym_embedding() {
    Dims d{3, 3, 3};
    SlotDims sd = slot_dims(Mode::commutative, d);
    std::mt19937_64 rng(2026);
    auto rand_vec = [&](uint32_t dim) {
        BitVec v(dim);
        for (uint32_t i = 0; i < dim; i++)
            if (rng() & 1) v.set(i);
        return v;
    };
    for (int it = 0; it < 10'000; it++) {
        BitVec p = rand_vec(sd.s1), q = rand_vec(sd.s1), w = rand_vec(sd.s3);
        if (!(sym_embed(p, q, w, d) == sym_embed(q, p, w, d)))
            return fmt("symmetry broken at trial %d", it);
    }
    for (int it = 0; it < 2'000; it++) {
        BitVec p = rand_vec(sd.s1), q = rand_vec(sd.s1), r = rand_vec(sd.s1);
        BitVec w = rand_vec(sd.s3);
        DenseTensor lhs = sym_embed(p ^ r, q, w, d);
        DenseTensor rhs = sym_embed(p, q, w, d);
        rhs ^= sym_embed(r, q, w, d);
        if (!(lhs == rhs)) return fmt("bilinearity broken at trial %d", it);
    }
    for (int l = 1; l <= 4; l++)
        for (int m = 1; m <= 4; m++)
            for (int n = 1; n <= 4; n++) {
                Dims dd{l, m, n};
                if (!(DenseTensor::target(Mode::commutative, dd) ==
                      embed_sum(standard_scheme(Mode::commutative, dd))))
                    return fmt("target mismatch at %d,%d,%d", l, m, n);
            }
    return "";
}

// ---------- 9. extend and convert ------------------------------------------

std::string check_extend_convert() {
    const Dims pool[] = {{2, 2, 2}, {2, 3, 2}, {2, 2, 3}, {3, 2, 3}, {2, 3, 3},
                         {3, 3, 3}, {1, 2, 2}, {3, 1, 2}, {1, 3, 1}, {3, 3, 2}};
    int converts = 0;
    for (int i = 0; i < 100; i++) {
        Mode mode = i % 3 == 0   ? Mode::standard
                    : i % 3 == 1 ? Mode::marakov
                                 : Mode::commutative;
        Dims d = pool[i % 10];
        Scheme s = testutil::random_walk_scheme(mode, d, 150 + i, 9000 + i);
        if (!verify(s)) return fmt("input %d failed to verify", i);

        Axis axis = i % 3 == 0 ? Axis::l : i % 3 == 1 ? Axis::m : Axis::n;
        size_t slice = axis == Axis::l   ? static_cast<size_t>(d.m) * d.n
                       : axis == Axis::m ? static_cast<size_t>(d.l) * d.n
                                         : static_cast<size_t>(d.l) * d.m;
        Scheme e = extend_scheme(s, axis);
        if (e.rank() != s.rank() + slice) return fmt("extend %d changed rank unexpectedly", i);
        if (!verify(e)) return fmt("extend %d does not verify", i);

        if (mode == Mode::marakov) {
            Scheme c = marakov_to_commutative(s);
            if (c.rank() != s.rank()) return fmt("convert %d changed the rank", i);
            if (!verify(c)) return fmt("convert %d does not verify", i);
            converts++;
        }
    }
    if (converts == 0) return "no conversions exercised";

    // the CLI routes: convert a marakov file, extend a standard file
    Scheme m = testutil::random_walk_scheme(Mode::marakov, {2, 3, 2}, 200, 777);
    std::string min_path = temp_path("conv_in.mms"), mout = temp_path("conv_out.mms");
    write_scheme_file(min_path, m);
    auto rc = run_cli("convert " + min_path + " --out " + mout);
    if (rc.code != 0) return "CLI convert exit " + std::to_string(rc.code);
    ReadResult cr = read_scheme_file(mout);
    if (!cr.verified || cr.scheme.mode != Mode::commutative || cr.scheme.rank() != m.rank())
        return "CLI convert output wrong";

    std::string ein = temp_path("ext_in.mms"), eout = temp_path("ext_out.mms");
    write_scheme_file(ein, standard_scheme(Mode::standard, {2, 2, 2}));
    auto re = run_cli("extend " + ein + " --axis n --out " + eout);
    if (re.code != 0) return "CLI extend exit " + std::to_string(re.code);
    ReadResult er = read_scheme_file(eout);
    if (!er.verified || !(er.scheme.dims == Dims{2, 2, 3})) return "CLI extend output wrong";
    return "";
}

// ---------- 10. CLI determinism --------------------------------------------

std::string check_cli_determinism() {
    std::string s1 = temp_path("det1.mms"), r1 = temp_path("det1.txt");
    std::string s2 = temp_path("det2.mms"), r2 = temp_path("det2.txt");
    std::string args = "search --mode standard --dims 2,2,2 --iterations 200000 --seed 42"
                       " --walkers 1 --target 7 --quiet";
    auto a = run_cli(args + " --out " + s1 + " --report " + r1);
    auto b = run_cli(args + " --out " + s2 + " --report " + r2);
    if (a.code != b.code) return fmt("exit codes differ: %d vs %d", a.code, b.code);
    if (a.code != 0 && a.code != 3) return fmt("unexpected exit code %d", a.code);
    if (testutil::read_file(s1) != testutil::read_file(s2)) return "scheme files differ";
    if (testutil::read_file(r1) != testutil::read_file(r2)) return "report files differ";

    ReadResult rr = read_scheme_file(s1);
    if (!rr.verified) return "search output does not verify";
    std::string report = testutil::read_file(r1);
    if (report.rfind("flipsearch report\n", 0) != 0) return "report header missing";
    if (report.find("seed 42\n") == std::string::npos) return "report seed missing";
    if (report.find("verified true\n") == std::string::npos) return "report verdict missing";
    return "";
}

// ---------- 11. interchange round trips ------------------------------------

std::string check_round_trips() {
    std::string golden = testutil::read_file(data_path("strassen.mms"));
    std::istringstream in(golden);
    ReadResult g = read_scheme(in);
    if (!g.verified) return "golden scheme does not verify";
    std::ostringstream out;
    write_scheme(out, g.scheme);
    if (out.str() != golden) return "golden file does not round-trip byte for byte";

    int salt = 0;
    for (Mode mode : {Mode::standard, Mode::marakov, Mode::commutative}) {
        for (Dims d : {Dims{2, 2, 2}, Dims{2, 3, 2}, Dims{3, 3, 3}}) {
            for (int rep = 0; rep < 3; rep++) {
                Scheme s = testutil::random_walk_scheme(mode, d, 250 + 31 * rep, 5000 + salt++);
                std::ostringstream w;
                write_scheme(w, s);
                std::istringstream r(w.str());
                ReadResult back = read_scheme(r);
                if (!(back.scheme == s)) return "random scheme altered by a round trip";
                if (!back.verified) return "random scheme lost verification";
            }
        }
    }

    std::string rendered = render_algorithm(g.scheme);
    if (auto e = testutil::check_rendered(g.scheme, rendered); !e.empty())
        return "rendered algorithm wrong: " + e;
    for (const char* line : {"C_11 = m_1 + m_4 + m_5 + m_6", "C_12 = m_3 + m_5",
                             "C_21 = m_2 + m_6", "C_22 = m_1 + m_2 + m_3 + m_7"})
        if (rendered.find(std::string(line) + "\n") == std::string::npos)
            return fmt("rendered text misses '%s'", line);
    return "";
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<std::string()> run;
    };
    const Criterion criteria[] = {
        {"bound table matches the closed form (CLI text and JSON)", check_table},
        {"CLI verifies the golden rank-7 scheme", check_cli_verify},
        {"standard search: 2x2x2 reaches rank 7 (>=9/10 seeds)", check_standard_search},
        {"commutative search reaches known small ranks (>=8/10 seeds)",
         check_commutative_search},
        {"split-tensor search reaches known small ranks (>=8/10 seeds)", check_marakov_search},
        {"combined pipeline finds a rank-21 commutative 3x3x3 scheme", check_combined},
        {"moves preserve the represented tensor (walker and value routes)", check_moves},
        {"symmetric embedding: symmetry, bilinearity, target identity", check_sym_embedding},
        {"extend and convert preserve verification on random inputs", check_extend_convert},
        {"CLI search is reproducible for a fixed seed", check_cli_determinism},
        {"scheme files and rendered algorithms round-trip", check_round_trips},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        std::string detail;
        try {
            detail = c.run();
        } catch (const std::exception& e) {
            detail = std::string("unexpected exception: ") + e.what();
        }
        if (detail.empty()) {
            std::printf("PASS: %s\n", c.name);
        } else {
            std::printf("FAIL: %s -- %s\n", c.name, detail.c_str());
            failures++;
        }
        std::fflush(stdout);
    }
    if (failures) std::printf("%d of %zu criteria failed\n", failures, std::size(criteria));
    return failures ? 1 : 0;
}
