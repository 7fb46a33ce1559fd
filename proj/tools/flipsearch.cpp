#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "flipsearch/bounds.hpp"
#include "flipsearch/scheme_io.hpp"
#include "flipsearch/search.hpp"
#include "flipsearch/tensors.hpp"

using namespace flipsearch;

namespace {

// exit codes: 0 success, 1 verification failure, 2 usage or parse error,
// 3 target rank not reached, 4 start scheme invalid

std::atomic<bool> g_interrupt{false};

struct Exit {
    int code;
};

[[noreturn]] void fail(int code, const std::string& msg) {
    std::cerr << "error: " << msg << "\n";
    throw Exit{code};
}

ReadResult load_scheme(const std::string& path) {
    try {
        return read_scheme_file(path);
    } catch (const ParseError& e) {
        fail(2, path + ": " + e.what());
    } catch (const std::exception& e) {
        fail(2, e.what());
    }
}

Dims parse_dims(const std::string& s) {
    Dims d;
    char extra = 0;
    if (std::sscanf(s.c_str(), "%d,%d,%d%c", &d.l, &d.m, &d.n, &extra) != 3)
        fail(2, "--dims expects l,m,n");
    if (!dims_valid(d))
        fail(2, "dimensions must be between 1 and " + std::to_string(max_size));
    return d;
}

struct SearchOpts {
    std::string mode;
    std::string dims;
    int dim_l = 0;
    int dim_m = 0;
    int dim_n = 0;
    std::string start;
    std::string out;
    std::string report;
    uint64_t iterations = 1'000'000;
    uint64_t seed = 0;
    int walkers = 0;  // 0 = FLIPSEARCH_THREADS env or 1
    int restarts = 1;
    int target = 0;
    int64_t plus_interval = -1;  // -1 = mode default
    int plus_cap = -1;           // -1 = mode default
    uint64_t full_reduction_interval = 0;
    uint64_t debug_verify_interval = 0;
    bool quiet = false;
};

int resolve_walkers(int flag_value) {
    if (flag_value > 0) return flag_value;
    if (const char* env = std::getenv("FLIPSEARCH_THREADS")) {
        int v = std::atoi(env);
        if (v >= 1) return v;
    }
    return 1;
}

void attach_progress(SearchParams& p, bool quiet) {
    p.interrupt = &g_interrupt;
    if (quiet) return;
    auto last = std::make_shared<std::chrono::steady_clock::time_point>(
        std::chrono::steady_clock::now());
    p.progress = [last](const ProgressRecord& r) {
        auto now = std::chrono::steady_clock::now();
        if (now - *last < std::chrono::seconds(2)) return;
        *last = now;
        std::fprintf(stderr, "[walker %d] it=%llu rank=%d best=%d t=%.1fs\n", r.walker_id,
                     static_cast<unsigned long long>(r.iteration), r.current_rank, r.best_rank,
                     r.elapsed_s);
    };
}

void write_report_file(const std::string& path, const std::string& mode_label, Dims d,
                       const SearchParams& p, const SearchReport& rep) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(2, "cannot open '" + path + "' for writing");
    out << "flipsearch report\n"
        << "mode " << mode_label << "\n"
        << "dims " << d.l << ' ' << d.m << ' ' << d.n << "\n"
        << "seed " << rep.seed << "\n"
        << "walkers " << std::max(p.walkers, 1) << "\n"
        << "restarts " << std::max(p.restarts, 1) << "\n"
        << "iterations " << rep.iterations_used << "\n"
        << "best_rank " << rep.best_rank << "\n"
        << "verified " << (verify(rep.best) ? "true" : "false") << "\n";
}

// dimensions may come as --dims l,m,n or as separate --l --m --n flags
std::optional<Dims> flag_dims(const SearchOpts& o) {
    bool any_lmn = o.dim_l > 0 || o.dim_m > 0 || o.dim_n > 0;
    if (any_lmn && !(o.dim_l > 0 && o.dim_m > 0 && o.dim_n > 0))
        fail(2, "--l, --m, and --n must be given together");
    if (!o.dims.empty()) {
        Dims d = parse_dims(o.dims);
        if (any_lmn && !(d == Dims{o.dim_l, o.dim_m, o.dim_n}))
            fail(2, "--dims conflicts with --l/--m/--n");
        return d;
    }
    if (!any_lmn) return std::nullopt;
    Dims d{o.dim_l, o.dim_m, o.dim_n};
    if (!dims_valid(d))
        fail(2, "dimensions must be between 1 and " + std::to_string(max_size));
    return d;
}

int run_search(const SearchOpts& o) {
    bool combined = o.mode == "combined";
    Scheme start;
    Dims dims{};
    std::string mode_label;
    std::optional<Dims> fd = flag_dims(o);

    if (!o.start.empty()) {
        if (combined) fail(2, "--start cannot be combined with mode 'combined'");
        ReadResult rr = load_scheme(o.start);
        if (!rr.verified) fail(4, "start scheme '" + o.start + "' does not verify");
        start = std::move(rr.scheme);
        if (!o.mode.empty()) {
            auto m = mode_from_name(o.mode);
            if (!m) fail(2, "unknown mode '" + o.mode + "'");
            if (*m != start.mode) fail(2, "--mode conflicts with the start scheme's mode");
        }
        if (fd && !(*fd == start.dims))
            fail(2, "--dims conflicts with the start scheme's dimensions");
        dims = start.dims;
        mode_label = mode_name(start.mode);
    } else {
        if (o.mode.empty() || !fd)
            fail(2, "search needs --mode and --dims (or --l/--m/--n, or --start FILE)");
        dims = *fd;
        if (!combined) {
            auto m = mode_from_name(o.mode);
            if (!m) fail(2, "unknown mode '" + o.mode + "'");
            start = standard_scheme(*m, dims);
            mode_label = mode_name(*m);
        } else {
            mode_label = "combined";
        }
    }

    auto tune = [&](SearchParams& p) {
        p.seed = o.seed;
        p.walkers = resolve_walkers(o.walkers);
        p.restarts = o.restarts;
        p.target_rank = o.target;
        if (o.plus_interval >= 0) p.plus_interval = static_cast<uint64_t>(o.plus_interval);
        if (o.plus_cap >= 0) p.plus_cap = o.plus_cap;
        p.full_reduction_interval = o.full_reduction_interval;
        p.debug_verify_interval = o.debug_verify_interval;
        p.checkpoint_path = o.out;
        attach_progress(p, o.quiet);
    };

    SearchReport rep;
    SearchParams report_params;
    if (combined) {
        SearchParams pm = default_params(Mode::marakov);
        SearchParams pc = default_params(Mode::commutative);
        tune(pm);
        tune(pc);
        pm.max_iterations = o.iterations / 4;  // quarter of the budget seeds the
        pc.max_iterations = o.iterations - pm.max_iterations;  // commutative stage
        rep = combined_search(dims, pm, pc);
        report_params = pc;
    } else {
        SearchParams p = default_params(start.mode);
        tune(p);
        p.max_iterations = o.iterations;
        rep = parallel_search(start, p);
        report_params = p;
    }

    if (!o.out.empty())
        write_scheme_file(o.out, rep.best);
    else
        write_scheme(std::cout, rep.best);
    if (!o.report.empty()) write_report_file(o.report, mode_label, dims, report_params, rep);
    std::fprintf(stderr, "best_rank=%d iterations=%llu wall=%.2fs\n", rep.best_rank,
                 static_cast<unsigned long long>(rep.iterations_used), rep.wall_time_s);
    if (o.target > 0 && rep.best_rank > o.target) return 3;
    return 0;
}

int run_verify(const std::string& path) {
    ReadResult rr = load_scheme(path);
    if (rr.verified) {
        std::cout << "VERIFIED rank=" << rr.scheme.terms.size() << "\n";
        return 0;
    }
    std::cout << "NOT VERIFIED rank=" << rr.scheme.terms.size() << "\n";
    if (auto mm = verify_mismatch(rr.scheme)) std::cerr << "first mismatch at " << *mm << "\n";
    return 1;
}

int run_convert(const std::string& in_path, const std::string& out_path) {
    ReadResult rr = load_scheme(in_path);
    if (rr.scheme.mode != Mode::marakov) fail(2, "convert expects a marakov scheme");
    if (!rr.verified) fail(4, "input scheme '" + in_path + "' does not verify");
    Scheme out = marakov_to_commutative(rr.scheme);
    if (out_path.empty())
        write_scheme(std::cout, out);
    else
        write_scheme_file(out_path, out);
    std::cerr << "converted to commutative, rank=" << out.terms.size() << "\n";
    return 0;
}

int run_extend(const std::string& in_path, const std::string& axis_str,
               const std::string& out_path) {
    ReadResult rr = load_scheme(in_path);
    if (!rr.verified) fail(4, "input scheme '" + in_path + "' does not verify");
    Axis axis;
    if (axis_str == "l")
        axis = Axis::l;
    else if (axis_str == "m")
        axis = Axis::m;
    else if (axis_str == "n")
        axis = Axis::n;
    else
        fail(2, "--axis must be l, m, or n");
    Scheme out;
    try {
        out = extend_scheme(rr.scheme, axis);
    } catch (const std::invalid_argument& e) {
        fail(2, e.what());
    }
    if (out_path.empty())
        write_scheme(std::cout, out);
    else
        write_scheme_file(out_path, out);
    std::cerr << "extended to " << out.dims.l << 'x' << out.dims.m << 'x' << out.dims.n
              << ", rank=" << out.terms.size() << "\n";
    return 0;
}

int run_table(int max, const std::string& format) {
    if (max < 2) fail(2, "--max must be at least 2");
    auto rows = results_table(max);
    if (format == "json") {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& r : rows)
            arr.push_back({{"l", r.l},
                           {"m", r.m},
                           {"n", r.n},
                           {"rosowski", r.rosowski},
                           {"improved", r.improved}});
        std::cout << arr.dump(2) << "\n";
    } else if (format == "text") {
        std::cout << "l m n rosowski improved\n";
        for (const auto& r : rows)
            std::cout << r.l << ' ' << r.m << ' ' << r.n << ' ' << r.rosowski << ' '
                      << r.improved << "\n";
    } else {
        fail(2, "--format must be text or json");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"flip-graph search for low-rank matrix multiplication schemes over GF(2)"};
    app.require_subcommand(1);

    SearchOpts so;
    auto* search = app.add_subcommand("search", "run a random-walk search");
    search->add_option("--mode", so.mode, "standard, marakov, commutative, or combined");
    search->add_option("--dims", so.dims, "matrix dimensions l,m,n");
    search->add_option("--l", so.dim_l, "rows of the left matrix");
    search->add_option("--m", so.dim_m, "shared dimension");
    search->add_option("--n", so.dim_n, "columns of the right matrix");
    search->add_option("--start", so.start, "scheme file to start from");
    search->add_option("--out", so.out, "output scheme file (default: stdout)");
    search->add_option("--report", so.report, "write a run report to this file");
    search->add_option("--iterations", so.iterations, "move budget per walk");
    search->add_option("--seed", so.seed, "random seed");
    search->add_option("--walkers", so.walkers, "concurrent walkers (default: FLIPSEARCH_THREADS or 1)");
    search->add_option("--restarts", so.restarts, "walks per walker");
    search->add_option("--target,--target-rank", so.target,
                       "stop at this rank; exit 3 if not reached");
    search->add_option("--plus-interval", so.plus_interval, "expected moves between plus splits");
    search->add_option("--plus-cap", so.plus_cap, "max rank excess over walk best for splits");
    search->add_option("--full-reduction-interval", so.full_reduction_interval,
                       "moves between full reductions (0 = never)");
    search->add_option("--debug-verify-interval", so.debug_verify_interval,
                       "moves between invariant checks (0 = never)");
    search->add_flag("--quiet", so.quiet, "suppress progress output");

    std::string verify_path;
    auto* verify_cmd = app.add_subcommand("verify", "check a scheme file against its target");
    verify_cmd->add_option("file", verify_path, "scheme file")->required();

    std::string conv_in, conv_out;
    auto* convert = app.add_subcommand("convert", "map a marakov scheme onto the commutative quotient");
    convert->add_option("file", conv_in, "marakov scheme file")->required();
    convert->add_option("--out", conv_out, "output scheme file (default: stdout)");

    std::string ext_in, ext_axis, ext_out;
    auto* extend = app.add_subcommand("extend", "grow one dimension by one");
    extend->add_option("file", ext_in, "scheme file")->required();
    extend->add_option("--axis", ext_axis, "axis to grow: l, m, or n")->required();
    extend->add_option("--out", ext_out, "output scheme file (default: stdout)");

    int table_max = 5;
    std::string table_format = "text";
    auto* table = app.add_subcommand("table", "print rank bounds for small dimensions");
    table->add_option("--max", table_max, "largest dimension (default 5)");
    table->add_option("--format", table_format, "text or json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    std::signal(SIGINT, [](int) { g_interrupt.store(true); });

    try {
        if (search->parsed()) return run_search(so);
        if (verify_cmd->parsed()) return run_verify(verify_path);
        if (convert->parsed()) return run_convert(conv_in, conv_out);
        if (extend->parsed()) return run_extend(ext_in, ext_axis, ext_out);
        if (table->parsed()) return run_table(table_max, table_format);
    } catch (const Exit& e) {
        return e.code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
