// Command-line front end for the N-Queens counting engine: solve runs,
// subproblem generation stats, stack-layout bank analysis, benchmark sweeps,
// and checkpointed long runs.

#include <algorithm>
#include <atomic>
#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nqueens/nqueens.hpp"

namespace {

std::atomic<bool> g_cancel{false};

void on_signal(int) { g_cancel.store(true); }

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitOverflow = 3;
constexpr int kExitCheckpoint = 4;

std::vector<double> parse_weights(const std::string& csv) {
    std::vector<double> weights;
    std::istringstream in(csv);
    std::string tok;
    while (std::getline(in, tok, ',')) weights.push_back(std::stod(tok));
    return weights;
}

// The reference 8-way weight vector, truncated (and renormalized by the
// partitioner) or padded with its smallest weight to fit worker_count.
std::vector<double> default_weights(int worker_count) {
    std::vector<double> weights;
    for (int i = 0; i < worker_count; ++i)
        weights.push_back(i < 8 ? nqueens::paper_gpu_weights[i]
                                : nqueens::paper_gpu_weights.back());
    return weights;
}

int env_workers(int flag_value, bool flag_given) {
    if (flag_given) return flag_value;
    if (const char* env = std::getenv("NQUEENS_WORKERS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    return flag_value;
}

nqueens::KernelVariant kernel_from(const std::string& name) {
    if (name == "iterative") return nqueens::KernelVariant::iterative;
    if (name == "lastrow") return nqueens::KernelVariant::lastrow;
    throw nqueens::config_error("unknown kernel '" + name + "'");
}

const nqueens::StackConfig& config_from(const std::string& name) {
    const nqueens::StackConfig* cfg = nqueens::find_config(name);
    if (!cfg)
        throw nqueens::config_error("unknown stack config '" + name +
                                    "' (known: config1..config5)");
    return *cfg;
}

void print_report(const nqueens::SolveReport& report, const std::string& format) {
    if (format == "json") {
        std::cout << nlohmann::json(report).dump(2) << '\n';
    } else if (format == "csv") {
        std::cout << "worker,assigned,processed,partial_sum,elapsed_ms\n";
        for (const auto& w : report.workers)
            std::cout << w.worker << ',' << w.assigned << ',' << w.processed << ','
                      << w.partial_sum << ',' << w.elapsed_ms << '\n';
        std::cout << "total,,," << report.total << ',' << report.calc_ms << '\n';
    }
    // log format already streamed its lines during the run
}

struct SolveArgs {
    int n = 8;
    int pre_rows = 6;
    bool pre_rows_given = false;
    std::string config_name = "config2";
    int workers = 1;
    bool workers_given = false;
    std::string partition = "weighted";
    std::string weights_csv;
    std::string kernel_name = "lastrow";
    std::string format = "log";
    std::string checkpoint_path;
    bool resume = false;
    std::uint64_t checkpoint_interval = 1'000'000;
    std::uint64_t chunk_size = 4096;
    std::string export_path;
};

int do_solve(const SolveArgs& args) {
    nqueens::RunSpec spec;
    spec.n = args.n;
    spec.pre_rows = args.pre_rows_given ? args.pre_rows
                                        : std::clamp(6, 1, std::max(1, args.n - 1));
    spec.config = config_from(args.config_name);
    spec.kernel = kernel_from(args.kernel_name);
    spec.plan.strategy = nqueens::partition_strategy_from(args.partition);
    spec.plan.worker_count = env_workers(args.workers, args.workers_given);
    spec.plan.chunk_size = args.chunk_size;
    if (spec.plan.strategy == nqueens::PartitionStrategy::weighted)
        spec.plan.weights = args.weights_csv.empty() ? default_weights(spec.plan.worker_count)
                                                     : parse_weights(args.weights_csv);

    if (!args.export_path.empty() && args.n > 1) {
        std::ofstream out(args.export_path, std::ios::trunc);
        if (!out)
            throw nqueens::config_error("cannot write batch file " + args.export_path);
        nqueens::write_batch(out, {spec.n, spec.pre_rows});
    }

    const bool log_to_stdout = args.format == "log";
    auto log = [log_to_stdout](const std::string& line) {
        (log_to_stdout ? std::cout : std::cerr) << line << '\n';
    };

    nqueens::SolveReport report;
    if (!args.checkpoint_path.empty()) {
        nqueens::CheckpointOptions ckpt;
        ckpt.path = args.checkpoint_path;
        ckpt.flush_interval = args.checkpoint_interval;
        ckpt.resume = args.resume;
        report = nqueens::run_with_checkpoint(spec, ckpt, &g_cancel, log);
    } else {
        nqueens::ExecuteOptions opts;
        opts.kernel = spec.kernel;
        opts.config = spec.config;
        opts.plan = spec.plan;
        opts.log = log;
        opts.cancel = &g_cancel;
        report = nqueens::execute(spec.n, spec.pre_rows, opts);
    }

    if (!report.completed) {
        if (!args.checkpoint_path.empty()) {
            std::cerr << "run interrupted; checkpoint flushed to " << args.checkpoint_path
                      << '\n';
            return kExitOk;
        }
        std::cerr << "run interrupted; no checkpoint configured, progress lost\n";
        return 1;
    }
    print_report(report, args.format);
    return kExitOk;
}

int do_resume(const std::string& path, const std::string& format,
              std::uint64_t checkpoint_interval) {
    const nqueens::Checkpoint ck = nqueens::load_checkpoint(path);
    nqueens::RunSpec spec;
    spec.n = ck.n;
    spec.pre_rows = ck.pre_rows;
    spec.kernel = ck.kernel;
    spec.config = config_from(ck.config_name);
    spec.plan.strategy = ck.strategy;
    spec.plan.worker_count = ck.worker_count;
    spec.plan.weights = ck.weights;

    const bool log_to_stdout = format == "log";
    auto log = [log_to_stdout](const std::string& line) {
        (log_to_stdout ? std::cout : std::cerr) << line << '\n';
    };

    nqueens::CheckpointOptions opts;
    opts.path = path;
    opts.flush_interval = checkpoint_interval;
    opts.resume = true;
    const nqueens::SolveReport report =
        nqueens::run_with_checkpoint(spec, opts, &g_cancel, log);
    if (!report.completed) {
        std::cerr << "run interrupted; checkpoint flushed to " << path << '\n';
        return kExitOk;
    }
    print_report(report, format);
    return kExitOk;
}

int do_subcount(int n, int pre_rows, const std::string& export_path) {
    using clock = std::chrono::steady_clock;
    if (!export_path.empty()) {
        std::ofstream out(export_path, std::ios::trunc);
        if (!out) throw nqueens::config_error("cannot write batch file " + export_path);
        nqueens::write_batch(out, {n, pre_rows});
    }
    const auto start = clock::now();
    const std::uint64_t count = nqueens::count_subproblems(n, pre_rows);
    const double ms = std::chrono::duration<double, std::milli>(clock::now() - start).count();
    std::cout << nqueens::log_generation_line(ms, count) << '\n';
    return kExitOk;
}

struct BenchArgs {
    int n_min = 12, n_max = 15;
    int r_min = 4, r_max = 7;
    std::string configs_csv = "config2";
    std::string kernels_csv = "lastrow";
    int reps = 3;
    int workers = 1;
    bool workers_given = false;
};

std::vector<std::string> split_csv(const std::string& csv) {
    std::vector<std::string> out;
    std::istringstream in(csv);
    std::string tok;
    while (std::getline(in, tok, ',')) out.push_back(tok);
    return out;
}

int do_bench(const BenchArgs& args) {
    const int workers = env_workers(args.workers, args.workers_given);
    std::cout << "n,r,config,kernel,reps,median_ms,total,ratio\n";
    for (const std::string& config_name : split_csv(args.configs_csv)) {
        const nqueens::StackConfig& cfg = config_from(config_name);
        for (const std::string& kernel_name : split_csv(args.kernels_csv)) {
            const nqueens::KernelVariant kernel = kernel_from(kernel_name);
            for (int r = args.r_min; r <= args.r_max; ++r) {
                std::optional<std::uint64_t> prev_total;
                for (int n = args.n_min; n <= args.n_max; ++n) {
                    const bool feasible =
                        n == 1 ||
                        (r < n && nqueens::required_depth(
                                      n, r, kernel == nqueens::KernelVariant::lastrow) <=
                                      cfg.max_depth());
                    if (!feasible) {
                        std::cout << n << ',' << r << ',' << config_name << ','
                                  << kernel_name << ',' << args.reps << ",skipped,,\n";
                        prev_total.reset();
                        continue;
                    }
                    std::vector<double> times;
                    std::uint64_t total = 0;
                    for (int rep = 0; rep < args.reps; ++rep) {
                        nqueens::ExecuteOptions opts;
                        opts.kernel = kernel;
                        opts.config = cfg;
                        opts.plan.strategy = nqueens::PartitionStrategy::uniform;
                        opts.plan.worker_count = workers;
                        const auto report = nqueens::execute(n, n == 1 ? 0 : r, opts);
                        times.push_back(report.calc_ms);
                        total = report.total;
                    }
                    std::sort(times.begin(), times.end());
                    const double median = times[times.size() / 2];
                    std::cout << n << ',' << r << ',' << config_name << ',' << kernel_name
                              << ',' << args.reps << ',' << median << ',' << total << ',';
                    if (prev_total && *prev_total > 0)
                        std::cout << static_cast<double>(total) /
                                         static_cast<double>(*prev_total);
                    std::cout << '\n';
                    prev_total = total;
                }
            }
        }
    }
    return kExitOk;
}

struct LayoutArgs {
    std::string layout = "interleaved";
    int stack_words = 96;
    int width = 0;  // 0 = both
    int threads = 32;
    int depth = 24;
    std::string schedule = "quarter";
    bool grid = false;
};

int do_layout(const LayoutArgs& args) {
    const nqueens::BankGeometry geom;
    const nqueens::LayoutFn layout = args.layout == "interleaved"
                                         ? nqueens::interleaved_layout()
                                         : nqueens::contiguous_layout(args.stack_words);
    if (args.layout != "interleaved" && args.layout != "contiguous")
        throw nqueens::config_error("unknown layout '" + args.layout + "'");
    const nqueens::WarpSchedule sched = args.schedule == "full"
                                            ? nqueens::WarpSchedule::full_warp
                                            : nqueens::WarpSchedule::quarter_warp;
    std::vector<int> widths;
    if (args.width == 0) widths = {4, 16};
    else widths = {args.width};

    nlohmann::json out = nlohmann::json::array();
    for (int width : widths)
        out.push_back(
            nqueens::analyze_layout(geom, layout, args.depth, args.threads, width, sched));
    std::cout << out.dump(2) << '\n';
    if (args.grid)
        std::cout << nqueens::ascii_bank_grid(geom, layout, args.depth, args.threads) << '\n';
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);

    CLI::App app{"Parallel N-Queens solution counter (iterative bitboard DFS)"};
    app.require_subcommand(1);

    SolveArgs solve_args;
    CLI::App* solve = app.add_subcommand("solve", "count solutions for one board size");
    solve->add_option("--n", solve_args.n, "board size (1..32)")->required();
    auto* pre = solve->add_option("--pre-rows", solve_args.pre_rows,
                                  "rows to pre-place (default 6, clamped to n-1)");
    solve->add_option("--config", solve_args.config_name, "stack config name")
        ->default_val("config2");
    auto* wrk = solve->add_option("--workers", solve_args.workers, "worker thread count");
    solve->add_option("--partition", solve_args.partition, "uniform|weighted|stealing")
        ->default_val("weighted");
    solve->add_option("--weights", solve_args.weights_csv, "comma-separated worker weights");
    solve->add_option("--kernel", solve_args.kernel_name, "iterative|lastrow")
        ->default_val("lastrow");
    solve->add_option("--format", solve_args.format, "json|csv|log")->default_val("log");
    solve->add_option("--checkpoint", solve_args.checkpoint_path, "checkpoint file path");
    solve->add_flag("--resume", solve_args.resume, "resume from --checkpoint");
    solve->add_option("--checkpoint-interval", solve_args.checkpoint_interval,
                      "subproblems between checkpoint flushes");
    solve->add_option("--chunk-size", solve_args.chunk_size, "stealing chunk size");
    solve->add_option("--export-subproblems", solve_args.export_path,
                      "write the generated batch to this file");

    int sc_n = 8, sc_r = 2;
    std::string sc_export;
    CLI::App* subcount = app.add_subcommand("subcount", "count generated subproblems");
    subcount->add_option("--n", sc_n, "board size")->required();
    subcount->add_option("--pre-rows", sc_r, "rows to pre-place")->required();
    subcount->add_option("--export-subproblems", sc_export,
                         "write the generated batch to this file");

    BenchArgs bench_args;
    CLI::App* bench = app.add_subcommand("bench", "benchmark sweep, CSV on stdout");
    bench->add_option("--n-min", bench_args.n_min);
    bench->add_option("--n-max", bench_args.n_max);
    bench->add_option("--r-min", bench_args.r_min);
    bench->add_option("--r-max", bench_args.r_max);
    bench->add_option("--configs", bench_args.configs_csv, "comma-separated config names");
    bench->add_option("--kernels", bench_args.kernels_csv, "comma-separated kernel names");
    bench->add_option("--reps", bench_args.reps, "repetitions per cell (median reported)");
    auto* bwrk = bench->add_option("--workers", bench_args.workers);

    LayoutArgs layout_args;
    CLI::App* layout = app.add_subcommand("layout", "bank-conflict layout analysis");
    layout->add_option("--layout", layout_args.layout, "interleaved|contiguous");
    layout->add_option("--stack-words", layout_args.stack_words,
                       "words per stack for the contiguous layout");
    layout->add_option("--width", layout_args.width, "4, 16, or 0 for both");
    layout->add_option("--threads", layout_args.threads);
    layout->add_option("--depth", layout_args.depth, "frames per stack");
    layout->add_option("--schedule", layout_args.schedule, "quarter|full");
    layout->add_flag("--grid", layout_args.grid, "also print an ASCII bank grid");

    std::string resume_path, resume_format = "log";
    std::uint64_t resume_interval = 1'000'000;
    CLI::App* resume = app.add_subcommand("resume", "continue an interrupted run");
    resume->add_option("checkpoint", resume_path, "checkpoint file")->required();
    resume->add_option("--format", resume_format, "json|csv|log");
    resume->add_option("--checkpoint-interval", resume_interval);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        solve_args.pre_rows_given = pre->count() > 0;
        solve_args.workers_given = wrk->count() > 0;
        bench_args.workers_given = bwrk->count() > 0;
        if (solve->parsed()) return do_solve(solve_args);
        if (subcount->parsed()) return do_subcount(sc_n, sc_r, sc_export);
        if (bench->parsed()) return do_bench(bench_args);
        if (layout->parsed()) return do_layout(layout_args);
        if (resume->parsed()) return do_resume(resume_path, resume_format, resume_interval);
    } catch (const nqueens::config_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::overflow_error& e) {
        std::cerr << "overflow: " << e.what() << '\n';
        return kExitOverflow;
    } catch (const nqueens::checkpoint_error& e) {
        std::cerr << "checkpoint error: " << e.what() << '\n';
        return kExitCheckpoint;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return kExitOk;
}
