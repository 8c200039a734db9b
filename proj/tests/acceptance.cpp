// Acceptance suite: one test case per criterion, each printing a PASS line
// when its checks hold. Exercises the CLI binary where the criterion is about
// command output.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <regex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "nqueens/nqueens.hpp"
#include "oracles.hpp"

using namespace nqueens;
namespace fs = std::filesystem;

namespace {

struct CommandResult {
    int exit_code = -1;
    std::string output;
};

CommandResult run_cli(const std::string& args) {
    const std::string cmd = std::string(NQUEENS_CLI_PATH) + " " + args + " 2>/dev/null";
    CommandResult result;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    while (std::size_t got = std::fread(buf, 1, sizeof(buf), pipe))
        result.output.append(buf, got);
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

std::uint64_t parse_result_line(const std::string& output) {
    const std::regex pattern(R"(n (\d+) queens result (\d+), calc time: \[([0-9.]+) ms\])");
    std::smatch m;
    REQUIRE(std::regex_search(output, m, pattern));
    return std::stoull(m[2]);
}

void pass(int criterion, const std::string& note) {
    std::printf("[acceptance] criterion %d: PASS  (%s)\n", criterion, note.c_str());
    std::fflush(stdout);
}

}  // namespace

TEST_CASE("criterion 1: solve totals match the independent oracles, n<=14, R in {1,2,3}") {
    for (int n = 1; n <= 14; ++n) {
        const std::uint64_t recursive = count_recursive(n, {});
        if (n <= 11) REQUIRE(recursive == oracle::count_by_permutations(n));
        for (int r = 1; r <= 3; ++r) {
            if (r >= n && n != 1) continue;
            std::ostringstream cmd;
            cmd << "solve --n " << n;
            if (n > 1) cmd << " --pre-rows " << std::min(r, n - 1);
            const auto run = run_cli(cmd.str());
            REQUIRE(run.exit_code == 0);
            REQUIRE(parse_result_line(run.output) == recursive);
        }
    }
    pass(1, "cmd_solve == permutation brute force (n<=11) == recursive oracle (n<=14)");
}

TEST_CASE("criterion 2: subcount 27 7 reproduces the reference subproblem count") {
    if (std::getenv("NQUEENS_SKIP_LONG")) {
        MESSAGE("skipped: NQUEENS_SKIP_LONG is set (run on demand)");
        return;
    }
    const auto run = run_cli("subcount --n 27 --pre-rows 7");
    REQUIRE(run.exit_code == 0);
    const std::regex pattern(R"(generate (\d+) subproblems!)");
    std::smatch m;
    REQUIRE(std::regex_search(run.output, m, pattern));
    REQUIRE(std::stoull(m[1]) == 453688251ull);
    pass(2, "cmd_subcount 27 7 -> 453688251");
}

TEST_CASE("criterion 3: kernel equivalence on every subproblem, n<=13 at R=2") {
    const StackConfig& cfg = builtin_configs[0];
    for (int n = 3; n <= 13; ++n) {
        for (const Subproblem& sub : generate({n, 2}))
            REQUIRE(count_iterative(n, sub, cfg).count ==
                  count_iterative_lastrow(n, sub, cfg).count);
    }
    // Non-gating speedup report; the >=25% claim is hardware-bound.
    using clock = std::chrono::steady_clock;
    const auto batch = generate({14, 2});
    const auto t0 = clock::now();
    std::uint64_t a = 0;
    for (const Subproblem& sub : batch) a += count_iterative(14, sub, cfg).count;
    const auto t1 = clock::now();
    std::uint64_t b = 0;
    for (const Subproblem& sub : batch) b += count_iterative_lastrow(14, sub, cfg).count;
    const auto t2 = clock::now();
    REQUIRE(a == b);
    const double iter_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    const double last_ms = std::chrono::duration<double, std::milli>(t2 - t1).count();
    std::printf("[acceptance] (report only) lastrow speedup at n=14: %.1f%% (%.1fms -> %.1fms)\n",
                100.0 * (iter_ms - last_ms) / iter_ms, iter_ms, last_ms);
    pass(3, "count_iterative == count_iterative_lastrow on every subproblem");
}

TEST_CASE("criterion 4: folded generation equals unfolded full enumeration, n<=13") {
    for (int n = 2; n <= 13; ++n) {
        for (int r = 1; r <= 3 && r < n; ++r) {
            std::uint64_t folded = 0;
            for_each_subproblem({n, r}, [&](const Subproblem& sub) {
                folded = checked_add(
                    folded, checked_mul(static_cast<std::uint64_t>(sub.multiplier),
                                        count_recursive(n, sub)));
            });
            std::uint64_t unfolded = 0;
            for (const Subproblem& sub : oracle::generate_unfolded(n, r))
                unfolded = checked_add(unfolded, count_recursive(n, sub));
            REQUIRE(folded == unfolded);
        }
    }
    pass(4, "symmetry fold exact for both parities, R in 1..3");
}

TEST_CASE("criterion 5: stack high-water marks hit and never exceed the depth bounds") {
    const StackConfig& cfg = builtin_configs[0];
    for (int n : {10, 12}) {
        for (int r : {1, 2, 3}) {
            int max_iter = 0, max_last = 0;
            for (const Subproblem& sub : generate({n, r})) {
                const auto it = count_iterative(n, sub, cfg);
                const auto lr = count_iterative_lastrow(n, sub, cfg);
                REQUIRE(it.high_water <= n - r);
                REQUIRE(lr.high_water <= n - r - 1);
                max_iter = std::max(max_iter, it.high_water);
                max_last = std::max(max_last, lr.high_water);
            }
            REQUIRE(max_iter == n - r);
            REQUIRE(max_last == n - r - 1);
        }
    }
    pass(5, "high-water == n-R (iterative) and n-R-1 (lastrow), bound never exceeded");
}

TEST_CASE("criterion 6: bank-model anchors") {
    const BankGeometry geom;
    const auto interleaved = analyze_layout(geom, interleaved_layout(), 24, 32, 4);
    REQUIRE(interleaved.max_degree == 1);

    const auto contiguous = analyze_layout(geom, contiguous_layout(96), 24, 32, 4);
    REQUIRE(contiguous.max_degree == 32);

    const auto full = analyze_layout(geom, interleaved_layout(), 24, 32, 16,
                                     WarpSchedule::full_warp);
    REQUIRE(full.max_degree == 4);
    const auto quarter = analyze_layout(geom, interleaved_layout(), 24, 32, 16,
                                        WarpSchedule::quarter_warp);
    REQUIRE(quarter.max_degree == 1);
    pass(6, "interleaved degree 1; contiguous(96) degree 32; int4 full-warp 4 / quarter-warp 1");
}

TEST_CASE("criterion 7: partition arithmetic") {
    const std::vector<double> weights(paper_gpu_weights.begin(), paper_gpu_weights.end());
    const auto ranges = partition_weighted(100, weights);
    const std::array<std::uint64_t, 8> expected = {20, 15, 12, 11, 11, 11, 10, 10};
    REQUIRE(ranges.size() == 8);
    for (std::size_t i = 0; i < 8; ++i) REQUIRE(ranges[i].size() == expected[i]);

    std::mt19937_64 rng(424242);
    for (int trial = 0; trial < 10000; ++trial) {
        const std::uint64_t tasks = rng() % 1000000;
        const int workers = 1 + static_cast<int>(rng() % 64);
        auto check_cover = [&](const std::vector<IndexRange>& rs) {
            std::uint64_t next = 0;
            for (const auto& r : rs) {
                REQUIRE(r.first == next);
                REQUIRE(r.last >= r.first);
                next = r.last;
            }
            REQUIRE(next == tasks);
        };
        check_cover(partition_uniform(tasks, workers));
        std::vector<double> w(workers);
        for (double& x : w) x = 0.001 + (rng() % 10000) / 10000.0;
        check_cover(partition_weighted(tasks, w));
    }
    pass(7, "paper weights split 100 -> [20,15,12,11,11,11,10,10]; 10^4 random covers");
}

TEST_CASE("criterion 8: 20 randomized interrupt/resume trials at n=14") {
    RunSpec spec;
    spec.n = 14;
    spec.pre_rows = 3;
    spec.plan.strategy = PartitionStrategy::weighted;
    spec.plan.worker_count = 4;
    spec.plan.weights = {0.4, 0.3, 0.2, 0.1};

    const fs::path dir = fs::temp_directory_path();
    const std::uint64_t clean_total = [&] {
        const fs::path path = dir / "nqueens_acc_clean.ckpt";
        const auto report = run_with_checkpoint(spec, {path, 1000, false});
        fs::remove(path);
        return report.total;
    }();
    REQUIRE(clean_total == count_recursive(14, {}));

    std::mt19937_64 rng(777);
    for (int trial = 0; trial < 20; ++trial) {
        const fs::path path = dir / ("nqueens_acc_" + std::to_string(trial) + ".ckpt");
        std::atomic<bool> cancel{false};
        std::thread trigger([&] {
            std::this_thread::sleep_for(std::chrono::microseconds(rng() % 300000));
            cancel.store(true);
        });
        run_with_checkpoint(spec, {path, 100, false}, &cancel);
        trigger.join();
        const auto resumed = run_with_checkpoint(spec, {path, 100, true});
        REQUIRE(resumed.completed);
        REQUIRE(resumed.total == clean_total);
        fs::remove(path);
    }
    pass(8, "all 20 interrupted runs resumed to the clean-run total");
}

TEST_CASE("criterion 9: large-run figures are reference-only at desk scale") {
    // Wall-clock tables, multi-GPU timings, and the 27-queens total are not
    // desk-reproducible; the 27-queens constant is kept for log comparison.
    REQUIRE(kQueens27Reference == 234907967154122528ull);
    pass(9, "27-queens total retained as a named reference constant only");
}

TEST_CASE("criterion 10: growth-ratio sanity via bench output") {
    // Q(n)/Q(n-1) reported for n<=15; asserted only to show monotone growth
    // (ratio > 1) from n=9 on, never the asymptotic value 10.
    std::vector<std::uint64_t> q(16, 0);
    for (int n = 8; n <= 15; ++n) {
        ExecuteOptions opts;
        opts.plan.strategy = PartitionStrategy::uniform;
        opts.plan.worker_count = 4;
        q[n] = execute(n, 2, opts).total;
    }
    std::printf("[acceptance] growth ratios Q(n)/Q(n-1):");
    for (int n = 9; n <= 15; ++n) {
        const double ratio = static_cast<double>(q[n]) / static_cast<double>(q[n - 1]);
        std::printf(" n=%d:%.2f", n, ratio);
        REQUIRE(ratio > 1.0);
    }
    std::printf("\n");

    const auto run = run_cli("bench --n-min 9 --n-max 15 --r-min 2 --r-max 2 --reps 1");
    REQUIRE(run.exit_code == 0);
    REQUIRE(run.output.find("n,r,config,kernel,reps,median_ms,total,ratio") !=
            std::string::npos);
    // every row from n=10 up carries a ratio > 1
    std::istringstream lines(run.output);
    std::string line;
    std::getline(lines, line);  // header
    std::uint64_t prev_total = 0;
    int rows = 0;
    while (std::getline(lines, line)) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        REQUIRE(cells.size() >= 7);
        const std::uint64_t total = std::stoull(cells[6]);
        if (prev_total != 0) {
            REQUIRE(cells.size() == 8);
            REQUIRE(std::stod(cells[7]) > 1.0);
        }
        prev_total = total;
        ++rows;
    }
    REQUIRE(rows == 7);
    pass(10, "bench reports Q(n)/Q(n-1) for n<=15; ratio > 1 for all n >= 9");
}
