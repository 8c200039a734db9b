#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

#include "nqueens/checkpoint.hpp"
#include "nqueens/errors.hpp"
#include "nqueens/scheduler.hpp"
#include "nqueens/subproblems.hpp"

namespace nqueens {

struct RunSpec {
    int n = 8;
    int pre_rows = 2;
    StackConfig config = builtin_configs[1];
    KernelVariant kernel = KernelVariant::lastrow;
    PartitionPlan plan;
};

struct CheckpointOptions {
    std::filesystem::path path;
    std::uint64_t flush_interval = 1'000'000;  // subproblems between flushes
    bool resume = false;
};

namespace detail {

inline std::vector<double> effective_weights(const PartitionPlan& plan) {
    if (plan.strategy != PartitionStrategy::weighted) return {};
    if (!plan.weights.empty()) return plan.weights;
    return std::vector<double>(plan.worker_count, 1.0 / plan.worker_count);
}

}  // namespace detail

// Checkpointed run: worker progress is snapshotted by a single writer every
// flush_interval completed subproblems, on cancellation, and at the end.
// Restricted to contiguous partitions; a stealing run has no stable
// per-worker index prefix to record.
inline SolveReport run_with_checkpoint(const RunSpec& spec, const CheckpointOptions& ckpt,
                                       const std::atomic<bool>* cancel = nullptr,
                                       std::function<void(const std::string&)> log = {}) {
    using clock = std::chrono::steady_clock;
    if (spec.plan.strategy == PartitionStrategy::stealing)
        throw config_error("checkpointing requires a contiguous partition (uniform/weighted)");
    detail::check_board(spec.n);
    if (spec.n == 1) {
        ExecuteOptions opts;
        opts.kernel = spec.kernel;
        opts.config = spec.config;
        opts.plan = spec.plan;
        opts.log = log;
        return execute(1, 0, opts);
    }

    const auto gen_start = clock::now();
    const std::vector<Subproblem> batch = generate({spec.n, spec.pre_rows});
    const double gen_ms =
        std::chrono::duration<double, std::milli>(clock::now() - gen_start).count();
    if (log) log(log_generation_line(gen_ms, batch.size()));

    const std::vector<double> weights = detail::effective_weights(spec.plan);
    const std::vector<IndexRange> ranges =
        spec.plan.strategy == PartitionStrategy::uniform
            ? partition_uniform(batch.size(), spec.plan.worker_count)
            : partition_weighted(batch.size(), weights);
    const std::string identity =
        run_identity(spec.n, spec.pre_rows, spec.kernel, spec.plan.strategy, weights,
                     spec.plan.worker_count, batch.size());

    double prev_elapsed_ms = 0;
    std::vector<WorkerProgress> initial(spec.plan.worker_count);
    for (int w = 0; w < spec.plan.worker_count; ++w) initial[w] = {ranges[w].first, 0};

    if (ckpt.resume) {
        const Checkpoint loaded = load_checkpoint(ckpt.path);
        if (loaded.identity != identity)
            throw checkpoint_error(
                "checkpoint does not match this run (identity " + loaded.identity +
                " vs " + identity + "); refusing to resume");
        prev_elapsed_ms = loaded.elapsed_ms;
        for (int w = 0; w < spec.plan.worker_count; ++w) {
            if (loaded.workers[w].range_first != ranges[w].first ||
                loaded.workers[w].range_last != ranges[w].last)
                throw checkpoint_error("checkpoint ranges do not match partition");
            initial[w] = {loaded.workers[w].next_index, loaded.workers[w].partial_sum};
        }
        if (loaded.complete()) {
            SolveReport report;
            report.n = spec.n;
            report.pre_rows = spec.pre_rows;
            report.config_name = std::string(spec.config.name);
            report.kernel = spec.kernel;
            report.strategy = spec.plan.strategy;
            report.worker_count = spec.plan.worker_count;
            report.task_count = batch.size();
            report.generation_ms = gen_ms;
            report.calc_ms = prev_elapsed_ms;
            report.workers.resize(spec.plan.worker_count);
            std::uint64_t total = 0;
            for (int w = 0; w < spec.plan.worker_count; ++w) {
                report.workers[w].worker = w;
                report.workers[w].assigned = ranges[w].size();
                report.workers[w].processed = ranges[w].size();
                report.workers[w].partial_sum = loaded.workers[w].partial_sum;
                total = checked_add(total, loaded.workers[w].partial_sum);
            }
            report.total = total;
            if (log) log(log_result_line(spec.n, report.total, report.calc_ms));
            return report;
        }
    }

    ProgressBoard board;
    board.reset(initial);

    const auto calc_start = clock::now();
    auto make_checkpoint = [&]() {
        Checkpoint ck;
        ck.identity = identity;
        ck.n = spec.n;
        ck.pre_rows = spec.pre_rows;
        ck.kernel = spec.kernel;
        ck.strategy = spec.plan.strategy;
        ck.weights = weights;
        ck.config_name = std::string(spec.config.name);
        ck.worker_count = spec.plan.worker_count;
        ck.task_count = batch.size();
        ck.elapsed_ms =
            prev_elapsed_ms +
            std::chrono::duration<double, std::milli>(clock::now() - calc_start).count();
        const auto snap = board.snapshot();
        ck.workers.resize(snap.size());
        for (std::size_t w = 0; w < snap.size(); ++w)
            ck.workers[w] = {ranges[w].first, ranges[w].last, snap[w].next_index,
                             snap[w].partial_sum};
        return ck;
    };

    std::mutex flush_mutex;
    std::condition_variable flush_cv;
    bool done = false;
    std::uint64_t flushed_processed = 0;
    for (int w = 0; w < spec.plan.worker_count; ++w)
        flushed_processed += initial[w].next_index - ranges[w].first;

    std::thread flusher([&] {
        std::unique_lock<std::mutex> lock(flush_mutex);
        while (!done) {
            flush_cv.wait_for(lock, std::chrono::milliseconds(100));
            if (done) break;
            const auto snap = board.snapshot();
            std::uint64_t processed = 0;
            for (std::size_t w = 0; w < snap.size(); ++w)
                processed += snap[w].next_index - ranges[w].first;
            if (processed - flushed_processed >= ckpt.flush_interval) {
                save_checkpoint(make_checkpoint(), ckpt.path);
                flushed_processed = processed;
            }
        }
    });

    SolveReport report;
    try {
        ExecuteOptions opts;
        opts.kernel = spec.kernel;
        opts.config = spec.config;
        opts.plan = spec.plan;
        opts.log = log;
        opts.progress = &board;
        opts.cancel = cancel;
        opts.resume = initial;
        report = execute_batch(spec.n, spec.pre_rows, batch, opts);
    } catch (...) {
        {
            std::lock_guard<std::mutex> lock(flush_mutex);
            done = true;
        }
        flush_cv.notify_all();
        flusher.join();
        throw;
    }
    {
        std::lock_guard<std::mutex> lock(flush_mutex);
        done = true;
    }
    flush_cv.notify_all();
    flusher.join();

    // Final flush captures either the finished state or the exact
    // interruption point.
    save_checkpoint(make_checkpoint(), ckpt.path);

    report.generation_ms = gen_ms;
    report.calc_ms += prev_elapsed_ms;
    // Resumed workers report only this session's processed count; fix up the
    // totals so the report covers the whole run.
    for (int w = 0; w < spec.plan.worker_count; ++w) {
        report.workers[w].processed += initial[w].next_index - ranges[w].first;
    }
    if (report.completed && log)
        log(log_result_line(spec.n, report.total, report.calc_ms));
    return report;
}

}  // namespace nqueens
