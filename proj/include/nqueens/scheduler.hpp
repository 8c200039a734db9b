#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <exception>
#include <functional>
#include <mutex>
#include <numeric>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "nqueens/errors.hpp"
#include "nqueens/solver.hpp"
#include "nqueens/stack_config.hpp"
#include "nqueens/subproblems.hpp"

namespace nqueens {

enum class PartitionStrategy { uniform, weighted, stealing };

inline const char* to_string(PartitionStrategy s) {
    switch (s) {
        case PartitionStrategy::uniform: return "uniform";
        case PartitionStrategy::weighted: return "weighted";
        default: return "stealing";
    }
}

inline PartitionStrategy partition_strategy_from(const std::string& name) {
    if (name == "uniform") return PartitionStrategy::uniform;
    if (name == "weighted") return PartitionStrategy::weighted;
    if (name == "stealing") return PartitionStrategy::stealing;
    throw config_error("unknown partition strategy '" + name + "'");
}

// Per-GPU time-derived split from the reference 8-card run.
inline constexpr std::array<double, 8> paper_gpu_weights = {0.20, 0.15, 0.12, 0.11,
                                                            0.11, 0.11, 0.10, 0.10};

struct PartitionPlan {
    PartitionStrategy strategy = PartitionStrategy::weighted;
    int worker_count = 1;
    std::vector<double> weights;      // weighted only; normalized before use
    std::uint64_t chunk_size = 4096;  // stealing only
};

// Half-open index range [first, last).
struct IndexRange {
    std::uint64_t first = 0;
    std::uint64_t last = 0;
    std::uint64_t size() const { return last - first; }
};

inline std::vector<IndexRange> partition_uniform(std::uint64_t task_count, int worker_count) {
    if (worker_count < 1) throw config_error("worker_count must be >= 1");
    std::vector<IndexRange> ranges(worker_count);
    const std::uint64_t base = task_count / worker_count;
    const std::uint64_t rem = task_count % worker_count;
    std::uint64_t next = 0;
    for (int i = 0; i < worker_count; ++i) {
        const std::uint64_t size = base + (static_cast<std::uint64_t>(i) < rem ? 1 : 0);
        ranges[i] = {next, next + size};
        next += size;
    }
    return ranges;
}

// floor(task_count * w_i) each, remainder topped up one-by-one from worker 0.
inline std::vector<IndexRange> partition_weighted(std::uint64_t task_count,
                                                  const std::vector<double>& weights) {
    if (weights.empty()) throw config_error("weighted partition needs at least one weight");
    double sum = 0;
    for (double w : weights) {
        if (!(w > 0)) throw config_error("partition weights must be positive");
        sum += w;
    }
    std::vector<std::uint64_t> sizes(weights.size());
    std::uint64_t assigned = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        sizes[i] = static_cast<std::uint64_t>(
            std::floor(static_cast<double>(task_count) * (weights[i] / sum)));
        assigned += sizes[i];
    }
    for (std::size_t i = 0; assigned < task_count; i = (i + 1) % sizes.size()) {
        ++sizes[i];
        ++assigned;
    }
    std::vector<IndexRange> ranges(sizes.size());
    std::uint64_t next = 0;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        ranges[i] = {next, next + sizes[i]};
        next += sizes[i];
    }
    return ranges;
}

struct WorkerStats {
    int worker = 0;
    std::uint64_t assigned = 0;   // 0 means dynamic (stealing)
    std::uint64_t processed = 0;
    std::uint64_t partial_sum = 0;  // multiplier-weighted
    double elapsed_ms = 0;
};

struct SolveReport {
    int n = 0;
    int pre_rows = 0;
    std::string config_name;
    KernelVariant kernel = KernelVariant::lastrow;
    PartitionStrategy strategy = PartitionStrategy::weighted;
    int worker_count = 1;
    std::uint64_t task_count = 0;
    double generation_ms = 0;
    double calc_ms = 0;
    std::uint64_t total = 0;
    bool completed = true;
    std::vector<WorkerStats> workers;

    // Max/min per-worker elapsed time; load-skew is reported, never asserted.
    double skew_ratio() const {
        double lo = 0, hi = 0;
        for (const auto& w : workers) {
            if (w.elapsed_ms > hi) hi = w.elapsed_ms;
            if (lo == 0 || (w.elapsed_ms > 0 && w.elapsed_ms < lo)) lo = w.elapsed_ms;
        }
        return lo > 0 ? hi / lo : 0.0;
    }
};

inline void to_json(nlohmann::json& j, const WorkerStats& w) {
    j = {{"worker", w.worker},
         {"assigned", w.assigned},
         {"processed", w.processed},
         {"partial_sum", w.partial_sum},
         {"elapsed_ms", w.elapsed_ms}};
}

inline void to_json(nlohmann::json& j, const SolveReport& r) {
    j = {{"n", r.n},
         {"pre_rows", r.pre_rows},
         {"config", r.config_name},
         {"kernel", to_string(r.kernel)},
         {"partition", to_string(r.strategy)},
         {"worker_count", r.worker_count},
         {"task_count", r.task_count},
         {"generation_ms", r.generation_ms},
         {"calc_ms", r.calc_ms},
         {"total", r.total},
         {"completed", r.completed},
         {"skew_ratio", r.skew_ratio()},
         {"workers", r.workers}};
}

// --- runtime-log style lines -------------------------------------------------

inline std::string log_timestamp() {
    using namespace std::chrono;
    const auto now = system_clock::now();
    const auto ms = duration_cast<milliseconds>(now.time_since_epoch()) % 1000;
    const std::time_t t = system_clock::to_time_t(now);
    std::tm tm{};
    localtime_r(&t, &tm);
    char buf[80];
    std::snprintf(buf, sizeof(buf), "[%04d-%02d-%02d %02d:%02d:%02d.%03d]",
                  tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min,
                  tm.tm_sec, static_cast<int>(ms.count()));
    return buf;
}

inline std::string log_generation_line(double ms, std::uint64_t count) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "Use %.2fms to generate %llu subproblems!", ms,
                  static_cast<unsigned long long>(count));
    return log_timestamp() + " " + buf;
}

inline std::string log_start_line(int worker, std::uint64_t count, double fraction) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "worker [%d] start job, with %llu(%.2f) subproblems.",
                  worker, static_cast<unsigned long long>(count), fraction);
    return log_timestamp() + " " + buf;
}

inline std::string log_finish_line(int worker) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "worker [%d] finish job.", worker);
    return log_timestamp() + " " + buf;
}

// Final line; parses with: n (\d+) queens result (\d+), calc time: \[([0-9.]+) ms\]
inline std::string log_result_line(int n, std::uint64_t total, double calc_ms) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "n %d queens result %llu, calc time: [%.2f ms]", n,
                  static_cast<unsigned long long>(total), calc_ms);
    return log_timestamp() + " " + buf;
}

// --- execution ---------------------------------------------------------------

// Committed position of one worker: every owned subproblem with index below
// next_index is done and folded into partial_sum.
struct WorkerProgress {
    std::uint64_t next_index = 0;
    std::uint64_t partial_sum = 0;
};

// Snapshot board shared between workers and a checkpoint writer. Commits are
// tiny and per-worker, so a mutex per slot is enough.
class ProgressBoard {
public:
    void reset(const std::vector<WorkerProgress>& initial) {
        slots_ = std::vector<Slot>(initial.size());
        for (std::size_t i = 0; i < initial.size(); ++i) slots_[i].progress = initial[i];
    }

    void commit(int worker, WorkerProgress p) {
        Slot& s = slots_[static_cast<std::size_t>(worker)];
        std::lock_guard<std::mutex> lock(s.mutex);
        s.progress = p;
    }

    std::vector<WorkerProgress> snapshot() const {
        std::vector<WorkerProgress> out(slots_.size());
        for (std::size_t i = 0; i < slots_.size(); ++i) {
            std::lock_guard<std::mutex> lock(slots_[i].mutex);
            out[i] = slots_[i].progress;
        }
        return out;
    }

private:
    struct Slot {
        mutable std::mutex mutex;
        WorkerProgress progress;
    };
    std::vector<Slot> slots_;
};

struct ExecuteOptions {
    KernelVariant kernel = KernelVariant::lastrow;
    StackConfig config = builtin_configs[1];  // config2
    PartitionPlan plan;
    std::function<void(const std::string&)> log;  // optional log-line sink
    ProgressBoard* progress = nullptr;            // contiguous strategies only
    const std::atomic<bool>* cancel = nullptr;
    std::vector<WorkerProgress> resume;  // empty, or one entry per worker
};

namespace detail {

inline void emit(const ExecuteOptions& opts, const std::string& line) {
    if (opts.log) opts.log(line);
}

}  // namespace detail

// Solve a pre-generated batch. Every subproblem is handled exactly once; the
// report totals are strategy- and worker-count-independent.
inline SolveReport execute_batch(int n, int pre_rows, const std::vector<Subproblem>& batch,
                                 const ExecuteOptions& opts) {
    using clock = std::chrono::steady_clock;
    const PartitionPlan& plan = opts.plan;
    if (plan.worker_count < 1) throw config_error("worker_count must be >= 1");
    if (plan.strategy == PartitionStrategy::stealing && plan.chunk_size == 0)
        throw config_error("chunk_size must be >= 1");
    require_feasible(opts.config, n, pre_rows, opts.kernel == KernelVariant::lastrow);

    const std::uint64_t task_count = batch.size();
    SolveReport report;
    report.n = n;
    report.pre_rows = pre_rows;
    report.config_name = std::string(opts.config.name);
    report.kernel = opts.kernel;
    report.strategy = plan.strategy;
    report.worker_count = plan.worker_count;
    report.task_count = task_count;
    report.workers.resize(plan.worker_count);

    std::vector<IndexRange> ranges;
    if (plan.strategy == PartitionStrategy::uniform)
        ranges = partition_uniform(task_count, plan.worker_count);
    else if (plan.strategy == PartitionStrategy::weighted)
        ranges = partition_weighted(
            task_count, plan.weights.empty()
                            ? std::vector<double>(plan.worker_count, 1.0 / plan.worker_count)
                            : plan.weights);
    if (!ranges.empty() && static_cast<int>(ranges.size()) != plan.worker_count)
        throw config_error("weights length must equal worker_count");
    if (!opts.resume.empty() && static_cast<int>(opts.resume.size()) != plan.worker_count)
        throw config_error("resume state length must equal worker_count");
    if (!opts.resume.empty() && ranges.empty())
        throw config_error("resume requires a contiguous partition strategy");

    std::atomic<std::uint64_t> steal_cursor{0};
    std::atomic<bool> interrupted{false};
    std::mutex failure_mutex;
    std::string failure;

    const auto calc_start = clock::now();
    std::vector<std::thread> threads;
    threads.reserve(plan.worker_count);

    for (int w = 0; w < plan.worker_count; ++w) {
        threads.emplace_back([&, w] {
            WorkerStats& stats = report.workers[w];
            stats.worker = w;
            std::uint64_t index = 0;  // current subproblem, for failure reports
            try {
                const auto start = clock::now();
                std::uint64_t sum = 0;

                auto solve_one = [&](std::uint64_t i) {
                    index = i;
                    const Subproblem& sub = batch[i];
                    const auto r = count_with(opts.kernel, n, sub, opts.config);
                    sum = checked_add(
                        sum, checked_mul(static_cast<std::uint64_t>(sub.multiplier), r.count));
                    ++stats.processed;
                };

                if (!ranges.empty()) {
                    const IndexRange range = ranges[w];
                    stats.assigned = range.size();
                    std::uint64_t begin = range.first;
                    if (!opts.resume.empty()) {
                        begin = std::max(begin, opts.resume[w].next_index);
                        sum = opts.resume[w].partial_sum;
                    }
                    detail::emit(opts, log_start_line(
                                           w, range.size(),
                                           task_count ? static_cast<double>(range.size()) /
                                                            static_cast<double>(task_count)
                                                      : 0.0));
                    for (std::uint64_t i = begin; i < range.last; ++i) {
                        if (opts.cancel && opts.cancel->load(std::memory_order_relaxed)) {
                            interrupted.store(true);
                            break;
                        }
                        solve_one(i);
                        if (opts.progress) opts.progress->commit(w, {i + 1, sum});
                    }
                } else {
                    detail::emit(opts, log_start_line(w, 0, 0.0));
                    for (;;) {
                        if (opts.cancel && opts.cancel->load(std::memory_order_relaxed)) {
                            interrupted.store(true);
                            break;
                        }
                        const std::uint64_t first =
                            steal_cursor.fetch_add(plan.chunk_size, std::memory_order_relaxed);
                        if (first >= task_count) break;
                        const std::uint64_t last =
                            std::min(first + plan.chunk_size, task_count);
                        for (std::uint64_t i = first; i < last; ++i) solve_one(i);
                    }
                }

                stats.partial_sum = sum;
                stats.elapsed_ms =
                    std::chrono::duration<double, std::milli>(clock::now() - start).count();
                detail::emit(opts, log_finish_line(w));
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (failure.empty())
                    failure = "worker " + std::to_string(w) + " failed on subproblem " +
                              std::to_string(index) + ": " + e.what();
                interrupted.store(true);
            }
        });
    }
    for (auto& t : threads) t.join();

    if (!failure.empty()) throw std::runtime_error(failure);

    report.calc_ms =
        std::chrono::duration<double, std::milli>(clock::now() - calc_start).count();
    std::uint64_t total = 0;
    for (const auto& w : report.workers) total = checked_add(total, w.partial_sum);
    report.total = total;
    report.completed = !interrupted.load();
    return report;
}

// Generate the batch for (n, pre_rows) and solve it. n == 1 short-circuits:
// the fold degenerates there and Q(1) == 1.
inline SolveReport execute(int n, int pre_rows, const ExecuteOptions& opts) {
    using clock = std::chrono::steady_clock;
    detail::check_board(n);
    if (n == 1) {
        SolveReport report;
        report.n = 1;
        report.pre_rows = 0;
        report.config_name = std::string(opts.config.name);
        report.kernel = opts.kernel;
        report.strategy = opts.plan.strategy;
        report.worker_count = opts.plan.worker_count;
        report.total = 1;
        report.workers.resize(opts.plan.worker_count);
        for (int w = 0; w < opts.plan.worker_count; ++w) report.workers[w].worker = w;
        report.workers[0].partial_sum = 1;
        detail::emit(opts, log_result_line(1, 1, 0.0));
        return report;
    }

    const auto gen_start = clock::now();
    const std::vector<Subproblem> batch = generate({n, pre_rows});
    const double gen_ms =
        std::chrono::duration<double, std::milli>(clock::now() - gen_start).count();
    detail::emit(opts, log_generation_line(gen_ms, batch.size()));

    SolveReport report = execute_batch(n, pre_rows, batch, opts);
    report.generation_ms = gen_ms;
    if (report.completed)
        detail::emit(opts, log_result_line(n, report.total, report.calc_ms));
    return report;
}

}  // namespace nqueens
