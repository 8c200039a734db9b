#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "nqueens/errors.hpp"

namespace nqueens {

// Banked scratchpad geometry. Word w lives in bank w mod bank_count.
// Parameterizable so toy geometries stay hand-checkable.
struct BankGeometry {
    int bank_count = 32;
    int word_bytes = 4;
    int warp_size = 32;
};

// One synchronized access: byte address per active thread, all of the same
// width. Width 4 is a scalar word, width 16 a whole 4-word frame.
struct AccessRequest {
    std::vector<std::uint64_t> addresses;
    int width_bytes = 4;
};

// How a 16-byte access is scheduled: the hardware splits the warp into four
// phases (quarter-warps); full_warp evaluates all threads at once to expose
// the conflict the split avoids.
enum class WarpSchedule { quarter_warp, full_warp };

struct ConflictReport {
    int transactions = 0;
    int max_degree = 0;
};

namespace bankdetail {

// Distinct words per bank; identical words broadcast and count once.
inline int degree_of(const BankGeometry& g, const std::vector<std::uint64_t>& words) {
    std::map<std::uint64_t, std::set<std::uint64_t>> per_bank;
    for (std::uint64_t w : words)
        per_bank[w % static_cast<std::uint64_t>(g.bank_count)].insert(w);
    std::size_t worst = 0;
    for (const auto& [bank, distinct] : per_bank) worst = std::max(worst, distinct.size());
    return static_cast<int>(worst);
}

}  // namespace bankdetail

// Transactions needed to serve the request and the worst per-bank conflict
// degree. 16-byte accesses run as phases of warp_size/4 threads each (or one
// full-warp phase); transactions sum over phases, degree is the phase max.
inline ConflictReport conflict_degree(const BankGeometry& g, const AccessRequest& req,
                                      WarpSchedule schedule = WarpSchedule::quarter_warp) {
    if (req.width_bytes != 4 && req.width_bytes != 16)
        throw config_error("access width must be 4 or 16 bytes");
    for (std::uint64_t a : req.addresses)
        if (a % static_cast<std::uint64_t>(req.width_bytes) != 0)
            throw config_error("misaligned address for width " +
                               std::to_string(req.width_bytes));
    if (req.addresses.empty()) return {0, 0};

    const std::uint64_t wb = static_cast<std::uint64_t>(g.word_bytes);
    if (req.width_bytes == 4) {
        std::vector<std::uint64_t> words;
        words.reserve(req.addresses.size());
        for (std::uint64_t a : req.addresses) words.push_back(a / wb);
        const int d = bankdetail::degree_of(g, words);
        return {d, d};
    }

    const std::size_t phase_threads =
        schedule == WarpSchedule::quarter_warp
            ? static_cast<std::size_t>(std::max(1, g.warp_size / 4))
            : req.addresses.size();
    const int words_per_access = 16 / g.word_bytes;

    ConflictReport report;
    for (std::size_t begin = 0; begin < req.addresses.size(); begin += phase_threads) {
        const std::size_t end = std::min(begin + phase_threads, req.addresses.size());
        std::vector<std::uint64_t> words;
        for (std::size_t t = begin; t < end; ++t)
            for (int k = 0; k < words_per_access; ++k)
                words.push_back(req.addresses[t] / wb + static_cast<std::uint64_t>(k));
        const int d = bankdetail::degree_of(g, words);
        report.transactions += d;
        report.max_degree = std::max(report.max_degree, d);
    }
    return report;
}

// Named (thread, frame, word) -> byte address mapping for a stack layout.
// frame_addr is the base of a 16-byte frame access; layouts whose scalar
// words are not frame-contiguous define it separately.
struct LayoutFn {
    std::string name;
    std::function<std::uint64_t(int t, int f, int k)> word_addr;
    std::function<std::uint64_t(int t, int f)> frame_addr;
};

// Per-thread stacks packed back to back: stack_words words per thread.
inline LayoutFn contiguous_layout(int stack_words) {
    LayoutFn fn;
    fn.name = "contiguous(" + std::to_string(stack_words) + ")";
    fn.word_addr = [stack_words](int t, int f, int k) {
        return static_cast<std::uint64_t>(t) * stack_words * 4 +
               static_cast<std::uint64_t>(4 * f + k) * 4;
    };
    fn.frame_addr = [stack_words](int t, int f) {
        return static_cast<std::uint64_t>(t) * stack_words * 4 +
               static_cast<std::uint64_t>(f) * 16;
    };
    return fn;
}

// Stacks strided 128 bytes apart so thread t's scalar words all land in bank
// t. The 16-byte variant keeps each frame contiguous at 16t + 512f.
inline LayoutFn interleaved_layout() {
    LayoutFn fn;
    fn.name = "interleaved";
    fn.word_addr = [](int t, int f, int k) {
        return static_cast<std::uint64_t>(4 * t) +
               128ull * static_cast<std::uint64_t>(4 * f + k);
    };
    fn.frame_addr = [](int t, int f) {
        return static_cast<std::uint64_t>(16 * t) + 512ull * static_cast<std::uint64_t>(f);
    };
    return fn;
}

struct LayoutReport {
    std::string layout;
    int width_bytes = 4;
    int threads = 32;
    int depth_frames = 24;
    WarpSchedule schedule = WarpSchedule::quarter_warp;
    int max_degree = 0;
    int max_transactions = 0;
    bool injective = true;
};

inline void to_json(nlohmann::json& j, const LayoutReport& r) {
    j = {{"layout", r.layout},
         {"width_bytes", r.width_bytes},
         {"threads", r.threads},
         {"depth_frames", r.depth_frames},
         {"schedule", r.schedule == WarpSchedule::quarter_warp ? "quarter_warp" : "full_warp"},
         {"max_degree", r.max_degree},
         {"max_transactions", r.max_transactions},
         {"injective", r.injective}};
}

// Walk a synchronized warp through every frame/word step of its stacks and
// report the worst case, exhaustively over the domain.
inline LayoutReport analyze_layout(const BankGeometry& g, const LayoutFn& layout,
                                   int depth_frames, int threads, int width_bytes,
                                   WarpSchedule schedule = WarpSchedule::quarter_warp) {
    LayoutReport report;
    report.layout = layout.name;
    report.width_bytes = width_bytes;
    report.threads = threads;
    report.depth_frames = depth_frames;
    report.schedule = schedule;

    std::unordered_set<std::uint64_t> seen_words;
    auto note_words = [&](std::uint64_t base, int count) {
        for (int k = 0; k < count; ++k) {
            if (!seen_words.insert(base / g.word_bytes + k).second)
                report.injective = false;
        }
    };

    if (width_bytes == 4) {
        for (int f = 0; f < depth_frames; ++f) {
            for (int k = 0; k < 4; ++k) {
                AccessRequest req;
                req.width_bytes = 4;
                for (int t = 0; t < threads; ++t) {
                    req.addresses.push_back(layout.word_addr(t, f, k));
                    note_words(req.addresses.back(), 1);
                }
                const auto c = conflict_degree(g, req, schedule);
                report.max_degree = std::max(report.max_degree, c.max_degree);
                report.max_transactions = std::max(report.max_transactions, c.transactions);
            }
        }
    } else if (width_bytes == 16) {
        if (!layout.frame_addr)
            throw config_error("layout '" + layout.name + "' has no 16-byte address form");
        for (int f = 0; f < depth_frames; ++f) {
            AccessRequest req;
            req.width_bytes = 16;
            for (int t = 0; t < threads; ++t) {
                req.addresses.push_back(layout.frame_addr(t, f));
                note_words(req.addresses.back(), 16 / g.word_bytes);
            }
            const auto c = conflict_degree(g, req, schedule);
            report.max_degree = std::max(report.max_degree, c.max_degree);
            report.max_transactions = std::max(report.max_transactions, c.transactions);
        }
    } else {
        throw config_error("access width must be 4 or 16 bytes");
    }
    return report;
}

// ASCII occupancy grid: one row per word step, one column per bank, cells
// show which thread's address lands there (.. empty, ** contended).
inline std::string ascii_bank_grid(const BankGeometry& g, const LayoutFn& layout,
                                   int depth_frames, int threads, int max_steps = 8) {
    std::ostringstream out;
    out << layout.name << " scalar walk, " << threads << " threads\nstep      ";
    for (int b = 0; b < g.bank_count; ++b) {
        char head[16];
        std::snprintf(head, sizeof(head), "%-3d", b);
        out << head;
    }
    out << '\n';
    int steps = 0;
    for (int f = 0; f < depth_frames && steps < max_steps; ++f) {
        for (int k = 0; k < 4 && steps < max_steps; ++k, ++steps) {
            std::vector<std::vector<int>> banks(g.bank_count);
            for (int t = 0; t < threads; ++t) {
                const std::uint64_t word = layout.word_addr(t, f, k) / g.word_bytes;
                banks[word % g.bank_count].push_back(t);
            }
            char label[24];
            std::snprintf(label, sizeof(label), "f%02d.w%d    ", f, k);
            out << label;
            for (const auto& owners : banks) {
                if (owners.empty()) out << ".. ";
                else if (owners.size() > 1) out << "** ";
                else {
                    char cell[8];
                    std::snprintf(cell, sizeof(cell), "%02d ", owners[0]);
                    out << cell;
                }
            }
            out << '\n';
        }
    }
    return out.str();
}

}  // namespace nqueens
