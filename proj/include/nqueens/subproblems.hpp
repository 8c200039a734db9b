#pragma once

#include <bit>
#include <cstdint>
#include <iomanip>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "nqueens/bitboard.hpp"
#include "nqueens/errors.hpp"
#include "nqueens/solver.hpp"

namespace nqueens {

struct GenerationPlan {
    int n = 8;
    int pre_rows = 2;
    std::optional<std::uint64_t> expected_total = std::nullopt;
};

// 27-Queens reference total, kept only for comparing against run logs.
// Computing it is a multi-week multi-GPU job, not a test.
inline constexpr std::uint64_t kQueens27Reference = 234907967154122528ull;

namespace detail {

inline void check_plan(const GenerationPlan& plan) {
    check_board(plan.n);
    if (plan.pre_rows < 1 || plan.pre_rows >= plan.n)
        throw config_error("pre_rows must satisfy 1 <= R < n (n=" + std::to_string(plan.n) +
                           ", R=" + std::to_string(plan.pre_rows) + ")");
    if (plan.pre_rows > 8)
        throw config_error("pre_rows above 8 is not supported");
}

template <typename Sink>
void expand_rows(int n, bit_mask cur, bit_mask left, bit_mask right, int row, int target,
                 int multiplier, Sink& sink) {
    if (row == target) {
        sink(Subproblem{cur, left, right, target, multiplier});
        return;
    }
    bit_mask valid_pos = valid_positions(cur, left, right, n);
    while (valid_pos != 0) {
        const bit_mask p = lowest_set_bit(valid_pos);
        valid_pos -= p;
        const auto s = apply_placement(cur, left, right, p);
        expand_rows(n, s.cur, s.left, s.right, row + 1, target, multiplier, sink);
    }
}

// Counting-only walk: the last expansion level is a popcount, no emission.
inline std::uint64_t count_rows(int n, bit_mask cur, bit_mask left, bit_mask right,
                                int row, int target) {
    if (row == target) return 1;
    bit_mask valid_pos = valid_positions(cur, left, right, n);
    if (row == target - 1) return static_cast<std::uint64_t>(std::popcount(valid_pos));
    std::uint64_t sum = 0;
    while (valid_pos != 0) {
        const bit_mask p = lowest_set_bit(valid_pos);
        valid_pos -= p;
        const auto s = apply_placement(cur, left, right, p);
        sum = checked_add(sum, count_rows(n, s.cur, s.left, s.right, row + 1, target));
    }
    return sum;
}

}  // namespace detail

// Stream the symmetry-folded subproblem batch in deterministic order:
// row by row, ascending column. First-row queens cover columns
// 0 .. floor(n/2)-1 with multiplier 2; for odd n the center column is
// expanded too, folding its second row to the left non-blocked half
// (multiplier 2), or emitted whole with multiplier 1 when R == 1.
template <typename Sink>
void for_each_subproblem(const GenerationPlan& plan, Sink&& sink) {
    detail::check_plan(plan);
    const int n = plan.n;
    const int target = plan.pre_rows;

    for (int c = 0; c < n / 2; ++c) {
        const auto s = apply_placement(0, 0, 0, bit_mask{1} << c);
        detail::expand_rows(n, s.cur, s.left, s.right, 1, target, 2, sink);
    }
    if (n % 2 == 1) {
        const int c = (n - 1) / 2;
        const auto s = apply_placement(0, 0, 0, bit_mask{1} << c);
        if (target == 1) {
            sink(Subproblem{s.cur, s.left, s.right, 1, 1});
        } else {
            // Columns c-1, c, c+1 of row two are blocked by the center queen;
            // mirror symmetry leaves the left half, columns 0 .. c-2.
            const bit_mask left_half = c >= 1 ? (bit_mask{1} << (c - 1)) - 1u : 0u;
            bit_mask valid_pos = valid_positions(s.cur, s.left, s.right, n) & left_half;
            while (valid_pos != 0) {
                const bit_mask p = lowest_set_bit(valid_pos);
                valid_pos -= p;
                const auto s2 = apply_placement(s.cur, s.left, s.right, p);
                detail::expand_rows(n, s2.cur, s2.left, s2.right, 2, target, 2, sink);
            }
        }
    }
}

inline std::vector<Subproblem> generate(const GenerationPlan& plan) {
    std::vector<Subproblem> batch;
    if (plan.expected_total) batch.reserve(*plan.expected_total);
    for_each_subproblem(plan, [&](const Subproblem& sub) { batch.push_back(sub); });
    return batch;
}

// Length of the generated stream without materializing it.
inline std::uint64_t count_subproblems(int n, int pre_rows) {
    GenerationPlan plan{n, pre_rows};
    detail::check_plan(plan);

    std::uint64_t total = 0;
    for (int c = 0; c < n / 2; ++c) {
        const auto s = apply_placement(0, 0, 0, bit_mask{1} << c);
        total = checked_add(total, detail::count_rows(n, s.cur, s.left, s.right, 1, pre_rows));
    }
    if (n % 2 == 1) {
        const int c = (n - 1) / 2;
        const auto s = apply_placement(0, 0, 0, bit_mask{1} << c);
        if (pre_rows == 1) {
            total = checked_add(total, 1);
        } else {
            const bit_mask left_half = c >= 1 ? (bit_mask{1} << (c - 1)) - 1u : 0u;
            bit_mask valid_pos = valid_positions(s.cur, s.left, s.right, n) & left_half;
            while (valid_pos != 0) {
                const bit_mask p = lowest_set_bit(valid_pos);
                valid_pos -= p;
                const auto s2 = apply_placement(s.cur, s.left, s.right, p);
                total = checked_add(total,
                                    detail::count_rows(n, s2.cur, s2.left, s2.right, 2, pre_rows));
            }
        }
    }
    return total;
}

// Sum of multiplier * count with checked arithmetic. Duplicate subproblem
// states in the result set are rejected.
inline std::uint64_t aggregate(std::span<const std::pair<Subproblem, std::uint64_t>> results) {
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(results.size());
    std::uint64_t total = 0;
    for (const auto& [sub, count] : results) {
        // cur determines placed_rows; (cur,left,right) keyed via a 64-bit mix.
        std::uint64_t key = sub.cur;
        key = key * 0x9e3779b97f4a7c15ull ^ sub.left;
        key = key * 0x9e3779b97f4a7c15ull ^ sub.right;
        key = key * 0x9e3779b97f4a7c15ull ^ static_cast<std::uint64_t>(sub.placed_rows);
        if (!seen.insert(key).second)
            throw config_error("duplicate subproblem in aggregation input");
        total = checked_add(total,
                            checked_mul(static_cast<std::uint64_t>(sub.multiplier), count));
    }
    return total;
}

// One subproblem per line: `index cur left right placed_rows multiplier`,
// masks in lowercase hex, everything else decimal.
inline std::uint64_t write_batch(std::ostream& out, const GenerationPlan& plan) {
    std::uint64_t index = 0;
    for_each_subproblem(plan, [&](const Subproblem& sub) {
        out << std::dec << index << ' ' << std::hex << sub.cur << ' ' << sub.left << ' '
            << sub.right << std::dec << ' ' << sub.placed_rows << ' ' << sub.multiplier
            << '\n';
        ++index;
    });
    return index;
}

}  // namespace nqueens
