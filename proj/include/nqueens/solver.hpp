#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>

#include "nqueens/bitboard.hpp"
#include "nqueens/errors.hpp"
#include "nqueens/stack_config.hpp"

namespace nqueens {

// Root of one independent subtree: the first placed_rows rows are fixed and
// left/right are already shifted to the next open row. multiplier is the
// symmetry weight applied when aggregating (2 for mirrored half-board roots,
// 1 for the unfolded odd-N center root).
struct Subproblem {
    bit_mask cur = 0;
    bit_mask left = 0;
    bit_mask right = 0;
    int placed_rows = 0;
    int multiplier = 2;

    friend bool operator==(const Subproblem&, const Subproblem&) = default;
};

enum class KernelVariant { iterative, lastrow };

inline const char* to_string(KernelVariant v) {
    return v == KernelVariant::lastrow ? "lastrow" : "iterative";
}

struct KernelResult {
    std::uint64_t count = 0;
    // Deepest frame the search logically occupies (row of the deepest expanded
    // frame, relative to the root). The physical stack can sit one slot lower
    // because an exhausted parent's slot is reused for its child, but capacity
    // must be provisioned for this depth.
    int high_water = 0;
};

namespace detail {

inline void check_board(int n) {
    if (n < 1 || n > kMaxBoard)
        throw config_error("board size must be in [1, 32], got " + std::to_string(n));
}

inline std::uint64_t count_recursive_impl(int n, bit_mask cur, bit_mask left,
                                          bit_mask right) {
    const bit_mask last = board_mask(n);
    if (cur == last) return 1;
    std::uint64_t sum = 0;
    bit_mask valid_pos = valid_positions(cur, left, right, n);
    while (valid_pos != 0) {
        const bit_mask p = lowest_set_bit(valid_pos);
        valid_pos -= p;
        const auto s = apply_placement(cur, left, right, p);
        sum = checked_add(sum, count_recursive_impl(n, s.cur, s.left, s.right));
    }
    return sum;
}

}  // namespace detail

// Reference solver: plain recursion, used as the oracle and for small boards.
// The multiplier is NOT applied; callers aggregate.
inline std::uint64_t count_recursive(int n, const Subproblem& sub) {
    detail::check_board(n);
    return detail::count_recursive_impl(n, sub.cur, sub.left, sub.right);
}

// Iterative DFS with an explicit bounded stack of 4-word frames
// (cur, left, right, valid_pos). Exactly equivalent to count_recursive.
// A root with no legal next row must be settled before entering the loop:
// pushed with valid_pos == 0 it would extract p == 0, silently skip a row,
// and could still reach cur == last later, counting a phantom solution.
inline KernelResult count_iterative(int n, const Subproblem& sub, const StackConfig& cfg) {
    detail::check_board(n);
    require_feasible(cfg, n, sub.placed_rows, false);

    const bit_mask last = board_mask(n);
    const int placed = sub.placed_rows;
    bit_mask cur = sub.cur;
    bit_mask left = sub.left;
    bit_mask right = sub.right;

    if (cur == last) return {1, 0};
    bit_mask valid_pos = valid_positions(cur, left, right, n);
    if (valid_pos == 0) return {0, 0};

    std::array<bit_mask, 4 * (kMaxBoard + 1)> stack;
    int top = 0;
    int high = 0;
    std::uint64_t sum = 0;

    stack[0] = cur;
    stack[1] = left;
    stack[2] = right;
    stack[3] = valid_pos;
    top = 4;

    while (top != 0) {
        cur = stack[top - 4];
        left = stack[top - 3];
        right = stack[top - 2];
        valid_pos = stack[top - 1];
        high = std::max(high, std::popcount(cur) - placed + 1);
        const bit_mask p = valid_pos & (~valid_pos + 1u);
        valid_pos -= p;
        stack[top - 1] = valid_pos;
        top -= (valid_pos == 0) ? 4 : 0;
        cur |= p;
        if (cur == last) {
            sum = checked_add(sum, 1);
            continue;
        }
        left = (left | p) << 1;
        right = (right | p) >> 1;
        valid_pos = valid_positions(cur, left, right, n);
        if (valid_pos == 0) continue;
        stack[top] = cur;
        stack[top + 1] = left;
        stack[top + 2] = right;
        stack[top + 3] = valid_pos;
        top += 4;
    }
    return {sum, high};
}

// Last-row-optimized variant: once the next-to-last row is reached, the final
// row is settled by counting the bits of its valid_pos instead of pushing a
// frame, so the stack needs one fewer level. A root with no legal next row is
// rejected up front; without the cur==last termination the merged condition
// would otherwise let a skipped-row walk reach popcount(cur)==n-1 and
// overcount.
inline KernelResult count_iterative_lastrow(int n, const Subproblem& sub,
                                            const StackConfig& cfg) {
    detail::check_board(n);
    require_feasible(cfg, n, sub.placed_rows, true);

    const bit_mask last = board_mask(n);
    bit_mask cur = sub.cur;
    bit_mask left = sub.left;
    bit_mask right = sub.right;

    if (sub.placed_rows >= n) return {cur == last ? 1u : 0u, 0};
    bit_mask valid_pos = valid_positions(cur, left, right, n);
    if (sub.placed_rows == n - 1)
        return {static_cast<std::uint64_t>(std::popcount(valid_pos)), 0};
    if (valid_pos == 0) return {0, 0};

    std::array<bit_mask, 4 * (kMaxBoard + 1)> stack;
    int top = 0;
    int high = 0;
    std::uint64_t sum = 0;

    stack[0] = cur;
    stack[1] = left;
    stack[2] = right;
    stack[3] = valid_pos;
    top = 4;

    const int placed = sub.placed_rows;
    while (top != 0) {
        cur = stack[top - 4];
        left = stack[top - 3];
        right = stack[top - 2];
        valid_pos = stack[top - 1];
        high = std::max(high, std::popcount(cur) - placed + 1);
        const bit_mask p = valid_pos & (~valid_pos + 1u);
        valid_pos -= p;
        stack[top - 1] = valid_pos;
        top -= (valid_pos == 0) ? 4 : 0;
        cur |= p;
        left = (left | p) << 1;
        right = (right | p) >> 1;
        valid_pos = valid_positions(cur, left, right, n);
        if (valid_pos == 0 || std::popcount(cur) == n - 1) {
            sum = checked_add(sum, static_cast<std::uint64_t>(std::popcount(valid_pos)));
            continue;
        }
        stack[top] = cur;
        stack[top + 1] = left;
        stack[top + 2] = right;
        stack[top + 3] = valid_pos;
        top += 4;
    }
    return {sum, high};
}

inline KernelResult count_with(KernelVariant variant, int n, const Subproblem& sub,
                               const StackConfig& cfg) {
    return variant == KernelVariant::lastrow ? count_iterative_lastrow(n, sub, cfg)
                                             : count_iterative(n, sub, cfg);
}

}  // namespace nqueens
