#pragma once

#include <bit>
#include <cassert>
#include <cstdint>

namespace nqueens {

// Occupancy mask: bit i = column i. Only the low N bits of a 32-bit word are
// ever used, so N <= 32.
using bit_mask = std::uint32_t;

inline constexpr int kMaxBoard = 32;

constexpr bit_mask board_mask(int n) {
    return n >= 32 ? 0xffffffffu : ((bit_mask{1} << n) - 1u);
}

// Columns of the current row not attacked by any placed queen.
// left/right carry the diagonal threats already shifted to this row.
constexpr bit_mask valid_positions(bit_mask cur, bit_mask left, bit_mask right, int n) {
    return board_mask(n) & ~(cur | left | right);
}

constexpr bit_mask lowest_set_bit(bit_mask mask) {
    assert(mask != 0);
    return mask & (~mask + 1u);
}

struct PlacementState {
    bit_mask cur;
    bit_mask left;
    bit_mask right;
};

// Place queen p in the current row and advance the threat masks to the next
// row. The left shift truncates at bit 31, matching 32-bit register behavior.
constexpr PlacementState apply_placement(bit_mask cur, bit_mask left, bit_mask right,
                                         bit_mask p) {
    assert(std::has_single_bit(p));
    assert((p & (cur | left | right)) == 0);
    return {cur | p,
            static_cast<bit_mask>((left | p) << 1),
            static_cast<bit_mask>((right | p) >> 1)};
}

}  // namespace nqueens
