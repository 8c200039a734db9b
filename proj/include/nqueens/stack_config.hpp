#pragma once

#include <array>
#include <string>
#include <string_view>

#include "nqueens/errors.hpp"

namespace nqueens {

// Stack budget for one searcher. block_size is the thread-block size the
// shared-memory budget was derived from (48KB = block_size * stack_words * 4);
// it is informational on the CPU but kept so the built-in table stays
// recognizable.
struct StackConfig {
    std::string_view name;
    int block_size = 128;
    int stack_words = 96;           // 32-bit words per searcher stack
    int pre_rows_reference = 6;     // rows assumed pre-placed when quoting max_n
    bool last_row_opt = false;

    constexpr int max_depth() const { return stack_words / 4; }

    constexpr int max_n() const {
        return max_depth() + pre_rows_reference + (last_row_opt ? 1 : 0);
    }
};

inline constexpr std::array<StackConfig, 5> builtin_configs = {{
    {"config1", 128, 96},
    {"config2", 160, 76},
    {"config3", 192, 64},
    {"config4", 256, 48},
    {"config5", 512, 24},
}};

inline const StackConfig* find_config(std::string_view name) {
    for (const auto& cfg : builtin_configs)
        if (cfg.name == name) return &cfg;
    return nullptr;
}

inline int required_depth(int n, int placed_rows, bool last_row) {
    return n - placed_rows - (last_row ? 1 : 0);
}

// Smallest stack (deepest block) among the built-ins that still fits, or
// nullptr if even config1 is too shallow.
inline const StackConfig* smallest_sufficient_config(int n, int placed_rows, bool last_row) {
    const StackConfig* best = nullptr;
    for (const auto& cfg : builtin_configs) {
        if (cfg.max_depth() >= required_depth(n, placed_rows, last_row) &&
            (!best || cfg.max_depth() < best->max_depth()))
            best = &cfg;
    }
    return best;
}

inline void require_feasible(const StackConfig& cfg, int n, int placed_rows, bool last_row) {
    const int need = required_depth(n, placed_rows, last_row);
    if (need <= cfg.max_depth()) return;
    std::string msg = "stack config '" + std::string(cfg.name) + "' supports depth " +
                      std::to_string(cfg.max_depth()) + " but n=" + std::to_string(n) +
                      ", pre_rows=" + std::to_string(placed_rows) + " needs " +
                      std::to_string(need);
    if (const StackConfig* fit = smallest_sufficient_config(n, placed_rows, last_row))
        msg += "; smallest sufficient config is '" + std::string(fit->name) + "'";
    else
        msg += "; no built-in config is deep enough";
    throw config_error(msg);
}

}  // namespace nqueens
