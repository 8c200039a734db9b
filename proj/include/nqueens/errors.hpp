#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace nqueens {

// Infeasible run parameters (bad N/R, depth limit too small, malformed plan).
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// Unreadable, corrupt, or mismatched checkpoint file.
class checkpoint_error : public std::runtime_error {
public:
    explicit checkpoint_error(const std::string& what) : std::runtime_error(what) {}
};

// Solution counts are kept in 64 bits with checked arithmetic; wrapping is a
// hard error, never silent.
inline std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r;
    if (__builtin_add_overflow(a, b, &r))
        throw std::overflow_error("solution count overflows 64 bits");
    return r;
}

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r;
    if (__builtin_mul_overflow(a, b, &r))
        throw std::overflow_error("solution count overflows 64 bits");
    return r;
}

}  // namespace nqueens
