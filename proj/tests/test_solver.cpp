#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "nqueens/solver.hpp"
#include "nqueens/subproblems.hpp"
#include "oracles.hpp"

using namespace nqueens;

namespace {
const StackConfig& cfg1 = builtin_configs[0];
}

TEST_CASE("built-in stack configs reproduce the reference table") {
    struct Row {
        const char* name;
        int block, stack, depth, max_n;
    };
    const Row rows[] = {
        {"config1", 128, 96, 24, 30}, {"config2", 160, 76, 19, 25},
        {"config3", 192, 64, 16, 22}, {"config4", 256, 48, 12, 18},
        {"config5", 512, 24, 6, 12},
    };
    REQUIRE(builtin_configs.size() == 5);
    for (const Row& row : rows) {
        const StackConfig* cfg = find_config(row.name);
        REQUIRE(cfg != nullptr);
        CHECK(cfg->block_size == row.block);
        CHECK(cfg->stack_words == row.stack);
        CHECK(cfg->max_depth() == row.depth);
        CHECK(cfg->max_depth() == cfg->stack_words / 4);
        CHECK(cfg->pre_rows_reference == 6);
        CHECK(cfg->max_n() == row.max_n);
        StackConfig with_opt = *cfg;
        with_opt.last_row_opt = true;
        CHECK(with_opt.max_n() == row.max_n + 1);
    }
}

TEST_CASE("infeasible depth is rejected before any search, naming a sufficient config") {
    const StackConfig* cfg5 = find_config("config5");  // depth 6
    REQUIRE(cfg5 != nullptr);
    try {
        count_iterative(14, {}, *cfg5);
        FAIL("expected config_error");
    } catch (const config_error& e) {
        // need depth 14; config3 (depth 16) is the shallowest built-in that fits
        CHECK(std::string(e.what()).find("smallest sufficient config is 'config3'") !=
              std::string::npos);
    }
    // the same n fits once enough rows are pre-placed
    const std::vector<int> prefix = {0, 2, 4, 6, 8, 10, 12, 1};
    REQUIRE(oracle::placement_safe(prefix));
    CHECK_NOTHROW(count_iterative(14, oracle::to_subproblem(prefix), *cfg5));
}

TEST_CASE("count_recursive trivial boards") {
    CHECK(count_recursive(1, {}) == 1);
    CHECK(count_recursive(2, {}) == 0);
    CHECK(count_recursive(3, {}) == 0);
}

TEST_CASE("count_recursive matches the permutation brute force up to n=9") {
    for (int n = 1; n <= 9; ++n)
        CHECK(count_recursive(n, {}) == oracle::count_by_permutations(n));
}

TEST_CASE("count_iterative equals count_recursive over all subproblems, n<=12, R in {1,2,3}") {
    for (int n = 4; n <= 12; ++n) {
        for (int r = 1; r <= 3 && r < n; ++r) {
            oracle::for_each_partial(n, r, [&](const std::vector<int>& cols) {
                if (static_cast<int>(cols.size()) != r) return;
                const Subproblem sub = oracle::to_subproblem(cols);
                CHECK(count_iterative(n, sub, cfg1).count == count_recursive(n, sub));
            });
        }
    }
}

TEST_CASE("count_iterative handles a fully placed subproblem") {
    // place a full 5-queens solution; the kernel must report exactly 1
    const std::vector<int> solution = {0, 2, 4, 1, 3};
    REQUIRE(oracle::placement_safe(solution));
    const Subproblem sub = oracle::to_subproblem(solution);
    REQUIRE(sub.cur == board_mask(5));
    CHECK(count_iterative(5, sub, cfg1).count == 1);
    CHECK(count_iterative_lastrow(5, sub, cfg1).count == 1);
}

TEST_CASE("lastrow kernel equals the others, n<=13 at R=2 and small empty boards") {
    CHECK(count_iterative_lastrow(4, {}, cfg1).count == 2);
    CHECK(count_iterative_lastrow(4, {}, cfg1).count == oracle::count_by_permutations(4));
    for (int n = 4; n <= 13; ++n) {
        oracle::for_each_partial(n, 2, [&](const std::vector<int>& cols) {
            if (cols.size() != 2) return;
            const Subproblem sub = oracle::to_subproblem(cols);
            CHECK(count_iterative_lastrow(n, sub, cfg1).count ==
                  count_iterative(n, sub, cfg1).count);
        });
    }
}

TEST_CASE("lastrow shallow roots: one row and zero rows remaining") {
    // n=1: the root row is also the last row
    CHECK(count_iterative_lastrow(1, {}, cfg1).count == 1);
    // n-1 rows pre-placed: answer is popcount of the final row's options
    oracle::for_each_partial(6, 5, [&](const std::vector<int>& cols) {
        if (cols.size() != 5) return;
        const Subproblem sub = oracle::to_subproblem(cols);
        CHECK(count_iterative_lastrow(6, sub, cfg1).count == count_recursive(6, sub));
    });
}

TEST_CASE("stack high-water marks respect and reach the depth bounds") {
    for (int n : {8, 10}) {
        for (int r : {1, 2, 3}) {
            int best_iter = 0, best_last = 0;
            oracle::for_each_partial(n, r, [&](const std::vector<int>& cols) {
                if (static_cast<int>(cols.size()) != r) return;
                const Subproblem sub = oracle::to_subproblem(cols);
                const auto it = count_iterative(n, sub, cfg1);
                const auto lr = count_iterative_lastrow(n, sub, cfg1);
                CHECK(it.high_water <= n - r);
                CHECK(lr.high_water <= n - r - 1);
                best_iter = std::max(best_iter, it.high_water);
                best_last = std::max(best_last, lr.high_water);
            });
            CHECK(best_iter == n - r);
            CHECK(best_last == n - r - 1);
        }
    }
}

TEST_CASE("determinism: identical inputs give identical counts and high-water marks") {
    const Subproblem sub = oracle::to_subproblem({1, 3});
    const auto a = count_iterative(11, sub, cfg1);
    const auto b = count_iterative(11, sub, cfg1);
    CHECK(a.count == b.count);
    CHECK(a.high_water == b.high_water);
}

TEST_CASE("checked arithmetic traps overflow") {
    CHECK_THROWS_AS(checked_add(~0ull, 1), std::overflow_error);
    CHECK_THROWS_AS(checked_mul(~0ull, 2), std::overflow_error);
    CHECK(checked_add(2, 3) == 5);
    CHECK(checked_mul(2, 3) == 6);
}

TEST_CASE("board size outside [1,32] is a config error") {
    CHECK_THROWS_AS(count_recursive(0, {}), config_error);
    CHECK_THROWS_AS(count_recursive(33, {}), config_error);
}
