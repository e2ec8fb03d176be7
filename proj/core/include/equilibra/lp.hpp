#pragma once

#include "equilibra/rational.hpp"

#include <vector>

namespace eq {

// minimize objective . x subject to rows, x >= 0 unless marked free
struct LinearProgram {
    enum Rel : char { LE, EQ, GE };
    struct Row {
        std::vector<std::pair<int, Q>> coef;
        Rel rel;
        Q rhs;
    };

    int vars = 0;
    std::vector<char> free;
    std::vector<Q> objective;
    std::vector<Row> rows;

    int add_var(bool unrestricted = false);
    void add_row(std::vector<std::pair<int, Q>> coef, Rel rel, const Q& rhs);
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
    LpStatus status = LpStatus::infeasible;
    Q value;
    std::vector<Q> x;
};

// dense two-phase simplex over the rationals with Bland's rule
LpResult solve_lp(const LinearProgram& lp);

}
