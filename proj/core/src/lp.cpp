#include "equilibra/lp.hpp"

namespace eq {

int LinearProgram::add_var(bool unrestricted)
{
    free.push_back(unrestricted);
    objective.push_back(Q(0));
    return vars++;
}

void LinearProgram::add_row(std::vector<std::pair<int, Q>> coef, Rel rel, const Q& rhs)
{
    rows.push_back(Row{std::move(coef), rel, rhs});
}

namespace {

struct Tableau {
    std::vector<std::vector<Q>> t;  // rows, last column is the right-hand side
    std::vector<Q> obj;             // reduced costs, last entry is minus the objective value
    std::vector<int> basis;
    int cols = 0;

    void pivot(int r, int c)
    {
        Q p = t[r][c];
        for (auto& a : t[r])
            a /= p;
        for (std::size_t k = 0; k < t.size(); ++k) {
            if ((int)k == r || t[k][c] == 0)
                continue;
            Q f = t[k][c];
            for (int j = 0; j <= cols; ++j)
                if (t[r][j] != 0)
                    t[k][j] -= f * t[r][j];
        }
        if (obj[c] != 0) {
            Q f = obj[c];
            for (int j = 0; j <= cols; ++j)
                if (t[r][j] != 0)
                    obj[j] -= f * t[r][j];
        }
        basis[r] = c;
    }

    void price(const std::vector<Q>& cost)
    {
        obj.assign(cols + 1, Q(0));
        for (int j = 0; j < cols; ++j)
            obj[j] = cost[j];
        for (std::size_t r = 0; r < t.size(); ++r) {
            const Q& cb = cost[basis[r]];
            if (cb == 0)
                continue;
            for (int j = 0; j <= cols; ++j)
                obj[j] -= cb * t[r][j];
        }
    }

    // false if unbounded
    bool run(const std::vector<char>& allowed)
    {
        for (;;) {
            int enter = -1;
            for (int j = 0; j < cols; ++j)
                if (allowed[j] && obj[j] < 0) {
                    enter = j;
                    break;
                }
            if (enter < 0)
                return true;
            int leave = -1;
            Q best;
            for (std::size_t r = 0; r < t.size(); ++r) {
                if (t[r][enter] <= 0)
                    continue;
                Q ratio = t[r][cols] / t[r][enter];
                if (leave < 0 || ratio < best || (ratio == best && basis[r] < basis[leave])) {
                    leave = (int)r;
                    best = ratio;
                }
            }
            if (leave < 0)
                return false;
            pivot(leave, enter);
        }
    }
};

}

LpResult solve_lp(const LinearProgram& lp)
{
    // columns: variable parts, then one slack per inequality, then artificials
    std::vector<int> pos(lp.vars), neg(lp.vars, -1);
    int cols = 0;
    for (int v = 0; v < lp.vars; ++v) {
        pos[v] = cols++;
        if (lp.free[v])
            neg[v] = cols++;
    }
    int m = (int)lp.rows.size();
    std::vector<int> slack(m, -1), art(m, -1);
    for (int r = 0; r < m; ++r)
        if (lp.rows[r].rel != LinearProgram::EQ)
            slack[r] = cols++;
    int first_art = cols;

    Tableau tb;
    tb.basis.assign(m, -1);
    std::vector<std::vector<Q>> a(m);
    std::vector<Q> rhs(m);
    for (int r = 0; r < m; ++r) {
        const auto& row = lp.rows[r];
        std::vector<Q> line(cols, Q(0));
        for (auto& [v, c] : row.coef) {
            line[pos[v]] += c;
            if (neg[v] >= 0)
                line[neg[v]] -= c;
        }
        if (slack[r] >= 0)
            line[slack[r]] = row.rel == LinearProgram::LE ? 1 : -1;
        Q b = row.rhs;
        if (b < 0) {
            for (auto& x : line)
                x = -x;
            b = -b;
        }
        if (slack[r] >= 0 && line[slack[r]] == 1)
            tb.basis[r] = slack[r];
        else
            art[r] = cols++;
        a[r] = std::move(line);
        rhs[r] = b;
    }
    tb.cols = cols;
    tb.t.assign(m, std::vector<Q>(cols + 1, Q(0)));
    for (int r = 0; r < m; ++r) {
        for (std::size_t j = 0; j < a[r].size(); ++j)
            tb.t[r][j] = a[r][j];
        if (art[r] >= 0) {
            tb.t[r][art[r]] = 1;
            tb.basis[r] = art[r];
        }
        tb.t[r][cols] = rhs[r];
    }

    std::vector<char> allowed(cols, 1);
    if (first_art < cols) {
        std::vector<Q> cost(cols, Q(0));
        for (int j = first_art; j < cols; ++j)
            cost[j] = 1;
        tb.price(cost);
        tb.run(allowed);
        if (tb.obj[cols] != 0)
            return LpResult{LpStatus::infeasible, Q(0), {}};
        // drive remaining artificials out of the basis, dropping redundant rows
        for (int r = 0; r < (int)tb.t.size();) {
            if (tb.basis[r] < first_art) {
                ++r;
                continue;
            }
            int c = -1;
            for (int j = 0; j < first_art; ++j)
                if (tb.t[r][j] != 0) {
                    c = j;
                    break;
                }
            if (c >= 0) {
                tb.pivot(r, c);
                ++r;
            } else {
                tb.t.erase(tb.t.begin() + r);
                tb.basis.erase(tb.basis.begin() + r);
            }
        }
        for (int j = first_art; j < cols; ++j)
            allowed[j] = 0;
    }

    std::vector<Q> cost(cols, Q(0));
    for (int v = 0; v < lp.vars; ++v) {
        cost[pos[v]] = lp.objective[v];
        if (neg[v] >= 0)
            cost[neg[v]] = -lp.objective[v];
    }
    tb.price(cost);
    if (!tb.run(allowed))
        return LpResult{LpStatus::unbounded, Q(0), {}};

    std::vector<Q> col(cols, Q(0));
    for (std::size_t r = 0; r < tb.t.size(); ++r)
        col[tb.basis[r]] = tb.t[r][cols];
    LpResult res{LpStatus::optimal, -tb.obj[cols], std::vector<Q>(lp.vars)};
    for (int v = 0; v < lp.vars; ++v)
        res.x[v] = col[pos[v]] - (neg[v] >= 0 ? col[neg[v]] : Q(0));
    return res;
}

}
