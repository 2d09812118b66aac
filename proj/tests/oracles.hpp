#pragma once

// Independent reference computations for the unit tests. Nothing here calls
// into the library's linear algebra.

#include "flatk/intlin.hpp"

#include <numeric>
#include <random>
#include <vector>

namespace oracle {

using flatk::Integer;
using Dense = std::vector<std::vector<Integer>>;

inline Dense zeros(std::size_t r, std::size_t c) { return Dense(r, std::vector<Integer>(c, 0)); }

inline Dense identity(std::size_t n)
{
    Dense I = zeros(n, n);
    for (std::size_t i = 0; i < n; ++i)
        I[i][i] = 1;
    return I;
}

inline Dense multiply(const Dense& a, const Dense& b, std::size_t inner)
{
    std::size_t r = a.size(), c = b.empty() ? 0 : b[0].size();
    Dense out = zeros(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t k = 0; k < inner; ++k)
            if (a[i][k] != 0)
                for (std::size_t j = 0; j < c; ++j)
                    out[i][j] += a[i][k] * b[k][j];
    return out;
}

/// Laplace expansion; fine for n <= 6.
inline Integer determinant(const Dense& m)
{
    std::size_t n = m.size();
    if (n == 0)
        return 1;
    if (n == 1)
        return m[0][0];
    Integer s = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (m[0][j] == 0)
            continue;
        Dense minor;
        for (std::size_t i = 1; i < n; ++i) {
            std::vector<Integer> row;
            for (std::size_t k = 0; k < n; ++k)
                if (k != j)
                    row.push_back(m[i][k]);
            minor.push_back(row);
        }
        Integer t = m[0][j] * determinant(minor);
        s += (j % 2 ? -t : t);
    }
    return s;
}

inline void subsets(std::size_t n, std::size_t k, std::size_t start, std::vector<std::size_t>& cur,
                    std::vector<std::vector<std::size_t>>& out)
{
    if (cur.size() == k) {
        out.push_back(cur);
        return;
    }
    for (std::size_t i = start; i < n; ++i) {
        cur.push_back(i);
        subsets(n, k, i + 1, cur, out);
        cur.pop_back();
    }
}

/// D_k = gcd of all k x k minors, k = 1..min(r, c).
inline std::vector<Integer> determinantal_divisors(const Dense& m, std::size_t rows, std::size_t cols)
{
    std::vector<Integer> out;
    for (std::size_t k = 1; k <= std::min(rows, cols); ++k) {
        std::vector<std::vector<std::size_t>> rs, cs;
        std::vector<std::size_t> cur;
        subsets(rows, k, 0, cur, rs);
        subsets(cols, k, 0, cur, cs);
        Integer g = 0;
        for (const auto& R : rs)
            for (const auto& C : cs) {
                Dense sub;
                for (auto i : R) {
                    std::vector<Integer> row;
                    for (auto j : C)
                        row.push_back(m[i][j]);
                    sub.push_back(row);
                }
                Integer d = determinant(sub);
                mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), d.get_mpz_t());
            }
        out.push_back(g);
    }
    return out;
}

/// Invariant factors d_k = D_k / D_{k-1}, nonzero ones only.
inline std::vector<Integer> invariant_factors(const Dense& m, std::size_t rows, std::size_t cols)
{
    std::vector<Integer> out;
    Integer prev = 1;
    for (const auto& D : determinantal_divisors(m, rows, cols)) {
        if (D == 0)
            break;
        out.push_back(D / prev);
        prev = D;
    }
    return out;
}

/// Random unimodular matrix and its inverse from elementary operations.
inline std::pair<Dense, Dense> random_unimodular(std::size_t n, std::mt19937& rng, int steps = 12)
{
    Dense U = identity(n), Ui = identity(n);
    if (n < 2)
        return {U, Ui};
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::uniform_int_distribution<int> coef(-2, 2);
    for (int s = 0; s < steps; ++s) {
        std::size_t i = pick(rng), j = pick(rng);
        if (i == j)
            continue;
        int c = coef(rng);
        // U <- E U with E = 1 + c e_ij; Ui <- Ui E^-1
        for (std::size_t k = 0; k < n; ++k)
            U[i][k] += c * U[j][k];
        for (std::size_t k = 0; k < n; ++k)
            Ui[k][j] -= c * Ui[k][i];
    }
    return {U, Ui};
}

// ---------------------------------------------------------------- finite groups

/// Finite abelian group Z/o_1 x ... x Z/o_k with small integer coordinates.
struct SmallGroup {
    std::vector<long> orders;

    long size() const
    {
        return std::accumulate(orders.begin(), orders.end(), 1L, std::multiplies<>());
    }
    std::vector<long> add(const std::vector<long>& a, const std::vector<long>& b) const
    {
        std::vector<long> c(a.size());
        for (std::size_t i = 0; i < a.size(); ++i)
            c[i] = ((a[i] + b[i]) % orders[i] + orders[i]) % orders[i];
        return c;
    }
    std::vector<long> scale(long k, const std::vector<long>& a) const
    {
        std::vector<long> c(a.size());
        for (std::size_t i = 0; i < a.size(); ++i)
            c[i] = ((k * a[i]) % orders[i] + orders[i]) % orders[i];
        return c;
    }
    long index(const std::vector<long>& a) const
    {
        long idx = 0;
        for (std::size_t i = 0; i < a.size(); ++i)
            idx = idx * orders[i] + a[i];
        return idx;
    }
    std::vector<long> element(long idx) const
    {
        std::vector<long> a(orders.size());
        for (std::size_t i = orders.size(); i-- > 0;) {
            a[i] = idx % orders[i];
            idx /= orders[i];
        }
        return a;
    }
};

/// Exhaustive search: is there phi : H2 -> H4 with
/// phi(c + c') - phi(c) - phi(c') = b(c, c')? phi is fixed by its values on
/// the generators; each candidate is propagated over the Cayley graph of H2
/// with phi(x + g_i) = phi(x) + phi(g_i) + b(x, g_i) and rejected on the
/// first inconsistency.
inline bool refinement_exists_brute_force(const SmallGroup& H2, const SmallGroup& H4,
                                          const std::vector<std::vector<std::vector<long>>>& b,
                                          std::vector<std::vector<long>>* found = nullptr)
{
    const std::size_t k = H2.orders.size();
    const long n2 = H2.size(), n4 = H4.size();
    // b(x, g_i) = sum_j x_j b(g_j, g_i)
    auto b_with_gen = [&](const std::vector<long>& x, std::size_t i) {
        std::vector<long> acc(H4.orders.size(), 0);
        for (std::size_t j = 0; j < k; ++j)
            acc = H4.add(acc, H4.scale(x[j], b[j][i]));
        return acc;
    };
    // precompute b(x, g_i) for all x
    std::vector<std::vector<std::vector<long>>> bx(static_cast<std::size_t>(n2));
    for (long x = 0; x < n2; ++x)
        for (std::size_t i = 0; i < k; ++i)
            bx[static_cast<std::size_t>(x)].push_back(b_with_gen(H2.element(x), i));

    long total = 1;
    for (std::size_t i = 0; i < k; ++i)
        total *= n4;
    std::vector<std::vector<long>> phi_gen(k);
    std::vector<long> phi(static_cast<std::size_t>(n2));
    std::vector<char> seen(static_cast<std::size_t>(n2));
    for (long code = 0; code < total; ++code) {
        long c = code;
        for (std::size_t i = 0; i < k; ++i) {
            phi_gen[i] = H4.element(c % n4);
            c /= n4;
        }
        std::fill(seen.begin(), seen.end(), 0);
        std::vector<long> queue{0};
        seen[0] = 1;
        phi[0] = 0;
        bool ok = true;
        for (std::size_t head = 0; head < queue.size() && ok; ++head) {
            long x = queue[head];
            auto xe = H2.element(x);
            auto px = H4.element(phi[static_cast<std::size_t>(x)]);
            for (std::size_t i = 0; i < k && ok; ++i) {
                std::vector<long> gi(k, 0);
                gi[i] = 1;
                long y = H2.index(H2.add(xe, gi));
                long py = H4.index(H4.add(H4.add(px, phi_gen[i]), bx[static_cast<std::size_t>(x)][i]));
                if (seen[static_cast<std::size_t>(y)]) {
                    ok = phi[static_cast<std::size_t>(y)] == py;
                } else {
                    seen[static_cast<std::size_t>(y)] = 1;
                    phi[static_cast<std::size_t>(y)] = py;
                    queue.push_back(y);
                }
            }
        }
        if (ok) {
            if (found)
                *found = phi_gen;
            return true;
        }
    }
    return false;
}

/// A random symmetric bilinear form b : H2 x H2 -> H4 on finite groups of
/// order at most 16, given in divisor-chain form.
struct RefinementInstance {
    SmallGroup H2, H4;
    std::vector<std::vector<std::vector<long>>> b;
};

inline RefinementInstance random_refinement_instance(std::mt19937& rng)
{
    static const std::vector<std::vector<long>> chains = {
        {2}, {3}, {4}, {8}, {16}, {6}, {12}, {2, 2}, {2, 4}, {2, 8}, {4, 4}, {2, 6}, {2, 2, 2}, {2, 2, 4}, {2, 2, 2, 2}};
    std::uniform_int_distribution<std::size_t> pick(0, chains.size() - 1);
    RefinementInstance out{{chains[pick(rng)]}, {chains[pick(rng)]}, {}};
    const std::size_t k = out.H2.orders.size();
    // b(g_i, g_j) is killed by gcd(d_i, d_j), so b is well defined
    out.b.assign(k, std::vector<std::vector<long>>(k));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i; j < k; ++j) {
            long g = std::gcd(out.H2.orders[i], out.H2.orders[j]);
            std::vector<long> v;
            for (long e : out.H4.orders) {
                long step = e / std::gcd(e, g);
                v.push_back(step * std::uniform_int_distribution<long>(0, e / step - 1)(rng) % e);
            }
            out.b[i][j] = out.b[j][i] = v;
        }
    return out;
}

}  // namespace oracle
