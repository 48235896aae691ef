#pragma once

#include <algorithm>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "smf2/index.hpp"
#include "smf2/rational.hpp"

namespace smf2 {

// Formal Fourier expansion of a scalar form of degree 2.  Coefficients are
// stored on full orbits (every semi-positive index with doubled trace
// <= tmax, both signs of rho), which keeps convolutions lookup-free and
// sidesteps character bookkeeping for the odd-coset form.
struct ScalarExpansion {
    int k = 0;
    Coset coset = Coset::even;
    int tmax = 0;
    int min_doubled_trace = 0;
    std::unordered_map<Index, Rat, IndexHash> a;

    Rat coeff(const Index& n) const {
        auto it = a.find(n);
        return it == a.end() ? Rat(0) : it->second;
    }
    void set(const Index& n, const Rat& v) {
        if (!n.semi_positive()) throw std::invalid_argument("ScalarExpansion: index not PSD");
        if (n.doubled_trace() > tmax) return;
        if (v == 0)
            a.erase(n);
        else
            a[n] = v;
    }
    bool zero() const {
        for (auto& [n, v] : a)
            if (v != 0) return false;
        return true;
    }
    int support_floor() const {
        int f = tmax + 1;
        for (auto& [n, v] : a)
            if (v != 0) f = std::min(f, n.doubled_trace());
        return f > tmax ? 0 : f;
    }
    SupportConstraint constraint() const { return {coset, min_doubled_trace, false}; }

    static ScalarExpansion unit(int tmax) {
        ScalarExpansion e;
        e.k = 0;
        e.tmax = tmax;
        e.set(Index{0, 0, 0}, 1);
        return e;
    }
};

inline ScalarExpansion operator*(const ScalarExpansion& f, const Rat& s) {
    ScalarExpansion r = f;
    if (s == 0) {
        r.a.clear();
        return r;
    }
    for (auto& [n, v] : r.a) v *= s;
    return r;
}

inline ScalarExpansion add(const ScalarExpansion& f, const ScalarExpansion& g) {
    if (f.k != g.k || f.coset != g.coset)
        throw std::invalid_argument("add: weight or coset mismatch");
    ScalarExpansion r;
    r.k = f.k;
    r.coset = f.coset;
    r.tmax = std::min(f.tmax, g.tmax);
    r.min_doubled_trace = std::min(f.min_doubled_trace, g.min_doubled_trace);
    for (auto& [n, v] : f.a)
        if (n.doubled_trace() <= r.tmax) r.a[n] = v;
    for (auto& [n, v] : g.a)
        if (n.doubled_trace() <= r.tmax) {
            auto& slot = r.a[n];
            slot += v;
            if (slot == 0) r.a.erase(n);
        }
    return r;
}

inline ScalarExpansion mul(const ScalarExpansion& f, const ScalarExpansion& g) {
    ScalarExpansion r;
    r.k = f.k + g.k;
    r.coset = f.coset + g.coset;
    r.tmax = std::min(f.tmax + g.min_doubled_trace, g.tmax + f.min_doubled_trace);
    r.min_doubled_trace = f.min_doubled_trace + g.min_doubled_trace;
    const auto& outer = (f.a.size() <= g.a.size()) ? f.a : g.a;
    const auto& inner = (f.a.size() <= g.a.size()) ? g.a : f.a;
    for (auto& [n1, v1] : outer) {
        if (v1 == 0) continue;
        for (auto& [n2, v2] : inner) {
            Index n = n1 + n2;
            if (n.doubled_trace() > r.tmax) continue;
            auto& slot = r.a[n];
            slot += v1 * v2;
            if (slot == 0) r.a.erase(n);
        }
    }
    return r;
}

// f / g for g with unit constant term, by trace-graded recursion.
inline ScalarExpansion divide(const ScalarExpansion& f, const ScalarExpansion& g) {
    if (f.coset != Coset::even || g.coset != Coset::even)
        throw std::invalid_argument("divide: even coset required");
    if (g.coeff(Index{0, 0, 0}) != 1) throw std::invalid_argument("divide: divisor not a unit");
    ScalarExpansion h;
    h.k = f.k - g.k;
    h.coset = Coset::even;
    h.tmax = std::min(f.tmax, g.tmax);
    h.min_doubled_trace = 0;
    std::vector<std::pair<Index, Rat>> gpos;
    for (auto& [m, v] : g.a)
        if (m.doubled_trace() > 0 && v != 0) gpos.emplace_back(m, v);
    for (const Index& n : enumerate(Coset::even, h.tmax)) {
        Rat v = f.coeff(n);
        for (auto& [m, gv] : gpos) {
            Index d = n - m;
            if (!d.semi_positive()) continue;
            auto it = h.a.find(d);
            if (it != h.a.end()) v -= gv * it->second;
        }
        if (v != 0) h.a[n] = v;
    }
    return h;
}

// Square root of a chi10-like expansion: even coset, leading orbit at
// doubled (2,2,+-2) with coefficient 1 there.  The result lives in the odd
// coset with leading coefficient +1.
inline ScalarExpansion sqrt_unit_leading(const ScalarExpansion& f) {
    if (f.coset != Coset::even) throw std::invalid_argument("sqrt: even coset required");
    if (f.coeff(Index{2, 2, 2}) != 1 || f.coeff(Index{2, 2, -2}) != 1)
        throw std::invalid_argument("sqrt: leading orbit must carry coefficient 1");
    // g(1,1,1) = 1 by convention; g(1,1,-1) then follows from the cross
    // term f(2,2,0) = 2 g(1,1,1) g(1,1,-1) and must be invertible
    Rat gneg = f.coeff(Index{2, 2, 0}) / 2;
    if (gneg * gneg != 1)
        throw std::invalid_argument("sqrt: leading orbit is not a unit");
    ScalarExpansion g;
    g.k = f.k / 2;
    g.coset = Coset::odd;
    g.tmax = f.tmax - 2;
    g.min_doubled_trace = 2;
    if (g.tmax < 2) return g;

    // odd-coset targets ordered by trace ascending, |rho| descending, so
    // that the same-trace interference term n + (0,0,+-2) is already known
    std::vector<Index> targets = enumerate(Coset::odd, g.tmax);
    std::stable_sort(targets.begin(), targets.end(), [](const Index& a, const Index& b) {
        if (a.doubled_trace() != b.doubled_trace()) return a.doubled_trace() < b.doubled_trace();
        return std::abs(a.rho) > std::abs(b.rho);
    });
    for (const Index& n : targets) {
        int sigma = n.rho >= 0 ? 1 : -1;
        Index e{1, 1, sigma};
        Rat ge = sigma > 0 ? Rat(1) : gneg;
        if (n == e) {
            g.a[n] = ge;  // base cases fixed above
            continue;
        }
        Index target = n + e;
        Rat v = f.coeff(target);
        for (auto& [n1, g1] : g.a) {
            Index n2 = target - n1;
            if (!n2.semi_positive()) continue;
            if (n1 == e && n2 == n) continue;  // the unknown itself
            auto it = g.a.find(n2);
            if (it == g.a.end()) {
                if (!(n2 == n)) throw std::domain_error("sqrt: recursion hit an unknown index");
                continue;  // (n, e) pairing handled via symmetry below
            }
            v -= g1 * it->second;
        }
        // remaining: 2 g(e) g(n)
        v /= 2 * ge;
        g.a[n] = v;  // keep zeros during the recursion so lookups stay total
    }
    for (auto it = g.a.begin(); it != g.a.end();)
        it = (it->second == 0) ? g.a.erase(it) : std::next(it);
    return g;
}

inline bool equal_to_bound(const ScalarExpansion& f, const ScalarExpansion& g, int bound) {
    for (const Index& n : enumerate(f.coset, bound))
        if (f.coeff(n) != g.coeff(n)) return false;
    if (f.coset != g.coset)
        for (const Index& n : enumerate(g.coset, bound))
            if (g.coeff(n) != 0) return false;
    return true;
}

// Sign of the permutation u induces on the three nonzero vectors of F_2^2.
// The odd-coset form transforms with this character on top of det(u)^k.
inline int coset_character(const Unimodular& u) {
    int perm[3];
    auto code = [](int x, int y) { return (x & 1) * 2 + (y & 1) - 1; };  // (0,1),(1,0),(1,1) -> 0,1,2
    for (int i = 0; i < 3; ++i) {
        // vectors: i=0 -> (0,1), i=1 -> (1,0), i=2 -> (1,1)
        int x = (i == 0) ? 0 : 1;
        int y = (i == 1) ? 0 : 1;
        perm[i] = code(x * u.a + y * u.c, x * u.b + y * u.d);
    }
    int inversions = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (perm[i] > perm[j]) ++inversions;
    return inversions % 2 ? -1 : 1;
}

// Equivariance Eq. (1) for scalar weight: a(u n u') = det(u)^k a(n), with
// the extra character on the odd coset.
inline bool check_equivariance_scalar(const ScalarExpansion& f) {
    const Unimodular gens[] = {{0, 1, -1, 0}, {1, 1, 0, 1}, {1, 0, 0, -1}};
    for (auto& [n, v] : f.a)
        for (const Unimodular& u : gens) {
            Index m = act(u, n);
            if (m.doubled_trace() > f.tmax) continue;
            int sgn = (u.det() == -1 && f.k % 2 != 0) ? -1 : 1;
            if (f.coset == Coset::odd) sgn *= coset_character(u);
            if (f.coeff(m) != (sgn < 0 ? -v : v)) return false;
        }
    return true;
}

}  // namespace smf2
