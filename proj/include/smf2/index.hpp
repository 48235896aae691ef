#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <compare>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "smf2/rational.hpp"

namespace smf2 {

enum class Coset { even, odd };

inline Coset operator+(Coset a, Coset b) {
    return (a == b) ? Coset::even : Coset::odd;
}

// Exponent matrix of a Fourier term, stored in doubled coordinates:
// the symmetric matrix is ((nu1/2, rho/4), (rho/4, nu2/2)).  The conventional
// (n, m, r) shorthand corresponds to (nu1/2, nu2/2, rho/2); both the
// integral lattice (all even) and the half-shifted coset (all odd) are
// integer triples here.
struct Index {
    int nu1 = 0;
    int nu2 = 0;
    int rho = 0;

    bool operator==(const Index&) const = default;

    int doubled_trace() const { return nu1 + nu2; }
    // 16 * det of the underlying half-integral matrix.
    std::int64_t det16() const {
        return 4ll * nu1 * nu2 - (std::int64_t)rho * rho;
    }
    bool semi_positive() const { return nu1 >= 0 && nu2 >= 0 && det16() >= 0; }
    bool singular() const { return det16() == 0; }

    bool in_coset(Coset c) const {
        int want = (c == Coset::odd) ? 1 : 0;
        return (nu1 & 1) == want && (nu2 & 1) == want && (rho & 1) == want;
    }
    Coset coset() const {
        if (in_coset(Coset::even)) return Coset::even;
        if (in_coset(Coset::odd)) return Coset::odd;
        throw std::domain_error("Index: mixed parity, not in either coset");
    }

    Index operator+(const Index& o) const { return {nu1 + o.nu1, nu2 + o.nu2, rho + o.rho}; }
    Index operator-(const Index& o) const { return {nu1 - o.nu1, nu2 - o.nu2, rho - o.rho}; }

    // Conventional coordinates (n, m, r); integral only on the even coset.
    static Index from_conventional(int n, int m, int r) { return {2 * n, 2 * m, 2 * r}; }

    // Canonical order: (doubled trace, nu1 descending, rho ascending).
    std::array<int, 3> key() const { return {nu1 + nu2, -nu1, rho}; }
    bool operator<(const Index& o) const { return key() < o.key(); }
};

struct IndexHash {
    std::size_t operator()(const Index& n) const {
        std::uint64_t h = 1469598103934665603ull;
        for (int v : {n.nu1, n.nu2, n.rho}) {
            h ^= (std::uint64_t)(std::uint32_t)v;
            h *= 1099511628211ull;
        }
        return (std::size_t)h;
    }
};

// 2x2 integer matrix with det = +-1, acting on indices by n -> u n u'.
struct Unimodular {
    int a = 1, b = 0, c = 0, d = 1;

    int det() const { return a * d - b * c; }
    bool valid() const { return det() == 1 || det() == -1; }

    Unimodular operator*(const Unimodular& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    }
    static Unimodular identity() { return {}; }
};

inline Index act(const Unimodular& u, const Index& n) {
    // u N u' in doubled coordinates; integral and coset-preserving.
    Index m;
    m.nu1 = u.a * u.a * n.nu1 + u.a * u.b * n.rho + u.b * u.b * n.nu2;
    m.nu2 = u.c * u.c * n.nu1 + u.c * u.d * n.rho + u.d * u.d * n.nu2;
    m.rho = 2 * u.a * u.c * n.nu1 + (u.a * u.d + u.b * u.c) * n.rho + 2 * u.b * u.d * n.nu2;
    return m;
}

inline bool is_reduced(const Index& n) {
    return 0 <= n.rho && n.rho <= n.nu1 && n.nu1 <= n.nu2;
}

// Gauss reduction to the convention 0 <= rho <= nu1 <= nu2.
// Returns (u, n_red) with act(u, n) = n_red.
inline std::pair<Unimodular, Index> reduce(Index n) {
    if (!n.semi_positive()) throw std::domain_error("reduce: index not semi-positive");
    Unimodular u = Unimodular::identity();
    auto apply = [&](const Unimodular& g) {
        n = act(g, n);
        u = g * u;
    };
    auto floor_div = [](long a, long b) {  // b > 0
        long q = a / b;
        if (a % b != 0 && (a < 0)) --q;
        return q;
    };
    for (int guard = 0; guard < 256; ++guard) {
        if (n.nu1 > n.nu2) {
            apply({0, 1, 1, 0});
            continue;
        }
        if (n.nu1 > 0 && (n.rho > n.nu1 || n.rho <= -n.nu1)) {
            // shear (1,0;r,1) shifts rho by 2*r*nu1; bring rho into (-nu1, nu1]
            long r = floor_div((long)n.nu1 - n.rho, 2l * n.nu1);
            apply({1, 0, (int)r, 1});
            continue;
        }
        if (n.nu1 == 0 && n.rho != 0)
            throw std::logic_error("reduce: semi-positive index with nu1 = 0, rho != 0");
        if (n.rho < 0) {
            apply({1, 0, 0, -1});
            continue;
        }
        if (is_reduced(n)) return {u, n};
    }
    throw std::logic_error("reduce: did not terminate");
}

// All semi-positive indices in the coset with doubled trace <= tmax,
// in canonical order.
inline std::vector<Index> enumerate(Coset c, int tmax) {
    if (tmax < 0) throw std::domain_error("enumerate: tmax < 0");
    std::vector<Index> out;
    for (int t = 0; t <= tmax; ++t) {
        for (int nu1 = t; nu1 >= 0; --nu1) {
            int nu2 = t - nu1;
            std::int64_t d4 = 4ll * nu1 * nu2;
            int rmax = (int)std::sqrt((double)d4) + 1;
            while ((std::int64_t)rmax * rmax > d4) --rmax;
            for (int rho = -rmax; rho <= rmax; ++rho) {
                Index n{nu1, nu2, rho};
                if (n.in_coset(c)) out.push_back(n);
            }
        }
    }
    return out;
}

// Per-slot support description for partition enumeration.
struct SupportConstraint {
    Coset coset = Coset::even;
    int min_doubled_trace = 0;
    bool require_positive_det = false;

    bool admits(const Index& n) const {
        return n.semi_positive() && n.in_coset(coset) && n.doubled_trace() >= min_doubled_trace &&
               (!require_positive_det || n.det16() > 0);
    }
};

namespace detail {

// Candidates for one slot: indices m admitted by the constraint with
// m and rest - m both semi-positive, in canonical order.
inline void slot_candidates(const Index& rest, const SupportConstraint& cs, int max_trace,
                            std::vector<Index>& out) {
    out.clear();
    int tlo = cs.min_doubled_trace;
    int thi = std::min(rest.doubled_trace(), max_trace);
    for (int t = tlo; t <= thi; ++t) {
        for (int nu1 = std::min(t, rest.nu1); nu1 >= 0; --nu1) {
            int nu2 = t - nu1;
            if (nu2 > rest.nu2) continue;
            std::int64_t d4 = 4ll * nu1 * nu2;
            int rmax = (int)std::sqrt((double)d4) + 1;
            while ((std::int64_t)rmax * rmax > d4) --rmax;
            for (int rho = -rmax; rho <= rmax; ++rho) {
                Index m{nu1, nu2, rho};
                if (!cs.admits(m)) continue;
                if (!(rest - m).semi_positive()) continue;
                out.push_back(m);
            }
        }
    }
}

inline void partitions_rec(const Index& rest, const std::vector<SupportConstraint>& cs, std::size_t s,
                           std::vector<Index>& tuple,
                           const std::function<void(const std::vector<Index>&)>& visit) {
    std::size_t t = cs.size();
    if (s + 1 == t) {
        if (cs[s].admits(rest)) {
            tuple[s] = rest;
            visit(tuple);
        }
        return;
    }
    int floor_rest = 0;
    for (std::size_t i = s + 1; i < t; ++i) floor_rest += cs[i].min_doubled_trace;
    int budget = rest.doubled_trace() - floor_rest;
    if (budget < cs[s].min_doubled_trace) return;
    std::vector<Index> cands;
    slot_candidates(rest, cs[s], budget, cands);
    for (const Index& m : cands) {
        tuple[s] = m;
        partitions_rec(rest - m, cs, s + 1, tuple, visit);
    }
}

}  // namespace detail

// Streams every t-tuple (n_1,...,n_t) of semi-positive indices with
// sum n and slot i admitted by cs[i], in deterministic order.
inline void partitions(const Index& n, const std::vector<SupportConstraint>& cs,
                       const std::function<void(const std::vector<Index>&)>& visit) {
    if (!n.semi_positive()) throw std::domain_error("partitions: target not semi-positive");
    if (cs.empty()) throw std::domain_error("partitions: no slots");
    std::vector<Index> tuple(cs.size());
    detail::partitions_rec(n, cs, 0, tuple, visit);
}

// First-slot split for parallel or checkpointed consumption: returns the
// candidate list for slot 0; each choice yields an independent sub-stream.
inline std::vector<Index> partitions_first_slot(const Index& n, const std::vector<SupportConstraint>& cs) {
    int floor_rest = 0;
    for (std::size_t i = 1; i < cs.size(); ++i) floor_rest += cs[i].min_doubled_trace;
    std::vector<Index> cands;
    if (cs.size() == 1) {
        if (cs[0].admits(n)) cands.push_back(n);
        return cands;
    }
    detail::slot_candidates(n, cs[0], n.doubled_trace() - floor_rest, cands);
    return cands;
}

inline void partitions_with_first(const Index& n, const std::vector<SupportConstraint>& cs,
                                  const Index& first,
                                  const std::function<void(const std::vector<Index>&)>& visit) {
    std::vector<Index> tuple(cs.size());
    tuple[0] = first;
    if (cs.size() == 1) {
        if (first == n) visit(tuple);
        return;
    }
    detail::partitions_rec(n - first, cs, 1, tuple, visit);
}

}  // namespace smf2
