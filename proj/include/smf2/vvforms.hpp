#pragma once

#include <algorithm>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "smf2/expansion.hpp"
#include "smf2/homog.hpp"
#include "smf2/rcpoly.hpp"

namespace smf2 {

// Formal Fourier expansion of a vector-valued form of weight (j, k);
// coefficients are H_j-valued, stored on full orbits.
struct VectorExpansion {
    int j = 0;
    int k = 0;
    Coset coset = Coset::even;
    int tmax = 0;
    int min_doubled_trace = 0;
    std::unordered_map<Index, HomogPoly, IndexHash> a;

    HomogPoly coeff(const Index& n) const {
        auto it = a.find(n);
        return it == a.end() ? HomogPoly(j) : it->second;
    }
    void add(const Index& n, const HomogPoly& p) {
        if (p.j != j) throw std::invalid_argument("VectorExpansion: degree mismatch");
        if (p.zero()) return;
        auto it = a.find(n);
        if (it == a.end()) {
            a.emplace(n, p);
        } else {
            it->second += p;
            if (it->second.zero()) a.erase(it);
        }
    }
    bool zero() const { return a.empty(); }
};

inline SymMatQ half_matrix(const Index& n) {
    return {frac(n.nu1, 2), frac(n.rho, 4), frac(n.nu2, 2)};
}

inline VectorExpansion lincomb(const std::vector<Rat>& coeffs,
                               const std::vector<VectorExpansion>& forms) {
    if (coeffs.size() != forms.size() || forms.empty())
        throw std::invalid_argument("lincomb: arity mismatch");
    VectorExpansion r;
    r.j = forms[0].j;
    r.k = forms[0].k;
    r.coset = forms[0].coset;
    r.tmax = forms[0].tmax;
    r.min_doubled_trace = forms[0].min_doubled_trace;
    for (std::size_t i = 0; i < forms.size(); ++i) {
        const VectorExpansion& f = forms[i];
        if (f.j != r.j || f.k != r.k || f.coset != r.coset)
            throw std::invalid_argument("lincomb: weight mismatch");
        r.tmax = std::min(r.tmax, f.tmax);
        r.min_doubled_trace = std::min(r.min_doubled_trace, f.min_doubled_trace);
        if (coeffs[i] == 0) continue;
        for (auto& [n, p] : f.a) r.add(n, p * coeffs[i]);
    }
    for (auto it = r.a.begin(); it != r.a.end();)
        it = (it->first.doubled_trace() > r.tmax) ? r.a.erase(it) : std::next(it);
    return r;
}

inline VectorExpansion scal_mul(const ScalarExpansion& phi, const VectorExpansion& F) {
    VectorExpansion r;
    r.j = F.j;
    r.k = F.k + phi.k;
    r.coset = F.coset + phi.coset;
    r.tmax = std::min(phi.tmax + F.min_doubled_trace, F.tmax + phi.min_doubled_trace);
    r.min_doubled_trace = F.min_doubled_trace + phi.min_doubled_trace;
    for (auto& [n1, v] : phi.a) {
        if (v == 0) continue;
        for (auto& [n2, p] : F.a) {
            Index n = n1 + n2;
            if (n.doubled_trace() > r.tmax) continue;
            r.add(n, p * v);
        }
    }
    return r;
}

// F / g for a scalar g with unit constant term, coefficientwise by
// trace-graded recursion.
inline VectorExpansion scal_divide(const VectorExpansion& F, const ScalarExpansion& g) {
    if (g.coset != Coset::even) throw std::invalid_argument("scal_divide: even divisor required");
    if (g.coeff(Index{0, 0, 0}) != 1) throw std::invalid_argument("scal_divide: divisor not a unit");
    VectorExpansion h;
    h.j = F.j;
    h.k = F.k - g.k;
    h.coset = F.coset;
    h.tmax = std::min(F.tmax, g.tmax);
    h.min_doubled_trace = 0;
    std::vector<std::pair<Index, Rat>> gpos;
    for (auto& [m, v] : g.a)
        if (m.doubled_trace() > 0 && v != 0) gpos.emplace_back(m, v);
    for (const Index& n : enumerate(F.coset, h.tmax)) {
        HomogPoly v = F.coeff(n);
        for (auto& [m, gv] : gpos) {
            Index d = n - m;
            if (!d.semi_positive()) continue;
            auto it = h.a.find(d);
            if (it != h.a.end()) v += it->second * (-gv);
        }
        if (!v.zero()) h.a[n] = v;
    }
    return h;
}

// Eq. (5): the RC-operator at the Fourier level.
inline VectorExpansion rc_apply(const RCCandidate& P, const std::vector<ScalarExpansion>& forms,
                                const RCType& types_check) {
    int t = (int)types_check.size();
    if ((int)forms.size() != t || P.slots() != t) throw std::invalid_argument("rc_apply: arity");
    for (int s = 0; s < t; ++s)
        if (forms[s].k != types_check[s])
            throw std::invalid_argument("rc_apply: form weight does not match type");
    int j = P.degree_v();
    int ell = 0;
    if (!P.terms().empty()) {
        int d = 0;
        for (int v : P.terms().begin()->first) d += v;
        ell = d - j / 2;
    }
    if (!is_homogeneous(P, j, ell)) throw std::invalid_argument("rc_apply: P not rho-homogeneous");
    if (!is_harmonic(P, types_check)) throw std::invalid_argument("rc_apply: P not harmonic");

    VectorExpansion r;
    r.j = j;
    r.k = ell + type_sum(types_check);
    r.coset = Coset::even;
    r.min_doubled_trace = 0;
    int total_floor = 0;
    for (int s = 0; s < t; ++s) {
        r.coset = r.coset + forms[s].coset;
        r.min_doubled_trace += forms[s].min_doubled_trace;
        total_floor += forms[s].min_doubled_trace;
    }
    r.tmax = forms[0].tmax + total_floor - forms[0].min_doubled_trace;
    for (int s = 1; s < t; ++s)
        r.tmax = std::min(r.tmax, forms[s].tmax + total_floor - forms[s].min_doubled_trace);

    // sorted supports for budget pruning
    std::vector<std::vector<std::pair<Index, Rat>>> supp(t);
    for (int s = 0; s < t; ++s) {
        for (auto& [n, v] : forms[s].a)
            if (v != 0) supp[s].emplace_back(n, v);
        std::sort(supp[s].begin(), supp[s].end(),
                  [](auto& x, auto& y) { return x.first.doubled_trace() < y.first.doubled_trace(); });
    }
    std::vector<SymMatQ> mats(t);
    std::vector<int> tail_floor(t + 1, 0);
    for (int s = t - 1; s >= 0; --s) tail_floor[s] = tail_floor[s + 1] + forms[s].min_doubled_trace;

    std::function<void(int, const Index&, const Rat&)> rec = [&](int s, const Index& partial,
                                                                 const Rat& prod) {
        if (s == t) {
            if (partial.semi_positive()) r.add(partial, P.eval_at(mats) * prod);
            return;
        }
        int budget = r.tmax - partial.doubled_trace() - tail_floor[s + 1];
        for (auto& [n, v] : supp[s]) {
            if (n.doubled_trace() > budget) break;
            mats[s] = half_matrix(n);
            rec(s + 1, partial + n, prod * v);
        }
    };
    rec(0, Index{0, 0, 0}, Rat(1));
    return r;
}

// Eq. (7): the bracket {F, phi} of a weight-(j,k) form with a scalar of
// weight ell; lands in weight (j, k+ell+1) and is always a cusp form.
inline VectorExpansion bracket(const VectorExpansion& F, const ScalarExpansion& phi) {
    if (F.j < 2) throw std::invalid_argument("bracket: j >= 2 required");
    VectorExpansion r;
    r.j = F.j;
    r.k = F.k + phi.k + 1;
    r.coset = F.coset + phi.coset;
    r.tmax = std::min(phi.tmax + F.min_doubled_trace, F.tmax + phi.min_doubled_trace);
    r.min_doubled_trace = F.min_doubled_trace + phi.min_doubled_trace;
    Rat c1(F.k + F.j / 2 - 1);
    Rat c2(phi.k);
    Rat inv(1, F.j - 1);
    for (auto& [n1, av] : phi.a) {
        if (av == 0) continue;
        SymMatQ h1 = half_matrix(n1);
        for (auto& [n2, bp] : F.a) {
            Index n = n1 + n2;
            if (n.doubled_trace() > r.tmax) continue;
            SymMatQ h2 = half_matrix(n2);
            HomogPoly term = w_apply(h1.a11, h1.a12, h1.a22, bp) * c1;
            term += w_apply(h2.a11, h2.a12, h2.a22, bp) * (-c2);
            r.add(n, term * (av * inv));
        }
    }
    return r;
}

// The Satoh bracket of two scalar forms: weight (2, k1+k2).
inline VectorExpansion satoh_bracket(const ScalarExpansion& f1, const ScalarExpansion& f2) {
    VectorExpansion r;
    r.j = 2;
    r.k = f1.k + f2.k;
    r.coset = f1.coset + f2.coset;
    r.tmax = std::min(f1.tmax + f2.min_doubled_trace, f2.tmax + f1.min_doubled_trace);
    r.min_doubled_trace = f1.min_doubled_trace + f2.min_doubled_trace;
    for (auto& [n1, v1] : f1.a) {
        if (v1 == 0) continue;
        for (auto& [n2, v2] : f2.a) {
            Index n = n1 + n2;
            if (n.doubled_trace() > r.tmax) continue;
            SymMatQ m = half_matrix(n2) * Rat(f1.k) + half_matrix(n1) * Rat(-f2.k);
            r.add(n, m.contract() * (v1 * v2));
        }
    }
    return r;
}

inline bool is_cusp(const VectorExpansion& F) {
    for (auto& [n, p] : F.a)
        if (n.singular() && !p.zero()) return false;
    return true;
}

// Eq. (1) on the unimodular generators, for every stored orbit.
inline bool check_equivariance(const VectorExpansion& F) {
    const Unimodular gens[] = {{0, 1, -1, 0}, {1, 1, 0, 1}, {1, 0, 0, -1}};
    for (auto& [n, p] : F.a)
        for (const Unimodular& u : gens) {
            Index m = act(u, n);
            if (m.doubled_trace() > F.tmax) continue;
            HomogPoly expect = rho_apply(Rat(u.a), Rat(u.b), Rat(u.c), Rat(u.d), F.k, p);
            if (!(F.coeff(m) == expect)) return false;
        }
    return true;
}

}  // namespace smf2
