#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <bit>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "smf2/classical.hpp"
#include "smf2/hecke.hpp"
#include "smf2/vvforms.hpp"

namespace smf2 {

// Coefficient of X^ell in
//   (X^11 + X^13 + ... + X^23) / ((1-X^4)(1-X^6)(1-X^10)(1-X^12)).
inline int dim_vv(int ell) {
    if (ell < 0 || ell % 2 == 0) throw std::invalid_argument("dim_vv: ell must be odd and >= 0");
    std::vector<long> s(ell + 1, 0);
    for (int e : {11, 13, 15, 17, 19, 21, 23})
        if (e <= ell) s[e] = 1;
    for (int d : {4, 6, 10, 12})
        for (int i = d; i <= ell; ++i) s[i] += s[i - d];
    return (int)s[ell];
}

struct GeneratorSet {
    static constexpr std::array<int, 7> kLabels{11, 13, 15, 17, 19, 21, 23};
    std::array<VectorExpansion, 7> F;

    const VectorExpansion& form(int label) const {
        for (std::size_t i = 0; i < kLabels.size(); ++i)
            if (kLabels[i] == label) return F[i];
        throw std::invalid_argument("GeneratorSet: unknown label " + std::to_string(label));
    }
    int min_tmax() const {
        int t = F[0].tmax;
        for (auto& f : F) t = std::min(t, f.tmax);
        return t;
    }
};

// Elliptic polynomial and type for the generators built through M_k.
inline std::pair<MPoly, RCType> generator_recipe(int label) {
    auto quad = [](int c20, int c11, int c02, int den) {
        MPoly p(2);
        p.add_term({2, 0}, frac(c20, den));
        p.add_term({1, 1}, frac(c11, den));
        p.add_term({0, 2}, frac(c02, den));
        return p;
    };
    switch (label) {
        case 15: return {quad(5, -14, 7, 160), RCType{5, 4, 5}};
        case 17: return {quad(4, -8, 3, 192), RCType{5, 6, 5}};
        case 19: return {quad(22, -24, 5, 1920), RCType{4, 10, 4}};
        case 21: return {quad(22, -24, 5, 2880), RCType{4, 10, 6}};
        case 23: return {quad(13, -14, 3, 16), RCType{5, 12, 5}};
    }
    throw std::invalid_argument("generator_recipe: label must be in {15,17,19,21,23}");
}

inline std::string classical_name_of_weight(int k) {
    switch (k) {
        case 4: return "phi4";
        case 5: return "chi5";
        case 6: return "phi6";
        case 10: return "chi10";
        case 12: return "chi12";
    }
    throw std::invalid_argument("classical_name_of_weight: no generator of weight " +
                                std::to_string(k));
}

inline VectorExpansion build_F10(int tmax) {
    auto space = solve_rc_space(6, 0, {4, 6});
    if (space.empty()) throw std::domain_error("build_F10: empty RC space");
    VectorExpansion F = rc_apply(
        space[0], {igusa_generator("phi4", tmax), igusa_generator("phi6", tmax)}, {4, 6});
    if (F.zero()) throw std::domain_error("build_F10: vanishing output");
    return F;
}

inline VectorExpansion build_F12(int tmax) {
    auto space = solve_rc_space(6, 2, {4, 6});
    if (space.empty()) throw std::domain_error("build_F12: empty RC space");
    std::vector<ScalarExpansion> forms{igusa_generator("phi4", tmax),
                                       igusa_generator("phi6", tmax)};
    for (auto& P : space) {
        VectorExpansion F = rc_apply(P, forms, {4, 6});
        if (!F.zero()) return F;
    }
    throw std::domain_error("build_F12: vanishing output");
}

namespace detail {

// Solve an overdetermined system A (alpha, beta)' = rhs exactly; the
// residual must vanish.
inline std::pair<Rat, Rat> solve_two(const MatQ& A, const std::vector<Rat>& rhs,
                                     const char* what) {
    auto sol = solve(A, rhs);
    if (!sol || sol->size() != 2) throw std::domain_error(std::string(what) + ": inconsistent system");
    for (std::size_t r = 0; r < rhs.size(); ++r)
        if (A.at(r, 0) * (*sol)[0] + A.at(r, 1) * (*sol)[1] != rhs[r])
            throw std::domain_error(std::string(what) + ": nonzero residual");
    return {(*sol)[0], (*sol)[1]};
}

}  // namespace detail

// E6 of weight (6,6) from alpha F10 + beta T(2)F10 = phi4 E6, pinned by
// the T(2) eigenvalue -408 and the normalization a(1,0,0) = x^6.
inline VectorExpansion recover_E6(int tmax) {
    int big = 2 * tmax;
    ScalarExpansion p4 = igusa_generator("phi4", big);
    VectorExpansion F10 = build_F10(big);
    VectorExpansion T10 = hecke_vector(F10, 2);
    VectorExpansion A = scal_divide(F10, p4);
    VectorExpansion B = scal_divide(T10, p4);
    VectorExpansion TA = hecke_vector(A, 2);
    VectorExpansion TB = hecke_vector(B, 2);

    const Rat lambda(-408);
    std::vector<Index> probes = enumerate(Coset::even, TB.tmax);
    MatQ M(7 * (probes.size() + 1), 2);
    std::vector<Rat> rhs(7 * (probes.size() + 1), Rat(0));
    std::size_t r = 0;
    for (const Index& n : probes) {
        HomogPoly ca = TA.coeff(n) - lambda * A.coeff(n);
        HomogPoly cb = TB.coeff(n) - lambda * B.coeff(n);
        for (int i = 0; i <= 6; ++i, ++r) {
            M.at(r, 0) = ca.c[i];
            M.at(r, 1) = cb.c[i];
        }
    }
    Index norm{2, 0, 0};
    HomogPoly na = A.coeff(norm), nb = B.coeff(norm);
    for (int i = 0; i <= 6; ++i, ++r) {
        M.at(r, 0) = na.c[i];
        M.at(r, 1) = nb.c[i];
        rhs[r] = (i == 0) ? Rat(1) : Rat(0);
    }
    auto [alpha, beta] = detail::solve_two(M, rhs, "recover_E6");
    VectorExpansion E6 = lincomb({alpha, beta}, {A, B});
    E6.min_doubled_trace = 2;
    return E6;
}

// Theta8 of weight (6,8) from alpha F12 + beta T(2)F12 = phi4 Theta8,
// pinned by the normalization a(1,1,1) = x^4 y^2 + 2 x^3 y^3 + x^2 y^4.
inline VectorExpansion recover_Theta8(int tmax) {
    int big = 2 * tmax;
    ScalarExpansion p4 = igusa_generator("phi4", big);
    VectorExpansion F12 = build_F12(big);
    VectorExpansion T12 = hecke_vector(F12, 2);
    VectorExpansion A = scal_divide(F12, p4);
    VectorExpansion B = scal_divide(T12, p4);

    Index norm{2, 2, 2};
    HomogPoly na = A.coeff(norm), nb = B.coeff(norm);
    const std::array<int, 7> target{0, 0, 1, 2, 1, 0, 0};
    MatQ M(7, 2);
    std::vector<Rat> rhs(7);
    for (int i = 0; i <= 6; ++i) {
        M.at(i, 0) = na.c[i];
        M.at(i, 1) = nb.c[i];
        rhs[i] = Rat(target[i]);
    }
    auto [alpha, beta] = detail::solve_two(M, rhs, "recover_Theta8");
    VectorExpansion T8 = lincomb({alpha, beta}, {A, B});
    T8.min_doubled_trace = 4;
    for (auto it = T8.a.begin(); it != T8.a.end();)
        it = (it->first.doubled_trace() < 4) ? T8.a.erase(it) : std::next(it);
    return T8;
}

inline GeneratorSet build_generators(int tmax) {
    GeneratorSet g;
    ScalarExpansion p4 = igusa_generator("phi4", tmax);
    // Each generator is pinned to the conventional normalization (the anchor
    // coefficients checked in the tests).  The raw bracket and operator
    // outputs differ from it by -1, and by a further factor 16 when both
    // outer slots sit on the shifted half-integral lattice: the conventional
    // values evaluate the degree-4 polynomial at the doubled, integral
    // matrices there.
    g.F[0] = lincomb({Rat(-1, 1152)}, {bracket(recover_E6(tmax), p4)});
    g.F[1] = lincomb({Rat(-1, 4)}, {bracket(recover_Theta8(tmax), p4)});
    for (std::size_t i = 2; i < GeneratorSet::kLabels.size(); ++i) {
        auto [p, type] = generator_recipe(GeneratorSet::kLabels[i]);
        std::vector<ScalarExpansion> forms;
        std::size_t odd_slots = 0;
        for (int w : type) {
            forms.push_back(igusa_generator(classical_name_of_weight(w), tmax));
            if (forms.back().coset == Coset::odd) ++odd_slots;
        }
        Rat scale = (odd_slots == 2) ? Rat(-16) : Rat(-1);
        g.F[i] = lincomb({scale}, {rc_apply(m_op(p, type), forms, type)});
    }
    return g;
}

namespace detail {

struct WedgeColumn {
    Index n;
    std::array<Rat, 7> col;
};

// Support of one generator restricted to the indices that can occur in a
// cusp-only partition: positive determinant, doubled trace in [4, cap].
inline std::vector<WedgeColumn> wedge_support(const VectorExpansion& F, int cap) {
    std::vector<WedgeColumn> out;
    for (auto& [n, p] : F.a) {
        if (n.det16() <= 0 || n.doubled_trace() < 4 || n.doubled_trace() > cap) continue;
        WedgeColumn w{n, {}};
        for (int i = 0; i <= 6; ++i) w.col[i] = p.c[i];
        out.push_back(std::move(w));
    }
    std::sort(out.begin(), out.end(),
              [](const WedgeColumn& a, const WedgeColumn& b) { return a.n < b.n; });
    return out;
}

// One chunk of the 7-fold wedge sum: first-slot indices restricted to
// `firsts`, remaining slots accumulated stage by stage as elements of the
// exterior algebra on the seven coefficient rows.
inline Rat chi140_chunk(const std::array<std::vector<WedgeColumn>, 7>& supp, const Index& n,
                        const std::vector<Index>& firsts) {
    using Comps = std::map<int, Rat>;  // row mask -> coefficient
    std::unordered_map<Index, Comps, IndexHash> cur;
    for (const Index& n1 : firsts) {
        auto it = std::lower_bound(supp[0].begin(), supp[0].end(), n1,
                                   [](const WedgeColumn& w, const Index& m) { return w.n < m; });
        if (it == supp[0].end() || !(it->n == n1)) continue;
        Comps& dst = cur[n1];
        for (int r = 0; r < 7; ++r)
            if (it->col[r] != 0) dst[1 << r] = it->col[r];
    }
    for (int stage = 1; stage < 6; ++stage) {
        int after = 6 - stage;  // slots remaining after this one
        std::unordered_map<Index, Comps, IndexHash> next;
        for (auto& [m, comps] : cur) {
            int budget = n.doubled_trace() - m.doubled_trace() - 4 * after;
            for (const WedgeColumn& w : supp[stage]) {
                if (w.n.doubled_trace() > budget) continue;
                Index m2 = m + w.n;
                Index rem = n - m2;
                if (!rem.semi_positive()) continue;
                Comps& dst = next[m2];
                for (auto& [mask, c] : comps)
                    for (int r = 0; r < 7; ++r) {
                        if (mask & (1 << r)) continue;
                        if (w.col[r] == 0) continue;
                        Rat term = c * w.col[r];
                        if (std::popcount((unsigned)mask >> (r + 1)) & 1) term = -term;
                        dst[mask | (1 << r)] += term;
                    }
            }
        }
        cur = std::move(next);
    }
    // last slot is forced to n - m
    Rat total(0);
    for (auto& [m, comps] : cur) {
        Index g = n - m;
        auto it = std::lower_bound(supp[6].begin(), supp[6].end(), g,
                                   [](const WedgeColumn& w, const Index& x) { return w.n < x; });
        if (it == supp[6].end() || !(it->n == g)) continue;
        for (auto& [mask, c] : comps) {
            int r = std::countr_zero((unsigned)(0x7f & ~mask));
            if ((mask | (1 << r)) != 0x7f) continue;  // only masks missing one row
            Rat term = c * it->col[r];
            if (std::popcount((unsigned)mask >> (r + 1)) & 1) term = -term;
            total += term;
        }
    }
    return total;
}

struct Checkpoint {
    std::string path;
    Index n;
    std::size_t chunks = 0;
    std::map<std::size_t, Rat> done;

    void load() {
        if (path.empty()) return;
        std::ifstream in(path);
        if (!in) return;
        std::string tag;
        Index fn;
        std::size_t fc = 0;
        if (!(in >> tag >> fn.nu1 >> fn.nu2 >> fn.rho >> fc)) return;
        if (tag != "chi140" || !(fn == n) || fc != chunks) return;
        std::size_t id;
        std::string value;
        while (in >> tag >> id >> value) {
            if (tag != "done") break;
            done[id] = Rat(value);
        }
    }
    void store() const {
        if (path.empty()) return;
        std::string tmp = path + ".tmp";
        {
            std::ofstream out(tmp, std::ios::trunc);
            out << "chi140 " << n.nu1 << ' ' << n.nu2 << ' ' << n.rho << ' ' << chunks << '\n';
            for (auto& [id, v] : done) out << "done " << id << ' ' << v.get_str() << '\n';
        }
        std::rename(tmp.c_str(), path.c_str());
    }
};

}  // namespace detail

inline std::vector<Index> chi140_first_slot(const Index& n) {
    std::vector<SupportConstraint> cs(7, SupportConstraint{Coset::even, 4, true});
    return partitions_first_slot(n, cs);
}

// Eq. (8): the Fourier coefficient of chi140 = F11 ^ F13 ^ ... ^ F23 at n.
// Chunked by the choice of the first partition slot; a chunk's partial sum
// is checkpointed so long runs can resume.
inline Rat chi140_coefficient(const GeneratorSet& gens, const Index& n, int threads = 1,
                              const std::string& checkpoint_path = "") {
    if (threads < 1) throw std::invalid_argument("chi140_coefficient: threads must be >= 1");
    if (!n.semi_positive() || !n.in_coset(Coset::even)) return Rat(0);
    if (n.doubled_trace() < 28) return Rat(0);  // seven cusp slots of trace >= 4
    int cap = n.doubled_trace() - 24;
    for (auto& f : gens.F)
        if (f.tmax < cap) throw std::domain_error("chi140_coefficient: insufficient precision");

    std::array<std::vector<detail::WedgeColumn>, 7> supp;
    for (int i = 0; i < 7; ++i) supp[i] = detail::wedge_support(gens.F[i], cap);

    std::vector<Index> firsts = chi140_first_slot(n);
    if (firsts.empty()) return Rat(0);
    std::size_t nchunks = std::min(firsts.size(), (std::size_t)std::max(8, 2 * threads));

    detail::Checkpoint cp{checkpoint_path, n, nchunks, {}};
    cp.load();

    std::mutex mu;
    std::atomic<std::size_t> cursor{0};
    auto worker = [&] {
        for (;;) {
            std::size_t id = cursor.fetch_add(1);
            if (id >= nchunks) return;
            {
                std::lock_guard<std::mutex> lock(mu);
                if (cp.done.count(id)) continue;
            }
            std::size_t lo = firsts.size() * id / nchunks;
            std::size_t hi = firsts.size() * (id + 1) / nchunks;
            std::vector<Index> part(firsts.begin() + lo, firsts.begin() + hi);
            Rat v = detail::chi140_chunk(supp, n, part);
            std::lock_guard<std::mutex> lock(mu);
            cp.done[id] = v;
            cp.store();
        }
    };
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    Rat total(0);
    for (auto& [id, v] : cp.done) total += v;
    return total;
}

// Monomials phi4^a phi6^b chi10^c chi12^d of scalar weight w, in a fixed
// deterministic order.
inline std::vector<std::array<int, 4>> scalar_monomials(int w) {
    std::vector<std::array<int, 4>> out;
    for (int d = 0; 12 * d <= w; ++d)
        for (int c = 0; 12 * d + 10 * c <= w; ++c)
            for (int b = 0; 12 * d + 10 * c + 6 * b <= w; ++b) {
                int rest = w - 12 * d - 10 * c - 6 * b;
                if (rest % 4 == 0) out.push_back({rest / 4, b, c, d});
            }
    return out;
}

inline ScalarExpansion scalar_monomial_expansion(const std::array<int, 4>& e, int tmax) {
    ScalarExpansion r = ScalarExpansion::unit(tmax);
    const char* names[4] = {"phi4", "phi6", "chi10", "chi12"};
    for (int i = 0; i < 4; ++i)
        for (int rep = 0; rep < e[i]; ++rep) r = mul(r, igusa_generator(names[i], tmax));
    r.tmax = std::max(r.tmax, 0);
    return r;
}

// The monomial basis {F_i phi4^a phi6^b chi10^c chi12^d} of M_(6,k) for
// odd k, paired with its exponent labels.
struct MonomialBasis {
    std::vector<std::array<int, 5>> labels;  // (i, a, b, c, d)
    std::vector<VectorExpansion> forms;
};

inline MonomialBasis monomial_basis(const GeneratorSet& gens, int k, int tmax) {
    if (k % 2 == 0) throw std::invalid_argument("monomial_basis: k must be odd");
    MonomialBasis b;
    for (std::size_t i = 0; i < GeneratorSet::kLabels.size(); ++i) {
        int ki = GeneratorSet::kLabels[i];
        if (ki > k) continue;
        for (auto& e : scalar_monomials(k - ki)) {
            b.labels.push_back({ki, e[0], e[1], e[2], e[3]});
            if (e == std::array<int, 4>{0, 0, 0, 0}) {
                b.forms.push_back(gens.F[i]);
            } else {
                b.forms.push_back(scal_mul(scalar_monomial_expansion(e, tmax), gens.F[i]));
            }
        }
    }
    return b;
}

// Exact coordinates of G in the monomial basis of its weight; the linear
// system over Fourier coefficients must be consistent.
inline std::map<std::array<int, 5>, Rat> express_in_basis(const VectorExpansion& G,
                                                          const GeneratorSet& gens) {
    if (G.j != 6 || G.k % 2 == 0 || G.k < 11)
        throw std::invalid_argument("express_in_basis: weight must be (6, odd k >= 11)");
    int tmax = std::min(G.tmax, gens.min_tmax());
    MonomialBasis basis = monomial_basis(gens, G.k, tmax);
    for (auto& f : basis.forms) tmax = std::min(tmax, f.tmax);
    if (tmax < 4) throw std::domain_error("express_in_basis: insufficient precision");
    std::vector<Index> probes = enumerate(Coset::even, tmax);
    std::size_t rows = 7 * probes.size(), cols = basis.forms.size();
    MatQ A(rows, cols);
    std::vector<Rat> rhs(rows, Rat(0));
    std::size_t r = 0;
    for (const Index& n : probes) {
        HomogPoly gv = G.coeff(n);
        for (int i = 0; i <= 6; ++i, ++r) {
            rhs[r] = gv.c[i];
            for (std::size_t c = 0; c < cols; ++c) A.at(r, c) = basis.forms[c].coeff(n).c[i];
        }
    }
    auto sol = solve(A, rhs);
    if (!sol) throw std::domain_error("express_in_basis: no representation");
    for (std::size_t rr = 0; rr < rows; ++rr) {
        Rat acc(0);
        for (std::size_t c = 0; c < cols; ++c) acc += A.at(rr, c) * (*sol)[c];
        if (acc != rhs[rr]) throw std::domain_error("express_in_basis: nonzero residual");
    }
    std::map<std::array<int, 5>, Rat> out;
    for (std::size_t c = 0; c < cols; ++c)
        if ((*sol)[c] != 0) out[basis.labels[c]] = (*sol)[c];
    return out;
}

// Conservative per-form precision requirements (doubled trace) for the
// supported computation targets.
struct PrecisionTarget {
    std::string kind;   // "chi140" | "hecke" | "generators"
    Index n{};          // chi140 target index
    int p = 0;          // hecke prime
    int probe_tmax = 0; // hecke probe bound
    int out_tmax = 0;   // generator output bound
};

inline std::map<std::string, int> plan_precision(const PrecisionTarget& t) {
    std::map<std::string, int> req;
    if (t.kind == "chi140") {
        // seven cusp slots, each eating doubled trace >= 4 from the budget
        int per = t.n.doubled_trace() - 6 * 4;
        for (int i : GeneratorSet::kLabels) req["F" + std::to_string(i)] = per;
    } else if (t.kind == "hecke") {
        req["form"] = t.p * t.probe_tmax;
    } else if (t.kind == "generators") {
        int T = t.out_tmax;
        for (const char* name : {"phi4", "phi6", "chi10", "chi12", "chi5"}) req[name] = T + 2;
        req["E6"] = T;
        req["Theta8"] = T;
        req["F10"] = 2 * T;
        req["F12"] = 2 * T;
    } else {
        throw std::invalid_argument("plan_precision: unknown target kind " + t.kind);
    }
    return req;
}

}  // namespace smf2
