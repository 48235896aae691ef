#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <vector>

#include "smf2/homog.hpp"
#include "smf2/linalg.hpp"
#include "smf2/mpoly.hpp"
#include "smf2/rational.hpp"

namespace smf2 {

// Symmetric 2x2 rational matrix.
struct SymMatQ {
    Rat a11, a12, a22;

    bool operator==(const SymMatQ&) const = default;
    SymMatQ operator+(const SymMatQ& o) const { return {a11 + o.a11, a12 + o.a12, a22 + o.a22}; }
    SymMatQ operator*(const Rat& s) const { return {a11 * s, a12 * s, a22 * s}; }

    // G A G' for G = (a,b;c,d)
    SymMatQ congruent(const Rat& a, const Rat& b, const Rat& c, const Rat& d) const {
        SymMatQ r;
        r.a11 = a * a * a11 + 2 * a * b * a12 + b * b * a22;
        r.a12 = a * c * a11 + (a * d + b * c) * a12 + b * d * a22;
        r.a22 = c * c * a11 + 2 * c * d * a12 + d * d * a22;
        return r;
    }
    // r[v] = a11 x^2 + 2 a12 xy + a22 y^2 as a degree-2 form
    HomogPoly contract() const {
        HomogPoly p(2);
        p.c[0] = a11;
        p.c[1] = 2 * a12;
        p.c[2] = a22;
        return p;
    }
};

// A J B - B J A on symmetric 2x2 matrices; det-equivariant.
inline SymMatQ cross(const SymMatQ& A, const SymMatQ& B) {
    SymMatQ r;
    r.a11 = 2 * A.a11 * B.a12 - 2 * A.a12 * B.a11;
    r.a12 = A.a11 * B.a22 - A.a22 * B.a11;
    r.a22 = 2 * A.a12 * B.a22 - 2 * A.a22 * B.a12;
    return r;
}

using RCType = std::vector<int>;

inline int type_sum(const RCType& k) {
    int s = 0;
    for (int v : k) s += v;
    return s;
}

// Elliptic Rankin-Cohen polynomial p_{j,(k1,k2)} with FALLING-factorial
// Pochhammer convention.  Two variables r_1, r_2.
inline MPoly elliptic_rc(int j, int k1, int k2) {
    if (j < 0 || j % 2 != 0) throw std::domain_error("elliptic_rc: j must be even and >= 0");
    int h = j / 2;
    MPoly p(2);
    for (int i = 0; i <= h; ++i) {
        Rat c = Rat(binomial(h, i)) * Rat(falling_factorial(k1 + h - 1, i)) *
                Rat(falling_factorial(k2 + h - 1, h - i));
        if (i % 2 == 1) c = -c;
        p.add_term({h - i, i}, c);
    }
    return p;
}

// Element of H_j (x) R_t: polynomial in the 3t entries of t symbolic
// symmetric matrices with H_j coefficients.  Variable layout per slot s:
// (r^s_11, r^s_12, r^s_22).
class RCCandidate {
  public:
    static constexpr int kMaxSlots = 3;
    using Expo = std::array<int, 3 * kMaxSlots>;

    RCCandidate() = default;
    RCCandidate(int t, int j) : t_(t), j_(j) {
        if (t < 0 || t > kMaxSlots) throw std::invalid_argument("RCCandidate: bad slot count");
    }

    int slots() const { return t_; }
    int degree_v() const { return j_; }
    bool zero() const { return terms_.empty(); }
    const std::map<Expo, HomogPoly>& terms() const { return terms_; }

    static RCCandidate constant(int t, const Rat& c) {
        RCCandidate p(t, 0);
        HomogPoly h(0);
        h.c[0] = c;
        p.add_term(Expo{}, h);
        return p;
    }

    void add_term(const Expo& e, const HomogPoly& h) {
        if (h.j != j_) throw std::invalid_argument("RCCandidate: coefficient degree mismatch");
        if (h.zero()) return;
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            terms_.emplace(e, h);
        } else {
            it->second += h;
            if (it->second.zero()) terms_.erase(it);
        }
    }

    RCCandidate& operator+=(const RCCandidate& o) {
        require_shape(o);
        for (auto& [e, h] : o.terms_) add_term(e, h);
        return *this;
    }
    RCCandidate operator+(const RCCandidate& o) const {
        RCCandidate r = *this;
        r += o;
        return r;
    }
    RCCandidate operator-() const {
        RCCandidate r(t_, j_);
        for (auto& [e, h] : terms_) r.terms_[e] = -h;
        return r;
    }
    RCCandidate operator-(const RCCandidate& o) const { return *this + (-o); }
    RCCandidate operator*(const Rat& s) const {
        RCCandidate r(t_, j_);
        if (s == 0) return r;
        for (auto& [e, h] : terms_) r.terms_[e] = h * s;
        return r;
    }
    RCCandidate operator*(const RCCandidate& o) const {
        if (t_ != o.t_) throw std::invalid_argument("RCCandidate: slot mismatch");
        RCCandidate r(t_, j_ + o.j_);
        for (auto& [e1, h1] : terms_)
            for (auto& [e2, h2] : o.terms_) {
                Expo e{};
                for (std::size_t i = 0; i < e.size(); ++i) e[i] = e1[i] + e2[i];
                r.add_term(e, h1 * h2);
            }
        return r;
    }
    bool operator==(const RCCandidate& o) const {
        return t_ == o.t_ && j_ == o.j_ && terms_ == o.terms_;
    }

    // d/d r-variable (slot s, entry idx in {0,1,2})
    RCCandidate derivative(int s, int idx) const {
        RCCandidate r(t_, j_);
        for (auto& [e, h] : terms_) {
            int v = 3 * s + idx;
            if (e[v] == 0) continue;
            Expo d = e;
            d[v] -= 1;
            r.add_term(d, h * Rat(e[v]));
        }
        return r;
    }

    // Numeric substitution of the matrix variables.
    HomogPoly eval_at(const std::vector<SymMatQ>& mats) const {
        if ((int)mats.size() != t_) throw std::invalid_argument("eval_at: arity");
        HomogPoly out(j_);
        for (auto& [e, h] : terms_) {
            Rat c(1);
            for (int s = 0; s < t_; ++s) {
                for (int k = 0; k < e[3 * s]; ++k) c *= mats[s].a11;
                for (int k = 0; k < e[3 * s + 1]; ++k) c *= mats[s].a12;
                for (int k = 0; k < e[3 * s + 2]; ++k) c *= mats[s].a22;
                if (c == 0) break;
            }
            if (c != 0) out += h * c;
        }
        return out;
    }

    // P(G r^1 G', ..., G r^t G'; v) for a numeric G.
    RCCandidate transform_matrices(const Rat& a, const Rat& b, const Rat& c, const Rat& d) const {
        // images of the three entry variables of one slot under r -> G r G'
        // as linear forms in (r11, r12, r22)
        std::array<std::array<Rat, 3>, 3> img;
        img[0] = {a * a, 2 * a * b, b * b};
        img[1] = {a * c, a * d + b * c, b * d};
        img[2] = {c * c, 2 * c * d, d * d};
        RCCandidate out(t_, j_);
        for (auto& [e, h] : terms_) {
            RCCandidate term(t_, 0);
            {
                HomogPoly one(0);
                one.c[0] = 1;
                term.add_term(Expo{}, one);
            }
            for (int s = 0; s < t_; ++s)
                for (int idx = 0; idx < 3; ++idx)
                    for (int rep = 0; rep < e[3 * s + idx]; ++rep) {
                        RCCandidate lin(t_, 0);
                        for (int to = 0; to < 3; ++to) {
                            if (img[idx][to] == 0) continue;
                            Expo le{};
                            le[3 * s + to] = 1;
                            HomogPoly hc(0);
                            hc.c[0] = img[idx][to];
                            lin.add_term(le, hc);
                        }
                        term = term * lin;
                    }
            // reattach the H_j coefficient
            RCCandidate hh(t_, j_);
            hh.add_term(Expo{}, h);
            out += term * hh;
        }
        return out;
    }

    // P(r; G'v): substitute (x,y) -> (x,y) G in every coefficient.
    RCCandidate transform_v(const Rat& a, const Rat& b, const Rat& c, const Rat& d) const {
        RCCandidate out(t_, j_);
        for (auto& [e, h] : terms_) out.add_term(e, h.substitute_rows(a, b, c, d));
        return out;
    }

  private:
    void require_shape(const RCCandidate& o) const {
        if (t_ != o.t_ || j_ != o.j_) throw std::invalid_argument("RCCandidate: shape mismatch");
    }

    int t_ = 0;
    int j_ = 0;
    std::map<Expo, HomogPoly> terms_;
};

inline RCCandidate operator*(const Rat& s, const RCCandidate& p) { return p * s; }

// Psi: replace r_s by r^s[v].  Requires p homogeneous; output degree in
// (x,y) is 2 deg(p) and must equal j_out.
inline RCCandidate psi(const MPoly& p, int t, int j_out) {
    int d = p.total_degree();
    if (p.zero()) return RCCandidate(t, j_out);
    if (!p.homogeneous_of_degree(d)) throw std::domain_error("psi: input not homogeneous");
    if (2 * d != j_out) throw std::domain_error("psi: degree mismatch");
    if (p.nvars() > t) throw std::invalid_argument("psi: more variables than slots");

    // (r^s[v])^e by multinomial expansion
    auto rv_power = [&](int s, int e) {
        RCCandidate out(t, 2 * e);
        for (int i1 = 0; i1 <= e; ++i1)
            for (int i2 = 0; i1 + i2 <= e; ++i2) {
                int i3 = e - i1 - i2;
                Rat coef = Rat(binomial(e, i1)) * Rat(binomial(e - i1, i2)) * rat_pow(Rat(2), i2);
                RCCandidate::Expo ex{};
                ex[3 * s] = i1;
                ex[3 * s + 1] = i2;
                ex[3 * s + 2] = i3;
                // x^(2 i1 + i2) y^(i2 + 2 i3)
                out.add_term(ex, HomogPoly::monomial(2 * e, i2 + 2 * i3, coef));
            }
        return out;
    };

    RCCandidate out(t, j_out);
    for (auto& [e, c] : p.terms()) {
        RCCandidate term = RCCandidate::constant(t, c);
        for (int s = 0; s < p.nvars(); ++s)
            if (e[s] > 0) term = term * rv_power(s, e[s]);
        out += term;
    }
    return out;
}

// (r^{s1} x r^{s2})[v] as a symbolic candidate (j = 2, bilinear in the
// two slots' variables).
inline RCCandidate cross_contracted(int t, int s1, int s2) {
    RCCandidate out(t, 2);
    auto add = [&](int v1, int v2, int ydeg, const Rat& c) {
        RCCandidate::Expo e{};
        e[v1] += 1;
        e[v2] += 1;
        out.add_term(e, HomogPoly::monomial(2, ydeg, c));
    };
    int a = 3 * s1, b = 3 * s2;
    // x^2 * 2(a11 b12 - a12 b11)
    add(a + 0, b + 1, 0, Rat(2));
    add(a + 1, b + 0, 0, Rat(-2));
    // 2xy * (a11 b22 - a22 b11)
    add(a + 0, b + 2, 1, Rat(2));
    add(a + 2, b + 0, 1, Rat(-2));
    // y^2 * 2(a12 b22 - a22 b12)
    add(a + 1, b + 2, 2, Rat(2));
    add(a + 2, b + 1, 2, Rat(-2));
    return out;
}

// The operator M_k; p lives in C[r1,r2,r3], output weight (2 deg p + 2, 1).
inline RCCandidate m_op(const MPoly& p_in, const RCType& k) {
    if (k.size() != 3) throw std::invalid_argument("m_op: type must have length 3");
    MPoly p = p_in;
    if (p.nvars() < 3) {
        // embed into C[r1,r2,r3]
        MPoly q(3);
        for (auto& [e, c] : p.terms()) {
            MPoly::Expo ee(3, 0);
            for (std::size_t i = 0; i < e.size(); ++i) ee[i] = e[i];
            q.add_term(ee, c);
        }
        p = q;
    }
    int d = p.zero() ? 0 : p.total_degree();
    if (!p.zero() && !p.homogeneous_of_degree(d)) throw std::domain_error("m_op: p not homogeneous");
    int j_out = 2 * d + 2;

    auto part = [&](int slot) {  // k_slot p + r_slot d/dr_slot p  (slot 0-based)
        MPoly q = p * Rat(k[slot]);
        q += MPoly::variable(3, slot) * p.derivative(slot);
        return q;
    };
    RCCandidate out(3, j_out);
    out += cross_contracted(3, 0, 1) * psi(part(2), 3, 2 * d);
    out += -Rat(1) * (cross_contracted(3, 0, 2) * psi(part(1), 3, 2 * d));
    out += cross_contracted(3, 1, 2) * psi(part(0), 3, 2 * d);
    return out;
}

// Exact harmonicity operator: the Laplacian of P-tilde pulled back through
// the chain rule; P is k-harmonic iff this vanishes identically.
inline RCCandidate harmonicity_defect(const RCCandidate& P, const RCType& k) {
    if ((int)k.size() != P.slots()) throw std::invalid_argument("harmonicity_defect: arity");
    RCCandidate out(P.slots(), P.degree_v());
    for (int s = 0; s < P.slots(); ++s) {
        RCCandidate d11 = P.derivative(s, 0), d12 = P.derivative(s, 1), d22 = P.derivative(s, 2);
        out += Rat(4 * k[s]) * (d11 + d22);
        auto times_var = [&](const RCCandidate& q, int idx, const Rat& c) {
            RCCandidate v(P.slots(), 0);
            RCCandidate::Expo e{};
            e[3 * s + idx] = 1;
            HomogPoly h(0);
            h.c[0] = c;
            v.add_term(e, h);
            return v * q;
        };
        out += times_var(d11.derivative(s, 0), 0, Rat(4));
        out += times_var(d22.derivative(s, 2), 2, Rat(4));
        out += times_var(d12.derivative(s, 1), 0, Rat(1));
        out += times_var(d12.derivative(s, 1), 2, Rat(1));
        out += times_var(d11.derivative(s, 1), 1, Rat(4));
        out += times_var(d12.derivative(s, 2), 1, Rat(4));
    }
    return out;
}

inline bool is_harmonic(const RCCandidate& P, const RCType& k) {
    return harmonicity_defect(P, k).zero();
}

// rho-homogeneity check.  Default: exact evaluation at seeded random
// integer matrices G and r^s (Schwartz-Zippel style, sound with high
// probability and exact per point).  symbolic = true derives the full
// polynomial identity instead.
inline bool is_homogeneous(const RCCandidate& P, int j, int ell, std::uint64_t seed = 20240811,
                           int points = 8, bool symbolic = false) {
    if (P.zero()) return true;
    if (P.degree_v() != j) return false;
    if (symbolic) {
        // G = (ga, gb; gc, gd) symbolic via an MPoly in 4 variables; both
        // sides are expanded with rational-function-free bookkeeping by
        // clearing det(G)^ell onto the other side when ell < 0 (not needed
        // here: ell >= 0 throughout).
        // Represent each side as a map from (r-expo, ydeg) to MPoly in G.
        using Key = std::pair<RCCandidate::Expo, int>;
        std::map<Key, MPoly> lhs, rhs;
        MPoly ga = MPoly::variable(4, 0), gb = MPoly::variable(4, 1), gc = MPoly::variable(4, 2),
              gd = MPoly::variable(4, 3);
        MPoly det = ga * gd - gb * gc;
        // LHS: substitute r^s -> G r^s G'
        std::array<std::array<MPoly, 3>, 3> img{
            {{ga * ga, Rat(2) * ga * gb, gb * gb},
             {ga * gc, ga * gd + gb * gc, gb * gd},
             {gc * gc, Rat(2) * gc * gd, gd * gd}}};
        for (auto& [e, h] : P.terms()) {
            // expand product over slot variables
            std::map<RCCandidate::Expo, MPoly> acc;
            acc[RCCandidate::Expo{}] = MPoly::constant(4, Rat(1));
            for (int s = 0; s < P.slots(); ++s)
                for (int idx = 0; idx < 3; ++idx)
                    for (int rep = 0; rep < e[3 * s + idx]; ++rep) {
                        std::map<RCCandidate::Expo, MPoly> next;
                        for (auto& [ae, ap] : acc)
                            for (int to = 0; to < 3; ++to) {
                                if (img[idx][to].zero()) continue;
                                RCCandidate::Expo ne = ae;
                                ne[3 * s + to] += 1;
                                MPoly pr = ap * img[idx][to];
                                auto it = next.find(ne);
                                if (it == next.end())
                                    next.emplace(ne, pr);
                                else
                                    it->second += pr;
                            }
                        acc = std::move(next);
                    }
            for (auto& [ae, ap] : acc)
                for (int yd = 0; yd <= j; ++yd) {
                    if (h.c[yd] == 0) continue;
                    auto& slot = lhs.try_emplace(Key{ae, yd}, MPoly(4)).first->second;
                    slot += ap * h.c[yd];
                }
        }
        // RHS: det^ell * P(r; G'v): x -> ga x + gc y, y -> gb x + gd y
        MPoly dete = det.pow((unsigned)ell);
        for (auto& [e, h] : P.terms())
            for (int yd = 0; yd <= j; ++yd) {
                if (h.c[yd] == 0) continue;
                // (ga x + gc y)^(j-yd) (gb x + gd y)^yd expanded over final ydeg
                for (int i1 = 0; i1 <= j - yd; ++i1)
                    for (int i2 = 0; i2 <= yd; ++i2) {
                        MPoly coef = MPoly::constant(4, Rat(binomial(j - yd, i1) * binomial(yd, i2)));
                        coef = coef * ga.pow(j - yd - i1) * gc.pow(i1) * gb.pow(yd - i2) * gd.pow(i2);
                        int final_yd = i1 + i2;
                        auto& slot = rhs.try_emplace(Key{e, final_yd}, MPoly(4)).first->second;
                        slot += coef * dete * h.c[yd];
                    }
            }
        // compare
        for (auto& [key, p] : lhs) {
            auto it = rhs.find(key);
            MPoly diff = (it == rhs.end()) ? p : p - it->second;
            if (!diff.zero()) return false;
        }
        for (auto& [key, p] : rhs)
            if (lhs.find(key) == lhs.end() && !p.zero()) return false;
        return true;
    }
    RandomSource rng(seed);
    for (int pt = 0; pt < points; ++pt) {
        Rat a(rng.sample(50)), b(rng.sample(50)), c(rng.sample(50)), d(rng.sample(50));
        std::vector<SymMatQ> mats(P.slots());
        for (auto& m : mats) m = {Rat(rng.sample(50)), Rat(rng.sample(50)), Rat(rng.sample(50))};
        std::vector<SymMatQ> tw(mats);
        for (auto& m : tw) m = m.congruent(a, b, c, d);
        HomogPoly left = P.eval_at(tw);
        HomogPoly right = rat_pow(a * d - b * c, ell) * P.eval_at(mats).substitute_rows(a, b, c, d);
        if (!(left == right)) return false;
    }
    return true;
}

// Basis of the space of RC-polynomials of weight (j, ell) and type k:
// total r-degree d = ell + j/2, rho-homogeneous and k-harmonic.
inline std::vector<RCCandidate> solve_rc_space(int j, int ell, const RCType& k) {
    if (j < 0 || j % 2 != 0) return {};
    int t = (int)k.size();
    int d = ell + j / 2;
    if (d < 0) return {};

    // admissible (r-monomial, ydeg) unknowns from the diagonal grading:
    // 2 sum E11 + sum E12 = ell + j - ydeg
    std::vector<std::pair<RCCandidate::Expo, int>> unknowns;
    std::vector<RCCandidate::Expo> monos;
    {
        RCCandidate::Expo e{};
        std::function<void(int, int)> rec = [&](int var, int remaining) {
            if (var == 3 * t) {
                if (remaining == 0) monos.push_back(e);
                return;
            }
            for (int v = 0; v <= remaining; ++v) {
                e[var] = v;
                rec(var + 1, remaining - v);
            }
            e[var] = 0;
        };
        rec(0, d);
    }
    for (auto& e : monos) {
        int w = 0;
        for (int s = 0; s < t; ++s) w += 2 * e[3 * s] + e[3 * s + 1];
        int ydeg = ell + j - w;
        if (ydeg >= 0 && ydeg <= j) unknowns.emplace_back(e, ydeg);
    }
    if (unknowns.empty()) return {};

    auto basis_elem = [&](std::size_t i) {
        RCCandidate p(t, j);
        p.add_term(unknowns[i].first, HomogPoly::monomial(j, unknowns[i].second));
        return p;
    };

    // constraint rows: images under the defect maps, coordinatized by
    // (r-monomial, ydeg) of the defect polynomial
    using Key = std::pair<RCCandidate::Expo, int>;
    std::map<Key, std::size_t> row_of;
    std::vector<std::vector<std::pair<std::size_t, Rat>>> cols(unknowns.size());
    auto add_defect = [&](std::size_t coli, const RCCandidate& defect) {
        for (auto& [e, h] : defect.terms())
            for (int yd = 0; yd <= defect.degree_v(); ++yd) {
                if (h.c[yd] == 0) continue;
                auto [it, fresh] = row_of.try_emplace(Key{e, yd}, row_of.size());
                cols[coli].emplace_back(it->second, h.c[yd]);
            }
    };
    for (std::size_t i = 0; i < unknowns.size(); ++i) {
        RCCandidate p = basis_elem(i);
        add_defect(i, harmonicity_defect(p, k));
        // unipotent and swap homogeneity defects (with the diagonal grading
        // these generate the full GL2 identity)
        auto defect_G = [&](Rat a, Rat b, Rat c, Rat dd) {
            return p.transform_matrices(a, b, c, dd) -
                   rat_pow(a * dd - b * c, ell) * p.transform_v(a, b, c, dd);
        };
        add_defect(i, defect_G(1, 1, 0, 1));
        add_defect(i, defect_G(1, 0, 1, 1));
        add_defect(i, defect_G(0, 1, 1, 0));
    }
    MatQ A(row_of.size(), unknowns.size());
    for (std::size_t i = 0; i < unknowns.size(); ++i)
        for (auto& [r, v] : cols[i]) A.at(r, i) += v;
    auto ker = kernel(std::move(A));
    std::vector<RCCandidate> out;
    for (auto& v : ker) {
        RCCandidate p(t, j);
        for (std::size_t i = 0; i < unknowns.size(); ++i)
            if (v[i] != 0)
                p.add_term(unknowns[i].first, HomogPoly::monomial(j, unknowns[i].second, v[i]));
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace smf2
