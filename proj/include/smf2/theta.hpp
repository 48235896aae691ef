#pragma once

#include <array>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <stdexcept>
#include <vector>

#include "smf2/expansion.hpp"
#include "smf2/rational.hpp"

namespace smf2 {

// Even theta characteristics, written as bit vectors (a1,a2,b1,b2) for the
// characteristic [a/2; b/2].
struct ThetaChar {
    int a1, a2, b1, b2;
    bool operator==(const ThetaChar&) const = default;
    auto key() const { return std::array<int, 4>{a1, a2, b1, b2}; }
    bool operator<(const ThetaChar& o) const { return key() < o.key(); }
};

inline std::vector<ThetaChar> even_characteristics() {
    std::vector<ThetaChar> out;
    for (int a1 : {0, 1})
        for (int a2 : {0, 1})
            for (int b1 : {0, 1})
                for (int b2 : {0, 1})
                    if ((a1 * b1 + a2 * b2) % 2 == 0) out.push_back({a1, a2, b1, b2});
    return out;
}

// Cell type for theta-product accumulation; 128 bits covers every product
// of 24 theta factors at the trace bounds used here.
using ThetaCell = __int128;

inline Int int_from_cell(ThetaCell v) {
    bool neg = v < 0;
    unsigned __int128 u = neg ? -(unsigned __int128)v : (unsigned __int128)v;
    Int hi((unsigned long)(u >> 64)), lo((unsigned long)(u & ~0ull));
    Int r = (hi << 64) + lo;
    return neg ? Int(-r) : r;
}

// Dense accumulator on the eighth-integer exponent grid: cell (s1, s2, sr)
// carries the coefficient of q11^{s1/8} q12^{sr/8} q22^{s2/8}, with
// 0 <= s1, s2, s1 + s2 <= S and |sr| <= S.  Doubled coordinates are s/4.
class ThetaGrid {
  public:
    explicit ThetaGrid(int S) : S_(S), span_(2 * S + 1), v_((std::size_t)(S + 1) * (S + 1) * (2 * S + 1), 0) {}

    int bound() const { return S_; }
    ThetaCell& at(int s1, int s2, int sr) { return v_[idx(s1, s2, sr)]; }
    ThetaCell at(int s1, int s2, int sr) const { return v_[idx(s1, s2, sr)]; }

    void set_unit() {
        std::fill(v_.begin(), v_.end(), ThetaCell(0));
        at(0, 0, 0) = 1;
    }
    ThetaCell max_abs() const {
        ThetaCell m = 0;
        for (auto x : v_) m = std::max(m, x < 0 ? ThetaCell(-x) : x);
        return m;
    }
    std::size_t idx(int s1, int s2, int sr) const {
        return ((std::size_t)s1 * (S_ + 1) + s2) * span_ + (sr + S_);
    }
    const std::vector<ThetaCell>& raw() const { return v_; }
    std::vector<ThetaCell>& raw() { return v_; }

  private:
    int S_;
    int span_;
    std::vector<ThetaCell> v_;
};

struct ThetaTerm {
    int d1, d2, dr;
    int sign;
};

// Lattice terms of theta[a/2; b/2](tau): u = 2x1+a1, v = 2x2+a2 with
// u^2 + v^2 <= S, contributing sign * q^{(u^2, 2uv, v^2)/8}.
inline std::vector<ThetaTerm> theta_terms(const ThetaChar& c, int S) {
    std::vector<ThetaTerm> out;
    int global = ((c.a1 * c.b1 + c.a2 * c.b2) / 2) % 2;  // (-1)^{a'b/2}
    int umax = 0;
    while ((umax + 1) * (umax + 1) <= S) ++umax;
    for (int u = -umax; u <= umax; ++u) {
        if ((u & 1) != c.a1) continue;
        for (int v = -umax; v <= umax; ++v) {
            if ((v & 1) != c.a2) continue;
            if (u * u + v * v > S) continue;
            int x1 = (u - c.a1) / 2, x2 = (v - c.a2) / 2;
            int sgn = (global + x1 * c.b1 + x2 * c.b2) % 2;
            out.push_back({u * u, v * v, 2 * u * v, sgn ? -1 : 1});
        }
    }
    return out;
}

// acc <- acc * theta[c], truncated to total trace <= S.  Shifted-add per
// lattice term keeps the inner loop sequential.
inline void multiply_theta(ThetaGrid& acc, const ThetaChar& c, ThetaGrid& scratch) {
    int S = acc.bound();
    auto terms = theta_terms(c, S);
    std::fill(scratch.raw().begin(), scratch.raw().end(), ThetaCell(0));
    for (const ThetaTerm& t : terms) {
        for (int s1 = 0; s1 + t.d1 <= S; ++s1) {
            int s2cap = S - t.d1 - t.d2 - s1;
            if (s2cap < 0) break;
            for (int s2 = 0; s2 <= s2cap; ++s2) {
                int lo = -S, hi = S;
                if (t.dr > 0)
                    hi = S - t.dr;
                else
                    lo = -S - t.dr;
                const ThetaCell* src = &acc.raw()[acc.idx(s1, s2, lo)];
                ThetaCell* dst = &scratch.raw()[scratch.idx(s1 + t.d1, s2 + t.d2, lo + t.dr)];
                int len = hi - lo + 1;
                if (t.sign > 0) {
                    for (int i = 0; i < len; ++i)
                        if (src[i]) dst[i] += src[i];
                } else {
                    for (int i = 0; i < len; ++i)
                        if (src[i]) dst[i] -= src[i];
                }
            }
        }
    }
    acc.raw().swap(scratch.raw());
    if (acc.max_abs() > (ThetaCell(1) << 120))
        throw std::overflow_error("multiply_theta: coefficient bound exceeded");
}

// Product of the given characteristics (with multiplicity), truncated to
// doubled trace <= tmax.
inline ThetaGrid theta_product(const std::vector<ThetaChar>& factors, int tmax) {
    int S = 4 * tmax;
    ThetaGrid acc(S), scratch(S);
    acc.set_unit();
    for (const ThetaChar& c : factors) multiply_theta(acc, c, scratch);
    return acc;
}

inline void accumulate(std::vector<ThetaCell>& sum, const ThetaGrid& g, std::int64_t scale) {
    if (sum.empty()) sum.assign(g.raw().size(), 0);
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += ThetaCell(scale) * g.raw()[i];
}

// Read a finished grid into a ScalarExpansion.  Every nonzero cell must sit
// on the doubled lattice (all exponents divisible by 4) in the expected
// coset; anything else means the theta combination was not modular.
inline ScalarExpansion extract(const std::vector<ThetaCell>& cells, int S, int weight,
                               Coset coset, int tmax) {
    ThetaGrid view(S);  // only for idx()
    ScalarExpansion f;
    f.k = weight;
    f.coset = coset;
    f.tmax = tmax;
    f.min_doubled_trace = 0;
    int span = 2 * S + 1;
    for (int s1 = 0; s1 <= S; ++s1)
        for (int s2 = 0; s1 + s2 <= S; ++s2)
            for (int sr = -S; sr <= S; ++sr) {
                ThetaCell c = cells[((std::size_t)s1 * (S + 1) + s2) * span + (sr + S)];
                if (c == 0) continue;
                if (s1 % 4 || s2 % 4 || ((sr % 4) + 4) % 4)
                    throw std::domain_error("extract: support off the doubled lattice");
                Index n{s1 / 4, s2 / 4, sr / 4};
                if (!n.in_coset(coset)) throw std::domain_error("extract: coset violation");
                if (!n.semi_positive()) throw std::domain_error("extract: non-PSD support");
                if (n.doubled_trace() <= tmax) f.a[n] = Rat(int_from_cell(c));
            }
    return f;
}

// Action of the Sp(4,Z) generators on fourth powers theta[c]^4: the
// involution swaps a and b; translation by a symmetric S sends b to
// b + Sa + diag(S) and contributes the sign (-1)^{a'Sa}.
struct QuarticMove {
    ThetaChar to;
    int sign;
};

inline QuarticMove quartic_J(const ThetaChar& c) { return {{c.b1, c.b2, c.a1, c.a2}, 1}; }

inline QuarticMove quartic_T(const ThetaChar& c, int S11, int S12, int S22) {
    int nb1 = (c.b1 + S11 * c.a1 + S12 * c.a2 + S11) % 2;
    int nb2 = (c.b2 + S12 * c.a1 + S22 * c.a2 + S22) % 2;
    int quad = S11 * c.a1 * c.a1 + 2 * S12 * c.a1 * c.a2 + S22 * c.a2 * c.a2;
    return {{c.a1, c.a2, nb1, nb2}, quad % 2 ? -1 : 1};
}

// Triples of distinct even characteristics whose bitwise sum is again an
// even characteristic, with the relative signs that make the sum of quartic
// triple products modular.  Signs are fixed by propagating invariance under
// the generator moves; consistency on every edge is asserted.
struct SignedTriple {
    std::array<int, 3> chars;  // indices into even_characteristics()
    int sign;
};

inline std::vector<SignedTriple> syzygous_triples_signed() {
    auto chars = even_characteristics();
    auto find = [&](const ThetaChar& c) {
        for (std::size_t i = 0; i < chars.size(); ++i)
            if (chars[i] == c) return (int)i;
        throw std::logic_error("syzygous: characteristic left the even set");
    };
    auto is_even = [](int a1, int a2, int b1, int b2) { return (a1 * b1 + a2 * b2) % 2 == 0; };

    std::vector<std::array<int, 3>> triples;
    std::map<std::array<int, 3>, int> pos;
    for (int i = 0; i < (int)chars.size(); ++i)
        for (int j = i + 1; j < (int)chars.size(); ++j)
            for (int k = j + 1; k < (int)chars.size(); ++k) {
                const auto &A = chars[i], &B = chars[j], &C = chars[k];
                if (is_even(A.a1 ^ B.a1 ^ C.a1, A.a2 ^ B.a2 ^ C.a2, A.b1 ^ B.b1 ^ C.b1,
                            A.b2 ^ B.b2 ^ C.b2)) {
                    pos[{i, j, k}] = (int)triples.size();
                    triples.push_back({i, j, k});
                }
            }

    // moves as (permutation of char indices, per-char sign)
    struct Move {
        std::vector<int> perm;
        std::vector<int> sign;
    };
    std::vector<Move> moves;
    auto add_move = [&](auto&& f) {
        Move m;
        m.perm.resize(chars.size());
        m.sign.resize(chars.size());
        for (int i = 0; i < (int)chars.size(); ++i) {
            QuarticMove qm = f(chars[i]);
            m.perm[i] = find(qm.to);
            m.sign[i] = qm.sign;
        }
        moves.push_back(std::move(m));
    };
    add_move([](const ThetaChar& c) { return quartic_J(c); });
    add_move([](const ThetaChar& c) { return quartic_T(c, 1, 0, 0); });
    add_move([](const ThetaChar& c) { return quartic_T(c, 0, 0, 1); });
    add_move([](const ThetaChar& c) { return quartic_T(c, 0, 1, 0); });

    // propagate signs over the action graph
    std::vector<int> sign(triples.size(), 0);
    std::vector<int> queue;
    sign[0] = 1;
    queue.push_back(0);
    while (!queue.empty()) {
        int t = queue.back();
        queue.pop_back();
        for (const Move& m : moves) {
            std::array<int, 3> img;
            int s = sign[t];
            for (int slot = 0; slot < 3; ++slot) {
                img[slot] = m.perm[triples[t][slot]];
                s *= m.sign[triples[t][slot]];
            }
            std::sort(img.begin(), img.end());
            auto it = pos.find(img);
            if (it == pos.end()) throw std::logic_error("syzygous: image triple not syzygous");
            int u = it->second;
            if (sign[u] == 0) {
                sign[u] = s;
                queue.push_back(u);
            } else if (sign[u] != s) {
                throw std::logic_error("syzygous: inconsistent sign propagation");
            }
        }
    }
    std::vector<SignedTriple> out;
    for (std::size_t t = 0; t < triples.size(); ++t) {
        if (sign[t] == 0) throw std::logic_error("syzygous: action graph not connected");
        out.push_back({triples[t], sign[t]});
    }
    return out;
}

}  // namespace smf2
