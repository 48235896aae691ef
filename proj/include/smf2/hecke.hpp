#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "smf2/expansion.hpp"
#include "smf2/linalg.hpp"
#include "smf2/vvforms.hpp"

namespace smf2 {

namespace detail {

// Coefficient of T(p)F at the conventional-coordinate index (N, M, R).  The coset
// sum collapses to four kinds of terms; unimodular twists act on the H_j
// value through the right-translation substitutions.
inline HomogPoly hecke_coeff(const VectorExpansion& F, int p, int N, int M, int R) {
    int j = F.j, k = F.k;
    // Some coset images land outside the stored trace range; pull them back
    // through equivariance after Gauss reduction.
    auto a = [&](int n, int m, int r) {
        Index idx{2 * n, 2 * m, 2 * r};
        if (idx.doubled_trace() <= F.tmax) return F.coeff(idx);
        auto [u, red] = reduce(idx);
        if (red.doubled_trace() > F.tmax)
            throw std::invalid_argument("hecke: insufficient input precision");
        int e = u.det();
        Unimodular inv{e * u.d, -e * u.b, -e * u.c, e * u.a};
        HomogPoly v = F.coeff(red);
        if (v.zero()) return v;
        return rho_apply(Rat(inv.a), Rat(inv.b), Rat(inv.c), Rat(inv.d), k, v);
    };
    HomogPoly out = a(p * N, p * M, p * R);
    Rat f1 = rat_pow(Rat(p), k - 2);
    for (int c = 0; c < p; ++c) {
        long q = (long)M - (long)c * R + (long)c * c * N;
        if (q % p != 0) continue;
        HomogPoly v = a(p * N, (int)(q / p), R - 2 * c * N);
        if (v.zero()) continue;
        out += v.substitute_rows(1, 0, c, p) * f1;
    }
    if (N % p == 0) {
        HomogPoly v = a(N / p, p * M, R);
        if (!v.zero()) out += v.substitute_rows(p, 0, 0, 1) * f1;
    }
    if (N % p == 0 && M % p == 0 && R % p == 0) {
        HomogPoly v = a(N / p, M / p, R / p);
        if (!v.zero()) out += v * rat_pow(Rat(p), 2 * k + j - 3);
    }
    return out;
}

}  // namespace detail

inline VectorExpansion hecke_vector(const VectorExpansion& F, int p) {
    if (F.coset != Coset::even) throw std::invalid_argument("hecke_vector: even coset required");
    VectorExpansion r;
    r.j = F.j;
    r.k = F.k;
    r.coset = Coset::even;
    r.tmax = F.tmax / p;
    r.min_doubled_trace = 0;
    // the result must reach the first positive-definite trace to be of any use
    if (r.tmax < 4) throw std::invalid_argument("hecke_vector: insufficient precision");
    for (const Index& n : enumerate(Coset::even, r.tmax)) {
        HomogPoly v = detail::hecke_coeff(F, p, n.nu1 / 2, n.nu2 / 2, n.rho / 2);
        if (!v.zero()) r.a[n] = v;
    }
    return r;
}

inline ScalarExpansion hecke_scalar(const ScalarExpansion& f, int p) {
    VectorExpansion F;
    F.j = 0;
    F.k = f.k;
    F.coset = f.coset;
    F.tmax = f.tmax;
    F.min_doubled_trace = f.min_doubled_trace;
    for (auto& [n, v] : f.a) F.a[n] = HomogPoly::monomial(0, 0, v);
    VectorExpansion R = hecke_vector(F, p);
    ScalarExpansion r;
    r.k = f.k;
    r.coset = f.coset;
    r.tmax = R.tmax;
    r.min_doubled_trace = 0;
    for (auto& [n, v] : R.a)
        if (!v.zero()) r.a[n] = v.c[0];
    return r;
}

// The constant lambda with T(p)F = lambda F, checked at every coefficient
// available on the common bound.
inline Rat eigenvalue_of(const VectorExpansion& F, int p) {
    if (F.zero()) throw std::invalid_argument("eigenvalue_of: zero form");
    VectorExpansion TF = hecke_vector(F, p);
    std::optional<Rat> lambda;
    for (const Index& n : enumerate(Coset::even, TF.tmax)) {
        HomogPoly x = F.coeff(n), y = TF.coeff(n);
        for (int i = 0; i <= F.j; ++i) {
            if (x.c[i] == 0) {
                if (y.c[i] != 0) throw std::domain_error("eigenvalue_of: not an eigenform");
                continue;
            }
            Rat q = y.c[i] / x.c[i];
            if (!lambda)
                lambda = q;
            else if (*lambda != q)
                throw std::domain_error("eigenvalue_of: not an eigenform");
        }
    }
    if (!lambda) throw std::domain_error("eigenvalue_of: no nonzero coefficient in range");
    return *lambda;
}

struct HeckeMatrix {
    int p = 0;
    std::vector<std::string> labels;
    MatQ mat;
    std::vector<Int> charpoly_int;  // content-1, positive leading, highest first
};

// Express each T(p)G_i in the given basis by an exact overdetermined solve
// on Fourier coefficients; residuals must vanish.
inline HeckeMatrix matrix_on_basis(const std::vector<VectorExpansion>& basis, int p,
                                   std::vector<std::string> labels = {}) {
    if (basis.empty()) throw std::invalid_argument("matrix_on_basis: empty basis");
    int j = basis[0].j;
    std::vector<VectorExpansion> images;
    int bound = basis[0].tmax / p;
    for (auto& b : basis) {
        if (b.j != j || b.k != basis[0].k) throw std::invalid_argument("matrix_on_basis: mixed weights");
        images.push_back(hecke_vector(b, p));
        bound = std::min(bound, b.tmax / p);
    }
    std::vector<Index> probes = enumerate(Coset::even, bound);
    std::size_t rows = probes.size() * (j + 1);
    MatQ A(rows, basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i) {
        std::size_t r = 0;
        for (const Index& n : probes) {
            HomogPoly v = basis[i].coeff(n);
            for (int c = 0; c <= j; ++c) A.at(r++, i) = v.c[c];
        }
    }
    if (rank(A) != basis.size()) throw std::domain_error("matrix_on_basis: basis not independent");
    HeckeMatrix H;
    H.p = p;
    H.mat = MatQ(basis.size(), basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i) {
        std::vector<Rat> rhs(rows, Rat(0));
        std::size_t r = 0;
        for (const Index& n : probes) {
            HomogPoly v = images[i].coeff(n);
            for (int c = 0; c <= j; ++c) rhs[r++] = v.c[c];
        }
        auto sol = solve(A, rhs);
        if (!sol) throw std::domain_error("matrix_on_basis: basis not T(p)-stable");
        // exact residual check
        for (std::size_t rr = 0; rr < rows; ++rr) {
            Rat acc(0);
            for (std::size_t cc = 0; cc < basis.size(); ++cc) acc += A.at(rr, cc) * (*sol)[cc];
            if (acc != rhs[rr]) throw std::domain_error("matrix_on_basis: inconsistent system");
        }
        for (std::size_t rr = 0; rr < basis.size(); ++rr) H.mat.at(rr, i) = (*sol)[rr];
    }
    if (labels.empty())
        for (std::size_t i = 0; i < basis.size(); ++i) labels.push_back("b" + std::to_string(i));
    H.labels = std::move(labels);
    auto cp = charpoly(H.mat);
    // clear denominators to a content-1 integer polynomial (monic input, so
    // this just scales by the lcm of denominators; content then divides out)
    Int lcm(1);
    for (auto& c : cp) {
        Int den = c.get_den();
        lcm = lcm / gcd(lcm, den) * den;
    }
    std::vector<Int> ip;
    for (auto& c : cp) {
        Rat scaled = c * Rat(lcm);
        ip.push_back(scaled.get_num());
    }
    Int content(0);
    for (auto& c : ip) content = gcd(content, c);
    if (content > 1)
        for (auto& c : ip) c /= content;
    if (ip[0] < 0)
        for (auto& c : ip) c = -c;
    H.charpoly_int = std::move(ip);
    return H;
}

inline Factorization charpoly_discriminant(const std::vector<Int>& poly) {
    std::vector<Rat> f;
    for (auto& c : poly) f.push_back(Rat(c));
    Rat d = poly_discriminant(f);
    if (d.get_den() != 1) throw std::domain_error("charpoly_discriminant: non-integral");
    return factor_integer(d.get_num());
}

inline std::string poly_str(const std::vector<Int>& poly) {
    std::string s;
    int deg = (int)poly.size() - 1;
    for (int i = 0; i <= deg; ++i) {
        const Int& c = poly[i];
        if (c == 0) continue;
        int e = deg - i;
        std::string term;
        Int ab = c < 0 ? Int(-c) : c;
        if (e == 0)
            term = ab.get_str();
        else {
            if (ab != 1) term = ab.get_str() + " ";
            term += (e == 1) ? "X" : "X^" + std::to_string(e);
        }
        if (s.empty())
            s = (c < 0 ? "-" : "") + term;
        else
            s += (c < 0 ? " - " : " + ") + term;
    }
    return s.empty() ? "0" : s;
}

}  // namespace smf2
