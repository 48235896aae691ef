#pragma once

#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "smf2/expansion.hpp"
#include "smf2/rational.hpp"

namespace smf2 {

// Power series in q^{1/8}: c[i] multiplies q^{i/8}.  Everything in this
// header keeps exponents on the 1/8 grid so theta quotients stay exact.
struct QSeries8 {
    int n8max = 0;
    std::vector<Rat> c;

    explicit QSeries8(int bound = 0) : n8max(bound), c(bound + 1, Rat(0)) {}

    QSeries8 operator*(const QSeries8& o) const {
        QSeries8 r(std::min(n8max, o.n8max));
        for (int i = 0; i <= n8max && i <= r.n8max; ++i) {
            if (c[i] == 0) continue;
            for (int j = 0; i + j <= r.n8max && j <= o.n8max; ++j)
                if (o.c[j] != 0) r.c[i + j] += c[i] * o.c[j];
        }
        return r;
    }
    QSeries8 operator+(const QSeries8& o) const {
        QSeries8 r(std::min(n8max, o.n8max));
        for (int i = 0; i <= r.n8max; ++i) r.c[i] = c[i] + o.c[i];
        return r;
    }
    QSeries8 operator-(const QSeries8& o) const {
        QSeries8 r(std::min(n8max, o.n8max));
        for (int i = 0; i <= r.n8max; ++i) r.c[i] = c[i] - o.c[i];
        return r;
    }
    QSeries8 operator*(const Rat& s) const {
        QSeries8 r = *this;
        for (auto& v : r.c) v *= s;
        return r;
    }
    int valuation() const {
        for (int i = 0; i <= n8max; ++i)
            if (c[i] != 0) return i;
        return n8max + 1;
    }
};

inline QSeries8 eta6(int n8max) {
    // q^{1/4} prod (1 - q^n)^6
    QSeries8 r(n8max);
    if (n8max >= 2) r.c[2] = 1;
    for (int n = 1; 8 * n <= n8max; ++n) {
        // multiply by (1 - q^n)^6 = sum_i C(6,i)(-1)^i q^{ni}
        QSeries8 next(n8max);
        for (int i = 0; i <= n8max; ++i) {
            if (r.c[i] == 0) continue;
            for (int t = 0; t <= 6 && i + 8 * n * t <= n8max; ++t) {
                Rat coef = Rat(binomial(6, t));
                if (t % 2 == 1) coef = -coef;
                next.c[i + 8 * n * t] += r.c[i] * coef;
            }
        }
        r = std::move(next);
    }
    return r;
}

inline QSeries8 eisenstein_q(int weight, int n8max) {
    QSeries8 r(n8max);
    r.c[0] = 1;
    Rat scale = (weight == 4) ? Rat(240) : Rat(-504);
    if (weight != 4 && weight != 6) throw std::invalid_argument("eisenstein_q: weight 4 or 6");
    for (int n = 1; 8 * n <= n8max; ++n) {
        Int s(0);
        for (int d = 1; d <= n; ++d)
            if (n % d == 0) s += int_pow(Int(d), weight - 1);
        r.c[8 * n] = scale * Rat(s);
    }
    return r;
}

inline QSeries8 delta_q(int n8max) {
    QSeries8 e = eta6(n8max);
    return e * e * e * e;
}

// Laurent-in-zeta, power-series-in-q object: map (n8, r2) -> coefficient,
// for q^{n8/8} zeta^{r2/2}.
struct JacobiSeries {
    int n8max = 0;
    std::map<std::pair<int, int>, Rat> c;

    explicit JacobiSeries(int bound = 0) : n8max(bound) {}

    void add(int n8, int r2, const Rat& v) {
        if (n8 > n8max || v == 0) return;
        auto key = std::make_pair(n8, r2);
        auto it = c.find(key);
        if (it == c.end())
            c.emplace(key, v);
        else {
            it->second += v;
            if (it->second == 0) c.erase(it);
        }
    }
    JacobiSeries operator*(const JacobiSeries& o) const {
        JacobiSeries r(std::min(n8max, o.n8max));
        for (auto& [k1, v1] : c)
            for (auto& [k2, v2] : o.c)
                r.add(k1.first + k2.first, k1.second + k2.second, v1 * v2);
        return r;
    }
    JacobiSeries operator*(const QSeries8& o) const {
        JacobiSeries r(std::min(n8max, o.n8max));
        for (auto& [k1, v1] : c)
            for (int j = 0; j <= o.n8max; ++j)
                if (o.c[j] != 0) r.add(k1.first + j, k1.second, v1 * o.c[j]);
        return r;
    }
    JacobiSeries operator+(const JacobiSeries& o) const {
        JacobiSeries r(std::min(n8max, o.n8max));
        for (auto& [k, v] : c) r.add(k.first, k.second, v);
        for (auto& [k, v] : o.c) r.add(k.first, k.second, v);
        return r;
    }
    JacobiSeries operator-(const JacobiSeries& o) const {
        JacobiSeries r(std::min(n8max, o.n8max));
        for (auto& [k, v] : c) r.add(k.first, k.second, v);
        for (auto& [k, v] : o.c) r.add(k.first, k.second, -v);
        return r;
    }
    JacobiSeries operator*(const Rat& s) const {
        JacobiSeries r(n8max);
        for (auto& [k, v] : c) r.add(k.first, k.second, v * s);
        return r;
    }
};

// Divide by a q-series with nonzero leading term (valuation shift allowed).
inline JacobiSeries divide(const JacobiSeries& f, const QSeries8& g) {
    int v8 = g.valuation();
    if (v8 > g.n8max) throw std::invalid_argument("divide: zero divisor");
    Rat lead = g.c[v8];
    JacobiSeries r(std::min(f.n8max, g.n8max) - v8);
    // group f by n8; process output degrees ascending
    std::map<int, std::map<int, Rat>> out;  // n8 -> (r2 -> coeff)
    std::map<int, std::map<int, Rat>> fm;
    for (auto& [k, v] : f.c) fm[k.first][k.second] = v;
    for (int n8 = 0; n8 <= r.n8max; ++n8) {
        std::map<int, Rat> row;
        auto itf = fm.find(n8 + v8);
        if (itf != fm.end()) row = itf->second;
        for (auto& [m8, orow] : out) {
            int gidx = n8 + v8 - m8;
            if (gidx <= v8) break;
            if (gidx > g.n8max || g.c[gidx] == 0) continue;
            for (auto& [r2, ov] : orow) row[r2] -= g.c[gidx] * ov;
        }
        for (auto it = row.begin(); it != row.end();) {
            it->second /= lead;
            it = (it->second == 0) ? row.erase(it) : std::next(it);
        }
        if (!row.empty()) out[n8] = std::move(row);
    }
    for (auto& [n8, row] : out)
        for (auto& [r2, v] : row) r.add(n8, r2, v);
    return r;
}

// The four classical theta series in (tau, z); a runs over the integers
// with the stated parity, contributing q^{a^2/8} zeta^{a/2}.
inline JacobiSeries theta_qz(int which, int n8max) {
    JacobiSeries r(n8max);
    int amax = 0;
    while ((amax + 1) * (amax + 1) <= n8max) ++amax;
    for (int a = -amax; a <= amax; ++a) {
        bool odd = (a % 2 != 0);
        switch (which) {
            case 2:
                if (odd) r.add(a * a, a, 1);
                break;
            case 3:
                if (!odd) r.add(a * a, a, 1);
                break;
            case 4:
                if (!odd) r.add(a * a, a, (a / 2) % 2 == 0 ? 1 : -1);
                break;
            case 11:
                if (odd) r.add(a * a, a, ((a - 1) / 2) % 2 == 0 ? 1 : -1);
                break;
            default:
                throw std::invalid_argument("theta_qz: which in {2,3,4,11}");
        }
    }
    return r;
}

inline QSeries8 null_value(const JacobiSeries& f) {
    QSeries8 r(f.n8max);
    for (auto& [k, v] : f.c) r.c[k.first] += v;
    return r;
}

// Index-1 Jacobi form reduced to its c(D) data, D = 4n - r^2.
struct JacobiForm {
    int weight = 0;
    int dmax = 0;
    std::map<int, Rat> cD;  // D >= -1

    Rat c(const Int& D) const {
        if (D < -1) return 0;
        if (D > dmax) throw std::domain_error("JacobiForm: D beyond precision");
        auto it = cD.find((int)D.get_si());
        return it == cD.end() ? Rat(0) : it->second;
    }
};

inline JacobiForm collapse(const JacobiSeries& f, int weight) {
    JacobiForm out;
    out.weight = weight;
    // c(n, r) must depend on 4n - r^2 only; assert while collecting.
    // Guarantee completeness for all D <= dmax via r in {0, 1}.
    out.dmax = 4 * (f.n8max / 8) - 1;
    std::map<int, Rat> seen;
    for (auto& [k, v] : f.c) {
        if (k.first % 8 != 0 || k.second % 2 != 0)
            throw std::domain_error("collapse: not an integral Jacobi expansion");
        int n = k.first / 8, rr = k.second / 2;
        int D = 4 * n - rr * rr;
        auto it = seen.find(D);
        if (it == seen.end())
            seen.emplace(D, v);
        else if (it->second != v)
            throw std::domain_error("collapse: coefficients not a function of 4n - r^2");
    }
    // also confirm zero entries agree: for every D representable with a
    // stored nonzero somewhere, absent (n, r) with the same D means zero
    for (auto& [D, v] : seen) {
        for (int rr = 0; rr <= 1; ++rr) {
            if ((D + rr * rr) % 4 != 0) continue;
            int n = (D + rr * rr) / 4;
            if (8 * n > f.n8max) continue;
            auto it = f.c.find({8 * n, 2 * rr});
            Rat got = (it == f.c.end()) ? Rat(0) : it->second;
            if (got != v) throw std::domain_error("collapse: inconsistent zero pattern");
        }
        if (D <= out.dmax && v != 0) out.cD[D] = v;
    }
    return out;
}

// The standard weak Jacobi forms of index 1 and the weight 4, 6 Jacobi
// Eisenstein series, all to 4n - r^2 <= dmax.
struct JacobiBasis {
    JacobiForm w_minus2;  // weight -2: theta_11^2 / eta^6
    JacobiForm w_0;       // weight 0
    JacobiForm e4;        // E_{4,1}
    JacobiForm e6;        // E_{6,1}
    JacobiForm phi10;     // Delta * w_minus2 (cusp)
    JacobiForm phi12;     // Delta * w_0 (cusp)
};

inline JacobiBasis jacobi_basis(int dmax) {
    int n8 = 8 * ((dmax + 1) / 4 + 2);
    JacobiSeries t11 = theta_qz(11, n8);
    JacobiSeries wm2_series = divide(t11 * t11, eta6(n8));
    JacobiSeries w0_series(n8);
    for (int which : {2, 3, 4}) {
        JacobiSeries t = theta_qz(which, n8);
        w0_series = w0_series + divide(t * t, null_value(t) * null_value(t));
    }
    w0_series = w0_series * Rat(4);
    QSeries8 E4 = eisenstein_q(4, n8), E6 = eisenstein_q(6, n8), D = delta_q(n8);
    JacobiBasis b;
    b.w_minus2 = collapse(wm2_series, -2);
    b.w_0 = collapse(w0_series, 0);
    b.e4 = collapse((w0_series * E4 - wm2_series * E6) * Rat(1, 12), 4);
    b.e6 = collapse((w0_series * E6 - wm2_series * (E4 * E4)) * Rat(1, 12), 6);
    b.phi10 = collapse(wm2_series * D, 10);
    b.phi12 = collapse(w0_series * D, 12);
    return b;
}

// Maass lift of an index-1 Jacobi form of weight k to a degree-2 scalar
// expansion; const_term is placed at (0,0,0) after scaling.
inline ScalarExpansion maass_lift(const JacobiForm& phi, int tmax, const Rat& scale,
                                  const Rat& const_term) {
    int k = phi.weight;
    ScalarExpansion f;
    f.k = k;
    f.coset = Coset::even;
    f.tmax = tmax;
    f.min_doubled_trace = 0;
    for (const Index& red : enumerate(Coset::even, tmax)) {
        int n = red.nu1 / 2, m = red.nu2 / 2, r = red.rho / 2;
        if (n == 0 && m == 0 && r == 0) {
            if (const_term != 0) f.a[red] = const_term;
            continue;
        }
        Int g = gcd(gcd(Int(n), Int(m)), Int(std::abs(r)));
        Rat v(0);
        for (Int d = 1; d <= g; ++d) {
            if (g % d != 0) continue;
            Int D = (Int(4) * n * m - Int(r) * r) / (d * d);
            v += Rat(int_pow(d, k - 1)) * phi.c(D);
        }
        v *= scale;
        if (v != 0) f.a[red] = v;
    }
    return f;
}

// Route-B constructions of the four even-weight generators.
inline ScalarExpansion lift_generator(const std::string& name, int tmax) {
    int half = tmax / 2;
    int dmax = half * half + 1;
    JacobiBasis b = jacobi_basis(dmax);
    if (name == "phi4") return maass_lift(b.e4, tmax, 240, 1);
    if (name == "phi6") return maass_lift(b.e6, tmax, -504, 1);
    if (name == "chi10") return maass_lift(b.phi10, tmax, 1, 0);
    if (name == "chi12") return maass_lift(b.phi12, tmax, 1, 0);
    throw std::invalid_argument("lift_generator: unknown form " + name);
}

}  // namespace smf2
