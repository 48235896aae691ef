#pragma once

#include <stdexcept>
#include <vector>

#include "smf2/rational.hpp"

namespace smf2 {

// Homogeneous polynomial of degree j in (x, y); basis order x^j, x^{j-1}y, ..., y^j.
struct HomogPoly {
    int j = 0;
    std::vector<Rat> c;  // length j+1, c[i] multiplies x^{j-i} y^i

    HomogPoly() : c(1, Rat(0)) {}
    explicit HomogPoly(int degree) : j(degree), c(degree + 1, Rat(0)) {
        if (degree < 0) throw std::invalid_argument("HomogPoly: negative degree");
    }
    static HomogPoly monomial(int degree, int ydeg, const Rat& coeff = Rat(1)) {
        HomogPoly p(degree);
        p.c[ydeg] = coeff;
        return p;
    }

    bool zero() const {
        for (auto& v : c)
            if (v != 0) return false;
        return true;
    }
    bool operator==(const HomogPoly& o) const { return j == o.j && c == o.c; }

    HomogPoly& operator+=(const HomogPoly& o) {
        if (j != o.j) throw std::invalid_argument("HomogPoly: degree mismatch in +");
        for (int i = 0; i <= j; ++i) c[i] += o.c[i];
        return *this;
    }
    HomogPoly operator+(const HomogPoly& o) const {
        HomogPoly r = *this;
        r += o;
        return r;
    }
    HomogPoly operator-(const HomogPoly& o) const {
        HomogPoly r = *this;
        for (int i = 0; i <= j; ++i) r.c[i] -= o.c[i];
        return r;
    }
    HomogPoly operator-() const {
        HomogPoly r = *this;
        for (auto& v : r.c) v = -v;
        return r;
    }
    HomogPoly operator*(const Rat& s) const {
        HomogPoly r = *this;
        for (auto& v : r.c) v *= s;
        return r;
    }
    HomogPoly operator*(const HomogPoly& o) const {
        HomogPoly r(j + o.j);
        for (int a = 0; a <= j; ++a) {
            if (c[a] == 0) continue;
            for (int b = 0; b <= o.j; ++b) {
                if (o.c[b] == 0) continue;
                r.c[a + b] += c[a] * o.c[b];
            }
        }
        return r;
    }

    // Second partials; degree drops by 2 (requires j >= 2 for nonzero result).
    HomogPoly dxx() const {
        HomogPoly r(j >= 2 ? j - 2 : 0);
        for (int i = 0; i + 2 <= j; ++i) r.c[i] = c[i] * (j - i) * (j - i - 1);
        return r;
    }
    HomogPoly dyy() const {
        HomogPoly r(j >= 2 ? j - 2 : 0);
        for (int i = 2; i <= j; ++i) r.c[i - 2] = c[i] * i * (i - 1);
        return r;
    }
    HomogPoly dxy() const {
        HomogPoly r(j >= 2 ? j - 2 : 0);
        for (int i = 1; i + 1 <= j; ++i) r.c[i - 1] = c[i] * i * (j - i);
        return r;
    }

    // p(a x + c y, b x + d y): substitution (x,y) -> (x,y) * (a,b;c,d).
    HomogPoly substitute_rows(const Rat& a, const Rat& b, const Rat& cc, const Rat& d) const {
        HomogPoly r(j);
        // precompute (a x + c y)^m and (b x + d y)^m coefficient tables
        std::vector<std::vector<Rat>> P1(j + 1), P2(j + 1);
        P1[0] = {Rat(1)};
        P2[0] = {Rat(1)};
        for (int m = 1; m <= j; ++m) {
            P1[m].assign(m + 1, Rat(0));
            P2[m].assign(m + 1, Rat(0));
            for (int i = 0; i < m; ++i) {
                P1[m][i] += P1[m - 1][i] * a;
                P1[m][i + 1] += P1[m - 1][i] * cc;
                P2[m][i] += P2[m - 1][i] * b;
                P2[m][i + 1] += P2[m - 1][i] * d;
            }
        }
        for (int i = 0; i <= j; ++i) {
            if (c[i] == 0) continue;
            const auto& u = P1[j - i];
            const auto& v = P2[i];
            for (int s = 0; s <= j - i; ++s) {
                if (u[s] == 0) continue;
                for (int t = 0; t <= i; ++t) {
                    if (v[t] == 0) continue;
                    r.c[s + t] += c[i] * u[s] * v[t];
                }
            }
        }
        return r;
    }

    Rat evaluate(const Rat& x, const Rat& y) const {
        Rat r(0), xp(1);
        std::vector<Rat> ypow(j + 1);
        ypow[0] = 1;
        for (int i = 1; i <= j; ++i) ypow[i] = ypow[i - 1] * y;
        for (int i = j; i >= 0; --i) {
            if (c[i] != 0) r += c[i] * xp * ypow[i];
            xp *= x;
        }
        return r;
    }
};

inline HomogPoly operator*(const Rat& s, const HomogPoly& p) { return p * s; }

// det(u)^k * p((x,y) u) -- the weight-(j,k) representation action.
inline HomogPoly rho_apply(const Rat& a, const Rat& b, const Rat& c, const Rat& d, int k,
                           const HomogPoly& p) {
    Rat det = a * d - b * c;
    if (det == 0) throw std::domain_error("rho_apply: singular matrix");
    return rat_pow(det, k) * p.substitute_rows(a, b, c, d);
}

// The W(r) determinant operator on H_j: multiplication monomials are applied
// after the second derivatives.
inline HomogPoly w_apply(const Rat& r11, const Rat& r12, const Rat& r22, const HomogPoly& p) {
    if (p.j < 2) throw std::domain_error("w_apply: degree must be >= 2");
    HomogPoly pxx = p.dxx(), pxy = p.dxy(), pyy = p.dyy();
    auto mono = [&](int xd, int yd, const HomogPoly& q) {
        return HomogPoly::monomial(xd + yd, yd) * q;
    };
    HomogPoly out(p.j);
    out += r11 * (-mono(1, 1, pyy) - mono(2, 0, pxy));
    out += -r12 * (mono(0, 2, pyy) - mono(2, 0, pxx));
    out += r22 * (mono(0, 2, pxy) + mono(1, 1, pxx));
    return out;
}

}  // namespace smf2
