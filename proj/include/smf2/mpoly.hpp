#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "smf2/rational.hpp"

namespace smf2 {

// Sparse multivariate polynomial over Q with a fixed number of variables.
// Deterministic term order (graded by the map's lexicographic key).
class MPoly {
  public:
    using Expo = std::vector<int>;

    MPoly() : nvars_(0) {}
    explicit MPoly(int nvars) : nvars_(nvars) {}

    static MPoly constant(int nvars, const Rat& c) {
        MPoly p(nvars);
        if (c != 0) p.terms_[Expo(nvars, 0)] = c;
        return p;
    }
    static MPoly variable(int nvars, int i, const Rat& c = Rat(1)) {
        MPoly p(nvars);
        Expo e(nvars, 0);
        e[i] = 1;
        if (c != 0) p.terms_[e] = c;
        return p;
    }

    int nvars() const { return nvars_; }
    bool zero() const { return terms_.empty(); }
    const std::map<Expo, Rat>& terms() const { return terms_; }

    void add_term(const Expo& e, const Rat& c) {
        if (c == 0) return;
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            terms_.emplace(e, c);
        } else {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    MPoly& operator+=(const MPoly& o) {
        check(o);
        for (auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }
    MPoly& operator-=(const MPoly& o) {
        check(o);
        for (auto& [e, c] : o.terms_) add_term(e, -c);
        return *this;
    }
    MPoly operator+(const MPoly& o) const {
        MPoly r = *this;
        r += o;
        return r;
    }
    MPoly operator-(const MPoly& o) const {
        MPoly r = *this;
        r -= o;
        return r;
    }
    MPoly operator-() const {
        MPoly r(nvars_);
        for (auto& [e, c] : terms_) r.terms_[e] = -c;
        return r;
    }
    MPoly operator*(const MPoly& o) const {
        check(o);
        MPoly r(nvars_);
        for (auto& [e1, c1] : terms_)
            for (auto& [e2, c2] : o.terms_) {
                Expo e(nvars_);
                for (int i = 0; i < nvars_; ++i) e[i] = e1[i] + e2[i];
                r.add_term(e, c1 * c2);
            }
        return r;
    }
    MPoly operator*(const Rat& c) const {
        MPoly r(nvars_);
        if (c == 0) return r;
        for (auto& [e, cc] : terms_) r.terms_[e] = cc * c;
        return r;
    }
    bool operator==(const MPoly& o) const { return nvars_ == o.nvars_ && terms_ == o.terms_; }

    MPoly pow(unsigned e) const {
        MPoly r = constant(nvars_, 1);
        for (unsigned i = 0; i < e; ++i) r = r * *this;
        return r;
    }

    MPoly derivative(int var) const {
        MPoly r(nvars_);
        for (auto& [e, c] : terms_) {
            if (e[var] == 0) continue;
            Expo d = e;
            d[var] -= 1;
            r.add_term(d, c * e[var]);
        }
        return r;
    }

    int total_degree() const {
        int d = -1;
        for (auto& [e, c] : terms_) {
            int s = 0;
            for (int v : e) s += v;
            if (s > d) d = s;
        }
        return d;
    }
    bool homogeneous_of_degree(int d) const {
        for (auto& [e, c] : terms_) {
            int s = 0;
            for (int v : e) s += v;
            if (s != d) return false;
        }
        return true;
    }

    // Substitute each variable i by subs[i] (all in the same target ring).
    MPoly substitute(const std::vector<MPoly>& subs) const {
        if ((int)subs.size() != nvars_) throw std::invalid_argument("substitute: arity");
        int target_nvars = subs.empty() ? 0 : subs[0].nvars();
        MPoly r(target_nvars);
        for (auto& [e, c] : terms_) {
            MPoly t = MPoly::constant(target_nvars, c);
            for (int i = 0; i < nvars_; ++i)
                for (int k = 0; k < e[i]; ++k) t = t * subs[i];
            r += t;
        }
        return r;
    }

    Rat evaluate(const std::vector<Rat>& x) const {
        if ((int)x.size() != nvars_) throw std::invalid_argument("evaluate: arity");
        Rat r(0);
        for (auto& [e, c] : terms_) {
            Rat t = c;
            for (int i = 0; i < nvars_; ++i)
                for (int k = 0; k < e[i]; ++k) t *= x[i];
            r += t;
        }
        return r;
    }

    std::string str(const std::vector<std::string>& names) const {
        if (terms_.empty()) return "0";
        std::string out;
        for (auto& [e, c] : terms_) {
            if (!out.empty()) out += " + ";
            out += c.get_str();
            for (int i = 0; i < nvars_; ++i)
                if (e[i]) {
                    out += "*" + names[i];
                    if (e[i] > 1) out += "^" + std::to_string(e[i]);
                }
        }
        return out;
    }

  private:
    void check(const MPoly& o) const {
        if (nvars_ != o.nvars_) throw std::invalid_argument("MPoly: arity mismatch");
    }

    int nvars_;
    std::map<Expo, Rat> terms_;
};

inline MPoly operator*(const Rat& c, const MPoly& p) { return p * c; }

}  // namespace smf2
