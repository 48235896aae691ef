#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace smf2 {

using Int = mpz_class;
using Rat = mpq_class;

inline Int int_pow(const Int& base, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

// mpq_class's two-argument constructor does not reduce the fraction; this
// does.
inline Rat frac(const Int& num, const Int& den) {
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline Rat rat_pow(const Rat& base, long e) {
    if (e == 0) return Rat(1);
    if (e < 0) {
        if (base == 0) throw std::domain_error("rat_pow: zero to negative power");
        return Rat(1) / rat_pow(base, -e);
    }
    Rat r;
    mpz_pow_ui(r.get_num_mpz_t(), base.get_num().get_mpz_t(), (unsigned long)e);
    mpz_pow_ui(r.get_den_mpz_t(), base.get_den().get_mpz_t(), (unsigned long)e);
    r.canonicalize();
    return r;
}

// Falling factorial x(x-1)...(x-n+1).
inline Int falling_factorial(long x, unsigned n) {
    Int r(1);
    for (unsigned i = 0; i < n; ++i) r *= Int(x - (long)i);
    return r;
}

inline Int binomial(unsigned long n, unsigned long k) {
    Int r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

// Prime factorization by trial division.  Suitable for the desk-scale
// integers appearing in charpoly discriminants; throws if a cofactor
// beyond the trial bound remains composite-looking.
struct Factorization {
    int sign = 1;                        // -1, 0 or 1
    std::vector<std::pair<Int, unsigned>> factors;

    std::string str() const {
        if (sign == 0) return "0";
        std::ostringstream os;
        if (sign < 0) os << "-";
        if (factors.empty()) {
            os << "1";
            return os.str();
        }
        bool first = true;
        for (auto& [p, e] : factors) {
            if (!first) os << " * ";
            first = false;
            os << p.get_str();
            if (e > 1) os << "^" << e;
        }
        return os.str();
    }
};

inline Factorization factor_integer(Int n, unsigned long trial_bound = 1000000) {
    Factorization f;
    if (n == 0) {
        f.sign = 0;
        return f;
    }
    if (n < 0) {
        f.sign = -1;
        n = -n;
    }
    for (Int p = 2; p * p <= n && p <= (long)trial_bound; p += (p == 2 ? 1 : 2)) {
        unsigned e = 0;
        while (mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) {
            n /= p;
            ++e;
        }
        if (e) f.factors.emplace_back(p, e);
    }
    if (n > 1) {
        if (mpz_probab_prime_p(n.get_mpz_t(), 40) == 0)
            throw std::runtime_error("factor_integer: composite cofactor " + n.get_str());
        f.factors.emplace_back(n, 1);
    }
    return f;
}

// 64-bit FNV-1a, used for cache-file content checksums.
inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

// Seeded RNG for the randomized polynomial-identity checkers.
class RandomSource {
  public:
    explicit RandomSource(std::uint64_t seed) : eng_(seed) {}

    // Uniform integer in [-range, range], excluding 0 when nonzero is set.
    Int sample(long range, bool nonzero = false) {
        std::uniform_int_distribution<long> d(-range, range);
        long v = d(eng_);
        while (nonzero && v == 0) v = d(eng_);
        return Int(v);
    }

  private:
    std::mt19937_64 eng_;
};

inline std::string rat_str(const Rat& q) { return q.get_str(); }

inline Rat parse_rat(const std::string& s) {
    Rat q;
    if (q.set_str(s, 10) != 0) throw std::runtime_error("parse_rat: bad token '" + s + "'");
    q.canonicalize();
    return q;
}

}  // namespace smf2
