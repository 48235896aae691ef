#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <utility>

#include "smf2/expansion.hpp"
#include "smf2/jacobi.hpp"
#include "smf2/linalg.hpp"
#include "smf2/theta.hpp"

namespace smf2 {

namespace detail {

inline ScalarExpansion theta_phi4(int tmax) {
    std::vector<ThetaCell> sum;
    for (const ThetaChar& c : even_characteristics()) {
        std::vector<ThetaChar> factors(8, c);
        accumulate(sum, theta_product(factors, tmax), 1);
    }
    ScalarExpansion f = extract(sum, 4 * tmax, 4, Coset::even, tmax);
    Rat c0 = f.coeff(Index{0, 0, 0});
    if (c0 == 0) throw std::domain_error("phi4: vanishing constant term");
    return f * (Rat(1) / c0);
}

inline ScalarExpansion theta_phi6(int tmax) {
    auto chars = even_characteristics();
    std::vector<ThetaCell> sum;
    for (const SignedTriple& t : syzygous_triples_signed()) {
        std::vector<ThetaChar> factors;
        for (int slot : t.chars)
            for (int rep = 0; rep < 4; ++rep) factors.push_back(chars[slot]);
        accumulate(sum, theta_product(factors, tmax), t.sign);
    }
    ScalarExpansion f = extract(sum, 4 * tmax, 6, Coset::even, tmax);
    Rat c0 = f.coeff(Index{0, 0, 0});
    if (c0 == 0) throw std::domain_error("phi6: vanishing constant term");
    return f * (Rat(1) / c0);
}

inline ScalarExpansion theta_chi5(int tmax) {
    std::vector<ThetaChar> factors = even_characteristics();
    ThetaGrid g = theta_product(factors, tmax);
    ScalarExpansion f = extract(g.raw(), 4 * tmax, 5, Coset::odd, tmax);
    f.min_doubled_trace = 2;
    Rat lead = f.coeff(Index{1, 1, 1});
    if (lead == 0) throw std::domain_error("chi5: vanishing leading coefficient");
    return f * (Rat(1) / lead);
}

inline ScalarExpansion theta_chi10(int tmax) {
    std::vector<ThetaChar> factors;
    for (const ThetaChar& c : even_characteristics()) {
        factors.push_back(c);
        factors.push_back(c);
    }
    ThetaGrid g = theta_product(factors, tmax);
    ScalarExpansion f = extract(g.raw(), 4 * tmax, 10, Coset::even, tmax);
    f.min_doubled_trace = 4;
    Rat lead = f.coeff(Index{2, 2, 2});
    if (lead == 0) throw std::domain_error("chi10: vanishing leading coefficient");
    return f * (Rat(1) / lead);
}

inline ScalarExpansion theta_sum24(int tmax) {
    std::vector<ThetaCell> sum;
    for (const ThetaChar& c : even_characteristics()) {
        std::vector<ThetaChar> factors(24, c);
        accumulate(sum, theta_product(factors, tmax), 1);
    }
    return extract(sum, 4 * tmax, 12, Coset::even, tmax);
}

ScalarExpansion theta_generator(const std::string& name, int tmax);

inline ScalarExpansion theta_chi12(int tmax) {
    // weight 12 is spanned by phi4^3, phi6^2 and the 24th-power sum; the
    // cusp member is cut out by vanishing at two singular indices and
    // normalized at (1,1,1)
    ScalarExpansion p4 = theta_generator("phi4", tmax);
    ScalarExpansion p6 = theta_generator("phi6", tmax);
    ScalarExpansion A = mul(mul(p4, p4), p4);
    ScalarExpansion B = mul(p6, p6);
    ScalarExpansion C = theta_sum24(tmax);
    Index s0{0, 0, 0}, s1{2, 0, 0}, lead{2, 2, 2};
    MatQ M(3, 3);
    int col = 0;
    for (const ScalarExpansion* f : {&A, &B, &C}) {
        M.at(0, col) = f->coeff(s0);
        M.at(1, col) = f->coeff(s1);
        M.at(2, col) = f->coeff(lead);
        ++col;
    }
    auto sol = solve(M, {Rat(0), Rat(0), Rat(1)});
    if (!sol) throw std::domain_error("chi12: singular system");
    ScalarExpansion f = add(add(A * (*sol)[0], B * (*sol)[1]), C * (*sol)[2]);
    f.k = 12;
    f.min_doubled_trace = 4;
    for (auto it = f.a.begin(); it != f.a.end();)
        it = (it->second == 0) ? f.a.erase(it) : std::next(it);
    return f;
}

inline ScalarExpansion theta_generator_impl(const std::string& name, int tmax) {
    if (name == "phi4") return theta_phi4(tmax);
    if (name == "phi6") return theta_phi6(tmax);
    if (name == "chi10") return theta_chi10(tmax);
    if (name == "chi12") return theta_chi12(tmax);
    if (name == "chi5") return theta_chi5(tmax);
    throw std::invalid_argument("igusa_generator: unknown form " + name);
}

inline ScalarExpansion theta_generator(const std::string& name, int tmax) {
    static std::map<std::pair<std::string, int>, ScalarExpansion> memo;
    auto key = std::make_pair(name, tmax);
    auto it = memo.find(key);
    if (it == memo.end()) it = memo.emplace(key, theta_generator_impl(name, tmax)).first;
    return it->second;
}

}  // namespace detail

// The five classical generators, built from theta constants.
inline ScalarExpansion igusa_generator(const std::string& name, int tmax) {
    if (tmax < 0) throw std::invalid_argument("igusa_generator: tmax < 0");
    return detail::theta_generator(name, tmax);
}

}  // namespace smf2
