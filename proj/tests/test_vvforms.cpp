#include <catch2/catch_amalgamated.hpp>

#include "smf2/classical.hpp"
#include "smf2/structure.hpp"
#include "smf2/vvforms.hpp"

using namespace smf2;

namespace {

bool same_to_common_bound(const VectorExpansion& a, const VectorExpansion& b) {
    if (a.j != b.j || a.k != b.k || a.coset != b.coset) return false;
    int bound = std::min(a.tmax, b.tmax);
    for (const Index& n : enumerate(Coset::even, bound))
        if (!(a.coeff(n) == b.coeff(n))) return false;
    return true;
}

SymMatQ as_matrix(const HomogPoly& p) {
    // inverse of SymMatQ::contract on degree-2 values
    return {p.c[0], p.c[1] / 2, p.c[2]};
}

// convolution of two weight-(2,*) expansions under the cross product
VectorExpansion cross_convolve(const VectorExpansion& f, const VectorExpansion& g) {
    VectorExpansion r;
    r.j = 2;
    r.k = f.k + g.k + 1;
    r.coset = f.coset + g.coset;
    r.tmax = std::min(f.tmax + g.min_doubled_trace, g.tmax + f.min_doubled_trace);
    r.min_doubled_trace = f.min_doubled_trace + g.min_doubled_trace;
    for (auto& [n1, p1] : f.a)
        for (auto& [n2, p2] : g.a) {
            Index n = n1 + n2;
            if (n.doubled_trace() > r.tmax) continue;
            r.add(n, cross(as_matrix(p1), as_matrix(p2)).contract());
        }
    return r;
}

}  // namespace

TEST_CASE("triple operator output on (phi4, phi4, phi4) vanishes") {
    MPoly p = elliptic_rc(4, 5, 5);
    RCType type{4, 4, 4};
    RCCandidate P = m_op(p, type);
    REQUIRE(is_homogeneous(P, 6, 1));
    REQUIRE(is_harmonic(P, type));
    ScalarExpansion p4 = igusa_generator("phi4", 16);
    VectorExpansion F = rc_apply(P, {p4, p4, p4}, type);
    CHECK(F.j == 6);
    CHECK(F.k == 13);
    CHECK(F.tmax >= 16);
    CHECK(F.zero());
}

TEST_CASE("the weight (6,10) and (6,12) cusp forms from (phi4, phi6)") {
    VectorExpansion F10 = build_F10(8);
    CHECK(F10.j == 6);
    CHECK(F10.k == 10);
    CHECK(!F10.zero());
    // F10 mixes the cusp and Klingen components of the weight (6,10) space,
    // so it is not cuspidal itself
    CHECK(!is_cusp(F10));
    CHECK(check_equivariance(F10));

    VectorExpansion F12 = build_F12(8);
    CHECK(F12.j == 6);
    CHECK(F12.k == 12);
    CHECK(!F12.zero());
    CHECK(is_cusp(F12));
    CHECK(check_equivariance(F12));
}

TEST_CASE("Satoh bracket basics") {
    ScalarExpansion p4 = igusa_generator("phi4", 8);
    ScalarExpansion p6 = igusa_generator("phi6", 8);
    VectorExpansion B = satoh_bracket(p4, p6);
    CHECK(B.j == 2);
    CHECK(B.k == 10);
    CHECK(!B.zero());
    CHECK(check_equivariance(B));
    // antisymmetry and self-annihilation
    VectorExpansion Bneg = satoh_bracket(p6, p4);
    for (auto& [n, p] : B.a) CHECK(Bneg.coeff(n) == -p);
    CHECK(satoh_bracket(p4, p4).zero());
}

TEST_CASE("cross product of Satoh brackets with a common slot is divisible by it") {
    ScalarExpansion p4 = igusa_generator("phi4", 10);
    ScalarExpansion p6 = igusa_generator("phi6", 10);
    ScalarExpansion c10 = igusa_generator("chi10", 10);
    VectorExpansion F = cross_convolve(satoh_bracket(p4, p6), satoh_bracket(p4, c10));
    CHECK(F.k == 2 * 4 + 6 + 10 + 1);
    CHECK(check_equivariance(F));
    VectorExpansion Q = scal_divide(F, p4);
    CHECK(Q.k == F.k - 4);
    CHECK(check_equivariance(Q));
    CHECK(same_to_common_bound(scal_mul(p4, Q), F));
}

TEST_CASE("bracket output is cuspidal and linear") {
    ScalarExpansion p4 = igusa_generator("phi4", 8);
    VectorExpansion F10 = build_F10(8);
    VectorExpansion B = bracket(F10, p4);
    CHECK(B.j == 6);
    CHECK(B.k == 15);
    CHECK(!B.zero());
    CHECK(is_cusp(B));
    CHECK(check_equivariance(B));
    VectorExpansion scaled = bracket(lincomb({Rat(3)}, {F10}), p4);
    CHECK(same_to_common_bound(scaled, lincomb({Rat(3)}, {B})));
}

TEST_CASE("scal_mul and scal_divide round-trip") {
    ScalarExpansion p4 = igusa_generator("phi4", 8);
    VectorExpansion F10 = build_F10(8);
    VectorExpansion back = scal_divide(scal_mul(p4, F10), p4);
    CHECK(same_to_common_bound(back, F10));
}

TEST_CASE("rc_apply rejects miscalibrated input") {
    ScalarExpansion p4 = igusa_generator("phi4", 4);
    ScalarExpansion p6 = igusa_generator("phi6", 4);
    auto space = solve_rc_space(6, 0, {4, 6});
    REQUIRE(!space.empty());
    // forms in the wrong slots no longer match the type
    CHECK_THROWS(rc_apply(space[0], {p6, p4}, {4, 6}));
    CHECK_THROWS(rc_apply(space[0], {p4, p6, p6}, {4, 6}));
}
