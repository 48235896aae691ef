#include <catch2/catch_amalgamated.hpp>

#include "smf2/hecke.hpp"
#include "smf2/structure.hpp"

using namespace smf2;

namespace {

// eigenvalue of a scalar eigenform, with full proportionality checked
Rat scalar_eigenvalue(const ScalarExpansion& f, int p) {
    ScalarExpansion Tf = hecke_scalar(f, p);
    Rat lambda;
    bool have = false;
    for (const Index& n : enumerate(Coset::even, Tf.tmax)) {
        Rat x = f.coeff(n), y = Tf.coeff(n);
        if (x == 0) {
            REQUIRE(y == 0);
            continue;
        }
        if (!have) {
            lambda = y / x;
            have = true;
        } else {
            REQUIRE(y == lambda * x);
        }
    }
    REQUIRE(have);
    return lambda;
}

}  // namespace

TEST_CASE("T(p) on the scalar Eisenstein series") {
    ScalarExpansion p4 = igusa_generator("phi4", 12);
    ScalarExpansion p6 = igusa_generator("phi6", 12);
    CHECK(scalar_eigenvalue(p4, 2) == 45);
    CHECK(scalar_eigenvalue(p6, 2) == 561);
    ScalarExpansion p4b = igusa_generator("phi4", 18);
    ScalarExpansion p6b = igusa_generator("phi6", 18);
    CHECK(scalar_eigenvalue(p4b, 3) == 280);
    CHECK(scalar_eigenvalue(p6b, 3) == 20008);
}

TEST_CASE("T(p) on the scalar cusp forms matches the lift eigenvalue formula") {
    // lambda(p) = a_f(p) + p^(k-2)(p+1) for the lift of the elliptic form f
    ScalarExpansion c10 = igusa_generator("chi10", 12);
    ScalarExpansion c12 = igusa_generator("chi12", 12);
    CHECK(scalar_eigenvalue(c10, 2) == -528 + 256 * 3);    // a(2) of the weight 18 form
    CHECK(scalar_eigenvalue(c12, 2) == -288 + 1024 * 3);   // a(2) of the weight 22 form
    ScalarExpansion c10b = igusa_generator("chi10", 18);
    ScalarExpansion c12b = igusa_generator("chi12", 18);
    CHECK(scalar_eigenvalue(c10b, 3) == -4284 + 6561 * 4);
    CHECK(scalar_eigenvalue(c12b, 3) == -128844 + 59049 * 4);
}

TEST_CASE("T(p) is linear") {
    ScalarExpansion p4 = igusa_generator("phi4", 8);
    ScalarExpansion p6 = igusa_generator("phi6", 8);
    ScalarExpansion f = mul(p4, p6);
    ScalarExpansion g = igusa_generator("chi10", 8) * Rat(5);
    ScalarExpansion s = hecke_scalar(add(f, g), 2);
    ScalarExpansion t = add(hecke_scalar(f, 2), hecke_scalar(g, 2));
    CHECK(equal_to_bound(s, t, s.tmax));
}

TEST_CASE("T(2) on the two-dimensional weight (6,10) space") {
    VectorExpansion F10 = build_F10(16);
    VectorExpansion T10 = hecke_vector(F10, 2);
    HeckeMatrix H = matrix_on_basis({F10, T10}, 2, {"F10", "T2F10"});
    // X^2 - 57192 X + 93260160 = (X - 1680)(X - 55512)
    REQUIRE(H.charpoly_int.size() == 3);
    CHECK(H.charpoly_int[0] == 1);
    CHECK(H.charpoly_int[1] == -57192);
    CHECK(H.charpoly_int[2] == 93260160);
}

TEST_CASE("T(2) on the weight (6,12) cusp space, with discriminant") {
    VectorExpansion F12 = build_F12(16);
    VectorExpansion T12 = hecke_vector(F12, 2);
    HeckeMatrix H = matrix_on_basis({F12, T12}, 2);
    REQUIRE(H.charpoly_int.size() == 3);
    CHECK(H.charpoly_int[1] == -22368);
    CHECK(H.charpoly_int[2] == 57231360);
    CHECK(charpoly_discriminant(H.charpoly_int).str() == "2^10 * 3^2 * 7^2 * 601");
}

TEST_CASE("eigenvalues of the odd-weight generators") {
    GeneratorSet g = build_generators(12);
    CHECK(eigenvalue_of(g.form(11), 2) == -11616);
    CHECK(eigenvalue_of(g.form(13), 2) == -24000);
    CHECK(eigenvalue_of(g.form(11), 3) == -106488);
    CHECK(eigenvalue_of(g.form(13), 3) == -8505000);
    CHECK_THROWS(eigenvalue_of(g.form(15), 2));  // two-dimensional: not an eigenform
}

TEST_CASE("insufficient precision is reported, not silently truncated") {
    VectorExpansion F10 = build_F10(6);
    CHECK_THROWS(hecke_vector(F10, 7));
}
