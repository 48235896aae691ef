#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>

#include "smf2/index.hpp"

using namespace smf2;

namespace {

Unimodular random_unimodular(std::mt19937_64& eng) {
    // random product of generators, stays unimodular by construction
    Unimodular u;
    std::uniform_int_distribution<int> pick(0, 2), shift(-3, 3);
    for (int i = 0; i < 6; ++i) {
        switch (pick(eng)) {
            case 0: u = u * Unimodular{0, 1, 1, 0}; break;
            case 1: u = u * Unimodular{1, 0, 0, -1}; break;
            default: u = u * Unimodular{1, shift(eng), 0, 1}; break;
        }
    }
    return u;
}

}  // namespace

TEST_CASE("act basics") {
    Index n{2, 2, 2};
    CHECK(act(Unimodular::identity(), n) == n);
    CHECK(act(Unimodular{1, 0, 0, -1}, Index{3, 5, 7}) == Index{3, 5, -7});
    // shear: conventional (1,0,0) -> (1,1,2)
    CHECK(act(Unimodular{1, 0, 1, 1}, Index{2, 0, 0}) == Index{2, 2, 4});
}

TEST_CASE("act preserves det16, coset and semi-positivity") {
    std::mt19937_64 eng(7);
    auto idx = enumerate(Coset::even, 6);
    auto odd = enumerate(Coset::odd, 5);
    idx.insert(idx.end(), odd.begin(), odd.end());
    for (const Index& n : idx) {
        Unimodular u = random_unimodular(eng);
        Index m = act(u, n);
        CHECK(m.det16() == n.det16());
        CHECK(m.semi_positive());
        CHECK(m.in_coset(n.coset()));
    }
}

TEST_CASE("act is a group action") {
    std::mt19937_64 eng(11);
    for (int i = 0; i < 50; ++i) {
        Unimodular u = random_unimodular(eng), w = random_unimodular(eng);
        Index n{2 * (int)(eng() % 5), 2 * (int)(eng() % 5), 0};
        n.rho = 2 * (int)(eng() % 3);
        if (!n.semi_positive()) continue;
        CHECK(act(u * w, n) == act(u, act(w, n)));
    }
}

TEST_CASE("reduce") {
    SECTION("already reduced is fixed") {
        auto [u, r] = reduce(Index{2, 2, 2});
        CHECK(r == Index{2, 2, 2});
        CHECK(act(u, Index{2, 2, 2}) == r);
    }
    SECTION("sign flip") {
        auto [u, r] = reduce(Index{2, 2, -2});
        CHECK(r == Index{2, 2, 2});
        CHECK(act(u, Index{2, 2, -2}) == r);
    }
    SECTION("conventional (12,8,4) and (12,8,-4) share a representative") {
        auto a = reduce(Index::from_conventional(12, 8, 4)).second;
        auto b = reduce(Index::from_conventional(12, 8, -4)).second;
        CHECK(a == b);
    }
    SECTION("idempotent and orbit-invariant") {
        std::mt19937_64 eng(3);
        for (const Index& n : enumerate(Coset::even, 8)) {
            auto [u, r] = reduce(n);
            CHECK(act(u, n) == r);
            CHECK(is_reduced(r));
            CHECK(reduce(r).second == r);
            for (int i = 0; i < 3; ++i) {
                Unimodular w = random_unimodular(eng);
                CHECK(reduce(act(w, n)).second == r);
            }
        }
        for (const Index& n : enumerate(Coset::odd, 7)) {
            auto [u, r] = reduce(n);
            CHECK(act(u, n) == r);
            CHECK(reduce(act(random_unimodular(eng), n)).second == r);
        }
    }
    SECTION("rejects non-semi-positive") {
        CHECK_THROWS(reduce(Index{-2, 0, 0}));
        CHECK_THROWS(reduce(Index{2, 2, 6}));
    }
}

TEST_CASE("enumerate") {
    CHECK(enumerate(Coset::even, 0) == std::vector<Index>{Index{0, 0, 0}});
    CHECK(enumerate(Coset::even, 2) ==
          std::vector<Index>{Index{0, 0, 0}, Index{2, 0, 0}, Index{0, 2, 0}});
    CHECK(enumerate(Coset::odd, 2) == std::vector<Index>{Index{1, 1, -1}, Index{1, 1, 1}});
    // brute-force cross-check on a box
    for (Coset c : {Coset::even, Coset::odd}) {
        std::set<std::array<int, 3>> brute;
        for (int nu1 = 0; nu1 <= 8; ++nu1)
            for (int nu2 = 0; nu2 + nu1 <= 8; ++nu2)
                for (int rho = -16; rho <= 16; ++rho) {
                    Index n{nu1, nu2, rho};
                    if (n.semi_positive() && n.in_coset(c)) brute.insert({nu1, nu2, rho});
                }
        auto got = enumerate(c, 8);
        CHECK(got.size() == brute.size());
        for (auto& n : got) CHECK(brute.count({n.nu1, n.nu2, n.rho}) == 1);
        CHECK(std::is_sorted(got.begin(), got.end()));
    }
}

TEST_CASE("partitions") {
    SECTION("trivial") {
        std::vector<std::vector<Index>> out;
        partitions(Index{0, 0, 0}, {SupportConstraint{}, SupportConstraint{}},
                   [&](const std::vector<Index>& t) { out.push_back(t); });
        REQUIRE(out.size() == 1);
        CHECK(out[0][0] == Index{0, 0, 0});
        CHECK(out[0][1] == Index{0, 0, 0});
    }
    SECTION("seven cusp slots cannot reach doubled trace 26") {
        std::vector<SupportConstraint> cs(7, SupportConstraint{Coset::even, 4, true});
        int count = 0;
        partitions(Index{14, 12, 0}, cs, [&](const std::vector<Index>&) { ++count; });
        CHECK(count == 0);
    }
    SECTION("matches brute force on small even targets") {
        auto all = enumerate(Coset::even, 6);
        for (const Index& n : all) {
            if (n.doubled_trace() > 6) continue;
            int brute = 0;
            for (const Index& a : enumerate(Coset::even, n.doubled_trace()))
                for (const Index& b : enumerate(Coset::even, n.doubled_trace()))
                    if (a + b == n) ++brute;
            int got = 0;
            partitions(n, {SupportConstraint{}, SupportConstraint{}},
                       [&](const std::vector<Index>& t) {
                           CHECK(t[0] + t[1] == n);
                           ++got;
                       });
            CHECK(got == brute);
        }
    }
    SECTION("odd+odd = even splitting") {
        // (1,1,1)+(1,1,1) is the only odd split of conventional (1,1,1)
        std::vector<SupportConstraint> cs(2, SupportConstraint{Coset::odd, 0, false});
        std::vector<std::vector<Index>> out;
        partitions(Index{2, 2, 2}, cs, [&](const std::vector<Index>& t) { out.push_back(t); });
        REQUIRE(out.size() == 1);
        CHECK(out[0][0] == Index{1, 1, 1});
        CHECK(out[0][1] == Index{1, 1, 1});
    }
    SECTION("constraints are honored and first-slot split is a partition of the stream") {
        Index n{6, 4, 2};
        std::vector<SupportConstraint> cs{SupportConstraint{Coset::even, 2, true},
                                          SupportConstraint{Coset::even, 0, false},
                                          SupportConstraint{Coset::even, 2, false}};
        int total = 0;
        partitions(n, cs, [&](const std::vector<Index>& t) {
            for (std::size_t i = 0; i < cs.size(); ++i) CHECK(cs[i].admits(t[i]));
            ++total;
        });
        int split_total = 0;
        for (const Index& first : partitions_first_slot(n, cs))
            partitions_with_first(n, cs, first, [&](const std::vector<Index>& t) {
                CHECK(t[0] == first);
                ++split_total;
            });
        CHECK(total > 0);
        CHECK(split_total == total);
    }
}
