#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "smf2/cache.hpp"
#include "smf2/classical.hpp"
#include "smf2/structure.hpp"

using namespace smf2;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

struct TempFile {
    std::string path;
    explicit TempFile(std::string p) : path(std::move(p)) { std::remove(path.c_str()); }
    ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("scalar cache round-trips exactly") {
    TempFile tf("cache_test_scalar.txt");
    ScalarExpansion f = igusa_generator("chi5", 7);
    store_cache(tf.path, "chi5", f);
    CacheHeader h;
    ScalarExpansion g;
    REQUIRE(load_cache_scalar(tf.path, h, g));
    CHECK(h.name == "chi5");
    CHECK(h.j == 0);
    CHECK(h.k == 5);
    CHECK(h.coset == Coset::odd);
    CHECK(h.tmax == 7);
    CHECK(h.min_doubled_trace == 2);
    CHECK(g.a == f.a);
}

TEST_CASE("vector cache round-trips exactly") {
    TempFile tf("cache_test_vector.txt");
    VectorExpansion F = build_F10(8);
    store_cache(tf.path, "F10", F);
    CacheHeader h;
    VectorExpansion G;
    REQUIRE(load_cache(tf.path, h, G));
    CHECK(h.j == 6);
    CHECK(h.k == 10);
    CHECK(G.tmax == F.tmax);
    CHECK(G.a.size() == F.a.size());
    for (auto& [n, p] : F.a) CHECK(G.coeff(n) == p);
}

TEST_CASE("rewriting produces bit-identical files") {
    TempFile tf("cache_test_rewrite.txt");
    ScalarExpansion f = igusa_generator("phi4", 6);
    store_cache(tf.path, "phi4", f);
    std::string first = slurp(tf.path);
    store_cache(tf.path, "phi4", f);
    CHECK(slurp(tf.path) == first);
    // and a fresh computation serializes to the same bytes
    CacheHeader h;
    ScalarExpansion g;
    REQUIRE(load_cache_scalar(tf.path, h, g));
    store_cache(tf.path, "phi4", g);
    CHECK(slurp(tf.path) == first);
}

TEST_CASE("corruption is rejected") {
    TempFile tf("cache_test_corrupt.txt");
    ScalarExpansion f = igusa_generator("phi6", 6);
    store_cache(tf.path, "phi6", f);
    std::string text = slurp(tf.path);

    SECTION("flipped digit in the body") {
        auto pos = text.rfind("1");
        text[pos] = '2';
    }
    SECTION("truncated body") { text.resize(text.size() - 3); }
    SECTION("wrong version") { text[11] = '9'; }

    {
        std::ofstream out(tf.path, std::ios::trunc | std::ios::binary);
        out << text;
    }
    CacheHeader h;
    ScalarExpansion g;
    CHECK_THROWS(load_cache_scalar(tf.path, h, g));
}

TEST_CASE("absent file is a clean miss") {
    CacheHeader h;
    ScalarExpansion g;
    CHECK(!load_cache_scalar("does_not_exist_cache.txt", h, g));
}
