#include "doctest.h"

#include "bgc/alphabet.hpp"
#include "bgc/rng.hpp"

using namespace bgc;

TEST_CASE("mod-2^k vector addition") {
    Alphabet a2(2);
    CHECK(add(a2, {1, 3}, {2, 3}) == GradientVec{3, 2});

    Alphabet a16(16);
    CHECK(add(a16, {65535}, {1}) == GradientVec{0});

    GradientVec v{5, 0, 65535, 123};
    CHECK(add(a16, v, GradientVec(4, 0)) == v);

    CHECK_THROWS_AS(add(a2, {1, 2}, {1}), ConfigError);
}

TEST_CASE("bits per symbol") {
    CHECK(bits_per_symbol(Alphabet(16)) == 16);
    CHECK(bits_per_symbol(Alphabet(1)) == 1);
    CHECK(bits_per_symbol(Alphabet(8)) == 8);
    CHECK(Alphabet(16).size() == 65536);
    CHECK_THROWS_AS(Alphabet(0), ConfigError);
    CHECK_THROWS_AS(Alphabet(32), ConfigError);
}

TEST_CASE("group laws, exhaustive for small k") {
    for (int k = 1; k <= 4; ++k) {
        Alphabet a(k);
        const Symbol n = static_cast<Symbol>(a.size());
        for (Symbol x = 0; x < n; ++x) {
            CHECK(a.add(x, 0) == x);
            CHECK(a.add(x, a.neg(x)) == 0);
            for (Symbol y = 0; y < n; ++y) {
                CHECK(a.add(x, y) == a.add(y, x));
                CHECK(a.contains(a.add(x, y)));
                for (Symbol z = 0; z < n; ++z)
                    CHECK(a.add(a.add(x, y), z) == a.add(x, a.add(y, z)));
            }
        }
    }
}

TEST_CASE("group laws, randomized for k = 16") {
    Alphabet a(16);
    Rng rng(99);
    for (int t = 0; t < 2000; ++t) {
        Symbol x = a.mask(rng.next()), y = a.mask(rng.next()), z = a.mask(rng.next());
        CHECK(a.add(a.add(x, y), z) == a.add(x, a.add(y, z)));
        CHECK(a.add(x, y) == a.add(y, x));
        CHECK(a.add(x, 0) == x);
        CHECK(a.sub(a.add(x, y), y) == x);
    }
}

TEST_CASE("sum_range basics") {
    Alphabet a(8);
    std::vector<GradientVec> vals{{7}, {11}, {250}};
    CHECK(sum_range(a, vals, 1, 1) == GradientVec{7});
    CHECK(sum_range(a, vals, 1, 3) == add(a, sum_range(a, vals, 1, 2), sum_range(a, vals, 3, 3)));
    CHECK_THROWS_AS(sum_range(a, vals, 2, 1), ConfigError);
    CHECK_THROWS_AS(sum_range(a, vals, 1, 4), ConfigError);
}

TEST_CASE("sum_range equals a plain fold, and splits at every midpoint") {
    Alphabet a(8);
    Rng rng(1234);
    std::vector<GradientVec> vals;
    for (int i = 0; i < 8; ++i) {
        GradientVec v(3);
        for (auto& x : v) x = a.mask(rng.next());
        vals.push_back(v);
    }

    // independent oracle: coordinate-wise integer fold reduced mod 2^k
    GradientVec expect(3, 0);
    for (const auto& v : vals)
        for (int c = 0; c < 3; ++c)
            expect[c] = static_cast<Symbol>((expect[c] + v[c]) % a.size());
    CHECK(sum_range(a, vals, 1, 8) == expect);

    for (int mid = 1; mid < 8; ++mid)
        CHECK(sum_range(a, vals, 1, 8) ==
              add(a, sum_range(a, vals, 1, mid), sum_range(a, vals, mid + 1, 8)));
}

TEST_CASE("gradient store range sums") {
    Alphabet a(8);
    Rng rng(5);
    GradientStore g = GradientStore::random(10, 4, a, rng);
    GradientVec manual(4, 0);
    for (int i = 3; i <= 7; ++i) add_in_place(a, manual, g.row(i));
    CHECK(g.sum_range(a, 3, 7) == manual);
    CHECK_THROWS_AS(g.sum_range(a, 0, 2), ConfigError);
    CHECK_THROWS_AS(g.row(11), ConfigError);
}
