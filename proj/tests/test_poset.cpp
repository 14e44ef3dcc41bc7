#include <random>
#include <utility>
#include <vector>

#include <gtest/gtest.h>

#include "semistar/hom_polynomial.hpp"
#include "semistar/oracle.hpp"
#include "semistar/poset.hpp"
#include "support/generators.hpp"
#include "support/order_isomorphism.hpp"

using namespace semistar;
using semistar::testing::diamond;
using semistar::testing::order_isomorphic;
using semistar::testing::random_poset;

TEST(Poset, RejectsNonPartialOrders) {
    EXPECT_THROW(Poset::from_relation(2, [](Index, Index) { return true; }), InvalidPosetError);
    EXPECT_THROW(Poset::from_relation(2, [](Index a, Index b) { return a != b; }), InvalidPosetError);
    // 0 <= 1 <= 2 without 0 <= 2
    EXPECT_THROW(Poset::from_relation(3, [](Index a, Index b) { return a == b || b == a + 1; }), InvalidPosetError);
    const std::vector<std::pair<Index, Index>> cycle{{0, 1}, {1, 0}};
    EXPECT_THROW(Poset::from_covers(2, cycle), InvalidPosetError);
}

TEST(Poset, ChainBasics) {
    EXPECT_EQ(chain(1).size(), 1U);
    const auto c5 = chain(5);
    EXPECT_EQ(c5.maximal_elements().size(), 1U);
    EXPECT_EQ(c5.minimal_elements().size(), 1U);
    EXPECT_TRUE(c5.is_chain());
    EXPECT_EQ(down_sets(chain(3)).size(), 4U);
    EXPECT_EQ(chain(0).size(), 0U);
    EXPECT_EQ(c5.covers().size(), 4U);
    EXPECT_EQ(c5.relation_size(), 15U);
}

TEST(Poset, OrdinalSum) {
    EXPECT_TRUE(order_isomorphic(ordinal_sum(chain(2), chain(3)), chain(5)));
    const auto d = diamond();
    EXPECT_TRUE(order_isomorphic(ordinal_sum(d, chain(0)), d));
    const auto v = ordinal_sum(antichain(2), chain(1));
    EXPECT_EQ(v.maximal_elements().size(), 1U);
    EXPECT_EQ(v.minimal_elements().size(), 2U);
    // lower operand first, all of it below the upper operand
    EXPECT_TRUE(v.leq(0, 2));
    EXPECT_TRUE(v.leq(1, 2));
}

TEST(Poset, Product) {
    const auto d = diamond();
    EXPECT_EQ(d.size(), 4U);
    EXPECT_EQ(d.minimal_elements().size(), 1U);
    EXPECT_EQ(d.maximal_elements().size(), 1U);
    EXPECT_EQ(d.covers().size(), 4U);
    EXPECT_FALSE(d.comparable(1, 2));

    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        const auto p = random_poset(rng, 4);
        EXPECT_TRUE(order_isomorphic(product(p, chain(1)), p));
    }
}

TEST(Poset, ProductMultipliesHomCounts) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 25; ++trial) {
        const auto r = random_poset(rng, 3);
        const auto p = random_poset(rng, 3);
        const auto q = random_poset(rng, 2);
        EXPECT_EQ(oracle::brute_count_hom(r, product(p, q)), oracle::brute_count_hom(r, p) * oracle::brute_count_hom(r, q));
        EXPECT_EQ(count_hom(r, product(p, q)), count_hom(r, p) * count_hom(r, q));
    }
}

TEST(Poset, DownSets) {
    for (std::size_t n = 0; n <= 6; ++n) EXPECT_EQ(down_sets(chain(n)).size(), n + 1);
    for (std::size_t k = 0; k <= 6; ++k) EXPECT_EQ(down_sets(antichain(k)).size(), std::size_t{1} << k);
    EXPECT_EQ(down_sets(diamond()).size(), 6U);
    for (const auto& s : down_sets(diamond())) EXPECT_TRUE(diamond().is_down_set(s));
    EXPECT_THROW(down_sets(antichain(25)), EnumerationLimitError);
}

TEST(Poset, EnumHom) {
    const auto d = diamond();
    EXPECT_EQ(enum_hom(chain(1), d).size(), d.size());
    EXPECT_EQ(enum_hom(d, chain(1)).size(), 1U);
    const auto maps = enum_hom(chain(2), chain(2));
    ASSERT_EQ(maps.size(), 3U);
    EXPECT_EQ(maps[0].image, (std::vector<Index>{0, 0}));
    EXPECT_EQ(maps[1].image, (std::vector<Index>{0, 1}));
    EXPECT_EQ(maps[2].image, (std::vector<Index>{1, 1}));
    for (const auto& m : enum_hom(d, chain(3))) EXPECT_TRUE(is_order_preserving(d, chain(3), m.image));
    EXPECT_THROW(enum_hom(antichain(8), chain(8), 1000), EnumerationLimitError);
}

TEST(Poset, CountHomExamples) {
    EXPECT_EQ(count_hom(chain(2), chain(3)), 6);
    for (std::size_t n = 1; n <= 6; ++n) EXPECT_EQ(count_hom(antichain(2), chain(n)), Integer(n * n));
    EXPECT_EQ(count_hom(diamond(), chain(2)), 6);
    EXPECT_EQ(oracle::brute_count_hom(diamond(), chain(2)), 6);
    EXPECT_EQ(count_hom(chain(0), chain(3)), 1);
    EXPECT_EQ(count_hom(chain(2), chain(0)), 0);
}

TEST(Poset, CountHomMatchesBruteForceOnRandomPairs) {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<std::size_t> size(1, 5);
    for (int trial = 0; trial < 200; ++trial) {
        const auto p = random_poset(rng, size(rng));
        const auto q = random_poset(rng, size(rng));
        EXPECT_EQ(count_hom(p, q), oracle::brute_count_hom(p, q));
        EXPECT_EQ(count_hom(p, q), Integer(enum_hom(p, q).size()));
    }
}

TEST(Poset, CountHomIntoLargeChain) {
    // binomial(n + k - 1, k) maps from a k-chain to an n-chain
    EXPECT_EQ(count_hom(chain(3), chain(40)), 11480);
    EXPECT_EQ(count_hom(antichain(3), chain(40)), 64000);
}

TEST(Poset, CountHomRestricted) {
    const auto target = chain(4);
    std::vector<Poset::Bits> allowed(2, Poset::Bits(4));
    allowed[0].set(0);
    allowed[0].set(1);
    allowed[1].set();
    // bottom sent into {0,1}: 4 + 3 choices for the top
    EXPECT_EQ(count_hom_restricted(chain(2), target, allowed), 7);
}

TEST(HomPolynomial, Chains) {
    EXPECT_EQ(hom_polynomial(chain(2), chain(0)), binomial_order_poly(2));
    EXPECT_EQ(hom_polynomial(chain(3), chain(0)), binomial_order_poly(3));
    EXPECT_EQ(hom_polynomial(chain(1), chain(1)), MultiPoly::variable("n") + MultiPoly::constant(1));
    EXPECT_EQ(binomial_order_poly(2).to_string(), "1/2*n^2 + 1/2*n");
    EXPECT_EQ(binomial_order_poly(3).to_string(), "1/6*n^3 + 1/2*n^2 + 1/3*n");
    for (unsigned k = 1; k <= 5; ++k) EXPECT_EQ(order_polynomial(chain(k)), binomial_order_poly(k));
}

TEST(HomPolynomial, MatchesDirectCounts) {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 15; ++trial) {
        const auto p = random_poset(rng, 1 + trial % 4);
        const auto q = random_poset(rng, trial % 3);
        const auto poly = hom_polynomial(p, q);
        EXPECT_LE(poly.total_degree(), static_cast<int>(p.size()));
        for (std::size_t n = 0; n <= 7; ++n) {
            EXPECT_EQ(poly.evaluate({{"n", Rational(n)}}), Rational(count_hom(p, ordinal_sum(q, chain(n)))));
        }
    }
}

TEST(Poset, InducedAndDual) {
    const auto d = diamond();
    const std::vector<Index> sides{1, 2};
    EXPECT_TRUE(order_isomorphic(d.induced(sides), antichain(2)));
    EXPECT_TRUE(order_isomorphic(d.dual(), d));
    EXPECT_TRUE(order_isomorphic(chain(4).dual(), chain(4)));
    const auto v = ordinal_sum(antichain(2), chain(1));
    EXPECT_FALSE(order_isomorphic(v.dual(), v));
}

TEST(Poset, LinearExtension) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const auto p = random_poset(rng, 6);
        const auto order = p.linear_extension();
        std::vector<std::size_t> pos(p.size());
        for (std::size_t k = 0; k < order.size(); ++k) pos[order[k]] = k;
        for (const auto& [lo, hi] : p.covers()) EXPECT_LT(pos[lo], pos[hi]);
    }
}
