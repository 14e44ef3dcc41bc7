#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "semistar/oracle.hpp"
#include "semistar/spectrum.hpp"
#include "support/generators.hpp"
#include "support/order_isomorphism.hpp"

using namespace semistar;
using semistar::testing::diamond;
using semistar::testing::order_isomorphic;

namespace {

std::string read_sample(const std::string& name) {
    std::ifstream in(std::string(SEMISTAR_SAMPLES) + "/" + name);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::string> issues_of(const std::vector<RawNode>& raw) {
    try {
        validate(raw);
    } catch (const ValidationError& e) {
        return e.issues();
    }
    return {};
}

bool mentions(const std::vector<std::string>& issues, const std::string& needle) {
    return std::any_of(issues.begin(), issues.end(), [&](const auto& s) { return s.find(needle) != std::string::npos; });
}

}  // namespace

TEST(Validate, AcceptsWellFormedShapes) {
    EXPECT_NO_THROW(validate(semistar::testing::y_shape(3, 2, 2, 1, 1)));
    EXPECT_NO_THROW(validate(semistar::testing::hlocal({{4, 2}})));
    EXPECT_NO_THROW(validate(semistar::testing::two_branch(2, 2)));
    EXPECT_NO_THROW(validate({{"0", std::nullopt, 1, std::nullopt}}));
}

TEST(Validate, RejectsPathThroughUnbranchedPrime) {
    const auto issues = issues_of(parse_tree_json(read_sample("path_invalid.json")));
    ASSERT_EQ(issues.size(), 1U);
    EXPECT_TRUE(mentions(issues, "exactly one child"));
}

TEST(Validate, ReportsEveryStructuralViolation) {
    const std::vector<RawNode> raw{
        {"0", std::nullopt, 1, std::nullopt},
        {"B", "0", 1, 1},
        {"B", "0", 1, 1},
        {"C", "nowhere", 1, 1},
        {"Z", std::nullopt, 1, std::nullopt},
    };
    const auto issues = issues_of(raw);
    EXPECT_EQ(issues.size(), 3U);
    EXPECT_TRUE(mentions(issues, "duplicate"));
    EXPECT_TRUE(mentions(issues, "nowhere"));
    EXPECT_TRUE(mentions(issues, "one root"));
}

TEST(Validate, ReportsEveryLabelViolation) {
    const std::vector<RawNode> raw{
        {"0", std::nullopt, 2, 1},    // root omega and epsilon
        {"A", "0", 0, std::nullopt},  // omega < 1, leaf without epsilon
        {"B", "0", 1, 2},             // omega < epsilon
        {"D", "0", 2, std::nullopt},  // internal with one child
        {"E", "D", 3, 3},             // epsilon outside {1,2}
        {"F", "0", 3, 1},
        {"G", "F", 3, 1},
        {"H", "F", 3, 1},             // F is internal and carries epsilon
    };
    const auto issues = issues_of(raw);
    EXPECT_EQ(issues.size(), 8U);
    EXPECT_TRUE(mentions(issues, "root '0' must have omega 1"));
    EXPECT_TRUE(mentions(issues, "must not carry epsilon"));
    EXPECT_TRUE(mentions(issues, "'A' has omega 0"));
    EXPECT_TRUE(mentions(issues, "'A' is missing epsilon"));
    EXPECT_TRUE(mentions(issues, "'B' has omega 1 < epsilon 2"));
    EXPECT_TRUE(mentions(issues, "'D' has exactly one child"));
    EXPECT_TRUE(mentions(issues, "'E' has epsilon 3"));
    EXPECT_TRUE(mentions(issues, "internal node 'F'"));
}

TEST(Validate, RejectsCyclesAndRootCount) {
    EXPECT_FALSE(issues_of({{"a", "b", 1, 1}, {"b", "a", 1, 1}}).empty());
    EXPECT_FALSE(issues_of({{"0", std::nullopt, 1, std::nullopt}, {"1", std::nullopt, 1, std::nullopt}}).empty());
    EXPECT_FALSE(issues_of({}).empty());
}

TEST(Validate, InternalNodeMayNotCarryEpsilon) {
    auto raw = semistar::testing::y_shape(1, 1, 1, 1, 1);
    raw[1].epsilon = 1;
    EXPECT_TRUE(mentions(issues_of(raw), "P"));
}

TEST(SpectrumJson, ParsesAndRoundTrips) {
    const auto t = validate(parse_tree_json(read_sample("two_branch.json")));
    EXPECT_EQ(t.size(), 5U);
    EXPECT_EQ(t.id(SpectrumTree::root()), "0");
    const auto again = validate(parse_tree_json(to_json(t).dump()));
    EXPECT_EQ(to_json(again), to_json(t));
    EXPECT_THROW(parse_tree_json("{"), ParseError);
    EXPECT_THROW(parse_tree_json(R"({"nodes": [{"id": "0"}]})"), ParseError);
    EXPECT_THROW(parse_tree_json(R"({"nodes": [{"id": "0", "parent": null, "omega": "x"}]})"), ParseError);
    EXPECT_NE(to_dot(t).find("digraph"), std::string::npos);
}

TEST(SpectrumTree, PreOrderAndSubtrees) {
    const auto t = validate(semistar::testing::two_branch(2, 3));
    const Index p = t.index_of("P");
    const auto sub = t.subtree(p);
    ASSERT_EQ(sub.size(), 3U);
    for (Index i : sub) EXPECT_TRUE(t.is_descendant(i, p));
    EXPECT_FALSE(t.is_descendant(t.index_of("N"), p));
    EXPECT_EQ(t.leaves().size(), 3U);
    EXPECT_THROW(t.index_of("missing"), UnknownNodeError);
    EXPECT_TRUE(t.is_leaf(t.index_of("N")));
    EXPECT_FALSE(t.is_leaf(SpectrumTree::root()));
}

TEST(StandardDecomposition, BranchCounts) {
    EXPECT_EQ(standard_decomposition(validate(semistar::testing::hlocal({{1, 1}, {2, 1}, {3, 2}}))).size(), 3U);
    EXPECT_EQ(standard_decomposition(validate(semistar::testing::y_shape(1, 1, 1, 1, 1))).size(), 1U);
    EXPECT_EQ(standard_decomposition(validate(semistar::testing::two_branch(1, 1))).size(), 2U);
}

TEST(Skeleton, Sizes) {
    for (unsigned m = 1; m <= 3; ++m) {
        const Skeleton s{m};
        EXPECT_EQ(s.size(), std::size_t{1} << m);
        const auto p = s.as_poset();
        EXPECT_EQ(p.minimal_elements(), (std::vector<Index>{s.domain()}));
        EXPECT_EQ(p.maximal_elements(), (std::vector<Index>{Skeleton::field()}));
    }
    EXPECT_EQ(skeleton(validate(semistar::testing::two_branch(1, 1))).size(), 4U);
    EXPECT_EQ(Skeleton::meet(1, 2), 3U);
}

TEST(Skeleton, UpperPartAtABranchIsBoolean) {
    for (unsigned m = 1; m <= 3; ++m) {
        const auto full = Skeleton{m}.as_poset();
        for (unsigned t = 0; t < m; ++t) {
            std::vector<Index> with;
            for (Index s = 0; s < full.size(); ++s) {
                if (s >> t & 1U) with.push_back(s);
            }
            EXPECT_TRUE(order_isomorphic(full.induced(with), Skeleton{m - 1}.as_poset()));
        }
    }
}

TEST(Supports, Counts) {
    EXPECT_EQ(enumerate_supports(0).size(), 1U);
    EXPECT_EQ(enumerate_supports(1).size(), 2U);
    EXPECT_EQ(enumerate_supports(2).size(), 7U);
    EXPECT_EQ(enumerate_supports(3).size(), 61U);
    EXPECT_EQ(enumerate_supports(3).size(), oracle::brute_supports(3));
    EXPECT_EQ(enumerate_supports(4).size(), 2480U);
    EXPECT_THROW(enumerate_supports(5), EnumerationLimitError);
    Limits tight;
    tight.max_branches = 1;
    EXPECT_THROW(enumerate_supports(2, tight), EnumerationLimitError);
}

TEST(Supports, MatchBruteForceFamilies) {
    for (unsigned m = 0; m <= 3; ++m) {
        std::vector<std::vector<std::uint32_t>> engine;
        for (const auto& s : enumerate_supports(m)) {
            EXPECT_TRUE(s.is_valid());
            auto e = s.elements();
            std::sort(e.begin(), e.end());
            engine.emplace_back(e.begin(), e.end());
        }
        auto brute = oracle::detail::support_families(m);
        std::sort(engine.begin(), engine.end());
        std::sort(brute.begin(), brute.end());
        EXPECT_EQ(engine, brute);
        EXPECT_TRUE(std::adjacent_find(engine.begin(), engine.end()) == engine.end());
    }
}

TEST(Supports, Components) {
    // branches M = bit 0, N = bit 1; D = 3
    Support s{2, (1ULL << 0) | (1ULL << 1) | (1ULL << 3)};  // {K, D_M, D}
    EXPECT_TRUE(s.is_valid());
    EXPECT_TRUE(order_isomorphic(support_component(s, 0), chain(2)));
    EXPECT_TRUE(order_isomorphic(support_component(s, 1), chain(1)));
    Support field_only{2, 1};
    EXPECT_TRUE(support_component(field_only, 0).empty());
    EXPECT_TRUE(support_component(field_only, 1).empty());
    Support full{3, 0xFF};
    for (unsigned t = 0; t < 3; ++t) {
        EXPECT_EQ(support_component(full, t).size(), 4U);
        EXPECT_TRUE(order_isomorphic(support_component(full, t), diamond()));
    }
    // the domain comes first in every component that contains it
    EXPECT_EQ(component_members(s, 0).front(), 3U);
}

TEST(Surgery, BranchSubtrees) {
    const auto h = validate(semistar::testing::hlocal({{2, 1}, {3, 2}}));
    for (Index c : standard_decomposition(h)) {
        const auto b = branch_subtree(h, c);
        EXPECT_EQ(b.size(), 2U);
        EXPECT_EQ(b.omega(1), h.omega(c));
        EXPECT_EQ(b.epsilon(1), h.epsilon(c));
    }
    const auto t = validate(semistar::testing::two_branch(5, 4));
    const auto bp = branch_subtree(t, t.index_of("P"));
    EXPECT_EQ(bp.size(), 4U);
    EXPECT_EQ(bp.omega(bp.index_of("P")), 5U);
    const auto bn = branch_subtree(t, t.index_of("N"));
    EXPECT_EQ(bn.size(), 2U);
    EXPECT_EQ(bn.omega(1), 4U);
    EXPECT_THROW(branch_subtree(t, t.index_of("M1")), PreconditionError);
}

TEST(Surgery, QuotientSubtrees) {
    const auto y = validate(semistar::testing::y_shape(3, 4, 2, 1, 1));
    const auto q = quotient_subtree(y, y.index_of("P"));
    EXPECT_EQ(q.size(), 3U);
    EXPECT_EQ(q.omega(SpectrumTree::root()), 1U);
    EXPECT_EQ(q.omega(q.index_of("M1")), 4U);
    EXPECT_EQ(*q.epsilon(q.index_of("M1")), 2U);
    EXPECT_EQ(standard_decomposition(q).size(), 2U);
    const auto field = quotient_subtree(y, y.index_of("M2"));
    EXPECT_TRUE(field.is_field());
}

TEST(DeriveOmega, Examples) {
    using K = PrimeKind;
    EXPECT_EQ(derive_omega(std::vector<K>{K::nonidempotent}), 1U);
    EXPECT_EQ(derive_omega(std::vector<K>{K::idempotent}), 2U);
    EXPECT_EQ(derive_omega(std::vector<K>{K::idempotent, K::idempotent, K::nonidempotent}), 5U);
    EXPECT_THROW(derive_omega(std::vector<K>{}), PreconditionError);
}
