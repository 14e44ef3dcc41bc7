#pragma once

// Brute-force reference counts. Nothing here calls the engine or the
// hom-counting code in poset.hpp; supports come from filtering every family
// of skeleton elements, maps from a plain backtracking enumeration.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "semistar/error.hpp"
#include "semistar/limits.hpp"
#include "semistar/poset.hpp"
#include "semistar/spectrum.hpp"

namespace semistar::oracle {

namespace detail {

inline constexpr std::uint64_t kMaxAssignments = 10'000'000;

inline void check_assignment_bound(std::size_t source, std::size_t target) {
    long double space = 1;
    for (std::size_t i = 0; i < source; ++i) space *= static_cast<long double>(target);
    if (space > static_cast<long double>(kMaxAssignments)) {
        throw EnumerationLimitError("brute force over " + std::to_string(target) + "^" + std::to_string(source) +
                                    " assignments exceeds 10^7");
    }
}

/// Every order-preserving map, each as an image vector.
inline std::vector<std::vector<Index>> all_maps(const Poset& p, const Poset& q) {
    check_assignment_bound(p.size(), q.size());
    std::vector<std::vector<Index>> out;
    std::vector<Index> image(p.size());
    auto assign = [&](auto&& self, std::size_t i) -> void {
        if (i == p.size()) {
            out.push_back(image);
            return;
        }
        for (Index v = 0; v < q.size(); ++v) {
            bool ok = true;
            for (std::size_t j = 0; j < i && ok; ++j) {
                const auto a = static_cast<Index>(j);
                const auto b = static_cast<Index>(i);
                if (p.leq(a, b) && !q.leq(image[j], v)) ok = false;
                if (p.leq(b, a) && !q.leq(v, image[j])) ok = false;
            }
            if (!ok) continue;
            image[i] = v;
            self(self, i + 1);
        }
    };
    assign(assign, 0);
    return out;
}

/// Union-closed families of subsets of {0..m-1} containing the empty set,
/// each as a sorted list of bit masks.
inline std::vector<std::vector<std::uint32_t>> support_families(unsigned m) {
    if (m > 3) throw EnumerationLimitError("brute support enumeration is bounded at 3 branches");
    const std::uint32_t subsets = 1U << m;
    std::vector<std::vector<std::uint32_t>> out;
    for (std::uint32_t choice = 0; choice < (1U << (subsets - 1)); ++choice) {
        std::vector<std::uint32_t> family{0};
        for (std::uint32_t s = 1; s < subsets; ++s) {
            if (choice >> (s - 1) & 1U) family.push_back(s);
        }
        bool closed = true;
        for (auto a : family) {
            for (auto b : family) {
                bool found = false;
                for (auto c : family) found = found || c == (a | b);
                closed = closed && found;
            }
        }
        if (closed) out.push_back(std::move(family));
    }
    return out;
}

struct BruteFlagged {
    Poset poset;
    std::vector<bool> flags;
};

struct BruteResult {
    Integer semistar = 0;
    Integer smstar = 0;
};

BruteResult brute_semistar(const SpectrumTree& t, BruteFlagged* materialize);

inline BruteFlagged brute_fstar(const SpectrumTree& branch) {
    const Index c = branch.children(SpectrumTree::root()).front();
    const auto omega = static_cast<std::size_t>(branch.omega(c));
    if (branch.is_leaf(c)) {
        BruteFlagged out{chain(omega), std::vector<bool>(omega, false)};
        for (std::size_t i = 0; i < *branch.epsilon(c); ++i) out.flags[i] = true;
        return out;
    }
    BruteFlagged below;
    brute_semistar(quotient_subtree(branch, c), &below);
    // drop the unique maximum (the field-supported element)
    const auto tops = below.poset.maximal_elements();
    if (tops.size() != 1) throw InvalidPosetError("oracle: semistar poset without a unique maximum");
    std::vector<Index> rest;
    std::vector<bool> flags;
    for (Index i = 0; i < below.poset.size(); ++i) {
        if (i == tops.front()) continue;
        rest.push_back(i);
        flags.push_back(below.flags[i]);
    }
    BruteFlagged out{ordinal_sum(below.poset.induced(rest), chain(omega)), flags};
    out.flags.resize(out.poset.size(), false);
    return out;
}

/// Counts, and optionally the full poset, of semistar operations: supports
/// by filtering, then every tuple of explicitly enumerated maps.
inline BruteResult brute_semistar(const SpectrumTree& t, BruteFlagged* materialize) {
    const auto roots = t.children(SpectrumTree::root());
    const unsigned m = static_cast<unsigned>(roots.size());
    std::vector<BruteFlagged> fstar;
    for (Index c : roots) fstar.push_back(brute_fstar(branch_subtree(t, c)));
    const std::uint32_t domain = m == 0 ? 0 : (1U << m) - 1;

    struct Element {
        std::vector<std::uint32_t> family;
        std::vector<std::vector<std::uint32_t>> members;  // per branch
        std::vector<std::vector<Index>> images;           // per branch
        bool flagged;
    };
    std::vector<Element> elements;
    BruteResult result;

    for (const auto& family : support_families(m)) {
        std::vector<std::vector<std::uint32_t>> members(m);
        std::vector<std::vector<std::vector<Index>>> maps(m);
        bool has_domain = false;
        for (auto a : family) has_domain = has_domain || a == domain;
        for (unsigned b = 0; b < m; ++b) {
            for (auto a : family) {
                if (a >> b & 1U) members[b].push_back(a);
            }
            if (members[b].empty()) continue;
            // component ordered by reverse inclusion
            const auto& ms = members[b];
            const auto comp = Poset::from_relation(ms.size(), [&](Index i, Index j) { return (ms[i] & ms[j]) == ms[j]; });
            maps[b] = all_maps(comp, fstar[b].poset);
        }

        Integer tuples = 1;
        Integer closing = has_domain ? 1 : 0;
        for (unsigned b = 0; b < m; ++b) {
            if (members[b].empty()) continue;
            tuples *= maps[b].size();
            std::size_t good = 0;
            for (const auto& img : maps[b]) {
                for (std::size_t k = 0; k < members[b].size(); ++k) {
                    if (members[b][k] == domain && fstar[b].flags[img[k]]) ++good;
                }
            }
            closing *= good;
        }
        result.semistar += tuples;
        result.smstar += closing;

        if (!materialize) continue;
        std::vector<std::size_t> digit(m, 0);
        while (true) {
            Element e{family, members, std::vector<std::vector<Index>>(m), has_domain};
            bool empty = false;
            for (unsigned b = 0; b < m; ++b) {
                if (members[b].empty()) continue;
                if (maps[b].empty()) {
                    empty = true;
                    break;
                }
                e.images[b] = maps[b][digit[b]];
                for (std::size_t k = 0; k < members[b].size(); ++k) {
                    if (members[b][k] == domain && !fstar[b].flags[e.images[b][k]]) e.flagged = false;
                }
            }
            if (empty) break;
            elements.push_back(std::move(e));
            unsigned b = 0;
            for (; b < m; ++b) {
                if (members[b].empty()) continue;
                if (++digit[b] < maps[b].size()) break;
                digit[b] = 0;
            }
            if (b == m) break;
        }
    }

    if (materialize) {
        if (elements.size() > 4000) throw EnumerationLimitError("oracle: poset too large to materialize");
        auto contains = [](const std::vector<std::uint32_t>& f, std::uint32_t a) {
            for (auto x : f) {
                if (x == a) return true;
            }
            return false;
        };
        auto leq = [&](Index i, Index j) {
            const auto& x = elements[i];
            const auto& y = elements[j];
            for (auto a : y.family) {
                if (!contains(x.family, a)) return false;
            }
            for (unsigned b = 0; b < m; ++b) {
                for (std::size_t k = 0; k < y.members[b].size(); ++k) {
                    const auto a = y.members[b][k];
                    std::size_t pos = 0;
                    while (x.members[b][pos] != a) ++pos;
                    if (!fstar[b].poset.leq(x.images[b][pos], y.images[b][k])) return false;
                }
            }
            return true;
        };
        materialize->poset = Poset::from_relation(elements.size(), leq);
        materialize->flags.clear();
        for (const auto& e : elements) materialize->flags.push_back(e.flagged);
    }
    return result;
}

}  // namespace detail

/// Number of order-preserving maps P -> Q by exhaustive backtracking.
/// Requires |Q|^|P| <= 10^7.
inline Integer brute_count_hom(const Poset& p, const Poset& q) {
    return Integer(detail::all_maps(p, q).size());
}

/// Number of union-closed families of branch subsets containing the empty
/// set, by filtering all 2^(2^m - 1) candidate families. Requires m <= 3.
inline std::size_t brute_supports(unsigned m) { return detail::support_families(m).size(); }

/// (|Semistar|, |(semi)star|) of a tree with at most 3 branches and every
/// omega at most 4.
inline std::pair<Integer, Integer> brute_semistar_count(const SpectrumTree& t) {
    if (t.children(SpectrumTree::root()).size() > 3) throw EnumerationLimitError("oracle: more than 3 branches");
    for (std::size_t i = 1; i < t.size(); ++i) {
        if (t.omega(static_cast<Index>(i)) > 4) throw EnumerationLimitError("oracle: omega above 4");
    }
    const auto r = detail::brute_semistar(t, nullptr);
    return {r.semistar, r.smstar};
}

/// The semistar poset with its ring-closing flags, built independently of
/// the engine. Intended for small trees.
inline std::pair<Poset, std::vector<bool>> brute_semistar_poset(const SpectrumTree& t) {
    detail::BruteFlagged out;
    detail::brute_semistar(t, &out);
    return {std::move(out.poset), std::move(out.flags)};
}

}  // namespace semistar::oracle
