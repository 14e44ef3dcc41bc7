#pragma once

// Finite posets stored as their full order relation, together with the
// constructions (chains, ordinal sums, products) and the order-preserving
// map machinery used by the semistar engine.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <boost/container_hash/hash.hpp>
#include <boost/dynamic_bitset.hpp>

#include "semistar/error.hpp"
#include "semistar/limits.hpp"

namespace semistar {

using Index = std::uint32_t;

/// A finite partially ordered set on the elements 0..size()-1.
///
/// Both the up-set and the down-set of every element are stored as bit
/// rows, so leq() is O(1) and meets of up-sets are word-parallel.
/// Values are immutable once built.
class Poset {
public:
    using Bits = boost::dynamic_bitset<std::uint64_t>;

    Poset() = default;

    /// Builds a poset from a predicate leq(i, j) and checks that it is
    /// reflexive, antisymmetric and transitive.
    template <class Leq>
    static Poset from_relation(std::size_t n, Leq&& leq) {
        std::vector<Bits> up(n, Bits(n));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (leq(static_cast<Index>(i), static_cast<Index>(j))) up[i].set(j);
            }
        }
        return from_up_sets(std::move(up));
    }

    /// Builds a poset from rows up[i] = { j : i <= j } and validates them.
    static Poset from_up_sets(std::vector<Bits> up) {
        const std::size_t n = up.size();
        for (std::size_t i = 0; i < n; ++i) {
            if (up[i].size() != n) throw InvalidPosetError("relation row has wrong width");
            if (!up[i].test(i)) {
                throw InvalidPosetError("relation is not reflexive at element " + std::to_string(i));
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            for (auto j = up[i].find_first(); j != Bits::npos; j = up[i].find_next(j)) {
                if (j != i && up[j].test(i)) {
                    throw InvalidPosetError("relation is not antisymmetric on elements " +
                                            std::to_string(i) + ", " + std::to_string(j));
                }
                if (!up[j].is_subset_of(up[i])) {
                    throw InvalidPosetError("relation is not transitive through element " +
                                            std::to_string(j));
                }
            }
        }
        return Poset(std::move(up));
    }

    /// Builds the poset generated by the pairs lo < hi (reflexive-transitive
    /// closure). Throws InvalidPosetError when the pairs contain a cycle.
    static Poset from_covers(std::size_t n, std::span<const std::pair<Index, Index>> pairs) {
        std::vector<std::vector<Index>> above(n);
        std::vector<std::size_t> indegree(n, 0);
        for (auto [lo, hi] : pairs) {
            if (lo >= n || hi >= n) throw InvalidPosetError("cover pair out of range");
            if (lo == hi) throw InvalidPosetError("cover pair is a loop");
            above[lo].push_back(hi);
            ++indegree[hi];
        }
        std::vector<Index> topo;
        topo.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            if (indegree[i] == 0) topo.push_back(static_cast<Index>(i));
        }
        for (std::size_t k = 0; k < topo.size(); ++k) {
            for (Index h : above[topo[k]]) {
                if (--indegree[h] == 0) topo.push_back(h);
            }
        }
        if (topo.size() != n) throw InvalidPosetError("cover pairs contain a cycle");
        std::vector<Bits> up(n, Bits(n));
        for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
            up[*it].set(*it);
            for (Index h : above[*it]) up[*it] |= up[h];
        }
        return Poset(std::move(up));
    }

    std::size_t size() const noexcept { return up_.size(); }
    bool empty() const noexcept { return up_.empty(); }

    bool leq(Index i, Index j) const { return up_[i].test(j); }
    bool less(Index i, Index j) const { return i != j && up_[i].test(j); }
    bool comparable(Index i, Index j) const { return leq(i, j) || leq(j, i); }

    /// { j : i <= j }
    const Bits& up(Index i) const { return up_[i]; }
    /// { j : j <= i }
    const Bits& down(Index i) const { return down_[i]; }

    /// Covering pairs (lo, hi) in lexicographic order.
    std::vector<std::pair<Index, Index>> covers() const {
        std::vector<std::pair<Index, Index>> out;
        for (std::size_t i = 0; i < size(); ++i) {
            Bits strict = up_[i];
            strict.reset(i);
            Bits reachable_in_two(size());
            for (auto k = strict.find_first(); k != Bits::npos; k = strict.find_next(k)) {
                Bits above_k = up_[k];
                above_k.reset(k);
                reachable_in_two |= above_k;
            }
            strict -= reachable_in_two;
            for (auto j = strict.find_first(); j != Bits::npos; j = strict.find_next(j)) {
                out.emplace_back(static_cast<Index>(i), static_cast<Index>(j));
            }
        }
        return out;
    }

    /// Elements covered by i.
    std::vector<Index> lower_covers(Index i) const {
        std::vector<Index> out;
        Bits strict = down_[i];
        strict.reset(i);
        for (auto k = strict.find_first(); k != Bits::npos; k = strict.find_next(k)) {
            Bits between = up_[k] & strict;
            between.reset(k);
            if (between.none()) out.push_back(static_cast<Index>(k));
        }
        return out;
    }

    /// A linear extension: elements sorted by the size of their down-set,
    /// ties broken by index.
    std::vector<Index> linear_extension() const {
        std::vector<Index> order(size());
        std::iota(order.begin(), order.end(), Index{0});
        std::vector<std::size_t> below(size());
        for (std::size_t i = 0; i < size(); ++i) below[i] = down_[i].count();
        std::stable_sort(order.begin(), order.end(),
                         [&](Index a, Index b) { return below[a] < below[b]; });
        return order;
    }

    /// The sub-poset on the given elements, re-indexed in the given order.
    Poset induced(std::span<const Index> elements) const {
        std::vector<Bits> up(elements.size(), Bits(elements.size()));
        for (std::size_t a = 0; a < elements.size(); ++a) {
            for (std::size_t b = 0; b < elements.size(); ++b) {
                if (leq(elements[a], elements[b])) up[a].set(b);
            }
        }
        return Poset(std::move(up));
    }

    Poset dual() const { return Poset(down_); }

    bool is_down_set(const Bits& s) const {
        for (auto i = s.find_first(); i != Bits::npos; i = s.find_next(i)) {
            if (!down_[i].is_subset_of(s)) return false;
        }
        return true;
    }

    bool is_chain() const {
        for (std::size_t i = 0; i < size(); ++i) {
            if ((up_[i] | down_[i]).count() != size()) return false;
        }
        return true;
    }

    std::vector<Index> minimal_elements() const {
        std::vector<Index> out;
        for (std::size_t i = 0; i < size(); ++i) {
            if (down_[i].count() == 1) out.push_back(static_cast<Index>(i));
        }
        return out;
    }

    std::vector<Index> maximal_elements() const {
        std::vector<Index> out;
        for (std::size_t i = 0; i < size(); ++i) {
            if (up_[i].count() == 1) out.push_back(static_cast<Index>(i));
        }
        return out;
    }

    /// Number of pairs i <= j (including i == j).
    std::size_t relation_size() const {
        std::size_t total = 0;
        for (const auto& row : up_) total += row.count();
        return total;
    }

    friend bool operator==(const Poset& a, const Poset& b) { return a.up_ == b.up_; }

private:
    explicit Poset(std::vector<Bits> up) : up_(std::move(up)), down_(up_.size(), Bits(up_.size())) {
        for (std::size_t i = 0; i < up_.size(); ++i) {
            for (auto j = up_[i].find_first(); j != Bits::npos; j = up_[i].find_next(j)) {
                down_[j].set(i);
            }
        }
    }

    std::vector<Bits> up_;
    std::vector<Bits> down_;
};

/// An order-preserving map; image[p] is the target of source element p.
/// The source and target posets are the ones the map was produced for.
struct OrderMap {
    std::vector<Index> image;

    friend bool operator==(const OrderMap&, const OrderMap&) = default;
    friend auto operator<=>(const OrderMap&, const OrderMap&) = default;
};

inline bool is_order_preserving(const Poset& source, const Poset& target, std::span<const Index> image) {
    if (image.size() != source.size()) return false;
    for (Index v : image) {
        if (v >= target.size()) return false;
    }
    for (std::size_t i = 0; i < source.size(); ++i) {
        const auto& up = source.up(static_cast<Index>(i));
        for (auto j = up.find_first(); j != Poset::Bits::npos; j = up.find_next(j)) {
            if (!target.leq(image[i], image[j])) return false;
        }
    }
    return true;
}

/// The chain 0 < 1 < ... < n-1.
inline Poset chain(std::size_t n) {
    std::vector<Poset::Bits> up(n, Poset::Bits(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) up[i].set(j);
    }
    return Poset::from_up_sets(std::move(up));
}

inline Poset antichain(std::size_t n) {
    std::vector<Poset::Bits> up(n, Poset::Bits(n));
    for (std::size_t i = 0; i < n; ++i) up[i].set(i);
    return Poset::from_up_sets(std::move(up));
}

/// Disjoint union with every element of lower below every element of upper.
/// Elements of lower keep their indices; upper's are shifted by lower.size().
inline Poset ordinal_sum(const Poset& lower, const Poset& upper) {
    const std::size_t a = lower.size();
    const std::size_t n = a + upper.size();
    std::vector<Poset::Bits> up(n, Poset::Bits(n));
    for (std::size_t i = 0; i < a; ++i) {
        for (std::size_t j = 0; j < a; ++j) {
            if (lower.leq(static_cast<Index>(i), static_cast<Index>(j))) up[i].set(j);
        }
        for (std::size_t j = a; j < n; ++j) up[i].set(j);
    }
    for (std::size_t i = 0; i < upper.size(); ++i) {
        for (std::size_t j = 0; j < upper.size(); ++j) {
            if (upper.leq(static_cast<Index>(i), static_cast<Index>(j))) up[a + i].set(a + j);
        }
    }
    return Poset::from_up_sets(std::move(up));
}

/// Componentwise order on pairs; element (x, y) has index x * right.size() + y.
inline Poset product(const Poset& left, const Poset& right) {
    const std::size_t m = right.size();
    const std::size_t n = left.size() * m;
    std::vector<Poset::Bits> up(n, Poset::Bits(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (left.leq(static_cast<Index>(i / m), static_cast<Index>(j / m)) &&
                right.leq(static_cast<Index>(i % m), static_cast<Index>(j % m))) {
                up[i].set(j);
            }
        }
    }
    return Poset::from_up_sets(std::move(up));
}

/// Every down-set of p (as element bit sets), including the empty set and p itself.
inline std::vector<Poset::Bits> down_sets(const Poset& p, std::size_t max_source = Limits{}.max_down_set_source) {
    if (p.size() > max_source) {
        throw EnumerationLimitError("down-set enumeration: poset has " + std::to_string(p.size()) +
                                    " elements, bound is " + std::to_string(max_source));
    }
    const auto order = p.linear_extension();
    std::vector<Poset::Bits> out;
    Poset::Bits current(p.size());
    // Elements are decided in linear-extension order, so an element may be
    // added exactly when its whole strict down-set is already present.
    auto recurse = [&](auto&& self, std::size_t k) -> void {
        if (k == order.size()) {
            out.push_back(current);
            return;
        }
        const Index e = order[k];
        self(self, k + 1);
        Poset::Bits strict = p.down(e);
        strict.reset(e);
        if (strict.is_subset_of(current)) {
            current.set(e);
            self(self, k + 1);
            current.reset(e);
        }
    };
    recurse(recurse, 0);
    return out;
}

inline std::vector<Index> to_indices(const Poset::Bits& s) {
    std::vector<Index> out;
    for (auto i = s.find_first(); i != Poset::Bits::npos; i = s.find_next(i)) {
        out.push_back(static_cast<Index>(i));
    }
    return out;
}

/// All order-preserving maps source -> target, in lexicographic order of
/// their image vectors.
inline std::vector<OrderMap> enum_hom(const Poset& source, const Poset& target,
                                      std::uint64_t max_maps = Limits{}.max_maps) {
    const std::size_t k = source.size();
    std::vector<std::vector<Index>> below(k), above(k);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (source.leq(static_cast<Index>(j), static_cast<Index>(i))) below[i].push_back(static_cast<Index>(j));
            if (source.leq(static_cast<Index>(i), static_cast<Index>(j))) above[i].push_back(static_cast<Index>(j));
        }
    }
    std::vector<OrderMap> out;
    std::vector<Index> image(k);
    Poset::Bits all(target.size());
    all.set();
    auto recurse = [&](auto&& self, std::size_t i) -> void {
        if (i == k) {
            if (out.size() >= max_maps) {
                throw EnumerationLimitError("enum_hom: more than " + std::to_string(max_maps) + " maps");
            }
            out.push_back(OrderMap{image});
            return;
        }
        Poset::Bits cand = all;
        for (Index j : below[i]) cand &= target.up(image[j]);
        for (Index j : above[i]) cand &= target.down(image[j]);
        for (auto q = cand.find_first(); q != Poset::Bits::npos; q = cand.find_next(q)) {
            image[i] = static_cast<Index>(q);
            self(self, i + 1);
        }
    };
    recurse(recurse, 0);
    return out;
}

namespace detail {

struct VectorHash {
    std::size_t operator()(const std::vector<Index>& v) const noexcept {
        return boost::hash_range(v.begin(), v.end());
    }
};

// Frontier dynamic programming over a linear extension of the source.
// A state records the images of the already-placed elements that are still
// lower covers of some unplaced element; everything else has been summed out.
inline Integer count_hom_frontier(const Poset& source, const Poset& target,
                                  const std::vector<Poset::Bits>* allowed) {
    const std::size_t k = source.size();
    const auto order = source.linear_extension();
    std::vector<std::size_t> pos(k);
    for (std::size_t i = 0; i < k; ++i) pos[order[i]] = i;
    std::vector<std::vector<Index>> lower(k);
    std::vector<long> last_use(k, -1);
    for (std::size_t i = 0; i < k; ++i) {
        lower[i] = source.lower_covers(static_cast<Index>(i));
        for (Index c : lower[i]) last_use[c] = std::max<long>(last_use[c], static_cast<long>(pos[i]));
    }

    Poset::Bits all(target.size());
    all.set();
    std::vector<Index> frontier;
    std::unordered_map<std::vector<Index>, Integer, VectorHash> states;
    states.emplace(std::vector<Index>{}, Integer(1));

    for (std::size_t step = 0; step < k; ++step) {
        const Index p = order[step];
        const long here = static_cast<long>(step);
        std::vector<std::size_t> cover_slot;
        for (Index c : lower[p]) {
            cover_slot.push_back(static_cast<std::size_t>(
                std::find(frontier.begin(), frontier.end(), c) - frontier.begin()));
        }
        std::vector<std::size_t> keep;
        std::vector<Index> next_frontier;
        for (std::size_t s = 0; s < frontier.size(); ++s) {
            if (last_use[frontier[s]] > here) {
                keep.push_back(s);
                next_frontier.push_back(frontier[s]);
            }
        }
        const bool needed = last_use[p] > here;
        if (needed) next_frontier.push_back(p);

        std::unordered_map<std::vector<Index>, Integer, VectorHash> next;
        std::vector<Index> key;
        for (const auto& [images, count] : states) {
            Poset::Bits cand = allowed != nullptr ? (*allowed)[p] : all;
            for (std::size_t slot : cover_slot) cand &= target.up(images[slot]);
            if (cand.none()) continue;
            key.clear();
            for (std::size_t s : keep) key.push_back(images[s]);
            if (!needed) {
                next[key] += count * cand.count();
                continue;
            }
            key.push_back(0);
            for (auto q = cand.find_first(); q != Poset::Bits::npos; q = cand.find_next(q)) {
                key.back() = static_cast<Index>(q);
                next[key] += count;
            }
        }
        states = std::move(next);
        frontier = std::move(next_frontier);
        if (states.empty()) return 0;
    }
    Integer total = 0;
    for (const auto& [images, count] : states) total += count;
    return total;
}

// Maps into an n-chain are multichains of down-sets
// {} = I_0 <= I_1 <= ... <= I_n = source.
inline Integer count_hom_into_chain(const std::vector<Poset::Bits>& ideals, std::size_t full_index,
                                    std::size_t n) {
    const std::size_t d = ideals.size();
    std::vector<std::vector<std::size_t>> subsets(d);
    for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t b = 0; b < d; ++b) {
            if (ideals[b].is_subset_of(ideals[a])) subsets[a].push_back(b);
        }
    }
    std::vector<Integer> ways(d, 0);
    for (std::size_t a = 0; a < d; ++a) {
        if (ideals[a].none()) ways[a] = 1;
    }
    for (std::size_t level = 0; level < n; ++level) {
        std::vector<Integer> next(d, 0);
        for (std::size_t a = 0; a < d; ++a) {
            for (std::size_t b : subsets[a]) next[a] += ways[b];
        }
        ways = std::move(next);
    }
    return ways[full_index];
}

}  // namespace detail

/// |hom(source, target)|, the number of order-preserving maps.
///
/// Chain targets use the down-set recursion when the source has few
/// down-sets; everything else goes through the frontier recursion.
inline Integer count_hom(const Poset& source, const Poset& target) {
    if (source.empty()) return 1;
    if (target.empty()) return 0;
    if (target.is_chain() && source.size() <= 16) {
        auto ideals = down_sets(source, 16);
        const std::size_t d = ideals.size();
        if (d * d * target.size() <= 50'000'000) {
            std::size_t full = 0;
            for (std::size_t a = 0; a < d; ++a) {
                if (ideals[a].count() == source.size()) full = a;
            }
            return detail::count_hom_into_chain(ideals, full, target.size());
        }
    }
    return detail::count_hom_frontier(source, target, nullptr);
}

/// Number of order-preserving maps f with f(p) in allowed[p] for every p.
inline Integer count_hom_restricted(const Poset& source, const Poset& target,
                                    const std::vector<Poset::Bits>& allowed) {
    if (allowed.size() != source.size()) throw PreconditionError("count_hom_restricted: one target set per source element");
    if (source.empty()) return 1;
    return detail::count_hom_frontier(source, target, &allowed);
}

}  // namespace semistar
