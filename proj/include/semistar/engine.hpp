#pragma once

// Posets of semistar and fractional star operations on a semilocal Prufer
// domain, modeled by its labeled spectral tree, and the four cardinalities
// |Semistar|, |FStar|, |(semi)star|, |Star|.
//
// A semistar operation is a support (a union-closed family of skeleton
// elements containing the field) together with one order-preserving map per
// branch T, from the component of the support at T into FStar(T).
// FStar of a single branch with top prime c is
//   * chain(omega(c)) with the bottom epsilon(c) elements closing the ring,
//     when c is maximal;
//   * (Semistar(T/c) minus its top) (+) chain(omega(c)) otherwise, with the
//     ring-closing elements of Semistar(T/c).

#include <cstdint>
#include <map>
#include <mutex>
#include <set>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "semistar/error.hpp"
#include "semistar/limits.hpp"
#include "semistar/polynomial.hpp"
#include "semistar/poset.hpp"
#include "semistar/spectrum.hpp"

namespace semistar {

/// A poset with a marked down-set of ring-closing elements (the star, or
/// (semi)star, operations) that contains the minimum.
struct FlaggedPoset {
    Poset poset;
    Poset::Bits ring_closing;

    std::size_t size() const noexcept { return poset.size(); }
    bool flagged(Index i) const { return ring_closing.test(i); }
    std::size_t flag_count() const { return ring_closing.count(); }

    /// Flags form a down-set and the poset has a flagged minimum.
    bool is_valid() const {
        if (ring_closing.size() != poset.size()) return false;
        if (!poset.is_down_set(ring_closing)) return false;
        const auto mins = poset.minimal_elements();
        return mins.size() == 1 && ring_closing.test(mins.front());
    }
};

/// One semistar operation: its support and, for every branch whose
/// component is nonempty, the map from that component into FStar(branch).
struct SemistarElement {
    Support support;
    std::vector<std::optional<OrderMap>> maps;
};

/// All semistar operations of a tree, ordered by support (member bit set)
/// and then lexicographically by map images. The order relation is
/// evaluated on demand; flagged_poset() materializes it.
class SemistarPoset {
public:
    std::size_t size() const noexcept { return support_of_.size(); }
    unsigned branches() const noexcept { return static_cast<unsigned>(fstar_.size()); }

    const Support& support_of(Index i) const { return layouts_[support_of_[i]].support; }
    const std::vector<Support>& supports() const noexcept { return supports_; }
    const FlaggedPoset& branch_fstar(unsigned branch) const { return fstar_.at(branch); }

    SemistarElement element(Index i) const {
        const auto& lay = layouts_[support_of_[i]];
        SemistarElement e{lay.support, std::vector<std::optional<OrderMap>>(branches())};
        for (unsigned t = 0; t < branches(); ++t) {
            if (lay.offset[t] < 0) continue;
            const auto begin = images_.begin() + static_cast<std::ptrdiff_t>(image_start_[i]) + lay.offset[t];
            e.maps[t] = OrderMap{std::vector<Index>(begin, begin + static_cast<std::ptrdiff_t>(lay.components[t].size()))};
        }
        return e;
    }

    /// Order of semistar operations: the support of i contains that of j,
    /// and on every member A of j's support, at every branch through A,
    /// the map of i is below the map of j.
    bool leq(Index i, Index j) const {
        const auto& li = layouts_[support_of_[i]];
        const auto& lj = layouts_[support_of_[j]];
        if ((li.support.members & lj.support.members) != lj.support.members) return false;
        for (unsigned t = 0; t < branches(); ++t) {
            if (lj.offset[t] < 0) continue;
            const auto& members = lj.members[t];
            for (std::size_t k = 0; k < members.size(); ++k) {
                const auto a = members[k];
                const Index img_i = images_[image_start_[i] + static_cast<std::size_t>(li.offset[t]) +
                                            static_cast<std::size_t>(li.position[t][a])];
                const Index img_j = images_[image_start_[j] + static_cast<std::size_t>(lj.offset[t]) + k];
                if (!fstar_[t].poset.leq(img_i, img_j)) return false;
            }
        }
        return true;
    }

    bool ring_closing(Index i) const { return flagged_[i]; }

    std::size_t flag_count() const {
        std::size_t n = 0;
        for (bool f : flagged_) n += f ? 1 : 0;
        return n;
    }

    /// The element whose support is the field alone.
    Index field_element() const noexcept { return 0; }

    FlaggedPoset flagged_poset(const Limits& limits = {}) const {
        if (size() > limits.max_materialized) {
            throw EnumerationLimitError("semistar poset has " + std::to_string(size()) +
                                        " elements; materializing the order is bounded at " +
                                        std::to_string(limits.max_materialized));
        }
        FlaggedPoset out{Poset::from_relation(size(), [&](Index a, Index b) { return leq(a, b); }),
                         Poset::Bits(size())};
        for (std::size_t i = 0; i < size(); ++i) {
            if (flagged_[i]) out.ring_closing.set(i);
        }
        return out;
    }

private:
    friend SemistarPoset semistar_poset(const SpectrumTree&, const Limits&);

    struct Layout {
        Support support;
        std::vector<long> offset;                           // per branch, -1 when the component is empty
        std::vector<std::vector<SkeletonElement>> members;  // per branch
        std::vector<std::vector<long>> position;            // per branch, skeleton element -> slot
        std::vector<Poset> components;
    };

    std::vector<Support> supports_;
    std::vector<Layout> layouts_;
    std::vector<FlaggedPoset> fstar_;
    std::vector<std::uint32_t> support_of_;
    std::vector<std::size_t> image_start_;
    std::vector<Index> images_;
    std::vector<bool> flagged_;
};

SemistarPoset semistar_poset(const SpectrumTree& t, const Limits& limits = {});

/// FStar of a single-branch tree, with its star operations flagged.
inline FlaggedPoset fstar_poset(const SpectrumTree& branch, const Limits& limits = {}) {
    const auto& top = branch.children(SpectrumTree::root());
    if (top.size() != 1) {
        throw PreconditionError("fstar_poset: expected a single-branch tree, root has " +
                                std::to_string(top.size()) + " children");
    }
    const Index c = top.front();
    const auto omega = static_cast<std::size_t>(branch.omega(c));
    if (branch.is_leaf(c)) {
        FlaggedPoset out{chain(omega), Poset::Bits(omega)};
        for (std::size_t i = 0; i < *branch.epsilon(c); ++i) out.ring_closing.set(i);
        return out;
    }
    const auto quotient = semistar_poset(quotient_subtree(branch, c), limits).flagged_poset(limits);
    // Element 0 is the field-supported maximum; it never closes the ring.
    std::vector<Index> rest;
    for (Index i = 1; i < quotient.size(); ++i) rest.push_back(i);
    FlaggedPoset out{ordinal_sum(quotient.poset.induced(rest), chain(omega)),
                     Poset::Bits(rest.size() + omega)};
    for (std::size_t k = 0; k < rest.size(); ++k) {
        if (quotient.flagged(rest[k])) out.ring_closing.set(k);
    }
    return out;
}

namespace detail {

inline std::vector<FlaggedPoset> branch_fstars(const SpectrumTree& t, const Limits& limits) {
    std::vector<FlaggedPoset> out;
    for (Index c : standard_decomposition(t)) out.push_back(fstar_poset(branch_subtree(t, c), limits));
    return out;
}

inline void check_branch_count(const SpectrumTree& t, const Limits& limits) {
    const auto m = standard_decomposition(t).size();
    if (m > limits.max_branches || m > kMaxBranchesHard) {
        throw EnumerationLimitError("tree has " + std::to_string(m) + " branches, bound is " +
                                    std::to_string(std::min(limits.max_branches, kMaxBranchesHard)));
    }
}

}  // namespace detail

inline SemistarPoset semistar_poset(const SpectrumTree& t, const Limits& limits) {
    detail::check_branch_count(t, limits);
    SemistarPoset out;
    out.fstar_ = detail::branch_fstars(t, limits);
    const unsigned m = static_cast<unsigned>(out.fstar_.size());
    out.supports_ = enumerate_supports(m, limits);
    const SkeletonElement domain = Skeleton{m}.domain();

    for (std::size_t s = 0; s < out.supports_.size(); ++s) {
        SemistarPoset::Layout lay;
        lay.support = out.supports_[s];
        std::vector<std::vector<OrderMap>> maps;
        std::vector<unsigned> used;
        long width = 0;
        for (unsigned b = 0; b < m; ++b) {
            lay.members.push_back(component_members(lay.support, b));
            lay.components.push_back(support_component(lay.support, b));
            lay.position.emplace_back(std::size_t{1} << m, -1);
            for (std::size_t k = 0; k < lay.members[b].size(); ++k) lay.position[b][lay.members[b][k]] = static_cast<long>(k);
            if (lay.members[b].empty()) {
                lay.offset.push_back(-1);
                continue;
            }
            lay.offset.push_back(width);
            width += static_cast<long>(lay.members[b].size());
            maps.push_back(enum_hom(lay.components[b], out.fstar_[b].poset, limits.max_maps));
            used.push_back(b);
        }

        std::size_t count = 1;
        for (const auto& l : maps) count *= l.size();
        if (out.support_of_.size() + count > limits.max_elements) {
            throw EnumerationLimitError("semistar enumeration exceeds " + std::to_string(limits.max_elements) +
                                        " elements");
        }
        if (count == 0) {
            out.layouts_.push_back(std::move(lay));
            continue;
        }
        // Odometer over the per-branch map lists, last branch fastest.
        std::vector<std::size_t> digit(maps.size(), 0);
        while (true) {
            out.support_of_.push_back(static_cast<std::uint32_t>(s));
            out.image_start_.push_back(out.images_.size());
            bool closing = lay.support.contains(domain);
            for (std::size_t u = 0; u < maps.size(); ++u) {
                const auto& img = maps[u][digit[u]].image;
                out.images_.insert(out.images_.end(), img.begin(), img.end());
                // the domain is element 0 of every component containing it
                if (closing && !out.fstar_[used[u]].flagged(img.front())) closing = false;
            }
            out.flagged_.push_back(closing);
            std::size_t u = maps.size();
            while (u > 0) {
                --u;
                if (++digit[u] < maps[u].size()) break;
                digit[u] = 0;
                if (u == 0) {
                    u = maps.size() + 1;
                    break;
                }
            }
            if (maps.empty() || u == maps.size() + 1) break;
        }
        out.layouts_.push_back(std::move(lay));
    }
    return out;
}

/// Number of order-preserving maps from a support component into F that
/// send the designated element (the domain) to a ring-closing element.
/// Without a designated element this is |hom(component, F)|.
inline Integer tildhom_count(const Poset& component, std::optional<Index> designated, const FlaggedPoset& f) {
    if (!designated) return count_hom(component, f.poset);
    if (*designated >= component.size()) throw PreconditionError("tildhom_count: designated element out of range");
    std::vector<Poset::Bits> allowed(component.size(), Poset::Bits(f.size()));
    for (auto& a : allowed) a.set();
    allowed[*designated] = f.ring_closing;
    return count_hom_restricted(component, f.poset, allowed);
}

/// All four cardinalities of a tree.
struct Counts {
    Integer semistar;
    Integer fstar;
    Integer smstar;
    Integer star;

    friend bool operator==(const Counts&, const Counts&) = default;
};

namespace detail {

inline Integer semistar_sum(const std::vector<FlaggedPoset>& fstar, const Limits& limits) {
    const unsigned m = static_cast<unsigned>(fstar.size());
    Integer total = 0;
    for (const auto& support : enumerate_supports(m, limits)) {
        Integer term = 1;
        for (unsigned b = 0; b < m && term != 0; ++b) {
            const auto component = support_component(support, b);
            if (!component.empty()) term *= count_hom(component, fstar[b].poset);
        }
        total += term;
    }
    return total;
}

inline Integer smstar_sum(const std::vector<FlaggedPoset>& fstar, const Limits& limits) {
    const unsigned m = static_cast<unsigned>(fstar.size());
    Integer total = 0;
    for (const auto& support : enumerate_supports(m, limits)) {
        if (!support.contains_domain()) continue;
        Integer term = 1;
        for (unsigned b = 0; b < m && term != 0; ++b) {
            term *= tildhom_count(support_component(support, b), Index{0}, fstar[b]);
        }
        total += term;
    }
    return total;
}

}  // namespace detail

/// |Semistar(D)|: over all supports, the product of hom-counts from each
/// nonempty component into the FStar poset of its branch.
inline Integer count_semistar(const SpectrumTree& t, const Limits& limits = {}) {
    detail::check_branch_count(t, limits);
    return detail::semistar_sum(detail::branch_fstars(t, limits), limits);
}

/// |(semi)star(D)|: supports containing the domain, with the domain sent to
/// a star operation on every branch.
inline Integer count_smstar(const SpectrumTree& t, const Limits& limits = {}) {
    detail::check_branch_count(t, limits);
    return detail::smstar_sum(detail::branch_fstars(t, limits), limits);
}

namespace detail {

inline Integer branch_fstar_size(const SpectrumTree& t, Index c, const Limits& limits) {
    if (t.is_leaf(c)) return Integer(t.omega(c));
    return count_semistar(quotient_subtree(t, c), limits) - 1 + t.omega(c);
}

inline Integer branch_star_size(const SpectrumTree& t, Index c, const Limits& limits) {
    if (t.is_leaf(c)) return Integer(*t.epsilon(c));
    return count_smstar(quotient_subtree(t, c), limits);
}

}  // namespace detail

/// |FStar(D)|: product over branches of |FStar(branch)|.
inline Integer count_fstar(const SpectrumTree& t, const Limits& limits = {}) {
    Integer total = 1;
    for (Index c : standard_decomposition(t)) total *= detail::branch_fstar_size(t, c, limits);
    return total;
}

/// |Star(D)|: product over branches of the number of star operations of the
/// branch; it never reads omega at the children of the root.
inline Integer count_star(const SpectrumTree& t, const Limits& limits = {}) {
    Integer total = 1;
    for (Index c : standard_decomposition(t)) total *= detail::branch_star_size(t, c, limits);
    return total;
}

inline Counts count_all(const SpectrumTree& t, const Limits& limits = {}) {
    detail::check_branch_count(t, limits);
    const auto fstar = detail::branch_fstars(t, limits);
    Counts out{detail::semistar_sum(fstar, limits), 1, detail::smstar_sum(fstar, limits), 1};
    for (const auto& f : fstar) {
        out.fstar *= f.size();
        out.star *= f.flag_count();
    }
    return out;
}

// ---------------------------------------------------------------------------
// Counting polynomials

/// A node whose omega label becomes a polynomial variable.
struct SymbolicOmega {
    std::string node;
    std::string name;  // defaults to the node id
};

/// A leaf whose epsilon label becomes a polynomial variable (values 1, 2).
struct SymbolicEpsilon {
    std::string node;
    std::string name;  // defaults to "eps_" + node id
};

namespace detail {

enum class Which { semistar, smstar };

inline MultiPoly counting_polynomial(const SpectrumTree& t, std::span<const SymbolicOmega> omegas,
                                     std::span<const SymbolicEpsilon> epsilons, Which which, const Limits& limits) {
    detail::check_branch_count(t, limits);
    const auto branches = standard_decomposition(t);
    const unsigned m = static_cast<unsigned>(branches.size());
    const unsigned full = m == 0 ? 0 : (1U << (m - 1));
    // Per-variable degree in omega at a root child: 2^(m-1) for semistar,
    // 2^(m-1) - 1 once the domain is pinned to a star operation.
    const unsigned omega_bound = which == Which::semistar ? full : (full == 0 ? 0 : full - 1);

    std::vector<Index> nodes;
    std::vector<GridAxis> axes;
    std::set<Index> symbolic_eps;
    for (const auto& e : epsilons) {
        const Index i = t.index_of(e.node);
        if (!t.is_leaf(i)) throw PreconditionError("symbolic epsilon at '" + e.node + "', which is not a leaf");
        if (!symbolic_eps.insert(i).second) throw PreconditionError("node '" + e.node + "' has two epsilon variables");
    }
    std::set<Index> seen;
    for (const auto& o : omegas) {
        const Index i = t.index_of(o.node);
        if (t.parent(i) != SpectrumTree::root()) {
            throw PreconditionError("symbolic omega at '" + o.node + "', which is not a child of the root");
        }
        if (!seen.insert(i).second) throw PreconditionError("node '" + o.node + "' has two omega variables");
        GridAxis axis{o.name.empty() ? o.node : o.name, omega_bound};
        if (t.is_leaf(i)) axis.origin = symbolic_eps.count(i) ? 2 : *t.epsilon(i);
        nodes.push_back(i);
        axes.push_back(std::move(axis));
    }
    for (const auto& e : epsilons) {
        const Index i = t.index_of(e.node);
        nodes.push_back(i);
        axes.push_back(GridAxis{e.name.empty() ? "eps_" + e.node : e.name, 1, 1, false});
    }
    const std::size_t omega_count = omegas.size();

    const auto base = t.raw();
    return interpolate(
        [&](std::span<const Integer> point) {
            auto raw = base;
            for (std::size_t k = 0; k < point.size(); ++k) {
                const auto v = static_cast<std::int64_t>(point[k]);
                if (k < omega_count) {
                    raw[nodes[k]].omega = v;
                } else {
                    raw[nodes[k]].epsilon = v;
                }
            }
            const auto tree = validate(raw);
            return Rational(which == Which::semistar ? count_semistar(tree, limits) : count_smstar(tree, limits));
        },
        std::span<const GridAxis>(axes));
}

}  // namespace detail

/// |Semistar(D)| as a polynomial in omega at the chosen children of the
/// root, every other label fixed.
inline MultiPoly semistar_polynomial(const SpectrumTree& t, std::span<const SymbolicOmega> omegas,
                                     const Limits& limits = {}) {
    return detail::counting_polynomial(t, omegas, {}, detail::Which::semistar, limits);
}

/// |(semi)star(D)| as a polynomial in omega at the chosen children of the
/// root and, optionally, in epsilon at chosen leaves.
inline MultiPoly smstar_polynomial(const SpectrumTree& t, std::span<const SymbolicOmega> omegas,
                                   std::span<const SymbolicEpsilon> epsilons = {}, const Limits& limits = {}) {
    return detail::counting_polynomial(t, omegas, epsilons, detail::Which::smstar, limits);
}

// ---------------------------------------------------------------------------
// Height-two closed forms

namespace detail {

inline std::vector<RawNode> hlocal_shape(std::size_t n, std::int64_t omega, std::int64_t epsilon) {
    std::vector<RawNode> raw{RawNode{"0", std::nullopt, 1, std::nullopt}};
    for (std::size_t i = 1; i <= n; ++i) raw.push_back(RawNode{"M" + std::to_string(i), "0", omega, epsilon});
    return raw;
}

/// pi_n(x1..xn) and the (semi)star polynomial in (x1..xn, y1..yn) of the
/// h-local tree with n maximal ideals, computed once per n.
inline std::pair<MultiPoly, MultiPoly> hlocal_polynomials(std::size_t n, const Limits& limits) {
    static std::mutex guard;
    static std::map<std::size_t, std::pair<MultiPoly, MultiPoly>> cache;
    {
        std::lock_guard lock(guard);
        if (auto it = cache.find(n); it != cache.end()) return it->second;
    }
    std::vector<SymbolicOmega> xs;
    std::vector<SymbolicEpsilon> ys;
    for (std::size_t i = 1; i <= n; ++i) {
        xs.push_back({"M" + std::to_string(i), "x" + std::to_string(i)});
        ys.push_back({"M" + std::to_string(i), "y" + std::to_string(i)});
    }
    auto pi = semistar_polynomial(validate(hlocal_shape(n, 1, 1)), xs, limits);
    auto pi_tilde = smstar_polynomial(validate(hlocal_shape(n, 2, 2)), xs, ys, limits);
    std::lock_guard lock(guard);
    return cache.emplace(n, std::make_pair(std::move(pi), std::move(pi_tilde))).first->second;
}

}  // namespace detail

/// (|FStar|, |Star|) for trees whose internal non-root nodes are all
/// children of the root, from the h-local polynomials of each branch:
/// |FStar| = prod [pi_n(leaf omegas) + omega(P) - 1] and
/// |Star| = prod pi~_n(leaf omegas, leaf epsilons).
inline std::pair<Integer, Integer> height2_counts(const SpectrumTree& t, const Limits& limits = {}) {
    for (std::size_t i = 1; i < t.size(); ++i) {
        const Index n = static_cast<Index>(i);
        if (!t.is_leaf(n) && t.parent(n) != SpectrumTree::root()) {
            throw PreconditionError("height2_counts: internal node '" + t.id(n) + "' is not a child of the root");
        }
    }
    Integer fstar = 1;
    Integer star = 1;
    for (Index p : standard_decomposition(t)) {
        if (t.is_leaf(p)) {
            fstar *= t.omega(p);
            star *= *t.epsilon(p);
            continue;
        }
        const auto& leaves = t.children(p);
        const auto [pi, pi_tilde] = detail::hlocal_polynomials(leaves.size(), limits);
        std::map<std::string, Rational> at;
        for (std::size_t k = 0; k < leaves.size(); ++k) {
            at["x" + std::to_string(k + 1)] = Rational(t.omega(leaves[k]));
            at["y" + std::to_string(k + 1)] = Rational(*t.epsilon(leaves[k]));
        }
        const Rational f = pi.evaluate(at) + Rational(t.omega(p)) - 1;
        const Rational s = pi_tilde.evaluate(at);
        fstar *= boost::multiprecision::numerator(f);
        star *= boost::multiprecision::numerator(s);
    }
    return {fstar, star};
}

}  // namespace semistar
