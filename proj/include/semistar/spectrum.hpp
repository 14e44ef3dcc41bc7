#pragma once

// Labeled spectral trees: a rooted homeomorphically irreducible tree whose
// root models the zero prime, with omega labels on every node and epsilon
// labels on the leaves (the maximal ideals). Also the skeleton lattice of a
// standard decomposition and its union-closed supports.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "semistar/error.hpp"
#include "semistar/limits.hpp"
#include "semistar/poset.hpp"

namespace semistar {

/// A node as written in an input file, before validation.
struct RawNode {
    std::string id;
    std::optional<std::string> parent;
    std::int64_t omega = 1;
    std::optional<std::int64_t> epsilon;

    friend bool operator==(const RawNode&, const RawNode&) = default;
};

class SpectrumTree;
SpectrumTree validate(const std::vector<RawNode>& raw);

/// A validated spectral tree. Node 0 is the root; nodes are stored in
/// depth-first pre-order with children in input order.
class SpectrumTree {
public:
    struct Node {
        std::string id;
        std::optional<Index> parent;
        std::uint64_t omega = 1;
        std::optional<unsigned> epsilon;
        std::vector<Index> children;
    };

    std::size_t size() const noexcept { return nodes_.size(); }
    static constexpr Index root() noexcept { return 0; }
    const Node& node(Index i) const { return nodes_.at(i); }
    const std::vector<Node>& nodes() const noexcept { return nodes_; }

    const std::string& id(Index i) const { return node(i).id; }
    std::uint64_t omega(Index i) const { return node(i).omega; }
    std::optional<unsigned> epsilon(Index i) const { return node(i).epsilon; }
    const std::vector<Index>& children(Index i) const { return node(i).children; }
    std::optional<Index> parent(Index i) const { return node(i).parent; }
    bool is_leaf(Index i) const { return i != root() && node(i).children.empty(); }
    bool is_field() const noexcept { return nodes_.size() == 1; }

    std::optional<Index> find(const std::string& id) const {
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            if (nodes_[i].id == id) return static_cast<Index>(i);
        }
        return std::nullopt;
    }

    Index index_of(const std::string& id) const {
        if (auto i = find(id)) return *i;
        throw UnknownNodeError("unknown node id '" + id + "'");
    }

    std::vector<Index> leaves() const {
        std::vector<Index> out;
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            if (is_leaf(static_cast<Index>(i))) out.push_back(static_cast<Index>(i));
        }
        return out;
    }

    /// Nodes of the subtree rooted at i, in pre-order.
    std::vector<Index> subtree(Index i) const {
        // pre-order storage makes every subtree a contiguous block
        Index end = i + 1;
        while (end < nodes_.size() && is_descendant(end, i)) ++end;
        std::vector<Index> out;
        for (Index k = i; k < end; ++k) out.push_back(k);
        return out;
    }

    bool is_descendant(Index node, Index ancestor) const {
        std::optional<Index> cur = node;
        while (cur) {
            if (*cur == ancestor) return true;
            cur = nodes_[*cur].parent;
        }
        return false;
    }

    /// The description this tree was validated from (pre-order).
    std::vector<RawNode> raw() const {
        std::vector<RawNode> out;
        for (const auto& n : nodes_) {
            RawNode r{n.id, std::nullopt, static_cast<std::int64_t>(n.omega), std::nullopt};
            if (n.parent) r.parent = nodes_[*n.parent].id;
            if (n.epsilon) r.epsilon = *n.epsilon;
            out.push_back(std::move(r));
        }
        return out;
    }

    /// Copy with omega(node) replaced; the result is re-validated.
    SpectrumTree with_omega(Index i, std::uint64_t value) const {
        auto r = raw();
        r.at(i).omega = static_cast<std::int64_t>(value);
        return validate(r);
    }

    /// Copy with epsilon(leaf) replaced; the result is re-validated.
    SpectrumTree with_epsilon(Index i, unsigned value) const {
        auto r = raw();
        r.at(i).epsilon = value;
        return validate(r);
    }

private:
    friend SpectrumTree validate(const std::vector<RawNode>& raw);
    std::vector<Node> nodes_;
};

/// Checks every tree invariant and returns the validated tree, or throws a
/// ValidationError listing all violations found.
inline SpectrumTree validate(const std::vector<RawNode>& raw) {
    std::vector<std::string> issues;
    if (raw.empty()) throw ValidationError({"tree has no nodes"});

    std::map<std::string, std::size_t> by_id;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (!by_id.emplace(raw[i].id, i).second) issues.push_back("duplicate node id '" + raw[i].id + "'");
    }
    std::vector<std::size_t> roots;
    std::vector<std::vector<std::size_t>> kids(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (!raw[i].parent) {
            roots.push_back(i);
            continue;
        }
        const auto it = by_id.find(*raw[i].parent);
        if (it == by_id.end()) {
            issues.push_back("node '" + raw[i].id + "' has unknown parent '" + *raw[i].parent + "'");
        } else {
            kids[it->second].push_back(i);
        }
    }
    if (roots.size() != 1) {
        issues.push_back("not a tree: expected exactly one root (parent null), found " + std::to_string(roots.size()));
    }
    if (!issues.empty()) throw ValidationError(issues);

    // Pre-order walk from the root; anything unreached sits on a cycle.
    std::vector<std::size_t> order;
    std::vector<bool> seen(raw.size(), false);
    std::vector<std::size_t> stack{roots.front()};
    while (!stack.empty()) {
        const auto i = stack.back();
        stack.pop_back();
        if (seen[i]) continue;
        seen[i] = true;
        order.push_back(i);
        for (auto it = kids[i].rbegin(); it != kids[i].rend(); ++it) stack.push_back(*it);
    }
    if (order.size() != raw.size()) {
        std::string lost;
        for (std::size_t i = 0; i < raw.size(); ++i) {
            if (!seen[i]) lost += (lost.empty() ? "'" : ", '") + raw[i].id + "'";
        }
        throw ValidationError({"not a tree: nodes " + lost + " are not reachable from the root"});
    }

    const std::size_t root = roots.front();
    for (std::size_t i : order) {
        const auto& n = raw[i];
        const bool is_root = i == root;
        const bool leaf = !is_root && kids[i].empty();
        if (n.omega < 1) issues.push_back("node '" + n.id + "' has omega " + std::to_string(n.omega) + " < 1");
        if (is_root && n.omega != 1) issues.push_back("root '" + n.id + "' must have omega 1, has " + std::to_string(n.omega));
        if (is_root && n.epsilon) issues.push_back("root '" + n.id + "' must not carry epsilon");
        if (!is_root && kids[i].size() == 1) {
            issues.push_back("node '" + n.id +
                             "' has exactly one child: only the root may have a single child "
                             "(homeomorphic irreducibility)");
        }
        if (!is_root && !leaf && n.epsilon) issues.push_back("internal node '" + n.id + "' must not carry epsilon");
        if (leaf && !n.epsilon) issues.push_back("leaf '" + n.id + "' is missing epsilon");
        if (leaf && n.epsilon && *n.epsilon != 1 && *n.epsilon != 2) {
            issues.push_back("leaf '" + n.id + "' has epsilon " + std::to_string(*n.epsilon) + ", expected 1 or 2");
        }
        if (leaf && n.epsilon && n.omega >= 1 && n.omega < *n.epsilon) {
            issues.push_back("leaf '" + n.id + "' has omega " + std::to_string(n.omega) + " < epsilon " +
                             std::to_string(*n.epsilon));
        }
    }
    if (!issues.empty()) throw ValidationError(issues);

    SpectrumTree t;
    std::vector<Index> new_index(raw.size());
    for (std::size_t k = 0; k < order.size(); ++k) new_index[order[k]] = static_cast<Index>(k);
    for (std::size_t i : order) {
        SpectrumTree::Node n;
        n.id = raw[i].id;
        if (raw[i].parent) n.parent = new_index[by_id.at(*raw[i].parent)];
        n.omega = static_cast<std::uint64_t>(raw[i].omega);
        if (raw[i].epsilon) n.epsilon = static_cast<unsigned>(*raw[i].epsilon);
        for (auto c : kids[i]) n.children.push_back(new_index[c]);
        t.nodes_.push_back(std::move(n));
    }
    return t;
}

// ---------------------------------------------------------------------------
// JSON and DOT

/// Parses {"nodes":[{"id","parent","omega","epsilon"}]}. Throws ParseError
/// on malformed input; invariants are checked by validate().
inline std::vector<RawNode> parse_tree_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
    try {
        if (!j.is_object() || !j.contains("nodes") || !j.at("nodes").is_array()) {
            throw ParseError("expected an object with a \"nodes\" array");
        }
        std::vector<RawNode> out;
        for (const auto& n : j.at("nodes")) {
            if (!n.is_object()) throw ParseError("node entries must be objects");
            RawNode r;
            if (!n.contains("id") || !n.at("id").is_string()) throw ParseError("node without a string \"id\"");
            r.id = n.at("id").get<std::string>();
            if (!n.contains("parent")) throw ParseError("node '" + r.id + "' has no \"parent\" field");
            const auto& p = n.at("parent");
            if (p.is_string()) {
                r.parent = p.get<std::string>();
            } else if (!p.is_null()) {
                throw ParseError("node '" + r.id + "': \"parent\" must be a string or null");
            }
            if (!n.contains("omega") || !n.at("omega").is_number_integer()) {
                throw ParseError("node '" + r.id + "' needs an integer \"omega\"");
            }
            r.omega = n.at("omega").get<std::int64_t>();
            if (n.contains("epsilon") && !n.at("epsilon").is_null()) {
                if (!n.at("epsilon").is_number_integer()) throw ParseError("node '" + r.id + "': \"epsilon\" must be an integer");
                r.epsilon = n.at("epsilon").get<std::int64_t>();
            }
            out.push_back(std::move(r));
        }
        return out;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed tree JSON: ") + e.what());
    }
}

inline nlohmann::json to_json(const SpectrumTree& t) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& r : t.raw()) {
        nlohmann::json n{{"id", r.id}, {"parent", nullptr}, {"omega", r.omega}};
        if (r.parent) n["parent"] = *r.parent;
        if (r.epsilon) n["epsilon"] = *r.epsilon;
        nodes.push_back(std::move(n));
    }
    return {{"nodes", nodes}};
}

inline std::string to_dot(const SpectrumTree& t) {
    std::ostringstream out;
    out << "digraph spectrum {\n  rankdir=BT;\n";
    for (std::size_t i = 0; i < t.size(); ++i) {
        const auto& n = t.node(static_cast<Index>(i));
        out << "  n" << i << " [label=\"" << n.id << "\\nomega=" << n.omega;
        if (n.epsilon) out << "\\neps=" << *n.epsilon;
        out << "\"];\n";
    }
    for (std::size_t i = 0; i < t.size(); ++i) {
        for (Index c : t.children(static_cast<Index>(i))) out << "  n" << i << " -> n" << c << ";\n";
    }
    out << "}\n";
    return out.str();
}

// ---------------------------------------------------------------------------
// Standard decomposition, skeleton and supports

/// The branches of the standard decomposition: one per child of the root.
inline std::vector<Index> standard_decomposition(const SpectrumTree& t) { return t.children(SpectrumTree::root()); }

using SkeletonElement = std::uint32_t;

/// The skeleton of a standard decomposition with m branches. An element is
/// the set S of branches whose intersection it is: the full set is the
/// domain itself (minimum), the empty set the quotient field (maximum), and
/// ring inclusion A <= B is S_A superset of S_B.
struct Skeleton {
    unsigned branches = 0;

    std::size_t size() const noexcept { return std::size_t{1} << branches; }
    SkeletonElement domain() const noexcept { return static_cast<SkeletonElement>(size() - 1); }
    static constexpr SkeletonElement field() noexcept { return 0; }
    static bool leq(SkeletonElement a, SkeletonElement b) noexcept { return (a & b) == b; }
    /// Intersection of rings.
    static SkeletonElement meet(SkeletonElement a, SkeletonElement b) noexcept { return a | b; }

    Poset as_poset() const {
        return Poset::from_relation(size(), [](Index a, Index b) { return leq(a, b); });
    }
};

inline Skeleton skeleton(const SpectrumTree& t) {
    return Skeleton{static_cast<unsigned>(standard_decomposition(t).size())};
}

/// A family of skeleton elements, stored as a bit set over the 2^m elements.
struct Support {
    unsigned branches = 0;
    std::uint64_t members = 1;  // the field alone

    bool contains(SkeletonElement s) const noexcept { return (members >> s) & 1U; }
    std::size_t size() const noexcept { return static_cast<std::size_t>(std::popcount(members)); }
    bool contains_domain() const noexcept { return contains(Skeleton{branches}.domain()); }
    bool is_field_only() const noexcept { return members == 1; }

    /// Members in descending numeric order (a linear extension of ring inclusion).
    std::vector<SkeletonElement> elements() const {
        std::vector<SkeletonElement> out;
        for (std::size_t s = Skeleton{branches}.size(); s-- > 0;) {
            if (contains(static_cast<SkeletonElement>(s))) out.push_back(static_cast<SkeletonElement>(s));
        }
        return out;
    }

    /// Contains the field and is closed under intersections of rings.
    bool is_valid() const {
        if (!contains(0)) return false;
        const auto els = elements();
        for (auto a : els) {
            for (auto b : els) {
                if (!contains(a | b)) return false;
            }
        }
        return true;
    }

    friend bool operator==(const Support&, const Support&) = default;
    friend auto operator<=>(const Support&, const Support&) = default;
};

/// Every support on m branches: union-closed families of branch subsets
/// containing the empty set, sorted by their member bit set.
inline std::vector<Support> enumerate_supports(unsigned m, const Limits& limits = {}) {
    if (m > limits.max_branches || m > kMaxBranchesHard) {
        throw EnumerationLimitError("support enumeration: " + std::to_string(m) + " branches, bound is " +
                                    std::to_string(std::min(limits.max_branches, kMaxBranchesHard)));
    }
    const std::size_t n = std::size_t{1} << m;
    std::vector<Support> out;
    // Subsets are decided in increasing numeric order, which lists every
    // proper subset first. A subset that is the union of chosen subsets
    // below it is forced in; any other one may go either way.
    auto recurse = [&](auto&& self, std::size_t s, std::uint64_t family) -> void {
        if (s == n) {
            out.push_back(Support{m, family});
            return;
        }
        SkeletonElement covered = 0;
        for (std::size_t r = 1; r < s; ++r) {
            if (((family >> r) & 1U) && (r & s) == r) covered |= static_cast<SkeletonElement>(r);
        }
        if (covered == s) {
            self(self, s + 1, family | (std::uint64_t{1} << s));
            return;
        }
        self(self, s + 1, family);
        self(self, s + 1, family | (std::uint64_t{1} << s));
    };
    recurse(recurse, 1, 1);
    std::sort(out.begin(), out.end(), [](const Support& a, const Support& b) { return a.members < b.members; });
    return out;
}

inline std::vector<Support> enumerate_supports(const SpectrumTree& t, const Limits& limits = {}) {
    return enumerate_supports(skeleton(t).branches, limits);
}

/// Members of the component of a support with respect to a branch: the
/// skeleton elements contained in that branch's ring, in descending order.
inline std::vector<SkeletonElement> component_members(const Support& support, unsigned branch) {
    if (branch >= support.branches) throw PreconditionError("support_component: branch index out of range");
    std::vector<SkeletonElement> out;
    for (auto s : support.elements()) {
        if ((s >> branch) & 1U) out.push_back(s);
    }
    return out;
}

/// The component as a poset under ring inclusion; possibly empty. Element i
/// is component_members(support, branch)[i], so the domain (when present)
/// is element 0 and the minimum.
inline Poset support_component(const Support& support, unsigned branch) {
    const auto members = component_members(support, branch);
    return Poset::from_relation(members.size(),
                                [&](Index a, Index b) { return Skeleton::leq(members[a], members[b]); });
}

// ---------------------------------------------------------------------------
// Surgery

/// The branch at a child c of the root: a fresh root above the subtree at c.
inline SpectrumTree branch_subtree(const SpectrumTree& t, Index child) {
    if (t.parent(child) != SpectrumTree::root()) {
        throw PreconditionError("branch_subtree: '" + t.id(child) + "' is not a child of the root");
    }
    const auto all = t.raw();
    std::vector<RawNode> r{all[SpectrumTree::root()]};
    for (Index i : t.subtree(child)) r.push_back(all[i]);
    return validate(r);
}

/// The tree of the quotient by the prime at `node`: the subtree rooted there,
/// with that node as the new zero prime (omega reset to 1).
inline SpectrumTree quotient_subtree(const SpectrumTree& t, Index node) {
    if (node == SpectrumTree::root()) throw PreconditionError("quotient_subtree: node must not be the root");
    const auto all = t.raw();
    std::vector<RawNode> r;
    for (Index i : t.subtree(node)) r.push_back(all[i]);
    r.front().parent.reset();
    r.front().omega = 1;
    r.front().epsilon.reset();
    return validate(r);
}

enum class PrimeKind { idempotent, nonidempotent };

/// omega of a segment of primes between consecutive branching points:
/// one per non-idempotent prime, two per idempotent prime.
inline std::uint64_t derive_omega(std::span<const PrimeKind> segment) {
    if (segment.empty()) throw PreconditionError("derive_omega: empty segment");
    std::uint64_t total = 0;
    for (auto k : segment) total += k == PrimeKind::idempotent ? 2 : 1;
    return total;
}

}  // namespace semistar
