#pragma once

#include <algorithm>
#include <tuple>
#include <vector>

#include "semistar/poset.hpp"

namespace semistar::testing {

/// True when some bijection a -> b preserves and reflects the order.
/// Backtracking over candidates with matching (down-set, up-set, covers)
/// sizes; fine for the few-dozen-element posets used in tests.
inline bool order_isomorphic(const Poset& a, const Poset& b) {
    if (a.size() != b.size() || a.relation_size() != b.relation_size()) return false;
    const std::size_t n = a.size();
    auto signature = [](const Poset& p, Index i) {
        return std::make_tuple(p.down(i).count(), p.up(i).count(), p.lower_covers(i).size());
    };
    std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> sa, sb;
    for (Index i = 0; i < n; ++i) {
        sa.push_back(signature(a, i));
        sb.push_back(signature(b, i));
    }
    auto sorted_a = sa;
    auto sorted_b = sb;
    std::sort(sorted_a.begin(), sorted_a.end());
    std::sort(sorted_b.begin(), sorted_b.end());
    if (sorted_a != sorted_b) return false;

    std::vector<Index> image(n);
    std::vector<bool> used(n, false);
    auto extend = [&](auto&& self, Index i) -> bool {
        if (i == n) return true;
        for (Index c = 0; c < n; ++c) {
            if (used[c] || sb[c] != sa[i]) continue;
            bool ok = true;
            for (Index j = 0; j < i && ok; ++j) {
                ok = a.leq(j, i) == b.leq(image[j], c) && a.leq(i, j) == b.leq(c, image[j]);
            }
            if (!ok) continue;
            used[c] = true;
            image[i] = c;
            if (self(self, i + 1)) return true;
            used[c] = false;
        }
        return false;
    };
    return extend(extend, 0);
}

}  // namespace semistar::testing
