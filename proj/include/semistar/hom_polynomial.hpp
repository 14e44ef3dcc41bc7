#pragma once

#include <string>
#include <vector>

#include "semistar/poset.hpp"
#include "semistar/polynomial.hpp"

namespace semistar {

/// The order polynomial of source alone: n -> |hom(source, n-chain)|,
/// recovered from direct counts at n = 1..|source|+1.
inline MultiPoly order_polynomial(const Poset& source, const std::string& var = "n") {
    const GridAxis axis{var, static_cast<unsigned>(source.size())};
    return interpolate(
        [&](std::span<const Integer> point) {
            return Rational(count_hom(source, chain(static_cast<std::size_t>(point[0]))));
        },
        std::span<const GridAxis>(&axis, 1));
}

/// H(n) = |hom(source, target (+) n-chain)|, a polynomial of degree |source|.
///
/// Every map splits along the down-set D of elements landing in target:
/// |hom^D| = |hom(D, target)| * |hom(source \ D, n-chain)|, and the second
/// factor is an order polynomial.
inline MultiPoly hom_polynomial(const Poset& source, const Poset& target, const std::string& var = "n",
                                const Limits& limits = {}) {
    MultiPoly total;
    for (const auto& ideal : down_sets(source, limits.max_down_set_source)) {
        const auto inside = to_indices(ideal);
        const Integer into_target = count_hom(source.induced(inside), target);
        if (into_target == 0) continue;
        Poset::Bits rest_bits = ideal;
        rest_bits.flip();
        const auto rest = to_indices(rest_bits);
        total += order_polynomial(source.induced(rest), var).scaled(Rational(into_target));
    }
    return total;
}

}  // namespace semistar
