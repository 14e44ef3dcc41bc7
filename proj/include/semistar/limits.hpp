#pragma once

#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace semistar {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Enumeration bounds shared by every module. Exceeding one is an
/// EnumerationLimitError, never a silently truncated result.
struct Limits {
    /// Largest source poset whose down-sets may be listed.
    std::size_t max_down_set_source = 20;
    /// Largest number of order-preserving maps enum_hom may return.
    std::uint64_t max_maps = 10'000'000;
    /// Largest number of branches of a standard decomposition.
    unsigned max_branches = 4;
    /// Largest number of semistar elements enumerated explicitly.
    std::size_t max_elements = 2'000'000;
    /// Largest poset whose full order relation is materialized.
    std::size_t max_materialized = 6000;

    /// Defaults, with max_maps taken from SEMISTAR_MAX_MAPS when set.
    static Limits from_environment() {
        Limits l;
        if (const char* env = std::getenv("SEMISTAR_MAX_MAPS"); env != nullptr && *env != '\0') {
            l.max_maps = std::stoull(env);
        }
        return l;
    }
};

/// Absolute cap on the branch count: supports are bit sets over the
/// 2^m skeleton elements and must fit a 64-bit word.
inline constexpr unsigned kMaxBranchesHard = 6;

}  // namespace semistar
