#pragma once

// Exact multivariate polynomials over the rationals, and tensor-product
// Newton interpolation on integer grids.

#include <algorithm>
#include <array>
#include <cstddef>
#include <functional>
#include <iterator>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "semistar/error.hpp"
#include "semistar/limits.hpp"

namespace semistar {

/// A polynomial with exact rational coefficients in named variables.
///
/// Canonical form: variables sorted by name, only variables that occur in
/// some term are kept, no zero coefficients, terms in graded lexicographic
/// order (highest total degree first, ties by exponent vector, descending).
class MultiPoly {
public:
    using Exponents = std::vector<unsigned>;

    struct GradedLexDesc {
        bool operator()(const Exponents& a, const Exponents& b) const {
            const auto da = degree_of(a);
            const auto db = degree_of(b);
            if (da != db) return da > db;
            return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
        }
    };
    using Terms = std::map<Exponents, Rational, GradedLexDesc>;

    MultiPoly() = default;

    MultiPoly(std::vector<std::string> vars, const std::vector<std::pair<Exponents, Rational>>& terms) {
        assign(std::move(vars), terms);
    }

    static MultiPoly constant(const Rational& c) {
        return MultiPoly({}, {{Exponents{}, c}});
    }

    static MultiPoly variable(const std::string& name) {
        return MultiPoly({name}, {{Exponents{1}, Rational(1)}});
    }

    /// c[0] + c[1]*name + c[2]*name^2 + ...
    static MultiPoly univariate(const std::string& name, std::span<const Rational> coefficients) {
        std::vector<std::pair<Exponents, Rational>> terms;
        for (std::size_t i = 0; i < coefficients.size(); ++i) {
            terms.emplace_back(Exponents{static_cast<unsigned>(i)}, coefficients[i]);
        }
        return MultiPoly({name}, terms);
    }

    const std::vector<std::string>& variables() const noexcept { return vars_; }
    const Terms& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }

    /// Total degree; -1 for the zero polynomial.
    int total_degree() const {
        if (terms_.empty()) return -1;
        return static_cast<int>(degree_of(terms_.begin()->first));
    }

    /// Largest exponent of the named variable (0 when absent).
    unsigned degree_in(const std::string& name) const {
        const auto slot = slot_of(name);
        if (!slot) return 0;
        unsigned d = 0;
        for (const auto& [e, c] : terms_) d = std::max(d, e[*slot]);
        return d;
    }

    /// Coefficient of the monomial given as variable -> exponent.
    Rational coefficient(const std::map<std::string, unsigned>& monomial) const {
        Exponents e(vars_.size(), 0);
        for (const auto& [name, power] : monomial) {
            if (power == 0) continue;
            const auto slot = slot_of(name);
            if (!slot) return 0;
            e[*slot] = power;
        }
        const auto it = terms_.find(e);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    Rational constant_term() const { return coefficient({}); }

    Rational evaluate(const std::map<std::string, Rational>& point) const {
        std::vector<Rational> values;
        values.reserve(vars_.size());
        for (const auto& v : vars_) {
            const auto it = point.find(v);
            if (it == point.end()) throw MissingVariableError("no value assigned to variable '" + v + "'");
            values.push_back(it->second);
        }
        Rational total = 0;
        for (const auto& [e, c] : terms_) {
            Rational term = c;
            for (std::size_t i = 0; i < e.size(); ++i) {
                for (unsigned k = 0; k < e[i]; ++k) term *= values[i];
            }
            total += term;
        }
        return total;
    }

    /// Renames variables; names not in the map are kept.
    MultiPoly renamed(const std::map<std::string, std::string>& renaming) const {
        std::vector<std::string> vars = vars_;
        for (auto& v : vars) {
            if (auto it = renaming.find(v); it != renaming.end()) v = it->second;
        }
        return MultiPoly(std::move(vars), term_list());
    }

    MultiPoly operator-() const {
        MultiPoly out = *this;
        for (auto& [e, c] : out.terms_) c = -c;
        return out;
    }

    friend MultiPoly operator+(const MultiPoly& a, const MultiPoly& b) {
        auto vars = merged_vars(a.vars_, b.vars_);
        auto terms = a.embedded(vars);
        for (auto& t : b.embedded(vars)) terms.push_back(std::move(t));
        return MultiPoly(std::move(vars), terms);
    }

    friend MultiPoly operator-(const MultiPoly& a, const MultiPoly& b) { return a + (-b); }

    friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
        auto vars = merged_vars(a.vars_, b.vars_);
        const auto ta = a.embedded(vars);
        const auto tb = b.embedded(vars);
        std::vector<std::pair<Exponents, Rational>> terms;
        terms.reserve(ta.size() * tb.size());
        for (const auto& [ea, ca] : ta) {
            for (const auto& [eb, cb] : tb) {
                Exponents e(vars.size());
                for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
                terms.emplace_back(std::move(e), ca * cb);
            }
        }
        return MultiPoly(std::move(vars), terms);
    }

    friend MultiPoly operator*(const MultiPoly& a, const Rational& s) { return a.scaled(s); }
    friend MultiPoly operator*(const Rational& s, const MultiPoly& a) { return a.scaled(s); }

    MultiPoly scaled(const Rational& s) const {
        auto terms = term_list();
        for (auto& [e, c] : terms) c *= s;
        return MultiPoly(vars_, terms);
    }

    MultiPoly& operator+=(const MultiPoly& b) { return *this = *this + b; }
    MultiPoly& operator*=(const MultiPoly& b) { return *this = *this * b; }

    friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
        return a.vars_ == b.vars_ && a.terms_ == b.terms_;
    }

    /// Human-readable form, e.g. "1/4*a^2*b^2 + 3/4*a^2*b - 2*b + 7".
    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::ostringstream out;
        bool first = true;
        for (const auto& [e, c] : terms_) {
            const bool negative = c < 0;
            const Rational magnitude = negative ? Rational(-c) : c;
            if (first) {
                if (negative) out << '-';
            } else {
                out << (negative ? " - " : " + ");
            }
            first = false;
            std::string monomial;
            for (std::size_t i = 0; i < e.size(); ++i) {
                if (e[i] == 0) continue;
                if (!monomial.empty()) monomial += '*';
                monomial += vars_[i];
                if (e[i] > 1) monomial += '^' + std::to_string(e[i]);
            }
            if (monomial.empty()) {
                out << magnitude.str();
            } else if (magnitude == 1) {
                out << monomial;
            } else {
                out << magnitude.str() << '*' << monomial;
            }
        }
        return out.str();
    }

private:
    static unsigned degree_of(const Exponents& e) {
        unsigned d = 0;
        for (unsigned x : e) d += x;
        return d;
    }

    std::optional<std::size_t> slot_of(const std::string& name) const {
        const auto it = std::find(vars_.begin(), vars_.end(), name);
        if (it == vars_.end()) return std::nullopt;
        return static_cast<std::size_t>(it - vars_.begin());
    }

    std::vector<std::pair<Exponents, Rational>> term_list() const {
        return {terms_.begin(), terms_.end()};
    }

    static std::vector<std::string> merged_vars(const std::vector<std::string>& a, const std::vector<std::string>& b) {
        std::vector<std::string> out;
        std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
        return out;
    }

    std::vector<std::pair<Exponents, Rational>> embedded(const std::vector<std::string>& vars) const {
        std::vector<std::size_t> where(vars_.size());
        for (std::size_t i = 0; i < vars_.size(); ++i) {
            where[i] = static_cast<std::size_t>(std::find(vars.begin(), vars.end(), vars_[i]) - vars.begin());
        }
        std::vector<std::pair<Exponents, Rational>> out;
        out.reserve(terms_.size());
        for (const auto& [e, c] : terms_) {
            Exponents f(vars.size(), 0);
            for (std::size_t i = 0; i < e.size(); ++i) f[where[i]] = e[i];
            out.emplace_back(std::move(f), c);
        }
        return out;
    }

    void assign(std::vector<std::string> vars, const std::vector<std::pair<Exponents, Rational>>& terms) {
        for (const auto& [e, c] : terms) {
            if (e.size() != vars.size()) throw PreconditionError("exponent vector length differs from variable count");
        }
        // Merge equal names, sort, then drop variables that never occur.
        std::vector<std::string> sorted = vars;
        std::sort(sorted.begin(), sorted.end());
        sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
        std::vector<std::size_t> where(vars.size());
        for (std::size_t i = 0; i < vars.size(); ++i) {
            where[i] = static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), vars[i]) - sorted.begin());
        }
        std::map<Exponents, Rational> sums;
        for (const auto& [e, c] : terms) {
            Exponents f(sorted.size(), 0);
            for (std::size_t i = 0; i < e.size(); ++i) f[where[i]] += e[i];
            sums[std::move(f)] += c;
        }
        std::vector<bool> used(sorted.size(), false);
        for (const auto& [e, c] : sums) {
            if (c == 0) continue;
            for (std::size_t i = 0; i < e.size(); ++i) used[i] = used[i] || e[i] > 0;
        }
        vars_.clear();
        for (std::size_t i = 0; i < sorted.size(); ++i) {
            if (used[i]) vars_.push_back(sorted[i]);
        }
        terms_.clear();
        for (const auto& [e, c] : sums) {
            if (c == 0) continue;
            Exponents f;
            for (std::size_t i = 0; i < e.size(); ++i) {
                if (used[i]) f.push_back(e[i]);
            }
            terms_.emplace(std::move(f), c);
        }
    }

    std::vector<std::string> vars_;
    Terms terms_;
};

inline std::ostream& operator<<(std::ostream& os, const MultiPoly& p) { return os << p.to_string(); }

// ---------------------------------------------------------------------------
// JSON form {vars, terms:[{exps, num, den}]}

namespace detail {

inline nlohmann::json integer_to_json(const Integer& v) {
    if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max()) {
        return nlohmann::json(static_cast<std::int64_t>(v));
    }
    return nlohmann::json(v.str());
}

inline Integer integer_from_json(const nlohmann::json& j) {
    if (j.is_number_integer()) return Integer(j.get<std::int64_t>());
    if (j.is_number_unsigned()) return Integer(j.get<std::uint64_t>());
    if (j.is_string()) {
        try {
            return Integer(j.get<std::string>());
        } catch (const std::exception&) {
            throw ParseError("not an integer: " + j.get<std::string>());
        }
    }
    throw ParseError("expected an integer, got " + j.dump());
}

}  // namespace detail

inline nlohmann::json to_json(const MultiPoly& p) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [e, c] : p.terms()) {
        terms.push_back({{"exps", e},
                         {"num", detail::integer_to_json(boost::multiprecision::numerator(c))},
                         {"den", detail::integer_to_json(boost::multiprecision::denominator(c))}});
    }
    return {{"vars", p.variables()}, {"terms", terms}};
}

inline MultiPoly poly_from_json(const nlohmann::json& j) {
    try {
        auto vars = j.at("vars").get<std::vector<std::string>>();
        std::vector<std::pair<MultiPoly::Exponents, Rational>> terms;
        for (const auto& t : j.at("terms")) {
            const Integer den = detail::integer_from_json(t.at("den"));
            if (den <= 0) throw ParseError("denominator must be positive");
            terms.emplace_back(t.at("exps").get<MultiPoly::Exponents>(),
                               Rational(detail::integer_from_json(t.at("num")), den));
        }
        return MultiPoly(std::move(vars), terms);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed polynomial JSON: ") + e.what());
    } catch (const PreconditionError& e) {
        throw ParseError(e.what());
    }
}

// ---------------------------------------------------------------------------
// Interpolation

/// One axis of an interpolation grid. The grid on this axis is
/// origin, origin + 1, ..., origin + degree_bound.
struct GridAxis {
    std::string name;
    unsigned degree_bound = 0;
    Integer origin = 1;
    /// When false the evaluator is only defined on the grid points of this
    /// axis, so verification reuses them instead of stepping off the grid.
    bool verify_off_grid = true;
};

using Evaluator = std::function<Rational(std::span<const Integer>)>;

/// The unique polynomial of degree <= degree_bound in each axis variable
/// that agrees with the evaluator on the grid, checked at off-grid points
/// origin + degree_bound + {1, 2}. Throws InconsistentEvaluatorError when
/// the check fails.
inline MultiPoly interpolate(const Evaluator& evaluator, std::span<const GridAxis> axes) {
    const std::size_t k = axes.size();
    std::vector<std::size_t> extent(k), stride(k);
    std::size_t total = 1;
    for (std::size_t j = k; j-- > 0;) {
        extent[j] = axes[j].degree_bound + 1;
        stride[j] = total;
        total *= extent[j];
    }

    std::vector<Rational> table(total);
    std::vector<Integer> point(k);
    for (std::size_t flat = 0; flat < total; ++flat) {
        for (std::size_t j = 0; j < k; ++j) point[j] = axes[j].origin + (flat / stride[j]) % extent[j];
        table[flat] = evaluator(point);
    }

    // Divided differences along each axis; nodes are unit-spaced, so the
    // level-l difference divides by l.
    for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t flat = 0; flat < total; ++flat) {
            if ((flat / stride[j]) % extent[j] != 0) continue;
            for (std::size_t level = 1; level < extent[j]; ++level) {
                for (std::size_t i = extent[j] - 1; i >= level; --i) {
                    auto& hi = table[flat + i * stride[j]];
                    const auto& lo = table[flat + (i - 1) * stride[j]];
                    hi = (hi - lo) / Rational(static_cast<long>(level));
                }
            }
        }
    }

    // Newton basis N_i(x) = (x - origin)(x - origin - 1)...(x - origin - i + 1).
    std::vector<std::vector<MultiPoly>> basis(k);
    for (std::size_t j = 0; j < k; ++j) {
        basis[j].push_back(MultiPoly::constant(1));
        for (std::size_t i = 1; i < extent[j]; ++i) {
            const Rational shift(axes[j].origin + static_cast<long>(i - 1));
            basis[j].push_back(basis[j].back() * (MultiPoly::variable(axes[j].name) - MultiPoly::constant(shift)));
        }
    }

    MultiPoly result;
    for (std::size_t flat = 0; flat < total; ++flat) {
        if (table[flat] == 0) continue;
        MultiPoly term = MultiPoly::constant(table[flat]);
        for (std::size_t j = 0; j < k; ++j) term *= basis[j][(flat / stride[j]) % extent[j]];
        result += term;
    }

    // Verification on the 2^k corners made of off-grid values.
    std::vector<std::array<Integer, 2>> checks(k);
    bool any_off_grid = false;
    for (std::size_t j = 0; j < k; ++j) {
        const Integer top = axes[j].origin + axes[j].degree_bound;
        if (axes[j].verify_off_grid) {
            checks[j] = {top + 1, top + 2};
            any_off_grid = true;
        } else {
            checks[j] = {axes[j].origin, top};
        }
    }
    if (any_off_grid) {
        std::map<std::string, Rational> assignment;
        for (std::size_t corner = 0; corner < (std::size_t{1} << k); ++corner) {
            for (std::size_t j = 0; j < k; ++j) {
                point[j] = checks[j][(corner >> j) & 1U];
                assignment[axes[j].name] = Rational(point[j]);
            }
            const Rational expected = evaluator(point);
            const Rational got = result.evaluate(assignment);
            if (expected != got) {
                std::ostringstream msg;
                msg << "interpolation check failed at (";
                for (std::size_t j = 0; j < k; ++j) msg << (j ? ", " : "") << axes[j].name << '=' << point[j];
                msg << "): evaluator gives " << expected.str() << ", polynomial gives " << got.str()
                    << "; degree bounds too small";
                throw InconsistentEvaluatorError(msg.str());
            }
        }
    }
    return result;
}

/// Interpolation with every grid starting at 1; the evaluator receives
/// coordinates in the key order of degree_bounds.
inline MultiPoly interpolate(const Evaluator& evaluator, const std::map<std::string, unsigned>& degree_bounds) {
    std::vector<GridAxis> axes;
    for (const auto& [name, bound] : degree_bounds) axes.push_back(GridAxis{name, bound});
    return interpolate(evaluator, std::span<const GridAxis>(axes));
}

/// binomial(n + k - 1, k) expanded in the variable `name`, the number of
/// order-preserving maps from a k-chain into an n-chain.
inline MultiPoly binomial_order_poly(unsigned k, const std::string& name = "n") {
    if (k == 0) throw PreconditionError("binomial_order_poly: k must be positive");
    MultiPoly out = MultiPoly::constant(1);
    Integer factorial = 1;
    for (unsigned i = 0; i < k; ++i) {
        out *= MultiPoly::variable(name) + MultiPoly::constant(Rational(static_cast<long>(i)));
        factorial *= i + 1;
    }
    return out.scaled(Rational(Integer(1), factorial));
}

}  // namespace semistar
