#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace semistar {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An enumeration would exceed a configured bound. Results are never truncated.
class EnumerationLimitError : public Error {
public:
    using Error::Error;
};

/// The relation handed to a Poset constructor is not a partial order.
class InvalidPosetError : public Error {
public:
    using Error::Error;
};

/// A precondition of an operation does not hold (wrong shape, bad index, ...).
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// A spectral tree description violates one or more invariants.
/// Every violation found is kept in issues().
class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<std::string> issues)
        : Error(join(issues)), issues_(std::move(issues)) {}

    const std::vector<std::string>& issues() const noexcept { return issues_; }

private:
    static std::string join(const std::vector<std::string>& issues) {
        std::string out = "invalid spectral tree:";
        for (const auto& i : issues) {
            out += "\n  - ";
            out += i;
        }
        return out;
    }

    std::vector<std::string> issues_;
};

/// Input text could not be parsed.
class ParseError : public Error {
public:
    using Error::Error;
};

/// A node id does not name a node of the tree.
class UnknownNodeError : public Error {
public:
    using Error::Error;
};

/// A polynomial evaluation point does not assign every variable.
class MissingVariableError : public Error {
public:
    using Error::Error;
};

/// Interpolated polynomial disagrees with the evaluator off the grid
/// (the declared degree bounds are too small).
class InconsistentEvaluatorError : public Error {
public:
    using Error::Error;
};

}  // namespace semistar
