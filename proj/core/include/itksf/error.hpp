#pragma once

#include <stdexcept>
#include <string>

namespace itksf {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A minimal subset that cannot determine a unique model.
class DegenerateSubset : public Error {
public:
    explicit DegenerateSubset(const std::string& what) : Error(what) {}
};

/// A numeric routine received non-finite input or produced no usable result.
class NumericalFailure : public Error {
public:
    explicit NumericalFailure(const std::string& what) : Error(what) {}
};

class DimensionMismatch : public Error {
public:
    explicit DimensionMismatch(const std::string& what) : Error(what) {}
};

class OutOfRange : public Error {
public:
    explicit OutOfRange(const std::string& what) : Error(what) {}
};

class LengthMismatch : public Error {
public:
    explicit LengthMismatch(const std::string& what) : Error(what) {}
};

/// Change records that do not match the preference-state transition they claim to describe.
class InconsistentChangeSet : public Error {
public:
    explicit InconsistentChangeSet(const std::string& what) : Error(what) {}
};

/// Input file failed to parse; line is 1-based.
class ParseError : public Error {
public:
    ParseError(const std::string& what, int line)
        : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

class MissingColumn : public Error {
public:
    explicit MissingColumn(const std::string& what) : Error(what) {}
};

/// Ground-truth labels required but absent.
class NoLabels : public Error {
public:
    explicit NoLabels(const std::string& what) : Error(what) {}
};

class BudgetTooSmall : public Error {
public:
    explicit BudgetTooSmall(const std::string& what) : Error(what) {}
};

class InvalidConfig : public Error {
public:
    explicit InvalidConfig(const std::string& what) : Error(what) {}
};

}  // namespace itksf
