#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace airborne {

/// Root of the library's exception hierarchy.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid argument outside its mathematical domain (probabilities, levels, deltas).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Symmetric factorization hit a non-positive pivot (collinear columns).
class NotPositiveDefinite : public Error {
public:
    using Error::Error;
};

// ---------------------------------------------------------------------------
// Data ingestion / series handling
// ---------------------------------------------------------------------------

class DataError : public Error {
public:
    using Error::Error;
};

class MissingColumn : public DataError {
public:
    explicit MissingColumn(const std::string& column)
        : DataError("missing required column: " + column), column_(column) {}
    const std::string& column() const { return column_; }

private:
    std::string column_;
};

class NonContiguousYears : public DataError {
public:
    explicit NonContiguousYears(int year)
        : DataError("non-contiguous year sequence at " + std::to_string(year)), year_(year) {}
    int year() const { return year_; }

private:
    int year_;
};

class ParseError : public DataError {
public:
    ParseError(std::size_t row, const std::string& column, const std::string& what)
        : DataError("row " + std::to_string(row) + ", column '" + column + "': " + what),
          row_(row), column_(column) {}
    std::size_t row() const { return row_; }
    const std::string& column() const { return column_; }

private:
    std::size_t row_;
    std::string column_;
};

class EmptyFile : public DataError {
public:
    using DataError::DataError;
};

class RangeError : public DataError {
public:
    using DataError::DataError;
};

class TooShort : public DataError {
public:
    using DataError::DataError;
};

// ---------------------------------------------------------------------------
// Estimation
// ---------------------------------------------------------------------------

class EstimationError : public Error {
public:
    using Error::Error;
};

class RankError : public EstimationError {
public:
    using EstimationError::EstimationError;
};

/// Deming closed form divides by 2 e'g; e'g = 0 leaves the estimator undefined.
class DegenerateCross : public EstimationError {
public:
    using EstimationError::EstimationError;
};

/// IV ratio divides by z'x.
class ZeroCross : public EstimationError {
public:
    using EstimationError::EstimationError;
};

/// Fewer instruments than regressors.
class OrderCondition : public EstimationError {
public:
    using EstimationError::EstimationError;
};

class SampleMismatch : public EstimationError {
public:
    using EstimationError::EstimationError;
};

// ---------------------------------------------------------------------------
// Bootstrap
// ---------------------------------------------------------------------------

class TooFewReplicates : public EstimationError {
public:
    using EstimationError::EstimationError;
};

class ReplicateFailure : public EstimationError {
public:
    ReplicateFailure(std::size_t replicate, const std::string& reason)
        : EstimationError("bootstrap replicate " + std::to_string(replicate) +
                          " failed: " + reason),
          replicate_(replicate) {}
    std::size_t replicate() const { return replicate_; }

private:
    std::size_t replicate_;
};

} // namespace airborne
