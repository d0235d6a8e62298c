#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tvreg {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NonPositiveBandwidth : public Error {
public:
    explicit NonPositiveBandwidth(double h)
        : Error("bandwidth must be positive, got " + std::to_string(h)) {}
};

/// The weighted normal matrix of a local fit could not be inverted reliably.
/// `index` carries the offending observation or grid point (1-based) when known.
class SingularDesign : public Error {
public:
    explicit SingularDesign(const std::string& what, std::size_t index = 0)
        : Error(what), index_(index) {}
    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

class InsufficientSample : public Error {
public:
    using Error::Error;
};

class LagExceedsSample : public Error {
public:
    using Error::Error;
};

class LengthMismatch : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class AllCandidatesFailed : public Error {
public:
    using Error::Error;
};

class AllFitsFailed : public Error {
public:
    using Error::Error;
};

class NotIdentifiedConstant : public Error {
public:
    using Error::Error;
};

class EmptyRecords : public Error {
public:
    using Error::Error;
};

class InvalidConfig : public Error {
public:
    using Error::Error;
};

class DataError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace tvreg
