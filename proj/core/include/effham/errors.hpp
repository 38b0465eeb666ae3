// errors.hpp — Exception hierarchy shared by every effham module

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace effham {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Operands live on different composite spaces.
class SpaceMismatch : public Error {
public:
    using Error::Error;
};

// Bad leg index, wrong factor kind, malformed space description.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

class InvalidLabel : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : Error(what + " (at offset " + std::to_string(offset) + ")"), offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

class DegenerateResonance : public Error {
public:
    using Error::Error;
};

class StepTooLarge : public Error {
public:
    using Error::Error;
};

class LeakageExceeded : public Error {
public:
    using Error::Error;
};

class NonHermitianGenerator : public Error {
public:
    using Error::Error;
};

class WindowTooShort : public Error {
public:
    using Error::Error;
};

} // namespace effham
