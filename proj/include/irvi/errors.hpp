#pragma once

#include <stdexcept>
#include <string>

namespace irvi {

// Caller broke a documented precondition (dimension mismatch, bad parameter).
class ContractViolation : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class UnsupportedOperation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// A solver produced a non-finite iterate.
class DivergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConstructionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace irvi

namespace irvi {

// Invalid experiment specification or command line.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace irvi
