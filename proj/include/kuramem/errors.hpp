#pragma once

#include <stdexcept>
#include <string>

namespace kuramem {

/// Invalid parameter or input outside an operation's domain (CLI exit code 2).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Winding-vector enumeration larger than the configured budget (CLI exit code 3).
class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// classify_stability was handed a state whose residual exceeds tolerance.
class NotEquilibrium : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Integration produced non-finite phases.
class IntegrationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Sum of wrapped differences around a cycle was not a multiple of 2*pi.
class WindingError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class RetrievalFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace kuramem
