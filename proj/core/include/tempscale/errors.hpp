#pragma once

#include <stdexcept>
#include <string>

namespace tempscale {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BackendError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct VerifierError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct StoreError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace tempscale
