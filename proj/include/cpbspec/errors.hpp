// errors.hpp — exception hierarchy shared by the library and the CLI
//
// The CLI maps these onto process exit codes: config_error -> 2,
// domain_error (and derived) -> 3, io_error -> 4.

#pragma once

#include <stdexcept>
#include <string>

namespace cpbspec {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid physical or numerical input (bad parameter ranges, empty
// distributions, singular couplings).
struct domain_error : error {
    using error::error;
};

// Malformed or semantically invalid configuration documents.
struct config_error : error {
    using error::error;
};

// Filesystem failures while writing artifacts.
struct io_error : error {
    using error::error;
};

// Fock-space cutoff too small for the requested photon distribution.
struct cutoff_error : domain_error {
    using domain_error::domain_error;
};

// Quadrature settings that violate a stated resolution bound.
struct resolution_error : domain_error {
    using domain_error::domain_error;
};

} // namespace cpbspec
