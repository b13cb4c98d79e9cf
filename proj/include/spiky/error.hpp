#pragma once

#include <stdexcept>
#include <string>

namespace spiky {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Two fields (or a field and a symbol) do not share grid and hbar.
class GridMismatch : public Error {
public:
    using Error::Error;
};

/// A numerical precondition failed: support escapes the grid, a point lies
/// outside the sampled domain, a field violates the Wigner bound.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Conditioning on a measurement outcome whose probability is below p_floor.
class ImpossibleOutcome : public Error {
public:
    using Error::Error;
};

/// Fock-space truncation too small for the requested displacement.
class TruncationError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Malformed input file.
class FormatError : public Error {
public:
    using Error::Error;
};

}  // namespace spiky
