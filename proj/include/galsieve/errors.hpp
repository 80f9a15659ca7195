#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace galsieve {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class CompositeModulus : public Error {
public:
    explicit CompositeModulus(std::uint64_t n)
        : Error("modulus " + std::to_string(n) + " is not prime"), modulus(n) {}
    std::uint64_t modulus;
};

class ModulusOutOfRange : public Error {
public:
    using Error::Error;
};

class ZeroInverse : public Error {
public:
    ZeroInverse() : Error("inverse of a non-unit requested") {}
};

class ModulusMismatch : public Error {
public:
    ModulusMismatch() : Error("operands live in different residue rings") {}
};

class SingularCurve : public Error {
public:
    using Error::Error;
};

class HasseViolation : public Error {
public:
    using Error::Error;
};

class EqualCharacteristic : public Error {
public:
    EqualCharacteristic(std::uint64_t p)
        : Error("Frobenius at p = " + std::to_string(p) + " reduced modulo the same prime") {}
};

class CapExceeded : public Error {
public:
    explicit CapExceeded(std::size_t cap)
        : Error("subgroup closure exceeded cap of " + std::to_string(cap) + " elements") {}
};

class NotASubgroup : public Error {
public:
    using Error::Error;
};

class NotNormal : public Error {
public:
    using Error::Error;
};

/// Raised when the hypotheses of the coset bound do not hold; `reason` names the failed one.
class HypothesisFailed : public Error {
public:
    explicit HypothesisFailed(std::string why)
        : Error("hypothesis failed: " + why), reason(std::move(why)) {}
    std::string reason;
};

class OmegaOutOfRange : public Error {
public:
    using Error::Error;
};

class DeltaOutOfRange : public Error {
public:
    using Error::Error;
};

class NotInCoset : public Error {
public:
    using Error::Error;
};

class NotConjugationStable : public Error {
public:
    using Error::Error;
};

/// An internal invariant did not hold. The CLI maps this to exit code 3.
class InvariantViolation : public Error {
public:
    using Error::Error;
};

#define GALSIEVE_ASSERT(cond, msg)                                                     \
    do {                                                                               \
        if (!(cond)) throw ::galsieve::InvariantViolation(std::string("invariant: ") + \
                                                          (msg));                      \
    } while (0)

}  // namespace galsieve
