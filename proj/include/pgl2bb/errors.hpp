#pragma once

#include <stdexcept>
#include <string>

namespace pgl2bb {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// --- field arithmetic ---
struct DivisionByZero : Error {
    DivisionByZero() : Error("division by zero in GF(2^e)") {}
};
struct UnsupportedDegree : Error {
    explicit UnsupportedDegree(const std::string& what) : Error(what) {}
};
struct CoefficientNotInF2 : Error {
    CoefficientNotInF2() : Error("minimal-polynomial coefficient fails c^2 = c; field oracle corrupted") {}
};
struct SingularGram : Error {
    SingularGram() : Error("trace Gram matrix is singular; field oracle inconsistent") {}
};
struct GeneratorsInsufficient : Error {
    GeneratorsInsufficient() : Error("collected field elements lie in a proper subfield") {}
};

// --- matrix group ---
struct TraceZero : Error {
    TraceZero() : Error("matrix square root undefined: trace is zero") {}
};
struct Undefined : Error {
    explicit Undefined(const std::string& what) : Error(what) {}
};
struct ZeroArgument : Error {
    explicit ZeroArgument(const std::string& what) : Error(what) {}
};

// --- straight-line programs ---
struct IndexOutOfRange : Error {
    explicit IndexOutOfRange(const std::string& what) : Error(what) {}
};

// --- black box field ---
struct NotInU : Error {
    NotInU() : Error("element does not centralize u; not in U") {}
};
struct IdentityArgument : Error {
    IdentityArgument() : Error("identity element cannot be lifted to B/U") {}
};
struct OracleInconsistent : Error {
    explicit OracleInconsistent(const std::string& what) : Error(what) {}
};

// --- recognition / isomorphism ---
struct NotRecognized : Error {
    explicit NotRecognized(const std::string& stage) : Error("not recognized at stage: " + stage) {}
};
struct PreconditionFailed : Error {
    explicit PreconditionFailed(const std::string& what) : Error(what) {}
};
struct EvenOrderProduct : Error {
    EvenOrderProduct() : Error("product of involutions has even order") {}
};
struct Indeterminate : Error {
    explicit Indeterminate(const std::string& what) : Error(what) {}
};

}  // namespace pgl2bb
