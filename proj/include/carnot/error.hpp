#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace carnot {

/// Failure categories raised by the library. The CLI maps them onto exit codes.
enum class ErrorKind {
    DimensionMismatch,
    IndexOutOfRange,
    ZeroPolynomial,
    ZeroLambda,
    SyntaxError,
    UnknownVariable,
    BadDimension,
    Unsupported,
    NotSkew,
    DependentMatrices,
    NoGroupLaw,
    MalformedCoefficients,
    NoNoncommutingPair,
    ZeroB,
    SingularSystem,
    InvalidParams,
    CertificateFailure,
    UnsupportedGroup,
    BadDecomposition,
    ZeroAcceptance,
    NotHomogeneous,
    NegativeDegree,
    RankDeficient,
    InvalidInput,
};

inline std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorKind::ZeroPolynomial: return "ZeroPolynomial";
        case ErrorKind::ZeroLambda: return "ZeroLambda";
        case ErrorKind::SyntaxError: return "SyntaxError";
        case ErrorKind::UnknownVariable: return "UnknownVariable";
        case ErrorKind::BadDimension: return "BadDimension";
        case ErrorKind::Unsupported: return "Unsupported";
        case ErrorKind::NotSkew: return "NotSkew";
        case ErrorKind::DependentMatrices: return "DependentMatrices";
        case ErrorKind::NoGroupLaw: return "NoGroupLaw";
        case ErrorKind::MalformedCoefficients: return "MalformedCoefficients";
        case ErrorKind::NoNoncommutingPair: return "NoNoncommutingPair";
        case ErrorKind::ZeroB: return "ZeroB";
        case ErrorKind::SingularSystem: return "SingularSystem";
        case ErrorKind::InvalidParams: return "InvalidParams";
        case ErrorKind::CertificateFailure: return "CertificateFailure";
        case ErrorKind::UnsupportedGroup: return "UnsupportedGroup";
        case ErrorKind::BadDecomposition: return "BadDecomposition";
        case ErrorKind::ZeroAcceptance: return "ZeroAcceptance";
        case ErrorKind::NotHomogeneous: return "NotHomogeneous";
        case ErrorKind::NegativeDegree: return "NegativeDegree";
        case ErrorKind::RankDeficient: return "RankDeficient";
        case ErrorKind::InvalidInput: return "InvalidInput";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Parse failure carrying the byte offset into the input text.
class SyntaxError : public Error {
public:
    SyntaxError(std::size_t position, const std::string& message)
        : Error(ErrorKind::SyntaxError, message + " at position " + std::to_string(position)),
          position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

}  // namespace carnot
