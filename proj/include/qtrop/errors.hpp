#pragma once

#include <stdexcept>
#include <string>

namespace qtrop {

enum class ErrorKind {
    PrecisionExhausted,
    InsufficientPrecision,
    RootNotRepresentable,
    ExponentNotDivisible,
    NoDominantTerm,
    IterationDivergence,
    MalformedForm,
    NotAnNthPower,
    ExplicitFormRequired,
    InconsistentLevels,
    MalformedDatum,
    NoRealizableRoots,
    GluingMismatch,
    TooLarge,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

inline const char* error_kind_name(ErrorKind k)
{
    switch (k) {
        case ErrorKind::PrecisionExhausted: return "PrecisionExhausted";
        case ErrorKind::InsufficientPrecision: return "InsufficientPrecision";
        case ErrorKind::RootNotRepresentable: return "RootNotRepresentable";
        case ErrorKind::ExponentNotDivisible: return "ExponentNotDivisible";
        case ErrorKind::NoDominantTerm: return "NoDominantTerm";
        case ErrorKind::IterationDivergence: return "IterationDivergence";
        case ErrorKind::MalformedForm: return "MalformedForm";
        case ErrorKind::NotAnNthPower: return "NotAnNthPower";
        case ErrorKind::ExplicitFormRequired: return "ExplicitFormRequired";
        case ErrorKind::InconsistentLevels: return "InconsistentLevels";
        case ErrorKind::MalformedDatum: return "MalformedDatum";
        case ErrorKind::NoRealizableRoots: return "NoRealizableRoots";
        case ErrorKind::GluingMismatch: return "GluingMismatch";
        case ErrorKind::TooLarge: return "TooLarge";
    }
    return "Unknown";
}

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what)
{
    throw Error(kind, std::string(error_kind_name(kind)) + ": " + what);
}

}  // namespace qtrop
