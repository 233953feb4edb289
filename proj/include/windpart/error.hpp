#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace windpart {

enum class Errc {
    EmptyInput,
    NonMonotonicTimestamps,
    AllDaysDropped,
    SeriesTooShort,
    InvalidPeriod,
    IndexOutOfRange,
    InvalidArgument,
    TooShort,
    NonFiniteInput,
    InsufficientHistory,
    AllMasked,
    NoDominantPeriod,
    NotEnoughDays,
    EmptySeries,
    LengthMismatch,
    NotDivisible,
    EmptyList,
    MissingHistory,
    UnknownMethod,
    FileNotFound,
    ParseError,
    InconsistentSamplingInterval,
    NegativeSpeed,
    WriteError,
};

constexpr std::string_view to_string(Errc c) noexcept
{
    switch (c) {
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::NonMonotonicTimestamps: return "NonMonotonicTimestamps";
    case Errc::AllDaysDropped: return "AllDaysDropped";
    case Errc::SeriesTooShort: return "SeriesTooShort";
    case Errc::InvalidPeriod: return "InvalidPeriod";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::TooShort: return "TooShort";
    case Errc::NonFiniteInput: return "NonFiniteInput";
    case Errc::InsufficientHistory: return "InsufficientHistory";
    case Errc::AllMasked: return "AllMasked";
    case Errc::NoDominantPeriod: return "NoDominantPeriod";
    case Errc::NotEnoughDays: return "NotEnoughDays";
    case Errc::EmptySeries: return "EmptySeries";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::NotDivisible: return "NotDivisible";
    case Errc::EmptyList: return "EmptyList";
    case Errc::MissingHistory: return "MissingHistory";
    case Errc::UnknownMethod: return "UnknownMethod";
    case Errc::FileNotFound: return "FileNotFound";
    case Errc::ParseError: return "ParseError";
    case Errc::InconsistentSamplingInterval: return "InconsistentSamplingInterval";
    case Errc::NegativeSpeed: return "NegativeSpeed";
    case Errc::WriteError: return "WriteError";
    }
    return "Unknown";
}

/// Every failure raised by the library. `code()` identifies the condition;
/// `what()` carries a human-readable message prefixed with the code name.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code)
    {
    }

    [[nodiscard]] Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

} // namespace windpart
