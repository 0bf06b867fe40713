#pragma once

#include <stdexcept>
#include <string>

namespace ipf {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// --- input / netlist ---
struct ParseError : Error { using Error::Error; };
struct InvalidNetlist : Error { using Error::Error; };
struct SingularSystem : Error { using Error::Error; };
struct PortCountMismatch : Error { using Error::Error; };

// --- analytic models ---
struct ZeroDetuning : Error { using Error::Error; };
struct NegativeRealAdmittance : Error { using Error::Error; };
struct UnsolvableSign : Error { using Error::Error; };
struct StraddlePole : Error { using Error::Error; };
struct PoleDetuning : Error { using Error::Error; };
struct DivisionByZero : Error { using Error::Error; };

// --- design / optimization ---
struct NonConvergence : Error { using Error::Error; };
struct RetuneFailure : Error { using Error::Error; };
struct BracketFailure : Error { using Error::Error; };
struct ValidityCeiling : Error { using Error::Error; };
struct NoInteriorMinimum : Error { using Error::Error; };
struct DuplicateFrequency : Error { using Error::Error; };

// --- fitting ---
struct FitDiverged : Error { using Error::Error; };
struct InsufficientSpan : Error { using Error::Error; };

}  // namespace ipf
