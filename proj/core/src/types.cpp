#include "maslovflow/types.hpp"

namespace maslovflow {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotSkewHermitian: return "NotSkewHermitian";
    case ErrorCode::Degenerate: return "Degenerate";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotLagrangian: return "NotLagrangian";
    case ErrorCode::UnbalancedSplitting: return "UnbalancedSplitting";
    case ErrorCode::BadMetric: return "BadMetric";
    case ErrorCode::SpectrumOnBoundary: return "SpectrumOnBoundary";
    case ErrorCode::CoordOnWindowBoundary: return "CoordOnWindowBoundary";
    case ErrorCode::UnresolvedFamily: return "UnresolvedFamily";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotUnitary: return "NotUnitary";
    case ErrorCode::NotLagrangianReal: return "NotLagrangianReal";
    case ErrorCode::NonUnitaryGenerator: return "NonUnitaryGenerator";
    case ErrorCode::SingularJ: return "SingularJ";
    case ErrorCode::SingularP: return "SingularP";
    case ErrorCode::WindowBoundaryEigenvalue: return "WindowBoundaryEigenvalue";
    case ErrorCode::RootCluster: return "RootCluster";
    case ErrorCode::InvalidTrials: return "InvalidTrials";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnknownIdentifier: return "UnknownIdentifier";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

bool is_numerical(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidTrials:
    case ErrorCode::SyntaxError:
    case ErrorCode::UnknownIdentifier:
    case ErrorCode::ConfigError:
      return false;
    default:
      return true;
  }
}

double max_abs(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace maslovflow
