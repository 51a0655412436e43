#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace maslovflow {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;
using Index = Eigen::Index;

// Numerical tolerances shared by every module.
namespace tol {
inline constexpr double kRank = 1e-8;    // relative to the largest singular value
inline constexpr double kSym = 1e-10;    // skew/Hermitian symmetry, relative
inline constexpr double kOrth = 1e-10;   // orthonormality / unitarity of frames
inline constexpr double kPhase = 1e-8;   // radians, eigenvalue-one detection
inline constexpr double kUnit = 1e-8;    // unitary families
}  // namespace tol

enum class ErrorCode {
  NotSkewHermitian,
  Degenerate,
  DimensionMismatch,
  NotLagrangian,
  UnbalancedSplitting,
  BadMetric,
  SpectrumOnBoundary,
  CoordOnWindowBoundary,
  UnresolvedFamily,
  NotHermitian,
  NotUnitary,
  NotLagrangianReal,
  NonUnitaryGenerator,
  SingularJ,
  SingularP,
  WindowBoundaryEigenvalue,
  RootCluster,
  InvalidTrials,
  SyntaxError,
  UnknownIdentifier,
  ConfigError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// True for failures of the numerics (as opposed to malformed input).
bool is_numerical(ErrorCode code);

double max_abs(const CMatrix& m);

}  // namespace maslovflow
