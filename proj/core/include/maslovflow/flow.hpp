#pragma once

// Spectral flow of one-parameter families through a co-oriented curve.
//
// Every family is reduced to "window coordinates": real numbers whose sign
// tells on which side of the curve an eigenvalue lies (negative = the N^-
// side), zero meaning on the curve. The flow over a segment [s_l, s_r] with
// window half-width delta is n^-(s_l) - n^-(s_r), counted inside (-delta,
// delta); coordinates within the zero tolerance belong to N^0. A window is
// accepted only when the counts inside (-delta, delta) and in both outer bands
// delta <= |c| < outer agree at both ends and the midpoint of the segment.

#include <cmath>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "maslovflow/types.hpp"

namespace maslovflow::flow {

struct CoorientedLine {
  enum class Kind { RealAxisAtZero, UnitCircle };

  Kind kind = Kind::RealAxisAtZero;
  // UnitCircle only: the curve crosses the circle at exp(i * anchor_phase);
  // orientation +1 counts eigenphases increasing through the anchor as +1.
  double anchor_phase = 0.0;
  int orientation = 1;

  /// Hermitian families, eigenvalues crossing 0 from left to right.
  static CoorientedLine real_axis();
  /// Unitary families through 1, co-oriented from -i to +i.
  static CoorientedLine unit_circle_at_one();
  /// Unitary families through -1, co-oriented from +i to -i.
  static CoorientedLine unit_circle_at_minus_one_downward();

  /// Window coordinate of an eigenvalue of a unitary matrix.
  double coordinate(Complex eigenvalue) const;
};

struct SpectrumSample {
  double s = 0.0;
  std::vector<double> coords;  // sorted ascending, with multiplicity
  // Coordinates are the complete ordered spectrum of a Hermitian matrix, so
  // the k-th smallest coordinate is a continuous branch.
  bool ordered_branches = false;
  // Complete spectrum of a unitary matrix: coordinates live on a circle of
  // circumference 2 * horizon and branches are matched up to a cyclic shift.
  bool circular = false;
  // Coordinates with |c| >= horizon are not reported.
  double horizon = INFINITY;
};

struct WindowTolerances {
  double zero = 0.0;    // |c| <= zero  ->  N^0
  double margin = 0.0;  // no coordinate within margin of +-delta
};

struct WindowCount {
  int n_minus = 0;
  int n_zero = 0;
  int n_plus = 0;

  int total() const { return n_minus + n_zero + n_plus; }
};

WindowCount window_count(const SpectrumSample& sample, double delta, const WindowTolerances& tol);

struct FlowOptions {
  int initial_segments = 16;
  double delta_max = 0.0;  // absolute; 0 selects 0.25 * scale
  int max_depth = 12;
  double scale = 0.0;      // 0 selects the family's natural scale
};

struct Segment {
  double s_left = 0.0;
  double s_right = 0.0;
  double delta = 0.0;
  double outer = 0.0;  // counts in delta <= |c| < outer are constant on the segment
  int n_minus_left = 0;
  int n_minus_right = 0;
  int contribution = 0;
};

struct CrossingReport {
  std::vector<double> partition;
  std::vector<Segment> segments;
  int total = 0;
  double scale = 0.0;
};

using SpectrumSampler = std::function<SpectrumSample(double)>;
using MatrixFamily = std::function<CMatrix(double)>;

/// Adaptive-partition spectral flow for any sampler of window coordinates.
/// Zero tolerance 1e-9*scale, window margin 1e-6*scale.
CrossingReport spectral_flow(const SpectrumSampler& sampler, double a, double b, double scale,
                             const FlowOptions& opts = {});

/// Spectral flow of a Hermitian (RealAxisAtZero) or unitary (UnitCircle)
/// matrix family.
CrossingReport spectral_flow(const MatrixFamily& family, const CoorientedLine& line, double a, double b,
                             const FlowOptions& opts = {});

/// Window coordinates of a single matrix. Throws NotHermitian / NotUnitary.
SpectrumSample sample_matrix(const CMatrix& m, const CoorientedLine& line, double s);

/// Sum of the eigenprojections of `a` for eigenvalues inside the disk.
CMatrix spectral_projection(const CMatrix& a, Complex center, double radius);

/// Uniform samples on [a, b] (points >= 2).
std::vector<SpectrumSample> trace(const SpectrumSampler& sampler, double a, double b, int points);

/// CSV with header s,coord_1,...,coord_n; short rows are padded with empty fields.
void write_trace_csv(std::ostream& out, const std::vector<SpectrumSample>& samples);

}  // namespace maslovflow::flow
