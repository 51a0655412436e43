#pragma once

// Brute-force reference computations used by the unit and acceptance tests.
// Nothing here calls into the library's own rank, splitting or flow code.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "maslovflow/bvp.hpp"
#include "maslovflow/random.hpp"

namespace oracle {

using maslovflow::CMatrix;
using maslovflow::Complex;
using maslovflow::Index;

inline constexpr double kPi = std::numbers::pi;
inline const Complex kI{0.0, 1.0};

inline CMatrix scalar(Complex v) {
  CMatrix m(1, 1);
  m(0, 0) = v;
  return m;
}

inline int rank(const CMatrix& a, double rel = 1e-8) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<CMatrix> svd(a);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  int r = 0;
  for (Index k = 0; k < sv.size(); ++k) r += sv(k) > rel * sv(0);
  return r;
}

// dim(A) + dim(B) - dim(A + B) from spanning sets.
inline int intersection_dim(const CMatrix& a, const CMatrix& b) {
  CMatrix both(a.rows(), a.cols() + b.cols());
  both << a, b;
  return rank(a) + rank(b) - rank(both);
}

inline int sum_dim(const CMatrix& a, const CMatrix& b) {
  CMatrix both(a.rows(), a.cols() + b.cols());
  both << a, b;
  return rank(both);
}

// True when the column spans agree.
inline bool same_span(const CMatrix& a, const CMatrix& b) {
  const int ra = rank(a);
  return ra == rank(b) && ra == sum_dim(a, b);
}

// Null space of a^H via the SVD: vectors y with a^H y = 0.
inline CMatrix left_null(const CMatrix& a) {
  const Index n = a.rows();
  if (a.cols() == 0) return CMatrix::Identity(n, n);
  Eigen::JacobiSVD<CMatrix> svd(a.adjoint(), Eigen::ComputeFullV);
  const int r = rank(a);
  return svd.matrixV().rightCols(n - r);
}

// max |omega(x, y)| over frame columns, omega(x, y) = y^H J x.
inline double isotropy(const CMatrix& j, const CMatrix& frame) {
  return (frame.adjoint() * j * frame).cwiseAbs().maxCoeff();
}

// (1 / 2 pi i) \oint (z - A)^{-1} dz on a circle, trapezoidal rule.
inline CMatrix contour_projection(const CMatrix& a, Complex center, double radius, int nodes = 16) {
  const Index n = a.rows();
  CMatrix p = CMatrix::Zero(n, n);
  for (int k = 0; k < nodes; ++k) {
    const Complex w = std::polar(1.0, 2.0 * kPi * k / nodes);
    const Complex z = center + radius * w;
    const CMatrix resolvent = (z * CMatrix::Identity(n, n) - a).inverse();
    p += (radius * w / static_cast<double>(nodes)) * resolvent;
  }
  return p;
}

// Spectral flow of continuous real branches through 0 read off the endpoint
// values: arrivals at zero belong to N^0, departures from zero likewise.
inline int flow_from_branches(const std::vector<std::function<double(double)>>& branches, double a, double b,
                              double zero = 1e-9) {
  int out = 0;
  for (const auto& f : branches) out += (f(a) < -zero ? 1 : 0) - (f(b) < -zero ? 1 : 0);
  return out;
}

// Signed zero crossings of sorted eigenvalue branches on a uniform grid.
inline int flow_by_grid(const std::function<CMatrix(double)>& family, double a, double b, int points,
                        double zero = 1e-9) {
  auto sorted = [&](double s) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(family(s), Eigen::EigenvaluesOnly);
    return Eigen::VectorXd(es.eigenvalues());
  };
  const Eigen::VectorXd first = sorted(a);
  const Eigen::VectorXd last = sorted(b);
  int out = 0;
  Eigen::VectorXd prev = first;
  for (int k = 1; k < points; ++k) {
    const Eigen::VectorXd cur = sorted(a + (b - a) * k / (points - 1));
    for (Index i = 0; i < cur.size(); ++i) {
      const bool was_neg = k == 1 ? prev(i) < -zero : prev(i) < 0.0;
      const bool is_neg = k == points - 1 ? cur(i) < -zero : cur(i) < 0.0;
      out += (was_neg ? 1 : 0) - (is_neg ? 1 : 0);
    }
    prev = cur;
  }
  return out;
}

// Composite Simpson rule.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 2000) {
  const double h = (b - a) / n;
  double acc = f(a) + f(b);
  for (int k = 1; k < n; ++k) acc += (k % 2 ? 4.0 : 2.0) * f(a + k * h);
  return acc * h / 3.0;
}

// First-order scalar problems -j x' - b x = lambda x on [0, 1] with
// j = i g(t): eigenvalues solve  integral (lambda + b) / g = theta + 2 pi k.
inline double s3_branch(double s, int k) {
  auto g = [s](double t) { return 1.0 + 0.5 * s * std::sin(kPi * t); };
  const double d = simpson([&](double t) { return 1.0 / g(t); }, 0.0, 1.0);
  const double c = simpson([&](double t) { return std::cos(t) / g(t); }, 0.0, 1.0);
  return (2.0 * kPi * (s + k) - s * c) / d;
}

inline double s5_branch(double s, int k) {
  auto g = [s](double t) {
    const double x = std::sin(kPi * t);
    return 1.0 + 0.3 * s * x * x;
  };
  auto b = [s](double t) { return 2.0 * kPi * (1.5 * s - 0.25) + 0.4 * std::cos(2.0 * kPi * t); };
  const double d = simpson([&](double t) { return 1.0 / g(t); }, 0.0, 1.0);
  const double c = simpson([&](double t) { return b(t) / g(t); }, 0.0, 1.0);
  return (2.0 * kPi * k - c) / d;
}

inline double s1_branch(double s, int k) { return 2.0 * kPi * (s + k); }
inline double s2_branch(double s, int k) { return static_cast<double>(k) * k - 1.5 * s; }

template <typename F>
std::vector<std::function<double(double)>> branch_set(F f, int lo, int hi) {
  std::vector<std::function<double(double)>> out;
  for (int k = lo; k <= hi; ++k) out.push_back([f, k](double s) { return f(s, k); });
  return out;
}

// Seeded smooth second-order family with an s-dependent potential well, and
// a random subspace R of C^{2m}.
struct RandomProblem {
  maslovflow::bvp::SecondOrderFamily family;
  maslovflow::symplectic::Subspace r = maslovflow::symplectic::Subspace::zero(2);
};

inline RandomProblem random_problem(std::uint64_t seed, std::uint64_t trial, Index m) {
  using namespace maslovflow;
  random::CounterRng rng(seed, 1, trial);
  const CMatrix p1 = random::hermitian(rng, m);
  const CMatrix wobble = 0.3 / std::max(1.0, max_abs(p1)) * p1;
  const CMatrix q0 = 0.5 * random::gaussian(rng, m, m);
  const CMatrix r0 = random::hermitian(rng, m);
  const CMatrix r1 = random::hermitian(rng, m);
  RandomProblem out;
  auto& f = out.family;
  f.m = m;
  f.T = 2.0;
  f.p = [=](double s, double t) { return CMatrix(CMatrix::Identity(m, m) + s * std::sin(t) * wobble); };
  f.q = [=](double s, double t) { return CMatrix(s * std::cos(2.0 * t) * q0); };
  f.r = [=](double s, double t) { return CMatrix(r0 - 4.0 * s * CMatrix::Identity(m, m) + s * t * r1); };
  out.r = symplectic::Subspace::span(random::gaussian(rng, 2 * m, m));
  return out;
}

}  // namespace oracle
