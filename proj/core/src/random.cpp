#include "maslovflow/random.hpp"

#include <cmath>
#include <numbers>

namespace maslovflow::random {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t trial)
    : key_(splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ trial)) {}

std::uint64_t CounterRng::next() { return splitmix64(key_ + 0x632be59bd9b4e019ULL * ++counter_); }

double CounterRng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double CounterRng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

int CounterRng::uniform_int(int lo, int hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo + 1);
  return lo + static_cast<int>(next() % span);
}

double CounterRng::normal() {
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Complex CounterRng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return Complex(re, im) / std::sqrt(2.0);
}

CMatrix gaussian(CounterRng& rng, Index rows, Index cols) {
  CMatrix out(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) out(i, j) = rng.complex_normal();
  }
  return out;
}

RMatrix real_gaussian(CounterRng& rng, Index rows, Index cols) {
  RMatrix out(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) out(i, j) = rng.normal();
  }
  return out;
}

CMatrix hermitian(CounterRng& rng, Index n) {
  const CMatrix g = gaussian(rng, n, n);
  return 0.5 * (g + g.adjoint());
}

CMatrix unitary(CounterRng& rng, Index n) {
  const CMatrix g = gaussian(rng, n, n);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index k = 0; k < n; ++k) {
    const double mag = std::abs(r(k, k));
    if (mag > 0.0) q.col(k) *= r(k, k) / mag;
  }
  return q;
}

CMatrix unitary_exp(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(0.5 * (h + h.adjoint()));
  const Index n = h.rows();
  CVector phases(n);
  for (Index k = 0; k < n; ++k) phases(k) = std::exp(Complex(0.0, eig.eigenvalues()(k)));
  return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
}

CMatrix balanced_form(CounterRng& rng, Index n) {
  const CMatrix q = unitary(rng, n);
  CVector d(n);
  for (Index k = 0; k < n; ++k) d(k) = (k % 2 == 0 ? 1.0 : -1.0) * rng.uniform(0.5, 2.0);
  return Complex(0.0, 1.0) * q * d.asDiagonal() * q.adjoint();
}

CMatrix invertible(CounterRng& rng, Index n) {
  return CMatrix::Identity(n, n) + 0.4 / std::sqrt(static_cast<double>(n)) * gaussian(rng, n, n);
}

CMatrix metric(CounterRng& rng, Index n) {
  const CMatrix m = gaussian(rng, n, n) / std::sqrt(static_cast<double>(n));
  return m * m.adjoint() + 0.5 * CMatrix::Identity(n, n);
}

symplectic::Subspace lagrangian_from_unitary(const symplectic::SymplecticSpace& space, const CMatrix& u) {
  const symplectic::Splitting split = symplectic::make_splitting(space);
  return symplectic::Subspace::span(split.h_plus + split.h_minus * u);
}

symplectic::Subspace random_lagrangian(CounterRng& rng, const symplectic::SymplecticSpace& space) {
  return lagrangian_from_unitary(space, unitary(rng, space.dim() / 2));
}

}  // namespace maslovflow::random
