#pragma once

// Counter-based deterministic random draws and random symplectic data.
//
// Draw k of stream (seed, stream, trial) is splitmix64 applied to a key
// mixed from the three identifiers plus k, so every trial can be replayed in
// isolation and in any order.

#include <cstdint>

#include "maslovflow/symplectic.hpp"

namespace maslovflow::random {

std::uint64_t splitmix64(std::uint64_t x);

class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t trial);

  std::uint64_t next();
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi);
  /// Uniform integer in [lo, hi].
  int uniform_int(int lo, int hi);
  /// Standard normal (Box-Muller, one draw per call).
  double normal();
  Complex complex_normal();
  std::uint64_t draws() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

CMatrix gaussian(CounterRng& rng, Index rows, Index cols);
RMatrix real_gaussian(CounterRng& rng, Index rows, Index cols);
CMatrix hermitian(CounterRng& rng, Index n);
/// Haar-distributed unitary (QR of a Gaussian matrix with phase fix).
CMatrix unitary(CounterRng& rng, Index n);
/// exp(i H) for Hermitian H.
CMatrix unitary_exp(const CMatrix& h);
/// Skew-Hermitian invertible J = i Q diag(d) Q^H with n/2 positive and n/2
/// negative d, |d| in [0.5, 2].
CMatrix balanced_form(CounterRng& rng, Index n);
/// Well conditioned invertible matrix I + 0.4 G / sqrt(n).
CMatrix invertible(CounterRng& rng, Index n);
/// Hermitian positive definite M M^H + 0.5 I.
CMatrix metric(CounterRng& rng, Index n);

/// Graph of a unitary in the canonical splitting of `space`.
symplectic::Subspace lagrangian_from_unitary(const symplectic::SymplecticSpace& space, const CMatrix& u);
symplectic::Subspace random_lagrangian(CounterRng& rng, const symplectic::SymplecticSpace& space);

}  // namespace maslovflow::random
