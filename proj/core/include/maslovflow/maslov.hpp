#pragma once

// Maslov index of paths of Lagrangian pairs under varying symplectic forms.
//
// For each parameter value the canonical splitting of J_s is built, both
// Lagrangians are written as graphs of unitary operators U_s, V_s : H+ -> H-,
// and the index is the spectral flow of U_s V_s^{-1} through 1 (co-oriented
// from -i to +i).

#include <functional>
#include <vector>

#include "maslovflow/flow.hpp"
#include "maslovflow/symplectic.hpp"

namespace maslovflow::maslov {

using symplectic::boxplus;
using symplectic::boxplus_pair;
using symplectic::Subspace;
using symplectic::SymplecticSpace;

struct PairSample {
  CMatrix form;  // J_s
  Subspace lambda;
  Subspace mu;
};

struct PairPath {
  std::function<PairSample(double)> sampler;
  double a = 0.0;
  double b = 1.0;
};

/// s -> Hermitian positive definite Gram matrix of an inner product.
using MetricPath = std::function<CMatrix(double)>;

struct MaslovOptions {
  flow::FlowOptions flow;
  // Range tolerance when checking that sampled subspaces are Lagrangian.
  double lagrangian_tol = 1e-6;
  // Splittings come from this metric instead of the standard one when set.
  MetricPath metric;
};

struct MaslovResult {
  int index = 0;
  flow::CrossingReport report;
  double unitary_residual = 0.0;     // max ||W^H W - I||
  double circle_residual = 0.0;      // max | |eigenvalue of W| - 1 |
  double lagrangian_residual = 0.0;  // max isotropy residual of lambda_s, mu_s
};

/// W_s = U_s V_s^{-1} for one sample.
CMatrix pair_unitary_at(const PairSample& sample, const MaslovOptions& opts = {});

MaslovResult maslov_index(const PairPath& path, const MaslovOptions& opts = {});

/// Spectral flow through 1 of the block family [[0, U_s], [V_s^{-1}, 0]].
MaslovResult maslov_index_block(const PairPath& path, const MaslovOptions& opts = {});

struct ProductIdentities {
  int pair = 0;                 // Mas{lambda, mu; P} in (H, omega)
  int boxplus_vs_diagonal = 0;  // Mas{lambda [+] mu, Delta} in H [+] H
  int swapped_flipped = 0;      // Mas{mu, lambda; I - P} in (H, -omega)
  int diagonal_vs_boxplus = 0;  // Mas{Delta, lambda [+] mu} in (H, -omega) [+] (H, omega)

  bool all_equal() const {
    return pair == boxplus_vs_diagonal && pair == swapped_flipped && pair == diagonal_vs_boxplus;
  }
};

ProductIdentities maslov_product_identities(const PairPath& path, const MaslovOptions& opts = {});

/// Real symplectic space (R^{2m}, <J x, y>) with J^2 = -I, J^T = -J, a fixed
/// real Lagrangian and a path of real Lagrangians (frames as columns).
struct RealSymplecticData {
  RMatrix j_real;
  RMatrix lambda;
  std::function<RMatrix(double)> mu_path;
  double a = 0.0;
  double b = 1.0;
};

struct BfComparison {
  int mas = 0;        // Maslov index of the complexified pair
  int mas_bf = 0;     // flow of the Leray generator S through -1, downward
  double residual = 0.0;  // max ||V U^{-1} + conj(S)||
};

/// Leray's complex generator S = phi(V~) phi(V~)^T of mu relative to lambda.
CMatrix leray_generator(const RMatrix& j_real, const RMatrix& lambda, const RMatrix& mu);

BfComparison complexify_and_compare(const RealSymplecticData& data, const MaslovOptions& opts = {});

struct SplittingComparison {
  int canonical = 0;
  int deformed = 0;
};

SplittingComparison splitting_independence_check(const PairPath& path, const MetricPath& metric,
                                                 const MaslovOptions& opts = {});

/// Eigenphases of W_s on a uniform grid (for CSV traces).
std::vector<flow::SpectrumSample> eigenphase_trace(const PairPath& path, int points,
                                                   const MaslovOptions& opts = {});

}  // namespace maslovflow::maslov
