#pragma once

// Finite-dimensional complex symplectic linear algebra.
//
// A symplectic form on C^n is stored as its matrix J, with
//   omega(x, y) = <Jx, y> = y^H J x,
// J skew-Hermitian and invertible. Subspaces are carried by orthonormal
// frames; every constructor re-orthonormalizes its input.

#include <string_view>

#include "maslovflow/types.hpp"

namespace maslovflow::symplectic {

class SymplecticSpace {
 public:
  /// Validates J (square, skew-Hermitian, invertible) and stores it.
  static SymplecticSpace make(const CMatrix& form);

  Index dim() const { return form_.rows(); }
  const CMatrix& form() const { return form_; }

  Complex omega(const CVector& x, const CVector& y) const;

 private:
  explicit SymplecticSpace(CMatrix form) : form_(std::move(form)) {}
  CMatrix form_;
};

class Subspace {
 public:
  /// Orthonormal basis of the column span of `spanning` (QR with column
  /// pivoting, rank cut at tol::kRank relative to the largest column norm).
  static Subspace span(const CMatrix& spanning);
  static Subspace zero(Index ambient_dim);
  static Subspace full(Index ambient_dim);
  /// Adopts a frame that is already orthonormal (checked to tol::kOrth).
  static Subspace from_orthonormal(CMatrix frame);

  Index ambient_dim() const { return frame_.rows(); }
  Index dim() const { return frame_.cols(); }
  const CMatrix& frame() const { return frame_; }

  /// Orthonormal frame of the orthogonal complement in C^n.
  CMatrix complement_frame() const;
  /// Orthogonal projector onto the subspace.
  CMatrix projector() const { return frame_ * frame_.adjoint(); }

  bool contains(const Subspace& other, double tol = tol::kRank) const;
  bool same_as(const Subspace& other, double tol = tol::kRank) const;

 private:
  explicit Subspace(CMatrix frame) : frame_(std::move(frame)) {}
  CMatrix frame_;
};

/// H = H+ (+) H- with -i*omega positive definite on H+ and +i*omega positive
/// definite on H-, omega(H+, H-) = 0.
struct Splitting {
  Subspace plus;
  Subspace minus;
  CMatrix projection;    // range H+, kernel H-
  CMatrix metric_plus;   // Gram of -i*omega on plus.frame()
  CMatrix metric_minus;  // Gram of +i*omega on minus.frame()
  CMatrix h_plus;        // h_+ orthonormal frame of H+
  CMatrix h_minus;       // h_- orthonormal frame of H-

  bool balanced() const { return plus.dim() == minus.dim(); }
};

/// Generating operator of a Lagrangian: lambda = { x + U x : x in H+ } with U
/// written in the h_+/h_- orthonormal frames of the splitting.
struct GraphRep {
  CMatrix u_matrix;
  Splitting splitting;
};

enum class SubspaceClass { Isotropic, Coisotropic, Lagrangian, General };

std::string_view to_string(SubspaceClass c);

struct PairIndex {
  int dim_intersection = 0;
  int codim_sum = 0;
  int index = 0;
};

struct NormalizedMetric {
  CMatrix gram;       // (J^H J)^{1/2}
  CMatrix form;       // J' = G^{-1} J, J'^2 = -I
};

/// Canonical splitting: positive / negative eigenspaces of K = -iJ.
Splitting make_splitting(const SymplecticSpace& space);

/// Splitting induced by the inner product <x, y>_G = y^H G x: eigenspaces of
/// -i G^{-1} J, which is G-self-adjoint.
Splitting make_splitting(const SymplecticSpace& space, const CMatrix& metric);

Subspace annihilator(const SymplecticSpace& space, const Subspace& lambda);

/// Range comparisons between lambda and its annihilator at `tol`.
SubspaceClass classify(const SymplecticSpace& space, const Subspace& lambda, double tol = tol::kRank);

/// max |omega(x, y)| over frame vectors of lambda; zero for isotropic spaces.
double isotropy_residual(const SymplecticSpace& space, const Subspace& lambda);

/// Intersection dimension from principal angles: counts singular values of
/// frame_l^H frame_m that are >= 1 - tol::kRank.
int intersection_dim(const Subspace& lambda, const Subspace& mu);

PairIndex pair_index(const SymplecticSpace& space, const Subspace& lambda, const Subspace& mu);

GraphRep graph_rep(const SymplecticSpace& space, const Splitting& splitting, const Subspace& lambda,
                   double lagrangian_tol = tol::kRank);

/// Frame of the graph {x + U x} rebuilt from a generating operator.
Subspace reconstruct(const GraphRep& rep);

/// W = U V^{-1} for lambda = G(U), mu = G(V).
CMatrix pair_unitary(const SymplecticSpace& space, const Splitting& splitting, const Subspace& lambda,
                     const Subspace& mu, double lagrangian_tol = tol::kRank);

/// Number of eigenvalues of a unitary matrix within tol::kPhase (angle) of 1.
int eigenvalue_one_multiplicity(const CMatrix& w, double phase_tol = tol::kPhase);

NormalizedMetric normalize_metric(const SymplecticSpace& space);

/// Symplectic product (H1, omega1) (+) (H2, -omega2).
SymplecticSpace boxplus(const SymplecticSpace& first, const SymplecticSpace& second);

/// lambda boxplus mu = { (x, y) : x in lambda, y in mu } and the diagonal.
struct BoxplusPair {
  Subspace product;
  Subspace diagonal;
};
BoxplusPair boxplus_pair(const Subspace& lambda, const Subspace& mu);

}  // namespace maslovflow::symplectic
