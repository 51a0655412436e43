#include "maslovflow/symplectic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace maslovflow::symplectic {

namespace {

const Complex kI{0.0, 1.0};

void require_same_ambient(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim()) {
    throw Error(ErrorCode::DimensionMismatch, "subspaces live in C^" + std::to_string(a.ambient_dim()) +
                                                  " and C^" + std::to_string(b.ambient_dim()));
  }
}

void require_ambient(const SymplecticSpace& space, const Subspace& s) {
  if (s.ambient_dim() != space.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "subspace of C^" + std::to_string(s.ambient_dim()) +
                                                  " in symplectic space of dimension " +
                                                  std::to_string(space.dim()));
  }
}

// Make the first component of non-negligible size real and positive.
void normalize_phase(CVector& v) {
  const double scale = v.cwiseAbs().maxCoeff();
  for (Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > 1e-12 * scale) {
      v *= std::conj(v(i)) / std::abs(v(i));
      return;
    }
  }
}

CMatrix h_orthonormal(const CMatrix& frame, const CMatrix& gram) {
  if (frame.cols() == 0) return frame;
  Eigen::LLT<CMatrix> llt(gram);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::Degenerate, "form is not definite on a splitting half");
  }
  // frame * L^{-H}
  CMatrix lower = llt.matrixL();
  CMatrix inv_adj = lower.adjoint().triangularView<Eigen::Upper>().solve(
      CMatrix::Identity(frame.cols(), frame.cols()));
  return frame * inv_adj;
}

Splitting assemble(const SymplecticSpace& space, Subspace plus, Subspace minus) {
  const CMatrix k = -kI * space.form();
  CMatrix metric_plus = plus.frame().adjoint() * k * plus.frame();
  CMatrix metric_minus = -(minus.frame().adjoint() * k * minus.frame());
  metric_plus = 0.5 * (metric_plus + metric_plus.adjoint()).eval();
  metric_minus = 0.5 * (metric_minus + metric_minus.adjoint()).eval();
  CMatrix h_plus = h_orthonormal(plus.frame(), metric_plus);
  CMatrix h_minus = h_orthonormal(minus.frame(), metric_minus);

  const Index n = space.dim();
  CMatrix basis(n, n);
  basis << plus.frame(), minus.frame();
  CMatrix keep = CMatrix::Zero(n, n);
  keep.leftCols(plus.dim()) = plus.frame();
  CMatrix projection = keep * basis.partialPivLu().inverse();

  return Splitting{std::move(plus),        std::move(minus),  std::move(projection), std::move(metric_plus),
                   std::move(metric_minus), std::move(h_plus), std::move(h_minus)};
}

}  // namespace

std::string_view to_string(SubspaceClass c) {
  switch (c) {
    case SubspaceClass::Isotropic: return "Isotropic";
    case SubspaceClass::Coisotropic: return "Coisotropic";
    case SubspaceClass::Lagrangian: return "Lagrangian";
    case SubspaceClass::General: return "General";
  }
  return "General";
}

SymplecticSpace SymplecticSpace::make(const CMatrix& form) {
  if (form.rows() != form.cols() || form.rows() == 0) {
    throw Error(ErrorCode::DimensionMismatch, "symplectic form must be a non-empty square matrix");
  }
  const double scale = max_abs(form);
  if (max_abs(form.adjoint() + form) > tol::kSym * scale) {
    throw Error(ErrorCode::NotSkewHermitian, "J^H + J does not vanish");
  }
  Eigen::JacobiSVD<CMatrix> svd(form);
  const auto& sv = svd.singularValues();
  if (sv(0) == 0.0 || sv(sv.size() - 1) <= tol::kRank * sv(0)) {
    throw Error(ErrorCode::Degenerate, "symplectic form is not invertible");
  }
  return SymplecticSpace(form);
}

Complex SymplecticSpace::omega(const CVector& x, const CVector& y) const {
  return y.dot(form_ * x);  // y^H J x
}

Subspace Subspace::span(const CMatrix& spanning) {
  const Index n = spanning.rows();
  if (spanning.cols() == 0) return zero(n);
  Eigen::ColPivHouseholderQR<CMatrix> qr(spanning);
  const auto& r = qr.matrixR();
  const Index diag = std::min(r.rows(), r.cols());
  const double lead = diag > 0 ? std::abs(r(0, 0)) : 0.0;
  Index rank = 0;
  if (lead > 1e-300) {
    while (rank < diag && std::abs(r(rank, rank)) > tol::kRank * lead) ++rank;
  }
  CMatrix q = qr.householderQ() * CMatrix::Identity(n, rank);
  return Subspace(std::move(q));
}

Subspace Subspace::zero(Index ambient_dim) { return Subspace(CMatrix(ambient_dim, 0)); }

Subspace Subspace::full(Index ambient_dim) { return Subspace(CMatrix::Identity(ambient_dim, ambient_dim)); }

Subspace Subspace::from_orthonormal(CMatrix frame) {
  const Index k = frame.cols();
  if (max_abs(frame.adjoint() * frame - CMatrix::Identity(k, k)) > tol::kOrth) return span(frame);
  return Subspace(std::move(frame));
}

CMatrix Subspace::complement_frame() const {
  const Index n = ambient_dim();
  if (dim() == 0) return CMatrix::Identity(n, n);
  Eigen::HouseholderQR<CMatrix> qr(frame_);
  CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
  return q.rightCols(n - dim());
}

bool Subspace::contains(const Subspace& other, double tol) const {
  require_same_ambient(*this, other);
  if (other.dim() == 0) return true;
  const CMatrix residual = other.frame() - frame_ * (frame_.adjoint() * other.frame());
  return max_abs(residual) <= tol;
}

bool Subspace::same_as(const Subspace& other, double tol) const {
  return dim() == other.dim() && contains(other, tol) && other.contains(*this, tol);
}

Splitting make_splitting(const SymplecticSpace& space) {
  const Index n = space.dim();
  const CMatrix k = -kI * space.form();
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(0.5 * (k + k.adjoint()));
  const RVector& values = eig.eigenvalues();
  const double scale = values.cwiseAbs().maxCoeff();

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return values(a) > values(b); });

  std::vector<CVector> plus_vecs;
  std::vector<CVector> minus_vecs;
  for (Index idx : order) {
    if (std::abs(values(idx)) <= tol::kRank * scale) {
      throw Error(ErrorCode::Degenerate, "-iJ has a zero eigenvalue");
    }
    CVector v = eig.eigenvectors().col(idx);
    normalize_phase(v);
    (values(idx) > 0 ? plus_vecs : minus_vecs).push_back(std::move(v));
  }
  CMatrix plus(n, static_cast<Index>(plus_vecs.size()));
  CMatrix minus(n, static_cast<Index>(minus_vecs.size()));
  for (std::size_t i = 0; i < plus_vecs.size(); ++i) plus.col(static_cast<Index>(i)) = plus_vecs[i];
  for (std::size_t i = 0; i < minus_vecs.size(); ++i) minus.col(static_cast<Index>(i)) = minus_vecs[i];

  return assemble(space, Subspace::from_orthonormal(std::move(plus)), Subspace::from_orthonormal(std::move(minus)));
}

Splitting make_splitting(const SymplecticSpace& space, const CMatrix& metric) {
  const Index n = space.dim();
  if (metric.rows() != n || metric.cols() != n) {
    throw Error(ErrorCode::BadMetric, "metric has the wrong size");
  }
  if (max_abs(metric - metric.adjoint()) > tol::kSym * std::max(1.0, max_abs(metric))) {
    throw Error(ErrorCode::BadMetric, "metric is not Hermitian");
  }
  Eigen::LLT<CMatrix> llt(0.5 * (metric + metric.adjoint()));
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::BadMetric, "metric is not positive definite");
  }
  const CMatrix lower = llt.matrixL();
  const CMatrix k = -kI * space.form();
  // L^{-1} K L^{-H} is Hermitian and shares the signature of -i G^{-1} J.
  const CMatrix l_inv = lower.triangularView<Eigen::Lower>().solve(CMatrix::Identity(n, n));
  CMatrix reduced = l_inv * k * l_inv.adjoint();
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(0.5 * (reduced + reduced.adjoint()));
  const RVector& values = eig.eigenvalues();
  const double scale = values.cwiseAbs().maxCoeff();

  std::vector<Index> plus_idx;
  std::vector<Index> minus_idx;
  for (Index i = n - 1; i >= 0; --i) {
    if (std::abs(values(i)) <= tol::kRank * scale) {
      throw Error(ErrorCode::Degenerate, "-iG^{-1}J has a zero eigenvalue");
    }
    (values(i) > 0 ? plus_idx : minus_idx).push_back(i);
  }
  const CMatrix vectors = l_inv.adjoint() * eig.eigenvectors();
  CMatrix plus(n, static_cast<Index>(plus_idx.size()));
  CMatrix minus(n, static_cast<Index>(minus_idx.size()));
  for (std::size_t i = 0; i < plus_idx.size(); ++i) plus.col(static_cast<Index>(i)) = vectors.col(plus_idx[i]);
  for (std::size_t i = 0; i < minus_idx.size(); ++i) minus.col(static_cast<Index>(i)) = vectors.col(minus_idx[i]);

  return assemble(space, Subspace::span(plus), Subspace::span(minus));
}

Subspace annihilator(const SymplecticSpace& space, const Subspace& lambda) {
  require_ambient(space, lambda);
  if (lambda.dim() == 0) return Subspace::full(space.dim());
  // omega(x, y) = y^H J x = 0 for all x in lambda  <=>  y is orthogonal to J lambda.
  const Subspace image = Subspace::span(space.form() * lambda.frame());
  return Subspace::from_orthonormal(image.complement_frame());
}

SubspaceClass classify(const SymplecticSpace& space, const Subspace& lambda, double tol) {
  const Subspace ann = annihilator(space, lambda);
  const bool isotropic = ann.contains(lambda, tol);
  const bool coisotropic = lambda.contains(ann, tol);
  if (isotropic && coisotropic) return SubspaceClass::Lagrangian;
  if (isotropic) return SubspaceClass::Isotropic;
  if (coisotropic) return SubspaceClass::Coisotropic;
  return SubspaceClass::General;
}

double isotropy_residual(const SymplecticSpace& space, const Subspace& lambda) {
  require_ambient(space, lambda);
  if (lambda.dim() == 0) return 0.0;
  return max_abs(lambda.frame().adjoint() * space.form() * lambda.frame()) / max_abs(space.form());
}

int intersection_dim(const Subspace& lambda, const Subspace& mu) {
  require_same_ambient(lambda, mu);
  if (lambda.dim() == 0 || mu.dim() == 0) return 0;
  Eigen::JacobiSVD<CMatrix> svd(lambda.frame().adjoint() * mu.frame());
  const auto& sv = svd.singularValues();
  int count = 0;
  for (Index i = 0; i < sv.size(); ++i) {
    if (sv(i) >= 1.0 - tol::kRank) ++count;
  }
  return count;
}

PairIndex pair_index(const SymplecticSpace& space, const Subspace& lambda, const Subspace& mu) {
  require_ambient(space, lambda);
  require_ambient(space, mu);
  PairIndex out;
  out.dim_intersection = intersection_dim(lambda, mu);
  const auto sum_dim = static_cast<int>(lambda.dim() + mu.dim()) - out.dim_intersection;
  out.codim_sum = static_cast<int>(space.dim()) - sum_dim;
  out.index = out.dim_intersection - out.codim_sum;
  return out;
}

GraphRep graph_rep(const SymplecticSpace& space, const Splitting& splitting, const Subspace& lambda,
                   double lagrangian_tol) {
  require_ambient(space, lambda);
  if (!splitting.balanced()) {
    throw Error(ErrorCode::UnbalancedSplitting, "dim H+ = " + std::to_string(splitting.plus.dim()) +
                                                    ", dim H- = " + std::to_string(splitting.minus.dim()));
  }
  const Index k = splitting.plus.dim();
  if (lambda.dim() != k || classify(space, lambda, lagrangian_tol) != SubspaceClass::Lagrangian) {
    throw Error(ErrorCode::NotLagrangian, "subspace is not Lagrangian");
  }
  const Index n = space.dim();
  CMatrix basis(n, n);
  basis << splitting.h_plus, splitting.h_minus;
  const CMatrix coords = basis.partialPivLu().solve(lambda.frame());
  const CMatrix a = coords.topRows(k);
  const CMatrix b = coords.bottomRows(k);
  Eigen::FullPivLU<CMatrix> lu(a);
  if (!lu.isInvertible()) {
    throw Error(ErrorCode::NotLagrangian, "subspace meets H- nontrivially");
  }
  return GraphRep{b * lu.inverse(), splitting};
}

Subspace reconstruct(const GraphRep& rep) {
  return Subspace::span(rep.splitting.h_plus + rep.splitting.h_minus * rep.u_matrix);
}

CMatrix pair_unitary(const SymplecticSpace& space, const Splitting& splitting, const Subspace& lambda,
                     const Subspace& mu, double lagrangian_tol) {
  const GraphRep u = graph_rep(space, splitting, lambda, lagrangian_tol);
  const GraphRep v = graph_rep(space, splitting, mu, lagrangian_tol);
  return u.u_matrix * v.u_matrix.partialPivLu().inverse();
}

int eigenvalue_one_multiplicity(const CMatrix& w, double phase_tol) {
  Eigen::ComplexEigenSolver<CMatrix> eig(w, false);
  int count = 0;
  for (Index i = 0; i < w.rows(); ++i) {
    const Complex z = eig.eigenvalues()(i);
    if (std::abs(std::arg(z)) <= phase_tol && std::abs(std::abs(z) - 1.0) <= phase_tol) ++count;
  }
  return count;
}

NormalizedMetric normalize_metric(const SymplecticSpace& space) {
  const CMatrix& j = space.form();
  const CMatrix jhj = j.adjoint() * j;
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(0.5 * (jhj + jhj.adjoint()));
  const RVector& values = eig.eigenvalues();
  if (values.minCoeff() <= 0.0) throw Error(ErrorCode::Degenerate, "J^H J is singular");
  const CMatrix& v = eig.eigenvectors();
  const RVector root = values.cwiseSqrt();
  CMatrix gram = v * root.cast<Complex>().asDiagonal() * v.adjoint();
  CMatrix gram_inv = v * root.cwiseInverse().cast<Complex>().asDiagonal() * v.adjoint();
  gram = 0.5 * (gram + gram.adjoint()).eval();
  return NormalizedMetric{std::move(gram), gram_inv * j};
}

SymplecticSpace boxplus(const SymplecticSpace& first, const SymplecticSpace& second) {
  const Index n1 = first.dim();
  const Index n2 = second.dim();
  CMatrix form = CMatrix::Zero(n1 + n2, n1 + n2);
  form.topLeftCorner(n1, n1) = first.form();
  form.bottomRightCorner(n2, n2) = -second.form();
  return SymplecticSpace::make(form);
}

BoxplusPair boxplus_pair(const Subspace& lambda, const Subspace& mu) {
  require_same_ambient(lambda, mu);
  const Index n = lambda.ambient_dim();
  CMatrix product = CMatrix::Zero(2 * n, lambda.dim() + mu.dim());
  product.topLeftCorner(n, lambda.dim()) = lambda.frame();
  product.bottomRightCorner(n, mu.dim()) = mu.frame();
  CMatrix diagonal(2 * n, n);
  diagonal << CMatrix::Identity(n, n), CMatrix::Identity(n, n);
  diagonal /= std::sqrt(2.0);
  return BoxplusPair{Subspace::from_orthonormal(std::move(product)),
                     Subspace::from_orthonormal(std::move(diagonal))};
}

}  // namespace maslovflow::symplectic
