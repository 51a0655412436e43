#include "maslovflow/maslov.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

namespace maslovflow::maslov {

namespace {

using flow::CoorientedLine;
using symplectic::Splitting;

const Complex kI{0.0, 1.0};

constexpr double kPolarLimit = 1e-6;

CMatrix polar_unitary(const CMatrix& m) {
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

struct Residuals {
  double unitary = 0.0;
  double circle = 0.0;
  double lagrangian = 0.0;

  void absorb_unitary(const CMatrix& w) {
    const Index n = w.rows();
    unitary = std::max(unitary, max_abs(w.adjoint() * w - CMatrix::Identity(n, n)));
    Eigen::ComplexEigenSolver<CMatrix> eig(w, false);
    for (Index i = 0; i < n; ++i) circle = std::max(circle, std::abs(std::abs(eig.eigenvalues()(i)) - 1.0));
  }
};

Splitting splitting_for(const SymplecticSpace& space, const MaslovOptions& opts, double s) {
  return opts.metric ? symplectic::make_splitting(space, opts.metric(s)) : symplectic::make_splitting(space);
}

// Generating operators (U, V) of (lambda_s, mu_s), made exactly unitary when
// they are within kPolarLimit of it.
std::pair<CMatrix, CMatrix> generators(const PairSample& sample, const MaslovOptions& opts, double s,
                                       Residuals& res) {
  const SymplecticSpace space = SymplecticSpace::make(sample.form);
  const Splitting split = splitting_for(space, opts, s);
  res.lagrangian = std::max({res.lagrangian, symplectic::isotropy_residual(space, sample.lambda),
                             symplectic::isotropy_residual(space, sample.mu)});
  CMatrix u = symplectic::graph_rep(space, split, sample.lambda, opts.lagrangian_tol).u_matrix;
  CMatrix v = symplectic::graph_rep(space, split, sample.mu, opts.lagrangian_tol).u_matrix;
  const Index k = u.rows();
  for (CMatrix* g : {&u, &v}) {
    const double dev = max_abs(g->adjoint() * *g - CMatrix::Identity(k, k));
    res.unitary = std::max(res.unitary, dev);
    if (dev > kPolarLimit) throw Error(ErrorCode::NotUnitary, "generating operator is not unitary");
    if (dev > tol::kOrth) *g = polar_unitary(*g);
  }
  return {std::move(u), std::move(v)};
}

MaslovResult run_unitary_flow(const PairPath& path, const MaslovOptions& opts,
                              const std::function<CMatrix(const PairSample&, double, Residuals&)>& build) {
  Residuals res;
  const CoorientedLine line = CoorientedLine::unit_circle_at_one();
  flow::SpectrumSampler sampler = [&](double s) {
    const CMatrix w = build(path.sampler(s), s, res);
    res.absorb_unitary(w);
    return flow::sample_matrix(w, line, s);
  };
  MaslovResult out;
  out.report = flow::spectral_flow(sampler, path.a, path.b, std::numbers::pi, opts.flow);
  out.index = out.report.total;
  out.unitary_residual = res.unitary;
  out.circle_residual = res.circle;
  out.lagrangian_residual = res.lagrangian;
  return out;
}

RMatrix orthonormal_columns(const RMatrix& m) {
  Eigen::HouseholderQR<RMatrix> qr(m);
  return qr.householderQ() * RMatrix::Identity(m.rows(), m.cols());
}

void validate_real_form(const RMatrix& j) {
  const Index n = j.rows();
  if (j.cols() != n || n % 2 != 0 || n == 0) {
    throw Error(ErrorCode::DimensionMismatch, "real symplectic form must be 2m x 2m");
  }
  if ((j + j.transpose()).cwiseAbs().maxCoeff() > tol::kSym) {
    throw Error(ErrorCode::NotSkewHermitian, "J^T != -J");
  }
  if ((j * j + RMatrix::Identity(n, n)).cwiseAbs().maxCoeff() > tol::kSym) {
    throw Error(ErrorCode::Degenerate, "J^2 != -I");
  }
}

RMatrix real_lagrangian_frame(const RMatrix& j, const RMatrix& frame) {
  const Index n = j.rows();
  if (frame.rows() != n || frame.cols() != n / 2) {
    throw Error(ErrorCode::NotLagrangianReal, "frame does not have m columns in R^{2m}");
  }
  RMatrix q = orthonormal_columns(frame);
  if ((q.transpose() * j * q).cwiseAbs().maxCoeff() > 1e-8) {
    throw Error(ErrorCode::NotLagrangianReal, "real frame is not isotropic");
  }
  return q;
}

}  // namespace

CMatrix pair_unitary_at(const PairSample& sample, const MaslovOptions& opts) {
  Residuals res;
  auto [u, v] = generators(sample, opts, 0.0, res);
  return u * v.adjoint();
}

MaslovResult maslov_index(const PairPath& path, const MaslovOptions& opts) {
  return run_unitary_flow(path, opts, [&](const PairSample& smp, double s, Residuals& res) {
    auto [u, v] = generators(smp, opts, s, res);
    return CMatrix(u * v.adjoint());
  });
}

MaslovResult maslov_index_block(const PairPath& path, const MaslovOptions& opts) {
  return run_unitary_flow(path, opts, [&](const PairSample& smp, double s, Residuals& res) {
    auto [u, v] = generators(smp, opts, s, res);
    const Index k = u.rows();
    CMatrix block = CMatrix::Zero(2 * k, 2 * k);
    block.topRightCorner(k, k) = u;
    block.bottomLeftCorner(k, k) = v.adjoint();
    return block;
  });
}

ProductIdentities maslov_product_identities(const PairPath& path, const MaslovOptions& opts) {
  MaslovOptions canonical = opts;
  canonical.metric = nullptr;

  const PairPath boxplus_path{[&](double s) {
                                const PairSample smp = path.sampler(s);
                                const Index n = smp.form.rows();
                                CMatrix form = CMatrix::Zero(2 * n, 2 * n);
                                form.topLeftCorner(n, n) = smp.form;
                                form.bottomRightCorner(n, n) = -smp.form;
                                auto bp = boxplus_pair(smp.lambda, smp.mu);
                                return PairSample{std::move(form), std::move(bp.product), std::move(bp.diagonal)};
                              },
                              path.a, path.b};
  const PairPath swapped_path{[&](double s) {
                                const PairSample smp = path.sampler(s);
                                return PairSample{-smp.form, smp.mu, smp.lambda};
                              },
                              path.a, path.b};
  const PairPath diagonal_path{[&](double s) {
                                 PairSample smp = boxplus_path.sampler(s);
                                 return PairSample{-smp.form, std::move(smp.mu), std::move(smp.lambda)};
                               },
                               path.a, path.b};

  ProductIdentities out;
  out.pair = maslov_index(path, canonical).index;
  out.boxplus_vs_diagonal = maslov_index(boxplus_path, canonical).index;
  out.swapped_flipped = maslov_index(swapped_path, canonical).index;
  out.diagonal_vs_boxplus = maslov_index(diagonal_path, canonical).index;
  return out;
}

CMatrix leray_generator(const RMatrix& j_real, const RMatrix& lambda, const RMatrix& mu) {
  validate_real_form(j_real);
  const RMatrix l = real_lagrangian_frame(j_real, lambda);
  const RMatrix m = real_lagrangian_frame(j_real, mu);
  // Coordinates of mu under phi(x + J y) = x + i y, x, y in lambda.
  const CMatrix z = (l.transpose() * m).cast<Complex>() + kI * ((j_real * l).transpose() * m).cast<Complex>();
  // mu = V~(J lambda) gives phi_*(V~) = -i z up to a real orthogonal gauge.
  CMatrix a = -kI * z;
  const Index k = a.rows();
  const double dev = max_abs(a.adjoint() * a - CMatrix::Identity(k, k));
  if (dev > kPolarLimit) throw Error(ErrorCode::NonUnitaryGenerator, "phi_*(V~) is not unitary");
  if (dev > tol::kOrth) a = polar_unitary(a);
  return a * a.transpose();
}

BfComparison complexify_and_compare(const RealSymplecticData& data, const MaslovOptions& opts) {
  validate_real_form(data.j_real);
  const RMatrix l = real_lagrangian_frame(data.j_real, data.lambda);
  const CMatrix j_c = data.j_real.cast<Complex>();
  const CMatrix l_c = l.cast<Complex>();
  const Subspace lambda_c = Subspace::from_orthonormal(l_c);

  MaslovOptions canonical = opts;
  canonical.metric = nullptr;
  const PairPath complexified{[&](double s) {
                                return PairSample{j_c, lambda_c,
                                                  Subspace::span(data.mu_path(s).cast<Complex>())};
                              },
                              data.a, data.b};

  BfComparison out;
  out.mas = maslov_index(complexified, canonical).index;

  // Generating operators in the frames (I -/+ iJ) e_k / sqrt(2), e_k the
  // columns of the lambda frame; U is the identity there.
  const CMatrix jl = j_c * l_c;
  const CMatrix h_plus = (l_c - kI * jl) / std::sqrt(2.0);
  const CMatrix h_minus = (l_c + kI * jl) / std::sqrt(2.0);
  auto generator_in_frames = [&](const CMatrix& frame) {
    const CMatrix a = h_plus.adjoint() * frame;
    const CMatrix b = h_minus.adjoint() * frame;
    return CMatrix(b * a.partialPivLu().inverse());
  };
  const CMatrix u = generator_in_frames(l_c);

  const CoorientedLine downward = CoorientedLine::unit_circle_at_minus_one_downward();
  flow::SpectrumSampler sampler = [&](double s) {
    const RMatrix mu = data.mu_path(s);
    const CMatrix leray = leray_generator(data.j_real, l, mu);
    const CMatrix m_c = real_lagrangian_frame(data.j_real, mu).cast<Complex>();
    const CMatrix v = generator_in_frames(m_c);
    out.residual =
        std::max(out.residual, max_abs(v * u.partialPivLu().inverse() + leray.conjugate()));
    return flow::sample_matrix(leray, downward, s);
  };
  out.mas_bf = flow::spectral_flow(sampler, data.a, data.b, std::numbers::pi, opts.flow).total;
  return out;
}

SplittingComparison splitting_independence_check(const PairPath& path, const MetricPath& metric,
                                                 const MaslovOptions& opts) {
  MaslovOptions canonical = opts;
  canonical.metric = nullptr;
  MaslovOptions deformed = opts;
  deformed.metric = metric;
  return SplittingComparison{maslov_index(path, canonical).index, maslov_index(path, deformed).index};
}

std::vector<flow::SpectrumSample> eigenphase_trace(const PairPath& path, int points, const MaslovOptions& opts) {
  const CoorientedLine line = CoorientedLine::unit_circle_at_one();
  return flow::trace(
      [&](double s) {
        Residuals res;
        auto [u, v] = generators(path.sampler(s), opts, s, res);
        return flow::sample_matrix(u * v.adjoint(), line, s);
      },
      path.a, path.b, points);
}

}  // namespace maslovflow::maslov
