#include "maslovflow/bvp.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace maslovflow::bvp {

namespace {

constexpr int kMinSteps = 64;
constexpr double kBoundaryGuard = 1e-6;   // detector value that marks a window edge as an eigenvalue
constexpr double kRootAccept = 1e-7;      // detector value accepted as a root
constexpr double kRootTolerance = 1e-12;  // golden-section bracket, relative to the window width
constexpr int kWindowShrinks = 5;
constexpr double kShrinkFactor = 0.9;

struct Generator {
  CMatrix m0;
  CMatrix m1;
  CMatrix form;  // F(s, t)
};

void require_square(const CMatrix& m, Index size, const char* name) {
  if (m.rows() != size || m.cols() != size) {
    throw Error(ErrorCode::DimensionMismatch, std::string("coefficient ") + name + " must be " +
                                                  std::to_string(size) + "x" + std::to_string(size));
  }
}

bool hermitian(const CMatrix& m) { return max_abs(m - m.adjoint()) <= tol::kSym * std::max(1.0, max_abs(m)); }

std::string at(double s, double t) {
  std::ostringstream os;
  os << std::setprecision(17) << " at (s, t) = (" << s << ", " << t << ")";
  return os.str();
}

CMatrix derivative_in_t(const FirstOrderFamily& fam, double s, double t, double h) {
  if (fam.jdot) return fam.jdot(s, t);
  if (t - h < 0.0) return (-3.0 * fam.j(s, t) + 4.0 * fam.j(s, t + h) - fam.j(s, t + 2 * h)) / (2 * h);
  if (t + h > fam.T) return (3.0 * fam.j(s, t) - 4.0 * fam.j(s, t - h) + fam.j(s, t - 2 * h)) / (2 * h);
  return (fam.j(s, t + h) - fam.j(s, t - h)) / (2 * h);
}

Generator evaluate(const FirstOrderFamily& fam, double s, double t, double fd_step) {
  const Index m = fam.m;
  CMatrix j = fam.j(s, t);
  CMatrix b = fam.b(s, t);
  require_square(j, m, "j");
  require_square(b, m, "b");
  if (max_abs(j + j.adjoint()) > tol::kSym * std::max(1.0, max_abs(j))) {
    throw Error(ErrorCode::NotSkewHermitian, "j is not skew-Hermitian" + at(s, t));
  }
  if (!hermitian(b)) throw Error(ErrorCode::NotHermitian, "b is not Hermitian" + at(s, t));
  Eigen::PartialPivLU<CMatrix> lu(j);
  if (!(lu.rcond() > tol::kRank)) throw Error(ErrorCode::SingularJ, "j is singular" + at(s, t));
  const CMatrix j_inv = lu.inverse();
  const CMatrix jdot = derivative_in_t(fam, s, t, fd_step);
  require_square(jdot, m, "jdot");
  return Generator{-j_inv * (b + 0.5 * jdot), -j_inv, std::move(j)};
}

Generator evaluate(const SecondOrderFamily& fam, double s, double t) {
  const Index m = fam.m;
  const CMatrix p = fam.p(s, t);
  const CMatrix q = fam.q(s, t);
  const CMatrix r = fam.r(s, t);
  require_square(p, m, "p");
  require_square(q, m, "q");
  require_square(r, m, "r");
  if (!hermitian(p)) throw Error(ErrorCode::NotHermitian, "p is not Hermitian" + at(s, t));
  if (!hermitian(r)) throw Error(ErrorCode::NotHermitian, "r is not Hermitian" + at(s, t));
  Eigen::PartialPivLU<CMatrix> lu(p);
  if (!(lu.rcond() > tol::kRank)) throw Error(ErrorCode::SingularP, "p is singular" + at(s, t));
  const CMatrix p_inv = lu.inverse();
  CMatrix b(2 * m, 2 * m);
  b << p_inv, -p_inv * q, -q.adjoint() * p_inv, q.adjoint() * p_inv * q - r;
  const CMatrix jf = standard_form(m);
  CMatrix m1 = CMatrix::Zero(2 * m, 2 * m);
  m1.topRightCorner(m, m) = -CMatrix::Identity(m, m);
  return Generator{jf * b, std::move(m1), jf};
}

Generator evaluate(const Family& family, double s, double t, double fd_step) {
  return std::visit(
      [&](const auto& fam) -> Generator {
        using T = std::decay_t<decltype(fam)>;
        if constexpr (std::is_same_v<T, FirstOrderFamily>) {
          return evaluate(fam, s, t, fd_step);
        } else {
          return evaluate(fam, s, t);
        }
      },
      family);
}

CMatrix block_diag_form(const CMatrix& f0, const CMatrix& f_end) {
  const Index d = f0.rows();
  CMatrix out = CMatrix::Zero(2 * d, 2 * d);
  out.topLeftCorner(d, d) = -f0;
  out.bottomRightCorner(d, d) = f_end;
  return out;
}

// Classical RK4 for Gamma' = M(t) Gamma, Gamma(0) = I, with M supplied at the
// half steps t_i = i h / 2, i = 0 .. 2 n.
template <typename MatrixAt>
CMatrix rk4(Index d, int n, double h, MatrixAt&& matrix_at) {
  CMatrix g = CMatrix::Identity(d, d);
  CMatrix k1(d, d), k2(d, d), k3(d, d), k4(d, d), tmp(d, d);
  CMatrix m_start(d, d), m_mid(d, d), m_end(d, d);
  matrix_at(0, m_start);
  for (int k = 0; k < n; ++k) {
    matrix_at(2 * k + 1, m_mid);
    matrix_at(2 * k + 2, m_end);
    k1.noalias() = m_start * g;
    tmp = g + (0.5 * h) * k1;
    k2.noalias() = m_mid * tmp;
    tmp = g + (0.5 * h) * k2;
    k3.noalias() = m_mid * tmp;
    tmp = g + h * k3;
    k4.noalias() = m_end * tmp;
    g += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    m_start.swap(m_end);
  }
  return g;
}

CMatrix orthonormal_graph(const CMatrix& gamma) {
  const Index d = gamma.rows();
  CMatrix stacked(2 * d, d);
  stacked << CMatrix::Identity(d, d), gamma;
  Eigen::HouseholderQR<CMatrix> qr(stacked);
  return qr.householderQ() * CMatrix::Identity(2 * d, d);
}

double golden_minimum(const std::function<double(double)>& f, double a, double b, double tol) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a);
  double d = a + g * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < 200 && b - a > tol; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return fc < fd ? c : d;
}

void require_steps(int steps) {
  if (steps < kMinSteps) throw Error(ErrorCode::ConfigError, "at least 64 RK4 steps are required");
}

maslov::PairPath graph_path(const Family& family, const BoundaryPath& boundary, const BvpOptions& opts,
                            double& transport) {
  return maslov::PairPath{[&family, &boundary, &opts, &transport](double s) {
                            const ShootingSystem sys(family, s, opts.shooting.steps);
                            const CMatrix gamma = sys.transfer(0.0);
                            transport = std::max(transport, sys.transport_residual(gamma));
                            return maslov::PairSample{sys.boundary_form(),
                                                      Subspace::from_orthonormal(orthonormal_graph(gamma)),
                                                      boundary(s)};
                          },
                          0.0, 1.0};
}

maslov::MaslovOptions maslov_options(const BvpOptions& opts) {
  maslov::MaslovOptions out;
  out.flow = opts.flow;
  out.lagrangian_tol = opts.lagrangian_tol;
  return out;
}

std::vector<Eigenvalue> windowed_eigenvalues(const ShootingSystem& sys, const Subspace& w, double window,
                                             int grid, double* used_window = nullptr) {
  for (int k = 0;; ++k) {
    const double half = window * std::pow(kShrinkFactor, k);
    try {
      auto roots = eigen_count(sys, w, -half, half, grid);
      if (used_window) *used_window = half;
      return roots;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::WindowBoundaryEigenvalue || k >= kWindowShrinks) throw;
    }
  }
}

}  // namespace

Index state_dim(const Family& family) {
  return std::visit(
      [](const auto& fam) -> Index {
        using T = std::decay_t<decltype(fam)>;
        if constexpr (std::is_same_v<T, FirstOrderFamily>) {
          return fam.m;
        } else {
          return 2 * fam.m;
        }
      },
      family);
}

double interval_length(const Family& family) {
  return std::visit([](const auto& fam) { return fam.T; }, family);
}

CMatrix standard_form(Index m) {
  CMatrix j = CMatrix::Zero(2 * m, 2 * m);
  j.topRightCorner(m, m) = -CMatrix::Identity(m, m);
  j.bottomLeftCorner(m, m) = CMatrix::Identity(m, m);
  return j;
}

ShootingSystem::ShootingSystem(const Family& family, double s, int steps)
    : d_(bvp::state_dim(family)), T_(interval_length(family)), steps_(steps) {
  require_steps(steps);
  const double h = T_ / steps;
  const double fd_step = T_ / (8.0 * steps);
  const auto count = static_cast<std::size_t>(2 * steps + 1);
  m0_.reserve(count);
  m1_.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double t = i + 1 == count ? T_ : 0.5 * h * static_cast<double>(i);
    Generator g = evaluate(family, s, t, fd_step);
    if (i == 0) f0_ = g.form;
    if (i + 1 == count) f_end_ = g.form;
    m0_.push_back(std::move(g.m0));
    m1_.push_back(std::move(g.m1));
  }
  boundary_form_ = block_diag_form(f0_, f_end_);
}

CMatrix ShootingSystem::transfer(double lambda) const {
  return rk4(d_, steps_, T_ / steps_, [&](int i, CMatrix& out) {
    const auto idx = static_cast<std::size_t>(i);
    out = m0_[idx] + lambda * m1_[idx];
  });
}

double ShootingSystem::transport_residual(const CMatrix& gamma) const {
  return max_abs(gamma.adjoint() * f_end_ * gamma - f0_);
}

CMatrix transfer_matrix(const Family& family, double s, double lambda, int steps) {
  return ShootingSystem(family, s, steps).transfer(lambda);
}

CMatrix transfer_matrix_to(const Family& family, double s, double lambda, double t, int steps) {
  require_steps(steps);
  const Index d = state_dim(family);
  const double total = interval_length(family);
  if (t <= 0.0) return CMatrix::Identity(d, d);
  const int n = std::max(kMinSteps, static_cast<int>(std::ceil(steps * t / total)));
  const double h = t / n;
  const double fd_step = total / (8.0 * steps);
  return rk4(d, n, h, [&](int i, CMatrix& out) {
    const double ti = i == 2 * n ? t : 0.5 * h * i;
    const Generator g = evaluate(family, s, ti, fd_step);
    out = g.m0 + lambda * g.m1;
  });
}

CMatrix boundary_form(const Family& family, double s) {
  const double total = interval_length(family);
  const Generator g0 = evaluate(family, s, 0.0, total / 16384.0);
  const Generator g1 = evaluate(family, s, total, total / 16384.0);
  return block_diag_form(g0.form, g1.form);
}

SymplecticSpace boundary_space(const Family& family, double s) {
  return SymplecticSpace::make(boundary_form(family, s));
}

Subspace graph_subspace(const CMatrix& gamma) { return Subspace::from_orthonormal(orthonormal_graph(gamma)); }

CMatrix hamiltonian_coefficient(const SecondOrderFamily& family, double s, double t, double lambda) {
  const Index m = family.m;
  const CMatrix p = family.p(s, t);
  const CMatrix q = family.q(s, t);
  const CMatrix r = family.r(s, t);
  require_square(p, m, "p");
  Eigen::PartialPivLU<CMatrix> lu(p);
  if (!(lu.rcond() > tol::kRank)) throw Error(ErrorCode::SingularP, "p is singular" + at(s, t));
  const CMatrix p_inv = lu.inverse();
  CMatrix b(2 * m, 2 * m);
  b << p_inv, -p_inv * q, -q.adjoint() * p_inv,
      q.adjoint() * p_inv * q - r + lambda * CMatrix::Identity(m, m);
  return b;
}

CVector trace_map_second(const SecondOrderFamily& family, double s, const CVector& x0, const CVector& dx0,
                         const CVector& x_end, const CVector& dx_end) {
  const Index m = family.m;
  const double t_end = family.T;
  CVector out(4 * m);
  out.segment(0, m) = family.p(s, 0.0) * dx0 + family.q(s, 0.0) * x0;
  out.segment(m, m) = x0;
  out.segment(2 * m, m) = family.p(s, t_end) * dx_end + family.q(s, t_end) * x_end;
  out.segment(3 * m, m) = x_end;
  return out;
}

std::vector<Eigenvalue> eigen_count(const ShootingSystem& system, const Subspace& boundary, double lo, double hi,
                                    int grid) {
  const Index d = system.state_dim();
  if (boundary.ambient_dim() != 2 * d || boundary.dim() != d) {
    throw Error(ErrorCode::DimensionMismatch, "boundary condition must be a d-dimensional subspace of C^{2d}");
  }
  const CMatrix complement = boundary.complement_frame();
  auto singular_values = [&](double lambda) {
    const CMatrix graph = orthonormal_graph(system.transfer(lambda));
    Eigen::JacobiSVD<CMatrix> svd(complement.adjoint() * graph);
    return RVector(svd.singularValues().reverse());  // ascending
  };
  auto detector = [&](double lambda) { return singular_values(lambda)(0); };

  for (double edge : {lo, hi}) {
    if (detector(edge) <= kBoundaryGuard) {
      std::ostringstream msg;
      msg << std::setprecision(17) << "window edge " << edge << " is (close to) an eigenvalue";
      throw Error(ErrorCode::WindowBoundaryEigenvalue, msg.str());
    }
  }

  grid = std::max(grid, 3);
  std::vector<double> nodes(static_cast<std::size_t>(grid));
  std::vector<double> values(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    nodes[i] = i + 1 == nodes.size() ? hi : lo + (hi - lo) * static_cast<double>(i) / (grid - 1);
    values[i] = detector(nodes[i]);
  }

  const double root_tol = kRootTolerance * (hi - lo);
  std::vector<Eigenvalue> roots;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const bool left_ok = i == 0 || values[i] <= values[i - 1];
    const bool right_ok = i + 1 == nodes.size() || values[i] <= values[i + 1];
    if (!left_ok || !right_ok) continue;
    const double a = nodes[i == 0 ? 0 : i - 1];
    const double b = nodes[i + 1 == nodes.size() ? i : i + 1];
    const double root = golden_minimum(detector, a, b, root_tol);
    if (!(root > lo && root < hi) || detector(root) > kRootAccept) continue;

    const Subspace graph = Subspace::from_orthonormal(orthonormal_graph(system.transfer(root)));
    const int multiplicity = std::max(1, symplectic::intersection_dim(graph, boundary));
    if (!roots.empty() && std::abs(roots.back().lambda - root) <= 10.0 * root_tol) continue;
    if (!roots.empty() && std::abs(roots.back().lambda - root) <= 1e3 * root_tol) {
      std::ostringstream msg;
      msg << std::setprecision(17) << "roots " << roots.back().lambda << " and " << root
          << " are not separated; refine the lambda grid";
      throw Error(ErrorCode::RootCluster, msg.str());
    }
    roots.push_back(Eigenvalue{root, multiplicity});
  }
  return roots;
}

std::vector<Eigenvalue> eigen_count(const Family& family, double s, const Subspace& boundary, double lo,
                                    double hi, const ShootingOptions& opts) {
  const ShootingSystem sys(family, s, opts.steps);
  return eigen_count(sys, boundary, lo, hi, opts.grid);
}

BvpResult sf_bvp(const Family& family, const BoundaryPath& boundary, const BvpOptions& opts) {
  const double window = opts.shooting.lambda_window;
  if (!(window > 0.0)) throw Error(ErrorCode::ConfigError, "lambda_window must be positive");
  BvpResult out;
  flow::SpectrumSampler sampler = [&](double s) {
    const ShootingSystem sys(family, s, opts.shooting.steps);
    const Subspace w = boundary(s);
    const SymplecticSpace space = SymplecticSpace::make(sys.boundary_form());
    out.lagrangian_residual = std::max(out.lagrangian_residual, symplectic::isotropy_residual(space, w));
    if (symplectic::classify(space, w, opts.lagrangian_tol) != symplectic::SubspaceClass::Lagrangian) {
      throw Error(ErrorCode::NotLagrangian, "boundary condition is not Lagrangian");
    }
    flow::SpectrumSample smp;
    smp.s = s;
    for (const Eigenvalue& ev : windowed_eigenvalues(sys, w, window, opts.shooting.grid, &smp.horizon)) {
      smp.coords.insert(smp.coords.end(), static_cast<std::size_t>(ev.multiplicity), ev.lambda);
    }
    return smp;
  };
  out.report = flow::spectral_flow(sampler, 0.0, 1.0, window, opts.flow);
  out.value = out.report.total;
  return out;
}

BvpResult mas_bvp(const Family& family, const BoundaryPath& boundary, const BvpOptions& opts) {
  BvpResult out;
  const maslov::PairPath path = graph_path(family, boundary, opts, out.transport_residual);
  maslov::MaslovResult mas = maslov::maslov_index(path, maslov_options(opts));
  out.value = mas.index;
  out.report = std::move(mas.report);
  out.lagrangian_residual = mas.lagrangian_residual;
  out.unitary_residual = mas.circle_residual;
  return out;
}

Subspace w_of_r(const Subspace& r) {
  const Index two_m = r.ambient_dim();
  if (two_m % 2 != 0) throw Error(ErrorCode::DimensionMismatch, "R must live in C^{2m}");
  const Index m = two_m / 2;
  const CMatrix perp = r.complement_frame();
  const CMatrix& frame = r.frame();
  CMatrix w = CMatrix::Zero(4 * m, perp.cols() + frame.cols());
  // (x, -z) in R^perp
  w.block(0, 0, m, perp.cols()) = perp.topRows(m);
  w.block(2 * m, 0, m, perp.cols()) = -perp.bottomRows(m);
  // (y, u) in R
  w.block(m, perp.cols(), m, frame.cols()) = frame.topRows(m);
  w.block(3 * m, perp.cols(), m, frame.cols()) = frame.bottomRows(m);
  return Subspace::span(w);
}

maslov::MaslovResult maslov_long(const Family& family, double s, const Subspace& boundary, double t_final,
                                 const BvpOptions& opts, double t0) {
  const double total = interval_length(family);
  const double fd_step = total / (8.0 * opts.shooting.steps);
  const CMatrix f0 = evaluate(family, s, 0.0, fd_step).form;
  const maslov::PairPath path{[&](double t) {
                                const CMatrix gamma =
                                    transfer_matrix_to(family, s, 0.0, t, opts.shooting.steps);
                                const CMatrix ft = evaluate(family, s, t, fd_step).form;
                                return maslov::PairSample{block_diag_form(f0, ft), graph_subspace(gamma), boundary};
                              },
                              t0, t_final};
  return maslov::maslov_index(path, maslov_options(opts));
}

std::vector<flow::SpectrumSample> eigenvalue_trace(const Family& family, const BoundaryPath& boundary, int points,
                                                   const BvpOptions& opts) {
  return flow::trace(
      [&](double s) {
        const ShootingSystem sys(family, s, opts.shooting.steps);
        flow::SpectrumSample smp;
        for (const Eigenvalue& ev :
             windowed_eigenvalues(sys, boundary(s), opts.shooting.lambda_window, opts.shooting.grid)) {
          smp.coords.insert(smp.coords.end(), static_cast<std::size_t>(ev.multiplicity), ev.lambda);
        }
        return smp;
      },
      0.0, 1.0, points);
}

std::vector<flow::SpectrumSample> eigenphase_trace(const Family& family, const BoundaryPath& boundary, int points,
                                                   const BvpOptions& opts) {
  double transport = 0.0;
  const maslov::PairPath path = graph_path(family, boundary, opts, transport);
  return maslov::eigenphase_trace(path, points, maslov_options(opts));
}

}  // namespace maslovflow::bvp
