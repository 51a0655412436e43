#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "maslovflow/harness.hpp"
#include "maslovflow/random.hpp"

namespace maslovflow::harness {

namespace {

using random::CounterRng;
using symplectic::Subspace;
using symplectic::SymplecticSpace;

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kMaxFailuresKept = 5;

void require(bool ok, const std::string& what) {
  if (!ok) throw PropertyFailure(what);
}

template <typename T>
std::string describe(const std::string& label, T got, T want) {
  std::ostringstream os;
  os << std::setprecision(17) << label << ": got " << got << ", expected " << want;
  return os.str();
}

Index symplectic_dim(CounterRng& rng) { return 2 * rng.uniform_int(1, 4); }

SymplecticSpace random_space(CounterRng& rng, Index n) { return SymplecticSpace::make(random::balanced_form(rng, n)); }

// Unitary with eigenvalue 1 of multiplicity r; other phases stay 0.3 away.
CMatrix unitary_with_ones(CounterRng& rng, Index k, int r) {
  const CMatrix q = random::unitary(rng, k);
  CVector d(k);
  for (Index i = 0; i < k; ++i) {
    d(i) = i < r ? Complex(1.0, 0.0) : std::exp(Complex(0.0, rng.uniform(0.3, kTwoPi - 0.3)));
  }
  return q * d.asDiagonal() * q.adjoint();
}

struct IntersectingPair {
  SymplecticSpace space;
  Subspace lambda;
  Subspace mu;
  int r = 0;
};

IntersectingPair intersecting_pair(CounterRng& rng) {
  const Index n = symplectic_dim(rng);
  const Index k = n / 2;
  SymplecticSpace space = random_space(rng, n);
  const int r = rng.uniform_int(0, static_cast<int>(k));
  const CMatrix v = random::unitary(rng, k);
  const CMatrix u = unitary_with_ones(rng, k, r) * v;
  Subspace lambda = random::lagrangian_from_unitary(space, u);
  Subspace mu = random::lagrangian_from_unitary(space, v);
  return IntersectingPair{std::move(space), std::move(lambda), std::move(mu), r};
}

// Path of Lagrangian pairs in (C^n, J_s) whose Maslov unitary, up to the
// change of symplectic structure, has eigenphases theta_k(s) interpolating
// linearly between theta0 and theta1.
struct PhasePath {
  Index n = 0;
  CMatrix j0;
  CMatrix e;  // L_s = I + s E, ||E|| <= 0.6
  CMatrix q0, k_rot, v0, h_v;
  RVector theta0, theta1;

  CMatrix transform(double s) const { return CMatrix::Identity(n, n) + s * e; }

  maslov::PairSample sample(double s) const {
    const SymplecticSpace base = SymplecticSpace::make(j0);
    const CMatrix q = random::unitary_exp(s * k_rot) * q0;
    CVector d(theta0.size());
    for (Index i = 0; i < d.size(); ++i) d(i) = std::exp(Complex(0.0, (1.0 - s) * theta0(i) + s * theta1(i)));
    const CMatrix v = random::unitary_exp(s * h_v) * v0;
    const CMatrix u = q * d.asDiagonal() * q.adjoint() * v;
    const CMatrix l = transform(s);
    const CMatrix l_inv = l.inverse();
    const CMatrix form = l_inv.adjoint() * j0 * l_inv;
    return maslov::PairSample{0.5 * (form - form.adjoint()),
                              Subspace::span(l * random::lagrangian_from_unitary(base, u).frame()),
                              Subspace::span(l * random::lagrangian_from_unitary(base, v).frame())};
  }

  maslov::PairPath path(double a = 0.0, double b = 1.0) const {
    return maslov::PairPath{[this](double s) { return sample(s); }, a, b};
  }

  int oracle() const {
    int total = 0;
    for (Index i = 0; i < theta0.size(); ++i) {
      total += static_cast<int>(std::floor(theta1(i) / kTwoPi)) - static_cast<int>(std::floor(theta0(i) / kTwoPi));
    }
    return total;
  }
};

double random_phase(CounterRng& rng) {
  if (rng.uniform() < 0.3) return kTwoPi * rng.uniform_int(-1, 1);
  return rng.uniform(-3.0 * std::numbers::pi, 3.0 * std::numbers::pi);
}

PhasePath phase_path(CounterRng& rng, bool frozen_phases = false) {
  PhasePath p;
  p.n = symplectic_dim(rng);
  const Index k = p.n / 2;
  p.j0 = random::balanced_form(rng, p.n);
  const CMatrix g = random::gaussian(rng, p.n, p.n);
  Eigen::JacobiSVD<CMatrix> svd(g);
  p.e = 0.6 / svd.singularValues()(0) * g;
  p.q0 = random::unitary(rng, k);
  p.k_rot = random::hermitian(rng, k);
  p.v0 = random::unitary(rng, k);
  p.h_v = random::hermitian(rng, k);
  p.theta0.resize(k);
  p.theta1.resize(k);
  for (Index i = 0; i < k; ++i) {
    p.theta0(i) = random_phase(rng);
    p.theta1(i) = frozen_phases ? p.theta0(i) : random_phase(rng);
  }
  return p;
}

maslov::MaslovOptions maslov_opts() { return maslov::MaslovOptions{}; }

// Smooth Hermitian family H0 + s H1 + 0.5 sin(pi s) H2.
struct HermitianFamily {
  CMatrix h0, h1, h2;
  CMatrix operator()(double s) const { return h0 + s * h1 + 0.5 * std::sin(std::numbers::pi * s) * h2; }
};

HermitianFamily hermitian_family(CounterRng& rng) {
  const Index n = rng.uniform_int(1, 6);
  return HermitianFamily{random::hermitian(rng, n), 2.0 * random::hermitian(rng, n), random::hermitian(rng, n)};
}

// Signed zero crossings of the sorted eigenvalue branches on a uniform grid;
// zeros at either endpoint count as positive.
int branch_oracle(const flow::MatrixFamily& family, double a, double b, int points) {
  auto branches = [&](int k) {
    const double s = k == points - 1 ? b : a + (b - a) * k / (points - 1);
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(family(s), Eigen::EigenvaluesOnly);
    RVector e = eig.eigenvalues();
    if (k == 0 || k == points - 1) {
      for (Index i = 0; i < e.size(); ++i) {
        if (std::abs(e(i)) <= 1e-12) e(i) = 1.0;
      }
    }
    return e;
  };
  int total = 0;
  RVector prev = branches(0);
  for (int k = 1; k < points; ++k) {
    const RVector cur = branches(k);
    for (Index i = 0; i < cur.size(); ++i) {
      if (prev(i) < 0.0 && cur(i) >= 0.0) ++total;
      if (prev(i) >= 0.0 && cur(i) < 0.0) --total;
    }
    prev = cur;
  }
  return total;
}

int hermitian_flow(const flow::MatrixFamily& f, double a, double b) {
  return flow::spectral_flow(f, flow::CoorientedLine::real_axis(), a, b).total;
}

double suite_double_annihilator(CounterRng& rng) {
  const Index n = symplectic_dim(rng);
  const SymplecticSpace space = random_space(rng, n);
  const Subspace a = Subspace::span(random::gaussian(rng, n, rng.uniform_int(0, static_cast<int>(n))));
  const Subspace back = symplectic::annihilator(space, symplectic::annihilator(space, a));
  require(back.same_as(a), "annihilator of the annihilator differs from the subspace");
  return max_abs(back.projector() - a.projector());
}

double suite_fredholm_index(CounterRng& rng) {
  const IntersectingPair p = intersecting_pair(rng);
  const symplectic::PairIndex idx = symplectic::pair_index(p.space, p.lambda, p.mu);
  require(idx.index == 0, describe("Fredholm index", idx.index, 0));
  require(idx.dim_intersection == p.r, describe("dim intersection", idx.dim_intersection, p.r));
  return 0.0;
}

double suite_kernel_multiplicity(CounterRng& rng) {
  const IntersectingPair p = intersecting_pair(rng);
  const symplectic::Splitting split = symplectic::make_splitting(p.space);
  const CMatrix w = symplectic::pair_unitary(p.space, split, p.lambda, p.mu);
  const int mult = symplectic::eigenvalue_one_multiplicity(w);
  const int inter = symplectic::intersection_dim(p.lambda, p.mu);
  require(mult == inter, describe("eigenvalue-one multiplicity vs intersection", mult, inter));
  require(inter == p.r, describe("intersection", inter, p.r));
  return max_abs(w.adjoint() * w - CMatrix::Identity(w.rows(), w.cols()));
}

double suite_transversal_isotropic(CounterRng& rng) {
  const Index n = symplectic_dim(rng);
  const SymplecticSpace space = random_space(rng, n);
  const Subspace a = random::random_lagrangian(rng, space);
  const Subspace b = random::random_lagrangian(rng, space);
  CMatrix both(n, n);
  both << a.frame(), b.frame();
  require(Subspace::span(both).dim() == n, "pair does not span the space");
  require(symplectic::intersection_dim(a, b) == 0, "pair is not transversal");
  require(symplectic::classify(space, a) == symplectic::SubspaceClass::Lagrangian, "first is not Lagrangian");
  require(symplectic::classify(space, b) == symplectic::SubspaceClass::Lagrangian, "second is not Lagrangian");
  return std::max(symplectic::isotropy_residual(space, a), symplectic::isotropy_residual(space, b));
}

double suite_graph_reconstruction(CounterRng& rng) {
  const Index n = symplectic_dim(rng);
  const SymplecticSpace space = random_space(rng, n);
  const Subspace lambda = random::random_lagrangian(rng, space);
  // Same subspace through a non-orthonormal spanning set.
  const Subspace skewed =
      Subspace::span(lambda.frame() * random::invertible(rng, lambda.dim()));
  const symplectic::GraphRep rep = symplectic::graph_rep(space, symplectic::make_splitting(space), skewed);
  const Index k = rep.u_matrix.rows();
  const double unit = max_abs(rep.u_matrix.adjoint() * rep.u_matrix - CMatrix::Identity(k, k));
  require(unit <= 1e-8, describe("unitarity of U", unit, 0.0));
  const Subspace back = symplectic::reconstruct(rep);
  require(back.same_as(lambda), "reconstructed graph differs");
  return std::max(unit, max_abs(back.projector() - lambda.projector()));
}

double suite_normalize_metric(CounterRng& rng) {
  const Index n = symplectic_dim(rng);
  const SymplecticSpace space = random_space(rng, n);
  const symplectic::NormalizedMetric nm = symplectic::normalize_metric(space);
  const double sq = max_abs(nm.form * nm.form + CMatrix::Identity(n, n));
  require(sq <= 1e-10, describe("J'^2 + I", sq, 0.0));
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const CVector x = random::gaussian(rng, n, 1);
    const CVector y = random::gaussian(rng, n, 1);
    const Complex w = y.dot(space.form() * x);
    const Complex w2 = y.dot(nm.gram * nm.form * x);
    const double rel = std::abs(w - w2) / std::max(std::abs(w), x.norm() * y.norm() * max_abs(space.form()));
    worst = std::max(worst, rel);
  }
  require(worst <= 1e-12, describe("relative omega change", worst, 0.0));
  return worst;
}

double suite_boxplus_index(CounterRng& rng) {
  const IntersectingPair p = intersecting_pair(rng);
  const SymplecticSpace product = symplectic::boxplus(p.space, p.space);
  const symplectic::BoxplusPair bp = symplectic::boxplus_pair(p.lambda, p.mu);
  require(symplectic::classify(product, bp.product) == symplectic::SubspaceClass::Lagrangian,
          "lambda [+] mu is not Lagrangian");
  require(symplectic::classify(product, bp.diagonal) == symplectic::SubspaceClass::Lagrangian,
          "diagonal is not Lagrangian");
  const symplectic::PairIndex big = symplectic::pair_index(product, bp.product, bp.diagonal);
  const symplectic::PairIndex small = symplectic::pair_index(p.space, p.lambda, p.mu);
  require(big.dim_intersection == small.dim_intersection,
          describe("dim (lambda [+] mu) n Delta", big.dim_intersection, small.dim_intersection));
  require(big.index == small.index, describe("index", big.index, small.index));
  return 0.0;
}

double suite_flow_oracle(CounterRng& rng) {
  const HermitianFamily f = hermitian_family(rng);
  const int got = hermitian_flow(f, 0.0, 1.0);
  const int want = branch_oracle(f, 0.0, 1.0, 1601);
  require(got == want, describe("spectral flow vs branch oracle", got, want));
  return 0.0;
}

double suite_flow_catenation(CounterRng& rng) {
  const HermitianFamily f = hermitian_family(rng);
  const double c = rng.uniform(0.2, 0.8);
  const int whole = hermitian_flow(f, 0.0, 1.0);
  const int parts = hermitian_flow(f, 0.0, c) + hermitian_flow(f, c, 1.0);
  require(whole == parts, describe("catenation", parts, whole));
  return 0.0;
}

double suite_flow_embedding(CounterRng& rng) {
  const HermitianFamily f = hermitian_family(rng);
  const Index extra = rng.uniform_int(1, 3);
  const CMatrix q = random::unitary(rng, extra);
  CVector d(extra);
  for (Index i = 0; i < extra; ++i) d(i) = (rng.uniform() < 0.5 ? -1.0 : 1.0) * rng.uniform(0.5, 2.0);
  const CMatrix c = q * d.asDiagonal() * q.adjoint();
  const flow::MatrixFamily block = [&](double s) {
    const CMatrix a = f(s);
    CMatrix out = CMatrix::Zero(a.rows() + extra, a.rows() + extra);
    out.topLeftCorner(a.rows(), a.rows()) = a;
    out.bottomRightCorner(extra, extra) = c;
    return out;
  };
  const int small = hermitian_flow(f, 0.0, 1.0);
  const int big = hermitian_flow(block, 0.0, 1.0);
  require(small == big, describe("embedded flow", big, small));
  return 0.0;
}

double suite_maslov_oracle(CounterRng& rng) {
  const PhasePath p = phase_path(rng);
  const maslov::MaslovResult mas = maslov::maslov_index(p.path(), maslov_opts());
  const int block = maslov::maslov_index_block(p.path(), maslov_opts()).index;
  require(mas.index == p.oracle(), describe("Maslov index vs phase oracle", mas.index, p.oracle()));
  require(block == mas.index, describe("block form", block, mas.index));
  require(mas.circle_residual <= 1e-8, describe("unit-circle residual", mas.circle_residual, 0.0));
  return mas.circle_residual;
}

double suite_maslov_product(CounterRng& rng) {
  const PhasePath p = phase_path(rng);
  const maslov::ProductIdentities ids = maslov::maslov_product_identities(p.path(), maslov_opts());
  std::ostringstream os;
  os << "product identities " << ids.pair << ", " << ids.boxplus_vs_diagonal << ", " << ids.swapped_flipped << ", "
     << ids.diagonal_vs_boxplus << "; oracle " << p.oracle();
  require(ids.all_equal() && ids.pair == p.oracle(), os.str());
  return 0.0;
}

double suite_maslov_flipping(CounterRng& rng) {
  const PhasePath p = phase_path(rng);
  const maslov::PairPath forward = p.path();
  const maslov::PairPath backward{[&](double s) {
                                    maslov::PairSample smp = p.sample(s);
                                    std::swap(smp.lambda, smp.mu);
                                    return smp;
                                  },
                                  0.0, 1.0};
  const int lhs = maslov::maslov_index(forward, maslov_opts()).index +
                  maslov::maslov_index(backward, maslov_opts()).index;
  const maslov::PairSample start = p.sample(0.0);
  const maslov::PairSample end = p.sample(1.0);
  // Endpoint intersections sit in N^0, so a departure from 1 counts only in
  // the downward direction and an arrival only from below.
  const int rhs = symplectic::intersection_dim(end.lambda, end.mu) -
                  symplectic::intersection_dim(start.lambda, start.mu);
  require(lhs == rhs, describe("Mas{l,m} + Mas{m,l}", lhs, rhs));
  return 0.0;
}

double suite_maslov_catenation(CounterRng& rng) {
  const PhasePath p = phase_path(rng);
  const double c = rng.uniform(0.25, 0.75);
  const int whole = maslov::maslov_index(p.path(), maslov_opts()).index;
  const int parts = maslov::maslov_index(p.path(0.0, c), maslov_opts()).index +
                    maslov::maslov_index(p.path(c, 1.0), maslov_opts()).index;
  require(whole == parts, describe("catenation", parts, whole));
  return 0.0;
}

double suite_maslov_naturality(CounterRng& rng) {
  const PhasePath p = phase_path(rng);
  const CMatrix l = random::invertible(rng, p.n);
  const CMatrix l_inv = l.inverse();
  const maslov::PairPath pushed{[&](double s) {
                                  const maslov::PairSample smp = p.sample(s);
                                  const CMatrix form = l_inv.adjoint() * smp.form * l_inv;
                                  return maslov::PairSample{0.5 * (form - form.adjoint()),
                                                            Subspace::span(l * smp.lambda.frame()),
                                                            Subspace::span(l * smp.mu.frame())};
                                },
                                0.0, 1.0};
  const int before = maslov::maslov_index(p.path(), maslov_opts()).index;
  const int after = maslov::maslov_index(pushed, maslov_opts()).index;
  require(before == after, describe("pushed-forward index", after, before));
  return 0.0;
}

double suite_splitting_independence(CounterRng& rng) {
  const PhasePath p = phase_path(rng);
  const CMatrix g0 = random::metric(rng, p.n);
  const CMatrix g1 = random::metric(rng, p.n);
  const maslov::MetricPath metric = [&](double s) { return CMatrix((1.0 - s) * g0 + s * g1); };
  const maslov::SplittingComparison cmp = maslov::splitting_independence_check(p.path(), metric, maslov_opts());
  require(cmp.canonical == cmp.deformed, describe("index under deformed splitting", cmp.deformed, cmp.canonical));
  require(cmp.canonical == p.oracle(), describe("index", cmp.canonical, p.oracle()));
  return 0.0;
}

double suite_maslov_vanishing(CounterRng& rng) {
  const PhasePath p = phase_path(rng, true);
  const int mas = maslov::maslov_index(p.path(), maslov_opts()).index;
  require(mas == 0, describe("index of a path with constant intersection", mas, 0));
  return 0.0;
}

double suite_bf_comparison(CounterRng& rng) {
  const Index m = rng.uniform_int(1, 4);
  RMatrix j = RMatrix::Zero(2 * m, 2 * m);
  j.topRightCorner(m, m) = -RMatrix::Identity(m, m);
  j.bottomLeftCorner(m, m) = RMatrix::Identity(m, m);
  auto real_frame = [m](const CMatrix& u) {
    RMatrix f(2 * m, m);
    f << u.real(), u.imag();
    return f;
  };
  const CMatrix u_lambda = random::unitary(rng, m);
  const CMatrix u0 = random::unitary(rng, m);
  const CMatrix h = 3.0 * random::hermitian(rng, m);
  maslov::RealSymplecticData data;
  data.j_real = j;
  data.lambda = real_frame(u_lambda);
  data.mu_path = [=](double s) { return real_frame(random::unitary_exp(s * h) * u0); };
  const maslov::BfComparison cmp = maslov::complexify_and_compare(data, maslov_opts());
  require(cmp.residual <= 1e-9, describe("||V U^-1 + conj(S)||", cmp.residual, 0.0));
  require(cmp.mas == -cmp.mas_bf, describe("Mas vs -Mas_BF", cmp.mas, -cmp.mas_bf));
  return cmp.residual;
}

bvp::FirstOrderFamily random_first_order(CounterRng& rng) {
  const Index m = rng.uniform_int(1, 2);
  CVector d(m);
  for (Index i = 0; i < m; ++i) d(i) = (i % 2 == 0 ? 1.0 : -1.0) * rng.uniform(1.0, 2.0);
  const CMatrix base = d.asDiagonal();
  const CMatrix h1 = random::hermitian(rng, m);
  const CMatrix wobble = 0.3 / std::max(1.0, max_abs(h1)) * h1;
  const CMatrix b0 = random::hermitian(rng, m);
  const CMatrix b1 = random::hermitian(rng, m);
  const Complex i(0.0, 1.0);
  bvp::FirstOrderFamily fam;
  fam.m = m;
  fam.T = rng.uniform(0.5, 2.0);
  fam.j = [=](double s, double t) { return CMatrix(i * (base + s * std::sin(3.0 * t) * wobble)); };
  fam.b = [=](double s, double t) { return CMatrix(b0 + s * std::cos(t) * b1); };
  return fam;
}

bvp::SecondOrderFamily random_second_order(CounterRng& rng) {
  const Index m = rng.uniform_int(1, 2);
  const CMatrix p1 = random::hermitian(rng, m);
  const CMatrix wobble = 0.3 / std::max(1.0, max_abs(p1)) * p1;
  const CMatrix q0 = 0.5 * random::gaussian(rng, m, m);
  const CMatrix r0 = random::hermitian(rng, m);
  const CMatrix r1 = random::hermitian(rng, m);
  bvp::SecondOrderFamily fam;
  fam.m = m;
  fam.T = rng.uniform(0.5, 2.0);
  fam.p = [=](double s, double t) {
    return CMatrix(CMatrix::Identity(m, m) + s * std::sin(t) * wobble);
  };
  fam.q = [=](double s, double t) { return CMatrix(s * std::cos(2.0 * t) * q0); };
  fam.r = [=](double s, double t) { return CMatrix(r0 + s * t * r1); };
  return fam;
}

bvp::Family random_family(CounterRng& rng) {
  if (rng.uniform() < 0.5) return random_first_order(rng);
  return random_second_order(rng);
}

double suite_bvp_transport(CounterRng& rng) {
  const bvp::Family fam = random_family(rng);
  const double s = rng.uniform();
  const double lambda = rng.uniform(-1.0, 1.0);
  const bvp::ShootingSystem sys(fam, s, 2048);
  const CMatrix gamma = sys.transfer(lambda);
  const double norm = gamma.operatorNorm();
  const double res = sys.transport_residual(gamma) / (norm * norm * max_abs(sys.boundary_form()));
  require(res <= 1e-8, describe("relative transport residual", res, 0.0));
  return res;
}

double suite_bvp_graph_lagrangian(CounterRng& rng) {
  const bvp::Family fam = random_family(rng);
  const double s = rng.uniform();
  const bvp::ShootingSystem sys(fam, s, 2048);
  const SymplecticSpace space = SymplecticSpace::make(sys.boundary_form());
  const Subspace graph = bvp::graph_subspace(sys.transfer(0.0));
  const double res = symplectic::isotropy_residual(space, graph);
  require(res <= 1e-8, describe("graph isotropy residual", res, 0.0));
  require(symplectic::classify(space, graph, 1e-6) == symplectic::SubspaceClass::Lagrangian,
          "graph is not Lagrangian");
  return res;
}

std::vector<SuiteInfo> make_suites() {
  using Fn = double (*)(CounterRng&);
  const std::vector<std::pair<std::string, Fn>> table{
      {"core.double_annihilator", suite_double_annihilator},
      {"core.fredholm_index", suite_fredholm_index},
      {"core.kernel_multiplicity", suite_kernel_multiplicity},
      {"core.transversal_isotropic", suite_transversal_isotropic},
      {"core.graph_reconstruction", suite_graph_reconstruction},
      {"core.normalize_metric", suite_normalize_metric},
      {"core.boxplus_index", suite_boxplus_index},
      {"flow.branch_oracle", suite_flow_oracle},
      {"flow.catenation", suite_flow_catenation},
      {"flow.embedding", suite_flow_embedding},
      {"maslov.phase_oracle_and_block", suite_maslov_oracle},
      {"maslov.product_identities", suite_maslov_product},
      {"maslov.flipping", suite_maslov_flipping},
      {"maslov.catenation", suite_maslov_catenation},
      {"maslov.naturality", suite_maslov_naturality},
      {"maslov.splitting_independence", suite_splitting_independence},
      {"maslov.vanishing", suite_maslov_vanishing},
      {"maslov.bf_comparison", suite_bf_comparison},
      {"bvp.transport", suite_bvp_transport},
      {"bvp.graph_lagrangian", suite_bvp_graph_lagrangian},
  };
  std::vector<SuiteInfo> out;
  for (std::size_t k = 0; k < table.size(); ++k) {
    const Fn fn = table[k].second;
    const auto stream = static_cast<std::uint64_t>(k + 1);
    out.push_back(SuiteInfo{table[k].first, [fn, stream](std::uint64_t seed, int trial) {
                              CounterRng rng(seed, stream, static_cast<std::uint64_t>(trial));
                              return fn(rng);
                            }});
  }
  return out;
}

}  // namespace

bool SweepSummary::all_passed() const {
  return std::all_of(suites.begin(), suites.end(), [](const SuiteResult& r) { return r.failed == 0; });
}

const std::vector<SuiteInfo>& property_suites() {
  static const std::vector<SuiteInfo> suites = make_suites();
  return suites;
}

SweepSummary property_sweep(std::uint64_t seed, int trials) {
  if (trials < 1) throw Error(ErrorCode::InvalidTrials, "trials must be at least 1");
  const auto& suites = property_suites();
  const int per = trials;
  const int jobs = static_cast<int>(suites.size()) * per;

  struct Outcome {
    bool ok = false;
    double residual = 0.0;
    std::string message;
  };
  std::vector<Outcome> outcomes(static_cast<std::size_t>(jobs));
  parallel_for(jobs, [&](int job) {
    const auto& suite = suites[static_cast<std::size_t>(job / per)];
    Outcome& out = outcomes[static_cast<std::size_t>(job)];
    try {
      out.residual = suite.run(seed, job % per);
      out.ok = true;
    } catch (const std::exception& e) {
      out.message = e.what();
    }
  });

  SweepSummary summary;
  summary.seed = seed;
  summary.trials = trials;
  for (std::size_t k = 0; k < suites.size(); ++k) {
    SuiteResult r;
    r.name = suites[k].name;
    r.trials = per;
    for (int t = 0; t < per; ++t) {
      const Outcome& o = outcomes[k * static_cast<std::size_t>(per) + static_cast<std::size_t>(t)];
      if (o.ok) {
        ++r.passed;
        r.worst_residual = std::max(r.worst_residual, o.residual);
      } else {
        ++r.failed;
        if (static_cast<int>(r.failures.size()) < kMaxFailuresKept) {
          r.failures.push_back("trial " + std::to_string(t) + ": " + o.message);
        }
      }
    }
    summary.suites.push_back(std::move(r));
  }
  return summary;
}

}  // namespace maslovflow::harness
