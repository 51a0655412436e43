#include <doctest.h>

#include "maslovflow/bvp.hpp"
#include "maslovflow/harness.hpp"
#include "maslovflow/random.hpp"
#include "oracles.hpp"

using namespace maslovflow;
using namespace maslovflow::bvp;
using oracle::kI;
using oracle::kPi;
using oracle::scalar;

namespace {

FirstOrderFamily free_transport(double b = 0.0) {
  FirstOrderFamily f;
  f.m = 1;
  f.T = 1.0;
  f.j = [](double, double) { return scalar(kI); };
  f.b = [b](double, double) { return scalar(b); };
  return f;
}

SecondOrderFamily oscillator(double k, double length = kPi) {
  SecondOrderFamily f;
  f.m = 1;
  f.T = length;
  f.p = [](double, double) { return scalar(1.0); };
  f.q = [](double, double) { return scalar(0.0); };
  f.r = [k](double, double) { return scalar(-k); };
  return f;
}

Subspace rotated_graph(double sigma) {
  CMatrix v(2, 1);
  v << 1.0, std::exp(2.0 * kPi * kI * sigma);
  return Subspace::span(v);
}

std::vector<double> eigenvalues(const Family& f, double s, const Subspace& w, double lo, double hi) {
  std::vector<double> out;
  for (const Eigenvalue& ev : eigen_count(f, s, w, lo, hi)) out.insert(out.end(), static_cast<std::size_t>(ev.multiplicity), ev.lambda);
  return out;
}

std::vector<double> branch_values(double (*branch)(double, int), double s, double lo, double hi, int kmin, int kmax) {
  std::vector<double> out;
  for (int k = kmin; k <= kmax; ++k) {
    const double v = branch(s, k);
    if (v > lo && v < hi) out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

void check_close(const std::vector<double>& got, const std::vector<double>& want, double tol) {
  REQUIRE(got.size() == want.size());
  for (std::size_t k = 0; k < got.size(); ++k) CHECK(std::abs(got[k] - want[k]) <= tol);
}

harness::Scenario builtin(const char* name) {
  auto sc = harness::find_builtin(name);
  REQUIRE(sc.has_value());
  return *sc;
}

}  // namespace

TEST_CASE("transfer matrix closed forms") {
  CHECK(std::abs(transfer_matrix(free_transport(), 0.0, 0.0)(0, 0) - 1.0) < 1e-14);
  for (double lambda : {0.3, -1.7, 4.0}) {
    CHECK(std::abs(transfer_matrix(free_transport(), 0.0, lambda)(0, 0) - std::exp(kI * lambda)) < 1e-10);
  }
  // -x'' = 0: x(t) = x(0) + t x'(0), u = (x', x)
  const CMatrix g = transfer_matrix(oscillator(0.0, 2.0), 0.0, 0.0);
  CMatrix expected(2, 2);
  expected << 1.0, 0.0, 2.0, 1.0;
  CHECK((g - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("symplectic transport on random families") {
  for (std::uint64_t trial = 0; trial < 10; ++trial) {
    random::CounterRng rng(41, 1, trial);
    const CMatrix b0 = random::hermitian(rng, 2), b1 = random::hermitian(rng, 2);
    const CMatrix q = random::unitary(rng, 2);
    FirstOrderFamily f;
    f.m = 2;
    f.T = 1.0;
    f.j = [q](double s, double t) {
      Eigen::Vector2cd d(kI * (1.0 + 0.3 * s * std::sin(t)), -kI * (1.0 + 0.2 * std::cos(2.0 * t)));
      return CMatrix(q * d.asDiagonal() * q.adjoint());
    };
    f.b = [b0, b1](double s, double t) { return CMatrix(b0 + s * std::cos(t) * b1); };
    const double s = rng.uniform(), lambda = rng.uniform(-1.0, 1.0);
    const ShootingSystem sys(f, s, 2048);
    const CMatrix gamma = sys.transfer(lambda);
    const CMatrix f0 = f.j(s, 0.0), f1 = f.j(s, 1.0);
    CHECK((gamma.adjoint() * f1 * gamma - f0).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK(sys.transport_residual(gamma) <= 1e-8);
    const SymplecticSpace space = boundary_space(f, s);
    CHECK(symplectic::classify(space, graph_subspace(gamma)) == symplectic::SubspaceClass::Lagrangian);
  }
}

TEST_CASE("boundary space and graphs") {
  const SymplecticSpace space = boundary_space(free_transport(), 0.0);
  CHECK((space.form() - (CMatrix(2, 2) << -kI, 0.0, 0.0, kI).finished()).cwiseAbs().maxCoeff() < 1e-14);
  const Subspace delta = graph_subspace(CMatrix::Identity(1, 1));
  CHECK(oracle::isotropy(space.form(), delta.frame()) < 1e-14);
  for (double theta : {0.0, 0.4, 2.5}) {
    CHECK(symplectic::classify(space, rotated_graph(theta / (2.0 * kPi))) == symplectic::SubspaceClass::Lagrangian);
  }
}

TEST_CASE("second-order reduction") {
  SecondOrderFamily f = oscillator(0.0);
  CMatrix b = hamiltonian_coefficient(f, 0.0, 0.3);
  CHECK((b - (CMatrix(2, 2) << 1.0, 0.0, 0.0, 0.0).finished()).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((standard_form(1) * b - (CMatrix(2, 2) << 0.0, 0.0, 1.0, 0.0).finished()).cwiseAbs().maxCoeff() < 1e-14);
  f.r = [](double, double) { return scalar(2.5); };
  CHECK(std::abs(hamiltonian_coefficient(f, 0.0, 0.3)(1, 1) + 2.5) < 1e-14);

  // u = (x', x) with x = sin(sqrt(k) t) solves u' = J b u for -x'' - k x = 0
  const double k = 1.7, w = std::sqrt(k);
  const SecondOrderFamily osc = oscillator(k);
  for (double t : {0.1, 0.9, 2.2}) {
    const CVector u = (CVector(2) << w * std::cos(w * t), std::sin(w * t)).finished();
    const CVector du = (CVector(2) << -k * std::sin(w * t), w * std::cos(w * t)).finished();
    CHECK((standard_form(1) * hamiltonian_coefficient(osc, 0.0, t) * u - du).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("trace map") {
  const SecondOrderFamily f = oscillator(0.0);
  auto v = [](double x) { return (CVector(1) << x).finished(); };
  const CVector tr = trace_map_second(f, 0.0, v(0.0), v(1.0), v(0.0), v(-1.0));
  CHECK((tr - (CVector(4) << 1.0, 0.0, -1.0, 0.0).finished()).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(trace_map_second(f, 0.0, v(0.0), v(0.0), v(0.0), v(0.0)).cwiseAbs().maxCoeff() == 0.0);
  const Subspace w = w_of_r(Subspace::zero(2));
  CHECK(w.contains(Subspace::span(CMatrix(tr))));
}

TEST_CASE("w_of_r") {
  const Subspace dirichlet = w_of_r(Subspace::zero(2));
  CHECK(dirichlet.dim() == 2);
  CMatrix ac = CMatrix::Zero(4, 2);
  ac(0, 0) = 1.0;
  ac(2, 1) = 1.0;
  CHECK(oracle::same_span(dirichlet.frame(), ac));
  CMatrix yu = CMatrix::Zero(4, 2);
  yu(1, 0) = 1.0;
  yu(3, 1) = 1.0;
  CHECK(oracle::same_span(w_of_r(Subspace::full(2)).frame(), yu));

  for (Index m : {1, 2}) {
    CMatrix diag(2 * m, m);
    diag << CMatrix::Identity(m, m), CMatrix::Identity(m, m);
    const Subspace w = w_of_r(Subspace::span(diag));
    CMatrix form = CMatrix::Zero(4 * m, 4 * m);
    form.topLeftCorner(2 * m, 2 * m) = -standard_form(m);
    form.bottomRightCorner(2 * m, 2 * m) = standard_form(m);
    CHECK(w.dim() == 2 * m);
    CHECK(symplectic::classify(SymplecticSpace::make(form), w) == symplectic::SubspaceClass::Lagrangian);
  }
}

TEST_CASE("eigenvalue localization") {
  const FirstOrderFamily f = free_transport();
  CHECK(eigen_count(f, 0.0, rotated_graph(0.25), -1.0, 1.0).empty());
  const auto in_window = eigen_count(f, 0.0, rotated_graph(0.25), 1.0, 2.0);
  REQUIRE(in_window.size() == 1);
  CHECK(in_window[0].multiplicity == 1);
  CHECK(std::abs(in_window[0].lambda - kPi / 2) < 1e-8);

  const Subspace dirichlet = w_of_r(Subspace::zero(2));
  check_close(eigenvalues(oscillator(0.0), 0.0, dirichlet, 0.0, 5.0), {1.0, 4.0}, 1e-6);

  CMatrix periodic(2, 1);
  periodic << 1.0, 1.0;
  CHECK(eigen_count(free_transport(1.0), 0.0, Subspace::span(periodic), -0.5, 0.5).empty());
}

TEST_CASE("built-in scenarios against closed-form branches") {
  struct Case {
    const char* name;
    double (*branch)(double, int);
    int kmin, kmax;
    int expected;
  };
  // sf is read off the branches: negative count at s = 0 minus at s = 1
  const Case cases[] = {{"S1", oracle::s1_branch, -6, 6, 1},
                        {"S2", oracle::s2_branch, 1, 8, -1},
                        {"S3", oracle::s3_branch, -6, 6, 0},
                        {"S5", oracle::s5_branch, -6, 6, -2}};
  for (const Case& c : cases) {
    CAPTURE(c.name);
    const harness::Scenario sc = builtin(c.name);
    const int from_branches = oracle::flow_from_branches(oracle::branch_set(c.branch, c.kmin, c.kmax), 0.0, 1.0);
    CHECK(from_branches == c.expected);
    for (double s : {0.13, 0.5, 0.77}) {
      const double w = 3.0;
      check_close(eigenvalues(sc.family, s, sc.boundary(s), -w, w), branch_values(c.branch, s, -w, w, c.kmin, c.kmax),
                  1e-6);
    }
    const BvpResult sf = sf_bvp(sc.family, sc.boundary, sc.options);
    const BvpResult mas = mas_bvp(sc.family, sc.boundary, sc.options);
    CHECK(sf.value == from_branches);
    CHECK(mas.value == from_branches);
    CHECK(mas.transport_residual <= 1e-8);
    CHECK(mas.unitary_residual <= 1e-8);
  }
  const harness::Scenario s4 = builtin("S4");
  CHECK(sf_bvp(s4.family, s4.boundary, s4.options).value == 0);
  CHECK(mas_bvp(s4.family, s4.boundary, s4.options).value == 0);
}

TEST_CASE("Maslov-Long index") {
  CMatrix anti(2, 1);
  anti << 1.0, -1.0;
  CHECK(maslov_long(free_transport(), 0.0, Subspace::span(anti), 1.0).index == 0);

  const harness::Scenario s2 = builtin("S2");
  const Subspace w = s2.boundary(0.0);
  const int i0 = maslov_long(s2.family, 0.0, w, kPi).index;
  const int i1 = maslov_long(s2.family, 1.0, w, kPi).index;
  CHECK(sf_bvp(s2.family, s2.boundary, s2.options).value == i1 - i0);
  CHECK(maslov_long(s2.family, 0.0, w, kPi / 2).index + maslov_long(s2.family, 0.0, w, kPi, {}, kPi / 2).index == i0);
  MESSAGE("S2: i_W(Gamma_1) = " << i1 << ", i_W(Gamma_0) = " << i0);

  const oracle::RandomProblem p = oracle::random_problem(2024, 0, 1);
  const Subspace wr = w_of_r(p.r);
  const BoundaryPath path = [wr](double) { return wr; };
  const int sf = sf_bvp(p.family, path).value;
  CHECK(sf == mas_bvp(p.family, path).value);
  CHECK(sf == maslov_long(p.family, 1.0, wr, p.family.T).index - maslov_long(p.family, 0.0, wr, p.family.T).index);
}

TEST_CASE("eigenvalue and eigenphase traces") {
  const harness::Scenario s2 = builtin("S2");
  const auto ev = eigenvalue_trace(s2.family, s2.boundary, 5, s2.options);
  REQUIRE(ev.size() == 5);
  REQUIRE(ev[4].coords.size() == 1);
  CHECK(std::abs(ev[4].coords[0] + 0.5) < 1e-6);
  const auto ph = eigenphase_trace(s2.family, s2.boundary, 5, s2.options);
  CHECK(ph.size() == 5);
  for (const auto& smp : ph) CHECK(smp.coords.size() == 2);
}
