#include <cmath>
#include <numbers>

#include "maslovflow/harness.hpp"

namespace maslovflow::harness {

namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI{0.0, 1.0};

CMatrix scalar(Complex v) {
  CMatrix m(1, 1);
  m(0, 0) = v;
  return m;
}

symplectic::Subspace span2(Complex a, Complex b) {
  CMatrix v(2, 1);
  v << a, b;
  return symplectic::Subspace::span(v);
}

// {(z, exp(2 pi i s) z)}
bvp::BoundaryPath rotating() {
  return [](double s) { return span2(1.0, std::exp(2.0 * kPi * kI * s)); };
}

bvp::BoundaryPath periodic() {
  const symplectic::Subspace diagonal = span2(1.0, 1.0);
  return [diagonal](double) { return diagonal; };
}

Scenario s1() {
  Scenario sc;
  sc.name = "S1";
  sc.description = "rotating boundary transport: j = i, b = 0, T = 1, W_s = {(z, exp(2 pi i s) z)}";
  bvp::FirstOrderFamily fam;
  fam.j = [](double, double) { return scalar(kI); };
  fam.jdot = [](double, double) { return scalar(0.0); };
  fam.b = [](double, double) { return scalar(0.0); };
  sc.family = fam;
  sc.boundary = rotating();
  sc.expected = Expected{1, 1, "closed form: eigenvalue branches 2 pi (s + k)"};
  return sc;
}

Scenario s2() {
  Scenario sc;
  sc.name = "S2";
  sc.description = "softening oscillator -x'' - 1.5 s x on [0, pi], Dirichlet via W(R), R = {0}";
  sc.kind = ScenarioKind::SecondOrder;
  bvp::SecondOrderFamily fam;
  fam.T = kPi;
  fam.p = [](double, double) { return scalar(1.0); };
  fam.q = [](double, double) { return scalar(0.0); };
  fam.r = [](double s, double) { return scalar(-1.5 * s); };
  sc.family = fam;
  const symplectic::Subspace w = bvp::w_of_r(symplectic::Subspace::zero(2));
  sc.boundary = [w](double) { return w; };
  sc.expected = Expected{-1, -1, "closed form: eigenvalue branches k^2 - 1.5 s"};
  return sc;
}

Scenario s3() {
  Scenario sc;
  sc.name = "S3";
  sc.description = "s-dependent j = i (1 + 0.5 s sin(pi t)), b = s cos(t), T = 1, W_s as in S1";
  bvp::FirstOrderFamily fam;
  fam.j = [](double s, double t) { return scalar(kI * (1.0 + 0.5 * s * std::sin(kPi * t))); };
  fam.jdot = [](double s, double t) { return scalar(kI * (0.5 * s * kPi * std::cos(kPi * t))); };
  fam.b = [](double s, double t) { return scalar(s * std::cos(t)); };
  sc.family = fam;
  sc.boundary = rotating();
  sc.expected = Expected{0, 0,
                         "closed form: branches (2 pi (s + k) - s C(s)) / D(s) with D, C integrals of "
                         "1 / g and cos(t) / g, g = 1 + 0.5 s sin(pi t); dual-pipeline agreement"};
  return sc;
}

Scenario s4() {
  Scenario sc;
  sc.name = "S4";
  sc.description = "constant invertible: j = i, b = 1, T = 1, periodic boundary";
  bvp::FirstOrderFamily fam;
  fam.j = [](double, double) { return scalar(kI); };
  fam.jdot = [](double, double) { return scalar(0.0); };
  fam.b = [](double, double) { return scalar(1.0); };
  sc.family = fam;
  sc.boundary = periodic();
  sc.options.shooting.lambda_window = 2.0;
  sc.expected = Expected{0, 0, "trivial: s-independent spectrum 2 pi k - 1"};
  return sc;
}

Scenario s5() {
  Scenario sc;
  sc.name = "S5";
  sc.description =
      "periodic coefficients: j = i (1 + 0.3 s sin^2(pi t)), b = 2 pi (1.5 s - 0.25) + 0.4 cos(2 pi t), "
      "T = 1, W_s = diagonal";
  bvp::FirstOrderFamily fam;
  fam.j = [](double s, double t) {
    const double x = std::sin(kPi * t);
    return scalar(kI * (1.0 + 0.3 * s * x * x));
  };
  fam.jdot = [](double s, double t) { return scalar(kI * (0.3 * s * kPi * std::sin(2.0 * kPi * t))); };
  fam.b = [](double s, double t) { return scalar(2.0 * kPi * (1.5 * s - 0.25) + 0.4 * std::cos(2.0 * kPi * t)); };
  sc.family = fam;
  sc.boundary = periodic();
  sc.expected = Expected{-2, -2,
                         "closed form: branches (2 pi k - B(s)) / D(s) with D, B integrals of 1 / g and "
                         "b / g; dual-pipeline agreement"};
  return sc;
}

}  // namespace

std::vector<Scenario> builtin_scenarios() { return {s1(), s2(), s3(), s4(), s5()}; }

std::optional<Scenario> find_builtin(const std::string& name) {
  for (Scenario& sc : builtin_scenarios()) {
    if (sc.name == name) return sc;
  }
  return std::nullopt;
}

}  // namespace maslovflow::harness
