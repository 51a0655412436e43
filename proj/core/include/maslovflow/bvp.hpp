#pragma once

// Linear Hamiltonian (first-order) and Lagrangian (second-order) boundary
// value families on [0, T], parametrized by s in [0, 1].
//
// First order:   (A_s x)(t) = -j x' - b x - 1/2 j' x,  boundary form
//                diag(-j(s,0), j(s,T)) on C^{2m}.
// Second order:  L_s = -(p d/dt + q)' + q^* d/dt + r, reduced to
//                u' = J b_s(t) u with u = (p x' + q x, x), boundary form
//                diag(-J, J) on C^{4m}.
//
// Both kinds become a linear system x' = (M0 + lambda M1) x for the shifted
// operator (A_s - lambda); eigenvalues are found by shooting.

#include <functional>
#include <variant>
#include <vector>

#include "maslovflow/flow.hpp"
#include "maslovflow/maslov.hpp"
#include "maslovflow/symplectic.hpp"

namespace maslovflow::bvp {

using symplectic::Subspace;
using symplectic::SymplecticSpace;

/// (s, t) -> matrix coefficient.
using Coefficient = std::function<CMatrix(double, double)>;

struct FirstOrderFamily {
  Index m = 1;
  double T = 1.0;
  Coefficient j;     // skew-Hermitian, invertible
  Coefficient jdot;  // d j / d t; finite-differenced when empty
  Coefficient b;     // Hermitian
};

struct SecondOrderFamily {
  Index m = 1;
  double T = 1.0;
  Coefficient p;  // Hermitian, invertible
  Coefficient q;
  Coefficient r;  // Hermitian
};

using Family = std::variant<FirstOrderFamily, SecondOrderFamily>;

/// s -> Lagrangian boundary condition in the boundary space of the family.
using BoundaryPath = std::function<Subspace(double)>;

struct ShootingOptions {
  int steps = 2048;            // RK4 steps on [0, T]
  int grid = 96;               // lambda samples per eigenvalue window
  double lambda_window = 1.0;  // eigenvalues are searched in (-w, w)
};

struct BvpOptions {
  ShootingOptions shooting;
  flow::FlowOptions flow;
  double lagrangian_tol = 1e-6;
};

/// x' = (M0(t) + lambda M1(t)) x at fixed s, sampled at the RK4 half steps.
class ShootingSystem {
 public:
  ShootingSystem(const Family& family, double s, int steps);

  Index state_dim() const { return d_; }
  double length() const { return T_; }
  int steps() const { return steps_; }

  /// Fundamental solution at T of the shifted system.
  CMatrix transfer(double lambda) const;
  /// Boundary form diag(-F(0), F(T)) of the family at this s.
  const CMatrix& boundary_form() const { return boundary_form_; }
  /// ||Gamma^H F(T) Gamma - F(0)||_max.
  double transport_residual(const CMatrix& gamma) const;

 private:
  Index d_ = 0;
  double T_ = 0.0;
  int steps_ = 0;
  std::vector<CMatrix> m0_;
  std::vector<CMatrix> m1_;
  CMatrix f0_;
  CMatrix f_end_;
  CMatrix boundary_form_;
};

/// Gamma_{s,lambda}(T) with Gamma(0) = I (classical RK4, uniform steps >= 64).
CMatrix transfer_matrix(const Family& family, double s, double lambda, int steps = 2048);

/// Gamma_{s,lambda}(t) for any t in [0, T], max(64, steps * t / T) steps.
CMatrix transfer_matrix_to(const Family& family, double s, double lambda, double t, int steps = 2048);

CMatrix boundary_form(const Family& family, double s);
SymplecticSpace boundary_space(const Family& family, double s);

/// {(z, Gamma z)}.
Subspace graph_subspace(const CMatrix& gamma);

/// Hamiltonian coefficient b_{s,lambda}(t) of the reduced second-order system.
CMatrix hamiltonian_coefficient(const SecondOrderFamily& family, double s, double t, double lambda = 0.0);

/// J = [[0, -I], [I, 0]] of size 2m.
CMatrix standard_form(Index m);

/// Boundary vector (u1(0), u2(0), u1(T), u2(T)) with u = (p x' + q x, x).
CVector trace_map_second(const SecondOrderFamily& family, double s, const CVector& x0, const CVector& dx0,
                         const CVector& x_end, const CVector& dx_end);

struct Eigenvalue {
  double lambda = 0.0;
  int multiplicity = 0;
};

/// Eigenvalues of the boundary problem in the open window (lo, hi).
std::vector<Eigenvalue> eigen_count(const ShootingSystem& system, const Subspace& boundary, double lo, double hi,
                                    int grid);
std::vector<Eigenvalue> eigen_count(const Family& family, double s, const Subspace& boundary, double lo,
                                    double hi, const ShootingOptions& opts = {});

struct BvpResult {
  int value = 0;
  flow::CrossingReport report;
  double transport_residual = 0.0;
  double lagrangian_residual = 0.0;
  double unitary_residual = 0.0;  // eigenvalues of W_s off the unit circle
};

/// Spectral flow through 0 of the boundary-value family (shooting pipeline).
BvpResult sf_bvp(const Family& family, const BoundaryPath& boundary, const BvpOptions& opts = {});

/// Mas{ G(Gamma_s(T)), W_s } in the boundary space (Maslov pipeline).
BvpResult mas_bvp(const Family& family, const BoundaryPath& boundary, const BvpOptions& opts = {});

/// W(R) = {(x, y, z, u) : (x, -z) in R^perp, (y, u) in R} in C^{4m}.
Subspace w_of_r(const Subspace& r);

/// Maslov-Long index Mas{ G(Gamma_s(t)), W }, t in [t0, t_final].
maslov::MaslovResult maslov_long(const Family& family, double s, const Subspace& boundary, double t_final,
                                 const BvpOptions& opts = {}, double t0 = 0.0);

/// Eigenvalues in the lambda window on a uniform s grid (river plot data).
std::vector<flow::SpectrumSample> eigenvalue_trace(const Family& family, const BoundaryPath& boundary, int points,
                                                   const BvpOptions& opts = {});

/// Eigenphases of the Maslov unitary W_s on a uniform s grid.
std::vector<flow::SpectrumSample> eigenphase_trace(const Family& family, const BoundaryPath& boundary, int points,
                                                   const BvpOptions& opts = {});

Index state_dim(const Family& family);
double interval_length(const Family& family);

}  // namespace maslovflow::bvp
