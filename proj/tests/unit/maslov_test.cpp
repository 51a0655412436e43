#include <doctest.h>

#include "maslovflow/maslov.hpp"
#include "maslovflow/random.hpp"
#include "oracles.hpp"

using namespace maslovflow;
using namespace maslovflow::maslov;
using oracle::kI;
using oracle::kPi;

namespace {

CMatrix d_form() {
  CMatrix d = CMatrix::Zero(2, 2);
  d(0, 0) = -kI;
  d(1, 1) = kI;
  return d;
}

Subspace line(Complex a, Complex b) {
  CMatrix v(2, 1);
  v << a, b;
  return Subspace::span(v);
}

PairPath rotation_pair(double turns = 1.0) {
  return PairPath{[turns](double s) {
                    return PairSample{d_form(), line(1.0, 1.0), line(1.0, std::exp(2.0 * kPi * kI * turns * s))};
                  },
                  0.0, 1.0};
}

PairPath constant_pair() {
  return PairPath{[](double) { return PairSample{d_form(), line(1.0, 1.0), line(1.0, kI)}; }, 0.0, 1.0};
}

// Lagrangian graphs of U_s = Q diag(exp(i theta_k(s))) Q^H and V = I in a
// fixed form J0, pushed forward by L_s = I + s E; the index is the number of
// eigenphases crossing 2 pi Z, with arrivals from below counted and
// departures upward not.
struct PhasePath {
  PairPath path;
  int expected = 0;
};

PhasePath phase_path(std::uint64_t trial) {
  random::CounterRng rng(31, 1, trial);
  const Index n = 2 * rng.uniform_int(1, 2);
  const Index h = n / 2;
  const CMatrix j0 = random::balanced_form(rng, n);
  const auto space0 = SymplecticSpace::make(j0);
  const CMatrix q = random::unitary(rng, h);
  const CMatrix e = random::gaussian(rng, n, n);
  const CMatrix e_scaled = 0.6 / e.operatorNorm() * e;
  Eigen::VectorXd start(h), slope(h);
  PhasePath out;
  for (Index k = 0; k < h; ++k) {
    start(k) = rng.uniform() < 0.25 ? 0.0 : rng.uniform(-7.0, 7.0);
    slope(k) = rng.uniform(-9.0, 9.0);
    const double end = start(k) + slope(k);
    out.expected += static_cast<int>(std::floor(end / (2.0 * kPi))) - static_cast<int>(std::floor(start(k) / (2.0 * kPi)));
  }
  out.path = PairPath{[=](double s) {
                        Eigen::VectorXcd d(h);
                        for (Index k = 0; k < h; ++k) d(k) = std::polar(1.0, start(k) + s * slope(k));
                        const CMatrix l = CMatrix::Identity(n, n) + s * e_scaled;
                        const CMatrix linv = l.inverse();
                        const CMatrix js = linv.adjoint() * j0 * linv;
                        const Subspace lam = random::lagrangian_from_unitary(space0, q * d.asDiagonal() * q.adjoint());
                        const Subspace mu = random::lagrangian_from_unitary(space0, CMatrix::Identity(h, h));
                        return PairSample{js, Subspace::span(l * lam.frame()), Subspace::span(l * mu.frame())};
                      },
                      0.0, 1.0};
  return out;
}

PairPath swapped(const PairPath& p) {
  return PairPath{[p](double s) {
                    PairSample x = p.sampler(s);
                    std::swap(x.lambda, x.mu);
                    return x;
                  },
                  p.a, p.b};
}

}  // namespace

TEST_CASE("rotation pair and constant pair") {
  CHECK(std::abs(pair_unitary_at(rotation_pair().sampler(0.25))(0, 0) - kI) < 1e-12);
  CHECK(maslov_index(rotation_pair()).index == 1);
  CHECK(maslov_index_block(rotation_pair()).index == 1);
  CHECK(maslov_index(rotation_pair(-1.0)).index == -1);
  CHECK(maslov_index(rotation_pair(2.0)).index == 2);
  CHECK(maslov_index(constant_pair()).index == 0);
  CHECK(maslov_index_block(constant_pair()).index == 0);
}

TEST_CASE("product identities") {
  const ProductIdentities rot = maslov_product_identities(rotation_pair());
  CHECK(rot.pair == 1);
  CHECK(rot.all_equal());
  const ProductIdentities c = maslov_product_identities(constant_pair());
  CHECK(c.pair == 0);
  CHECK(c.all_equal());
}

TEST_CASE("splitting independence") {
  const SplittingComparison same =
      splitting_independence_check(rotation_pair(), [](double) { return CMatrix(CMatrix::Identity(2, 2)); });
  CHECK(same.canonical == same.deformed);
  CMatrix g = CMatrix::Zero(2, 2);
  g(0, 0) = 2.0;
  g(1, 1) = 3.0;
  const SplittingComparison d = splitting_independence_check(rotation_pair(), [g](double) { return g; });
  CHECK(d.canonical == 1);
  CHECK(d.deformed == 1);
}

TEST_CASE("random paths match the phase oracle in both forms") {
  for (std::uint64_t trial = 0; trial < 50; ++trial) {
    const PhasePath p = phase_path(trial);
    const MaslovResult r = maslov_index(p.path);
    CHECK(r.index == p.expected);
    CHECK(maslov_index_block(p.path).index == p.expected);
    CHECK(r.circle_residual <= 1e-8);
    CHECK(r.unitary_residual <= 1e-8);
  }
}

TEST_CASE("catenation, naturality and vanishing") {
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    const PhasePath p = phase_path(trial);
    PairPath left = p.path, right = p.path;
    left.b = 0.41;
    right.a = 0.41;
    CHECK(maslov_index(left).index + maslov_index(right).index == p.expected);

    random::CounterRng rng(32, 1, trial);
    const Index n = p.path.sampler(0.0).form.rows();
    const CMatrix l = random::invertible(rng, n);
    const CMatrix linv = l.inverse();
    const PairPath pushed{[&](double s) {
                            const PairSample x = p.path.sampler(s);
                            return PairSample{linv.adjoint() * x.form * linv, Subspace::span(l * x.lambda.frame()),
                                              Subspace::span(l * x.mu.frame())};
                          },
                          0.0, 1.0};
    CHECK(maslov_index(pushed).index == p.expected);

    const PairPath same{[&](double s) {
                          PairSample x = p.path.sampler(s);
                          x.mu = x.lambda;
                          return x;
                        },
                        0.0, 1.0};
    CHECK(maslov_index(same).index == 0);
  }
}

TEST_CASE("flipping identity in the endpoint-convention form") {
  // W_s = exp(i pi s): lambda and mu coincide at s = 0 only
  const PairPath half{[](double s) { return PairSample{d_form(), line(1.0, 1.0), line(1.0, std::exp(kPi * kI * s))}; },
                      0.0, 1.0};
  const int forward = maslov_index(half).index;
  const int backward = maslov_index(swapped(half)).index;
  const PairSample s0 = half.sampler(0.0), s1 = half.sampler(1.0);
  const int dim0 = oracle::intersection_dim(s0.lambda.frame(), s0.mu.frame());
  const int dim1 = oracle::intersection_dim(s1.lambda.frame(), s1.mu.frame());
  CHECK(dim0 == 1);
  CHECK(dim1 == 0);
  CHECK(forward == 0);
  CHECK(backward == -1);
  CHECK(forward + backward == dim1 - dim0);

  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    const PhasePath p = phase_path(trial);
    const PairSample a = p.path.sampler(0.0), b = p.path.sampler(1.0);
    CHECK(maslov_index(p.path).index + maslov_index(swapped(p.path)).index ==
          oracle::intersection_dim(b.lambda.frame(), b.mu.frame()) -
              oracle::intersection_dim(a.lambda.frame(), a.mu.frame()));
  }
}

TEST_CASE("real Lagrangians and the Leray generator") {
  RMatrix j(2, 2);
  j << 0, -1, 1, 0;
  RMatrix e1(2, 1);
  e1 << 1, 0;
  const BfComparison fixed = complexify_and_compare(RealSymplecticData{j, e1, [e1](double) { return e1; }, 0.0, 1.0});
  CHECK(fixed.mas == 0);
  CHECK(fixed.mas_bf == 0);
  CHECK(fixed.residual <= 1e-9);

  const BfComparison rot = complexify_and_compare(RealSymplecticData{j, e1,
                                                                     [](double s) {
                                                                       RMatrix v(2, 1);
                                                                       v << std::cos(kPi * s), std::sin(kPi * s);
                                                                       return v;
                                                                     },
                                                                     0.0, 1.0});
  CHECK(rot.mas == -rot.mas_bf);
  CHECK(rot.residual <= 1e-9);
  MESSAGE("rotation by pi s: mas = " << rot.mas << ", mas_bf = " << rot.mas_bf);
}

TEST_CASE("eigenphase trace") {
  const auto samples = eigenphase_trace(rotation_pair(), 5);
  REQUIRE(samples.size() == 5);
  CHECK(samples[1].coords.size() == 1);
  CHECK(samples[1].coords[0] == doctest::Approx(kPi / 2));
}
