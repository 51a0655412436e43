#include "maslovflow/flow.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

namespace maslovflow::flow {

namespace {

constexpr double kZeroFraction = 1e-9;
constexpr double kMarginFraction = 1e-6;
constexpr double kDeltaFraction = 0.25;

double wrap_phase(double phi) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  phi = std::fmod(phi, two_pi);
  if (phi <= -std::numbers::pi) phi += two_pi;
  if (phi > std::numbers::pi) phi -= two_pi;
  return phi;
}

// Region of a coordinate relative to the window (-delta, delta) and the
// outer bands; on the circle both far arcs are one region.
int region(double c, double delta, double outer, bool circular) {
  if (c <= -outer) return circular ? 2 : -2;
  if (c <= -delta) return -1;
  if (c < delta) return 0;
  if (c < outer) return 1;
  return 2;
}

double circle_distance(double a, double b, double half_period) {
  const double d = std::fmod(std::abs(a - b), 2.0 * half_period);
  return std::min(d, 2.0 * half_period - d);
}

// Branches matched between neighbouring samples must stay in one region.
bool branches_consistent(const SpectrumSample& left, const SpectrumSample& right, double delta, double outer) {
  const bool complete = (left.ordered_branches && right.ordered_branches) || (left.circular && right.circular);
  if (!complete || left.coords.size() != right.coords.size()) return true;
  const std::size_t n = left.coords.size();
  std::size_t shift = 0;
  if (left.circular) {
    double best = INFINITY;
    for (std::size_t r = 0; r < n; ++r) {
      double worst = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        worst = std::max(worst, circle_distance(left.coords[k], right.coords[(k + r) % n], left.horizon));
      }
      if (worst < best) {
        best = worst;
        shift = r;
      }
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    const double l = left.coords[k];
    const double r = right.coords[(k + shift) % n];
    if (region(l, delta, outer, left.circular) != region(r, delta, outer, left.circular)) return false;
  }
  return true;
}

class Engine {
 public:
  Engine(const SpectrumSampler& sampler, double scale, const FlowOptions& opts)
      : sampler_(sampler),
        opts_(opts),
        tol_{kZeroFraction * scale, kMarginFraction * scale},
        delta_max_(opts.delta_max > 0.0 ? opts.delta_max : kDeltaFraction * scale) {
    report_.scale = scale;
  }

  CrossingReport run(double a, double b) {
    const int n = std::max(1, opts_.initial_segments);
    report_.partition.push_back(a);
    for (int k = 0; k < n; ++k) {
      const double sl = a + (b - a) * k / n;
      const double sr = k + 1 == n ? b : a + (b - a) * (k + 1) / n;
      segment(sl, sr, 0);
    }
    return std::move(report_);
  }

 private:
  const SpectrumSample& sample(double s) {
    auto it = cache_.find(s);
    if (it == cache_.end()) {
      SpectrumSample smp = sampler_(s);
      smp.s = s;
      std::sort(smp.coords.begin(), smp.coords.end());
      it = cache_.emplace(s, std::move(smp)).first;
    }
    return it->second;
  }

  struct Band {
    int below = 0;  // -outer < c <= -delta
    int above = 0;  // delta <= c < outer
    bool operator==(const Band&) const = default;
  };

  static Band band_count(const SpectrumSample& smp, double delta, double outer) {
    Band out;
    for (double c : smp.coords) {
      if (c <= -delta && c > -outer) ++out.below;
      if (c >= delta && c < outer) ++out.above;
    }
    return out;
  }

  bool clear(const std::array<const SpectrumSample*, 3>& samples, double edge) const {
    for (const SpectrumSample* smp : samples) {
      for (double c : smp->coords) {
        if (std::abs(std::abs(c) - edge) <= tol_.margin) return false;
      }
    }
    return true;
  }

  bool admissible(const std::array<const SpectrumSample*, 3>& samples, double delta, double outer) const {
    if (!clear(samples, delta) || (std::isfinite(outer) && !clear(samples, outer))) return false;
    const int total = window_count(*samples[0], delta, tol_).total();
    const Band band = band_count(*samples[0], delta, outer);
    for (const SpectrumSample* smp : {samples[1], samples[2]}) {
      if (window_count(*smp, delta, tol_).total() != total) return false;
      if (!(band_count(*smp, delta, outer) == band)) return false;
    }
    return branches_consistent(*samples[0], *samples[1], delta, outer) &&
           branches_consistent(*samples[1], *samples[2], delta, outer);
  }

  std::optional<std::pair<double, double>> choose_window(const SpectrumSample& left, const SpectrumSample& mid,
                                                         const SpectrumSample& right) const {
    const std::array<const SpectrumSample*, 3> samples{&left, &mid, &right};
    double horizon = INFINITY;
    std::vector<double> edges{0.0};
    for (const SpectrumSample* smp : samples) {
      horizon = std::min(horizon, smp->horizon);
      for (double c : smp->coords) {
        if (std::abs(c) > tol_.zero) edges.push_back(std::abs(c));
      }
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    // Gaps between consecutive |c|, highest first.
    std::vector<std::pair<double, double>> gaps;
    for (std::size_t j = edges.size(); j-- > 0;) {
      const double lo = std::max(edges[j], tol_.zero);
      const double hi = j + 1 == edges.size() ? horizon : std::min(edges[j + 1], horizon);
      if (hi - lo > 2.0 * tol_.margin) gaps.emplace_back(lo, hi);
    }

    // A branch can only pass the window, or the arc beyond the outer edge on
    // the circle, unseen by jumping a distance of order horizon / 2 between
    // neighbouring samples.
    const double outer_min = std::min(2.0 * delta_max_, 0.5 * horizon);
    const double outer_max = 0.75 * horizon;
    for (const auto& [outer_lo, outer_hi_raw] : gaps) {
      const double outer_hi = std::min(outer_hi_raw, outer_max);
      if (outer_hi <= outer_min + tol_.margin || outer_hi <= outer_lo + 2.0 * tol_.margin) continue;
      const double floor = std::max(outer_lo, outer_min);
      const double outer = std::isfinite(outer_hi) ? 0.5 * (floor + outer_hi) : INFINITY;
      for (const auto& [lo, hi] : gaps) {
        if (lo >= outer) continue;
        const double top = std::min(hi, outer);
        if (delta_max_ <= lo + tol_.margin) continue;
        const double delta = delta_max_ < top - tol_.margin ? delta_max_ : 0.5 * (lo + top);
        if (delta <= lo + tol_.margin || delta >= top - tol_.margin) continue;
        if (admissible(samples, delta, outer)) return std::make_pair(delta, outer);
      }
    }
    return std::nullopt;
  }

  void segment(double sl, double sr, int depth) {
    const double sm = 0.5 * (sl + sr);
    const SpectrumSample& left = sample(sl);
    const SpectrumSample& right = sample(sr);
    const SpectrumSample& mid = sample(sm);
    if (const auto window = choose_window(left, mid, right)) {
      Segment seg;
      seg.s_left = sl;
      seg.s_right = sr;
      seg.delta = window->first;
      seg.outer = window->second;
      seg.n_minus_left = window_count(left, seg.delta, tol_).n_minus;
      seg.n_minus_right = window_count(right, seg.delta, tol_).n_minus;
      seg.contribution = seg.n_minus_left - seg.n_minus_right;
      report_.total += seg.contribution;
      report_.segments.push_back(seg);
      report_.partition.push_back(sr);
      return;
    }
    if (depth >= opts_.max_depth) {
      std::ostringstream msg;
      msg << std::setprecision(17) << "no admissible window on [" << sl << ", " << sr << "] at depth " << depth;
      throw Error(ErrorCode::UnresolvedFamily, msg.str());
    }
    segment(sl, sm, depth + 1);
    segment(sm, sr, depth + 1);
  }

  const SpectrumSampler& sampler_;
  FlowOptions opts_;
  WindowTolerances tol_;
  double delta_max_;
  std::map<double, SpectrumSample> cache_;
  CrossingReport report_;
};

}  // namespace

CoorientedLine CoorientedLine::real_axis() { return CoorientedLine{Kind::RealAxisAtZero, 0.0, 1}; }

CoorientedLine CoorientedLine::unit_circle_at_one() { return CoorientedLine{Kind::UnitCircle, 0.0, 1}; }

CoorientedLine CoorientedLine::unit_circle_at_minus_one_downward() {
  return CoorientedLine{Kind::UnitCircle, std::numbers::pi, -1};
}

double CoorientedLine::coordinate(Complex eigenvalue) const {
  if (kind == Kind::RealAxisAtZero) return eigenvalue.real();
  return orientation * wrap_phase(std::arg(eigenvalue) - anchor_phase);
}

WindowCount window_count(const SpectrumSample& sample, double delta, const WindowTolerances& tol) {
  WindowCount out;
  for (double c : sample.coords) {
    if (std::abs(std::abs(c) - delta) <= tol.margin) {
      std::ostringstream msg;
      msg << std::setprecision(17) << "coordinate " << c << " within " << tol.margin << " of window edge " << delta;
      throw Error(ErrorCode::CoordOnWindowBoundary, msg.str());
    }
    if (std::abs(c) <= tol.zero) {
      ++out.n_zero;
    } else if (c < 0.0 && c > -delta) {
      ++out.n_minus;
    } else if (c > 0.0 && c < delta) {
      ++out.n_plus;
    }
  }
  return out;
}

CrossingReport spectral_flow(const SpectrumSampler& sampler, double a, double b, double scale,
                             const FlowOptions& opts) {
  if (!(scale > 0.0)) throw Error(ErrorCode::DimensionMismatch, "spectral flow needs a positive scale");
  Engine engine(sampler, scale, opts);
  return engine.run(a, b);
}

SpectrumSample sample_matrix(const CMatrix& m, const CoorientedLine& line, double s) {
  SpectrumSample out;
  out.s = s;
  const Index n = m.rows();
  if (line.kind == CoorientedLine::Kind::RealAxisAtZero) {
    if (max_abs(m - m.adjoint()) > tol::kSym * std::max(1.0, max_abs(m))) {
      throw Error(ErrorCode::NotHermitian, "family member is not Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
    out.coords.assign(eig.eigenvalues().data(), eig.eigenvalues().data() + n);
    out.ordered_branches = true;
  } else {
    if (max_abs(m.adjoint() * m - CMatrix::Identity(n, n)) > tol::kUnit) {
      throw Error(ErrorCode::NotUnitary, "family member is not unitary");
    }
    Eigen::ComplexSchur<CMatrix> schur(m, false);
    const CMatrix& t = schur.matrixT();
    out.horizon = std::numbers::pi;
    out.circular = true;
    out.coords.reserve(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) out.coords.push_back(line.coordinate(t(i, i)));
  }
  std::sort(out.coords.begin(), out.coords.end());
  return out;
}

CrossingReport spectral_flow(const MatrixFamily& family, const CoorientedLine& line, double a, double b,
                             const FlowOptions& opts) {
  SpectrumSampler sampler = [&](double s) { return sample_matrix(family(s), line, s); };
  double scale = opts.scale;
  if (!(scale > 0.0)) {
    if (line.kind == CoorientedLine::Kind::UnitCircle) {
      scale = std::numbers::pi;
    } else {
      const int n = std::max(1, opts.initial_segments);
      for (int k = 0; k <= n; ++k) {
        for (double c : sampler(a + (b - a) * k / n).coords) scale = std::max(scale, std::abs(c));
      }
      if (!(scale > 0.0)) scale = 1.0;
    }
  }
  return spectral_flow(sampler, a, b, scale, opts);
}

CMatrix spectral_projection(const CMatrix& a, Complex center, double radius) {
  const Index n = a.rows();
  Eigen::ComplexEigenSolver<CMatrix> eig(a);
  const CVector& values = eig.eigenvalues();
  double scale = radius;
  for (Index i = 0; i < n; ++i) scale = std::max(scale, std::abs(values(i)));
  CVector inside = CVector::Zero(n);
  for (Index i = 0; i < n; ++i) {
    const double dist = std::abs(values(i) - center);
    if (std::abs(dist - radius) <= tol::kRank * scale) {
      throw Error(ErrorCode::SpectrumOnBoundary, "eigenvalue on the boundary of the region");
    }
    if (dist < radius) inside(i) = 1.0;
  }
  const CMatrix& v = eig.eigenvectors();
  return v * inside.asDiagonal() * v.partialPivLu().inverse();
}

std::vector<SpectrumSample> trace(const SpectrumSampler& sampler, double a, double b, int points) {
  points = std::max(points, 2);
  std::vector<SpectrumSample> out;
  out.reserve(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k) {
    const double s = k + 1 == points ? b : a + (b - a) * k / (points - 1);
    SpectrumSample smp = sampler(s);
    smp.s = s;
    std::sort(smp.coords.begin(), smp.coords.end());
    out.push_back(std::move(smp));
  }
  return out;
}

void write_trace_csv(std::ostream& out, const std::vector<SpectrumSample>& samples) {
  std::size_t width = 0;
  for (const auto& smp : samples) width = std::max(width, smp.coords.size());
  out << "s";
  for (std::size_t k = 1; k <= width; ++k) out << ",coord_" << k;
  out << '\n';
  out << std::setprecision(17);
  for (const auto& smp : samples) {
    out << smp.s;
    for (std::size_t k = 0; k < width; ++k) {
      out << ',';
      if (k < smp.coords.size()) out << smp.coords[k];
    }
    out << '\n';
  }
}

}  // namespace maslovflow::flow
