#include "phasegeo/sampling.hpp"

#include <cmath>
#include <random>

namespace phasegeo {

namespace {

PhasePoint candidate(const Metric& g, const Box& b, const SamplingOptions& o, uint64_t n) {
  std::seed_seq seq{uint32_t(o.seed), uint32_t(o.seed >> 32), uint32_t(n), uint32_t(n >> 32)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  PhasePoint p;
  for (int a = 0; a < 4; ++a) p.x[a] = b.lo[a] + (b.hi[a] - b.lo[a]) * U(rng);
  Vec3<double> w;
  double r2;
  do {
    r2 = 0;
    for (double& x : w) {
      x = 2 * U(rng) - 1;
      r2 += x * x;
    }
  } while (r2 > 1.0);
  if (!g.in_domain(p.x)) return p;
  Mat4<double> m = g.g(p.x);
  for (int i = 0; i < 3; ++i) {
    double s = m[i + 1][i + 1] > 0 ? std::sqrt(std::abs(m[0][0]) / m[i + 1][i + 1]) : 1.0;
    p.v[i] = o.velocity_radius * w[i] * s;
  }
  return p;
}

}  // namespace

SampleSet sample_phase_points(const Metric& g, const SamplingOptions& o) {
  if (o.count < 1) throw std::invalid_argument("sample count must be >= 1");
  Box b = o.box ? *o.box : g.box();
  SampleSet s;
  const uint64_t limit = uint64_t(o.attempt_factor) * uint64_t(o.count);
  for (uint64_t n = 0; n < limit && int(s.points.size()) < o.count; ++n) {
    ++s.attempts;
    PhasePoint p = candidate(g, b, o, n);
    if (!g.in_domain(p.x)) {
      ++s.rejected;
      continue;
    }
    try {
      if (alpha0(g, p) > o.max_alpha) {
        ++s.rejected;
        continue;
      }
    } catch (const AdmissibilityError&) {
      ++s.rejected;
      continue;
    }
    s.points.push_back(p);
  }
  return s;
}

std::vector<TanPoint<double>> tangent_points(const Metric& g, const std::vector<PhasePoint>& pts, double c) {
  std::vector<TanPoint<double>> r;
  for (const auto& p : pts) {
    Vec4<double> d = contact_map(g, p, c);
    TanPoint<double> z;
    for (int a = 0; a < 4; ++a) {
      z[a] = p.x[a];
      z[4 + a] = d[a];
    }
    r.push_back(z);
  }
  return r;
}

}  // namespace phasegeo
