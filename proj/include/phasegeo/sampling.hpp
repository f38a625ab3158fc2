#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "phasegeo/kinematics.hpp"
#include "phasegeo/spacetime.hpp"

namespace phasegeo {

struct SamplingOptions {
  int count = 50;
  uint64_t seed = 1;
  std::optional<Box> box;     // defaults to the metric's box
  double velocity_radius = 0.7;
  double max_alpha = 1e3;     // admissibility margin
  int attempt_factor = 10;
};

struct SampleSet {
  std::vector<PhasePoint> points;
  int attempts = 0, rejected = 0;
};

// Deterministic: candidate n depends only on (seed, n).
SampleSet sample_phase_points(const Metric& g, const SamplingOptions& o);
// Tangent points (x, c a dbar_0) over the same phase samples.
std::vector<TanPoint<double>> tangent_points(const Metric& g, const std::vector<PhasePoint>& pts, double c);

}  // namespace phasegeo
