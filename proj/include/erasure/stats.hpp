// stats.hpp — Ensemble post-processing: unbiased cumulant estimators
// (k-statistics), bootstrap standard errors, histogram construction, and a
// scan for rare multi-jump sequences.

#pragma once

#include "erasure/rng.hpp"
#include "erasure/trajectories.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace erasure::stats {

struct CumulantEstimate {
    double k1 = 0.0, k2 = 0.0, k3 = 0.0, k4 = 0.0;
    double se1 = 0.0, se2 = 0.0, se3 = 0.0, se4 = 0.0;
    // k2/k1, reported only when the mean is resolved (|k1| > 10 se1).
    std::optional<double> fano;
};

// Unbiased k-statistics k1..k4 from the sample; needs n >= 4.
// Standard errors from `bootstrap` resamples (>= 1000 recommended) drawn
// with a stream derived from `seed`; pass bootstrap = 0 to skip.
CumulantEstimate empirical_cumulants(const std::vector<double>& x,
                                     int bootstrap = 1000,
                                     std::uint64_t seed = 0x5eedb007u);

struct Histogram {
    std::vector<double> edges;   // size bins + 1
    std::vector<double> counts;  // raw counts per bin
    std::vector<double> density; // counts / (n * width)
};

// Freedman–Diaconis bin width by default; a positive `width` overrides it.
// Edges are aligned so that 0 is an edge, and extended to cover min/max.
Histogram build_histogram(const std::vector<double>& x, double width = 0.0);

struct RareEventSummary {
    int n_multi_jump = 0;        // trajectories with >= 2 jumps
    int n_repeated_kind = 0;     // trajectories with 2 consecutive same-kind jumps
    double max_abs_heat = 0.0;
    std::vector<std::size_t> repeated_kind_indices;
};

RareEventSummary rare_event_scan(const std::vector<TrajectoryRecord>& records);

}  // namespace erasure::stats
