#include "erasure/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace erasure::stats {

namespace {

// Unbiased k-statistics in terms of power sums (Kenney & Keeping).
void k_statistics(const std::vector<double>& x, double out[4]) {
    const double n = static_cast<double>(x.size());
    double s1 = 0, s2 = 0, s3 = 0, s4 = 0;
    for (double v : x) {
        s1 += v;
        s2 += v * v;
        s3 += v * v * v;
        s4 += v * v * v * v;
    }
    out[0] = s1 / n;
    out[1] = (n * s2 - s1 * s1) / (n * (n - 1));
    out[2] = (2 * s1 * s1 * s1 - 3 * n * s1 * s2 + n * n * s3) /
             (n * (n - 1) * (n - 2));
    out[3] = (-6 * s1 * s1 * s1 * s1 + 12 * n * s1 * s1 * s2 -
              3 * n * (n - 1) * s2 * s2 - 4 * n * (n + 1) * s1 * s3 +
              n * n * (n + 1) * s4) /
             (n * (n - 1) * (n - 2) * (n - 3));
}

}  // namespace

CumulantEstimate empirical_cumulants(const std::vector<double>& x, int bootstrap,
                                     std::uint64_t seed) {
    if (x.size() < 4) {
        throw std::invalid_argument("empirical_cumulants: need at least 4 samples");
    }
    CumulantEstimate est;
    double k[4];
    k_statistics(x, k);
    est.k1 = k[0];
    est.k2 = k[1];
    est.k3 = k[2];
    est.k4 = k[3];

    if (bootstrap > 0) {
        const std::size_t n = x.size();
        std::vector<double> resample(n);
        double mean[4] = {0, 0, 0, 0};
        double sq[4] = {0, 0, 0, 0};
        for (int b = 0; b < bootstrap; ++b) {
            CounterRng rng(seed, static_cast<std::uint64_t>(b));
            for (std::size_t i = 0; i < n; ++i) {
                resample[i] = x[rng.next_u64() % n];
            }
            double kb[4];
            k_statistics(resample, kb);
            for (int j = 0; j < 4; ++j) {
                mean[j] += kb[j];
                sq[j] += kb[j] * kb[j];
            }
        }
        double se[4];
        for (int j = 0; j < 4; ++j) {
            mean[j] /= bootstrap;
            const double var = sq[j] / bootstrap - mean[j] * mean[j];
            se[j] = std::sqrt(std::max(0.0, var) * bootstrap / (bootstrap - 1.0));
        }
        est.se1 = se[0];
        est.se2 = se[1];
        est.se3 = se[2];
        est.se4 = se[3];
    }

    if (std::abs(est.k1) > 10.0 * est.se1 && est.k1 != 0.0) {
        est.fano = est.k2 / est.k1;
    }
    return est;
}

Histogram build_histogram(const std::vector<double>& x, double width) {
    if (x.empty()) throw std::invalid_argument("build_histogram: empty sample");
    std::vector<double> sorted = x;
    std::sort(sorted.begin(), sorted.end());
    const double lo = sorted.front(), hi = sorted.back();
    if (width <= 0.0) {
        const std::size_t n = sorted.size();
        const double q1 = sorted[n / 4];
        const double q3 = sorted[(3 * n) / 4];
        width = 2.0 * (q3 - q1) / std::cbrt(static_cast<double>(n));
        if (width <= 0.0) {
            width = (hi > lo) ? (hi - lo) / 16.0 : 1.0;
        }
    }
    // Align the grid so that 0 falls on an edge; heat distributions have a
    // genuine atom/peak structure around zero-jump trajectories.
    const long first = static_cast<long>(std::floor(lo / width));
    const long last = static_cast<long>(std::floor(hi / width)) + 1;
    const std::size_t bins = static_cast<std::size_t>(last - first);

    Histogram h;
    h.edges.resize(bins + 1);
    for (std::size_t i = 0; i <= bins; ++i) {
        h.edges[i] = (first + static_cast<long>(i)) * width;
    }
    h.counts.assign(bins, 0.0);
    for (double v : x) {
        auto idx = static_cast<std::size_t>(std::min<long>(
            std::max<long>(0, static_cast<long>(std::floor(v / width)) - first),
            static_cast<long>(bins) - 1));
        h.counts[idx] += 1.0;
    }
    h.density.resize(bins);
    const double norm = 1.0 / (width * static_cast<double>(x.size()));
    for (std::size_t i = 0; i < bins; ++i) h.density[i] = h.counts[i] * norm;
    return h;
}

RareEventSummary rare_event_scan(const std::vector<TrajectoryRecord>& records) {
    RareEventSummary out;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        if (r.events.size() >= 2) {
            ++out.n_multi_jump;
            bool repeated = false;
            for (std::size_t j = 1; j < r.events.size(); ++j) {
                if (r.events[j].kind == r.events[j - 1].kind) repeated = true;
            }
            if (repeated) {
                ++out.n_repeated_kind;
                out.repeated_kind_indices.push_back(i);
            }
        }
        out.max_abs_heat = std::max(out.max_abs_heat, std::abs(r.heat));
    }
    return out;
}

}  // namespace erasure::stats
