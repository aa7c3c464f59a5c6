#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "ftb/finsler.hpp"

namespace ftb {

// splitmix64: tiny, seed-stable across platforms. Report determinism depends
// on the exact bit stream, so no library distributions here.
class SampleRng {
public:
    explicit SampleRng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_bits() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    double uniform01() { return double(next_bits() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    double gaussian() {
        // Box-Muller; one value per call keeps the stream position obvious
        double u1 = uniform01(), u2 = uniform01();
        u1 = std::max(u1, 0x1.0p-60);
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

private:
    std::uint64_t state_;
};

// x uniform in [-1,1]^n, y uniform direction with |y| in [0.5, 2].
inline JetPoint sample_point(SampleRng& rng, int n) {
    std::vector<double> x(size_t(n), 0.0), y(size_t(n), 0.0);
    for (int i = 0; i < n; ++i) x[size_t(i)] = rng.uniform(-1.0, 1.0);
    double norm = 0.0;
    do {
        norm = 0.0;
        for (int i = 0; i < n; ++i) {
            y[size_t(i)] = rng.gaussian();
            norm += y[size_t(i)] * y[size_t(i)];
        }
        norm = std::sqrt(norm);
    } while (norm < 1e-6);
    double radius = rng.uniform(0.5, 2.0);
    for (int i = 0; i < n; ++i) y[size_t(i)] *= radius / norm;
    return JetPoint(std::move(x), std::move(y));
}

inline std::vector<JetPoint> sample_points(std::uint64_t seed, int n, int count) {
    SampleRng rng(seed);
    std::vector<JetPoint> pts;
    pts.reserve(size_t(count));
    for (int i = 0; i < count; ++i) pts.push_back(sample_point(rng, n));
    return pts;
}

// Rescale y by Newton iteration on lambda -> F(x, lambda y) = 1. For exactly
// 1-homogeneous F this converges immediately; the iteration guards against
// merely approximately homogeneous inputs.
inline JetPoint normalize_to_indicatrix(const FinslerFunction& F, const JetPoint& p,
                                        double tol = 1e-12, int max_iter = 25) {
    const int n = p.dim();
    double lambda = 1.0;
    for (int it = 0; it < max_iter; ++it) {
        PointT<double> q = p.as_eval_point();
        for (int i = 0; i < n; ++i) q.y[size_t(i)] *= lambda;
        double f = F.value(q);
        if (std::abs(f - 1.0) <= tol) break;
        // d/dlambda F(x, lambda y) = y^i dF/dy^i (x, lambda y)
        auto value_field = [&F](const auto& r) { return F.value(r); };
        std::vector<double> dir(size_t(2 * n), 0.0);
        for (int i = 0; i < n; ++i) dir[size_t(n + i)] = p.y[size_t(i)];
        double df = d1_dir(value_field, q, std::span<const double>(dir));
        if (!(std::abs(df) > 1e-14)) throw DomainError("indicatrix normalization stalled");
        lambda -= (f - 1.0) / df;
        if (!(lambda > 0.0)) throw DomainError("indicatrix normalization left the slit bundle");
    }
    std::vector<double> y(p.y);
    for (double& v : y) v *= lambda;
    JetPoint out(p.x, std::move(y));
    if (std::abs(F.value(out.as_eval_point()) - 1.0) > 1e-9)
        throw DomainError("indicatrix normalization did not converge");
    return out;
}

inline std::vector<JetPoint> sample_indicatrix_points(const FinslerFunction& F, std::uint64_t seed,
                                                      int count) {
    SampleRng rng(seed);
    std::vector<JetPoint> pts;
    pts.reserve(size_t(count));
    for (int i = 0; i < count; ++i)
        pts.push_back(normalize_to_indicatrix(F, sample_point(rng, F.dim())));
    return pts;
}

} // namespace ftb
