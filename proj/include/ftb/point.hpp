#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "ftb/dual.hpp"
#include "ftb/errors.hpp"

namespace ftb {

// Chart point (x, y) on TM with generic scalar type. T is double for plain
// evaluation and a nested Dual for derivative-carrying evaluation.
template <class T>
struct PointT {
    std::vector<T> x;
    std::vector<T> y;

    int dim() const { return static_cast<int>(x.size()); }
};

// User-facing chart point on the slit tangent bundle.
struct JetPoint {
    std::vector<double> x;
    std::vector<double> y;

    JetPoint(std::vector<double> x_, std::vector<double> y_) : x(std::move(x_)), y(std::move(y_)) {
        if (x.size() != y.size()) throw DomainError("JetPoint: x and y must have equal dimension");
        if (x.size() < 2) throw DomainError("JetPoint: dimension must be at least 2");
        double norm2 = 0.0;
        for (double v : y) norm2 += v * v;
        if (!(norm2 > 0.0)) throw DomainError("JetPoint: slit bundle violated (y = 0)");
    }

    int dim() const { return static_cast<int>(x.size()); }

    PointT<double> as_eval_point() const { return {x, y}; }
};

template <class T>
PointT<T> promote_point(const JetPoint& p) {
    PointT<T> q;
    q.x.reserve(p.x.size());
    q.y.reserve(p.y.size());
    for (double v : p.x) q.x.push_back(constant_of<T>(v));
    for (double v : p.y) q.y.push_back(constant_of<T>(v));
    return q;
}

// Lift a point one dual level, seeding the coordinate axis `axis`
// (0..n-1 = x-slots, n..2n-1 = y-slots).
template <class T>
PointT<Dual<T>> lift_axis(const PointT<T>& p, int axis) {
    const int n = p.dim();
    PointT<Dual<T>> q;
    q.x.reserve(n);
    q.y.reserve(n);
    for (int i = 0; i < n; ++i)
        q.x.emplace_back(p.x[i], constant_of<T>(axis == i ? 1.0 : 0.0));
    for (int i = 0; i < n; ++i)
        q.y.emplace_back(p.y[i], constant_of<T>(axis == n + i ? 1.0 : 0.0));
    return q;
}

// Lift seeding an arbitrary direction (2n components, x-slots first).
template <class T>
PointT<Dual<T>> lift_dir(const PointT<T>& p, std::span<const T> dir) {
    const int n = p.dim();
    PointT<Dual<T>> q;
    q.x.reserve(n);
    q.y.reserve(n);
    for (int i = 0; i < n; ++i) q.x.emplace_back(p.x[i], dir[i]);
    for (int i = 0; i < n; ++i) q.y.emplace_back(p.y[i], dir[n + i]);
    return q;
}

} // namespace ftb
