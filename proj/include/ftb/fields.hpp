#pragma once

#include <array>
#include <functional>
#include <memory>
#include <span>
#include <tuple>
#include <utility>
#include <vector>

#include "ftb/dual.hpp"
#include "ftb/errors.hpp"
#include "ftb/point.hpp"

namespace ftb {

// Type-erased scalar field evaluable at nested-dual depths 0..MaxD.
// The wrapped functor must be callable as T(PointT<T>) for each such T;
// erasure is what lets registry metrics, user fields and composed fields
// flow through the same non-template call sites.
template <int MaxD>
class ErasedScalarField {
    template <size_t D>
    using Fn = std::function<dual_t<int(D)>(const PointT<dual_t<int(D)>>&)>;

    template <class Seq>
    struct TupleOf;
    template <size_t... Is>
    struct TupleOf<std::index_sequence<Is...>> {
        using type = std::tuple<Fn<Is>...>;
    };
    using Tuple = typename TupleOf<std::make_index_sequence<size_t(MaxD) + 1>>::type;

public:
    ErasedScalarField() = default;

    template <class F>
        requires(!std::is_same_v<std::decay_t<F>, ErasedScalarField>)
    ErasedScalarField(F f) {
        auto shared = std::make_shared<const std::decay_t<F>>(std::move(f));
        init(shared, std::make_index_sequence<size_t(MaxD) + 1>{});
    }

    template <class T>
    T eval(const PointT<T>& p) const {
        constexpr int D = dual_depth<T>::value;
        static_assert(D <= MaxD, "field evaluated beyond its erased dual depth");
        return std::get<size_t(D)>(fns_)(p);
    }

    explicit operator bool() const { return bool(std::get<0>(fns_)); }

private:
    template <class FPtr, size_t... Is>
    void init(const FPtr& f, std::index_sequence<Is...>) {
        ((std::get<Is>(fns_) = [f](const PointT<dual_t<int(Is)>>& p) { return (*f)(p); }), ...);
    }

    Tuple fns_;
};

// Public scalar-field contract: mixed partials up to total order 3.
using AnyScalarField = ErasedScalarField<3>;

// --- generic single-derivative helpers (used by every composed formula) --

template <class T, class F>
T d1_axis(const F& f, const PointT<T>& p, int axis) {
    return f(lift_axis(p, axis)).b;
}

template <class T, class F>
T d1_dir(const F& f, const PointT<T>& p, std::span<const T> dir) {
    return f(lift_dir(p, dir)).b;
}

template <class T, class F>
T d2_axes(const F& f, const PointT<T>& p, int a1, int a2) {
    auto q = lift_axis(lift_axis(p, a1), a2);
    return f(q).b.b;
}

// --- jet module public operations ----------------------------------------

// Exact mixed partial of total order |idx| <= 3 via nested duals.
// idx slots: 0..n-1 are x-coordinates, n..2n-1 are y-coordinates.
inline double partial(const AnyScalarField& f, const JetPoint& p, std::span<const int> idx) {
    const int n = p.dim();
    for (int s : idx)
        if (s < 0 || s >= 2 * n) throw DomainError("partial: multi-index slot out of range");
    const auto order = idx.size();
    auto p0 = p.as_eval_point();
    switch (order) {
        case 0:
            return f.eval(p0);
        case 1:
            return f.eval(lift_axis(p0, idx[0])).b;
        case 2:
            return f.eval(lift_axis(lift_axis(p0, idx[0]), idx[1])).b.b;
        case 3:
            return f.eval(lift_axis(lift_axis(lift_axis(p0, idx[0]), idx[1]), idx[2])).b.b.b;
        default:
            throw UnsupportedOrderError("partial: mixed partials above order 3 are not supported");
    }
}

inline double partial(const AnyScalarField& f, const JetPoint& p, std::initializer_list<int> idx) {
    return partial(f, p, std::span<const int>(idx.begin(), idx.size()));
}

namespace detail {

inline double fd_recurse(const AnyScalarField& f, const PointT<double>& p, std::span<const int> idx,
                         double h) {
    if (idx.empty()) return f.eval(p);
    const int n = p.dim();
    const int axis = idx.front();
    auto rest = idx.subspan(1);
    auto shifted = [&](double step) {
        PointT<double> q = p;
        if (axis < n)
            q.x[axis] += step;
        else
            q.y[axis - n] += step;
        return fd_recurse(f, q, rest, h);
    };
    auto central = [&](double step) { return (shifted(step) - shifted(-step)) / (2.0 * step); };
    // one Richardson level: (4 D(h/2) - D(h)) / 3 kills the O(h^2) term
    return (4.0 * central(h / 2.0) - central(h)) / 3.0;
}

} // namespace detail

// Central finite differences with Richardson extrapolation; the independent
// cross-check of partial(). Deliberately ignorant of dual numbers.
inline double fd_oracle(const AnyScalarField& f, const JetPoint& p, std::span<const int> idx,
                        double step = 0.0) {
    const auto order = idx.size();
    if (order > 3) throw UnsupportedOrderError("fd_oracle: order above 3 is not supported");
    if (step == 0.0) step = order <= 2 ? 1e-4 : 2e-3; // deeper stencils need larger steps
    if (step < 1e-8) throw OracleUnstableError("fd_oracle: step underflow");
    return detail::fd_recurse(f, p.as_eval_point(), idx, step);
}

inline double fd_oracle(const AnyScalarField& f, const JetPoint& p, std::initializer_list<int> idx,
                        double step = 0.0) {
    return fd_oracle(f, p, std::span<const int>(idx.begin(), idx.size()), step);
}

} // namespace ftb
