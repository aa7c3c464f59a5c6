#pragma once

#include <functional>
#include <memory>
#include <tuple>
#include <utility>
#include <vector>

#include "ftb/fields.hpp"
#include "ftb/linalg.hpp"
#include "ftb/point.hpp"

namespace ftb {

// Tangent vector of TTM at a chart point, in the natural basis:
// components h^i on d/dx^i and v^i on d/dy^i.
struct TangentVectorTM {
    std::vector<double> h;
    std::vector<double> v;
    JetPoint base;

    double max_abs() const {
        double m = 0.0;
        for (double c : h) m = std::max(m, std::abs(c));
        for (double c : v) m = std::max(m, std::abs(c));
        return m;
    }
};

inline std::vector<double> flatten(const TangentVectorTM& t) {
    std::vector<double> c(t.h);
    c.insert(c.end(), t.v.begin(), t.v.end());
    return c;
}

// Smooth vector field on TM, type-erased over nested-dual depth. Natural
// components (x-slots first) as a 2n-vector. Depth 2 suffices: the deepest
// probes are brackets/derivatives taken inside a dual-lifted Koszul solve.
class VecField {
    static constexpr int kMaxDepth = 2;

    template <size_t D>
    using Fn = std::function<std::vector<dual_t<int(D)>>(const PointT<dual_t<int(D)>>&)>;
    using Tuple = std::tuple<Fn<0>, Fn<1>, Fn<2>>;

public:
    VecField() = default;

    template <class F>
        requires(!std::is_same_v<std::decay_t<F>, VecField>)
    VecField(F f) {
        init<kMaxDepth>(std::make_shared<const std::decay_t<F>>(std::move(f)),
                        std::make_index_sequence<size_t(kMaxDepth) + 1>{});
    }

    // Wrap a functor that is only meaningful (or only affordable) up to
    // derivative depth Cap; deeper probes throw. Used for connection-output
    // fields, which are differentiated at most once.
    template <int Cap, class F>
    static VecField capped(F f) {
        static_assert(Cap <= kMaxDepth);
        VecField vf;
        vf.init<Cap>(std::make_shared<const std::decay_t<F>>(std::move(f)),
                     std::make_index_sequence<size_t(kMaxDepth) + 1>{});
        return vf;
    }

    template <class T>
    std::vector<T> components(const PointT<T>& p) const {
        constexpr int D = dual_depth<T>::value;
        static_assert(D <= kMaxDepth, "vector field probed beyond erased dual depth");
        return std::get<size_t(D)>(fns_)(p);
    }

    explicit operator bool() const { return bool(std::get<0>(fns_)); }

private:
    template <int Cap, class FPtr, size_t... Is>
    void init(const FPtr& f, std::index_sequence<Is...>) {
        (
            [&] {
                if constexpr (int(Is) <= Cap) {
                    std::get<Is>(fns_) = [f](const PointT<dual_t<int(Is)>>& p) { return (*f)(p); };
                } else {
                    std::get<Is>(fns_) = [](const PointT<dual_t<int(Is)>>&) -> std::vector<dual_t<int(Is)>> {
                        throw DomainError("vector field probed beyond its depth cap");
                    };
                }
            }(),
            ...);
    }

    Tuple fns_;
};

// Constant natural coordinate field e_A (A in [0, 2n)).
inline VecField natural_field(int n, int A) {
    return VecField([n, A](const auto& p) {
        using T = std::decay_t<decltype(p.x[0])>;
        (void)p;
        std::vector<T> c(size_t(2 * n), constant_of<T>(0.0));
        c[size_t(A)] = constant_of<T>(1.0);
        return c;
    });
}

// [X, Y]^A = X(Y^A) - Y(X^A), evaluated with directional dual lifts.
template <class T>
std::vector<T> lie_bracket_at(const VecField& X, const VecField& Y, const PointT<T>& p) {
    auto Xp = X.components(p);
    auto Yp = Y.components(p);
    auto qx = lift_dir(p, std::span<const T>(Xp));
    auto qy = lift_dir(p, std::span<const T>(Yp));
    auto dY = Y.components(qx); // Dual<T>: .b = derivative of Y comps along X
    auto dX = X.components(qy);
    std::vector<T> out(Xp.size());
    for (size_t A = 0; A < Xp.size(); ++A) out[A] = dY[A].b - dX[A].b;
    return out;
}

inline TangentVectorTM lie_bracket_field(const VecField& X, const VecField& Y, const JetPoint& p) {
    auto c = lie_bracket_at(X, Y, p.as_eval_point());
    const int n = p.dim();
    return {std::vector<double>(c.begin(), c.begin() + n), std::vector<double>(c.begin() + n, c.end()),
            p};
}

} // namespace ftb
