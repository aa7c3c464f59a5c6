#pragma once

#include <cmath>
#include <string>
#include <utility>

#include "ftb/fields.hpp"
#include "ftb/linalg.hpp"
#include "ftb/point.hpp"

namespace ftb {

// Deepest nesting at which a fundamental function is evaluated. The longest
// chain is the Sasaki curvature: an outer Koszul solve differentiates the
// output of an inner Koszul solve, whose metric data are second y-jets of
// F^2 composed with one more derivative level.
inline constexpr int kMetricDepth = 5;

// Fundamental function F(x, y) > 0 of a Finsler structure, evaluable with
// nested duals up to kMetricDepth levels.
class FinslerFunction {
public:
    FinslerFunction() = default;

    template <class F>
    FinslerFunction(int n, std::string name, F f)
        : n_(n), name_(std::move(name)), f_(std::move(f)) {}

    int dim() const { return n_; }
    const std::string& name() const { return name_; }

    template <class T>
    T value(const PointT<T>& p) const {
        return f_.eval(p);
    }

    template <class T>
    T energy(const PointT<T>& p) const {
        T v = f_.eval(p);
        return v * v;
    }

    // The F^2 evaluator restricted to the public jet interface.
    AnyScalarField energy_field() const {
        FinslerFunction self = *this;
        return AnyScalarField([self](const auto& p) { return self.energy(p); });
    }

private:
    int n_ = 0;
    std::string name_;
    ErasedScalarField<kMetricDepth> f_;
};

inline void require_slit(const JetPoint& p) {
    double norm2 = 0.0;
    for (double v : p.y) norm2 += v * v;
    if (std::sqrt(norm2) < 1e-8) throw DomainError("point too close to the zero section (|y| < 1e-8)");
}

// --- generic evaluators (scalar type T carries outer derivative levels) ---

// g_ij = 1/2 d^2 F^2 / dy^i dy^j
template <class T>
Matrix<T> fundamental_at(const FinslerFunction& F, const PointT<T>& p) {
    const int n = p.dim();
    Matrix<T> g(n, n);
    auto energy = [&F](const auto& q) { return F.energy(q); };
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            T v = 0.5 * d2_axes(energy, p, n + i, n + j);
            g(i, j) = v;
            g(j, i) = v;
        }
    }
    return g;
}

// g_ijk = d g_ij / dy^k (third y-jets of F^2 / 2)
template <class T>
Tensor3<T> cartan_lowered_at(const FinslerFunction& F, const PointT<T>& p) {
    const int n = p.dim();
    Tensor3<T> g3(n, n, n);
    auto energy = [&F](const auto& q) { return F.energy(q); };
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            for (int k = j; k < n; ++k) {
                auto q = lift_axis(lift_axis(lift_axis(p, n + i), n + j), n + k);
                T v = 0.5 * energy(q).b.b.b;
                g3(i, j, k) = v;
                g3(i, k, j) = v;
                g3(j, i, k) = v;
                g3(j, k, i) = v;
                g3(k, i, j) = v;
                g3(k, j, i) = v;
            }
        }
    }
    return g3;
}

// --- public operations -----------------------------------------------------

struct FundamentalTensor {
    Matrix<double> g;
    Matrix<double> g_inv;
    double F_value = 0.0;
    JetPoint point;
};

inline FundamentalTensor fundamental_tensor(const FinslerFunction& F, const JetPoint& p) {
    require_slit(p);
    auto p0 = p.as_eval_point();
    Matrix<double> g = fundamental_at(F, p0);
    if (!is_positive_definite(g))
        throw DegenerateMetricError("fundamental tensor not positive definite at probed point (metric '" +
                                    F.name() + "')");
    return {g, inverse(g), F.value(p0), p};
}

struct CartanLowered {
    Tensor3<double> g3; // g_ijk, totally symmetric
    JetPoint point;
};

inline CartanLowered cartan_lowered(const FinslerFunction& F, const JetPoint& p) {
    require_slit(p);
    return {cartan_lowered_at(F, p.as_eval_point()), p};
}

} // namespace ftb
