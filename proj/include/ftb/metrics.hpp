#pragma once

#include <string>
#include <vector>

#include "ftb/finsler.hpp"

namespace ftb {

// Built-in fundamental functions. Each theorem downstream needs a witness
// and a counter-witness:
//   euclidean      flat, Riemannian          (everything vanishes)
//   riemannian2d   curved, Riemannian        (R^k_ij != 0, g_ijk = 0)
//   randers_const  flat alpha, constant b    (g_ijk != 0, spray = 0)
//   randers_var    b_1 = 0.1 x^2             (all tensors nonzero)
struct MetricParams {
    int n = 2;      // euclidean, randers_const
    double b = 0.1; // randers_const drift magnitude, |b| < 1
};

namespace detail {

template <class P>
auto norm_y(const P& p) {
    using T = std::decay_t<decltype(p.y[0])>;
    T s = constant_of<T>(0.0);
    for (const auto& yi : p.y) s += yi * yi;
    return sqrt(s);
}

} // namespace detail

inline FinslerFunction make_euclidean(int n) {
    std::string name = n == 2 ? "euclidean" : "euclidean" + std::to_string(n);
    return FinslerFunction(n, name, [](const auto& p) { return detail::norm_y(p); });
}

inline FinslerFunction make_riemannian2d() {
    return FinslerFunction(2, "riemannian2d", [](const auto& p) {
        using T = std::decay_t<decltype(p.y[0])>;
        T s = p.y[0] * p.y[0] + exp(2.0 * p.x[0]) * (p.y[1] * p.y[1]);
        return sqrt(s);
    });
}

inline FinslerFunction make_randers_const(int n, double b) {
    return FinslerFunction(n, "randers_const",
                           [b](const auto& p) { return detail::norm_y(p) + b * p.y[0]; });
}

inline FinslerFunction make_randers_var() {
    return FinslerFunction(2, "randers_var", [](const auto& p) {
        return detail::norm_y(p) + 0.1 * p.x[1] * p.y[0];
    });
}

inline std::vector<std::string> metric_names() {
    return {"euclidean", "euclidean3", "riemannian2d", "randers_const", "randers_var"};
}

inline FinslerFunction make_metric(const std::string& name, const MetricParams& params = {}) {
    if (name == "euclidean") return make_euclidean(params.n);
    if (name == "euclidean3") return make_euclidean(3);
    if (name == "riemannian2d") return make_riemannian2d();
    if (name == "randers_const") return make_randers_const(params.n, params.b);
    if (name == "randers_var") return make_randers_var();
    throw ConfigError("unknown metric '" + name + "'");
}

// The sweep used by verification suites: one instance per registry entry.
inline std::vector<FinslerFunction> default_registry() {
    return {make_euclidean(2), make_euclidean(3), make_riemannian2d(), make_randers_const(2, 0.1),
            make_randers_var()};
}

} // namespace ftb
