#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "ftb/finsler.hpp"

namespace ftb {

// G^i = (g^{ij}/4) (d^2F^2/dy^j dx^k y^k - dF^2/dx^j)
template <class T>
std::vector<T> spray_at(const FinslerFunction& F, const PointT<T>& p) {
    const int n = p.dim();
    auto energy = [&F](const auto& q) { return F.energy(q); };
    Matrix<T> g = fundamental_at(F, p);
    std::vector<T> rhs(n, constant_of<T>(0.0));
    for (int j = 0; j < n; ++j) {
        T s = constant_of<T>(0.0);
        for (int k = 0; k < n; ++k) s += d2_axes(energy, p, n + j, k) * p.y[k];
        s -= d1_axis(energy, p, j);
        rhs[j] = 0.25 * s;
    }
    return solve_vec(g, rhs);
}

// G_i^j = dG^j/dy^i, laid out as N(i, j).
template <class T>
Matrix<T> nonlinear_connection_at(const FinslerFunction& F, const PointT<T>& p) {
    const int n = p.dim();
    Matrix<T> N(n, n);
    for (int i = 0; i < n; ++i) {
        auto q = lift_axis(p, n + i);
        auto Gq = spray_at(F, q);
        for (int j = 0; j < n; ++j) N(i, j) = Gq[j].b;
    }
    return N;
}

// G_ij^k = dG_i^k/dy^j, symmetric in (i, j); laid out as B(i, j, k).
template <class T>
Tensor3<T> berwald_at(const FinslerFunction& F, const PointT<T>& p) {
    const int n = p.dim();
    Tensor3<T> B(n, n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            auto q = lift_axis(lift_axis(p, n + i), n + j);
            auto Gq = spray_at(F, q);
            for (int k = 0; k < n; ++k) {
                B(i, j, k) = Gq[k].b.b;
                B(j, i, k) = Gq[k].b.b;
            }
        }
    }
    return B;
}

// R^k_ij = delta G_i^k / delta x^j - delta G_j^k / delta x^i, laid out as
// R(k, i, j); antisymmetric in (i, j).
template <class T>
Tensor3<T> hv_curvature_at(const FinslerFunction& F, const PointT<T>& p) {
    const int n = p.dim();
    Matrix<T> N = nonlinear_connection_at(F, p);
    // dN[A](i,k) = d N_i^k / d coordinate A
    std::vector<Matrix<T>> dN;
    dN.reserve(2 * n);
    for (int A = 0; A < 2 * n; ++A) {
        auto q = lift_axis(p, A);
        Matrix<Dual<T>> Nq = nonlinear_connection_at(F, q);
        Matrix<T> d(n, n);
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) d(i, k) = Nq(i, k).b;
        dN.push_back(std::move(d));
    }
    auto delta_N = [&](int i, int k, int j) { // delta G_i^k / delta x^j
        T v = dN[j](i, k);
        for (int m = 0; m < n; ++m) v -= N(j, m) * dN[n + m](i, k);
        return v;
    };
    Tensor3<T> R(n, n, n);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) R(k, i, j) = delta_N(i, k, j) - delta_N(j, k, i);
    return R;
}

// --- public bundle ---------------------------------------------------------

struct SprayData {
    std::vector<double> Gi; // spray G^i
    Matrix<double> N;       // nonlinear connection, N(i,j) = G_i^j
    Tensor3<double> B;      // Berwald coefficients, B(i,j,k) = G_ij^k
    Tensor3<double> R;      // hv-curvature, R(k,i,j) = R^k_ij
    JetPoint point;
};

inline SprayData spray_data(const FinslerFunction& F, const JetPoint& p) {
    require_slit(p);
    auto p0 = p.as_eval_point();
    return {spray_at(F, p0), nonlinear_connection_at(F, p0), berwald_at(F, p0),
            hv_curvature_at(F, p0), p};
}

inline std::vector<double> spray_coeffs(const FinslerFunction& F, const JetPoint& p) {
    require_slit(p);
    return spray_at(F, p.as_eval_point());
}

inline Matrix<double> nonlinear_connection(const FinslerFunction& F, const JetPoint& p) {
    require_slit(p);
    return nonlinear_connection_at(F, p.as_eval_point());
}

inline Tensor3<double> berwald_coeffs(const FinslerFunction& F, const JetPoint& p) {
    require_slit(p);
    return berwald_at(F, p.as_eval_point());
}

inline Tensor3<double> hv_curvature(const FinslerFunction& F, const JetPoint& p) {
    require_slit(p);
    return hv_curvature_at(F, p.as_eval_point());
}

// delta f / delta x^i = df/dx^i - G_i^j df/dy^j
inline double delta_derivative(const AnyScalarField& f, const FinslerFunction& F, const JetPoint& p,
                               int i) {
    require_slit(p);
    auto p0 = p.as_eval_point();
    Matrix<double> N = nonlinear_connection_at(F, p0);
    const int n = p.dim();
    double v = partial(f, p, {i});
    for (int j = 0; j < n; ++j) {
        int slot = n + j;
        v -= N(i, j) * partial(f, p, std::span<const int>(&slot, 1));
    }
    return v;
}

// --- homogeneity diagnostics ------------------------------------------------

// Max relative defect of F(x, ly) = l F(x,y), g(x, ly) = g(x,y) and
// G^i(x, ly) = l^2 G^i(x,y) over the lambda samples. Report only.
struct HomogeneityReport {
    double f_defect = 0.0;
    double g_defect = 0.0;
    double spray_defect = 0.0;

    double max_defect() const { return std::max({f_defect, g_defect, spray_defect}); }
};

inline HomogeneityReport homogeneity_report(const FinslerFunction& F, const JetPoint& p,
                                            std::vector<double> lambdas = {0.5, 2.0, 3.0}) {
    require_slit(p);
    HomogeneityReport rep;
    auto p0 = p.as_eval_point();
    const int n = p.dim();
    double f0 = F.value(p0);
    Matrix<double> g0 = fundamental_at(F, p0);
    auto G0 = spray_at(F, p0);
    for (double lam : lambdas) {
        PointT<double> q = p0;
        for (double& yi : q.y) yi *= lam;
        double f1 = F.value(q);
        rep.f_defect = std::max(rep.f_defect, std::abs(f1 - lam * f0) / std::max(1.0, std::abs(lam * f0)));
        Matrix<double> g1 = fundamental_at(F, q);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                rep.g_defect = std::max(rep.g_defect,
                                        std::abs(g1(i, j) - g0(i, j)) / std::max(1.0, std::abs(g0(i, j))));
        auto G1 = spray_at(F, q);
        for (int i = 0; i < n; ++i)
            rep.spray_defect = std::max(rep.spray_defect, std::abs(G1[i] - lam * lam * G0[i]) /
                                                              std::max(1.0, std::abs(lam * lam * G0[i])));
    }
    return rep;
}

} // namespace ftb
