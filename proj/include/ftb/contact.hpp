#pragma once

#include <string>
#include <vector>

#include "ftb/sasaki.hpp"

namespace ftb {

// eta(v) = y^i g_ij dx^j(v) = (g y) . v_h
template <class T>
T eta_at(const FinslerFunction& F, const PointT<T>& q, const std::vector<T>& comps) {
    const int n = q.dim();
    Matrix<T> g = fundamental_at(F, q);
    auto gy = mat_vec(g, q.y);
    T s = constant_of<T>(0.0);
    for (int i = 0; i < n; ++i) s += gy[size_t(i)] * comps[size_t(i)];
    return s;
}

template <class T>
std::vector<T> xi_components_at(const FinslerFunction& F, const PointT<T>& q) {
    const int n = q.dim();
    Matrix<T> N = nonlinear_connection_at(F, q);
    std::vector<T> c(size_t(2 * n), constant_of<T>(0.0));
    for (int i = 0; i < n; ++i) c[size_t(i)] = q.y[i];
    for (int j = 0; j < n; ++j) {
        T v = constant_of<T>(0.0);
        for (int i = 0; i < n; ++i) v -= q.y[i] * N(i, j);
        c[size_t(n + j)] = v;
    }
    return c;
}

// phi = J on the contact distribution, phi(xi) = 0: realized as
// phi(v) = J(v - (eta(v)/F^2) xi), which restricts correctly on each level
// set of F (and is exactly phi on the indicatrix).
template <class T>
std::vector<T> phi_at(const FinslerFunction& F, const PointT<T>& q, const std::vector<T>& comps) {
    T e = eta_at(F, q, comps);
    T f2 = F.energy(q);
    auto xi = xi_components_at(F, q);
    std::vector<T> w(comps);
    T c = e / f2;
    for (size_t A = 0; A < w.size(); ++A) w[A] -= c * xi[A];
    return apply_J_at(F, q, w);
}

inline VecField phi_of_field(const FinslerFunction& F, const VecField& Y) {
    return VecField::capped<1>([F, Y](const auto& q) { return phi_at(F, q, Y.components(q)); });
}

// --- contact data at an indicatrix point --------------------------------------

struct ContactData {
    JetPoint point;
    AdaptedFrame frame;
    FinslerFunction F;

    double eta(const TangentVectorTM& v) const { return eta_at(F, point.as_eval_point(), flatten(v)); }

    TangentVectorTM xi() const {
        auto c = xi_components_at(F, point.as_eval_point());
        return to_vec(c);
    }

    TangentVectorTM phi(const TangentVectorTM& v) const {
        auto c = phi_at(F, point.as_eval_point(), flatten(v));
        return to_vec(c);
    }

    // G-orthogonal projection onto D = {eta(X) = eta(JX) = 0}: strip the xi
    // and L parts.
    TangentVectorTM project_D(const TangentVectorTM& v) const {
        auto p0 = point.as_eval_point();
        auto c = flatten(v);
        auto xi_c = xi_components_at(F, p0);
        double f2 = F.energy(p0);
        double e = eta_at(F, p0, c);
        for (size_t A = 0; A < c.size(); ++A) c[A] -= (e / f2) * xi_c[A];
        c = tangential_at(F, p0, c); // strips the L part
        return to_vec(c);
    }

    double metric(const TangentVectorTM& v, const TangentVectorTM& w) const {
        return metric_eval(F, point, v, w);
    }

private:
    TangentVectorTM to_vec(const std::vector<double>& c) const {
        const int n = point.dim();
        return {std::vector<double>(c.begin(), c.begin() + n),
                std::vector<double>(c.begin() + n, c.end()), point};
    }
};

inline ContactData contact_structure(const FinslerFunction& F, const JetPoint& p) {
    require_indicatrix(F, p);
    return {p, build_adapted_frame(F, p), F};
}

// --- the tilde connection of the contact metric manifold -----------------------

// nabla_tilde_X Y = nabla_X Y - eta(X) nabla_Y xi - eta(Y) nabla_X xi
//                   + G(X, phi Y) xi + (1/2)(L_xi G)(X, Y) xi
// with nabla the induced (tangentially projected) Levi-Civita connection of
// the restricted metric.
inline std::vector<double> tilde_nabla_components(const FinslerFunction& F, const JetPoint& p,
                                                  const VecField& X, const VecField& Y) {
    require_indicatrix(F, p);
    auto p0 = p.as_eval_point();
    const int n = p.dim();
    VecField xi = frame_xi(F);

    auto nXY = tangential_at(F, p0, koszul_nabla_at(F, p0, X, Y));
    auto nYxi = tangential_at(F, p0, koszul_nabla_at(F, p0, Y, xi));
    auto nXxi = tangential_at(F, p0, koszul_nabla_at(F, p0, X, xi));

    auto Xp = X.components(p0);
    auto Yp = Y.components(p0);
    double etaX = eta_at(F, p0, Xp);
    double etaY = eta_at(F, p0, Yp);

    Matrix<double> M = natural_gram(F, p0);
    auto phiY = phi_at(F, p0, Yp);
    double gXphiY = dot(Xp, mat_vec(M, phiY));

    // (L_xi G)(X,Y) = xi(G(X,Y)) - G([xi,X],Y) - G(X,[xi,Y])
    auto gxy_field = [&](const auto& q) {
        using T = std::decay_t<decltype(q.x[0])>;
        Matrix<T> Mq = natural_gram(F, q);
        return dot(X.components(q), mat_vec(Mq, Y.components(q)));
    };
    auto xi_p = xi.components(p0);
    double xi_gxy = d1_dir(gxy_field, p0, std::span<const double>(xi_p));
    auto br_xiX = lie_bracket_at(xi, X, p0);
    auto br_xiY = lie_bracket_at(xi, Y, p0);
    double lie_term = xi_gxy - dot(br_xiX, mat_vec(M, Yp)) - dot(Xp, mat_vec(M, br_xiY));

    std::vector<double> out(size_t(2 * n));
    double xi_coeff = gXphiY + 0.5 * lie_term;
    for (size_t A = 0; A < out.size(); ++A)
        out[A] = nXY[A] - etaX * nYxi[A] - etaY * nXxi[A] + xi_coeff * xi_p[A];
    return out;
}

inline TangentVectorTM tilde_nabla(const FinslerFunction& F, const JetPoint& p, const VecField& X,
                                   const VecField& Y) {
    auto c = tilde_nabla_components(F, p, X, Y);
    const int n = p.dim();
    return {std::vector<double>(c.begin(), c.begin() + n), std::vector<double>(c.begin() + n, c.end()),
            p};
}

// (nabla_tilde_X phi)Y = nabla_tilde_X (phi Y) - phi(nabla_tilde_X Y)
inline std::vector<double> tilde_nabla_phi(const FinslerFunction& F, const JetPoint& p,
                                           const VecField& X, const VecField& Y) {
    auto p0 = p.as_eval_point();
    auto t1 = tilde_nabla_components(F, p, X, phi_of_field(F, Y));
    auto t2 = phi_at(F, p0, tilde_nabla_components(F, p, X, Y));
    std::vector<double> out(t1.size());
    for (size_t A = 0; A < out.size(); ++A) out[A] = t1[A] - t2[A];
    return out;
}

// --- Sasakian obstruction -------------------------------------------------------

struct ObstructionReport {
    // frame coefficients of (nabla_tilde_X phi)Y for every D-frame pair,
    // rows indexed by (X, Y) pairs in [dbar.., pbar..] x [dbar.., pbar..]
    std::vector<std::vector<double>> pair_coeffs;
    std::vector<std::string> pair_names;
    double max_component = 0.0;
    double lambda_min = 0.0;     // smallest eigenvalue of g_ab
    // xi-components on (dbar_a, dbar_b) pairs, the block matched against g_ab
    Matrix<double> dd_xi_components;
    double gab_ratio = 0.0;      // measured proportionality against g_ab
    double gab_match_residual = 0.0;
    // Lemma-reduction rows: tilde-nabla-phi with xi in either slot
    double xi_row_residual = 0.0;
    double xi_col_residual = 0.0;
};

inline ObstructionReport sasakian_obstruction(const FinslerFunction& F, const JetPoint& p) {
    require_indicatrix(F, p);
    AdaptedFrame fr = build_adapted_frame(F, p);
    const int m = p.dim() - 1;
    ObstructionReport rep;
    rep.lambda_min = sym_eig_min(fr.g_frame);

    std::vector<VecField> dfields;
    std::vector<std::string> names;
    for (int a = 0; a < m; ++a) {
        dfields.push_back(fr.delta_bar(a));
        names.push_back("dbar_" + std::to_string(a + 1));
    }
    for (int a = 0; a < m; ++a) {
        dfields.push_back(fr.partial_bar(a));
        names.push_back("pbar_" + std::to_string(a + 1));
    }

    rep.dd_xi_components = Matrix<double>(m, m);
    for (size_t xi_i = 0; xi_i < dfields.size(); ++xi_i) {
        for (size_t yi = 0; yi < dfields.size(); ++yi) {
            auto v = tilde_nabla_phi(F, p, dfields[xi_i], dfields[yi]);
            auto coeffs = frame_decompose(fr, p, v);
            for (double c : coeffs) rep.max_component = std::max(rep.max_component, std::abs(c));
            rep.pair_coeffs.push_back(coeffs);
            rep.pair_names.push_back("(" + names[xi_i] + ", " + names[yi] + ")");
            if (int(xi_i) < m && int(yi) < m)
                rep.dd_xi_components(int(xi_i), int(yi)) = coeffs[size_t(m)];
        }
    }
    // measured proportionality of the (dbar,dbar) xi-block against g_ab
    rep.gab_ratio = rep.dd_xi_components(0, 0) / fr.g_frame(0, 0);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            rep.gab_match_residual =
                std::max(rep.gab_match_residual,
                         std::abs(rep.dd_xi_components(a, b) - rep.gab_ratio * fr.g_frame(a, b)));

    VecField xi = fr.xi();
    for (const auto& Y : dfields) {
        auto v = tilde_nabla_phi(F, p, xi, Y);
        for (double c : v) rep.xi_row_residual = std::max(rep.xi_row_residual, std::abs(c));
        auto w = tilde_nabla_phi(F, p, Y, xi);
        for (double c : w) rep.xi_col_residual = std::max(rep.xi_col_residual, std::abs(c));
    }
    return rep;
}

// --- Nijenhuis tensor of J ------------------------------------------------------

inline VecField j_of_field(const FinslerFunction& F, const VecField& X) {
    return VecField::capped<1>([F, X](const auto& q) { return apply_J_at(F, q, X.components(q)); });
}

// N_J(X,Y) = [JX, JY] - J[JX, Y] - J[X, JY] - [X, Y]
inline std::vector<double> nijenhuis_components(const FinslerFunction& F, const JetPoint& p,
                                                const VecField& X, const VecField& Y) {
    auto p0 = p.as_eval_point();
    VecField JX = j_of_field(F, X), JY = j_of_field(F, Y);
    auto t1 = lie_bracket_at(JX, JY, p0);
    auto t2 = apply_J_at(F, p0, lie_bracket_at(JX, Y, p0));
    auto t3 = apply_J_at(F, p0, lie_bracket_at(X, JY, p0));
    auto t4 = lie_bracket_at(X, Y, p0);
    std::vector<double> out(t1.size());
    for (size_t A = 0; A < out.size(); ++A) out[A] = t1[A] - t2[A] - t3[A] - t4[A];
    return out;
}

inline TangentVectorTM nijenhuis(const FinslerFunction& F, const JetPoint& p, const VecField& X,
                                 const VecField& Y) {
    auto c = nijenhuis_components(F, p, X, Y);
    const int n = p.dim();
    return {std::vector<double>(c.begin(), c.begin() + n), std::vector<double>(c.begin() + n, c.end()),
            p};
}

// --- integrability <=> flatness -----------------------------------------------

struct EquivalenceVerdict {
    bool pass = false;
    double max_nijenhuis = 0.0;
    double max_curvature = 0.0;
};

// PASS iff (max ||N_J|| < 1e-8) <=> (max ||R^k_ij|| < 1e-8) across the samples.
inline EquivalenceVerdict flatness_equivalence_check(const FinslerFunction& F,
                                                     const std::vector<JetPoint>& points) {
    EquivalenceVerdict v;
    const int n = F.dim();
    for (const auto& p : points) {
        std::vector<VecField> basis;
        for (int i = 0; i < n; ++i) basis.push_back(frame_delta_x(F, i));
        for (int i = 0; i < n; ++i) basis.push_back(natural_field(n, n + i));
        for (size_t i = 0; i < basis.size(); ++i)
            for (size_t j = i + 1; j < basis.size(); ++j) {
                auto nj = nijenhuis_components(F, p, basis[i], basis[j]);
                for (double c : nj) v.max_nijenhuis = std::max(v.max_nijenhuis, std::abs(c));
            }
        Tensor3<double> R = hv_curvature(F, p);
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) v.max_curvature = std::max(v.max_curvature, std::abs(R(k, i, j)));
    }
    v.pass = (v.max_nijenhuis < 1e-8) == (v.max_curvature < 1e-8);
    return v;
}

// --- second-proof helpers -------------------------------------------------------

// Jbar(X + f L) = phi(X) - f xi + eta(X) L, X tangent to the indicatrix.
inline std::vector<double> jbar_components(const FinslerFunction& F, const JetPoint& p,
                                           const std::vector<double>& tangent_comps, double f) {
    auto p0 = p.as_eval_point();
    const int n = p.dim();
    auto out = phi_at(F, p0, tangent_comps);
    auto xi = xi_components_at(F, p0);
    double e = eta_at(F, p0, tangent_comps);
    for (size_t A = 0; A < out.size(); ++A) out[A] -= f * xi[A];
    for (int i = 0; i < n; ++i) out[size_t(n + i)] += e * p.y[size_t(i)];
    return out;
}

// Measured proportionality d eta(X, Y) / G(X, phi Y) over D-frame pairs
// (convention factor deliberately reported, not asserted).
inline std::vector<double> deta_ratios(const FinslerFunction& F, const JetPoint& p) {
    require_indicatrix(F, p);
    AdaptedFrame fr = build_adapted_frame(F, p);
    auto p0 = p.as_eval_point();
    const int m = p.dim() - 1;
    Matrix<double> M = natural_gram(F, p0);
    std::vector<double> ratios;
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            VecField X = fr.delta_bar(a), Y = fr.partial_bar(b);
            auto Xp = X.components(p0);
            auto Yp = Y.components(p0);
            auto etaY_field = [&](const auto& q) { return eta_at(F, q, Y.components(q)); };
            auto etaX_field = [&](const auto& q) { return eta_at(F, q, X.components(q)); };
            double XetaY = d1_dir(etaY_field, p0, std::span<const double>(Xp));
            double YetaX = d1_dir(etaX_field, p0, std::span<const double>(Yp));
            double eta_br = eta_at(F, p0, lie_bracket_at(X, Y, p0));
            double deta = XetaY - YetaX - eta_br;
            double denom = dot(Xp, mat_vec(M, phi_at(F, p0, Yp)));
            if (std::abs(denom) > 1e-10) ratios.push_back(deta / denom);
        }
    return ratios;
}

} // namespace ftb
