#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "ftb/frame.hpp"

namespace ftb {

// --- Sasaki metric -----------------------------------------------------------

// Gram matrix of G = g_ij dx^i dx^j + g_ij dy^i dy^j in the natural basis.
// With the delta-basis split (H, V = v + N^T h):
//   M_hh = g + N g N^T,  M_hv = N g,  M_vv = g.
template <class T>
Matrix<T> natural_gram(const FinslerFunction& F, const PointT<T>& p) {
    const int n = p.dim();
    Matrix<T> g = fundamental_at(F, p);
    Matrix<T> N = nonlinear_connection_at(F, p);
    Matrix<T> M(2 * n, 2 * n);
    Matrix<T> Ng = mat_mul(N, g); // (Ng)(i,j) = N_i^k g_kj
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            T hh = g(i, j);
            for (int k = 0; k < n; ++k) hh += Ng(i, k) * N(j, k);
            M(i, j) = hh;
            M(i, n + j) = Ng(i, j);
            M(n + i, j) = Ng(j, i);
            M(n + i, n + j) = g(i, j);
        }
    return M;
}

template <class T>
T sasaki_eval_at(const FinslerFunction& F, const PointT<T>& p, const std::vector<T>& v,
                 const std::vector<T>& w) {
    Matrix<T> M = natural_gram(F, p);
    return dot(v, mat_vec(M, w));
}

inline double metric_eval(const FinslerFunction& F, const JetPoint& p, const TangentVectorTM& v,
                          const TangentVectorTM& w) {
    require_slit(p);
    return sasaki_eval_at(F, p.as_eval_point(), flatten(v), flatten(w));
}

// Gram matrix of a list of fields at p (used for the adapted block-matrix check).
inline Matrix<double> frame_gram(const FinslerFunction& F, const std::vector<VecField>& fields,
                                 const JetPoint& p) {
    auto p0 = p.as_eval_point();
    Matrix<double> M = natural_gram(F, p0);
    const int k = int(fields.size());
    std::vector<std::vector<double>> comps;
    comps.reserve(k);
    for (const auto& f : fields) comps.push_back(f.components(p0));
    Matrix<double> G(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) G(i, j) = dot(comps[i], mat_vec(M, comps[j]));
    return G;
}

// --- Koszul connection (designated ground truth) -----------------------------

// Solves 2 G(nabla_X Y, Z_A) = X G(Y,Z_A) + Y G(X,Z_A) - Z_A G(X,Y)
//        - G([X,Z_A],Y) - G([Y,Z_A],X) + G([X,Y],Z_A)
// against the 2n natural coordinate fields Z_A. All derivatives come from
// one dual-lifted sweep over the coordinate axes.
template <class T>
std::vector<T> koszul_nabla_at(const FinslerFunction& F, const PointT<T>& p, const VecField& X,
                               const VecField& Y) {
    const int n = p.dim();
    const int m = 2 * n;
    Matrix<T> M(m, m);
    std::vector<T> Xp, Yp;
    std::vector<Matrix<T>> dM;
    std::vector<std::vector<T>> dX, dY;
    dM.reserve(m);
    dX.reserve(m);
    dY.reserve(m);
    for (int A = 0; A < m; ++A) {
        auto q = lift_axis(p, A);
        Matrix<Dual<T>> Mq = natural_gram(F, q);
        auto Xq = X.components(q);
        auto Yq = Y.components(q);
        if (A == 0) {
            Xp.resize(m);
            Yp.resize(m);
            for (int i = 0; i < m; ++i) {
                Xp[i] = Xq[i].a;
                Yp[i] = Yq[i].a;
            }
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j) M(i, j) = Mq(i, j).a;
        }
        Matrix<T> dm(m, m);
        std::vector<T> dx(m), dy(m);
        for (int i = 0; i < m; ++i) {
            dx[i] = Xq[i].b;
            dy[i] = Yq[i].b;
            for (int j = 0; j < m; ++j) dm(i, j) = Mq(i, j).b;
        }
        dM.push_back(std::move(dm));
        dX.push_back(std::move(dx));
        dY.push_back(std::move(dy));
    }

    std::vector<T> MY = mat_vec(M, Yp), MX = mat_vec(M, Xp);
    // u[B] = d_B (M Y), w[B] = d_B (M X)
    std::vector<std::vector<T>> u(m), w(m);
    for (int B = 0; B < m; ++B) {
        auto t1 = mat_vec(dM[B], Yp);
        auto t2 = mat_vec(M, dY[B]);
        auto s1 = mat_vec(dM[B], Xp);
        auto s2 = mat_vec(M, dX[B]);
        u[B].resize(m);
        w[B].resize(m);
        for (int A = 0; A < m; ++A) {
            u[B][A] = t1[A] + t2[A];
            w[B][A] = s1[A] + s2[A];
        }
    }
    std::vector<T> bracket(m, constant_of<T>(0.0)); // [X,Y]^B
    for (int B = 0; B < m; ++B) {
        T s = constant_of<T>(0.0);
        for (int C = 0; C < m; ++C) s += Xp[C] * dY[C][B] - Yp[C] * dX[C][B];
        bracket[B] = s;
    }
    std::vector<T> rhs(m, constant_of<T>(0.0));
    for (int A = 0; A < m; ++A) {
        T t1 = constant_of<T>(0.0), t2 = constant_of<T>(0.0);
        for (int B = 0; B < m; ++B) {
            t1 += Xp[B] * u[B][A]; // X G(Y, Z_A)
            t2 += Yp[B] * w[B][A]; // Y G(X, Z_A)
        }
        T t3 = dot(dX[A], MY) + dot(Xp, mat_vec(dM[A], Yp)) + dot(dY[A], MX); // Z_A G(X,Y)
        T t4 = -dot(dX[A], MY);                                               // G([X,Z_A], Y)
        T t5 = -dot(dY[A], MX);                                               // G([Y,Z_A], X)
        T t6 = dot(bracket, [&] {                                             // G([X,Y], Z_A)
            std::vector<T> col(m);
            for (int B = 0; B < m; ++B) col[B] = M(B, A);
            return col;
        }());
        rhs[A] = t1 + t2 - t3 - t4 - t5 + t6;
    }
    Matrix<T> twoM(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) twoM(i, j) = 2.0 * M(i, j);
    return solve_vec(twoM, rhs);
}

inline TangentVectorTM koszul_nabla(const FinslerFunction& F, const JetPoint& p, const VecField& X,
                                    const VecField& Y) {
    require_slit(p);
    auto c = koszul_nabla_at(F, p.as_eval_point(), X, Y);
    const int n = p.dim();
    return {std::vector<double>(c.begin(), c.begin() + n), std::vector<double>(c.begin() + n, c.end()),
            p};
}

// nabla_Y Z as a field of the base point; differentiated at most once.
inline VecField nabla_field(const FinslerFunction& F, const VecField& Y, const VecField& Z) {
    return VecField::capped<1>(
        [F, Y, Z](const auto& q) { return koszul_nabla_at(F, q, Y, Z); });
}

inline VecField bracket_as_field(const VecField& X, const VecField& Y) {
    return VecField::capped<1>([X, Y](const auto& q) { return lie_bracket_at(X, Y, q); });
}

// --- consistency residuals ----------------------------------------------------

// nabla_X Y - nabla_Y X - [X,Y], max-abs natural component.
inline double torsion_residual(const FinslerFunction& F, const JetPoint& p, const VecField& X,
                               const VecField& Y) {
    auto p0 = p.as_eval_point();
    auto nxy = koszul_nabla_at(F, p0, X, Y);
    auto nyx = koszul_nabla_at(F, p0, Y, X);
    auto br = lie_bracket_at(X, Y, p0);
    double r = 0.0;
    for (size_t A = 0; A < nxy.size(); ++A) r = std::max(r, std::abs(nxy[A] - nyx[A] - br[A]));
    return r;
}

// X G(Y,Z) - G(nabla_X Y, Z) - G(Y, nabla_X Z), scalar residual.
inline double metric_compat_residual(const FinslerFunction& F, const JetPoint& p, const VecField& X,
                                     const VecField& Y, const VecField& Z) {
    auto p0 = p.as_eval_point();
    auto Xp = X.components(p0);
    auto gyz = [&](const auto& q) {
        using T = std::decay_t<decltype(q.x[0])>;
        Matrix<T> Mq = natural_gram(F, q);
        return dot(Y.components(q), mat_vec(Mq, Z.components(q)));
    };
    double xgyz = d1_dir(gyz, p0, std::span<const double>(Xp));
    Matrix<double> M = natural_gram(F, p0);
    auto nxy = koszul_nabla_at(F, p0, X, Y);
    auto nxz = koszul_nabla_at(F, p0, X, Z);
    auto Yp = Y.components(p0);
    auto Zp = Z.components(p0);
    return std::abs(xgyz - dot(nxy, mat_vec(M, Zp)) - dot(Yp, mat_vec(M, nxz)));
}

// --- adapted-frame decomposition ----------------------------------------------

// Coefficients of v in the frame [dbar_0.., xi, pbar_0.., L] at p.
inline std::vector<double> frame_decompose(const AdaptedFrame& fr, const JetPoint& p,
                                           const std::vector<double>& v) {
    auto p0 = p.as_eval_point();
    auto fields = fr.full_frame();
    const int m = int(v.size());
    Matrix<double> C(m, m);
    for (int j = 0; j < m; ++j) {
        auto c = fields[size_t(j)].components(p0);
        for (int i = 0; i < m; ++i) C(i, j) = c[size_t(i)];
    }
    return solve_vec(C, v);
}

// --- symbols of the closed-form connection table --------------------------------

// Everything eq.-style formulas need at one point, precomputed as plain
// double tables. Frame indices a,b,c run over 0..n-2, natural i,j,k over 0..n-1.
struct FrameSymbols {
    int n = 0, m = 0;
    double F2 = 0.0;
    Matrix<double> E;      // E_a^i
    Matrix<double> g;      // g_ij
    Matrix<double> g_inv;  // g^{ij}
    Matrix<double> N;      // G_i^j
    Matrix<double> gf;     // g_ab
    Matrix<double> gf_inv; // g^{ab}
    Tensor3<double> g3;    // g_ijk
    Tensor3<double> Bw;    // G_ij^k
    Tensor3<double> Rhv;   // R^k_ij as R(k,i,j)
    std::vector<double> gy;     // (g y)_i
    std::vector<double> y;      // fiber coordinates
    Tensor3<double> dEy;        // dE_a^i/dy^j       (a,i,j)
    Tensor3<double> deltaE;     // delta E_a^i/delta x^j (a,i,j)
    Tensor3<double> delta_g;    // delta g_jk/delta x^i  (j,k,i)
    Tensor3<double> Gamma;      // Gamma^h_ij = (1/2) g^{hk}(delta g_ki/dx^j + delta g_kj/dx^i - delta g_ij/dx^k)
    Tensor3<double> g_low;      // g_abd = (1/2) E E E g_ijk   (a,b,d)
    Tensor3<double> R3;         // R_{pqr} = E_q^i E_r^j E_p^k R^h_ij g_hk  (p,q,r)
    Matrix<double> Rbar;        // (dbar_a E_b^i - dbar_b E_a^i) g_ij y^j
    Matrix<double> Rab;         // E_a^i E_b^j R_ij with R_ij = R^k_ij g_kl y^l (stated hypothesis)
    Matrix<double> Rab_alt;     // same projection with R_ij = g_ik y^l R^k_lj (self-adjoint reading)

    double dbarE(int b, int a, int i) const { // dbar_b(E_a^i)
        double v = 0.0;
        for (int j = 0; j < n; ++j) v += E(b, j) * deltaE(a, i, j);
        return v;
    }
    double pbarE(int b, int a, int i) const { // pbar_b(E_a^i)
        double v = 0.0;
        for (int j = 0; j < n; ++j) v += E(b, j) * dEy(a, i, j);
        return v;
    }
    double xiE(int a, int i) const {
        double v = 0.0;
        for (int j = 0; j < n; ++j) v += y[size_t(j)] * deltaE(a, i, j);
        return v;
    }
    double LE(int a, int i) const {
        double v = 0.0;
        for (int j = 0; j < n; ++j) v += y[size_t(j)] * dEy(a, i, j);
        return v;
    }
    double g_low_up(int a, int b, int e) const { // g_ab^e = g_abd g^{de}
        double s = 0.0;
        for (int d = 0; d < m; ++d) s += g_low(a, b, d) * gf_inv(d, e);
        return s;
    }
};

inline FrameSymbols compute_frame_symbols(const FinslerFunction& F, const JetPoint& p) {
    FrameSymbols S;
    const int n = p.dim();
    const int m = n - 1;
    auto p0 = p.as_eval_point();
    const int i0 = anchor_drop_index(p);
    S.n = n;
    S.m = m;
    S.F2 = F.energy(p0);
    S.E = adapted_E_at(F, i0, p0);
    S.g = fundamental_at(F, p0);
    S.g_inv = inverse(S.g);
    S.N = nonlinear_connection_at(F, p0);
    S.g3 = cartan_lowered_at(F, p0);
    S.Bw = berwald_at(F, p0);
    S.Rhv = hv_curvature_at(F, p0);
    S.y = p.y;
    S.gy = mat_vec(S.g, p0.y);

    S.gf = Matrix<double>(m, m);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            double s = 0.0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) s += S.g(i, j) * S.E(a, i) * S.E(b, j);
            S.gf(a, b) = s;
        }
    S.gf_inv = inverse(S.gf);

    // axis partials of E and g
    std::vector<Matrix<double>> dE, dg;
    for (int A = 0; A < 2 * n; ++A) {
        auto q = lift_axis(p0, A);
        Matrix<Dual<double>> Eq = adapted_E_at(F, i0, q);
        Matrix<Dual<double>> gq = fundamental_at(F, q);
        Matrix<double> de(m, n), dgq(n, n);
        for (int a = 0; a < m; ++a)
            for (int i = 0; i < n; ++i) de(a, i) = Eq(a, i).b;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) dgq(i, j) = gq(i, j).b;
        dE.push_back(std::move(de));
        dg.push_back(std::move(dgq));
    }
    S.dEy = Tensor3<double>(m, n, n);
    S.deltaE = Tensor3<double>(m, n, n);
    for (int a = 0; a < m; ++a)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                S.dEy(a, i, j) = dE[size_t(n + j)](a, i);
                double v = dE[size_t(j)](a, i);
                for (int mm = 0; mm < n; ++mm) v -= S.N(j, mm) * dE[size_t(n + mm)](a, i);
                S.deltaE(a, i, j) = v;
            }
    S.delta_g = Tensor3<double>(n, n, n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i) {
                double v = dg[size_t(i)](j, k);
                for (int mm = 0; mm < n; ++mm) v -= S.N(i, mm) * dg[size_t(n + mm)](j, k);
                S.delta_g(j, k, i) = v;
            }
    S.Gamma = Tensor3<double>(n, n, n);
    for (int h = 0; h < n; ++h)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double s = 0.0;
                for (int k = 0; k < n; ++k)
                    s += 0.5 * S.g_inv(h, k) *
                         (S.delta_g(k, i, j) + S.delta_g(k, j, i) - S.delta_g(i, j, k));
                S.Gamma(h, i, j) = s;
            }
    S.g_low = Tensor3<double>(m, m, m);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            for (int d = 0; d < m; ++d) {
                double s = 0.0;
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j)
                        for (int k = 0; k < n; ++k)
                            s += S.E(a, i) * S.E(b, j) * S.E(d, k) * S.g3(i, j, k);
                S.g_low(a, b, d) = 0.5 * s;
            }
    S.R3 = Tensor3<double>(m, m, m);
    for (int pp = 0; pp < m; ++pp)
        for (int q = 0; q < m; ++q)
            for (int r = 0; r < m; ++r) {
                double s = 0.0;
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j)
                        for (int h = 0; h < n; ++h)
                            for (int k = 0; k < n; ++k)
                                s += S.E(q, i) * S.E(r, j) * S.E(pp, k) * S.Rhv(h, i, j) * S.g(h, k);
                S.R3(pp, q, r) = s;
            }
    S.Rbar = Matrix<double>(m, m);
    S.Rab = Matrix<double>(m, m);
    S.Rab_alt = Matrix<double>(m, m);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            double s = 0.0;
            for (int i = 0; i < n; ++i) s += (S.dbarE(a, b, i) - S.dbarE(b, a, i)) * S.gy[size_t(i)];
            S.Rbar(a, b) = s;
            double t = 0.0, talt = 0.0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    double rij = 0.0, rij_alt = 0.0;
                    for (int k = 0; k < n; ++k) {
                        rij += S.Rhv(k, i, j) * S.gy[size_t(k)];
                        for (int l = 0; l < n; ++l) rij_alt += S.g(i, k) * p.y[size_t(l)] * S.Rhv(k, l, j);
                    }
                    t += S.E(a, i) * S.E(b, j) * rij;
                    talt += S.E(a, i) * S.E(b, j) * rij_alt;
                }
            S.Rab(a, b) = t;
            S.Rab_alt(a, b) = talt;
        }
    return S;
}

// --- closed-form connection table ------------------------------------------------

enum class FrameSym { DeltaBar, Xi, PartialBar, Liouville };

inline std::string frame_sym_name(FrameSym s, int idx) {
    switch (s) {
        case FrameSym::DeltaBar: return "dbar_" + std::to_string(idx + 1);
        case FrameSym::Xi: return "xi";
        case FrameSym::PartialBar: return "pbar_" + std::to_string(idx + 1);
        case FrameSym::Liouville: return "L";
    }
    return "?";
}

// Adapted-frame coefficients [dbar_e.., xi, pbar_e.., L] of the printed
// formula for nabla_{X}Y where X = (sx, ia), Y = (sy, ib). Formulas are
// transcribed literally; ambiguous symbols use the recorded hypotheses
// (Gamma_ij^h from delta-derivatives of g, R_ij = R^k_ij g_kl y^l, and the
// permuted R_{bad} read through the same projection pattern as R_{dab}).
inline std::vector<double> closed_form_nabla(const FrameSymbols& S, FrameSym sx, int ia, FrameSym sy,
                                             int ib) {
    const int m = S.m;
    std::vector<double> c(size_t(2 * m + 2), 0.0);
    auto dbar_c = [&](int e) -> double& { return c[size_t(e)]; };
    auto xi_c = [&]() -> double& { return c[size_t(m)]; };
    auto pbar_c = [&](int e) -> double& { return c[size_t(m + 1 + e)]; };
    auto L_c = [&]() -> double& { return c[size_t(2 * m + 1)]; };
    const double invF2 = 1.0 / S.F2;

    if (sx == FrameSym::DeltaBar && sy == FrameSym::DeltaBar) {
        int a = ia, b = ib;
        for (int e = 0; e < m; ++e) {
            double gamma = 0.0;
            for (int i = 0; i < S.n; ++i)
                for (int j = 0; j < S.n; ++j)
                    for (int d = 0; d < m; ++d)
                        for (int k = 0; k < S.n; ++k)
                            for (int h = 0; h < S.n; ++h)
                                gamma += S.E(a, i) * S.E(b, j) * S.E(d, k) * S.Gamma(h, i, j) *
                                         S.g(h, k) * S.gf_inv(d, e);
            double et = 0.0; // dbar_a(E_b^j) E_d^k g_jk g^{de}
            for (int j = 0; j < S.n; ++j)
                for (int d = 0; d < m; ++d)
                    for (int k = 0; k < S.n; ++k)
                        et += S.dbarE(a, b, j) * S.E(d, k) * S.g(j, k) * S.gf_inv(d, e);
            dbar_c(e) = gamma + et;
            double r = 0.0;
            for (int d = 0; d < m; ++d) r += S.R3(d, a, b) * S.gf_inv(d, e);
            pbar_c(e) = -S.g_low_up(a, b, e) + 0.5 * r;
        }
        xi_c() = 0.5 * invF2 * S.Rbar(a, b);
        return c;
    }
    if (sx == FrameSym::DeltaBar && sy == FrameSym::PartialBar) {
        int a = ia, b = ib;
        for (int e = 0; e < m; ++e) {
            double t = 0.0;
            for (int d = 0; d < m; ++d) {
                double inner = 0.0;
                for (int i = 0; i < S.n; ++i)
                    for (int j = 0; j < S.n; ++j)
                        for (int k = 0; k < S.n; ++k) {
                            double par = S.delta_g(j, k, i);
                            for (int h = 0; h < S.n; ++h)
                                par += -S.Bw(i, k, h) * S.g(h, j) + S.Bw(i, j, h) * S.g(h, k);
                            inner += 0.5 * S.E(b, j) * S.E(d, k) * S.E(a, i) * par;
                        }
                for (int j = 0; j < S.n; ++j)
                    for (int k = 0; k < S.n; ++k) inner += S.dbarE(a, b, j) * S.E(d, k) * S.g(j, k);
                t += inner * S.gf_inv(d, e);
            }
            pbar_c(e) = t;
            double r = 0.0;
            for (int d = 0; d < m; ++d) r += S.R3(b, a, d) * S.gf_inv(d, e);
            dbar_c(e) = S.g_low_up(a, b, e) - 0.5 * r;
        }
        xi_c() = 0.5 * invF2 * S.Rab(a, b);
        return c;
    }
    if (sx == FrameSym::PartialBar && sy == FrameSym::DeltaBar) {
        int b = ia, a = ib; // printed as nabla_{pbar_b} dbar_a
        for (int e = 0; e < m; ++e) {
            double r = 0.0;
            for (int d = 0; d < m; ++d) r += S.R3(b, a, d) * S.gf_inv(d, e);
            double et = 0.0; // pbar_b(E_a^i) E_d^k g_ik g^{de}
            for (int i = 0; i < S.n; ++i)
                for (int d = 0; d < m; ++d)
                    for (int k = 0; k < S.n; ++k)
                        et += S.pbarE(b, a, i) * S.E(d, k) * S.g(i, k) * S.gf_inv(d, e);
            dbar_c(e) = S.g_low_up(a, b, e) - 0.5 * r + et;
            double t = 0.0;
            for (int d = 0; d < m; ++d) {
                double inner = 0.0;
                for (int i = 0; i < S.n; ++i)
                    for (int j = 0; j < S.n; ++j)
                        for (int k = 0; k < S.n; ++k) {
                            double par = S.delta_g(j, k, i);
                            for (int h = 0; h < S.n; ++h)
                                par += -S.Bw(i, k, h) * S.g(h, j) - S.Bw(i, j, h) * S.g(h, k);
                            inner += 0.5 * S.E(a, i) * S.E(b, j) * S.E(d, k) * par;
                        }
                t += inner * S.gf_inv(d, e);
            }
            pbar_c(e) = t;
        }
        xi_c() = invF2 * (0.5 * S.Rab(a, b) - S.gf(a, b));
        return c;
    }
    if (sx == FrameSym::PartialBar && sy == FrameSym::PartialBar) {
        int a = ia, b = ib;
        for (int e = 0; e < m; ++e) {
            double t = 0.0;
            for (int d = 0; d < m; ++d) {
                double inner = 0.0;
                for (int i = 0; i < S.n; ++i)
                    for (int j = 0; j < S.n; ++j)
                        for (int k = 0; k < S.n; ++k) {
                            double par = -S.delta_g(i, j, k);
                            for (int h = 0; h < S.n; ++h)
                                par += S.Bw(i, k, h) * S.g(h, j) + S.Bw(j, k, h) * S.g(h, i);
                            inner += 0.5 * S.E(a, i) * S.E(b, j) * S.E(d, k) * par;
                        }
                t += inner * S.gf_inv(d, e);
            }
            dbar_c(e) = t;
            double et = 0.0;
            for (int j = 0; j < S.n; ++j)
                for (int d = 0; d < m; ++d)
                    for (int k = 0; k < S.n; ++k)
                        et += S.pbarE(a, b, j) * S.E(d, k) * S.g(k, j) * S.gf_inv(d, e);
            pbar_c(e) = S.g_low_up(a, b, e) + et;
        }
        L_c() = -invF2 * S.gf(a, b);
        return c;
    }
    if (sx == FrameSym::DeltaBar && sy == FrameSym::Xi) {
        int a = ia;
        for (int e = 0; e < m; ++e) {
            double r1 = 0.0, r2 = 0.0;
            for (int d = 0; d < m; ++d) {
                r1 += S.Rbar(d, a) * S.gf_inv(d, e);
                r2 += S.Rab(a, d) * S.gf_inv(d, e);
            }
            dbar_c(e) = 0.5 * r1;
            pbar_c(e) = -0.5 * r2;
        }
        return c;
    }
    if (sx == FrameSym::Xi && sy == FrameSym::DeltaBar) {
        int a = ib;
        for (int e = 0; e < m; ++e) {
            double t = 0.0;
            for (int d = 0; d < m; ++d) {
                double inner = 0.5 * S.Rbar(d, a);
                for (int i = 0; i < S.n; ++i)
                    for (int k = 0; k < S.n; ++k) {
                        inner += S.xiE(a, i) * S.E(d, k) * S.g(i, k);
                        for (int h = 0; h < S.n; ++h)
                            inner += S.E(a, i) * S.N(i, h) * S.g(h, k) * S.E(d, k);
                    }
                t += inner * S.gf_inv(d, e);
            }
            dbar_c(e) = t;
            double r = 0.0;
            for (int d = 0; d < m; ++d) r += S.Rab(a, d) * S.gf_inv(d, e);
            pbar_c(e) = 0.5 * r;
        }
        return c;
    }
    if (sx == FrameSym::PartialBar && sy == FrameSym::Xi) {
        int a = ia;
        for (int e = 0; e < m; ++e) {
            double r = 0.0;
            for (int d = 0; d < m; ++d) r += S.Rab(a, d) * S.gf_inv(d, e);
            dbar_c(e) = (a == e ? 1.0 : 0.0) - 0.5 * r;
        }
        return c;
    }
    if (sx == FrameSym::Xi && sy == FrameSym::PartialBar) {
        int a = ib;
        for (int e = 0; e < m; ++e) {
            double r = 0.0;
            for (int d = 0; d < m; ++d) r += S.Rab(a, d) * S.gf_inv(d, e);
            dbar_c(e) = -0.5 * r;
            double t = 0.0;
            for (int d = 0; d < m; ++d) {
                double inner = 0.0;
                for (int i = 0; i < S.n; ++i)
                    for (int k = 0; k < S.n; ++k) {
                        double v = S.xiE(a, i) * S.g(i, k);
                        for (int j = 0; j < S.n; ++j) v += S.E(a, i) * S.N(i, j) * S.g(j, k);
                        inner += v * S.E(d, k);
                    }
                t += inner * S.gf_inv(d, e);
            }
            pbar_c(e) = t;
        }
        return c;
    }
    if (sx == FrameSym::DeltaBar && sy == FrameSym::Liouville) return c; // 0
    if (sx == FrameSym::Liouville && sy == FrameSym::DeltaBar) {
        int a = ib;
        for (int e = 0; e < m; ++e) {
            double t = 0.0;
            for (int d = 0; d < m; ++d) {
                double inner = 0.0;
                for (int i = 0; i < S.n; ++i)
                    for (int k = 0; k < S.n; ++k) inner += S.LE(a, i) * S.E(d, k) * S.g(i, k);
                t += inner * S.gf_inv(d, e);
            }
            dbar_c(e) = t;
        }
        return c;
    }
    if (sx == FrameSym::PartialBar && sy == FrameSym::Liouville) {
        pbar_c(ia) = 1.0;
        return c;
    }
    if (sx == FrameSym::Liouville && sy == FrameSym::PartialBar) {
        int a = ib;
        for (int e = 0; e < m; ++e) {
            double t = 0.0;
            for (int d = 0; d < m; ++d) {
                double inner = 0.0;
                for (int i = 0; i < S.n; ++i)
                    for (int k = 0; k < S.n; ++k) inner += S.LE(a, i) * S.E(d, k) * S.g(i, k);
                t += inner * S.gf_inv(d, e);
            }
            pbar_c(e) = t;
        }
        return c;
    }
    if (sx == FrameSym::Xi && sy == FrameSym::Xi) return c;       // 0
    if (sx == FrameSym::Xi && sy == FrameSym::Liouville) return c; // 0
    if (sx == FrameSym::Liouville && sy == FrameSym::Xi) {
        xi_c() = 1.0;
        return c;
    }
    // nabla_L L = L
    L_c() = 1.0;
    return c;
}

// --- connection table adjudication ---------------------------------------------

struct ConnectionEntry {
    std::string stanza; // e.g. "nabla(dbar_1, pbar_2)"
    int a = -1, b = -1;
    std::vector<double> closed_coeffs; // [dbar.., xi, pbar.., L]
    std::vector<double> koszul_coeffs;
    double residual = 0.0;     // under the stated R_ab hypothesis
    double residual_alt = 0.0; // under the self-adjoint R_ab reading
    bool ambiguous = false;    // stanza leans on a symbol-reading hypothesis
};

struct ConnectionTable {
    std::vector<ConnectionEntry> entries;
    double max_residual = 0.0;
    // residuals of the checks criterion-bound to match outright
    double xi_xi_residual = 0.0;     // nabla_xi xi = 0
    double LL_residual = 0.0;        // nabla_L L = L
    double pp_normal_residual = 0.0; // L-part of nabla_pbar pbar vs -(1/F^2) g_ab
};

// Evaluates every stanza of the closed-form table against the Koszul oracle
// at p, in the adapted frame. The Koszul value is ground truth; the table is
// the hypothesis under test.
inline ConnectionTable connection_table(const FinslerFunction& F, const JetPoint& p) {
    AdaptedFrame fr = build_adapted_frame(F, p);
    FrameSymbols S = compute_frame_symbols(F, p);
    FrameSymbols S_alt = S;
    S_alt.Rab = S.Rab_alt;
    auto p0 = p.as_eval_point();
    const int m = S.m;

    auto field_of = [&](FrameSym s, int idx) {
        switch (s) {
            case FrameSym::DeltaBar: return fr.delta_bar(idx);
            case FrameSym::Xi: return fr.xi();
            case FrameSym::PartialBar: return fr.partial_bar(idx);
            default: return fr.liouville();
        }
    };
    // which stanzas rest on ambiguous paper symbols (Gamma_ij^h, R_ab, R_bad, Rbar)
    auto is_ambiguous = [](FrameSym sx, FrameSym sy) {
        auto uses_r = [](FrameSym s) { return s == FrameSym::DeltaBar || s == FrameSym::PartialBar; };
        if (sx == FrameSym::Xi || sy == FrameSym::Xi)
            return uses_r(sx) || uses_r(sy); // R_ab / Rbar terms
        return (sx == FrameSym::DeltaBar && sy == FrameSym::DeltaBar) ||
               (sx == FrameSym::DeltaBar && sy == FrameSym::PartialBar) ||
               (sx == FrameSym::PartialBar && sy == FrameSym::DeltaBar);
    };

    ConnectionTable table;
    const std::array<FrameSym, 4> syms = {FrameSym::DeltaBar, FrameSym::Xi, FrameSym::PartialBar,
                                          FrameSym::Liouville};
    for (FrameSym sx : syms) {
        for (FrameSym sy : syms) {
            int ra = (sx == FrameSym::DeltaBar || sx == FrameSym::PartialBar) ? m : 1;
            int rb = (sy == FrameSym::DeltaBar || sy == FrameSym::PartialBar) ? m : 1;
            for (int a = 0; a < ra; ++a) {
                for (int b = 0; b < rb; ++b) {
                    ConnectionEntry e;
                    e.stanza = "nabla(" + frame_sym_name(sx, a) + ", " + frame_sym_name(sy, b) + ")";
                    e.a = a;
                    e.b = b;
                    e.ambiguous = is_ambiguous(sx, sy);
                    e.closed_coeffs = closed_form_nabla(S, sx, a, sy, b);
                    auto alt_coeffs = closed_form_nabla(S_alt, sx, a, sy, b);
                    auto nat = koszul_nabla_at(F, p0, field_of(sx, a), field_of(sy, b));
                    e.koszul_coeffs = frame_decompose(fr, p, nat);
                    for (size_t i = 0; i < e.closed_coeffs.size(); ++i) {
                        e.residual = std::max(e.residual,
                                              std::abs(e.closed_coeffs[i] - e.koszul_coeffs[i]));
                        e.residual_alt =
                            std::max(e.residual_alt, std::abs(alt_coeffs[i] - e.koszul_coeffs[i]));
                    }
                    table.max_residual = std::max(table.max_residual, e.residual);

                    if (sx == FrameSym::Xi && sy == FrameSym::Xi) {
                        for (double kc : e.koszul_coeffs)
                            table.xi_xi_residual = std::max(table.xi_xi_residual, std::abs(kc));
                    }
                    if (sx == FrameSym::Liouville && sy == FrameSym::Liouville) {
                        for (size_t i = 0; i < e.koszul_coeffs.size(); ++i) {
                            double want = (int(i) == 2 * m + 1) ? 1.0 : 0.0;
                            table.LL_residual =
                                std::max(table.LL_residual, std::abs(e.koszul_coeffs[i] - want));
                        }
                    }
                    if (sx == FrameSym::PartialBar && sy == FrameSym::PartialBar) {
                        double want = -S.gf(a, b) / S.F2;
                        table.pp_normal_residual =
                            std::max(table.pp_normal_residual,
                                     std::abs(e.koszul_coeffs[size_t(2 * m + 1)] - want));
                    }
                    table.entries.push_back(std::move(e));
                }
            }
        }
    }
    return table;
}

// --- Gauss formula / second fundamental form -------------------------------------

inline void require_indicatrix(const FinslerFunction& F, const JetPoint& p, double tol = 1e-9) {
    double f = F.value(p.as_eval_point());
    if (std::abs(f - 1.0) > tol)
        throw DomainError("point not on the indicatrix (|F - 1| = " + std::to_string(std::abs(f - 1.0)) +
                          ")");
}

// Normal component of nabla_X Y along L: H(X,Y) = (G(nabla_X Y, L)/G(L,L)) L.
struct NormalComponent {
    double coeff = 0.0;     // coefficient on L
    TangentVectorTM vector; // coeff * L at p
};

inline NormalComponent second_fundamental_form(const FinslerFunction& F, const JetPoint& p,
                                               const VecField& X, const VecField& Y) {
    require_indicatrix(F, p);
    auto p0 = p.as_eval_point();
    auto nxy = koszul_nabla_at(F, p0, X, Y);
    Matrix<double> M = natural_gram(F, p0);
    const int n = p.dim();
    VecField L = frame_liouville(n);
    auto Lc = L.components(p0);
    double coeff = dot(nxy, mat_vec(M, Lc)) / dot(Lc, mat_vec(M, Lc));
    TangentVectorTM v{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), p};
    for (int i = 0; i < n; ++i) v.v[size_t(i)] = coeff * p.y[size_t(i)];
    return {coeff, v};
}

// Tangential projection onto the F-level set through q (normal is L).
template <class T>
std::vector<T> tangential_at(const FinslerFunction& F, const PointT<T>& q, std::vector<T> c) {
    const int n = q.dim();
    Matrix<T> M = natural_gram(F, q);
    std::vector<T> Lc(size_t(2 * n), constant_of<T>(0.0));
    for (int i = 0; i < n; ++i) Lc[size_t(n + i)] = q.y[i];
    auto MLc = mat_vec(M, Lc);
    T coeff = dot(c, MLc) / dot(Lc, MLc);
    for (size_t A = 0; A < c.size(); ++A) c[A] -= coeff * Lc[A];
    return c;
}

// Induced connection of the level-set submanifold: tan(nabla_X Y).
inline VecField induced_nabla_field(const FinslerFunction& F, const VecField& X, const VecField& Y) {
    return VecField::capped<1>([F, X, Y](const auto& q) {
        return tangential_at(F, q, koszul_nabla_at(F, q, X, Y));
    });
}

// --- curvature -------------------------------------------------------------------

// R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_{[X,Y]} Z.
// Second covariant derivatives jet-differentiate the connection-output
// fields of the base point.
inline std::vector<double> sasaki_curvature_components(const FinslerFunction& F, const JetPoint& p,
                                                       const VecField& X, const VecField& Y,
                                                       const VecField& Z) {
    auto p0 = p.as_eval_point();
    auto t1 = koszul_nabla_at(F, p0, X, nabla_field(F, Y, Z));
    auto t2 = koszul_nabla_at(F, p0, Y, nabla_field(F, X, Z));
    auto t3 = koszul_nabla_at(F, p0, bracket_as_field(X, Y), Z);
    std::vector<double> r(t1.size());
    for (size_t A = 0; A < r.size(); ++A) r[A] = t1[A] - t2[A] - t3[A];
    return r;
}

inline TangentVectorTM sasaki_curvature(const FinslerFunction& F, const JetPoint& p, const VecField& X,
                                        const VecField& Y, const VecField& Z) {
    auto c = sasaki_curvature_components(F, p, X, Y, Z);
    const int n = p.dim();
    return {std::vector<double>(c.begin(), c.begin() + n), std::vector<double>(c.begin() + n, c.end()),
            p};
}

// Curvature of the induced connection on the level set (all nabla outputs
// tangentially projected).
inline std::vector<double> induced_curvature_components(const FinslerFunction& F, const JetPoint& p,
                                                        const VecField& X, const VecField& Y,
                                                        const VecField& Z) {
    auto p0 = p.as_eval_point();
    auto t1 = tangential_at(F, p0, koszul_nabla_at(F, p0, X, induced_nabla_field(F, Y, Z)));
    auto t2 = tangential_at(F, p0, koszul_nabla_at(F, p0, Y, induced_nabla_field(F, X, Z)));
    auto t3 = tangential_at(F, p0, koszul_nabla_at(F, p0, bracket_as_field(X, Y), Z));
    std::vector<double> r(t1.size());
    for (size_t A = 0; A < r.size(); ++A) r[A] = t1[A] - t2[A] - t3[A];
    return r;
}

// --- the printed ambient-vs-induced curvature relations ---------------------------

struct CurvatureRelation {
    std::string name;
    double residual = 0.0;
};

struct CurvatureRelationReport {
    std::vector<CurvatureRelation> relations; // the seven printed ones
    std::vector<CurvatureRelation> extras;    // "equal for other combinations" probes
    double max_residual() const {
        double mr = 0.0;
        for (const auto& r : relations) mr = std::max(mr, r.residual);
        return mr;
    }
    double max_extra_residual() const {
        double mr = 0.0;
        for (const auto& r : extras) mr = std::max(mr, r.residual);
        return mr;
    }
};

inline CurvatureRelationReport curvature_relation_check(const FinslerFunction& F, const JetPoint& p,
                                                        int extra_combos = 5) {
    require_indicatrix(F, p);
    AdaptedFrame fr = build_adapted_frame(F, p);
    FrameSymbols S = compute_frame_symbols(F, p);
    auto p0 = p.as_eval_point();
    const int n = p.dim();
    const int m = n - 1;
    const double invF2 = 1.0 / S.F2;

    std::vector<VecField> db, pb;
    for (int a = 0; a < m; ++a) db.push_back(fr.delta_bar(a));
    for (int a = 0; a < m; ++a) pb.push_back(fr.partial_bar(a));
    VecField xi = fr.xi();

    auto L_vec = [&](double coeff) {
        std::vector<double> c(size_t(2 * n), 0.0);
        for (int i = 0; i < n; ++i) c[size_t(n + i)] = coeff * p.y[size_t(i)];
        return c;
    };
    auto field_vec = [&](const VecField& f, double coeff) {
        auto c = f.components(p0);
        for (auto& v : c) v *= coeff;
        return c;
    };
    auto residual_of = [&](const std::vector<double>& lhs, std::vector<double> rhs) {
        double r = 0.0;
        for (size_t A = 0; A < lhs.size(); ++A) r = std::max(r, std::abs(lhs[A] - rhs[A]));
        return r;
    };

    CurvatureRelationReport rep;

    // (1) R(db_a, db_b) pb_c = Rbar(...) + (1/F^2) R_cab L
    {
        double worst = 0.0;
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b)
                for (int c = 0; c < m; ++c) {
                    auto lhs = sasaki_curvature_components(F, p, db[a], db[b], pb[c]);
                    auto rhs = induced_curvature_components(F, p, db[a], db[b], pb[c]);
                    auto corr = L_vec(invF2 * S.R3(c, a, b));
                    for (size_t A = 0; A < rhs.size(); ++A) rhs[A] += corr[A];
                    worst = std::max(worst, residual_of(lhs, rhs));
                }
        rep.relations.push_back({"R(dbar,dbar)pbar", worst});
    }
    // (2) R(db_a, pb_b) db_c = Rbar(...) + (1/2F^2)(R_bac - 2 g_abc) L
    {
        double worst = 0.0;
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b)
                for (int c = 0; c < m; ++c) {
                    auto lhs = sasaki_curvature_components(F, p, db[a], pb[b], db[c]);
                    auto rhs = induced_curvature_components(F, p, db[a], pb[b], db[c]);
                    auto corr = L_vec(0.5 * invF2 * (S.R3(b, a, c) - 2.0 * S.g_low(a, b, c)));
                    for (size_t A = 0; A < rhs.size(); ++A) rhs[A] += corr[A];
                    worst = std::max(worst, residual_of(lhs, rhs));
                }
        rep.relations.push_back({"R(dbar,pbar)dbar", worst});
    }
    // (3) R(pb_a, pb_b) pb_c = Rbar(...) - (1/F^2) g_bc pb_a + (1/F^2) g_ac pb_b
    {
        double worst = 0.0;
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b)
                for (int c = 0; c < m; ++c) {
                    auto lhs = sasaki_curvature_components(F, p, pb[a], pb[b], pb[c]);
                    auto rhs = induced_curvature_components(F, p, pb[a], pb[b], pb[c]);
                    auto c1 = field_vec(pb[a], -invF2 * S.gf(b, c));
                    auto c2 = field_vec(pb[b], invF2 * S.gf(a, c));
                    for (size_t A = 0; A < rhs.size(); ++A) rhs[A] += c1[A] + c2[A];
                    worst = std::max(worst, residual_of(lhs, rhs));
                }
        rep.relations.push_back({"R(pbar,pbar)pbar", worst});
    }
    // (4) R(db_a, pb_b) pb_c = Rbar(...) + (1/2) E_c^i E_b^j E_a^k (G_ik^h g_hj + G_jk^h g_hi - delta g_ij/dx^k) L
    {
        double worst = 0.0;
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b)
                for (int c = 0; c < m; ++c) {
                    auto lhs = sasaki_curvature_components(F, p, db[a], pb[b], pb[c]);
                    auto rhs = induced_curvature_components(F, p, db[a], pb[b], pb[c]);
                    double s = 0.0;
                    for (int i = 0; i < n; ++i)
                        for (int j = 0; j < n; ++j)
                            for (int k = 0; k < n; ++k) {
                                double par = -S.delta_g(i, j, k);
                                for (int h = 0; h < n; ++h)
                                    par += S.Bw(i, k, h) * S.g(h, j) + S.Bw(j, k, h) * S.g(h, i);
                                s += 0.5 * S.E(c, i) * S.E(b, j) * S.E(a, k) * par;
                            }
                    auto corr = L_vec(s);
                    for (size_t A = 0; A < rhs.size(); ++A) rhs[A] += corr[A];
                    worst = std::max(worst, residual_of(lhs, rhs));
                }
        rep.relations.push_back({"R(dbar,pbar)pbar", worst});
    }
    // (5) R(db_a, pb_b) xi = Rbar(...) - (1/2F^2) R_ab L
    {
        double worst = 0.0;
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) {
                auto lhs = sasaki_curvature_components(F, p, db[a], pb[b], xi);
                auto rhs = induced_curvature_components(F, p, db[a], pb[b], xi);
                auto corr = L_vec(-0.5 * invF2 * S.Rab(a, b));
                for (size_t A = 0; A < rhs.size(); ++A) rhs[A] += corr[A];
                worst = std::max(worst, residual_of(lhs, rhs));
            }
        rep.relations.push_back({"R(dbar,pbar)xi", worst});
    }
    // (6) R(pb_a, xi) db_b = Rbar(...) - (1/2F^2) R_ab L
    {
        double worst = 0.0;
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) {
                auto lhs = sasaki_curvature_components(F, p, pb[a], xi, db[b]);
                auto rhs = induced_curvature_components(F, p, pb[a], xi, db[b]);
                auto corr = L_vec(-0.5 * invF2 * S.Rab(a, b));
                for (size_t A = 0; A < rhs.size(); ++A) rhs[A] += corr[A];
                worst = std::max(worst, residual_of(lhs, rhs));
            }
        rep.relations.push_back({"R(pbar,xi)dbar", worst});
    }
    // (7) R(db_a, xi) pb_b = Rbar(...) - (1/F^2) R_ab L
    {
        double worst = 0.0;
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) {
                auto lhs = sasaki_curvature_components(F, p, db[a], xi, pb[b]);
                auto rhs = induced_curvature_components(F, p, db[a], xi, pb[b]);
                auto corr = L_vec(-invF2 * S.Rab(a, b));
                for (size_t A = 0; A < rhs.size(); ++A) rhs[A] += corr[A];
                worst = std::max(worst, residual_of(lhs, rhs));
            }
        rep.relations.push_back({"R(dbar,xi)pbar", worst});
    }
    // "for the other combinations R and Rbar are equal" - probe the
    // combination classes not covered by the seven printed relations.
    // tang = [dbar_0.., xi, pbar_0..]; xi sits at index m.
    {
        std::vector<VecField> tang;
        for (int a = 0; a < m; ++a) tang.push_back(db[a]);
        tang.push_back(xi);
        for (int a = 0; a < m; ++a) tang.push_back(pb[a]);
        const std::array<std::array<int, 3>, 8> combos = {{{0, m, 0},             // (dbar, xi) dbar
                                                           {0, m, m},             // (dbar, xi) xi
                                                           {m + 1, m, m + 1},     // (pbar, xi) pbar
                                                           {m + 1, m, m},         // (pbar, xi) xi
                                                           {0, 0, m},             // (dbar, dbar) xi
                                                           {m + 1, m + 1, 0},     // (pbar, pbar) dbar
                                                           {0, 0, 0},             // (dbar, dbar) dbar
                                                           {m + 1, m + 1, m}}};   // (pbar, pbar) xi
        for (int kk = 0; kk < extra_combos && kk < int(combos.size()); ++kk) {
            const auto& cmb = combos[size_t(kk)];
            auto lhs = sasaki_curvature_components(F, p, tang[size_t(cmb[0])], tang[size_t(cmb[1])],
                                                   tang[size_t(cmb[2])]);
            auto rhs = induced_curvature_components(F, p, tang[size_t(cmb[0])], tang[size_t(cmb[1])],
                                                    tang[size_t(cmb[2])]);
            rep.extras.push_back({"extra_" + std::to_string(kk), residual_of(lhs, rhs)});
        }
    }
    return rep;
}

} // namespace ftb
