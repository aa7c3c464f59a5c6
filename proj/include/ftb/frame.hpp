#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "ftb/spray.hpp"
#include "ftb/vector_field.hpp"

namespace ftb {

// Index dropped when building the vertical complement of L: argmax_i |y^i|
// at the anchor, smallest index on ties. Kept fixed near the anchor so the
// frame is a smooth field there.
inline int anchor_drop_index(const JetPoint& p) {
    int i0 = 0;
    for (int i = 1; i < p.dim(); ++i)
        if (std::abs(p.y[i]) > std::abs(p.y[i0])) i0 = i;
    return i0;
}

// E_a^i(q) = delta_{iota(a)}^i - (g_{iota(a) j} y^j / g_kl y^k y^l) y^i,
// where iota enumerates {0..n-1} \ {i0}. Annihilates g.y by construction:
// E_a^i g_ij y^j = 0 identically in q.
template <class T>
Matrix<T> adapted_E_at(const FinslerFunction& F, int i0, const PointT<T>& q) {
    const int n = q.dim();
    Matrix<T> g = fundamental_at(F, q);
    std::vector<T> gy = mat_vec(g, q.y); // (g y)_i
    T yy = dot(q.y, gy);                 // g_kl y^k y^l
    Matrix<T> E(n - 1, n);
    int a = 0;
    for (int row = 0; row < n; ++row) {
        if (row == i0) continue;
        T c = gy[row] / yy;
        for (int i = 0; i < n; ++i) {
            E(a, i) = (row == i ? 1.0 : 0.0) - c * q.y[i];
        }
        ++a;
    }
    return E;
}

// J in natural components: with split parts (H, V), J(H, V) = (V, -H);
// translating through delta/delta x = d/dx - G_i^j d/dy gives
//   h' = v + N^T h,   v' = -h - N^T h'.
template <class T>
std::vector<T> apply_J_at(const FinslerFunction& F, const PointT<T>& q, const std::vector<T>& c) {
    const int n = q.dim();
    Matrix<T> N = nonlinear_connection_at(F, q);
    std::vector<T> out(size_t(2 * n), constant_of<T>(0.0));
    for (int j = 0; j < n; ++j) {
        T hj = c[size_t(n + j)];
        for (int i = 0; i < n; ++i) hj += N(i, j) * c[size_t(i)];
        out[size_t(j)] = hj;
    }
    for (int j = 0; j < n; ++j) {
        T vj = -c[size_t(j)];
        for (int i = 0; i < n; ++i) vj -= N(i, j) * out[size_t(i)];
        out[size_t(n + j)] = vj;
    }
    return out;
}

inline TangentVectorTM apply_J(const FinslerFunction& F, const JetPoint& p, const TangentVectorTM& v) {
    auto c = apply_J_at(F, p.as_eval_point(), flatten(v));
    const int n = p.dim();
    return {std::vector<double>(c.begin(), c.begin() + n), std::vector<double>(c.begin() + n, c.end()),
            p};
}

// --- frame vector fields ---------------------------------------------------

// dbar/dbar y^a = E_a^i d/dy^i
inline VecField frame_partial_bar(const FinslerFunction& F, int i0, int a) {
    return VecField([F, i0, a](const auto& q) {
        using T = std::decay_t<decltype(q.x[0])>;
        const int n = q.dim();
        Matrix<T> E = adapted_E_at(F, i0, q);
        std::vector<T> c(size_t(2 * n), constant_of<T>(0.0));
        for (int i = 0; i < n; ++i) c[size_t(n + i)] = E(a, i);
        return c;
    });
}

// dbar/dbar x^a = J(dbar/dbar y^a) = E_a^i delta/delta x^i
inline VecField frame_delta_bar(const FinslerFunction& F, int i0, int a) {
    return VecField([F, i0, a](const auto& q) {
        using T = std::decay_t<decltype(q.x[0])>;
        const int n = q.dim();
        Matrix<T> E = adapted_E_at(F, i0, q);
        Matrix<T> N = nonlinear_connection_at(F, q);
        std::vector<T> c(size_t(2 * n), constant_of<T>(0.0));
        for (int i = 0; i < n; ++i) c[size_t(i)] = E(a, i);
        for (int j = 0; j < n; ++j) {
            T vj = constant_of<T>(0.0);
            for (int i = 0; i < n; ++i) vj -= E(a, i) * N(i, j);
            c[size_t(n + j)] = vj;
        }
        return c;
    });
}

// xi = y^i delta/delta x^i (horizontal Liouville field)
inline VecField frame_xi(const FinslerFunction& F) {
    return VecField([F](const auto& q) {
        using T = std::decay_t<decltype(q.x[0])>;
        const int n = q.dim();
        Matrix<T> N = nonlinear_connection_at(F, q);
        std::vector<T> c(size_t(2 * n), constant_of<T>(0.0));
        for (int i = 0; i < n; ++i) c[size_t(i)] = q.y[i];
        for (int j = 0; j < n; ++j) {
            T vj = constant_of<T>(0.0);
            for (int i = 0; i < n; ++i) vj -= q.y[i] * N(i, j);
            c[size_t(n + j)] = vj;
        }
        return c;
    });
}

// L = y^i d/dy^i (vertical Liouville field)
inline VecField frame_liouville(int n) {
    return VecField([n](const auto& q) {
        using T = std::decay_t<decltype(q.x[0])>;
        std::vector<T> c(size_t(2 * n), constant_of<T>(0.0));
        for (int i = 0; i < n; ++i) c[size_t(n + i)] = q.y[i];
        return c;
    });
}

// delta/delta x^i = d/dx^i - G_i^j d/dy^j
inline VecField frame_delta_x(const FinslerFunction& F, int i) {
    return VecField([F, i](const auto& q) {
        using T = std::decay_t<decltype(q.x[0])>;
        const int n = q.dim();
        Matrix<T> N = nonlinear_connection_at(F, q);
        std::vector<T> c(size_t(2 * n), constant_of<T>(0.0));
        c[size_t(i)] = constant_of<T>(1.0);
        for (int j = 0; j < n; ++j) c[size_t(n + j)] = -N(i, j);
        return c;
    });
}

// --- adapted frame at a point ------------------------------------------------

struct AdaptedFrame {
    JetPoint anchor;
    int drop_index;              // i0 fixed on the anchor's neighborhood
    Matrix<double> E;            // (n-1) x n, rows E_a
    Matrix<double> g_frame;      // g_ab = g_ij E_a^i E_b^j
    Matrix<double> g_frame_inv;  // g^{ab}
    FinslerFunction F;

    int n() const { return anchor.dim(); }

    VecField partial_bar(int a) const { return frame_partial_bar(F, drop_index, a); }
    VecField delta_bar(int a) const { return frame_delta_bar(F, drop_index, a); }
    VecField xi() const { return frame_xi(F); }
    VecField liouville() const { return frame_liouville(n()); }

    // Frame order used throughout reports: dbar_1..dbar_{n-1}, xi,
    // pbar_1..pbar_{n-1}, L.
    std::vector<VecField> full_frame() const {
        std::vector<VecField> fr;
        for (int a = 0; a < n() - 1; ++a) fr.push_back(delta_bar(a));
        fr.push_back(xi());
        for (int a = 0; a < n() - 1; ++a) fr.push_back(partial_bar(a));
        fr.push_back(liouville());
        return fr;
    }

    // Tangent frame of the F-level sets: everything but L.
    std::vector<VecField> level_tangent_frame() const {
        std::vector<VecField> fr;
        for (int a = 0; a < n() - 1; ++a) fr.push_back(delta_bar(a));
        fr.push_back(xi());
        for (int a = 0; a < n() - 1; ++a) fr.push_back(partial_bar(a));
        return fr;
    }

    // Diagnostic only: g-orthonormalized vertical complement (Gram-Schmidt
    // of the E rows). The connection formulas are stated for general E.
    Matrix<double> orthonormalized_E() const {
        const int nn = n();
        Matrix<double> out = E;
        for (int a = 0; a < nn - 1; ++a) {
            for (int b = 0; b < a; ++b) {
                double proj = 0.0;
                for (int i = 0; i < nn; ++i)
                    for (int j = 0; j < nn; ++j) proj += out(a, i) * g_natural(i, j) * out(b, j);
                for (int i = 0; i < nn; ++i) out(a, i) -= proj * out(b, i);
            }
            double nrm2 = 0.0;
            for (int i = 0; i < nn; ++i)
                for (int j = 0; j < nn; ++j) nrm2 += out(a, i) * g_natural(i, j) * out(a, j);
            double inv = 1.0 / std::sqrt(nrm2);
            for (int i = 0; i < nn; ++i) out(a, i) *= inv;
        }
        return out;
    }

    Matrix<double> g_natural; // g_ij at the anchor
};

inline AdaptedFrame build_adapted_frame(const FinslerFunction& F, const JetPoint& p) {
    require_slit(p);
    auto p0 = p.as_eval_point();
    FundamentalTensor ft = fundamental_tensor(F, p); // validates positive definiteness
    int i0 = anchor_drop_index(p);
    Matrix<double> E = adapted_E_at(F, i0, p0);
    const int n = p.dim();
    Matrix<double> gf(n - 1, n - 1);
    for (int a = 0; a < n - 1; ++a)
        for (int b = 0; b < n - 1; ++b) {
            double s = 0.0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) s += ft.g(i, j) * E(a, i) * E(b, j);
            gf(a, b) = s;
        }
    if (!is_positive_definite(gf))
        throw DegenerateMetricError("adapted frame: g_ab not positive definite");
    return {p, i0, E, gf, inverse(gf), F, ft.g};
}

// --- bracket table of the adapted frame --------------------------------------

// Residuals of the eight bracket identities, measured in natural components
// against the numeric bracket (which is the ground truth here). Item (8) is
// checked exactly as printed ([xi, L] + xi = 0) and the better-matching sign
// is recorded rather than silently substituted.
struct BracketTableReport {
    std::array<double, 8> residuals{};
    int item8_sign = +1;          // +1: [xi,L] = -xi as printed; -1: opposite matched
    double item8_alt_residual = 0.0;

    double max_residual() const {
        double m = 0.0;
        for (double r : residuals) m = std::max(m, r);
        return m;
    }
};

inline BracketTableReport verify_bracket_table(const FinslerFunction& F, const JetPoint& p) {
    const int n = p.dim();
    auto p0 = p.as_eval_point();
    const int i0 = anchor_drop_index(p);
    const int m = n - 1;

    Matrix<double> E = adapted_E_at(F, i0, p0);
    Matrix<double> N = nonlinear_connection_at(F, p0);
    Tensor3<double> B = berwald_at(F, p0);
    Tensor3<double> R = hv_curvature_at(F, p0);

    // dE[A](a,i) = d E_a^i / d coordinate A
    std::vector<Matrix<double>> dE;
    for (int A = 0; A < 2 * n; ++A) {
        auto q = lift_axis(p0, A);
        Matrix<Dual<double>> Eq = adapted_E_at(F, i0, q);
        Matrix<double> d(m, n);
        for (int a = 0; a < m; ++a)
            for (int i = 0; i < n; ++i) d(a, i) = Eq(a, i).b;
        dE.push_back(std::move(d));
    }
    auto deltaE = [&](int a, int i, int j) { // delta E_a^i / delta x^j
        double v = dE[j](a, i);
        for (int mm = 0; mm < n; ++mm) v -= N(j, mm) * dE[n + mm](a, i);
        return v;
    };
    auto dbarE = [&](int b, int a, int i) { // dbar_b(E_a^i) = E_b^j delta E_a^i/delta x^j
        double v = 0.0;
        for (int j = 0; j < n; ++j) v += E(b, j) * deltaE(a, i, j);
        return v;
    };
    auto pbarE = [&](int b, int a, int i) { // pbar_b(E_a^i) = E_b^j dE_a^i/dy^j
        double v = 0.0;
        for (int j = 0; j < n; ++j) v += E(b, j) * dE[n + j](a, i);
        return v;
    };
    auto xiE = [&](int a, int i) { // xi(E_a^i) = y^j delta E_a^i/delta x^j
        double v = 0.0;
        for (int j = 0; j < n; ++j) v += p.y[j] * deltaE(a, i, j);
        return v;
    };
    auto LE = [&](int a, int i) { // L(E_a^i) = y^j dE_a^i/dy^j
        double v = 0.0;
        for (int j = 0; j < n; ++j) v += p.y[j] * dE[n + j](a, i);
        return v;
    };
    // natural components of c_h^i delta/delta x^i + c_v^k d/dy^k
    auto assemble = [&](const std::vector<double>& ch, const std::vector<double>& cv) {
        std::vector<double> c(size_t(2 * n), 0.0);
        for (int i = 0; i < n; ++i) c[size_t(i)] = ch[size_t(i)];
        for (int k = 0; k < n; ++k) {
            double v = cv[size_t(k)];
            for (int i = 0; i < n; ++i) v -= ch[size_t(i)] * N(i, k);
            c[size_t(n + k)] = v;
        }
        return c;
    };
    auto resid = [&](const std::vector<double>& lhs, const std::vector<double>& rhs) {
        double r = 0.0;
        for (size_t A = 0; A < lhs.size(); ++A) r = std::max(r, std::abs(lhs[A] - rhs[A]));
        return r;
    };

    std::vector<VecField> db, pb;
    for (int a = 0; a < m; ++a) db.push_back(frame_delta_bar(F, i0, a));
    for (int a = 0; a < m; ++a) pb.push_back(frame_partial_bar(F, i0, a));
    VecField xi = frame_xi(F), L = frame_liouville(n);

    BracketTableReport rep;

    // (1) [dbar_a, dbar_b] = (dbar_a E_b^i - dbar_b E_a^i) delta_i + E_a^i E_b^j R^k_ij d/dy^k
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            auto lhs = lie_bracket_at(db[a], db[b], p0);
            std::vector<double> ch(n, 0.0), cv(n, 0.0);
            for (int i = 0; i < n; ++i) ch[i] = dbarE(a, b, i) - dbarE(b, a, i);
            for (int k = 0; k < n; ++k) {
                double s = 0.0;
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) s += E(a, i) * E(b, j) * R(k, i, j);
                cv[k] = s;
            }
            rep.residuals[0] = std::max(rep.residuals[0], resid(lhs, assemble(ch, cv)));
        }

    // (2) [dbar_a, pbar_b] = (dbar_a E_b^k + E_a^i E_b^j G_ij^k) d/dy^k - pbar_b(E_a^i) delta_i
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            auto lhs = lie_bracket_at(db[a], pb[b], p0);
            std::vector<double> ch(n, 0.0), cv(n, 0.0);
            for (int i = 0; i < n; ++i) ch[i] = -pbarE(b, a, i);
            for (int k = 0; k < n; ++k) {
                double s = dbarE(a, b, k);
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) s += E(a, i) * E(b, j) * B(i, j, k);
                cv[k] = s;
            }
            rep.residuals[1] = std::max(rep.residuals[1], resid(lhs, assemble(ch, cv)));
        }

    // (3) [pbar_a, pbar_b] = (pbar_a E_b^i - pbar_b E_a^i) d/dy^i
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            auto lhs = lie_bracket_at(pb[a], pb[b], p0);
            std::vector<double> ch(n, 0.0), cv(n, 0.0);
            for (int i = 0; i < n; ++i) cv[i] = pbarE(a, b, i) - pbarE(b, a, i);
            rep.residuals[2] = std::max(rep.residuals[2], resid(lhs, assemble(ch, cv)));
        }

    // (4) [dbar_a, xi] = -(E_a^i G_i^j + xi(E_a^j)) delta_j + E_a^i y^j R^k_ij d/dy^k
    for (int a = 0; a < m; ++a) {
        auto lhs = lie_bracket_at(db[a], xi, p0);
        std::vector<double> ch(n, 0.0), cv(n, 0.0);
        for (int j = 0; j < n; ++j) {
            double s = xiE(a, j);
            for (int i = 0; i < n; ++i) s += E(a, i) * N(i, j);
            ch[j] = -s;
        }
        for (int k = 0; k < n; ++k) {
            double s = 0.0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) s += E(a, i) * p.y[j] * R(k, i, j);
            cv[k] = s;
        }
        rep.residuals[3] = std::max(rep.residuals[3], resid(lhs, assemble(ch, cv)));
    }

    // (5) [pbar_a, xi] = dbar_a - (xi(E_a^j) + E_a^i G_i^j) d/dy^j
    for (int a = 0; a < m; ++a) {
        auto lhs = lie_bracket_at(pb[a], xi, p0);
        std::vector<double> ch(n, 0.0), cv(n, 0.0);
        for (int i = 0; i < n; ++i) ch[i] = E(a, i); // dbar_a = E_a^i delta_i
        for (int j = 0; j < n; ++j) {
            double s = xiE(a, j);
            for (int i = 0; i < n; ++i) s += E(a, i) * N(i, j);
            cv[j] = -s;
        }
        rep.residuals[4] = std::max(rep.residuals[4], resid(lhs, assemble(ch, cv)));
    }

    // (6) [dbar_a, L] = -L(E_a^i) delta_i
    for (int a = 0; a < m; ++a) {
        auto lhs = lie_bracket_at(db[a], L, p0);
        std::vector<double> ch(n, 0.0), cv(n, 0.0);
        for (int i = 0; i < n; ++i) ch[i] = -LE(a, i);
        rep.residuals[5] = std::max(rep.residuals[5], resid(lhs, assemble(ch, cv)));
    }

    // (7) [pbar_a, L] = pbar_a - L(E_a^i) d/dy^i
    for (int a = 0; a < m; ++a) {
        auto lhs = lie_bracket_at(pb[a], L, p0);
        std::vector<double> ch(n, 0.0), cv(n, 0.0);
        for (int i = 0; i < n; ++i) cv[i] = E(a, i) - LE(a, i);
        rep.residuals[6] = std::max(rep.residuals[6], resid(lhs, assemble(ch, cv)));
    }

    // (8) [xi,xi] = [L,L] = [xi,L] + xi = 0
    {
        auto xixi = lie_bracket_at(xi, xi, p0);
        auto LL = lie_bracket_at(L, L, p0);
        auto xiL = lie_bracket_at(xi, L, p0);
        auto xic = xi.components(p0);
        double r = 0.0, ralt = 0.0;
        for (size_t A = 0; A < xixi.size(); ++A) {
            r = std::max({r, std::abs(xixi[A]), std::abs(LL[A]), std::abs(xiL[A] + xic[A])});
            ralt = std::max(ralt, std::abs(xiL[A] - xic[A]));
        }
        rep.residuals[7] = r;
        double rprint = 0.0;
        for (size_t A = 0; A < xiL.size(); ++A) rprint = std::max(rprint, std::abs(xiL[A] + xic[A]));
        rep.item8_sign = rprint <= ralt ? +1 : -1;
        rep.item8_alt_residual = ralt;
    }

    return rep;
}

} // namespace ftb
