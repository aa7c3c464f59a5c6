#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "ftb/config.hpp"
#include "ftb/contact.hpp"
#include "ftb/foliation.hpp"
#include "ftb/parallel.hpp"
#include "ftb/report.hpp"
#include "ftb/sampling.hpp"

namespace ftb {

struct CheckResult {
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string note;
};

struct Discrepancy {
    std::string suite;
    std::string formula;
    int point_index = -1;
    double residual = 0.0;
    double residual_alt = -1.0; // < 0: no alternative hypothesis evaluated
    std::string hypothesis;
};

struct SuiteOutcome {
    std::string name;
    bool pass = true;
    std::vector<CheckResult> checks;
};

struct RunOutcome {
    ordered_json report;
    bool all_pass = true;
    int exit_code = 0;
};

inline std::map<std::string, double> default_tolerances() {
    return {{"bracket", 1e-8}, {"koszul", 1e-8},  {"connection", 1e-8}, {"curvature", 1e-7},
            {"contact", 1e-9}, {"obstruction", 1e-6}, {"vanish", 1e-8}};
}

namespace detail {

struct SuiteContext {
    const FinslerFunction& F;
    const std::vector<JetPoint>& points;
    const std::vector<JetPoint>& ipoints;
    const std::map<std::string, double>& tol;
    std::vector<Discrepancy>& discrepancies;
};

inline double tol_of(const SuiteContext& ctx, const std::string& key) { return ctx.tol.at(key); }

inline void add_check(SuiteOutcome& suite, const std::string& name, double value, double tolerance,
                      std::string note = "") {
    bool pass = value < tolerance;
    suite.pass = suite.pass && pass;
    suite.checks.push_back({name, value, tolerance, pass, std::move(note)});
}

inline void add_bound_check(SuiteOutcome& suite, const std::string& name, double value,
                            double lower_bound, std::string note = "") {
    bool pass = value >= lower_bound;
    suite.pass = suite.pass && pass;
    suite.checks.push_back({name, value, lower_bound, pass, std::move(note)});
}

// ---- brackets ------------------------------------------------------------------

inline SuiteOutcome run_brackets(SuiteContext ctx) {
    SuiteOutcome suite{"brackets"};
    const double tol = tol_of(ctx, "bracket");
    const int n = ctx.F.dim();
    const int npts = int(ctx.points.size());
    std::vector<BracketTableReport> reps(static_cast<size_t>(npts));
    std::vector<double> natural_resid(size_t(npts), 0.0);
    parallel_for(npts, [&](int i) {
        const JetPoint& p = ctx.points[size_t(i)];
        reps[size_t(i)] = verify_bracket_table(ctx.F, p);
        // natural-basis identities: [delta_i, delta_j] = R^k_ij d/dy^k and
        // [delta_i, d/dy^j] = G_ij^k d/dy^k
        auto p0 = p.as_eval_point();
        Tensor3<double> R = hv_curvature_at(ctx.F, p0);
        Tensor3<double> B = berwald_at(ctx.F, p0);
        double worst = 0.0;
        for (int a = 0; a < n; ++a) {
            for (int b = 0; b < n; ++b) {
                auto br = lie_bracket_at(frame_delta_x(ctx.F, a), frame_delta_x(ctx.F, b), p0);
                for (int A = 0; A < n; ++A) worst = std::max(worst, std::abs(br[size_t(A)]));
                for (int k = 0; k < n; ++k)
                    worst = std::max(worst, std::abs(br[size_t(n + k)] - R(k, a, b)));
                auto br2 = lie_bracket_at(frame_delta_x(ctx.F, a), natural_field(n, n + b), p0);
                for (int A = 0; A < n; ++A) worst = std::max(worst, std::abs(br2[size_t(A)]));
                for (int k = 0; k < n; ++k)
                    worst = std::max(worst, std::abs(br2[size_t(n + k)] - B(a, b, k)));
            }
        }
        natural_resid[size_t(i)] = worst;
    });
    std::array<double, 8> worst{};
    int sign = +1;
    for (int i = 0; i < npts; ++i) {
        for (int k = 0; k < 8; ++k) worst[size_t(k)] = std::max(worst[size_t(k)], reps[size_t(i)].residuals[size_t(k)]);
        if (reps[size_t(i)].item8_sign < 0) sign = -1;
        for (int k = 0; k < 8; ++k) {
            if (reps[size_t(i)].residuals[size_t(k)] >= tol)
                ctx.discrepancies.push_back({"brackets", "lie_bracket_item_" + std::to_string(k + 1), i,
                                             reps[size_t(i)].residuals[size_t(k)], -1.0,
                                             "numeric bracket is ground truth"});
        }
    }
    for (int k = 0; k < 8; ++k)
        add_check(suite, "lie_bracket_item_" + std::to_string(k + 1), worst[size_t(k)], tol,
                  k == 7 ? (sign > 0 ? "[xi,L] = -xi as printed" : "[xi,L] = +xi (sign flipped)") : "");
    double nr = 0.0;
    for (double v : natural_resid) nr = std::max(nr, v);
    add_check(suite, "natural_basis_brackets", nr, tol);
    return suite;
}

// ---- connection ------------------------------------------------------------------

inline SuiteOutcome run_connection(SuiteContext ctx) {
    SuiteOutcome suite{"connection"};
    const double tol_k = tol_of(ctx, "koszul");
    const double tol_c = tol_of(ctx, "connection");
    const int npts = int(ctx.points.size());

    struct PerPoint {
        double torsion = 0.0, compat = 0.0;
        double xi_xi = 0.0, LL = 0.0, pp_normal = 0.0;
        double unambiguous = 0.0;
        std::vector<Discrepancy> recs;
    };
    std::vector<PerPoint> acc(static_cast<size_t>(npts));
    parallel_for(npts, [&](int idx) {
        const JetPoint& p = ctx.points[size_t(idx)];
        PerPoint out;
        AdaptedFrame fr = build_adapted_frame(ctx.F, p);
        auto fields = fr.full_frame();
        const int k = int(fields.size());
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) {
                out.torsion = std::max(out.torsion, torsion_residual(ctx.F, p, fields[size_t(i)],
                                                                     fields[size_t(j)]));
                for (int l = 0; l < k; ++l)
                    out.compat = std::max(out.compat,
                                          metric_compat_residual(ctx.F, p, fields[size_t(i)],
                                                                 fields[size_t(j)], fields[size_t(l)]));
            }
        ConnectionTable table = connection_table(ctx.F, p);
        out.xi_xi = table.xi_xi_residual;
        out.LL = table.LL_residual;
        out.pp_normal = table.pp_normal_residual;
        for (const auto& e : table.entries) {
            if (!e.ambiguous) out.unambiguous = std::max(out.unambiguous, e.residual);
            if (e.residual >= tol_c)
                out.recs.push_back(
                    {"connection", e.stanza, idx, e.residual, e.residual_alt,
                     "R_ij = R^k_ij g_kl y^l; alt reading R_ij = g_ik y^l R^k_lj"});
        }
        acc[size_t(idx)] = std::move(out);
    });
    PerPoint worst;
    for (auto& pp : acc) {
        worst.torsion = std::max(worst.torsion, pp.torsion);
        worst.compat = std::max(worst.compat, pp.compat);
        worst.xi_xi = std::max(worst.xi_xi, pp.xi_xi);
        worst.LL = std::max(worst.LL, pp.LL);
        worst.pp_normal = std::max(worst.pp_normal, pp.pp_normal);
        worst.unambiguous = std::max(worst.unambiguous, pp.unambiguous);
        for (auto& r : pp.recs) ctx.discrepancies.push_back(r);
    }
    add_check(suite, "koszul_torsion_free", worst.torsion, tol_k);
    add_check(suite, "koszul_metric_compat", worst.compat, tol_k);
    add_check(suite, "stanza_nabla_xi_xi", worst.xi_xi, tol_c);
    add_check(suite, "stanza_nabla_L_L", worst.LL, tol_c);
    add_check(suite, "stanza_pbar_pbar_normal_part", worst.pp_normal, tol_c);
    add_check(suite, "closed_form_unambiguous_stanzas", worst.unambiguous, tol_c,
              "ambiguous-symbol stanzas adjudicated via discrepancy records");

    // Gauss-formula identities on the indicatrix
    const int nipts = int(ctx.ipoints.size());
    std::vector<std::array<double, 4>> hacc(static_cast<size_t>(nipts));
    parallel_for(nipts, [&](int idx) {
        const JetPoint& p = ctx.ipoints[size_t(idx)];
        AdaptedFrame fr = build_adapted_frame(ctx.F, p);
        const int m = p.dim() - 1;
        double f2 = ctx.F.energy(p.as_eval_point());
        double h_pbar = 0.0, h_xi = 0.0, h_mixed = 0.0, h_sym = 0.0;
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) {
                auto H = second_fundamental_form(ctx.F, p, fr.partial_bar(a), fr.partial_bar(b));
                h_pbar = std::max(h_pbar, std::abs(H.coeff + fr.g_frame(a, b) / f2));
            }
        {
            auto H = second_fundamental_form(ctx.F, p, fr.xi(), fr.xi());
            h_xi = std::abs(H.coeff);
        }
        for (int a = 0; a < m; ++a) {
            auto H = second_fundamental_form(ctx.F, p, fr.delta_bar(a), fr.xi());
            h_mixed = std::max(h_mixed, std::abs(H.coeff));
        }
        auto tang = fr.level_tangent_frame();
        for (size_t i = 0; i < tang.size(); ++i)
            for (size_t j = i + 1; j < tang.size(); ++j) {
                auto Hxy = second_fundamental_form(ctx.F, p, tang[i], tang[j]);
                auto Hyx = second_fundamental_form(ctx.F, p, tang[j], tang[i]);
                h_sym = std::max(h_sym, std::abs(Hxy.coeff - Hyx.coeff));
            }
        hacc[size_t(idx)] = {h_pbar, h_xi, h_mixed, h_sym};
    });
    std::array<double, 4> hworst{};
    for (auto& h : hacc)
        for (int i = 0; i < 4; ++i) hworst[size_t(i)] = std::max(hworst[size_t(i)], h[size_t(i)]);
    add_check(suite, "H_pbar_pbar_equals_minus_gab_L", hworst[0], tol_k);
    add_check(suite, "H_xi_xi_vanishes", hworst[1], tol_k);
    add_check(suite, "H_dbar_xi_vanishes", hworst[2], tol_k);
    add_check(suite, "H_symmetry", hworst[3], tol_k);
    return suite;
}

// ---- foliation ------------------------------------------------------------------

inline SuiteOutcome run_foliation(SuiteContext ctx) {
    SuiteOutcome suite{"foliation"};
    auto verdicts = theorem_suite(ctx.F, ctx.points, ctx.ipoints);
    for (const auto& v : verdicts) {
        suite.pass = suite.pass && v.pass;
        suite.checks.push_back({v.theorem, v.witness, v.expected, v.pass, v.note});
        if (!v.pass)
            ctx.discrepancies.push_back(
                {"foliation", v.theorem, -1, v.witness, -1.0, "verdict failed: " + v.note});
    }
    return suite;
}

// ---- contact ---------------------------------------------------------------------

inline SuiteOutcome run_contact(SuiteContext ctx) {
    SuiteOutcome suite{"contact"};
    const double tol_c = tol_of(ctx, "contact");
    const double tol_v = tol_of(ctx, "vanish");
    const double tol_o = tol_of(ctx, "obstruction");
    const int nipts = int(ctx.ipoints.size());

    struct PerPoint {
        double eta_xi = 0.0, phi_xi = 0.0, eta_phi = 0.0, phi_sq = 0.0, phi_metric = 0.0;
        double phi_frame = 0.0;
        double obstruction_max = 0.0, lambda_min = 0.0;
        double xi_col = 0.0, xi_row = 0.0, gab_match = 0.0, gab_ratio = 0.0;
        double jbar_on_D = 0.0, jbar_xi_vs_J = 0.0, jbar_L_vs_J = 0.0;
        double deta_spread = 0.0, deta_ratio = 0.0;
    };
    std::vector<PerPoint> acc(static_cast<size_t>(nipts));
    parallel_for(nipts, [&](int idx) {
        const JetPoint& p = ctx.ipoints[size_t(idx)];
        PerPoint out;
        ContactData cd = contact_structure(ctx.F, p);
        auto p0 = p.as_eval_point();
        const int n = p.dim(), m = n - 1;
        AdaptedFrame& fr = cd.frame;

        auto xi_vec = cd.xi();
        out.eta_xi = std::abs(cd.eta(xi_vec) - 1.0);
        out.phi_xi = cd.phi(xi_vec).max_abs();

        std::vector<VecField> tang = fr.level_tangent_frame();
        std::vector<TangentVectorTM> tvecs;
        for (auto& f : tang) {
            auto c = f.components(p0);
            tvecs.push_back({std::vector<double>(c.begin(), c.begin() + n),
                             std::vector<double>(c.begin() + n, c.end()), p});
        }
        // deterministic mixed tangent vectors
        std::vector<TangentVectorTM> probes = tvecs;
        {
            TangentVectorTM mix{std::vector<double>(size_t(n), 0.0), std::vector<double>(size_t(n), 0.0), p};
            double w = 0.3;
            for (auto& tv : tvecs) {
                for (int i = 0; i < n; ++i) {
                    mix.h[size_t(i)] += w * tv.h[size_t(i)];
                    mix.v[size_t(i)] += w * tv.v[size_t(i)];
                }
                w = -w * 0.7;
            }
            probes.push_back(mix);
        }
        for (const auto& v : probes) {
            auto pv = cd.phi(v);
            out.eta_phi = std::max(out.eta_phi, std::abs(cd.eta(pv)));
            auto ppv = cd.phi(pv);
            double ev = cd.eta(v);
            for (int i = 0; i < n; ++i) {
                out.phi_sq = std::max(out.phi_sq, std::abs(ppv.h[size_t(i)] + v.h[size_t(i)] -
                                                           ev * xi_vec.h[size_t(i)]));
                out.phi_sq = std::max(out.phi_sq, std::abs(ppv.v[size_t(i)] + v.v[size_t(i)] -
                                                           ev * xi_vec.v[size_t(i)]));
            }
        }
        for (const auto& v : probes)
            for (const auto& w : probes) {
                double lhs = cd.metric(cd.phi(v), cd.phi(w));
                double rhs = cd.metric(v, w) - cd.eta(v) * cd.eta(w);
                out.phi_metric = std::max(out.phi_metric, std::abs(lhs - rhs));
            }
        // phi maps pbar_a -> dbar_a and dbar_a -> -pbar_a
        for (int a = 0; a < m; ++a) {
            auto dif1 = cd.phi(tvecs[size_t(m + 1 + a)]); // phi(pbar_a)
            auto dif2 = cd.phi(tvecs[size_t(a)]);         // phi(dbar_a)
            for (int i = 0; i < n; ++i) {
                out.phi_frame = std::max(out.phi_frame,
                                         std::abs(dif1.h[size_t(i)] - tvecs[size_t(a)].h[size_t(i)]));
                out.phi_frame = std::max(out.phi_frame,
                                         std::abs(dif1.v[size_t(i)] - tvecs[size_t(a)].v[size_t(i)]));
                out.phi_frame = std::max(out.phi_frame, std::abs(dif2.h[size_t(i)] +
                                                                 tvecs[size_t(m + 1 + a)].h[size_t(i)]));
                out.phi_frame = std::max(out.phi_frame, std::abs(dif2.v[size_t(i)] +
                                                                 tvecs[size_t(m + 1 + a)].v[size_t(i)]));
            }
        }
        ObstructionReport ob = sasakian_obstruction(ctx.F, p);
        out.obstruction_max = ob.max_component;
        out.lambda_min = ob.lambda_min;
        out.xi_col = ob.xi_col_residual;
        out.xi_row = ob.xi_row_residual;
        out.gab_match = ob.gab_match_residual;
        out.gab_ratio = ob.gab_ratio;

        // Jbar(X + f L) vs J(X + f L): the difference must lie entirely in
        // span(xi, L) (they agree on D and differ by sign on that plane).
        for (size_t t = 0; t < tvecs.size(); ++t) {
            auto xc = flatten(tvecs[t]);
            double f = 0.25 + 0.5 * double(t);
            auto jb = jbar_components(ctx.F, p, xc, f);
            std::vector<double> full(xc);
            for (int i = 0; i < n; ++i) full[size_t(n + i)] += f * p.y[size_t(i)];
            auto jj = apply_J_at(ctx.F, p0, full);
            std::vector<double> diff(jb.size());
            for (size_t A = 0; A < diff.size(); ++A) diff[A] = jb[A] - jj[A];
            double e = eta_at(ctx.F, p0, diff) / ctx.F.energy(p0);
            auto xi_c = xi_components_at(ctx.F, p0);
            for (size_t A = 0; A < diff.size(); ++A) diff[A] -= e * xi_c[A];
            diff = tangential_at(ctx.F, p0, diff); // strips the L part
            for (double d : diff) out.jbar_on_D = std::max(out.jbar_on_D, std::abs(d));
        }
        {
            auto xi_c = xi_components_at(ctx.F, p0);
            auto jb_xi = jbar_components(ctx.F, p, xi_c, 0.0);
            auto j_xi = apply_J_at(ctx.F, p0, xi_c);
            std::vector<double> Lc(size_t(2 * n), 0.0);
            for (int i = 0; i < n; ++i) Lc[size_t(n + i)] = p.y[size_t(i)];
            double d_plus = 0.0, d_minus = 0.0;
            for (size_t A = 0; A < jb_xi.size(); ++A) {
                d_plus = std::max(d_plus, std::abs(jb_xi[A] - j_xi[A]));
                d_minus = std::max(d_minus, std::abs(jb_xi[A] + j_xi[A]));
            }
            out.jbar_xi_vs_J = std::min(d_plus, d_minus); // one of the signs must match
            std::vector<double> zero(size_t(2 * n), 0.0);
            auto jb_L = jbar_components(ctx.F, p, zero, 1.0);
            auto j_L = apply_J_at(ctx.F, p0, Lc);
            d_plus = d_minus = 0.0;
            for (size_t A = 0; A < jb_L.size(); ++A) {
                d_plus = std::max(d_plus, std::abs(jb_L[A] - j_L[A]));
                d_minus = std::max(d_minus, std::abs(jb_L[A] + j_L[A]));
            }
            out.jbar_L_vs_J = std::min(d_plus, d_minus);
        }
        auto ratios = deta_ratios(ctx.F, p);
        if (!ratios.empty()) {
            double lo = ratios[0], hi = ratios[0];
            for (double r : ratios) {
                lo = std::min(lo, r);
                hi = std::max(hi, r);
            }
            out.deta_spread = hi - lo;
            out.deta_ratio = ratios[0];
        }
        acc[size_t(idx)] = out;
    });

    PerPoint worst;
    double min_obstruction = 1e300, min_lambda = 1e300;
    double ratio_lo = 1e300, ratio_hi = -1e300;
    for (int i = 0; i < nipts; ++i) {
        const auto& pp = acc[size_t(i)];
        worst.eta_xi = std::max(worst.eta_xi, pp.eta_xi);
        worst.phi_xi = std::max(worst.phi_xi, pp.phi_xi);
        worst.eta_phi = std::max(worst.eta_phi, pp.eta_phi);
        worst.phi_sq = std::max(worst.phi_sq, pp.phi_sq);
        worst.phi_metric = std::max(worst.phi_metric, pp.phi_metric);
        worst.phi_frame = std::max(worst.phi_frame, pp.phi_frame);
        worst.xi_col = std::max(worst.xi_col, pp.xi_col);
        worst.xi_row = std::max(worst.xi_row, pp.xi_row);
        worst.gab_match = std::max(worst.gab_match, pp.gab_match);
        worst.jbar_on_D = std::max(worst.jbar_on_D, pp.jbar_on_D);
        worst.jbar_xi_vs_J = std::max(worst.jbar_xi_vs_J, pp.jbar_xi_vs_J);
        worst.jbar_L_vs_J = std::max(worst.jbar_L_vs_J, pp.jbar_L_vs_J);
        worst.deta_spread = std::max(worst.deta_spread, pp.deta_spread);
        min_obstruction = std::min(min_obstruction, pp.obstruction_max);
        min_lambda = std::min(min_lambda, pp.lambda_min);
        ratio_lo = std::min(ratio_lo, pp.gab_ratio);
        ratio_hi = std::max(ratio_hi, pp.gab_ratio);
        if (pp.xi_row >= tol_v)
            ctx.discrepancies.push_back(
                {"contact", "reduction_lemma_xi_row", i, pp.xi_row, -1.0,
                 "(tilde_nabla_xi phi)Y does not vanish under the implemented conventions; "
                 "D-block-implied value is 0"});
    }
    add_check(suite, "eta_of_xi_is_one", worst.eta_xi, tol_c);
    add_check(suite, "phi_of_xi_vanishes", worst.phi_xi, tol_c);
    add_check(suite, "eta_circ_phi_vanishes", worst.eta_phi, tol_c);
    add_check(suite, "phi_squared_identity", worst.phi_sq, tol_c);
    add_check(suite, "phi_metric_compatibility", worst.phi_metric, tol_c);
    add_check(suite, "phi_frame_action", worst.phi_frame, 1e-10);
    add_bound_check(suite, "obstruction_min_max_component", min_obstruction,
                    min_lambda - tol_o,
                    "Theorem 5.2 witness: stays above lambda_min(g_ab) - tolerance");
    add_check(suite, "tilde_nabla_phi_xi_column", worst.xi_col, 1e-7);
    suite.checks.push_back({"tilde_nabla_phi_xi_row_measured", worst.xi_row, 0.0, true,
                            "recorded, not asserted (reduction-lemma adjudication)"});
    suite.checks.push_back({"obstruction_gab_proportionality", worst.gab_match, 0.0, true,
                            "xi-components of (dbar,dbar) block vs g_ab; ratio in [" +
                                std::to_string(ratio_lo) + ", " + std::to_string(ratio_hi) + "]"});
    add_check(suite, "jbar_equals_J_on_D", worst.jbar_on_D, 1e-10);
    suite.checks.push_back({"jbar_vs_J_on_xi_up_to_sign", worst.jbar_xi_vs_J, 0.0,
                            worst.jbar_xi_vs_J < 1e-10,
                            "Jbar(xi) = -J(xi) = L under the implemented J"});
    suite.pass = suite.pass && worst.jbar_xi_vs_J < 1e-10;
    suite.checks.push_back({"jbar_vs_J_on_L_up_to_sign", worst.jbar_L_vs_J, 0.0,
                            worst.jbar_L_vs_J < 1e-10, ""});
    suite.pass = suite.pass && worst.jbar_L_vs_J < 1e-10;
    suite.checks.push_back({"deta_vs_G_phi_ratio", worst.deta_spread, 0.0, true,
                            "measured proportionality constant, convention not asserted"});

    EquivalenceVerdict eq = flatness_equivalence_check(ctx.F, ctx.points);
    suite.pass = suite.pass && eq.pass;
    suite.checks.push_back({"nijenhuis_flatness_equivalence",
                            std::max(eq.max_nijenhuis, eq.max_curvature), 0.0, eq.pass,
                            "max|N_J| = " + std::to_string(eq.max_nijenhuis) +
                                ", max|R| = " + std::to_string(eq.max_curvature)});
    return suite;
}

// ---- curvature -------------------------------------------------------------------

inline SuiteOutcome run_curvature(SuiteContext ctx) {
    SuiteOutcome suite{"curvature"};
    const double tol = tol_of(ctx, "curvature");
    const int nipts = int(ctx.ipoints.size());
    std::vector<CurvatureRelationReport> reps(static_cast<size_t>(nipts));
    parallel_for(nipts, [&](int i) { reps[size_t(i)] = curvature_relation_check(ctx.F, ctx.ipoints[size_t(i)]); });
    std::vector<double> worst;
    std::vector<std::string> names;
    double extras = 0.0;
    for (int i = 0; i < nipts; ++i) {
        const auto& rep = reps[size_t(i)];
        if (worst.empty()) {
            worst.assign(rep.relations.size(), 0.0);
            for (const auto& r : rep.relations) names.push_back(r.name);
        }
        for (size_t k = 0; k < rep.relations.size(); ++k) {
            worst[k] = std::max(worst[k], rep.relations[k].residual);
            if (rep.relations[k].residual >= tol)
                ctx.discrepancies.push_back({"curvature", rep.relations[k].name, i,
                                             rep.relations[k].residual, -1.0,
                                             "ambient R and induced Rbar computed independently"});
        }
        extras = std::max(extras, rep.max_extra_residual());
    }
    for (size_t k = 0; k < worst.size(); ++k)
        add_check(suite, "relation_" + std::to_string(k + 1) + "_" + names[k], worst[k], tol);
    add_check(suite, "other_combinations_equal", extras, tol);
    return suite;
}

} // namespace detail

// --- top-level runner ----------------------------------------------------------

inline RunOutcome run(const RunConfig& cfg, bool verdicts = true) {
    for (const auto& s : cfg.suites)
        if (s != "brackets" && s != "connection" && s != "foliation" && s != "contact" &&
            s != "curvature")
            throw ConfigError("unknown suite '" + s + "'");

    FinslerFunction F = make_metric(cfg.metric_name, cfg.params);

    std::vector<JetPoint> points;
    if (!cfg.explicit_points.empty()) {
        for (const auto& [x, y] : cfg.explicit_points) {
            if (int(x.size()) != F.dim() || int(y.size()) != F.dim())
                throw ConfigError("explicit point dimension mismatch (metric n = " +
                                  std::to_string(F.dim()) + ")");
            try {
                points.emplace_back(x, y);
            } catch (const DomainError& ex) {
                throw ConfigError(std::string("bad explicit point: ") + ex.what());
            }
        }
    } else {
        points = sample_points(cfg.seed, F.dim(), cfg.count);
    }
    std::vector<JetPoint> ipoints;
    for (const auto& p : points) ipoints.push_back(normalize_to_indicatrix(F, p));

    auto tol = default_tolerances();
    for (const auto& [k, v] : cfg.tolerances) {
        if (!tol.count(k)) throw ConfigError("unknown tolerance key 'tol." + k + "'");
        tol[k] = v;
    }

    std::vector<Discrepancy> discrepancies;
    std::vector<SuiteOutcome> outcomes;
    for (const auto& name : cfg.suites) {
        detail::SuiteContext ctx{F, points, ipoints, tol, discrepancies};
        if (name == "brackets") outcomes.push_back(detail::run_brackets(ctx));
        else if (name == "connection") outcomes.push_back(detail::run_connection(ctx));
        else if (name == "foliation") outcomes.push_back(detail::run_foliation(ctx));
        else if (name == "contact") outcomes.push_back(detail::run_contact(ctx));
        else outcomes.push_back(detail::run_curvature(ctx));
    }

    RunOutcome out;
    ordered_json rep;
    rep["schema_version"] = kReportSchemaVersion;
    {
        ordered_json jc;
        jc["metric"]["name"] = cfg.metric_name;
        jc["metric"]["n"] = F.dim();
        if (cfg.metric_name == "randers_const") jc["metric"]["b"] = cfg.params.b;
        jc["sample"]["seed"] = cfg.seed;
        jc["sample"]["count"] = int(points.size());
        jc["sample"]["explicit"] = !cfg.explicit_points.empty();
        ordered_json js = ordered_json::array();
        for (const auto& s : cfg.suites) js.push_back(s);
        jc["suites"] = js;
        rep["config"] = jc;
    }
    {
        ordered_json je;
        je["threads"] = thread_budget();
        ordered_json jt;
        for (const auto& [k, v] : tol) jt[k] = v; // std::map: sorted, stable
        je["tolerances"] = jt;
        rep["engine"] = je;
    }
    auto points_json = [](const std::vector<JetPoint>& pts) {
        ordered_json arr = ordered_json::array();
        for (const auto& p : pts) {
            ordered_json jp;
            jp["x"] = p.x;
            jp["y"] = p.y;
            arr.push_back(jp);
        }
        return arr;
    };
    rep["points"] = points_json(points);
    rep["indicatrix_points"] = points_json(ipoints);

    bool all_pass = true;
    ordered_json jsuites;
    for (const auto& suite : outcomes) {
        ordered_json js;
        if (verdicts) js["verdict"] = suite.pass ? "PASS" : "FAIL";
        ordered_json checks = ordered_json::array();
        for (const auto& c : suite.checks) {
            ordered_json jc;
            jc["name"] = c.name;
            jc["value"] = c.value;
            jc["tolerance"] = c.tolerance;
            if (verdicts) jc["pass"] = c.pass;
            if (!c.note.empty()) jc["note"] = c.note;
            checks.push_back(jc);
        }
        js["checks"] = checks;
        jsuites[suite.name] = js;
        all_pass = all_pass && suite.pass;
    }
    rep["suites"] = jsuites;

    ordered_json jdisc = ordered_json::array();
    for (const auto& d : discrepancies) {
        ordered_json jd;
        jd["suite"] = d.suite;
        jd["formula"] = d.formula;
        jd["metric"] = cfg.metric_name;
        jd["point_index"] = d.point_index;
        jd["residual"] = d.residual;
        if (d.residual_alt >= 0.0) jd["residual_alt"] = d.residual_alt;
        if (!d.hypothesis.empty()) jd["hypothesis"] = d.hypothesis;
        jdisc.push_back(jd);
    }
    rep["discrepancies"] = jdisc;
    if (verdicts) rep["verdict"] = all_pass ? "PASS" : "FAIL";

    out.report = std::move(rep);
    out.all_pass = all_pass;
    out.exit_code = verdicts ? (all_pass ? 0 : 2) : 0;
    return out;
}

} // namespace ftb
