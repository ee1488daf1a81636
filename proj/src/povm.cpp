#include "gaussdisturb/povm.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "gaussdisturb/entropy.hpp"
#include "gaussdisturb/quartic.hpp"

namespace gaussdisturb {

namespace {

/// State constants entering the phase-optimized objective
///   h(lam, mu) = [c1^2 (a+lam)(b+mu) + c2^2 (a+1/lam)(b+1/mu) - (c1 c2)^2]
///                / [(a+lam)(a+1/lam)(b+mu)(b+1/mu)],
/// lam = e^{2rA}, mu = e^{2rB}; the mutual information is -1/2 ln(1-h).
struct HParams {
    double a, b, c1s, c2s;

    static HParams from(const StandardFormCM& sf)
    {
        return HParams{sf.a, sf.b, sf.c1 * sf.c1, sf.c2 * sf.c2};
    }
};

double h_finite(const HParams& q, double lam, double mu)
{
    const double il = 1.0 / lam, im = 1.0 / mu;
    const double num = q.c1s * (q.a + lam) * (q.b + mu)
                     + q.c2s * (q.a + il) * (q.b + im) - q.c1s * q.c2s;
    const double den = (q.a + lam) * (q.a + il) * (q.b + mu) * (q.b + im);
    return num / den;
}

double h_lam_inf(const HParams& q, double mu)
{
    return q.c1s / (q.a * (q.b + 1.0 / mu));
}

double h_mu_inf(const HParams& q, double lam)
{
    return q.c1s / (q.b * (q.a + 1.0 / lam));
}

double h_hom_hom(const HParams& q) { return q.c1s / (q.a * q.b); }

double h_het_het(const HParams& q)
{
    const double pa = q.a + 1.0, pb = q.b + 1.0;
    return ((q.c1s + q.c2s) * pa * pb - q.c1s * q.c2s) / (pa * pa * pb * pb);
}

double ic_from_h(double h) { return -0.5 * std::log1p(-h); }

struct Candidate {
    double h = -1.0;
    double lam = 1.0, mu = 1.0;
    bool lam_inf = false, mu_inf = false;
    bool interior = false;
};

void consider(Candidate& best, const Candidate& c)
{
    if (c.h > best.h)
        best = c;
}

void consider_corners(const HParams& q, Candidate& best)
{
    consider(best, Candidate{h_het_het(q), 1.0, 1.0, false, false, false});
    consider(best, Candidate{h_hom_hom(q), 0.0, 0.0, true, true, false});
    consider(best, Candidate{h_lam_inf(q, 1.0), 0.0, 1.0, true, false, false});
    consider(best, Candidate{h_mu_inf(q, 1.0), 1.0, 0.0, false, true, false});
}

/// Stationary points along the heterodyne edges (one squeezing pinned at 0).
void consider_edges(const HParams& q, Candidate& best)
{
    {
        // lam = 1: quadratic in mu
        const double A = (1.0 + q.a) * (q.c1s - q.c2s * q.b * q.b) + q.c1s * q.c2s * q.b;
        const double B = 2.0 * q.b * (1.0 + q.a) * (q.c1s - q.c2s);
        const double C = (1.0 + q.a) * (q.c1s * q.b * q.b - q.c2s) - q.c1s * q.c2s * q.b;
        for (double mu : solve_quadratic(A, B, C))
            if (mu > 0.0)
                consider(best, Candidate{h_finite(q, 1.0, mu), 1.0, mu, false, false, false});
    }
    {
        // mu = 1: quadratic in lam
        const double A = (1.0 + q.b) * (q.c1s - q.c2s * q.a * q.a) + q.c1s * q.c2s * q.a;
        const double B = 2.0 * q.a * (1.0 + q.b) * (q.c1s - q.c2s);
        const double C = (1.0 + q.b) * (q.c1s * q.a * q.a - q.c2s) - q.c1s * q.c2s * q.a;
        for (double lam : solve_quadratic(A, B, C))
            if (lam > 0.0)
                consider(best, Candidate{h_finite(q, lam, 1.0), lam, 1.0, false, false, false});
    }
}

// --- stationarity system of the general case ------------------------------

/// dh/dlam = 0 as a quadratic in mu (coefficients at fixed lam).
void stationarity_mu_quadratic(const HParams& q, double lam, double& A, double& B,
                               double& C)
{
    const double al = (q.a + lam) * (q.a + lam);
    const double al1 = (q.a * lam + 1.0) * (q.a * lam + 1.0);
    A = q.c1s * al;
    B = q.c1s * q.b * al - q.c2s * q.b * al1 + q.c1s * q.c2s * q.a * (lam * lam - 1.0);
    C = -q.c2s * al1;
}

/// dh/dmu = 0 residual at (lam, mu).
double stationarity_residual(const HParams& q, double lam, double mu)
{
    const double bm = (q.b + mu) * (q.b + mu);
    const double bm1 = (q.b * mu + 1.0) * (q.b * mu + 1.0);
    return q.c1s * bm * lam * lam
         + (q.c1s * q.a * bm - q.c2s * q.a * bm1 + q.c1s * q.c2s * q.b * (mu * mu - 1.0)) * lam
         - q.c2s * bm1;
}

/// Positive root of dh/dlam = 0 in mu, or NaN when absent.
double stationary_mu(const HParams& q, double lam)
{
    double A, B, C;
    stationarity_mu_quadratic(q, lam, A, B, C);
    if (A <= 0.0)
        return std::numeric_limits<double>::quiet_NaN();
    const double disc = B * B - 4.0 * A * C;
    if (disc < 0.0)
        return std::numeric_limits<double>::quiet_NaN();
    const double root = std::sqrt(disc);
    const double p = -0.5 * (B + (B >= 0.0 ? root : -root));
    const double r1 = p / A;
    const double r2 = (p != 0.0) ? C / p : 0.0;
    if (r1 > 0.0)
        return r1;
    if (r2 > 0.0)
        return r2;
    return std::numeric_limits<double>::quiet_NaN();
}

/// Interior stationary points: scan the residual of the second
/// stationarity condition along the positive-root branch of the first,
/// over a log-spaced lam grid, then bisect each sign change.
void consider_interior_scan(const HParams& q, Candidate& best)
{
    constexpr int kGrid = 400;
    constexpr double kLogMax = 40.0;

    double prev_lam = 0.0, prev_res = 0.0;
    bool prev_ok = false;
    for (int k = 0; k < kGrid; ++k) {
        const double lam = std::exp(kLogMax * k / (kGrid - 1.0));
        const double mu = stationary_mu(q, lam);
        if (!std::isfinite(mu)) {
            prev_ok = false;
            continue;
        }
        const double res = stationarity_residual(q, lam, mu);
        if (res == 0.0)
            consider(best, Candidate{h_finite(q, lam, mu), lam, mu, false, false, true});
        else if (prev_ok && ((prev_res < 0.0) != (res < 0.0))) {
            double lo = prev_lam, hi = lam, flo = prev_res;
            for (int it = 0; it < 100; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double mmu = stationary_mu(q, mid);
                if (!std::isfinite(mmu))
                    break;
                const double fr = stationarity_residual(q, mid, mmu);
                if (fr == 0.0) {
                    lo = hi = mid;
                    break;
                }
                if ((fr < 0.0) == (flo < 0.0)) {
                    lo = mid;
                    flo = fr;
                } else {
                    hi = mid;
                }
            }
            const double lam_star = 0.5 * (lo + hi);
            const double mu_star = stationary_mu(q, lam_star);
            if (std::isfinite(mu_star))
                consider(best,
                         Candidate{h_finite(q, lam_star, mu_star), lam_star, mu_star,
                                   false, false, true});
        }
        prev_lam = lam;
        prev_res = res;
        prev_ok = true;
    }
}

// --- independent grid + refinement maximizer --------------------------------

template <typename F>
double golden_max(F&& f, double lo, double hi, double& xbest)
{
    constexpr double kInvPhi = 0.6180339887498949;
    double x1 = hi - kInvPhi * (hi - lo);
    double x2 = lo + kInvPhi * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 80 && (hi - lo) > 1e-14; ++it) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + kInvPhi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - kInvPhi * (hi - lo);
            f1 = f(x1);
        }
    }
    xbest = 0.5 * (lo + hi);
    return f(xbest);
}

double lam_of_u(double u) { return (1.0 + u) / (1.0 - u); }

Candidate grid_refined_max(const HParams& q)
{
    Candidate best;
    consider_corners(q, best);

    constexpr int kG = 41;
    constexpr double kUMax = 0.995;
    const auto hu = [&](double u1, double u2) {
        return h_finite(q, lam_of_u(u1), lam_of_u(u2));
    };

    double bu1 = 0.0, bu2 = 0.0, bh = -1.0;
    for (int i = 0; i < kG; ++i)
        for (int j = 0; j < kG; ++j) {
            const double u1 = kUMax * i / (kG - 1.0);
            const double u2 = kUMax * j / (kG - 1.0);
            const double h = hu(u1, u2);
            if (h > bh) {
                bh = h;
                bu1 = u1;
                bu2 = u2;
            }
        }

    const double cell = kUMax / (kG - 1.0);
    // coordinate-wise golden refinement in a trust box around the best cell
    for (int round = 0; round < 60; ++round) {
        const double before = bh;
        double x = bu1;
        bh = golden_max([&](double u) { return hu(u, bu2); },
                        std::max(0.0, bu1 - 2.0 * cell),
                        std::min(kUMax, bu1 + 2.0 * cell), x);
        bu1 = x;
        bh = golden_max([&](double u) { return hu(bu1, u); },
                        std::max(0.0, bu2 - 2.0 * cell),
                        std::min(kUMax, bu2 + 2.0 * cell), x);
        bu2 = x;
        if (bh - before < 1e-15)
            break;
    }
    // compass polish for diagonal ridges
    double step = 0.5 * cell;
    for (int it = 0; it < 80 && step > 1e-12; ++it) {
        bool moved = false;
        for (int dx = -1; dx <= 1; ++dx)
            for (int dy = -1; dy <= 1; ++dy) {
                if (dx == 0 && dy == 0)
                    continue;
                const double u1 = std::clamp(bu1 + dx * step, 0.0, kUMax);
                const double u2 = std::clamp(bu2 + dy * step, 0.0, kUMax);
                const double h = hu(u1, u2);
                if (h > bh) {
                    bh = h;
                    bu1 = u1;
                    bu2 = u2;
                    moved = true;
                }
            }
        if (!moved)
            step *= 0.6;
    }
    consider(best, Candidate{bh, lam_of_u(bu1), lam_of_u(bu2), false, false, true});
    return best;
}

// --- route helpers -----------------------------------------------------------

bool is_product_state(const StandardFormCM& sf)
{
    return sf.c1 <= 1e-12 * std::sqrt(sf.a * sf.b);
}

bool is_single_covariance(const StandardFormCM& sf)
{
    return std::abs(sf.c2) <= 1e-12 * std::max(1.0, sf.c1);
}

bool is_squeezed_thermal(const StandardFormCM& sf)
{
    const double c1s = sf.c1 * sf.c1, c2s = sf.c2 * sf.c2;
    return std::abs(c1s - c2s) <= 1e-12 * std::max(1.0, c1s);
}

bool is_symmetric_state(const StandardFormCM& sf)
{
    return std::abs(sf.a - sf.b) <= 1e-12 * sf.a;
}

Candidate symmetric_quartic_route(const StandardFormCM& sf)
{
    const HParams q = HParams::from(sf);
    const double a = sf.a;
    const double c1s = q.c1s, c2s = q.c2s;

    Candidate best;
    consider_corners(q, best);
    consider_edges(q, best);

    // stationarity along the symmetric line r_A = r_B reduces to a quartic
    // in lam = e^{2r}
    const double a4 = c1s;
    const double a3 = a * (c1s * c2s + 3.0 * c1s - a * a * c2s);
    const double a2 = 3.0 * a * a * (c1s - c2s);
    const double a1 = -a * (c1s * c2s + 3.0 * c2s - a * a * c1s);
    const double a0 = -c2s;
    for (double lam : solve_quartic(a4, a3, a2, a1, a0))
        if (lam > 1e-12)
            consider(best, Candidate{h_finite(q, lam, lam), lam, lam, false, false, true});
    return best;
}

Candidate general_scan_route(const StandardFormCM& sf)
{
    const HParams q = HParams::from(sf);
    Candidate best;
    consider_corners(q, best);
    consider_edges(q, best);
    consider_interior_scan(q, best);
    return best;
}

GaussianSeedPair seeds_from_candidate(const Candidate& c)
{
    GaussianSeedPair s;
    const auto fill = [](double lam, bool inf, double& r, double& theta, bool& hom) {
        if (inf) {
            hom = true;
            r = 0.0;
            theta = 0.5 * std::numbers::pi;
        } else {
            r = 0.5 * std::abs(std::log(lam));
            theta = (lam >= 1.0) ? 0.5 * std::numbers::pi : 0.0;
        }
    };
    fill(c.lam, c.lam_inf, s.rA, s.thetaA, s.homodyneA);
    fill(c.mu, c.mu_inf, s.rB, s.thetaB, s.homodyneB);
    return s;
}

void cross_check(double branch_ic, const HParams& q, double opt_tol, const char* where)
{
    const double oracle_ic = ic_from_h(grid_refined_max(q).h);
    if (std::abs(branch_ic - oracle_ic) > opt_tol)
        throw OptimizerDisagreement(std::string(where)
                                    + ": closed/stationarity route and grid oracle differ");
}

} // namespace

std::string branch_name(OptBranch b)
{
    switch (b) {
    case OptBranch::Product:
        return "product";
    case OptBranch::SingleCovariance:
        return "single-covariance";
    case OptBranch::SqueezedThermalHom:
        return "squeezed-thermal-homodyne";
    case OptBranch::SqueezedThermalHet:
        return "squeezed-thermal-heterodyne";
    case OptBranch::SymmetricQuartic:
        return "symmetric-quartic";
    case OptBranch::GeneralStationarity:
        return "general-stationarity";
    case OptBranch::Boundary:
        return "boundary";
    }
    return "unknown";
}

double phase_optimized_I4(const StandardFormCM& sf, double rA, double rB)
{
    const double lam = std::exp(2.0 * rA), mu = std::exp(2.0 * rB);
    const double c1s = sf.c1 * sf.c1, c2s = sf.c2 * sf.c2;
    if (c2s == 0.0)
        return c1s * (sf.a + lam) * (sf.b + mu);
    return c1s * (sf.a + lam) * (sf.b + mu)
         + c2s * (sf.a + 1.0 / lam) * (sf.b + 1.0 / mu);
}

MeasurementInvariants measurement_invariants(const StandardFormCM& sf,
                                             const GaussianSeedPair& seeds)
{
    if (seeds.homodyneA || seeds.homodyneB)
        throw DomainError("measurement_invariants: finite seeds required");
    const Mat4 g = to_cm(sf) + direct_sum(pure_seed_cm(seeds.rA, seeds.thetaA),
                                          pure_seed_cm(seeds.rB, seeds.thetaB));
    const Mat2 ap = block_A(g), bp = block_B(g), cp = block_C(g);
    const Mat2 j = symplectic_J();
    const Mat2 m = ap * j * cp * j * bp * j * transpose(cp) * j;
    return MeasurementInvariants{det(ap), det(bp), det(cp), trace(m)};
}

namespace {

/// u^T adj(M) u for symmetric positive definite 2x2 M.
double quad_adj2(const Mat2& m, double ux, double uy)
{
    return ux * ux * m(1, 1) - 2.0 * ux * uy * m(0, 1) + uy * uy * m(0, 0);
}

/// u4^T adj(M) u4 = det(M) u4^T M^{-1} u4 for positive definite 4x4 M.
double quad_adj4(const Mat4& m, const std::array<double, 4>& u)
{
    const Mat4 mi = inv(m);
    const double dm = det(m);
    double s = 0.0;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            s += u[i] * mi(i, j) * u[j];
    return dm * s;
}

std::array<double, 4> embed_mode_a(double ux, double uy) { return {ux, uy, 0.0, 0.0}; }
std::array<double, 4> embed_mode_b(double ux, double uy) { return {0.0, 0.0, ux, uy}; }

} // namespace

double classical_mi_at_seed(const StandardFormCM& sf, const GaussianSeedPair& seeds)
{
    require_physical(sf, "classical_mi_at_seed");
    if (seeds.rA < 0.0 || seeds.rB < 0.0)
        throw OutOfRange("classical_mi_at_seed: seed squeezings must be >= 0");

    const Mat4 g = to_cm(sf);
    const Mat2 blk_a = Mat2::diag(sf.a, sf.a);
    const Mat2 blk_b = Mat2::diag(sf.b, sf.b);

    if (!seeds.homodyneA && !seeds.homodyneB)
        return classical_mi_at_seed(sf, pure_seed_cm(seeds.rA, seeds.thetaA),
                                    pure_seed_cm(seeds.rB, seeds.thetaB));

    // direction of the diverging seed variance, U(theta) e1
    const double uax = std::cos(seeds.thetaA), uay = -std::sin(seeds.thetaA);
    const double ubx = std::cos(seeds.thetaB), uby = -std::sin(seeds.thetaB);

    if (seeds.homodyneA && seeds.homodyneB) {
        const double num = quad_adj2(blk_a, uax, uay) * quad_adj2(blk_b, ubx, uby);
        const Mat4 gi = inv(g);
        const auto p = embed_mode_a(uax, uay);
        const auto r = embed_mode_b(ubx, uby);
        double pp = 0.0, rr = 0.0, pr = 0.0;
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j) {
                pp += p[i] * gi(i, j) * p[j];
                rr += r[i] * gi(i, j) * r[j];
                pr += p[i] * gi(i, j) * r[j];
            }
        const double den = det(g) * (pp * rr - pr * pr);
        return std::max(0.0, 0.5 * std::log(num / den));
    }

    if (seeds.homodyneA) {
        const Mat2 gb = pure_seed_cm(seeds.rB, seeds.thetaB);
        const double num = quad_adj2(blk_a, uax, uay) * det(gb + blk_b);
        const Mat4 m = g + direct_sum(Mat2{}, gb);
        const double den = quad_adj4(m, embed_mode_a(uax, uay));
        return std::max(0.0, 0.5 * std::log(num / den));
    }

    const Mat2 ga = pure_seed_cm(seeds.rA, seeds.thetaA);
    const double num = det(ga + blk_a) * quad_adj2(blk_b, ubx, uby);
    const Mat4 m = g + direct_sum(ga, Mat2{});
    const double den = quad_adj4(m, embed_mode_b(ubx, uby));
    return std::max(0.0, 0.5 * std::log(num / den));
}

double classical_mi_at_seed(const StandardFormCM& sf, const Mat2& seed_a,
                            const Mat2& seed_b)
{
    require_physical(sf, "classical_mi_at_seed");
    for (const Mat2* s : {&seed_a, &seed_b}) {
        if (std::abs((*s)(0, 1) - (*s)(1, 0)) > 1e-9)
            throw NonPhysical("classical_mi_at_seed: seed CM not symmetric");
        if ((*s)(0, 0) <= 0.0 || det(*s) < 1.0 - kPhysicalityTol)
            throw NonPhysical("classical_mi_at_seed: seed CM not physical");
    }
    const Mat2 blk_a = Mat2::diag(sf.a, sf.a);
    const Mat2 blk_b = Mat2::diag(sf.b, sf.b);
    const double num = det(seed_a + blk_a) * det(seed_b + blk_b);
    const double den = det(to_cm(sf) + direct_sum(seed_a, seed_b));
    return std::max(0.0, 0.5 * std::log(num / den));
}

OptResult gaussian_classical_mi(const StandardFormCM& sf, double opt_tol)
{
    require_physical(sf, "gaussian_classical_mi");
    const HParams q = HParams::from(sf);

    if (is_product_state(sf))
        return OptResult{0.0, GaussianSeedPair::heterodyne(), OptBranch::Product};

    OptResult out;
    if (is_single_covariance(sf)) {
        out.value = 0.5 * std::log(sf.a * sf.b / (sf.a * sf.b - sf.c1 * sf.c1));
        out.seeds = GaussianSeedPair::double_homodyne(0.5 * std::numbers::pi, 0.5 * std::numbers::pi);
        out.branch = OptBranch::SingleCovariance;
    } else if (is_squeezed_thermal(sf)) {
        const double csq = sf.c1 * sf.c1;
        const double lhs = (sf.a + sf.b + 1.0) * (sf.a + sf.b + 1.0);
        const double rhs = sf.a * sf.b * (sf.a * sf.b - csq);
        if (lhs >= rhs) {
            out.value = 0.5 * std::log(sf.a * sf.b / (sf.a * sf.b - csq));
            out.seeds = GaussianSeedPair::double_homodyne(0.5 * std::numbers::pi, 0.5 * std::numbers::pi);
            out.branch = OptBranch::SqueezedThermalHom;
        } else {
            const double pab = (sf.a + 1.0) * (sf.b + 1.0);
            out.value = std::log(pab / (pab - csq));
            out.seeds = GaussianSeedPair::heterodyne();
            out.branch = OptBranch::SqueezedThermalHet;
        }
    } else if (is_symmetric_state(sf)) {
        const Candidate best = symmetric_quartic_route(sf);
        out.value = ic_from_h(best.h);
        out.seeds = seeds_from_candidate(best);
        out.branch = best.interior ? OptBranch::SymmetricQuartic : OptBranch::Boundary;
    } else {
        const Candidate best = general_scan_route(sf);
        out.value = ic_from_h(best.h);
        out.seeds = seeds_from_candidate(best);
        out.branch = best.interior ? OptBranch::GeneralStationarity : OptBranch::Boundary;
    }

    cross_check(out.value, q, opt_tol, "gaussian_classical_mi");
    return out;
}

OptResult gaussian_amid(const StandardFormCM& sf, double opt_tol)
{
    OptResult ic = gaussian_classical_mi(sf, opt_tol);
    ic.value = quantum_mutual_information(sf) - ic.value;
    return ic;
}

double classical_mi_opt_grid(const StandardFormCM& sf)
{
    require_physical(sf, "classical_mi_opt_grid");
    if (is_product_state(sf))
        return 0.0;
    return ic_from_h(grid_refined_max(HParams::from(sf)).h);
}

double classical_mi_opt_symmetric(const StandardFormCM& sf)
{
    require_physical(sf, "classical_mi_opt_symmetric");
    if (!is_symmetric_state(sf))
        throw DomainError("classical_mi_opt_symmetric: requires a = b");
    if (is_product_state(sf))
        return 0.0;
    return ic_from_h(symmetric_quartic_route(sf).h);
}

double classical_mi_opt_general(const StandardFormCM& sf)
{
    require_physical(sf, "classical_mi_opt_general");
    if (is_product_state(sf))
        return 0.0;
    return ic_from_h(general_scan_route(sf).h);
}

double sts_gamid_closed(double a, double nu_tilde)
{
    if (nu_tilde <= 0.0)
        throw OutOfRange("sts_gamid_closed: nu_tilde must be positive");
    const double a_min = std::max(nu_tilde, (1.0 + nu_tilde * nu_tilde) / (2.0 * nu_tilde));
    if (a < a_min - kPhysicalityTol)
        throw OutOfRange("sts_gamid_closed: a below admissible range");

    const double c = a - nu_tilde;
    const double ksq = a * a - c * c; // = nu_tilde (2a - nu_tilde)
    const double iq = 2.0 * entropy_F(a) - 2.0 * entropy_F(std::sqrt(std::max(ksq, 1.0)));

    const double split = 1.0 + a * (4.0 + a * (4.0 - 2.0 * a * nu_tilde + nu_tilde * nu_tilde));
    double ic;
    if (split >= 0.0)
        ic = std::log(a / std::sqrt(a * a - c * c));
    else {
        const double p = (a + 1.0) * (a + 1.0);
        ic = std::log(p / (p - c * c));
    }
    return iq - ic;
}

double sts_discord_closed(double a, double nu_tilde)
{
    if (nu_tilde <= 0.0)
        throw OutOfRange("sts_discord_closed: nu_tilde must be positive");
    const double a_min = std::max(nu_tilde, (1.0 + nu_tilde * nu_tilde) / (2.0 * nu_tilde));
    if (a < a_min - kPhysicalityTol)
        throw OutOfRange("sts_discord_closed: a below admissible range");
    if (a - nu_tilde <= 1e-12)
        return 0.0; // product limit
    const double nt = nu_tilde;
    const double k = std::sqrt(nt * (2.0 * a - nt));
    if (k <= 1.0 + 1e-12)
        throw OutOfRange("sts_discord_closed: singular on the pure-state line");
    const double t1 = (4.0 * a * (nt + 1.0) - 2.0 * nt * nt)
                    * std::atanh((a + 1.0) / (2.0 * a * nt + a - nt * nt));
    const double t2 = -4.0 * (a + 1.0) * k * std::atanh(1.0 / k);
    const double t3 = a * a * std::log((a + 1.0) / (a - 1.0));
    const double t4 = -std::log((a + 1.0) * (2.0 * a * nt - nt * nt - 1.0)
                                / ((a - 1.0) * (nt + 1.0) * (2.0 * a - nt + 1.0)));
    return (t1 + t2 + t3 + t4) / (2.0 * (1.0 + a));
}

namespace {

/// det of the conditional CM after measuring the second mode with seed
/// diag(1/w, w); w = e^{2r} with the p-quadrature squeezed for w > 1.
struct ConditionalDet {
    double la; // local covariance of the unmeasured mode
    double lb; // local covariance of the measured mode
    double c1s, c2s;

    double at(double w) const
    {
        return (la - c1s * w / (lb * w + 1.0)) * (la - c2s / (lb + w));
    }
    double at_w_zero() const { return la * (la - c2s / lb); }
    double at_w_inf() const { return (la - c1s / lb) * la; }
};

double discord_conditional_entropy(const ConditionalDet& cd, double& w_star,
                                   bool& boundary)
{
    const auto val = [&](double w) {
        return entropy_F(std::max(1.0, std::sqrt(cd.at(w))));
    };

    double best = val(1.0);
    w_star = 1.0;
    boundary = false;

    // stationary points of ln det as a quadratic in w
    const double pi1 = cd.la * cd.lb - cd.c1s;
    const double pi2 = cd.la * cd.lb - cd.c2s;
    const double alpha = cd.lb * cd.c2s * pi1 - cd.la * cd.c1s;
    const double beta = 2.0 * cd.la * cd.lb * (cd.c2s - cd.c1s);
    const double gamma = cd.la * cd.c2s - cd.lb * cd.c1s * pi2;
    for (double w : solve_quadratic(alpha, beta, gamma))
        if (w > 0.0) {
            const double v = val(w);
            if (v < best) {
                best = v;
                w_star = w;
            }
        }

    // homodyne limits; stationary candidates win ties
    constexpr double kTieMargin = 1e-12;
    const double v0 = entropy_F(std::max(1.0, std::sqrt(cd.at_w_zero())));
    if (v0 < best - kTieMargin) {
        best = v0;
        w_star = 0.0;
        boundary = true;
    }
    const double vinf = entropy_F(std::max(1.0, std::sqrt(cd.at_w_inf())));
    if (vinf < best - kTieMargin) {
        best = vinf;
        w_star = std::numeric_limits<double>::infinity();
        boundary = true;
    }

    // independent grid + golden refinement over t = tanh(r), w = (1+t)/(1-t)
    constexpr int kG = 161;
    constexpr double kTMax = 0.999999;
    double bt = 0.0, bv = val(1.0);
    for (int i = 0; i < kG; ++i) {
        const double t = -kTMax + 2.0 * kTMax * i / (kG - 1.0);
        const double v = val((1.0 + t) / (1.0 - t));
        if (v < bv) {
            bv = v;
            bt = t;
        }
    }
    const double cell = 2.0 * kTMax / (kG - 1.0);
    double tb = bt;
    const double refined = -golden_max(
        [&](double t) { return -val((1.0 + t) / (1.0 - t)); },
        std::max(-kTMax, bt - 2.0 * cell), std::min(kTMax, bt + 2.0 * cell), tb);
    if (refined < best - kTieMargin) {
        best = refined;
        w_star = (1.0 + tb) / (1.0 - tb);
        boundary = false;
    }
    return best;
}

} // namespace

OptResult gaussian_discord(const StandardFormCM& sf, MeasureDirection dir,
                           double opt_tol)
{
    require_physical(sf, "gaussian_discord");

    if (is_product_state(sf))
        return OptResult{0.0, GaussianSeedPair::heterodyne(), OptBranch::Product};

    ConditionalDet cd;
    double local;
    if (dir == MeasureDirection::left) {
        cd = ConditionalDet{sf.a, sf.b, sf.c1 * sf.c1, sf.c2 * sf.c2};
        local = sf.b;
    } else {
        cd = ConditionalDet{sf.b, sf.a, sf.c1 * sf.c1, sf.c2 * sf.c2};
        local = sf.a;
    }

    double w_star = 1.0;
    bool boundary = false;
    const double cond = discord_conditional_entropy(cd, w_star, boundary);

    OptResult out;
    out.value = entropy_F(local) - state_entropy(sf) + cond;
    if (out.value < 0.0 && out.value > -1e-12)
        out.value = 0.0;

    GaussianSeedPair s;
    const bool sts = is_squeezed_thermal(sf) && !is_single_covariance(sf);
    if (boundary) {
        out.branch = OptBranch::Boundary;
        s.homodyneA = s.homodyneB = false;
        const bool inf_side = std::isinf(w_star);
        if (dir == MeasureDirection::left) {
            s.homodyneB = true;
            s.thetaB = inf_side ? 0.5 * std::numbers::pi : 0.0;
        } else {
            s.homodyneA = true;
            s.thetaA = inf_side ? 0.5 * std::numbers::pi : 0.0;
        }
    } else {
        out.branch = (sts && std::abs(w_star - 1.0) <= 1e-9)
            ? OptBranch::SqueezedThermalHet
            : OptBranch::GeneralStationarity;
        const double r = 0.5 * std::abs(std::log(w_star));
        const double theta = (w_star >= 1.0) ? 0.5 * std::numbers::pi : 0.0;
        if (dir == MeasureDirection::left) {
            s.rB = r;
            s.thetaB = theta;
        } else {
            s.rA = r;
            s.thetaA = theta;
        }
    }
    out.seeds = s;

    // cross-check against the closed form on the symmetric squeezed
    // thermal family, away from its pure-state singularity
    if (sts && is_symmetric_state(sf)) {
        const double nt = sf.a - sf.c1;
        const double ksq = nt * (2.0 * sf.a - nt);
        if (nt > 0.0 && ksq > 1.0 + 1e-6) {
            const double closed = sts_discord_closed(sf.a, nt);
            if (std::abs(closed - out.value) > opt_tol)
                throw OptimizerDisagreement(
                    "gaussian_discord: numeric optimum disagrees with closed form");
        }
    }
    return out;
}

double two_way_discord(const StandardFormCM& sf, double opt_tol)
{
    return std::max(gaussian_discord(sf, MeasureDirection::left, opt_tol).value,
                    gaussian_discord(sf, MeasureDirection::right, opt_tol).value);
}

} // namespace gaussdisturb
