#include "gaussdisturb/fock.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gaussdisturb/ddouble.hpp"
#include "gaussdisturb/entropy.hpp"

namespace gaussdisturb {

namespace {

constexpr int kDirectEngineMaxCutoff = 256;  // beyond this, full recursion
constexpr int kMaterializeMaxCutoff = 4096;  // matrix storage guard
constexpr double kEntryClampTol = 1e-12;
constexpr double kEntryFatalTol = 1e-8;
constexpr double kCancellationFlag = 1e-6;

struct NeumaierSum {
    double s = 0.0;
    double c = 0.0;

    void add(double x)
    {
        const double t = s + x;
        if (std::abs(s) >= std::abs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }

    double value() const { return s + c; }
};

/// Constants of one factor of the photon-number generating function,
/// psi_j(s, t) = C + P s + R t + K s t after shifting to lambda = 1 + s:
/// C = [(a+1)(b+1) - c^2]/4, P = [(a-1)(b+1) - c^2]/4,
/// R = [(a+1)(b-1) - c^2]/4, K = [(a-1)(b-1) - c^2]/4.
struct Kernel {
    double K = 0.0;
    double C = 1.0;
    double P = 0.0;
    double R = 0.0;

    static Kernel from(double a, double b, double csq)
    {
        Kernel k;
        k.K = 0.25 * ((a - 1.0) * (b - 1.0) - csq);
        k.C = 0.25 * ((a + 1.0) * (b + 1.0) - csq);
        k.P = 0.25 * ((a - 1.0) * (b + 1.0) - csq);
        k.R = 0.25 * ((a + 1.0) * (b - 1.0) - csq);
        return k;
    }
};

bool state_is_squeezed_thermal(const StandardFormCM& sf)
{
    const double c1s = sf.c1 * sf.c1, c2s = sf.c2 * sf.c2;
    return std::abs(c1s - c2s) <= 1e-12 * std::max(1.0, c1s);
}

// --- literal series forms (small-index reference) ---------------------------
//
// The printed series for the factor coefficients and for the simplified
// squeezed thermal entry alternate in sign with terms that can exceed the
// result by tens of orders of magnitude at large indices, so they serve
// as a cross-check at small indices while the production tables come from
// the exact recurrences of the generating-function factors below.

struct LnFactTable {
    std::vector<double> v;

    explicit LnFactTable(int n) : v(static_cast<std::size_t>(n) + 1)
    {
        for (int k = 0; k <= n; ++k)
            v[k] = std::lgamma(static_cast<double>(k) + 1.0);
    }

    double operator[](int k) const { return v[k]; }
};

int sign_of(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

bool apply_power(double ln_abs_base, int sgn_base, int k, double& ln_abs, int& sgn)
{
    if (k == 0)
        return true;
    if (sgn_base == 0)
        return false;
    ln_abs += k * ln_abs_base;
    if (sgn_base < 0 && (k & 1))
        sgn = -sgn;
    return true;
}

/// Sums signed log-magnitude terms with the maximum factored out.
struct TermAccumulator {
    std::vector<double> ln_abs;
    std::vector<int> sgn;

    void clear()
    {
        ln_abs.clear();
        sgn.clear();
    }

    void push(double l, int s)
    {
        ln_abs.push_back(l);
        sgn.push_back(s);
    }

    void evaluate(double& value, double& abs_value) const
    {
        if (ln_abs.empty()) {
            value = 0.0;
            abs_value = 0.0;
            return;
        }
        const double lmax = *std::max_element(ln_abs.begin(), ln_abs.end());
        if (!std::isfinite(lmax)) {
            value = 0.0;
            abs_value = 0.0;
            return;
        }
        NeumaierSum acc;
        double abs_acc = 0.0;
        for (std::size_t i = 0; i < ln_abs.size(); ++i) {
            const double t = std::exp(ln_abs[i] - lmax);
            acc.add(sgn[i] > 0 ? t : -t);
            abs_acc += t;
        }
        const double scale = std::exp(lmax);
        value = acc.value() * scale;
        abs_value = abs_acc * scale;
    }
};

/// p(m,n) = sum_j (m+n-j)! / (j! (m-j)! (n-j)!) P^{m-j} R^{n-j} (-KC)^j / C^{m+n+1}
std::pair<double, double> sts_entry_series_impl(const Kernel& k, int m, int n)
{
    static thread_local TermAccumulator acc;
    static thread_local std::vector<double> lf_cache;
    const int need = m + n + 1;
    if (static_cast<int>(lf_cache.size()) < need + 1) {
        lf_cache.resize(need + 1);
        for (int i = 0; i <= need; ++i)
            lf_cache[i] = std::lgamma(static_cast<double>(i) + 1.0);
    }
    acc.clear();
    const double y = -k.K * k.C;
    const double lnP = k.P != 0.0 ? std::log(std::abs(k.P)) : 0.0;
    const double lnR = k.R != 0.0 ? std::log(std::abs(k.R)) : 0.0;
    const double lnY = y != 0.0 ? std::log(std::abs(y)) : 0.0;
    const double lnC = std::log(k.C);
    const int sp = sign_of(k.P), sr = sign_of(k.R), sy = sign_of(y);
    for (int j = 0; j <= std::min(m, n); ++j) {
        double l = lf_cache[m + n - j] - lf_cache[j] - lf_cache[m - j]
                 - lf_cache[n - j] - (m + n + 1) * lnC;
        int s = 1;
        if (!apply_power(lnP, sp, m - j, l, s))
            continue;
        if (!apply_power(lnR, sr, n - j, l, s))
            continue;
        if (!apply_power(lnY, sy, j, l, s))
            continue;
        acc.push(l, s);
    }
    double value = 0.0, abs_value = 0.0;
    acc.evaluate(value, abs_value);
    return {value, abs_value};
}

/// Q(alpha,beta)/(alpha! beta!) = sum_l (2s)!/(s! l! (alpha-l)! (beta-l)! 4^s)
///   P^{alpha-l} R^{beta-l} (-KC)^l / C^{alpha+beta+1/2},  s = alpha+beta-l.
std::pair<double, double> factor_series_impl(const Kernel& k, int alpha, int beta)
{
    static thread_local TermAccumulator acc;
    const LnFactTable lf(2 * (alpha + beta) + 2);
    acc.clear();
    const double y = -k.K * k.C;
    const double lnP = k.P != 0.0 ? std::log(std::abs(k.P)) : 0.0;
    const double lnR = k.R != 0.0 ? std::log(std::abs(k.R)) : 0.0;
    const double lnY = y != 0.0 ? std::log(std::abs(y)) : 0.0;
    const double lnC = std::log(k.C);
    const double ln4 = std::log(4.0);
    const int sp = sign_of(k.P), sr = sign_of(k.R), sy = sign_of(y);
    for (int l = 0; l <= std::min(alpha, beta); ++l) {
        const int s = alpha + beta - l;
        double ln = lf[2 * s] - lf[s] - lf[l] - lf[alpha - l] - lf[beta - l]
                  - s * ln4 - (alpha + beta + 0.5) * lnC;
        int sg = 1;
        if (!apply_power(lnP, sp, alpha - l, ln, sg))
            continue;
        if (!apply_power(lnR, sr, beta - l, ln, sg))
            continue;
        if (!apply_power(lnY, sy, l, ln, sg))
            continue;
        acc.push(ln, sg);
    }
    double value = 0.0, abs_value = 0.0;
    acc.evaluate(value, abs_value);
    return {value, abs_value};
}

// --- factor coefficient tables by exact recurrence ---------------------------
//
// phi = psi^{-1/2} obeys psi phi_s + (1/2) psi_s phi = 0. The tables hold
// the Taylor coefficients with the alternating sign absorbed, matching the
// per-factor weights of the distribution convolution, so
//   C a q(a,b) = P (a-1/2) q(a-1,b) + R a q(a,b-1) - K (a-1/2) q(a-1,b-1)
// with q(0,0) = C^{-1/2}; the squeezed thermal case uses psi u = 1 directly.

void factor_table(const Kernel& k, int n, std::vector<double>& q)
{
    const std::size_t dim = static_cast<std::size_t>(n) + 1;
    q.assign(dim * dim, 0.0);
    q[0] = 1.0 / std::sqrt(k.C);
    for (int be = 1; be <= n; ++be)
        q[be] = k.R * (be - 0.5) * q[be - 1] / (k.C * be);
    for (int al = 1; al <= n; ++al) {
        const double f = al - 0.5;
        for (int be = 0; be <= n; ++be) {
            double v = k.P * f * q[(al - 1) * dim + be];
            if (be >= 1)
                v += k.R * al * q[al * dim + be - 1]
                   - k.K * f * q[(al - 1) * dim + be - 1];
            q[al * dim + be] = v / (k.C * al);
        }
    }
}

void factor_table_xd(const Kernel& k, int n, std::vector<XDouble>& q)
{
    using namespace ddops;
    const std::size_t dim = static_cast<std::size_t>(n) + 1;
    q.assign(dim * dim, XDouble{});
    const XDouble xC = XDouble::from(k.C);
    q[0] = div(XDouble::from(1.0), sqrt(xC));
    for (int be = 1; be <= n; ++be)
        q[be] = div(mul(q[be - 1], k.R * (be - 0.5)), mul(xC, static_cast<double>(be)));
    for (int al = 1; al <= n; ++al) {
        const double f = al - 0.5;
        for (int be = 0; be <= n; ++be) {
            XDouble v = mul(q[(al - 1) * dim + be], k.P * f);
            if (be >= 1) {
                v = add(v, mul(q[al * dim + be - 1], k.R * al));
                v = add(v, mul(q[(al - 1) * dim + be - 1], -k.K * f));
            }
            q[al * dim + be] = div(v, mul(xC, static_cast<double>(al)));
        }
    }
}

/// Squeezed thermal branch: p(m,n) are the alternating-sign coefficients
/// of 1/psi, p(m,n) = [P p(m-1,n) + R p(m,n-1) - K p(m-1,n-1)] / C.
void sts_table(const Kernel& k, int n, std::vector<double>& p)
{
    const std::size_t dim = static_cast<std::size_t>(n) + 1;
    p.assign(dim * dim, 0.0);
    p[0] = 1.0 / k.C;
    for (int be = 1; be <= n; ++be)
        p[be] = k.R * p[be - 1] / k.C;
    for (int m = 1; m <= n; ++m)
        for (int be = 0; be <= n; ++be) {
            double v = k.P * p[(m - 1) * dim + be];
            if (be >= 1)
                v += k.R * p[m * dim + be - 1] - k.K * p[(m - 1) * dim + be - 1];
            p[m * dim + be] = v / k.C;
        }
}

// --- cutoff policy ----------------------------------------------------------

double marginal_ratio(double mean_photons)
{
    return mean_photons <= 0.0 ? 0.0 : mean_photons / (1.0 + mean_photons);
}

/// Mass outside the [0..N]^2 box is bounded by the two marginal tails.
double box_tail_bound(double b1, double b2, int cutoff)
{
    const double r1 = marginal_ratio(b1);
    const double r2 = marginal_ratio(b2);
    double t = 0.0;
    if (r1 > 0.0)
        t += std::exp((cutoff + 1) * std::log(r1));
    if (r2 > 0.0)
        t += std::exp((cutoff + 1) * std::log(r2));
    return t;
}

int choose_cutoff(double b1, double b2, double tail_tol, int max_cutoff)
{
    int n = 16;
    while (box_tail_bound(b1, b2, n) > tail_tol && 2 * n <= max_cutoff)
        n *= 2;
    if (box_tail_bound(b1, b2, n) > tail_tol) {
        if (n < max_cutoff && box_tail_bound(b1, b2, max_cutoff) <= tail_tol)
            return max_cutoff;
        throw ConvergenceError(
            "photon distribution: cutoff cap reached before tail tolerance");
    }
    return std::min(n, max_cutoff);
}

// --- direct (reference) build -----------------------------------------------

std::vector<double> build_direct(const StandardFormCM& sf, int cutoff,
                                 bool force_general)
{
    const double c1s = sf.c1 * sf.c1;
    const double c2s = sf.c2 * sf.c2;
    const int n = cutoff;
    const std::size_t dim = static_cast<std::size_t>(n) + 1;

    if (!force_general && state_is_squeezed_thermal(sf)) {
        std::vector<double> p;
        sts_table(Kernel::from(sf.a, sf.b, c1s), n, p);
        return p;
    }

    const Kernel k1 = Kernel::from(sf.a, sf.b, c1s);
    const Kernel k2 = Kernel::from(sf.a, sf.b, c2s);
    std::vector<double> q1, q2;
    factor_table(k1, n, q1);
    factor_table(k2, n, q2);

    std::vector<double> p(dim * dim, 0.0), cond(dim * dim, 0.0);
    // p(m,n) = sum_{al<=m, be<=nn} q1(al,be) q2(m-al, nn-be)
    for (int m = 0; m <= n; ++m)
        for (int nn = 0; nn <= n; ++nn) {
            NeumaierSum v;
            double av = 0.0;
            for (int al = 0; al <= m; ++al) {
                const double* row1 = &q1[al * dim];
                const double* row2 = &q2[(m - al) * dim + nn];
                for (int be = 0; be <= nn; ++be) {
                    const double t = row1[be] * row2[-be];
                    v.add(t);
                    av += std::abs(t);
                }
            }
            p[m * dim + nn] = v.value();
            cond[m * dim + nn] = av;
        }

    // extended-precision pass over cancellation-flagged entries
    bool have_xd = false;
    std::vector<XDouble> xq1, xq2;
    for (int m = 0; m <= n; ++m)
        for (int nn = 0; nn <= n; ++nn) {
            const double v = p[m * dim + nn];
            const double cd = cond[m * dim + nn];
            const bool flagged = v < -kEntryClampTol
                              || (cd > 1e-18 && std::abs(v) < kCancellationFlag * cd);
            if (!flagged)
                continue;
            if (!have_xd) {
                factor_table_xd(k1, n, xq1);
                factor_table_xd(k2, n, xq2);
                have_xd = true;
            }
            XDouble s{};
            for (int al = 0; al <= m; ++al)
                for (int be = 0; be <= nn; ++be)
                    s = ddops::add(s, ddops::mul(xq1[al * dim + be],
                                                 xq2[(m - al) * dim + (nn - be)]));
            p[m * dim + nn] = s.to_double();
        }
    return p;
}

// --- full recursion engine ----------------------------------------------------

/// Taylor coefficients of W(s,t)^{-1/2} around (0,0), W = psi_1 psi_2 of
/// bidegree (2,2); probabilities are the coefficients with the alternating
/// signs removed. O(1) work per entry, three-row memory.
class WRecursion {
public:
    WRecursion(const Kernel& k1, const Kernel& k2)
    {
        w_[0][0] = k1.C * k2.C;
        w_[1][0] = k1.C * k2.P + k1.P * k2.C;
        w_[0][1] = k1.C * k2.R + k1.R * k2.C;
        w_[2][0] = k1.P * k2.P;
        w_[0][2] = k1.R * k2.R;
        w_[1][1] = k1.C * k2.K + k1.K * k2.C + k1.P * k2.R + k1.R * k2.P;
        w_[2][1] = k1.P * k2.K + k1.K * k2.P;
        w_[1][2] = k1.R * k2.K + k1.K * k2.R;
        w_[2][2] = k1.K * k2.K;
    }

    template <typename Sink>
    void run(int cutoff, Sink&& sink) const
    {
        const std::size_t dim = static_cast<std::size_t>(cutoff) + 1;
        std::vector<double> rm2(dim, 0.0), rm1(dim, 0.0), cur(dim, 0.0);
        const double w00 = w_[0][0];

        cur[0] = 1.0 / std::sqrt(w00);
        for (int nn = 1; nn <= cutoff; ++nn) {
            double v = (nn - 0.5) * w_[0][1] * cur[nn - 1];
            if (nn >= 2)
                v -= (nn - 1.0) * w_[0][2] * cur[nn - 2];
            cur[nn] = v / (nn * w00);
        }
        sink(0, cur);
        rm1 = cur;
        std::fill(cur.begin(), cur.end(), 0.0);

        for (int m = 1; m <= cutoff; ++m) {
            const double f1 = m - 0.5;
            const double f2 = m - 1.0;
            const double inv = 1.0 / (m * w00);
            for (int nn = 0; nn <= cutoff; ++nn) {
                double v = f1 * w_[1][0] * rm1[nn];
                if (nn >= 1)
                    v += m * w_[0][1] * cur[nn - 1] - f1 * w_[1][1] * rm1[nn - 1];
                if (nn >= 2)
                    v += -m * w_[0][2] * cur[nn - 2] + f1 * w_[1][2] * rm1[nn - 2];
                if (m >= 2) {
                    v -= f2 * w_[2][0] * rm2[nn];
                    if (nn >= 1)
                        v += f2 * w_[2][1] * rm2[nn - 1];
                    if (nn >= 2)
                        v -= f2 * w_[2][2] * rm2[nn - 2];
                }
                cur[nn] = v * inv;
            }
            sink(m, cur);
            std::swap(rm2, rm1);
            std::swap(rm1, cur);
        }
    }

private:
    double w_[3][3] = {};
};

double thermal_marginal(double mean_photons, int m)
{
    if (mean_photons <= 0.0)
        return m == 0 ? 1.0 : 0.0;
    const double r = mean_photons / (1.0 + mean_photons);
    return std::exp(m * std::log(r)) / (1.0 + mean_photons);
}

struct JointStats {
    double mass = 0.0;
    double entropy = 0.0;
    int cutoff = 0;
};

/// Streams the recursion rows, accumulating mass and entropy; each row sum
/// is checked against the exact thermal marginal to catch any error growth
/// in the recurrence.
JointStats recursion_stats(const StandardFormCM& sf, int cutoff,
                           std::vector<double>* matrix_out)
{
    const Kernel k1 = Kernel::from(sf.a, sf.b, sf.c1 * sf.c1);
    const Kernel k2 = Kernel::from(sf.a, sf.b, sf.c2 * sf.c2);
    const WRecursion rec(k1, k2);

    const double b1 = 0.5 * (sf.a - 1.0);
    const double b2 = 0.5 * (sf.b - 1.0);
    const double r2 = marginal_ratio(b2);
    const double col_tail = r2 > 0.0 ? std::exp((cutoff + 1) * std::log(r2)) : 0.0;

    NeumaierSum mass, ent;
    const std::size_t dim = static_cast<std::size_t>(cutoff) + 1;
    if (matrix_out)
        matrix_out->assign(dim * dim, 0.0);

    rec.run(cutoff, [&](int m, const std::vector<double>& row) {
        NeumaierSum row_mass;
        for (int nn = 0; nn <= cutoff; ++nn) {
            double v = row[nn];
            if (v < -kEntryFatalTol)
                throw PrecisionError("photon distribution recursion: entry below -1e-8");
            if (v <= 0.0)
                v = 0.0;
            else {
                row_mass.add(v);
                ent.add(-v * std::log(v));
            }
            if (matrix_out)
                (*matrix_out)[m * dim + nn] = v;
        }
        const double rs = row_mass.value();
        const double expect = thermal_marginal(b1, m);
        const double slack = 1e-6 * expect + col_tail + 1e-13;
        if (rs > expect + slack || rs < expect - col_tail - slack)
            throw PrecisionError("photon distribution recursion: marginal drift");
        mass.add(rs);
    });
    return JointStats{mass.value(), ent.value(), cutoff};
}

bool engine_is_recursive(FockOptions::Engine e, int cutoff)
{
    switch (e) {
    case FockOptions::Engine::recursive:
        return true;
    case FockOptions::Engine::direct:
    case FockOptions::Engine::direct_general:
        return false;
    case FockOptions::Engine::automatic:
        return cutoff > kDirectEngineMaxCutoff;
    }
    return false;
}

} // namespace

namespace series {

std::pair<double, double> squeezed_thermal_entry(const StandardFormCM& sf, int m, int n)
{
    if (!state_is_squeezed_thermal(sf))
        throw DomainError("squeezed_thermal_entry: requires c1 = +-c2");
    return sts_entry_series_impl(Kernel::from(sf.a, sf.b, sf.c1 * sf.c1), m, n);
}

std::pair<double, double> factor_coefficient(const StandardFormCM& sf, int which,
                                             int alpha, int beta)
{
    const double csq = which == 1 ? sf.c1 * sf.c1 : sf.c2 * sf.c2;
    return factor_series_impl(Kernel::from(sf.a, sf.b, csq), alpha, beta);
}

} // namespace series

PhotonGenParams PhotonGenParams::from(const StandardFormCM& sf)
{
    PhotonGenParams p;
    p.B1 = 0.5 * (sf.a - 1.0);
    p.B2 = 0.5 * (sf.b - 1.0);
    p.D = 0.25 * (sf.c1 - sf.c2);
    p.Dbar = -0.25 * (sf.c1 + sf.c2);
    p.K1 = 0.25 * ((sf.a - 1.0) * (sf.b - 1.0) - sf.c1 * sf.c1);
    p.K2 = 0.25 * ((sf.a - 1.0) * (sf.b - 1.0) - sf.c2 * sf.c2);
    return p;
}

double JointPhotonDistribution::tail_entropy_bound() const
{
    if (tail_mass <= 0.0)
        return 0.0;
    return tail_mass * (std::log(1.0 / tail_mass) + cutoff);
}

JointPhotonDistribution joint_photon_distribution(const StandardFormCM& sf,
                                                  const FockOptions& opt)
{
    require_physical(sf, "joint_photon_distribution");
    if (!(opt.tail_tol > 0.0) || opt.tail_tol > 1e-4)
        throw OutOfRange("joint_photon_distribution: tail_tol must be in (0, 1e-4]");

    const double b1 = 0.5 * (sf.a - 1.0);
    const double b2 = 0.5 * (sf.b - 1.0);
    int cutoff = choose_cutoff(b1, b2, opt.tail_tol, opt.max_cutoff);

    JointPhotonDistribution dist;
    while (true) {
        if (cutoff > kMaterializeMaxCutoff)
            throw ConvergenceError(
                "joint_photon_distribution: cutoff too large to materialize");
        const std::size_t dim = static_cast<std::size_t>(cutoff) + 1;
        if (engine_is_recursive(opt.engine, cutoff)) {
            std::vector<double> matrix;
            recursion_stats(sf, cutoff, &matrix);
            dist.p = std::move(matrix);
        } else {
            dist.p = build_direct(sf, cutoff,
                                  opt.engine == FockOptions::Engine::direct_general);
        }
        dist.cutoff = cutoff;

        NeumaierSum mass;
        for (std::size_t i = 0; i < dim * dim; ++i) {
            double& v = dist.p[i];
            if (v < -kEntryFatalTol)
                throw PrecisionError(
                    "joint_photon_distribution: entry below -1e-8 after refinement");
            if (v < 0.0)
                v = 0.0;
            else
                mass.add(v);
        }
        dist.tail_mass = 1.0 - mass.value();
        if (dist.tail_mass <= opt.tail_tol)
            return dist;
        if (2 * cutoff > opt.max_cutoff)
            throw ConvergenceError(
                "joint_photon_distribution: captured mass below target at cutoff cap");
        cutoff *= 2;
    }
}

double shannon_entropy(const JointPhotonDistribution& dist)
{
    NeumaierSum ent;
    for (double v : dist.p)
        if (v > 0.0)
            ent.add(-v * std::log(v));
    return ent.value();
}

double tmsv_entanglement_entropy(double r)
{
    return entropy_F(std::cosh(2.0 * r));
}

MidResult mid(const StandardFormCM& sf, const FockOptions& opt)
{
    require_physical(sf, "mid");

    MidResult res;
    if (sf.a <= 1.0 + kPhysicalityTol || sf.b <= 1.0 + kPhysicalityTol) {
        // a vacuum marginal forces a product state; the Fock measurement
        // on the nontrivial mode leaves it invariant
        res.degenerate_marginal = true;
        res.value = 0.0;
        return res;
    }

    const double det_g = (sf.a * sf.b - sf.c1 * sf.c1) * (sf.a * sf.b - sf.c2 * sf.c2);
    const bool pure = std::abs(det_g - 1.0) <= 1e-9 * std::max(1.0, sf.a * sf.b)
                   && std::abs(sf.a - sf.b) <= 1e-9 * sf.a
                   && std::abs(sf.c1 + sf.c2) <= 1e-9 * std::max(1.0, sf.c1);
    if (pure && opt.allow_closed_form) {
        res.closed_form = true;
        res.value = tmsv_entanglement_entropy(0.5 * std::acosh(sf.a));
        return res;
    }

    const double b1 = 0.5 * (sf.a - 1.0);
    const double b2 = 0.5 * (sf.b - 1.0);
    const int cutoff = choose_cutoff(b1, b2, opt.tail_tol, opt.max_cutoff);

    double entropy = 0.0;
    if (engine_is_recursive(opt.engine, cutoff) && cutoff > kMaterializeMaxCutoff) {
        // streaming accumulation; the matrix never materializes
        const JointStats st = recursion_stats(sf, cutoff, nullptr);
        if (1.0 - st.mass > opt.tail_tol)
            throw ConvergenceError("mid: captured mass below target at cutoff cap");
        entropy = st.entropy;
        res.cutoff = st.cutoff;
        res.tail_mass = 1.0 - st.mass;
    } else {
        const JointPhotonDistribution dist = joint_photon_distribution(sf, opt);
        entropy = shannon_entropy(dist);
        res.cutoff = dist.cutoff;
        res.tail_mass = dist.tail_mass;
    }
    res.tail_entropy_bound = res.tail_mass > 0.0
        ? res.tail_mass * (std::log(1.0 / res.tail_mass) + res.cutoff)
        : 0.0;

    res.value = entropy - state_entropy(sf);
    if (res.value < 0.0) {
        if (res.value < -(res.tail_entropy_bound + 1e-9))
            throw PrecisionError("mid: negative disturbance beyond truncation budget");
        res.value = 0.0;
    }
    return res;
}

} // namespace gaussdisturb
