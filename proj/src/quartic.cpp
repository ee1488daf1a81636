#include "gaussdisturb/quartic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace gaussdisturb {

namespace {

double cbrt_signed(double x)
{
    return x >= 0.0 ? std::cbrt(x) : -std::cbrt(-x);
}

double eval_poly(const double* c, int deg, double x)
{
    double f = c[deg];
    for (int k = deg - 1; k >= 0; --k)
        f = f * x + c[k];
    return f;
}

double eval_dpoly(const double* c, int deg, double x)
{
    double f = deg * c[deg];
    for (int k = deg - 1; k >= 1; --k)
        f = f * x + k * c[k];
    return f;
}

double newton_polish(const double* c, int deg, double x)
{
    for (int it = 0; it < 8; ++it) {
        const double f = eval_poly(c, deg, x);
        const double df = eval_dpoly(c, deg, x);
        if (df == 0.0)
            break;
        const double step = f / df;
        const double nx = x - step;
        if (!std::isfinite(nx))
            break;
        if (std::abs(nx - x) <= 1e-15 * std::max(1.0, std::abs(nx))) {
            x = nx;
            break;
        }
        x = nx;
    }
    return x;
}

void sort_unique(std::vector<double>& r)
{
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end(),
                        [](double x, double y) {
                            return std::abs(x - y)
                                <= 1e-12 * std::max({1.0, std::abs(x), std::abs(y)});
                        }),
            r.end());
}

} // namespace

std::vector<double> solve_quadratic(double c2, double c1, double c0)
{
    const double scale = std::max({std::abs(c2), std::abs(c1), std::abs(c0)});
    if (scale == 0.0)
        return {};
    if (std::abs(c2) <= 1e-14 * scale) {
        if (std::abs(c1) <= 1e-14 * scale)
            return {};
        return {-c0 / c1};
    }
    const double disc = c1 * c1 - 4.0 * c2 * c0;
    if (disc < 0.0)
        return {};
    const double root = std::sqrt(disc);
    // stable pairing: avoid cancellation in the smaller root
    const double q = -0.5 * (c1 + (c1 >= 0.0 ? root : -root));
    std::vector<double> r;
    if (q != 0.0) {
        r.push_back(q / c2);
        r.push_back(c0 / q);
    } else {
        r.push_back(0.0);
        r.push_back(-c1 / c2);
    }
    sort_unique(r);
    return r;
}

std::vector<double> solve_cubic(double c3, double c2, double c1, double c0)
{
    const double scale = std::max({std::abs(c3), std::abs(c2), std::abs(c1), std::abs(c0)});
    if (scale == 0.0)
        return {};
    if (std::abs(c3) <= 1e-14 * scale)
        return solve_quadratic(c2, c1, c0);

    const double a2 = c2 / c3;
    const double a1 = c1 / c3;
    const double a0 = c0 / c3;
    const double q = a1 / 3.0 - a2 * a2 / 9.0;
    const double r = (a1 * a2 - 3.0 * a0) / 6.0 - a2 * a2 * a2 / 27.0;
    const double delta = q * q * q + r * r;

    std::vector<double> roots;
    if (delta > 0.0) {
        const double s1 = cbrt_signed(r + std::sqrt(delta));
        const double s2 = cbrt_signed(r - std::sqrt(delta));
        roots.push_back(s1 + s2 - a2 / 3.0);
    } else if (delta < 0.0) {
        const double theta = std::acos(std::clamp(r / std::sqrt(-q * q * q), -1.0, 1.0)) / 3.0;
        const double sq = std::sqrt(-q);
        roots.push_back(2.0 * sq * std::cos(theta) - a2 / 3.0);
        roots.push_back(2.0 * sq * std::cos(theta - 2.0 * std::numbers::pi / 3.0) - a2 / 3.0);
        roots.push_back(2.0 * sq * std::cos(theta + 2.0 * std::numbers::pi / 3.0) - a2 / 3.0);
    } else {
        const double s = cbrt_signed(r);
        roots.push_back(2.0 * s - a2 / 3.0);
        roots.push_back(-s - a2 / 3.0);
    }

    const double c[4] = {c0, c1, c2, c3};
    for (double& x : roots)
        x = newton_polish(c, 3, x);
    sort_unique(roots);
    return roots;
}

std::vector<double> solve_quartic(double c4, double c3, double c2, double c1,
                                  double c0)
{
    const double scale = std::max(
        {std::abs(c4), std::abs(c3), std::abs(c2), std::abs(c1), std::abs(c0)});
    if (scale == 0.0)
        return {};
    if (std::abs(c4) <= 1e-14 * scale)
        return solve_cubic(c3, c2, c1, c0);

    const double a3 = c3 / c4;
    const double a2 = c2 / c4;
    const double a1 = c1 / c4;
    const double a0 = c0 / c4;

    // resolvent cubic u^3 - a2 u^2 + (a1 a3 - 4 a0) u - (a1^2 + a0 a3^2 - 4 a0 a2) = 0
    const std::vector<double> res = solve_cubic(
        1.0, -a2, a1 * a3 - 4.0 * a0, -(a1 * a1 + a0 * a3 * a3 - 4.0 * a0 * a2));
    double u = res.empty() ? 0.0 : res.back();

    double r2 = 0.25 * a3 * a3 - a2 + u;
    double R = r2 > 0.0 ? std::sqrt(r2) : 0.0;

    double d2, e2;
    if (R != 0.0) {
        const double t1 = 0.75 * a3 * a3 - r2 - 2.0 * a2;
        const double t2 = 0.25 * (4.0 * a3 * a2 - 8.0 * a1 - a3 * a3 * a3) / R;
        d2 = t1 + t2;
        e2 = t1 - t2;
    } else {
        const double t1 = 0.75 * a3 * a3 - 2.0 * a2;
        const double t2 = 2.0 * std::sqrt(std::max(u * u - 4.0 * a0, 0.0));
        d2 = t1 + t2;
        e2 = t1 - t2;
        if (u * u - 4.0 * a0 < 0.0 && std::abs(u * u - 4.0 * a0) > 1e-10 * std::max(1.0, u * u)) {
            d2 = t1;
            e2 = -1.0; // no real pair from this branch
        }
    }

    std::vector<double> roots;
    if (d2 >= 0.0) {
        const double d = std::sqrt(d2);
        roots.push_back(-0.25 * a3 + 0.5 * R - 0.5 * d);
        roots.push_back(-0.25 * a3 + 0.5 * R + 0.5 * d);
    }
    if (e2 >= 0.0) {
        const double e = std::sqrt(e2);
        roots.push_back(-0.25 * a3 - 0.5 * R - 0.5 * e);
        roots.push_back(-0.25 * a3 - 0.5 * R + 0.5 * e);
    }

    const double c[5] = {c0, c1, c2, c3, c4};
    for (double& x : roots)
        x = newton_polish(c, 4, x);
    sort_unique(roots);
    return roots;
}

} // namespace gaussdisturb
