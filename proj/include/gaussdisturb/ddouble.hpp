#pragma once

#include <cmath>
#include <cstdint>

namespace gaussdisturb {

// Compensated double-double arithmetic (~31 significant digits) plus a
// scaled variant with a separate binary exponent for quantities whose
// magnitude leaves the double range (factorials, high powers). Only the
// operations needed by the photon-statistics sums are provided.

struct DD {
    double hi = 0.0;
    double lo = 0.0;
};

namespace ddops {

inline DD two_sum(double x, double y)
{
    const double s = x + y;
    const double bb = s - x;
    const double err = (x - (s - bb)) + (y - bb);
    return DD{s, err};
}

inline DD quick_two_sum(double x, double y)
{
    const double s = x + y;
    return DD{s, y - (s - x)};
}

inline DD two_prod(double x, double y)
{
    const double p = x * y;
    return DD{p, std::fma(x, y, -p)};
}

inline DD add(const DD& x, const DD& y)
{
    DD s = two_sum(x.hi, y.hi);
    s.lo += x.lo + y.lo;
    return quick_two_sum(s.hi, s.lo);
}

inline DD add(const DD& x, double y)
{
    DD s = two_sum(x.hi, y);
    s.lo += x.lo;
    return quick_two_sum(s.hi, s.lo);
}

inline DD sub(const DD& x, const DD& y) { return add(x, DD{-y.hi, -y.lo}); }

inline DD mul(const DD& x, const DD& y)
{
    DD p = two_prod(x.hi, y.hi);
    p.lo += x.hi * y.lo + x.lo * y.hi;
    return quick_two_sum(p.hi, p.lo);
}

inline DD mul(const DD& x, double y)
{
    DD p = two_prod(x.hi, y);
    p.lo += x.lo * y;
    return quick_two_sum(p.hi, p.lo);
}

inline DD div(const DD& x, const DD& y)
{
    const double q1 = x.hi / y.hi;
    DD r = sub(x, mul(y, q1));
    const double q2 = r.hi / y.hi;
    r = sub(r, mul(y, q2));
    const double q3 = r.hi / y.hi;
    DD q = quick_two_sum(q1, q2);
    return add(q, q3);
}

inline DD sqrt(const DD& x)
{
    if (x.hi <= 0.0)
        return DD{0.0, 0.0};
    const double s = std::sqrt(x.hi);
    // one Newton step in double-double
    DD e = sub(x, mul(DD{s, 0.0}, DD{s, 0.0}));
    const double corr = e.hi / (2.0 * s);
    return quick_two_sum(s, corr);
}

} // namespace ddops

/// Value m * 2^e with double-double mantissa kept near [1, 2).
struct XDouble {
    DD m{};
    std::int64_t e = 0;

    static XDouble from(double v)
    {
        if (v == 0.0)
            return XDouble{};
        int ex = 0;
        const double f = std::frexp(v, &ex);
        return XDouble{DD{f, 0.0}, ex};
    }

    bool zero() const { return m.hi == 0.0; }

    double to_double() const
    {
        if (zero())
            return 0.0;
        if (e > 2000)
            return m.hi > 0 ? HUGE_VAL : -HUGE_VAL;
        if (e < -2000)
            return 0.0;
        return std::ldexp(m.hi, static_cast<int>(e))
             + std::ldexp(m.lo, static_cast<int>(e));
    }

    void normalize()
    {
        if (m.hi == 0.0) {
            m.lo = 0.0;
            e = 0;
            return;
        }
        int ex = 0;
        (void)std::frexp(m.hi, &ex);
        if (ex != 0) {
            m.hi = std::ldexp(m.hi, -ex);
            m.lo = std::ldexp(m.lo, -ex);
            e += ex;
        }
    }
};

namespace ddops {

inline XDouble mul(const XDouble& x, const XDouble& y)
{
    if (x.zero() || y.zero())
        return XDouble{};
    XDouble r{mul(x.m, y.m), x.e + y.e};
    r.normalize();
    return r;
}

inline XDouble mul(const XDouble& x, double y)
{
    return mul(x, XDouble::from(y));
}

inline XDouble div(const XDouble& x, const XDouble& y)
{
    if (x.zero())
        return XDouble{};
    XDouble r{div(x.m, y.m), x.e - y.e};
    r.normalize();
    return r;
}

inline XDouble add(const XDouble& x, const XDouble& y)
{
    if (x.zero())
        return y;
    if (y.zero())
        return x;
    const XDouble *big = &x, *small = &y;
    if (y.e > x.e) {
        big = &y;
        small = &x;
    }
    const std::int64_t shift = big->e - small->e;
    if (shift > 120)
        return *big;
    DD sm = small->m;
    sm.hi = std::ldexp(sm.hi, -static_cast<int>(shift));
    sm.lo = std::ldexp(sm.lo, -static_cast<int>(shift));
    XDouble r{add(big->m, sm), big->e};
    r.normalize();
    return r;
}

inline XDouble pow_int(XDouble base, std::int64_t n)
{
    XDouble r = XDouble::from(1.0);
    while (n > 0) {
        if (n & 1)
            r = mul(r, base);
        base = mul(base, base);
        n >>= 1;
    }
    return r;
}

inline XDouble sqrt(const XDouble& x)
{
    if (x.zero())
        return XDouble{};
    XDouble v = x;
    if (v.e % 2 != 0) {
        v.m.hi *= 2.0;
        v.m.lo *= 2.0;
        v.e -= 1;
    }
    XDouble r{sqrt(v.m), v.e / 2};
    r.normalize();
    return r;
}

} // namespace ddops

} // namespace gaussdisturb
