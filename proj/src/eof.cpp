#include "gaussdisturb/eof.hpp"

#include <algorithm>
#include <cmath>

#include "gaussdisturb/povm.hpp"

namespace gaussdisturb {

double eof_symmetric(double nu_tilde)
{
    if (nu_tilde <= 0.0)
        throw OutOfRange("eof_symmetric: nu_tilde must be positive");
    if (nu_tilde >= 1.0)
        return 0.0;
    const double v = nu_tilde;
    const double p = (1.0 + v) * (1.0 + v);
    const double m = (1.0 - v) * (1.0 - v);
    return (p * std::log(p / (4.0 * v)) - m * std::log(m / (4.0 * v))) / (4.0 * v);
}

double gamid_upper_bound(double nu_tilde)
{
    if (nu_tilde <= 0.0 || nu_tilde > 1.0)
        throw OutOfRange("gamid_upper_bound: nu_tilde must be in (0, 1]");
    const double v = nu_tilde;
    const double moderate = 1.0 + 2.0 * std::log1p(v) - std::log(4.0 * v);
    const double strong = std::log1p(v) - std::log(v);
    return std::max(moderate, strong);
}

SandwichReport check_sandwich(const StandardFormCM& sf)
{
    require_physical(sf, "check_sandwich");
    const bool sts = std::abs(sf.a - sf.b) <= 1e-9 * sf.a
                  && std::abs(sf.c1 + sf.c2) <= 1e-9 * std::max(1.0, sf.c1);
    if (!sts)
        throw DomainError("check_sandwich: symmetric squeezed thermal state required");

    SandwichReport rep;
    rep.nu_tilde = sf.a - sf.c1;
    rep.eof = eof_symmetric(rep.nu_tilde);
    rep.amid = gaussian_amid(sf).value;
    constexpr double tol = 1e-8;
    rep.lower_ok = rep.amid >= rep.eof - tol;
    rep.upper_applicable = rep.eof >= 0.441;
    rep.upper_ok = !rep.upper_applicable
                || rep.amid <= rep.eof + std::log(4.0) - 1.0 + tol;
    return rep;
}

} // namespace gaussdisturb
