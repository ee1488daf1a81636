#pragma once

#include <cmath>

#include "gaussdisturb/state.hpp"

namespace gaussdisturb {

// All entropic quantities are expressed in nats.

/// Von Neumann entropy kernel of a thermal mode with symplectic
/// eigenvalue x:
///   F(x) = ((x+1)/2) ln((x+1)/2) - ((x-1)/2) ln((x-1)/2).
/// Evaluated as ((x-1)/2) log1p(2/(x-1)) + ln((x+1)/2), which is exact
/// algebraically and stays accurate for x up to ~1e300. Arguments within
/// tolerance of 1 are clamped and give exactly 0.
inline double entropy_F(double x)
{
    if (x < 1.0 - kPhysicalityTol)
        throw DomainError("entropy_F: argument below 1");
    const double v = 0.5 * (x - 1.0);
    if (v <= 1e-12)
        return 0.0;
    return v * std::log1p(1.0 / v) + std::log(0.5 * (x + 1.0));
}

/// Global von Neumann entropy F(nu+) + F(nu-). Standard-form doubles
/// cannot resolve det(gamma) - 1 below ~eps * (ab)^2, so states whose
/// determinant factors equal 1 within that floor are treated as pure
/// (entropy 0); this keeps entropies exact along the pure line instead of
/// amplifying representation noise through F.
inline double state_entropy(const StandardFormCM& sf)
{
    const double ab = sf.a * sf.b;
    const double floor_tol = std::max(1e-12, 128.0 * 2.2e-16 * ab);
    const double f1 = ab - sf.c1 * sf.c1;
    const double f2 = ab - sf.c2 * sf.c2;
    if (std::abs(f1 - 1.0) <= floor_tol && std::abs(f2 - 1.0) <= floor_tol)
        return 0.0;
    const SymplecticSpectrum nu = symplectic_eigenvalues(sf);
    return entropy_F(nu.nu_plus) + entropy_F(nu.nu_minus);
}

/// Quantum mutual information I_q = F(a) + F(b) - F(nu+) - F(nu-).
inline double quantum_mutual_information(const StandardFormCM& sf)
{
    require_physical(sf, "quantum_mutual_information");
    if (sf.c1 == 0.0 && sf.c2 == 0.0)
        return 0.0;
    return entropy_F(sf.a) + entropy_F(sf.b) - state_entropy(sf);
}

/// Same quantity evaluated on a raw 4x4 CM via the local invariants
/// sqrt(det A), sqrt(det B) and the global symplectic spectrum.
inline double quantum_mutual_information(const Mat4& cm)
{
    if (!validate(cm).is_positive)
        throw NonPhysical("quantum_mutual_information: CM not physical");
    const SymplecticSpectrum nu = symplectic_eigenvalues(cm);
    const double a = std::sqrt(det(block_A(cm)));
    const double b = std::sqrt(det(block_B(cm)));
    return entropy_F(a) + entropy_F(b) - entropy_F(nu.nu_plus)
         - entropy_F(nu.nu_minus);
}

} // namespace gaussdisturb
