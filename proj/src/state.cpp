#include "gaussdisturb/state.hpp"

#include <algorithm>
#include <cmath>

#include "gaussdisturb/ddouble.hpp"

namespace gaussdisturb {

Mat4 to_cm(const StandardFormCM& sf)
{
    return assemble_blocks(Mat2::diag(sf.a, sf.a), Mat2::diag(sf.b, sf.b),
                           Mat2::diag(sf.c1, sf.c2));
}

namespace {

bool positive_definite(const Mat4& g)
{
    // leading principal minors
    if (g(0, 0) <= 0.0)
        return false;
    if (g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0) <= 0.0)
        return false;
    const double m3 = detail::det3(g(0, 0), g(0, 1), g(0, 2), g(1, 0), g(1, 1),
                                   g(1, 2), g(2, 0), g(2, 1), g(2, 2));
    if (m3 <= 0.0)
        return false;
    return det(g) > 0.0;
}

StandardFormCM canonical_order(double a, double b, double c1, double c2)
{
    // Reachable by local rotations: swap (c1, c2) or flip both signs.
    // Canonical representative has c1 >= |c2| and c1 >= 0; when the two
    // covariances share a sign both are taken nonnegative.
    double hi = std::max(std::abs(c1), std::abs(c2));
    double lo = std::min(std::abs(c1), std::abs(c2));
    const double prod = c1 * c2;
    return StandardFormCM{a, b, hi, prod < 0.0 ? -lo : lo};
}

} // namespace

namespace {

/// nu_minus >= 1 is checked through the characteristic quadratic of the
/// squared spectrum, q(1) = det(gamma) - Delta + 1 >= 0 together with
/// Delta >= 2; this avoids the sqrt of a cancellation-prone discriminant.
bool spectrum_above_vacuum(double delta, double det_g, std::string* msg)
{
    const double tau = kPhysicalityTol * (1.0 + std::abs(delta));
    if (delta < 2.0 - tau) {
        if (msg)
            *msg = "uncertainty principle violated: Delta < 2";
        return false;
    }
    if (det_g - delta + 1.0 < -tau) {
        if (msg)
            *msg = "uncertainty principle violated: nu_minus < 1";
        return false;
    }
    return true;
}

} // namespace

PhysicalityReport validate(const Mat4& cm)
{
    PhysicalityReport rep;
    if (!is_symmetric(cm)) {
        rep.messages.emplace_back("covariance matrix is not symmetric");
        return rep;
    }
    if (!positive_definite(cm)) {
        rep.messages.emplace_back("covariance matrix is not positive definite");
        return rep;
    }
    try {
        rep.nu_minus = symplectic_eigenvalues(cm).nu_minus;
    } catch (const NonPhysical& e) {
        rep.messages.emplace_back(e.what());
        return rep;
    }
    const double delta = det(block_A(cm)) + det(block_B(cm)) + 2.0 * det(block_C(cm));
    std::string msg;
    if (!spectrum_above_vacuum(delta, det(cm), &msg)) {
        rep.messages.emplace_back(msg);
        return rep;
    }
    rep.is_positive = true;
    return rep;
}

PhysicalityReport validate(const StandardFormCM& sf)
{
    PhysicalityReport rep;
    if (sf.c1 < std::abs(sf.c2) - kPhysicalityTol) {
        rep.messages.emplace_back("ordering convention c1 >= |c2| violated");
        return rep;
    }
    const double ab = sf.a * sf.b;
    if (sf.a <= 0.0 || sf.b <= 0.0 || ab <= sf.c1 * sf.c1 || ab <= sf.c2 * sf.c2) {
        rep.messages.emplace_back("covariance matrix is not positive definite");
        return rep;
    }
    const double det_g = (ab - sf.c1 * sf.c1) * (ab - sf.c2 * sf.c2);
    const double delta = sf.a * sf.a + sf.b * sf.b + 2.0 * sf.c1 * sf.c2;
    rep.nu_minus = symplectic_eigenvalues(sf).nu_minus;
    std::string msg;
    if (!spectrum_above_vacuum(delta, det_g, &msg)) {
        rep.messages.emplace_back(msg);
        return rep;
    }
    if (sf.a <= 1.0 + kPhysicalityTol || sf.b <= 1.0 + kPhysicalityTol)
        rep.messages.emplace_back(
            "degenerate marginal: a mode sits at the vacuum, the state is a product");
    rep.is_positive = true;
    return rep;
}

SymplecticSpectrum symplectic_eigenvalues(const StandardFormCM& sf)
{
    const double ab = sf.a * sf.b;
    const double det_g = (ab - sf.c1 * sf.c1) * (ab - sf.c2 * sf.c2);
    if (det_g <= 0.0)
        throw NonPhysical("symplectic_eigenvalues: det(gamma) <= 0");
    const double delta = sf.a * sf.a + sf.b * sf.b + 2.0 * sf.c1 * sf.c2;
    const double asq = sf.a * sf.a - sf.b * sf.b;
    double disc = asq * asq
                + 4.0 * (sf.c1 * sf.a + sf.c2 * sf.b) * (sf.c1 * sf.b + sf.c2 * sf.a);
    disc = std::max(disc, 0.0);
    const double root = std::sqrt(disc);
    return SymplecticSpectrum{std::sqrt(0.5 * (delta + root)),
                              std::sqrt(2.0 * det_g / (delta + root))};
}

void require_physical(const StandardFormCM& sf, const char* where)
{
    const PhysicalityReport rep = validate(sf);
    if (!rep.is_positive)
        throw NonPhysical(std::string(where) + ": state is not physical");
}

namespace {

// The quadratic for (c1^2, c2^2) degenerates when |c1| = |c2| (pure and
// squeezed thermal states); compensated arithmetic keeps the root split
// accurate there.

DD dd_det2(double m00, double m01, double m10, double m11)
{
    return ddops::sub(ddops::two_prod(m00, m11), ddops::two_prod(m01, m10));
}

DD dd_det2(const Mat2& m) { return dd_det2(m(0, 0), m(0, 1), m(1, 0), m(1, 1)); }

DD dd_det3(const double* r0, const double* r1, const double* r2)
{
    using namespace ddops;
    DD s = mul(dd_det2(r1[1], r1[2], r2[1], r2[2]), r0[0]);
    s = sub(s, mul(dd_det2(r1[0], r1[2], r2[0], r2[2]), r0[1]));
    return add(s, mul(dd_det2(r1[0], r1[1], r2[0], r2[1]), r0[2]));
}

DD dd_det4(const Mat4& m)
{
    using namespace ddops;
    DD s{};
    for (std::size_t j = 0; j < 4; ++j) {
        double rows[3][3];
        for (std::size_t i = 1; i < 4; ++i) {
            std::size_t k = 0;
            for (std::size_t jj = 0; jj < 4; ++jj)
                if (jj != j)
                    rows[i - 1][k++] = m(i, jj);
        }
        DD c = mul(dd_det3(rows[0], rows[1], rows[2]), m(0, j));
        s = (j % 2 == 0) ? add(s, c) : sub(s, c);
    }
    return s;
}

} // namespace

StandardFormCM to_standard_form(const Mat4& cm)
{
    const PhysicalityReport rep = validate(cm);
    if (!rep.is_positive)
        throw NonPhysical("to_standard_form: input CM is not physical");

    using namespace ddops;
    const DD det_a = dd_det2(block_A(cm));
    const DD det_b = dd_det2(block_B(cm));
    const DD det_c = dd_det2(block_C(cm));
    const DD det_g = dd_det4(cm);

    const DD a = ddops::sqrt(det_a);
    const DD b = ddops::sqrt(det_b);
    const DD ab = mul(a, b);
    const DD det_c_sq = mul(det_c, det_c);

    // c1^2 and c2^2 are the roots of z^2 - sigma z + (det C)^2 = 0 with
    // sigma fixed by det(gamma) = (ab - c1^2)(ab - c2^2).
    const DD sigma = div(add(sub(mul(ab, ab), det_g), det_c_sq), ab);
    DD disc = sub(mul(sigma, sigma), mul(det_c_sq, 4.0));
    const double sigma_sq = sigma.hi * sigma.hi;
    if (disc.hi < -kPhysicalityTol * std::max(1.0, sigma_sq))
        throw Degenerate("to_standard_form: invariant system has no real roots");
    if (disc.hi < 0.0)
        disc = DD{};
    const DD root = ddops::sqrt(disc);
    DD z_hi = mul(add(sigma, root), 0.5);
    DD z_lo = (z_hi.hi > 0.0) ? div(det_c_sq, z_hi) : mul(sub(sigma, root), 0.5);
    if (z_hi.hi < -kPhysicalityTol || z_lo.hi < -kPhysicalityTol)
        throw Degenerate("to_standard_form: negative squared covariance");
    if (z_hi.hi < 0.0)
        z_hi = DD{};
    if (z_lo.hi < 0.0)
        z_lo = DD{};

    const double c1 = ddops::sqrt(z_hi).hi;
    const double c2 = (det_c.hi < 0.0) ? -ddops::sqrt(z_lo).hi : ddops::sqrt(z_lo).hi;
    return StandardFormCM{a.hi, b.hi, c1, c2};
}

SymplecticSpectrum partial_transpose_spectrum(const StandardFormCM& sf)
{
    StandardFormCM pt = sf;
    pt.c2 = -pt.c2;
    // the ordering convention plays no role in the spectrum
    return symplectic_eigenvalues(pt);
}

StandardFormCM pure_tmsv(double r)
{
    if (r < 0.0)
        throw OutOfRange("pure_tmsv: squeezing must be nonnegative");
    return StandardFormCM{std::cosh(2.0 * r), std::cosh(2.0 * r),
                          std::sinh(2.0 * r), -std::sinh(2.0 * r)};
}

StandardFormCM thermal_product(double a, double b)
{
    if (a < 1.0 || b < 1.0)
        throw OutOfRange("thermal_product: local covariances must be >= 1");
    return StandardFormCM{a, b, 0.0, 0.0};
}

StandardFormCM squeezed_thermal(double a, double b, double c, int c2_sign)
{
    if (a < 1.0 || b < 1.0 || c < 0.0)
        throw OutOfRange("squeezed_thermal: require a, b >= 1 and c >= 0");
    if (c2_sign != 1 && c2_sign != -1)
        throw OutOfRange("squeezed_thermal: c2 sign must be +1 or -1");
    const StandardFormCM sf{a, b, c, c2_sign * c};
    if (!validate(sf).is_positive)
        throw OutOfRange("squeezed_thermal: covariance c exceeds physical bound");
    return sf;
}

StandardFormCM symmetric_sts(double a, double c)
{
    return squeezed_thermal(a, a, c, -1);
}

StandardFormCM gmems(double a, double nu_tilde)
{
    if (nu_tilde <= 0.0)
        throw OutOfRange("gmems: nu_tilde must be positive");
    const double a_min = std::max(nu_tilde, (1.0 + nu_tilde * nu_tilde) / (2.0 * nu_tilde));
    if (a < a_min - kPhysicalityTol)
        throw OutOfRange("gmems: a below admissible range");
    return StandardFormCM{a, a, a - nu_tilde, -(a - nu_tilde)};
}

StandardFormCM glems(double a, double nu_tilde)
{
    if (nu_tilde <= 0.0)
        throw OutOfRange("glems: nu_tilde must be positive");
    const double a_min = std::max(nu_tilde, (1.0 + nu_tilde * nu_tilde) / (2.0 * nu_tilde));
    if (a < a_min - kPhysicalityTol)
        throw OutOfRange("glems: a below admissible range");
    const double q = 1.0 + nu_tilde * nu_tilde;
    const double c1 = a - q / (2.0 * a);
    const double c2 = a - 2.0 * a / q;
    const StandardFormCM sf = canonical_order(a, a, c1, c2);
    if (!validate(sf).is_positive)
        throw OutOfRange("glems: parameters give a non-physical state");
    return sf;
}

StandardFormCM statistrani(double a)
{
    if (a < 1.0)
        throw OutOfRange("statistrani: a must be >= 1");
    return StandardFormCM{a, a, (a * a - 1.0 - std::log(a)) / a, 0.0};
}

StandardFormCM cmivette(double s, double r)
{
    if (s < 0.0 || r < 0.0)
        throw OutOfRange("cmivette: require s, r >= 0");
    const double ch2s = std::cosh(2.0 * s);
    const double chr = std::cosh(r);
    const double a = ch2s;
    const double b = chr * chr * ch2s + std::sinh(r) * std::sinh(r);
    const double c = chr * std::sinh(2.0 * s);
    return StandardFormCM{a, b, c, -c};
}

StandardFormCM make_family(StateFamily family, const FamilyParams& p)
{
    switch (family) {
    case StateFamily::PureTmsv:
        return pure_tmsv(p.r);
    case StateFamily::ThermalProduct:
        return thermal_product(p.a, p.b);
    case StateFamily::SqueezedThermal:
        return squeezed_thermal(p.a, p.b, p.c, p.c2_sign);
    case StateFamily::SymmetricSts:
        return symmetric_sts(p.a, p.c);
    case StateFamily::Gmems:
        return gmems(p.a, p.nu_tilde);
    case StateFamily::Glems:
        return glems(p.a, p.nu_tilde);
    case StateFamily::Statistrani:
        return statistrani(p.a);
    case StateFamily::Cmivette:
        return cmivette(p.s, p.r);
    }
    throw OutOfRange("make_family: unknown family");
}

StateFamily family_from_name(const std::string& name)
{
    if (name == "pure-tmsv")
        return StateFamily::PureTmsv;
    if (name == "thermal-product")
        return StateFamily::ThermalProduct;
    if (name == "squeezed-thermal")
        return StateFamily::SqueezedThermal;
    if (name == "symmetric-sts")
        return StateFamily::SymmetricSts;
    if (name == "gmems")
        return StateFamily::Gmems;
    if (name == "glems")
        return StateFamily::Glems;
    if (name == "statistrani")
        return StateFamily::Statistrani;
    if (name == "cmivette")
        return StateFamily::Cmivette;
    throw ParseError("unknown state family: " + name);
}

std::string family_name(StateFamily family)
{
    switch (family) {
    case StateFamily::PureTmsv:
        return "pure-tmsv";
    case StateFamily::ThermalProduct:
        return "thermal-product";
    case StateFamily::SqueezedThermal:
        return "squeezed-thermal";
    case StateFamily::SymmetricSts:
        return "symmetric-sts";
    case StateFamily::Gmems:
        return "gmems";
    case StateFamily::Glems:
        return "glems";
    case StateFamily::Statistrani:
        return "statistrani";
    case StateFamily::Cmivette:
        return "cmivette";
    }
    return "unknown";
}

} // namespace gaussdisturb
