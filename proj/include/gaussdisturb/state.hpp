#pragma once

#include <string>
#include <vector>

#include "gaussdisturb/mat.hpp"

namespace gaussdisturb {

/// Slack allowed on physicality conditions (absolute, on symplectic
/// eigenvalues and ordering checks).
inline constexpr double kPhysicalityTol = 1e-9;

/// Two-mode Gaussian state in standard form: local blocks a*I and b*I,
/// intermodal block diag(c1, c2), with the convention c1 >= |c2|.
/// Displacements are zero throughout; they carry no correlations.
struct StandardFormCM {
    double a = 1.0;
    double b = 1.0;
    double c1 = 0.0;
    double c2 = 0.0;
};

struct PhysicalityReport {
    bool is_positive = false;
    double nu_minus = 0.0;
    std::vector<std::string> messages;
};

/// Builds the 4x4 covariance matrix of a standard-form state.
Mat4 to_cm(const StandardFormCM& sf);

/// Physicality check (gamma > 0 and gamma + i Omega >= 0) for a raw CM.
/// The verdict is carried in the report; no exception on failure.
PhysicalityReport validate(const Mat4& cm);
PhysicalityReport validate(const StandardFormCM& sf);

/// Throws NonPhysical unless the state passes validate().
void require_physical(const StandardFormCM& sf, const char* where);

/// Reduces a physical CM to standard form using the four local symplectic
/// invariants det A, det B, det C, det gamma. The (c1, c2) pair solves
/// c1*c2 = det C and det gamma = (ab - c1^2)(ab - c2^2).
StandardFormCM to_standard_form(const Mat4& cm);

/// Global symplectic eigenvalues from the standard-form parameters. The
/// discriminant is evaluated in the cancellation-free form
/// (a^2 - b^2)^2 + 4 (c1 a + c2 b)(c1 b + c2 a), which is exact on the
/// pure line where the general expression loses all significant digits.
SymplecticSpectrum symplectic_eigenvalues(const StandardFormCM& sf);

/// Symplectic eigenvalues of the partial transpose (c2 -> -c2); the
/// smaller one decides separability of the state.
SymplecticSpectrum partial_transpose_spectrum(const StandardFormCM& sf);

// --- named state families ---------------------------------------------

/// Two-mode squeezed vacuum: a = b = cosh(2r), c1 = -c2 = sinh(2r).
StandardFormCM pure_tmsv(double r);

/// Product of two thermal modes (no correlations).
StandardFormCM thermal_product(double a, double b);

/// Squeezed thermal state c1 = c, c2 = sign * c with sign in {-1, +1}.
StandardFormCM squeezed_thermal(double a, double b, double c, int c2_sign = -1);

/// Symmetric squeezed thermal state (b = a, c1 = -c2 = c).
StandardFormCM symmetric_sts(double a, double c);

/// Symmetric squeezed thermal family parameterized by the partial
/// transpose eigenvalue: b = a, c1 = -c2 = a - nu_tilde. Requires
/// nu_tilde > 0 and a >= max(nu_tilde, (1 + nu_tilde^2) / (2 nu_tilde)).
StandardFormCM gmems(double a, double nu_tilde);

/// Symmetric family with c1 = a - (1 + nu~^2)/(2a), c2 = a - 2a/(1 + nu~^2),
/// same parameter range as gmems. Covariances are canonicalized to the
/// c1 >= |c2| convention.
StandardFormCM glems(double a, double nu_tilde);

/// Symmetric family with c2 = 0 and c1 = (a^2 - 1 - ln a)/a. Its quantum
/// correlations stay bounded while photon-counting disturbance diverges.
StandardFormCM statistrani(double a);

/// Two-parameter family a = cosh(2s), b = cosh^2(r) cosh(2s) + sinh^2(r),
/// c1 = -c2 = cosh(r) sinh(2s); for large r it saturates the lower
/// boundary where Gaussian disturbance equals two-way discord.
StandardFormCM cmivette(double s, double r);

enum class StateFamily {
    PureTmsv,
    ThermalProduct,
    SqueezedThermal,
    SymmetricSts,
    Gmems,
    Glems,
    Statistrani,
    Cmivette,
};

struct FamilyParams {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double nu_tilde = 0.0;
    double r = 0.0;
    double s = 0.0;
    int c2_sign = -1;
};

StandardFormCM make_family(StateFamily family, const FamilyParams& p);

StateFamily family_from_name(const std::string& name);
std::string family_name(StateFamily family);

} // namespace gaussdisturb
