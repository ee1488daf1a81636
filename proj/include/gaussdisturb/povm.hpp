#pragma once

#include <string>

#include "gaussdisturb/state.hpp"

namespace gaussdisturb {

/// Squeezings and phases of the pure seed states of a bi-local Gaussian
/// POVM. Homodyne detection is the r -> infinity limit and is carried as
/// a flag (limits are always evaluated analytically); heterodyne is r = 0.
struct GaussianSeedPair {
    double rA = 0.0;
    double rB = 0.0;
    double thetaA = 0.0; // in [0, pi)
    double thetaB = 0.0;
    bool homodyneA = false;
    bool homodyneB = false;

    static GaussianSeedPair heterodyne() { return GaussianSeedPair{}; }
    static GaussianSeedPair double_homodyne(double thetaA, double thetaB)
    {
        GaussianSeedPair s;
        s.homodyneA = s.homodyneB = true;
        s.thetaA = thetaA;
        s.thetaB = thetaB;
        return s;
    }
};

/// Local symplectic invariants of the measured CM gamma' = gamma + gA (+) gB:
/// I1 = det A', I2 = det B', I3 = det C', I4 = Tr(A' J C' J B' J C'^T J),
/// with det gamma' = I1 I2 + I3^2 - I4.
struct MeasurementInvariants {
    double I1 = 1.0;
    double I2 = 1.0;
    double I3 = 0.0;
    double I4 = 0.0;
};

enum class OptBranch {
    Product,
    SingleCovariance,
    SqueezedThermalHom,
    SqueezedThermalHet,
    SymmetricQuartic,
    GeneralStationarity,
    Boundary,
};

std::string branch_name(OptBranch b);

struct OptResult {
    double value = 0.0; // nats
    GaussianSeedPair seeds;
    OptBranch branch = OptBranch::Product;
};

/// Shannon mutual information of the outcomes of the bi-local Gaussian
/// measurement with the given pure seeds,
///   I(A:B) = 1/2 ln[ det(gA + A) det(gB + B) / det(gA (+) gB + gamma) ].
/// Homodyne limits are taken analytically through rank-one adjugate
/// identities, never by substituting a large squeezing.
double classical_mi_at_seed(const StandardFormCM& sf, const GaussianSeedPair& seeds);

/// Same mutual information for arbitrary (possibly mixed) physical seed CMs.
double classical_mi_at_seed(const StandardFormCM& sf, const Mat2& seed_a,
                            const Mat2& seed_b);

/// Invariants of the measured CM for finite seeds.
MeasurementInvariants measurement_invariants(const StandardFormCM& sf,
                                             const GaussianSeedPair& seeds);

/// Invariant I4 maximized over the seed phases at fixed squeezings; with
/// the convention c1 >= |c2| the optimum sits at thetaA = thetaB = pi/2 and
///   I4' = c1^2 (a + e^{2rA})(b + e^{2rB}) + c2^2 (a + e^{-2rA})(b + e^{-2rB}).
double phase_optimized_I4(const StandardFormCM& sf, double rA, double rB);

/// Default threshold for closed-form vs independent-maximizer
/// disagreement; chosen above the expected optimization noise (~1e-9).
inline constexpr double kOptDisagreeTol = 1e-6;

/// Classical mutual information maximized over bi-local Gaussian POVMs.
/// Branch dispatch: product -> 0; c2 = 0 -> double homodyne; c1 = +-c2 ->
/// homodyne/heterodyne split; symmetric -> quartic stationarity; general
/// -> two-variable stationarity scan plus boundary candidates. The result
/// is always cross-checked against an independent grid + refinement
/// maximizer (OptimizerDisagreement beyond opt_tol).
OptResult gaussian_classical_mi(const StandardFormCM& sf,
                                double opt_tol = kOptDisagreeTol);

/// Gaussian-measurement disturbance A^G = I_q - I_c^G.
OptResult gaussian_amid(const StandardFormCM& sf, double opt_tol = kOptDisagreeTol);

/// Closed form of A^G on the symmetric squeezed thermal family
/// (b = a, c1 = -c2 = a - nu_tilde).
double sts_gamid_closed(double a, double nu_tilde);

/// Closed form of the one-way discord on the same family.
double sts_discord_closed(double a, double nu_tilde);

enum class MeasureDirection {
    left,  // measurement on mode B, conditional state of A
    right, // measurement on mode A, conditional state of B
};

/// One-way Gaussian discord
///   D = F(local) - F(nu+) - F(nu-) + min_seed F(sqrt(det conditional)),
/// minimized over pure single-mode Gaussian seeds on the measured mode.
/// In OptResult::seeds only the measured mode's entry is meaningful.
OptResult gaussian_discord(const StandardFormCM& sf, MeasureDirection dir,
                           double opt_tol = kOptDisagreeTol);

/// Two-way discord, max over the two directions.
double two_way_discord(const StandardFormCM& sf, double opt_tol = kOptDisagreeTol);

// Independent optimization routes over the seed squeezings, exposed for
// cross-validation. All return the classical mutual information in nats.

/// Coarse 2D grid over compactified squeezings plus local refinement.
double classical_mi_opt_grid(const StandardFormCM& sf);

/// Symmetric-state route: quartic stationarity in lambda = e^{2r} plus
/// boundary candidates. Requires a = b.
double classical_mi_opt_symmetric(const StandardFormCM& sf);

/// General route: stationarity system reduced to a one-variable root scan
/// plus edge and corner candidates.
double classical_mi_opt_general(const StandardFormCM& sf);

} // namespace gaussdisturb
