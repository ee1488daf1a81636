#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "gaussdisturb/state.hpp"

namespace gaussdisturb {

/// Moments entering the photon-number generating function of a
/// standard-form state: mean thermal photons B1, B2, the anomalous and
/// normal intermodal moments D, Dbar, and the kernel constants
/// K_j = [(a-1)(b-1) - c_j^2] / 4.
struct PhotonGenParams {
    double B1 = 0.0;
    double B2 = 0.0;
    double D = 0.0;
    double Dbar = 0.0;
    double K1 = 0.0;
    double K2 = 0.0;

    static PhotonGenParams from(const StandardFormCM& sf);
};

/// Truncated joint photon-number distribution p(m, n), m photons in mode
/// A (rows) and n in mode B (columns), with tail accounting.
struct JointPhotonDistribution {
    std::vector<double> p; // (cutoff+1)^2, row-major
    int cutoff = 0;
    double tail_mass = 0.0; // 1 - sum(p), by construction

    double at(int m, int n) const { return p[static_cast<std::size_t>(m) * (cutoff + 1) + n]; }

    /// Bound on the Shannon entropy omitted with the tail,
    /// tail_mass * (ln(1/tail_mass) + cutoff).
    double tail_entropy_bound() const;
};

struct FockOptions {
    /// Maximum probability mass allowed outside the truncation box.
    double tail_tol = 1e-10;
    /// Hard cap on the cutoff; exceeding it raises ConvergenceError.
    int max_cutoff = 512;

    enum class Engine {
        /// direct summation up to moderate cutoffs, recursion above
        automatic,
        /// reference summation (simplified branch on squeezed thermal states)
        direct,
        /// reference summation, general formula forced even when c1 = +-c2
        direct_general,
        /// coefficient recursion of the generating function
        recursive,
    };
    Engine engine = Engine::automatic;

    /// mid() only: permit the closed form on pure states.
    bool allow_closed_form = true;
};

/// Builds p(m, n) with the cutoff doubled from 16 until the captured mass
/// reaches 1 - tail_tol. Entries hit by catastrophic cancellation in the
/// alternating sums are recomputed in ~31-digit software floats; entries
/// still below -1e-8 raise PrecisionError, tiny negatives are clamped.
JointPhotonDistribution joint_photon_distribution(const StandardFormCM& sf,
                                                  const FockOptions& opt = {});

inline JointPhotonDistribution joint_photon_distribution(const StandardFormCM& sf,
                                                         double tail_tol)
{
    FockOptions opt;
    opt.tail_tol = tail_tol;
    return joint_photon_distribution(sf, opt);
}

/// Shannon entropy -sum p ln p of the truncated distribution (the tail
/// contribution is omitted; see JointPhotonDistribution::tail_entropy_bound).
double shannon_entropy(const JointPhotonDistribution& dist);

/// Entropy of entanglement of a two-mode squeezed vacuum with squeezing r:
/// cosh^2(r) ln cosh^2(r) - sinh^2(r) ln sinh^2(r).
double tmsv_entanglement_entropy(double r);

struct MidResult {
    double value = 0.0;
    bool closed_form = false;
    bool degenerate_marginal = false;
    int cutoff = 0;
    double tail_mass = 0.0;
    double tail_entropy_bound = 0.0;

    operator double() const { return value; }
};

namespace series {

// Literal series forms of the distribution pieces. Their inner sums
// alternate with terms far above the result at large indices, so they are
// reference points for small indices; production tables use the exact
// recurrences of the generating-function factors.

/// Simplified squeezed thermal entry p(m, n); returns {value, sum |terms|}.
std::pair<double, double> squeezed_thermal_entry(const StandardFormCM& sf, int m,
                                                 int n);

/// Factor coefficient Q_j(alpha, beta) / (alpha! beta!) for j in {1, 2};
/// returns {value, sum |terms|}.
std::pair<double, double> factor_coefficient(const StandardFormCM& sf, int which,
                                             int alpha, int beta);

} // namespace series

/// Disturbance induced by joint photon counting:
///   M = S[post-measurement] - S(rho) = -sum p ln p - F(nu+) - F(nu-).
/// Pure states take the closed form (numeric path remains available via
/// opt.allow_closed_form = false); a marginal at the vacuum limit makes
/// the state a product, reported with degenerate_marginal and M = 0.
MidResult mid(const StandardFormCM& sf, const FockOptions& opt = {});

inline MidResult mid(const StandardFormCM& sf, double tail_tol)
{
    FockOptions opt;
    opt.tail_tol = tail_tol;
    return mid(sf, opt);
}

} // namespace gaussdisturb
