#pragma once

#include "gaussdisturb/state.hpp"

namespace gaussdisturb {

/// Entanglement parameter of the symmetric squeezed thermal family;
/// the state is entangled iff nu_tilde < 1.
struct EofParams {
    double nu_tilde = 1.0;
};

/// Gaussian entanglement of formation of a symmetric squeezed thermal
/// state as a function of nu_tilde:
///   E = [ (1+v)^2 ln((1+v)^2 / 4v) - (1-v)^2 ln((1-v)^2 / 4v) ] / (4v)
/// for v < 1, and 0 otherwise.
double eof_symmetric(double nu_tilde);

/// Tight upper bound on the Gaussian-measurement disturbance at fixed
/// entanglement, max of two branches meeting at nu_tilde = 4/e - 1:
///   1 + 2 ln(1+v) - ln(4v)   and   ln((1+v)/v).
double gamid_upper_bound(double nu_tilde);

struct SandwichReport {
    double nu_tilde = 1.0;
    double eof = 0.0;
    double amid = 0.0;
    bool lower_ok = false;       // A^G >= E_f^G
    bool upper_applicable = false; // E_f^G >= 0.441
    bool upper_ok = false;       // A^G <= E_f^G + ln 4 - 1 (when applicable)
};

/// Checks the entanglement bounds on a symmetric squeezed thermal state.
SandwichReport check_sandwich(const StandardFormCM& sf);

} // namespace gaussdisturb
