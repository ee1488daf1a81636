#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gaussdisturb/fock.hpp"
#include "gaussdisturb/sampler.hpp"
#include "gaussdisturb/state.hpp"

namespace gaussdisturb {

struct ReportOptions {
    double tail_tol = 1e-10;
    double opt_tol = 1e-6; // closed form vs independent maximizer
    int max_photon_cutoff = 2048;
    FockOptions::Engine fock_engine = FockOptions::Engine::automatic;
    bool with_mid = true;
    unsigned threads = 0; // 0: worker_count()
};

/// All correlation quantities of one state, with branch provenance.
struct MeasureReport {
    StandardFormCM state;
    double I_q = 0.0;
    double M = 0.0;
    double I_c_fock = 0.0;
    double A_G = 0.0;
    double I_c_G = 0.0;
    double D_left = 0.0;
    double D_right = 0.0;
    double D_twoway = 0.0;
    std::optional<double> E_f_G; // symmetric squeezed thermal states only
    std::string mid_branch;      // closed-form | numeric | degenerate-marginal
    std::string amid_branch;
    std::string discord_left_branch;
    std::string discord_right_branch;
    std::string mid_error; // set when the photon distribution is out of reach
    double tail_tol = 0.0;
    double opt_tol = 0.0;
};

MeasureReport compute_measures(const StandardFormCM& sf, const ReportOptions& opt = {});

nlohmann::json to_json(const MeasureReport& rep);
MeasureReport report_from_json(const nlohmann::json& j);

nlohmann::json state_to_json(const StandardFormCM& sf);

/// Optimizer result with homodyne seeds encoded as "inf".
nlohmann::json opt_result_to_json(const struct OptResult& res);

/// Accepts {"a","b","c1","c2"}, {"cm": 4x4}, or
/// {"family": name, "params": {...}}. Parameters outside the standard-form
/// ordering are reduced through the invariants.
StandardFormCM state_from_json(const nlohmann::json& j);

// --- CSV commands (cli_io) --------------------------------------------

inline constexpr const char* kCsvSchemaTag = "# gaussdisturb v1";

struct SweepSpec {
    StateFamily family = StateFamily::SymmetricSts;
    FamilyParams fixed;
    std::string key; // one of r, s, a, b, c, nu, cnorm
    double lo = 0.0;
    double hi = 1.0;
    int steps = 10;
    bool log_scale = false;
};

void cmd_sweep(const SweepSpec& spec, const ReportOptions& opt, std::ostream& os);

struct ScatterSpec {
    std::size_t n = 1000;
    SamplerConfig sampler;
    bool overlays = true;
};

void cmd_scatter(const ScatterSpec& spec, const ReportOptions& opt, std::ostream& os);

struct ThresholdSpec {
    std::vector<double> a_values;
    int scan_points = 24;
    double bisect_tol = 1e-6; // on the normalized covariance
};

struct ThresholdRow {
    double a = 0.0;
    double c_star = 0.0;      // covariance where photon counting ties Gaussian POVMs
    double c_star_norm = 0.0; // c* / sqrt(a^2 - 1)
    bool found = false;
};

ThresholdRow find_threshold(double a, const ThresholdSpec& spec, const ReportOptions& opt);

void cmd_threshold(const ThresholdSpec& spec, const ReportOptions& opt, std::ostream& os);

/// Truncated joint photon-number distribution as a CSV matrix
/// (row m = photons in mode A, column n = photons in mode B).
void cmd_photons(const StandardFormCM& sf, const ReportOptions& opt, std::ostream& os);

} // namespace gaussdisturb
