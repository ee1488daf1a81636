// gaussdisturb: entropic correlation measures of two-mode Gaussian states.
//
// Subcommands: measures (JSON), sweep / scatter / threshold (CSV).
// Exit codes: 0 ok, 2 parse error, 3 non-physical input, 4 convergence
// failure.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "gaussdisturb/report.hpp"

namespace {

using namespace gaussdisturb;
using nlohmann::json;

struct StateFlags {
    std::string family;
    std::string state_json;
    std::string cm_json;
    double a = 0.0, b = 0.0, c = 0.0, nu = 0.0, r = 0.0, s = 0.0;
    int c2_sign = -1;
};

void add_state_flags(CLI::App* cmd, StateFlags& f)
{
    cmd->add_option("--family", f.family,
                    "state family: pure-tmsv, thermal-product, squeezed-thermal, "
                    "symmetric-sts, gmems, glems, statistrani, cmivette");
    cmd->add_option("--state", f.state_json,
                    "JSON state record {\"a\":..,\"b\":..,\"c1\":..,\"c2\":..}");
    cmd->add_option("--cm", f.cm_json, "JSON 4x4 covariance matrix");
    cmd->add_option("--a", f.a, "local covariance of mode A");
    cmd->add_option("--b", f.b, "local covariance of mode B");
    cmd->add_option("--c", f.c, "intermodal covariance");
    cmd->add_option("--nu", f.nu, "entanglement parameter nu-tilde");
    cmd->add_option("--r", f.r, "squeezing parameter");
    cmd->add_option("--s", f.s, "squeezing parameter s (cmivette)");
    cmd->add_option("--c2-sign", f.c2_sign, "sign of c2 for squeezed-thermal (+1/-1)");
}

StandardFormCM resolve_state(const StateFlags& f)
{
    if (!f.state_json.empty())
        return state_from_json(json::parse(f.state_json));
    if (!f.cm_json.empty())
        return state_from_json(json{{"cm", json::parse(f.cm_json)}});
    if (f.family.empty())
        throw ParseError("no state given: use --family, --state or --cm");
    FamilyParams p;
    p.a = f.a;
    p.b = f.b;
    p.c = f.c;
    p.nu_tilde = f.nu;
    p.r = f.r;
    p.s = f.s;
    p.c2_sign = f.c2_sign;
    return make_family(family_from_name(f.family), p);
}

std::ostream& open_output(const std::string& path, std::ofstream& file)
{
    if (path.empty() || path == "-")
        return std::cout;
    file.open(path);
    if (!file)
        throw ParseError("cannot open output file: " + path);
    return file;
}

json convert_units(json j, bool bits)
{
    if (!bits)
        return j;
    const double ln2 = std::log(2.0);
    for (const char* key : {"I_q", "M", "I_c_fock", "A_G", "I_c_G", "D_left",
                            "D_right", "D_twoway", "E_f_G"})
        if (j.contains(key) && j[key].is_number())
            j[key] = j[key].get<double>() / ln2;
    j["units"] = "bits";
    return j;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"entropic correlation measures of two-mode Gaussian states"};
    app.require_subcommand(1);
    app.fallthrough(); // global flags may follow the subcommand

    ReportOptions ropt;
    std::string out_path;
    std::string units = "nats";
    app.add_option("--tail-tol", ropt.tail_tol,
                   "photon distribution tail tolerance (default 1e-10)");
    app.add_option("--opt-tol", ropt.opt_tol,
                   "closed form vs independent maximizer tolerance (default 1e-6)");
    app.add_option("--max-photon-cutoff", ropt.max_photon_cutoff,
                   "hard cap on the photon-number cutoff");
    app.add_option("--threads", ropt.threads,
                   "worker threads (also via GAUSSDISTURB_THREADS)");
    app.add_option("--out", out_path, "output path (default stdout)");

    auto* cmd_meas = app.add_subcommand("measures", "all measures of one state (JSON)");
    StateFlags sflags;
    add_state_flags(cmd_meas, sflags);
    bool no_mid = false;
    cmd_meas->add_flag("--no-mid", no_mid, "skip the photon-counting disturbance");
    cmd_meas->add_option("--units", units, "nats (default) or bits");

    auto* cmd_sw = app.add_subcommand("sweep", "measures along a family parameter (CSV)");
    StateFlags swflags;
    add_state_flags(cmd_sw, swflags);
    SweepSpec sweep;
    cmd_sw->add_option("--sweep-key", sweep.key, "parameter to sweep: r,s,a,b,c,nu,cnorm")
        ->required();
    cmd_sw->add_option("--from", sweep.lo, "sweep start")->required();
    cmd_sw->add_option("--to", sweep.hi, "sweep end")->required();
    cmd_sw->add_option("--steps", sweep.steps, "number of points");
    bool log_scale = false;
    cmd_sw->add_flag("--log", log_scale, "log-spaced sweep");

    auto* cmd_sc = app.add_subcommand("scatter", "random states and boundary overlays (CSV)");
    ScatterSpec scatter;
    std::string purity = "mixed";
    cmd_sc->add_option("--n", scatter.n, "number of random states");
    cmd_sc->add_option("--a-max", scatter.sampler.a_max, "upper bound on a");
    cmd_sc->add_option("--b-max", scatter.sampler.b_max, "upper bound on b");
    cmd_sc->add_option("--seed", scatter.sampler.seed, "RNG seed");
    cmd_sc->add_option("--purity", purity, "mixed (default), pure, symmetric-sts");
    bool no_overlays = false;
    cmd_sc->add_flag("--no-overlays", no_overlays, "omit boundary-family rows");

    auto* cmd_ph = app.add_subcommand("photons",
                                      "joint photon-number distribution (CSV matrix)");
    StateFlags phflags;
    add_state_flags(cmd_ph, phflags);

    auto* cmd_th = app.add_subcommand(
        "threshold", "crossing of photon-counting and Gaussian disturbance (CSV)");
    ThresholdSpec thr;
    cmd_th->add_option("--a", thr.a_values, "a values of the symmetric family")
        ->required();
    cmd_th->add_option("--scan-points", thr.scan_points, "bracket scan resolution");
    cmd_th->add_option("--bisect-tol", thr.bisect_tol, "bisection tolerance on c/cmax");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    std::ofstream file;
    try {
        std::ostream& os = open_output(out_path, file);
        if (cmd_meas->parsed()) {
            ropt.with_mid = !no_mid;
            const MeasureReport rep = compute_measures(resolve_state(sflags), ropt);
            os << convert_units(to_json(rep), units == "bits").dump(2) << '\n';
        } else if (cmd_sw->parsed()) {
            sweep.log_scale = log_scale;
            if (swflags.family.empty())
                throw ParseError("sweep: --family is required");
            sweep.family = family_from_name(swflags.family);
            sweep.fixed.a = swflags.a;
            sweep.fixed.b = swflags.b;
            sweep.fixed.c = swflags.c;
            sweep.fixed.nu_tilde = swflags.nu;
            sweep.fixed.r = swflags.r;
            sweep.fixed.s = swflags.s;
            sweep.fixed.c2_sign = swflags.c2_sign;
            cmd_sweep(sweep, ropt, os);
        } else if (cmd_sc->parsed()) {
            scatter.overlays = !no_overlays;
            if (purity == "pure")
                scatter.sampler.purity_mode = PurityMode::pure;
            else if (purity == "symmetric-sts")
                scatter.sampler.purity_mode = PurityMode::symmetric_sts;
            else if (purity != "mixed")
                throw ParseError("scatter: unknown purity mode " + purity);
            cmd_scatter(scatter, ropt, os);
        } else if (cmd_ph->parsed()) {
            cmd_photons(resolve_state(phflags), ropt, os);
        } else if (cmd_th->parsed()) {
            cmd_threshold(thr, ropt, os);
        }
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const NonPhysical& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const OutOfRange& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const ConvergenceError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
