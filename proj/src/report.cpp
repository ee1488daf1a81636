#include "gaussdisturb/report.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "gaussdisturb/entropy.hpp"
#include "gaussdisturb/eof.hpp"
#include "gaussdisturb/parallel.hpp"
#include "gaussdisturb/povm.hpp"

namespace gaussdisturb {

namespace {

using nlohmann::json;

bool is_sts_symmetric(const StandardFormCM& sf)
{
    return std::abs(sf.a - sf.b) <= 1e-9 * sf.a
        && std::abs(sf.c1 + sf.c2) <= 1e-9 * std::max(1.0, sf.c1);
}

std::string fmt(double v)
{
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

} // namespace

json opt_result_to_json(const OptResult& res)
{
    json seeds;
    seeds["rA"] = res.seeds.homodyneA ? json("inf") : json(res.seeds.rA);
    seeds["rB"] = res.seeds.homodyneB ? json("inf") : json(res.seeds.rB);
    seeds["thetaA"] = res.seeds.thetaA;
    seeds["thetaB"] = res.seeds.thetaB;
    return json{{"value", res.value}, {"seeds", seeds}, {"branch", branch_name(res.branch)}};
}

MeasureReport compute_measures(const StandardFormCM& sf, const ReportOptions& opt)
{
    require_physical(sf, "compute_measures");

    MeasureReport rep;
    rep.state = sf;
    rep.tail_tol = opt.tail_tol;
    rep.opt_tol = opt.opt_tol;
    rep.I_q = quantum_mutual_information(sf);

    const OptResult amid = gaussian_amid(sf, opt.opt_tol);
    rep.A_G = amid.value;
    rep.I_c_G = rep.I_q - amid.value;
    rep.amid_branch = branch_name(amid.branch);

    const OptResult dl = gaussian_discord(sf, MeasureDirection::left, opt.opt_tol);
    const OptResult dr = gaussian_discord(sf, MeasureDirection::right, opt.opt_tol);
    rep.D_left = dl.value;
    rep.D_right = dr.value;
    rep.D_twoway = std::max(dl.value, dr.value);
    rep.discord_left_branch = branch_name(dl.branch);
    rep.discord_right_branch = branch_name(dr.branch);

    if (is_sts_symmetric(sf)) {
        const double nu_tilde = sf.a - sf.c1;
        if (nu_tilde > 0.0)
            rep.E_f_G = eof_symmetric(nu_tilde);
    }

    if (opt.with_mid) {
        FockOptions fo;
        fo.tail_tol = opt.tail_tol;
        fo.max_cutoff = opt.max_photon_cutoff;
        fo.engine = opt.fock_engine;
        try {
            const MidResult m = mid(sf, fo);
            rep.M = m.value;
            rep.I_c_fock = rep.I_q - m.value;
            rep.mid_branch = m.degenerate_marginal ? "degenerate-marginal"
                           : m.closed_form         ? "closed-form"
                                                   : "numeric";
        } catch (const ConvergenceError& e) {
            rep.M = std::numeric_limits<double>::quiet_NaN();
            rep.I_c_fock = std::numeric_limits<double>::quiet_NaN();
            rep.mid_error = e.what();
        }
    } else {
        rep.M = std::numeric_limits<double>::quiet_NaN();
        rep.I_c_fock = std::numeric_limits<double>::quiet_NaN();
        rep.mid_branch = "skipped";
    }
    return rep;
}

json state_to_json(const StandardFormCM& sf)
{
    return json{{"a", sf.a}, {"b", sf.b}, {"c1", sf.c1}, {"c2", sf.c2}};
}

StandardFormCM state_from_json(const json& j)
{
    try {
        if (j.contains("cm")) {
            const auto& rows = j.at("cm");
            if (!rows.is_array() || rows.size() != 4)
                throw ParseError("state: \"cm\" must be a 4x4 array");
            Mat4 cm;
            for (std::size_t i = 0; i < 4; ++i) {
                if (!rows[i].is_array() || rows[i].size() != 4)
                    throw ParseError("state: \"cm\" must be a 4x4 array");
                for (std::size_t k = 0; k < 4; ++k)
                    cm(i, k) = rows[i][k].get<double>();
            }
            return to_standard_form(cm);
        }
        if (j.contains("family")) {
            const StateFamily fam = family_from_name(j.at("family").get<std::string>());
            FamilyParams p;
            const json params = j.value("params", json::object());
            p.a = params.value("a", 0.0);
            p.b = params.value("b", 0.0);
            p.c = params.value("c", 0.0);
            p.nu_tilde = params.value("nu", params.value("nu_tilde", 0.0));
            p.r = params.value("r", 0.0);
            p.s = params.value("s", 0.0);
            p.c2_sign = params.value("c2_sign", -1);
            return make_family(fam, p);
        }
        StandardFormCM sf;
        sf.a = j.at("a").get<double>();
        sf.b = j.at("b").get<double>();
        sf.c1 = j.value("c1", 0.0);
        sf.c2 = j.value("c2", 0.0);
        if (sf.c1 < std::abs(sf.c2))
            return to_standard_form(to_cm(sf));
        return sf;
    } catch (const json::exception& e) {
        throw ParseError(std::string("state: ") + e.what());
    }
}

json to_json(const MeasureReport& rep)
{
    json j;
    j["state"] = state_to_json(rep.state);
    j["I_q"] = rep.I_q;
    j["M"] = std::isnan(rep.M) ? json(nullptr) : json(rep.M);
    j["I_c_fock"] = std::isnan(rep.I_c_fock) ? json(nullptr) : json(rep.I_c_fock);
    j["A_G"] = rep.A_G;
    j["I_c_G"] = rep.I_c_G;
    j["D_left"] = rep.D_left;
    j["D_right"] = rep.D_right;
    j["D_twoway"] = rep.D_twoway;
    j["E_f_G"] = rep.E_f_G ? json(*rep.E_f_G) : json(nullptr);
    j["branches"] = json{{"mid", rep.mid_branch},
                         {"amid", rep.amid_branch},
                         {"discord_left", rep.discord_left_branch},
                         {"discord_right", rep.discord_right_branch}};
    if (!rep.mid_error.empty())
        j["mid_error"] = rep.mid_error;
    j["tolerances"] = json{{"tail_tol", rep.tail_tol}, {"opt_tol", rep.opt_tol}};
    j["units"] = "nats";
    return j;
}

MeasureReport report_from_json(const json& j)
{
    MeasureReport rep;
    rep.state = state_from_json(j.at("state"));
    rep.I_q = j.at("I_q").get<double>();
    rep.M = j.at("M").is_null() ? std::numeric_limits<double>::quiet_NaN()
                                : j.at("M").get<double>();
    rep.I_c_fock = j.at("I_c_fock").is_null()
        ? std::numeric_limits<double>::quiet_NaN()
        : j.at("I_c_fock").get<double>();
    rep.A_G = j.at("A_G").get<double>();
    rep.I_c_G = j.at("I_c_G").get<double>();
    rep.D_left = j.at("D_left").get<double>();
    rep.D_right = j.at("D_right").get<double>();
    rep.D_twoway = j.at("D_twoway").get<double>();
    if (!j.at("E_f_G").is_null())
        rep.E_f_G = j.at("E_f_G").get<double>();
    rep.mid_branch = j.at("branches").at("mid").get<std::string>();
    rep.amid_branch = j.at("branches").at("amid").get<std::string>();
    rep.discord_left_branch = j.at("branches").at("discord_left").get<std::string>();
    rep.discord_right_branch = j.at("branches").at("discord_right").get<std::string>();
    rep.mid_error = j.value("mid_error", "");
    rep.tail_tol = j.at("tolerances").at("tail_tol").get<double>();
    rep.opt_tol = j.at("tolerances").value("opt_tol", 0.0);
    return rep;
}

namespace {

struct CsvRow {
    std::string family;
    std::size_t index = 0;
    std::string param; // swept parameter name
    double value = 0.0;
    StandardFormCM sf;
    MeasureReport rep;
    bool have_state = false;
    bool have_report = false;
    std::string error;
};

void write_measure_cells(std::ostream& os, const CsvRow& row)
{
    if (!row.have_report) {
        os << ",,,,,,,,,";
        return;
    }
    const MeasureReport& r = row.rep;
    os << fmt(r.I_q) << ',';
    if (std::isnan(r.M))
        os << ',';
    else
        os << fmt(r.M) << ',';
    os << fmt(r.A_G) << ',' << fmt(r.I_c_G) << ',' << fmt(r.D_left) << ','
       << fmt(r.D_right) << ',' << fmt(r.D_twoway) << ',';
    if (r.E_f_G)
        os << fmt(*r.E_f_G);
    os << ',' << r.mid_branch << ',' << r.amid_branch;
}

std::vector<CsvRow> compute_rows(std::vector<CsvRow> rows, const ReportOptions& opt)
{
    parallel_for(
        rows.size(),
        [&](std::size_t i) {
            CsvRow& row = rows[i];
            try {
                row.rep = compute_measures(row.sf, opt);
                row.have_report = true;
                if (!row.rep.mid_error.empty())
                    row.error = row.rep.mid_error;
            } catch (const Error& e) {
                row.error = e.what();
            }
        },
        opt.threads);
    return rows;
}

double sweep_value(const SweepSpec& spec, int k)
{
    const double t = spec.steps <= 1 ? 0.0 : static_cast<double>(k) / (spec.steps - 1);
    if (spec.log_scale)
        return spec.lo * std::pow(spec.hi / spec.lo, t);
    return spec.lo + (spec.hi - spec.lo) * t;
}

StandardFormCM state_for_sweep(const SweepSpec& spec, double v)
{
    FamilyParams p = spec.fixed;
    if (spec.key == "r")
        p.r = v;
    else if (spec.key == "s")
        p.s = v;
    else if (spec.key == "a")
        p.a = v;
    else if (spec.key == "b")
        p.b = v;
    else if (spec.key == "c")
        p.c = v;
    else if (spec.key == "nu")
        p.nu_tilde = v;
    else if (spec.key == "cnorm") {
        const double a = p.a;
        if (spec.family == StateFamily::SymmetricSts)
            p.c = v * std::sqrt(a * a - 1.0);
        else if (spec.family == StateFamily::SqueezedThermal)
            p.c = v * std::sqrt(std::max(0.0, a * p.b - 1.0 - std::abs(a - p.b)));
        else
            throw ParseError("sweep: cnorm applies to squeezed thermal families");
    } else
        throw ParseError("sweep: unknown key " + spec.key);
    return make_family(spec.family, p);
}

} // namespace

void cmd_sweep(const SweepSpec& spec, const ReportOptions& opt, std::ostream& os)
{
    std::vector<CsvRow> rows;
    for (int k = 0; k < spec.steps; ++k) {
        CsvRow row;
        row.family = family_name(spec.family);
        row.index = static_cast<std::size_t>(k);
        row.param = spec.key;
        row.value = sweep_value(spec, k);
        try {
            row.sf = state_for_sweep(spec, row.value);
            row.have_state = true;
        } catch (const Error& e) {
            row.error = e.what();
        }
        rows.push_back(row);
    }
    std::vector<std::size_t> valid;
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (rows[i].have_state)
            valid.push_back(i);
    parallel_for(
        valid.size(),
        [&](std::size_t k) {
            CsvRow& row = rows[valid[k]];
            try {
                row.rep = compute_measures(row.sf, opt);
                row.have_report = true;
                if (!row.rep.mid_error.empty())
                    row.error = row.rep.mid_error;
            } catch (const Error& e) {
                row.error = e.what();
            }
        },
        opt.threads);

    os << kCsvSchemaTag << '\n';
    os << "family,param,value,a,b,c1,c2,I_q,M,A_G,I_c_G,D_left,D_right,D_twoway,"
          "E_f_G,mid_branch,amid_branch,error\n";
    for (const CsvRow& row : rows) {
        os << row.family << ',' << row.param << ',' << fmt(row.value) << ',';
        if (row.have_state)
            os << fmt(row.sf.a) << ',' << fmt(row.sf.b) << ',' << fmt(row.sf.c1)
               << ',' << fmt(row.sf.c2) << ',';
        else
            os << ",,,,";
        write_measure_cells(os, row);
        os << ',' << row.error << '\n';
    }
}

void cmd_scatter(const ScatterSpec& spec, const ReportOptions& opt, std::ostream& os)
{
    std::vector<CsvRow> rows;
    rows.reserve(spec.n + 220);
    {
        StateSampler sampler(spec.sampler);
        for (std::size_t i = 0; i < spec.n; ++i) {
            CsvRow row;
            row.family = "random";
            row.index = i;
            row.sf = sampler.next();
            row.have_state = true;
            rows.push_back(row);
        }
    }
    if (spec.overlays) {
        const auto push_family = [&](const char* name, StandardFormCM sf, std::size_t idx) {
            CsvRow row;
            row.family = name;
            row.index = idx;
            row.sf = sf;
            row.have_state = true;
            rows.push_back(row);
        };
        for (int k = 0; k < 60; ++k)
            push_family("pure", pure_tmsv(0.05 + (3.0 - 0.05) * k / 59.0), k);
        for (int k = 0; k < 60; ++k)
            push_family("cmivette", cmivette(0.05 + (3.0 - 0.05) * k / 59.0, 8.0), k);
        for (int k = 0; k < 40; ++k) {
            const double nu = 0.05 + (0.999 - 0.05) * k / 39.0;
            push_family("gmems", gmems(100.0, nu), k);
            push_family("glems", glems(100.0, nu), k);
        }
    }

    rows = compute_rows(std::move(rows), opt);

    os << kCsvSchemaTag << '\n';
    os << "family,index,a,b,c1,c2,nu_minus,pt_nu_minus,I_q,M,I_c_fock,A_G,I_c_G,"
          "D_left,D_right,D_twoway,E_f_G,error\n";
    for (const CsvRow& row : rows) {
        os << row.family << ',' << row.index << ',' << fmt(row.sf.a) << ','
           << fmt(row.sf.b) << ',' << fmt(row.sf.c1) << ',' << fmt(row.sf.c2) << ',';
        os << fmt(symplectic_eigenvalues(row.sf).nu_minus) << ','
           << fmt(partial_transpose_spectrum(row.sf).nu_minus) << ',';
        if (row.have_report) {
            const MeasureReport& r = row.rep;
            os << fmt(r.I_q) << ',';
            os << (std::isnan(r.M) ? std::string() : fmt(r.M)) << ',';
            os << (std::isnan(r.I_c_fock) ? std::string() : fmt(r.I_c_fock)) << ',';
            os << fmt(r.A_G) << ',' << fmt(r.I_c_G) << ',' << fmt(r.D_left) << ','
               << fmt(r.D_right) << ',' << fmt(r.D_twoway) << ',';
            if (r.E_f_G)
                os << fmt(*r.E_f_G);
        } else {
            os << ",,,,,,,,";
        }
        os << ',' << row.error << '\n';
    }
}

ThresholdRow find_threshold(double a, const ThresholdSpec& spec, const ReportOptions& opt)
{
    ThresholdRow row;
    row.a = a;
    const double cmax = std::sqrt(a * a - 1.0);
    FockOptions fo;
    fo.tail_tol = opt.tail_tol;
    fo.max_cutoff = opt.max_photon_cutoff;
    fo.engine = opt.fock_engine;
    fo.allow_closed_form = true;

    const auto gap = [&](double cn) {
        const StandardFormCM sf = symmetric_sts(a, cn * cmax);
        return mid(sf, fo).value - gaussian_amid(sf, opt.opt_tol).value;
    };

    // photon counting overtakes Gaussian POVMs past the crossing; scan for
    // the sign change, then bisect
    double prev_cn = 0.02, prev_g = gap(prev_cn);
    double lo = 0.0, hi = 0.0;
    for (int k = 1; k < spec.scan_points; ++k) {
        const double cn = 0.02 + (0.998 - 0.02) * k / (spec.scan_points - 1.0);
        const double g = gap(cn);
        if ((prev_g > 0.0) != (g > 0.0)) {
            lo = prev_cn;
            hi = cn;
            break;
        }
        prev_cn = cn;
        prev_g = g;
    }
    if (hi == 0.0)
        return row; // no crossing found
    double glo = gap(lo);
    while (hi - lo > spec.bisect_tol) {
        const double mid_cn = 0.5 * (lo + hi);
        const double g = gap(mid_cn);
        if ((g > 0.0) == (glo > 0.0)) {
            lo = mid_cn;
            glo = g;
        } else {
            hi = mid_cn;
        }
    }
    row.found = true;
    row.c_star_norm = 0.5 * (lo + hi);
    row.c_star = row.c_star_norm * cmax;
    return row;
}

void cmd_photons(const StandardFormCM& sf, const ReportOptions& opt, std::ostream& os)
{
    FockOptions fo;
    fo.tail_tol = opt.tail_tol;
    fo.max_cutoff = opt.max_photon_cutoff;
    fo.engine = opt.fock_engine;
    const JointPhotonDistribution dist = joint_photon_distribution(sf, fo);
    os << kCsvSchemaTag << '\n';
    os << "# state a=" << fmt(sf.a) << " b=" << fmt(sf.b) << " c1=" << fmt(sf.c1)
       << " c2=" << fmt(sf.c2) << " cutoff=" << dist.cutoff
       << " tail_mass=" << fmt(dist.tail_mass) << '\n';
    for (int m = 0; m <= dist.cutoff; ++m) {
        for (int n = 0; n <= dist.cutoff; ++n) {
            if (n)
                os << ',';
            os << fmt(dist.at(m, n));
        }
        os << '\n';
    }
}

void cmd_threshold(const ThresholdSpec& spec, const ReportOptions& opt, std::ostream& os)
{
    std::vector<ThresholdRow> rows(spec.a_values.size());
    parallel_for(
        rows.size(),
        [&](std::size_t i) { rows[i] = find_threshold(spec.a_values[i], spec, opt); },
        opt.threads);

    os << kCsvSchemaTag << '\n';
    os << "a,a_norm,c_star,c_star_norm,status\n";
    for (const ThresholdRow& row : rows) {
        os << fmt(row.a) << ',' << fmt((row.a - 1.0) / row.a) << ',';
        if (row.found)
            os << fmt(row.c_star) << ',' << fmt(row.c_star_norm) << ",ok\n";
        else
            os << ",,no-crossing\n";
    }
}

} // namespace gaussdisturb
