#include <cmath>
#include <complex>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "common.hpp"
#include "nmm/acceptance.hpp"
#include "nmm/curve.hpp"
#include "nmm/gas.hpp"
#include "nmm/level_spacing.hpp"
#include "nmm/orthopoly.hpp"
#include "nmm/schwarz.hpp"
#include "nmm/serialize.hpp"
#include "nmm/toda.hpp"

namespace {

using nmm::cplx;
using nmmcli::RunMeta;

struct PotentialFlags {
    double t0 = 0.0;
    std::vector<std::string> tk = std::vector<std::string>(6);
    int N = 0;

    void attach(CLI::App* cmd, bool with_n = true) {
        cmd->add_option("--t0", t0, "area parameter t0 > 0")->required();
        for (int k = 1; k <= 6; ++k)
            cmd->add_option("--t" + std::to_string(k), tk[k - 1],
                            "harmonic moment t_" + std::to_string(k) + " as re[,im]");
        if (with_n) cmd->add_option("--N", N, "matrix size / inverse temperature")->required();
    }

    std::vector<cplx> moments_vector() const {
        std::vector<cplx> t;
        for (const auto& entry : tk)
            t.push_back(entry.empty() ? cplx(0.0) : nmm::parse_complex(entry));
        while (!t.empty() && t.back() == cplx(0.0)) t.pop_back();
        return t;
    }

    nmm::PotentialSpec potential() const { return {t0, moments_vector(), N}; }

    void record(RunMeta& meta, bool with_n = true) const {
        meta.config["t0"] = nmmcli::format_param(t0);
        auto t = moments_vector();
        for (std::size_t k = 0; k < t.size(); ++k)
            meta.config["t" + std::to_string(k + 1)] =
                nmmcli::format_param(t[k].real()) + "," + nmmcli::format_param(t[k].imag());
        if (with_n) meta.config["N"] = std::to_string(N);
    }
};

std::filesystem::path out_path(const std::string& out_dir, const std::string& name) {
    std::filesystem::create_directories(out_dir);
    return std::filesystem::path(out_dir) / name;
}

// ---- curve -----------------------------------------------------------------

int run_curve(const std::vector<std::string>& pairs, bool from_moments, bool shifted,
              double tol, int max_iter, const std::string& out_dir) {
    std::map<std::string, cplx> fields;
    for (const auto& token : pairs) {
        auto eq = token.find('=');
        if (eq == std::string::npos)
            return nmmcli::fail_json(nmmcli::exit_usage, "usage",
                                     {{"message", "expected key=value, got " + token}});
        fields[token.substr(0, eq)] = nmm::parse_complex(token.substr(eq + 1));
    }

    RunMeta meta;
    meta.command = from_moments ? "curve --from-moments" : "curve --from-coeffs";
    for (const auto& [key, value] : fields)
        meta.config[key] =
            nmmcli::format_param(value.real()) + "," + nmmcli::format_param(value.imag());
    meta.config["tol"] = nmmcli::format_param(tol);

    nmm::PolynomialCurve curve;
    try {
        if (from_moments) {
            nmm::HarmonicMoments target;
            if (!fields.count("t0"))
                return nmmcli::fail_json(nmmcli::exit_usage, "usage", {{"message", "t0 missing"}});
            target.t0 = fields["t0"].real();
            int top = 0;
            for (const auto& [key, value] : fields) {
                if (key.size() < 2 || key[0] != 't' || key == "t0") continue;
                top = std::max(top, std::stoi(key.substr(1)));
            }
            target.t.assign(std::max(top, 1), cplx(0.0));
            for (const auto& [key, value] : fields) {
                if (key.size() < 2 || key[0] != 't' || key == "t0") continue;
                target.t[std::stoi(key.substr(1)) - 1] = value;
            }
            auto fit = nmm::fit_curve_from_moments(target, tol, max_iter);
            if (!fit.converged)
                return nmmcli::fail_json(nmmcli::exit_numerical, "newton",
                                         {{"message", fit.message}, {"residual", fit.residual}});
            curve = fit.curve;
        } else {
            if (!fields.count("r"))
                return nmmcli::fail_json(nmmcli::exit_usage, "usage", {{"message", "r missing"}});
            curve.r = fields["r"].real();
            int top = -1;
            for (const auto& [key, value] : fields)
                if (key[0] == 'a') top = std::max(top, std::stoi(key.substr(1)));
            curve.a.assign(top + 1, cplx(0.0));
            for (const auto& [key, value] : fields)
                if (key[0] == 'a') curve.a[std::stoi(key.substr(1))] = value;
        }

        auto validation = nmm::validate_curve(curve);
        int k_max = std::max(curve.degree() + 1, 1);
        nmm::MomentOptions options;
        options.shifted = shifted || !validation.encircles_origin;
        auto moments = nmm::moments_of_curve(curve, k_max, options);
        auto interior =
            validation.encircles_origin ? nmm::interior_moments(curve, 5) : nmm::InteriorMoments{};

        nlohmann::json j;
        j["meta"] = meta.to_json();
        j["curve"] = nlohmann::json::parse(nmm::curve_to_json(curve));
        j["degree"] = curve.degree();
        j["critical_radius"] = nmm::critical_radius(curve);
        j["moments"] = nlohmann::json::parse(nmm::moments_to_json(moments));
        j["interior_moments"] = nlohmann::json::array();
        for (const auto& vk : interior.v) j["interior_moments"].push_back(nmmcli::complex_json(vk));
        j["validation"] = {{"valid", validation.valid},
                           {"critical_radius", validation.critical_radius},
                           {"min_secant_ratio", validation.min_secant_ratio},
                           {"tangent_winding", validation.tangent_winding},
                           {"encircles_origin", validation.encircles_origin},
                           {"failure", validation.failure}};
        nmm::write_text_file(out_path(out_dir, "curve.json"), j.dump(2) + "\n");

        nmm::CsvWriter boundary;
        boundary.metadata = meta.csv_lines();
        boundary.header = {"theta", "re", "im"};
        int nodes = 512;
        for (int i = 0; i < nodes; ++i) {
            double theta = 2.0 * nmm::pi * i / nodes;
            cplx z = nmm::eval_map(curve, std::polar(1.0, theta));
            boundary.add_row({theta, z.real(), z.imag()});
        }
        boundary.write(out_path(out_dir, "boundary.csv"));
    } catch (const nmm::NewtonError& error) {
        return nmmcli::fail_json(nmmcli::exit_numerical, "newton",
                                 {{"message", error.what()}, {"residual", error.residual}});
    } catch (const std::exception& error) {
        return nmmcli::fail_json(nmmcli::exit_numerical, "curve", {{"message", error.what()}});
    }
    std::cout << "wrote curve.json and boundary.csv to " << out_dir << "\n";
    return nmmcli::exit_ok;
}

// ---- ortho -----------------------------------------------------------------

int run_ortho(const PotentialFlags& flags, int n_max, int n_r, int n_theta, int zeros_n,
              const std::string& out_dir) {
    RunMeta meta;
    meta.command = "ortho";
    flags.record(meta);
    meta.config["n_max"] = std::to_string(n_max);
    meta.config["n_r"] = std::to_string(n_r);
    meta.config["n_theta"] = std::to_string(n_theta);

    try {
        auto pot = flags.potential();
        auto grid = nmm::build_grid(nmm::default_cutoff(pot, n_max), n_r, n_theta);
        auto family = nmm::build_family(pot, grid, n_max);
        if (family.truncated) {
            return nmmcli::fail_json(
                nmmcli::exit_precision, "positivity",
                {{"message", family.warning}, {"achieved_n_max", family.n_max}});
        }

        nmm::CsvWriter norms;
        norms.metadata = meta.csv_lines();
        norms.header = {"n", "h_n", "log_h_n"};
        for (int n = 0; n <= family.n_max; ++n)
            norms.add_row({static_cast<double>(n), family.norms[n], std::log(family.norms[n])});
        norms.write(out_path(out_dir, "norms.csv"));

        if (pot.degree() >= 0 && pot.symmetry_period() == pot.degree() + 1) {
            auto recursion = nmm::recursion_coefficients(family);
            nmm::CsvWriter rec;
            rec.metadata = meta.csv_lines();
            rec.header = {"n", "r_n", "abs_a_n"};
            for (int n = 1; n <= family.n_max; ++n) {
                double abs_a = (n - 1 < static_cast<int>(recursion.a.size()))
                                   ? std::abs(recursion.a[n - 1])
                                   : 0.0;
                rec.add_row({static_cast<double>(n), recursion.r[n], abs_a});
            }
            rec.write(out_path(out_dir, "recursion.csv"));
        }

        int zn = (zeros_n > 0) ? zeros_n : family.n_max;
        auto zeros = nmm::polynomial_zeros(family, zn);
        nmm::CsvWriter zcsv;
        zcsv.metadata = meta.csv_lines();
        zcsv.header = {"n", "re", "im"};
        for (const auto& z : zeros) zcsv.add_row({static_cast<double>(zn), z.real(), z.imag()});
        zcsv.write(out_path(out_dir, "zeros_" + std::to_string(zn) + ".csv"));

        nlohmann::json residuals;
        residuals["meta"] = meta.to_json();
        auto identity = nmm::check_operator_identity(family);
        residuals["operator_identity_residual"] = identity.max_residual;
        residuals["boundary_term_estimate"] = identity.boundary_estimate;
        if (pot.degree() >= 1 && family.n_max >= pot.N) {
            auto string_report = nmm::check_string_equation(family);
            residuals["string_diag_deviation"] = string_report.max_diag_deviation;
            residuals["string_offdiag"] = string_report.max_offdiag;
            residuals["string_target"] = string_report.target;
        }
        nmm::write_text_file(out_path(out_dir, "string_residuals.json"),
                             residuals.dump(2) + "\n");

        if (family.n_max >= pot.N - 1) {
            nmm::CsvWriter profile;
            profile.metadata = meta.csv_lines();
            profile.header = {"re_z", "im_z", "density"};
            int samples = 256;
            for (int i = 0; i < samples; ++i) {
                cplx z(grid.cutoff_radius * i / samples, 0.0);
                profile.add_row({z.real(), z.imag(), nmm::one_point_density(family, z)});
            }
            profile.write(out_path(out_dir, "density_profile.csv"));
        }
    } catch (const std::exception& error) {
        return nmmcli::fail_json(nmmcli::exit_numerical, "ortho", {{"message", error.what()}});
    }
    std::cout << "wrote norms/recursion/zeros/string_residuals/density files to " << out_dir
              << "\n";
    return nmmcli::exit_ok;
}

// ---- gas -------------------------------------------------------------------

int run_gas(const PotentialFlags& flags, const nmm::GasOptions& options,
            const std::string& out_dir) {
    RunMeta meta;
    meta.command = "gas";
    flags.record(meta);
    meta.config["steps"] = std::to_string(options.sweeps);
    meta.config["burn_in"] = std::to_string(options.burn_in);
    meta.config["seed"] = std::to_string(options.seed);
    meta.config["thin"] = std::to_string(options.thin);
    meta.config["bins"] = std::to_string(options.histogram_bins);

    try {
        auto run = nmm::mcmc_run(flags.potential(), options);

        nlohmann::json j;
        j["meta"] = meta.to_json();
        j["seed"] = options.seed;
        j["rng"] = run.rng_algorithm;
        j["acceptance_rate"] = run.acceptance_rate;
        j["proposal_scale"] = run.state.proposal_scale;
        j["log_weight"] = run.state.log_weight;
        j["log_weight_drift"] = run.log_weight_drift;
        j["samples"] = run.histogram.samples;
        j["moments"] = nlohmann::json::array();
        for (std::size_t k = 0; k < run.moments.size(); ++k) {
            j["moments"].push_back({{"k", k + 1},
                                    {"mean", nmmcli::complex_json(run.moments[k].mean)},
                                    {"se_re", run.moments[k].se_re},
                                    {"se_im", run.moments[k].se_im}});
        }
        nmm::write_text_file(out_path(out_dir, "gas_run.json"), j.dump(2) + "\n");

        nmm::CsvWriter histogram;
        histogram.metadata = meta.csv_lines();
        histogram.header = {"ix", "iy", "center_re", "center_im", "mass"};
        const auto& grid = run.histogram.grid;
        for (int iy = 0; iy < grid.ny; ++iy)
            for (int ix = 0; ix < grid.nx; ++ix) {
                double mass = run.histogram.mass[static_cast<std::size_t>(iy) * grid.nx + ix];
                if (mass == 0.0) continue;
                cplx c = grid.cell_center(ix, iy);
                histogram.add_row({static_cast<double>(ix), static_cast<double>(iy), c.real(),
                                   c.imag(), mass});
            }
        histogram.write(out_path(out_dir, "histogram.csv"));
    } catch (const std::exception& error) {
        return nmmcli::fail_json(nmmcli::exit_numerical, "gas", {{"message", error.what()}});
    }
    std::cout << "wrote gas_run.json and histogram.csv to " << out_dir << "\n";
    return nmmcli::exit_ok;
}

// ---- toda ------------------------------------------------------------------

int run_toda(const PotentialFlags& flags, int flow_k, double eps, const std::string& out_dir) {
    RunMeta meta;
    meta.command = "toda";
    flags.record(meta, false);
    meta.config["flow"] = std::to_string(flow_k);

    try {
        nmm::HarmonicMoments moments{flags.t0, flags.moments_vector()};
        auto report = nmm::verify_flow(moments, flow_k, eps);
        meta.config["epsilon"] = nmmcli::format_param(report.eps);

        nlohmann::json j;
        j["meta"] = meta.to_json();
        j["flow_k"] = report.flow_index;
        j["epsilon"] = report.eps;
        j["residual_z"] = report.residual_z;
        j["residual_ztilde"] = report.residual_ztilde;
        j["string_residual"] = report.string_residual;
        nmm::write_text_file(out_path(out_dir, "toda_residuals.json"), j.dump(2) + "\n");
        std::cout << "flow " << flow_k << ": residual_z " << report.residual_z << ", string "
                  << report.string_residual << "\n";
    } catch (const nmm::NewtonError& error) {
        return nmmcli::fail_json(nmmcli::exit_numerical, "newton",
                                 {{"message", error.what()}, {"residual", error.residual}});
    } catch (const std::exception& error) {
        return nmmcli::fail_json(nmmcli::exit_numerical, "toda", {{"message", error.what()}});
    }
    return nmmcli::exit_ok;
}

// ---- levelspacing ------------------------------------------------------------

int run_levelspacing(double t0, int N, double x, const std::string& out_dir) {
    RunMeta meta;
    meta.command = "levelspacing";
    meta.config["t0"] = nmmcli::format_param(t0);
    meta.config["N"] = std::to_string(N);
    meta.config["x"] = nmmcli::format_param(x);

    try {
        auto table = nmm::gaussian_level_spacing_table(t0, N, x);
        nmm::CsvWriter csv;
        csv.metadata = meta.csv_lines();
        csv.header = {"n", "A_N"};
        double sum = 0.0;
        for (int n = 0; n <= N; ++n) {
            csv.add_row({static_cast<double>(n), table[n]});
            sum += table[n];
        }
        csv.write(out_path(out_dir, "levelspacing.csv"));
        std::cout << "sum over n: " << nmm::format_double(sum) << "\n";
    } catch (const std::exception& error) {
        return nmmcli::fail_json(nmmcli::exit_numerical, "levelspacing",
                                 {{"message", error.what()}});
    }
    return nmmcli::exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Normal matrix model laboratory: polynomial curves, Schwarz functions, "
                 "orthogonal polynomials, Coulomb gas, and Toda flow checks"};
    app.require_subcommand(1);
    app.set_config("--config", "", "flat key=value configuration file; flags win");
    std::string out_dir = ".";
    app.add_option("--out", out_dir, "output directory")->capture_default_str();

    auto* curve_cmd = app.add_subcommand("curve", "forward/inverse moment map for one curve");
    std::vector<std::string> curve_pairs;
    bool from_moments = false, from_coeffs = false, shifted = false;
    double curve_tol = 1e-12;
    int curve_iter = 100;
    curve_cmd->add_flag("--from-moments", from_moments, "treat pairs as t0=..., tk=...");
    curve_cmd->add_flag("--from-coeffs", from_coeffs, "treat pairs as r=..., aj=...");
    curve_cmd->add_flag("--shifted", shifted, "allow curves that do not enclose the origin");
    curve_cmd->add_option("--tol", curve_tol, "moment-matching tolerance")->capture_default_str();
    curve_cmd->add_option("--max-iter", curve_iter, "Newton iteration cap")->capture_default_str();
    curve_cmd->add_option("pairs", curve_pairs, "key=value parameters");

    auto* ortho_cmd = app.add_subcommand("ortho", "orthogonal polynomial family and reports");
    PotentialFlags ortho_flags;
    ortho_flags.attach(ortho_cmd);
    int n_max = 0, n_r = 200, n_theta = 0, zeros_n = 0;
    ortho_cmd->add_option("--n-max", n_max, "highest polynomial degree")->required();
    ortho_cmd->add_option("--n-r", n_r, "radial quadrature points")->capture_default_str();
    ortho_cmd->add_option("--n-theta", n_theta, "angular quadrature points (0: auto)");
    ortho_cmd->add_option("--zeros-n", zeros_n, "degree for the zeros file (0: n_max)");

    auto* gas_cmd = app.add_subcommand("gas", "Metropolis sampler for the eigenvalue gas");
    PotentialFlags gas_flags;
    gas_flags.attach(gas_cmd);
    nmm::GasOptions gas_options;
    long steps = 200000;
    gas_cmd->add_option("--steps", steps, "total sweeps")->capture_default_str();
    gas_cmd->add_option("--burn-in", gas_options.burn_in, "burn-in sweeps")->capture_default_str();
    gas_cmd->add_option("--seed", gas_options.seed, "RNG seed")->capture_default_str();
    gas_cmd->add_option("--thin", gas_options.thin, "sampling stride")->capture_default_str();
    gas_cmd->add_option("--bins", gas_options.histogram_bins, "histogram bins per side")
        ->capture_default_str();
    gas_cmd->add_option("--scale", gas_options.proposal_scale, "proposal scale (0: adaptive)");

    auto* toda_cmd = app.add_subcommand("toda", "dispersionless flow and string residuals");
    PotentialFlags toda_flags;
    toda_flags.attach(toda_cmd, false);
    int flow_k = 1;
    double toda_eps = 0.0;
    toda_cmd->add_option("--flow", flow_k, "flow index k")->required();
    toda_cmd->add_option("--eps", toda_eps, "finite-difference step (0: default)");

    auto* level_cmd = app.add_subcommand("levelspacing", "exact A_N(n) table");
    double ls_t0 = 0.0, ls_x = 0.0;
    int ls_n = 0;
    level_cmd->add_option("--t0", ls_t0, "area parameter")->required();
    level_cmd->add_option("--N", ls_n, "matrix size")->required();
    level_cmd->add_option("--x", ls_x, "disc radius parameter, lambda = sqrt(x/N)")->required();

    auto* check_cmd = app.add_subcommand("check", "run the acceptance suite");
    std::vector<int> check_ids;
    check_cmd->add_option("--only", check_ids, "criterion ids to run (default: all)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& help) {
        return app.exit(help);
    } catch (const CLI::ParseError& error) {
        app.exit(error);
        return nmmcli::exit_usage;
    }

    if (curve_cmd->parsed()) {
        if (from_moments == from_coeffs)
            return nmmcli::fail_json(
                nmmcli::exit_usage, "usage",
                {{"message", "exactly one of --from-moments/--from-coeffs required"}});
        return run_curve(curve_pairs, from_moments, shifted, curve_tol, curve_iter, out_dir);
    }
    if (ortho_cmd->parsed()) {
        if (n_theta == 0)
            n_theta = 4 * n_max + 4 * static_cast<int>(ortho_flags.moments_vector().size()) + 8;
        return run_ortho(ortho_flags, n_max, n_r, n_theta, zeros_n, out_dir);
    }
    if (gas_cmd->parsed()) {
        gas_options.sweeps = steps;
        return run_gas(gas_flags, gas_options, out_dir);
    }
    if (toda_cmd->parsed()) return run_toda(toda_flags, flow_k, toda_eps, out_dir);
    if (level_cmd->parsed()) return run_levelspacing(ls_t0, ls_n, ls_x, out_dir);
    if (check_cmd->parsed()) {
        int failures = nmm::accept::run_criteria(check_ids);
        return failures == 0 ? nmmcli::exit_ok : 1;
    }
    return nmmcli::exit_usage;
}
