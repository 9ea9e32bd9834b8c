#include "nmm/gas.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "nmm/rng.hpp"
#include "nmm/schwarz.hpp"

namespace nmm {

double gas_energy(std::span<const cplx> positions, const PotentialSpec& potential) {
    double n = static_cast<double>(positions.size());
    double v = 0.0;
    for (const auto& z : positions) v += potential(z);
    double interaction = 0.0;
    for (std::size_t i = 0; i < positions.size(); ++i) {
        for (std::size_t j = i + 1; j < positions.size(); ++j) {
            double dist = std::abs(positions[i] - positions[j]);
            if (dist == 0.0) return std::numeric_limits<double>::infinity();
            interaction -= 2.0 * std::log(dist);
        }
    }
    return v / n + interaction / (n * n);
}

double gas_log_weight(std::span<const cplx> positions, const PotentialSpec& potential) {
    double sum = 0.0;
    for (const auto& z : positions) sum -= potential.N * potential(z);
    for (std::size_t i = 0; i < positions.size(); ++i)
        for (std::size_t j = i + 1; j < positions.size(); ++j)
            sum += 2.0 * std::log(std::abs(positions[i] - positions[j]));
    return sum;
}

namespace {

struct Chain {
    const PotentialSpec& pot;
    double cutoff;
    std::vector<cplx> z;
    double log_weight;
    Rng rng;
    double scale;
    long proposals = 0;
    long accepted = 0;
    double drift = 0.0;

    Chain(const PotentialSpec& potential, double cutoff_radius, std::uint64_t seed,
          double initial_scale)
        : pot(potential), cutoff(cutoff_radius), rng(seed), scale(initial_scale) {
        z.resize(pot.N);
        double spread = std::sqrt(pot.t0);
        for (auto& zi : z) {
            do {
                zi = cplx(rng.uniform(-1.5 * spread, 1.5 * spread),
                          rng.uniform(-1.5 * spread, 1.5 * spread));
            } while (std::abs(zi) >= cutoff);
        }
        log_weight = gas_log_weight(z, pot);
    }

    void sweep() {
        int n = pot.N;
        for (int i = 0; i < n; ++i) {
            ++proposals;
            cplx step = scale * rng.normal_complex();
            cplx trial = z[i] + step;
            if (std::abs(trial) >= cutoff) continue;  // reject outside the cut-off
            double delta = -pot.N * (pot(trial) - pot(z[i]));
            bool collision = false;
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                double dn = std::abs(trial - z[j]);
                if (dn == 0.0) {
                    collision = true;
                    break;
                }
                delta += 2.0 * (std::log(dn) - std::log(std::abs(z[i] - z[j])));
            }
            if (collision) continue;
            if (delta >= 0.0 || rng.uniform() < std::exp(delta)) {
                z[i] = trial;
                log_weight += delta;
                ++accepted;
            }
        }
    }

    void refresh_log_weight() {
        double exact = gas_log_weight(z, pot);
        double gap = std::abs(exact - log_weight) / std::max(1.0, std::abs(exact));
        drift = std::max(drift, gap);
        log_weight = exact;
    }
};

}  // namespace

GasRun mcmc_run(const PotentialSpec& potential, const GasOptions& options) {
    if (potential.N < 2) throw std::invalid_argument("mcmc_run: need N >= 2");
    if (options.sweeps <= options.burn_in)
        throw std::invalid_argument("mcmc_run: sweeps must exceed burn_in");

    double cutoff = options.cutoff_radius;
    if (cutoff <= 0.0) cutoff = default_cutoff(potential, potential.N);
    double scale0 = options.proposal_scale;
    if (scale0 <= 0.0) scale0 = 0.3 * std::sqrt(potential.t0);
    int moment_count = options.moment_count;
    if (moment_count <= 0) moment_count = std::max(3, potential.degree() + 3);  // k = 1..d+3

    Chain chain(potential, cutoff, options.seed, scale0);

    GasRun run;
    run.rng_algorithm = Rng::algorithm;
    run.energy_trace.reserve(options.energy_trace_points);

    // Burn-in with scale adaptation toward acceptance in [0.3, 0.5].
    long adapt_interval = std::max<long>(50, options.burn_in / 40);
    long trace_interval = std::max<long>(1, options.burn_in / options.energy_trace_points);
    long window_proposals = 0, window_accepted = 0;
    for (long sweep = 0; sweep < options.burn_in; ++sweep) {
        long before_p = chain.proposals, before_a = chain.accepted;
        chain.sweep();
        window_proposals += chain.proposals - before_p;
        window_accepted += chain.accepted - before_a;
        if ((sweep + 1) % adapt_interval == 0) {
            double rate = static_cast<double>(window_accepted) / window_proposals;
            if (rate < 0.3)
                chain.scale *= 0.8;
            else if (rate > 0.5)
                chain.scale *= 1.25;
            window_proposals = window_accepted = 0;
        }
        if (sweep % trace_interval == 0)
            run.energy_trace.push_back(-chain.log_weight / (potential.N * potential.N));
        if ((sweep + 1) % 10000 == 0) chain.refresh_log_weight();
    }
    chain.proposals = chain.accepted = 0;  // acceptance is reported post burn-in

    // Measurement phase.
    RasterGrid hist_grid;
    hist_grid.nx = hist_grid.ny = options.histogram_bins;
    hist_grid.x0 = hist_grid.y0 = -cutoff;
    hist_grid.dx = hist_grid.dy = 2.0 * cutoff / options.histogram_bins;
    std::vector<double> mass(static_cast<std::size_t>(hist_grid.nx) * hist_grid.ny, 0.0);

    long measure_sweeps = options.sweeps - options.burn_in;
    std::vector<std::vector<cplx>> batch_sums;  // per batch, per moment k
    int batches = 64;
    long batch_len = std::max<long>(1, measure_sweeps / (options.thin * batches));
    std::vector<cplx> current_batch(moment_count, cplx(0.0));
    long in_batch = 0;
    long samples = 0;

    for (long sweep = 0; sweep < measure_sweeps; ++sweep) {
        chain.sweep();
        if ((options.burn_in + sweep + 1) % 10000 == 0) chain.refresh_log_weight();
        if (sweep % options.thin != 0) continue;
        ++samples;

        for (const auto& zi : chain.z) {
            int ix = static_cast<int>((zi.real() - hist_grid.x0) / hist_grid.dx);
            int iy = static_cast<int>((zi.imag() - hist_grid.y0) / hist_grid.dy);
            ix = std::clamp(ix, 0, hist_grid.nx - 1);
            iy = std::clamp(iy, 0, hist_grid.ny - 1);
            mass[static_cast<std::size_t>(iy) * hist_grid.nx + ix] += 1.0;
        }

        cplx zp;
        std::vector<cplx> power_sum(moment_count, cplx(0.0));
        for (const auto& zi : chain.z) {
            zp = zi;
            for (int k = 0; k < moment_count; ++k) {
                power_sum[k] += zp;
                zp *= zi;
            }
        }
        double prefactor = potential.t0 / potential.N;
        for (int k = 0; k < moment_count; ++k) current_batch[k] += prefactor * power_sum[k];
        if (++in_batch == batch_len) {
            for (auto& s : current_batch) s /= static_cast<double>(batch_len);
            batch_sums.push_back(current_batch);
            std::fill(current_batch.begin(), current_batch.end(), cplx(0.0));
            in_batch = 0;
        }
    }

    run.moments.assign(moment_count, {});
    if (!batch_sums.empty()) {
        double b = static_cast<double>(batch_sums.size());
        for (int k = 0; k < moment_count; ++k) {
            cplx mean = 0.0;
            for (const auto& batch : batch_sums) mean += batch[k];
            mean /= b;
            double var_re = 0.0, var_im = 0.0;
            for (const auto& batch : batch_sums) {
                var_re += std::pow(batch[k].real() - mean.real(), 2);
                var_im += std::pow(batch[k].imag() - mean.imag(), 2);
            }
            run.moments[k].mean = mean;
            if (b > 1.5) {
                run.moments[k].se_re = std::sqrt(var_re / (b * (b - 1.0)));
                run.moments[k].se_im = std::sqrt(var_im / (b * (b - 1.0)));
            }
        }
    }

    double total = 0.0;
    for (double m : mass) total += m;
    if (total > 0.0)
        for (auto& m : mass) m /= total;

    run.histogram.grid = hist_grid;
    run.histogram.mass = std::move(mass);
    run.histogram.samples = samples;
    run.acceptance_rate = chain.proposals ? static_cast<double>(chain.accepted) / chain.proposals
                                          : 0.0;
    chain.refresh_log_weight();
    run.log_weight_drift = chain.drift;
    run.state.positions = chain.z;
    run.state.log_weight = chain.log_weight;
    run.state.steps = chain.proposals;
    run.state.accepted = chain.accepted;
    run.state.seed = options.seed;
    run.state.proposal_scale = chain.scale;
    return run;
}

DensityCompareReport density_compare(const EmpiricalMeasure& measure,
                                     const PolynomialCurve& curve, double boundary_margin) {
    auto polyline = boundary_polyline(curve, 4096);
    const RasterGrid& grid = measure.grid;
    double bin_area = grid.dx * grid.dy;
    auto inside = interior_mask(polyline, grid);

    double curve_diameter = 0.0;
    for (std::size_t i = 0; i < polyline.size(); i += 16)
        for (std::size_t j = i; j < polyline.size(); j += 16)
            curve_diameter = std::max(curve_diameter, std::abs(polyline[i] - polyline[j]));

    DensityCompareReport report;
    double t0 = curve.r * curve.r;
    for (std::size_t j = 1; j < curve.a.size(); ++j)
        t0 -= static_cast<double>(j) * std::norm(curve.a[j]);
    report.target_density = 1.0 / (pi * t0);

    auto distance_to_boundary = [&polyline](cplx z) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < polyline.size(); i += 8)
            best = std::min(best, std::abs(z - polyline[i]));
        return best;
    };

    double interior_density_sum = 0.0;
    for (int iy = 0; iy < grid.ny; ++iy) {
        for (int ix = 0; ix < grid.nx; ++ix) {
            double m = measure.mass[static_cast<std::size_t>(iy) * grid.nx + ix];
            cplx center = grid.cell_center(ix, iy);
            bool center_inside = inside[static_cast<std::size_t>(iy) * grid.nx + ix] != 0;
            if (center_inside) report.interior_mass += m;

            double dist = distance_to_boundary(center);
            if (center_inside && dist > boundary_margin) {
                // Require the whole bin inside, not just its centre.
                double half_diag = 0.5 * std::hypot(grid.dx, grid.dy);
                if (dist > boundary_margin + half_diag) {
                    interior_density_sum += m / bin_area;
                    ++report.interior_bins;
                }
            }
            if (!center_inside && dist > 0.5 * curve_diameter) report.exterior_far_mass += m;
        }
    }
    if (report.interior_bins > 0) {
        report.interior_mean_density = interior_density_sum / report.interior_bins;
        report.relative_deviation =
            std::abs(report.interior_mean_density - report.target_density) /
            report.target_density;
    }
    return report;
}

namespace {

// int int log(x^2 + y^2) dx dy; the cell average of log|u| is half the
// corner combination of this primitive.
double log_primitive(double x, double y) {
    double value = 0.0;
    if (x != 0.0 && y != 0.0) {
        value = x * y * std::log(x * x + y * y) - 3.0 * x * y +
                x * x * std::atan(y / x) + y * y * std::atan(x / y);
    }
    return value;
}

double log_cell_integral(double xa, double xb, double ya, double yb) {
    return 0.5 * (log_primitive(xb, yb) - log_primitive(xa, yb) - log_primitive(xb, ya) +
                  log_primitive(xa, ya));
}

}  // namespace

EffectiveField::EffectiveField(const PolynomialCurve& curve, const PotentialSpec& potential,
                               int cells_per_side)
    : curve_(curve), potential_(potential) {
    auto polyline = boundary_polyline(curve, 4096);
    double x_min = 1e300, x_max = -1e300, y_min = 1e300, y_max = -1e300;
    for (const auto& p : polyline) {
        x_min = std::min(x_min, p.real());
        x_max = std::max(x_max, p.real());
        y_min = std::min(y_min, p.imag());
        y_max = std::max(y_max, p.imag());
    }
    double pad_x = 0.01 * (x_max - x_min), pad_y = 0.01 * (y_max - y_min);
    grid_.x0 = x_min - pad_x;
    grid_.y0 = y_min - pad_y;
    grid_.nx = grid_.ny = cells_per_side;
    grid_.dx = (x_max - x_min + 2.0 * pad_x) / grid_.nx;
    grid_.dy = (y_max - y_min + 2.0 * pad_y) / grid_.ny;
    mask_ = interior_mask(polyline, grid_);
    cell_area_ = grid_.dx * grid_.dy;

    for (int iy = 0; iy < grid_.ny; ++iy) {
        for (int ix = 0; ix < grid_.nx; ++ix) {
            if (!mask_[static_cast<std::size_t>(iy) * grid_.nx + ix]) continue;
            cplx c = grid_.cell_center(ix, iy);
            double xa = grid_.x0 + ix * grid_.dx, ya = grid_.y0 + iy * grid_.dy;
            bool contains_origin = (xa <= 0.0 && 0.0 < xa + grid_.dx) &&
                                   (ya <= 0.0 && 0.0 < ya + grid_.dy);
            if (contains_origin)
                log_zeta_integral_ += log_cell_integral(xa, xa + grid_.dx, ya, ya + grid_.dy);
            else
                log_zeta_integral_ += cell_area_ * std::log(std::abs(c));
        }
    }
}

double EffectiveField::value(cplx z) const {
    double log_dist_sum = 0.0;
    for (int iy = 0; iy < grid_.ny; ++iy) {
        double y = grid_.y0 + (iy + 0.5) * grid_.dy;
        double dy2 = (z.imag() - y) * (z.imag() - y);
        const std::uint8_t* row = &mask_[static_cast<std::size_t>(iy) * grid_.nx];
        for (int ix = 0; ix < grid_.nx; ++ix) {
            if (!row[ix]) continue;
            double x = grid_.x0 + (ix + 0.5) * grid_.dx;
            double dx = z.real() - x;
            double dist2 = dx * dx + dy2;
            if (dist2 < 0.25 * (grid_.dx * grid_.dx + grid_.dy * grid_.dy)) {
                // z is in or near this cell: use the exact integral.
                double xa = grid_.x0 + ix * grid_.dx - z.real();
                double ya = grid_.y0 + iy * grid_.dy - z.imag();
                log_dist_sum +=
                    log_cell_integral(xa, xa + grid_.dx, ya, ya + grid_.dy) / cell_area_;
            } else {
                log_dist_sum += 0.5 * std::log(dist2);
            }
        }
    }
    double integral = log_zeta_integral_ - cell_area_ * log_dist_sum;
    return potential_(z) + 2.0 / (pi * potential_.t0) * integral;
}

double EffectiveField::gradient_residual(cplx z, double step) const {
    double ex = (value(z + step) - value(z - step)) / (2.0 * step);
    double ey = (value(z + cplx(0.0, step)) - value(z - cplx(0.0, step))) / (2.0 * step);
    cplx dbar = 0.5 * cplx(ex, ey);
    cplx expected = (z - schwarz_reflection(curve_, z)) / potential_.t0;
    return std::abs(dbar - expected);
}

LevelSpacingMcReport level_spacing_mc(double t0, int N, double x, const GasOptions& options) {
    PotentialSpec potential{t0, {}, N};
    double radius = std::sqrt(x / N);

    double cutoff = options.cutoff_radius;
    if (cutoff <= 0.0) cutoff = default_cutoff(potential, N);
    double scale0 = options.proposal_scale;
    if (scale0 <= 0.0) scale0 = 0.3 * std::sqrt(t0);

    Chain chain(potential, cutoff, options.seed, scale0);
    long adapt_interval = std::max<long>(50, options.burn_in / 40);
    long window_proposals = 0, window_accepted = 0;
    for (long sweep = 0; sweep < options.burn_in; ++sweep) {
        long before_p = chain.proposals, before_a = chain.accepted;
        chain.sweep();
        window_proposals += chain.proposals - before_p;
        window_accepted += chain.accepted - before_a;
        if ((sweep + 1) % adapt_interval == 0) {
            double rate = static_cast<double>(window_accepted) / window_proposals;
            if (rate < 0.3)
                chain.scale *= 0.8;
            else if (rate > 0.5)
                chain.scale *= 1.25;
            window_proposals = window_accepted = 0;
        }
    }

    long measure_sweeps = options.sweeps - options.burn_in;
    int batches = 50;
    std::vector<std::vector<double>> batch_counts(batches, std::vector<double>(N + 1, 0.0));
    std::vector<long> batch_samples(batches, 0);
    long samples = 0;
    for (long sweep = 0; sweep < measure_sweeps; ++sweep) {
        chain.sweep();
        if (sweep % options.thin != 0) continue;
        int count = 0;
        for (const auto& zi : chain.z)
            if (std::abs(zi) <= radius) ++count;
        int batch = static_cast<int>((sweep * batches) / measure_sweeps);
        batch_counts[batch][count] += 1.0;
        ++batch_samples[batch];
        ++samples;
    }

    LevelSpacingMcReport report;
    report.samples = samples;
    report.probability.assign(N + 1, 0.0);
    report.standard_error.assign(N + 1, 0.0);
    std::vector<double> batch_mean(batches);
    for (int n = 0; n <= N; ++n) {
        double total = 0.0;
        int used = 0;
        for (int b = 0; b < batches; ++b) {
            if (batch_samples[b] == 0) continue;
            batch_mean[used] = batch_counts[b][n] / batch_samples[b];
            total += batch_counts[b][n];
            ++used;
        }
        report.probability[n] = total / samples;
        if (used > 1) {
            double mean = 0.0;
            for (int b = 0; b < used; ++b) mean += batch_mean[b];
            mean /= used;
            double var = 0.0;
            for (int b = 0; b < used; ++b) var += std::pow(batch_mean[b] - mean, 2);
            report.standard_error[n] = std::sqrt(var / (used * (used - 1.0)));
        }
    }
    return report;
}

}
