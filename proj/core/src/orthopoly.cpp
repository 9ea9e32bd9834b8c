#include "nmm/orthopoly.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "nmm/dd.hpp"
#include "nmm/poly_roots.hpp"
#include "nmm/util.hpp"

namespace nmm {

namespace {

constexpr int hard_degree_cap = 48;
constexpr int dd_threshold = 24;  // extended accumulation above this degree

/// Uniform scalar interface over the two Cholesky precisions.
struct PlainArith {
    using Real = double;
    using Complex = cplx;
    static Complex from(cplx z) { return z; }
    static Real real(const Complex& z) { return z.real(); }
    static Real norm_sq(const Complex& z) { return std::norm(z); }
    static Complex conj(const Complex& z) { return std::conj(z); }
    static Complex div_real(const Complex& z, Real r) { return z / r; }
    static Complex mul_real(const Complex& z, Real r) { return z * r; }
    static Real sqrt_real(Real x) { return std::sqrt(x); }
    static double to_double(Real x) { return x; }
    static cplx to_cplx(const Complex& z) { return z; }
};

struct ExtendedArith {
    using Real = DD;
    using Complex = DDComplex;
    static Complex from(cplx z) { return {z.real(), z.imag()}; }
    static Real real(const Complex& z) { return z.re; }
    static Real norm_sq(const Complex& z) { return nmm::norm_sq(z); }
    static Complex conj(const Complex& z) { return nmm::conj(z); }
    static Complex div_real(const Complex& z, Real r) { return {z.re / r, z.im / r}; }
    static Complex mul_real(const Complex& z, Real r) { return {z.re * r, z.im * r}; }
    static Real sqrt_real(Real x) { return dd_sqrt(x); }
    static double to_double(Real x) { return static_cast<double>(x); }
    static cplx to_cplx(const Complex& z) {
        return {static_cast<double>(z.re), static_cast<double>(z.im)};
    }
};

/// Lower-triangular Cholesky of one Hermitian block. Returns the position of
/// the first non-positive pivot, or -1.
template <typename Arith>
int block_cholesky(const std::vector<std::vector<cplx>>& g,
                   std::vector<std::vector<typename Arith::Complex>>& L) {
    using Complex = typename Arith::Complex;
    using Real = typename Arith::Real;
    std::size_t n = g.size();
    L.assign(n, std::vector<Complex>(n, Arith::from(0.0)));
    for (std::size_t j = 0; j < n; ++j) {
        Real pivot = Arith::real(Arith::from(g[j][j]));
        for (std::size_t k = 0; k < j; ++k) pivot = pivot - Arith::norm_sq(L[j][k]);
        if (!(Arith::to_double(pivot) > 0.0)) return static_cast<int>(j);
        Real root = Arith::sqrt_real(pivot);
        L[j][j] = Arith::mul_real(Arith::from(1.0), root);
        for (std::size_t i = j + 1; i < n; ++i) {
            Complex sum = Arith::from(g[i][j]);
            for (std::size_t k = 0; k < j; ++k) sum = sum - L[i][k] * Arith::conj(L[j][k]);
            L[i][j] = Arith::div_real(sum, root);
        }
    }
    return -1;
}

}  // namespace

cplx OrthogonalFamily::eval_p(int n, cplx z) const {
    const auto& row = coeff[n];
    cplx u = z / scale;
    cplx value = 0.0;
    for (std::size_t m = row.size(); m-- > 0;) value = value * u + row[m];
    return value;
}

double OrthogonalFamily::half_weight(cplx z) const {
    return std::exp(-0.5 * potential.N * potential(z));
}

cplx inner_product(std::span<const cplx> f, std::span<const cplx> g, double scale,
                   const PotentialSpec& potential, const QuadratureGrid& grid) {
    auto horner = [scale](std::span<const cplx> c, cplx z) {
        cplx u = z / scale, value = 0.0;
        for (std::size_t m = c.size(); m-- > 0;) value = value * u + c[m];
        return value;
    };
    cplx sum = 0.0;
    for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
        cplx z = grid.nodes[i];
        sum += grid.weights[i] * std::conj(horner(f, z)) * horner(g, z) *
               std::exp(-potential.N * potential(z));
    }
    return sum;
}

InnerProductCheck inner_product_checked(std::span<const cplx> f, std::span<const cplx> g,
                                        double scale, const PotentialSpec& potential,
                                        const QuadratureGrid& grid, double rel_tol) {
    InnerProductCheck check;
    check.value = inner_product(f, g, scale, potential, grid);
    QuadratureGrid fine = build_grid(grid.cutoff_radius, 2 * grid.n_r, 2 * grid.n_theta);
    check.refined = inner_product(f, g, scale, potential, fine);
    double denom = std::max({std::abs(check.value), std::abs(check.refined), 1e-300});
    check.converged = std::abs(check.value - check.refined) <= rel_tol * denom;
    return check;
}

namespace {

/// Moment matrix in the scaled basis via the radial/angular factorisation
/// G_{mn} = sum_rings w_r (rho/s)^{m+n} A_ring(n - m). Pairs killed by the
/// mod-(d+1) selection rule of a single-harmonic potential are set to zero
/// exactly, which also removes angular aliasing.
std::vector<std::vector<cplx>> moment_matrix(const PotentialSpec& potential,
                                             const QuadratureGrid& grid, int n_max,
                                             double scale, int period) {
    int size = n_max + 1;
    std::vector<std::vector<cplx>> g(size, std::vector<cplx>(size, cplx(0.0)));

    std::vector<std::vector<cplx>> ring(grid.n_r, std::vector<cplx>(size, cplx(0.0)));
    parallel_for(grid.n_r, [&](std::size_t i) {
        std::vector<cplx> acc(size, cplx(0.0));
        for (int j = 0; j < grid.n_theta; ++j) {
            cplx z = grid.nodes[i * grid.n_theta + j];
            double w = std::exp(-potential.N * potential(z));
            cplx phase = std::polar(1.0, 2.0 * pi * j / grid.n_theta);
            cplx pq = 1.0;
            for (int q = 0; q < size; ++q) {
                acc[q] += w * pq;
                pq *= phase;
            }
        }
        double dtheta = 2.0 * pi / grid.n_theta;
        for (int q = 0; q < size; ++q) ring[i][q] = acc[q] * dtheta;
    });

    // A potential with real t_k is conjugation symmetric, so the moment
    // matrix is exactly real; projecting out the quadrature's imaginary
    // roundoff keeps the small low-order coefficients on the real axis.
    bool real_symmetric = true;
    for (const auto& tk : potential.tk)
        if (tk.imag() != 0.0) real_symmetric = false;

    for (int m = 0; m < size; ++m) {
        for (int n = m; n < size; ++n) {
            int q = n - m;
            if (period > 1 && q % period != 0) continue;
            cplx sum = 0.0;
            for (int i = 0; i < grid.n_r; ++i) {
                double radial = std::pow(grid.r_nodes[i] / scale, m + n);
                sum += grid.r_weights[i] * radial * ring[i][q];
            }
            if (real_symmetric) sum = sum.real();
            g[m][n] = sum;
            g[n][m] = std::conj(sum);
        }
    }
    return g;
}

struct BlockResult {
    std::vector<int> index;                 // global degrees in this block
    std::vector<std::vector<cplx>> coeff;   // block-local rows of s^m L_jj L^{-1}
    std::vector<double> pivots;             // L_jj
    int fail_at = -1;                       // block-local index of a bad pivot
};

template <typename Arith>
BlockResult factor_block(const std::vector<std::vector<cplx>>& g, std::vector<int> index) {
    using Complex = typename Arith::Complex;
    BlockResult result;
    result.index = std::move(index);
    std::size_t n = result.index.size();

    std::vector<std::vector<cplx>> sub(n, std::vector<cplx>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) sub[i][j] = g[result.index[i]][result.index[j]];

    std::vector<std::vector<Complex>> L;
    result.fail_at = block_cholesky<Arith>(sub, L);
    std::size_t usable = (result.fail_at < 0) ? n : static_cast<std::size_t>(result.fail_at);

    result.pivots.resize(usable);
    result.coeff.assign(usable, {});
    for (std::size_t j = 0; j < usable; ++j) {
        result.pivots[j] = Arith::to_double(Arith::real(L[j][j]));
        // Row j of L^{-1}: back-substitution on x^T L = e_j^T, then rescaled
        // to the monic row.
        std::vector<Complex> x(j + 1, Arith::from(0.0));
        x[j] = Arith::div_real(Arith::from(1.0), Arith::real(L[j][j]));
        for (std::size_t i = j; i-- > 0;) {
            Complex sum = Arith::from(0.0);
            for (std::size_t k = i + 1; k <= j; ++k) sum = sum - x[k] * L[k][i];
            x[i] = Arith::div_real(sum, Arith::real(L[i][i]));
        }
        result.coeff[j].resize(j + 1);
        for (std::size_t i = 0; i <= j; ++i)
            result.coeff[j][i] = Arith::to_cplx(Arith::mul_real(x[i], Arith::real(L[j][j])));
    }
    return result;
}

}  // namespace

OrthogonalFamily build_family(const PotentialSpec& potential, const QuadratureGrid& grid,
                              int n_max) {
    if (n_max < 0) throw std::invalid_argument("build_family: n_max must be non-negative");
    if (n_max > hard_degree_cap)
        throw std::invalid_argument("build_family: n_max exceeds the desk-scale cap of 48");
    if (n_max > potential.N)
        throw std::invalid_argument("build_family: n_max must not exceed N");
    int d = potential.degree();
    if (grid.n_theta < 4 * n_max + 4 * (d + 1))
        throw std::invalid_argument("build_family: angular resolution below 4 n_max + 4 (d+1)");
    check_potential_on_grid(potential, grid);

    OrthogonalFamily family;
    family.potential = potential;
    family.grid = grid;
    family.scale = std::sqrt(potential.t0);

    int period = potential.symmetry_period();
    auto g = moment_matrix(potential, grid, n_max, family.scale, period);

    // Residue classes mod the symmetry period; a rotation-invariant weight
    // makes the matrix diagonal outright.
    int stride = (period == 0) ? (n_max + 1) : period;
    std::vector<BlockResult> blocks;
    bool use_dd = n_max > dd_threshold;
    for (int s = 0; s < stride && s <= n_max; ++s) {
        std::vector<int> index;
        for (int m = s; m <= n_max; m += stride) index.push_back(m);
        blocks.push_back(use_dd ? factor_block<ExtendedArith>(g, index)
                                : factor_block<PlainArith>(g, index));
    }

    int effective_max = n_max;
    for (const auto& block : blocks)
        if (block.fail_at >= 0)
            effective_max = std::min(effective_max, block.index[block.fail_at] - 1);
    if (effective_max < n_max) {
        family.truncated = true;
        family.warning = "positive definiteness lost at degree " +
                         std::to_string(effective_max + 1) + "; family truncated";
    }

    family.n_max = effective_max;
    family.coeff.assign(effective_max + 1, {});
    family.norms.assign(effective_max + 1, 0.0);
    for (const auto& block : blocks) {
        for (std::size_t j = 0; j < block.coeff.size(); ++j) {
            int degree = block.index[j];
            if (degree > effective_max) continue;
            double s_pow = std::pow(family.scale, degree);
            auto& row = family.coeff[degree];
            row.assign(degree + 1, cplx(0.0));
            for (std::size_t i = 0; i <= j; ++i)
                row[block.index[i]] = s_pow * block.coeff[j][i];
            double pivot = s_pow * block.pivots[j];
            family.norms[degree] = pivot * pivot;
        }
    }
    return family;
}

cplx kernel(const OrthogonalFamily& family, cplx w, cplx z) {
    int N = family.potential.N;
    if (family.n_max < N - 1)
        throw std::invalid_argument("kernel: family must cover degrees up to N-1");
    cplx sum = 0.0;
    for (int n = 0; n < N; ++n)
        sum += std::conj(family.eval_p(n, w)) * family.eval_p(n, z) / family.norms[n];
    return family.half_weight(w) * family.half_weight(z) * sum;
}

double one_point_density(const OrthogonalFamily& family, cplx z) {
    return kernel(family, z, z).real() / family.potential.N;
}

double correlation_determinant(const OrthogonalFamily& family, std::span<const cplx> points) {
    int k = static_cast<int>(points.size());
    Eigen::MatrixXcd m(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) m(i, j) = kernel(family, points[i], points[j]);
    return m.determinant().real();
}

double gaussian_density_closed_form(double t0, int N, cplx z) {
    double u = N * std::norm(z) / t0;
    if (u == 0.0) return 1.0 / (pi * t0);
    // log-sum-exp over -u + n log u - log n!
    double max_log = -std::numeric_limits<double>::infinity();
    std::vector<double> logs(N);
    for (int n = 0; n < N; ++n) {
        logs[n] = -u + n * std::log(u) - std::lgamma(n + 1.0);
        max_log = std::max(max_log, logs[n]);
    }
    double sum = 0.0;
    for (int n = 0; n < N; ++n) sum += std::exp(logs[n] - max_log);
    return std::exp(max_log) * sum / (pi * t0);
}

OperatorMatrices operator_matrices(const OrthogonalFamily& family) {
    int size = family.n_max + 1;
    const auto& grid = family.grid;
    const auto& pot = family.potential;

    // Orthonormal rows and their z-derivatives in the scaled basis.
    std::vector<std::vector<cplx>> q(size), dq(size);
    for (int n = 0; n < size; ++n) {
        double inv = 1.0 / std::sqrt(family.norms[n]);
        q[n].resize(n + 1);
        for (int m = 0; m <= n; ++m) q[n][m] = family.coeff[n][m] * inv;
        dq[n].assign(std::max(n, 1), cplx(0.0));
        for (int m = 1; m <= n; ++m)
            dq[n][m - 1] = q[n][m] * static_cast<double>(m) / family.scale;
    }

    Eigen::MatrixXcd L = Eigen::MatrixXcd::Zero(size, size);
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(size, size);
    std::vector<cplx> qv(size), dqv(size), basis(size);

    for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
        cplx z = grid.nodes[i];
        double weight = grid.weights[i] * std::exp(-pot.N * pot(z));
        if (weight == 0.0) continue;
        cplx u = z / family.scale;
        basis[0] = 1.0;
        for (int m = 1; m < size; ++m) basis[m] = basis[m - 1] * u;
        for (int n = 0; n < size; ++n) {
            cplx value = 0.0, derivative = 0.0;
            for (int m = 0; m <= n; ++m) value += q[n][m] * basis[m];
            for (int m = 0; m + 1 <= n; ++m) derivative += dq[n][m] * basis[m];
            qv[n] = value;
            dqv[n] = derivative;
        }
        for (int m = 0; m < size; ++m) {
            cplx left = weight * std::conj(qv[m]);
            for (int n = 0; n < size; ++n) {
                L(m, n) += left * z * qv[n];
                A(m, n) += left * dqv[n];
            }
        }
    }

    OperatorMatrices out;
    out.L = std::move(L);
    out.A = std::move(A);
    out.Lstar = out.L.adjoint();
    return out;
}

OperatorIdentityReport check_operator_identity(const OrthogonalFamily& family) {
    const auto& pot = family.potential;
    int d = pot.degree();
    if (family.n_max < d + 2)
        throw std::invalid_argument("check_operator_identity: need n_max >= d + 2");
    OperatorMatrices ops = operator_matrices(family);
    int size = family.n_max + 1;

    Eigen::MatrixXcd residual = ops.Lstar - (pot.t0 / pot.N) * ops.A;
    Eigen::MatrixXcd power = Eigen::MatrixXcd::Identity(size, size);
    for (int k = 1; k <= d + 1; ++k) {
        residual -= static_cast<double>(k) * pot.tk[k - 1] * power;
        power = power * ops.L;
    }

    OperatorIdentityReport report;
    report.block = family.n_max - (d + 1);
    for (int m = 0; m <= report.block; ++m)
        for (int n = 0; n <= report.block; ++n)
            report.max_residual = std::max(report.max_residual, std::abs(residual(m, n)));

    // Boundary term dropped by the identity, estimated on the cut-off circle.
    int contour_nodes = 256;
    double boundary = 0.0;
    std::vector<cplx> values(size);
    Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(size, size);
    for (int j = 0; j < contour_nodes; ++j) {
        cplx z = std::polar(family.grid.cutoff_radius, 2.0 * pi * j / contour_nodes);
        double w = std::exp(-pot.N * pot(z));
        for (int n = 0; n < size; ++n) values[n] = family.eval_p(n, z) / std::sqrt(family.norms[n]);
        for (int m = 0; m < size; ++m)
            for (int n = 0; n < size; ++n)
                c(m, n) += std::conj(values[m]) * values[n] * w * z;
    }
    c *= pi / contour_nodes;
    for (int m = 0; m <= report.block; ++m)
        for (int n = 0; n <= report.block; ++n)
            boundary = std::max(boundary, std::abs(c(m, n)));
    report.boundary_estimate = boundary;
    return report;
}

StringEquationReport check_string_equation(const OrthogonalFamily& family) {
    const auto& pot = family.potential;
    int d = pot.degree();
    if (d < 1) throw std::invalid_argument("check_string_equation: needs degree d >= 1");
    if (family.n_max < pot.N)
        throw std::invalid_argument("check_string_equation: family must cover degrees up to N");

    OperatorMatrices ops = operator_matrices(family);
    int n = pot.N;
    Eigen::MatrixXcd L = ops.L.topLeftCorner(n + 1, n + 1);
    Eigen::MatrixXcd commutator = L.adjoint() * L - L * L.adjoint();

    StringEquationReport report;
    report.target = pot.t0 / pot.N;
    report.block = n - d;
    for (int i = 0; i <= report.block; ++i) {
        for (int j = 0; j <= report.block; ++j) {
            if (i == j)
                report.max_diag_deviation =
                    std::max(report.max_diag_deviation, std::abs(commutator(i, j) - report.target));
            else
                report.max_offdiag = std::max(report.max_offdiag, std::abs(commutator(i, j)));
        }
    }
    return report;
}

RecursionReport recursion_coefficients(const OrthogonalFamily& family) {
    const auto& pot = family.potential;
    int d = pot.degree();
    if (pot.symmetry_period() != d + 1)
        throw std::invalid_argument(
            "recursion_coefficients: potential must carry the single harmonic t_{d+1}");
    cplx coupling = pot.tk[d];

    OperatorMatrices ops = operator_matrices(family);
    RecursionReport report;
    report.r.assign(family.n_max + 1, 0.0);
    for (int n = 1; n <= family.n_max; ++n) report.r[n] = ops.L(n, n - 1).real();
    report.a.assign(std::max(family.n_max - d + 1, 0), cplx(0.0));
    for (int n = 0; n + d <= family.n_max; ++n) report.a[n] = ops.L(n, n + d);

    int limit = std::min(family.n_max - d, pot.N - d);
    for (int n = 0; n <= limit; ++n) {
        if (n + d <= family.n_max) {
            cplx predicted = static_cast<double>(d + 1) * coupling;
            for (int k = 1; k <= d; ++k) predicted *= report.r[n + k];
            report.residual_coupling =
                std::max(report.residual_coupling, std::abs(std::conj(report.a[n]) - predicted));
        }
        if (n + 1 <= family.n_max && n < static_cast<int>(report.a.size())) {
            double chain = std::norm(report.a[n]) - report.r[n + 1] * report.r[n + 1] +
                           (pot.t0 / pot.N) * (n + 1.0);
            for (int k = 1; k <= d - 1; ++k) {
                int idx = n - d + k;
                if (idx >= 0) chain += std::norm(report.a[idx]);
            }
            report.residual_norm_chain = std::max(report.residual_norm_chain, std::abs(chain));
        }
    }
    return report;
}

std::vector<cplx> polynomial_zeros(const OrthogonalFamily& family, int n) {
    if (n < 0 || n > family.n_max)
        throw std::invalid_argument("polynomial_zeros: degree outside the family");
    if (n == 0) return {};
    std::vector<cplx> roots = poly_roots(family.coeff[n]);
    for (auto& root : roots) root *= family.scale;
    if (roots.size() != static_cast<std::size_t>(n))
        throw std::runtime_error("polynomial_zeros: unexpected root count");
    return roots;
}

double zero_symmetry_defect(std::span<const cplx> zeros, int period) {
    if (period <= 1) return 0.0;
    cplx rotation = std::polar(1.0, 2.0 * pi / period);
    double worst = 0.0;
    for (const auto& z : zeros) {
        cplx rotated = rotation * z;
        double best = std::numeric_limits<double>::infinity();
        for (const auto& other : zeros) best = std::min(best, std::abs(rotated - other));
        worst = std::max(worst, best);
    }
    return worst;
}

std::vector<double> reduced_zeros(const OrthogonalFamily& family, int n, double tol) {
    int period = family.potential.symmetry_period();
    if (period < 2)
        throw std::invalid_argument("reduced_zeros: needs a single-harmonic potential");
    int residue = n % period;
    const auto& row = family.coeff[n];

    std::vector<cplx> reduced;
    for (int m = residue; m <= n; m += period) reduced.push_back(row[m]);
    // Selection rule: everything off the residue class must be numerically dead.
    double largest = 0.0;
    for (const auto& c : row) largest = std::max(largest, std::abs(c));
    for (int m = 0; m <= n; ++m)
        if ((m - residue) % period != 0 && std::abs(row[m]) > 1e-10 * largest)
            throw std::runtime_error("reduced_zeros: symmetry selection rule violated");

    std::vector<cplx> roots = poly_roots(reduced);
    double s_pow = std::pow(family.scale, period);
    std::vector<double> out;
    for (const auto& root : roots) {
        cplx u = root * s_pow;  // zero of q~ in the physical variable z^{d+1}
        if (std::abs(u.imag()) > tol * (1.0 + std::abs(u)))
            throw std::runtime_error("reduced_zeros: complex zero beyond tolerance");
        if (!(u.real() > 0.0))
            throw std::runtime_error("reduced_zeros: non-positive zero");
        out.push_back(u.real());
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool zeros_interlace(std::span<const double> previous, std::span<const double> current) {
    if (current.size() == previous.size()) {
        for (std::size_t i = 0; i < current.size(); ++i)
            if (!(previous[i] < current[i])) return false;
        return true;
    }
    if (current.size() == previous.size() + 1) {
        for (std::size_t i = 0; i < previous.size(); ++i)
            if (!(current[i] < previous[i] && previous[i] < current[i + 1])) return false;
        return true;
    }
    return false;
}

KsReport zero_statistics(std::span<const cplx> zeros, const ZeroDensityLaw& law) {
    KsReport report;
    report.count = static_cast<int>(zeros.size());
    if (zeros.empty()) return report;

    bool ellipse = law.family == ZeroDensityLaw::Family::gaussian_ellipse;
    double hi = law.support_hi();
    std::vector<double> coords;
    coords.reserve(zeros.size());
    for (const auto& z : zeros) {
        double coordinate = ellipse ? z.real() : std::abs(z);
        coords.push_back(coordinate);
        bool off = std::abs(coordinate) > hi * (1.0 + 1e-6) + 1e-12;
        if (ellipse && std::abs(z.imag()) > 1e-6 * (1.0 + std::abs(z))) off = true;
        if (!ellipse) {
            double cube_im = std::abs(std::imag(z * z * z));
            if (cube_im > 1e-6 * std::pow(std::abs(z), 3)) off = true;
        }
        if (off) ++report.off_support;
    }
    std::sort(coords.begin(), coords.end());
    double n = static_cast<double>(coords.size());
    double ks = 0.0;
    for (std::size_t i = 0; i < coords.size(); ++i) {
        double cdf = law.cdf(coords[i]);
        ks = std::max(ks, std::abs((i + 1.0) / n - cdf));
        ks = std::max(ks, std::abs(static_cast<double>(i) / n - cdf));
    }
    report.ks = ks;
    return report;
}

}
