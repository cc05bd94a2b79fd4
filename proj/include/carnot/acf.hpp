#pragma once

// Monte Carlo evaluation of Phi(r) = r^-2 int_{B_r} |grad_G u|^2 Gamma and of the
// two-phase product J(r) = I+(r) I-(r), with B_r = {N <= r}.
//
// Homogeneity reduces everything to the unit annulus A = {1/2 < N <= 1}: for a
// G-homogeneous integrand of degree d, int_{B_1} f Gamma = I_A / (1 - 2^-(d+2)),
// and B_r is the union of the annuli delta_{r 2^-k} A.

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <set>

#include "carnot/counterexample.hpp"
#include "carnot/gauge.hpp"
#include "carnot/hcalc.hpp"
#include "carnot/sampling.hpp"

namespace carnot {

struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
};

/// Random streams; distinct streams make estimates from different operations independent.
enum class Stream : std::uint64_t { Oracle = 1, Shell = 2, Quartic = 3, DirectPhi = 4, TwoPhase = 5, Probe = 6 };

namespace detail {

/// Uniform point of box minus the inner box delta_c(box) inscribed in B_{1/2}, so the
/// region still covers the annulus {1/2 < N <= 1}.
template <class Engine>
void draw_outer_region(const GaugeSpec& spec, Engine& engine, double* p, Moments& m) {
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    const int n = spec.n();
    for (;;) {
        ++m.proposals;
        bool inside_inner = true;
        for (int j = 0; j < n; ++j) {
            const double t = unit(engine);
            p[j] = t * spec.half_width[j];
            if (std::abs(t) > std::pow(spec.inner_scale, spec.group.weights.degree(j))) inside_inner = false;
        }
        if (!inside_inner) return;
    }
}

inline double outer_region_volume(const GaugeSpec& spec) {
    return spec.box_volume() * (1.0 - std::pow(spec.inner_scale, spec.Q));
}

inline Eigen::MatrixXd covariance_of_means(const Moments& m) {
    const auto d = static_cast<Eigen::Index>(m.dim());
    Eigen::MatrixXd c(d, d);
    for (Eigen::Index a = 0; a < d; ++a) {
        for (Eigen::Index b = 0; b < d; ++b) c(a, b) = m.mean_covariance(a, b);
    }
    return c;
}

inline void check_radius(double r) {
    if (!(r > 0.0) || !std::isfinite(r)) fail(ErrorKind::InvalidInput, "radius must be positive");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Integrators

struct SampledEstimate {
    Estimate estimate;
    double acceptance = 0.0;  // accepted / proposals
};

/// Plain rejection sampling: uniform in delta_r(box), keep N <= r, average f Gamma vol.
inline SampledEstimate mc_ball_oracle(const GaugeSpec& spec, const std::function<double(const double*)>& integrand,
                                      double r, const SamplingOptions& opts) {
    detail::check_radius(r);
    const std::vector<double> h = spec.dilated_box(r);
    double volume = 1.0;
    for (double w : h) volume *= 2.0 * w;
    const int n = spec.n();
    const Moments m = run_blocks(opts, static_cast<std::uint64_t>(Stream::Oracle), 1,
                                 [&](std::mt19937_64& engine, Moments& acc, std::uint64_t count) {
                                     std::uniform_real_distribution<double> unit(-1.0, 1.0);
                                     std::vector<double> p(n);
                                     for (std::uint64_t s = 0; s < count; ++s) {
                                         for (int j = 0; j < n; ++j) p[j] = unit(engine) * h[j];
                                         ++acc.proposals;
                                         double v = 0.0;
                                         if (spec.norm(p.data()) <= r) {
                                             ++acc.accepted;
                                             v = integrand(p.data()) * spec.gamma(p.data()) * volume;
                                         }
                                         acc.add(&v);
                                     }
                                 });
    if (m.accepted == 0) fail(ErrorKind::ZeroAcceptance, "no sample landed in the gauge ball");
    return {{m.mean(0), std::sqrt(m.mean_covariance(0, 0))},
            static_cast<double>(m.accepted) / static_cast<double>(m.proposals)};
}

inline SampledEstimate mc_ball_oracle(const GaugeSpec& spec, const Polynomial& integrand, double r,
                                      const SamplingOptions& opts) {
    const NumericPolynomial f(integrand, spec.group.weights);
    return mc_ball_oracle(spec, [&f](const double* p) { return f(p); }, r, opts);
}

/// Joint estimates of int_{B_1} f_k Gamma with their covariance.
struct ShellEstimates {
    std::vector<double> values;
    Eigen::MatrixXd covariance;
    double acceptance = 0.0;

    Estimate operator[](std::size_t k) const {
        return {values.at(k), std::sqrt(covariance(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)))};
    }
};

/// Shell method for several G-homogeneous integrands sharing one set of annulus samples.
inline ShellEstimates shell_integrate_many(const GaugeSpec& spec, const std::vector<Polynomial>& integrands,
                                           const std::vector<int>& degrees, const SamplingOptions& opts,
                                           Stream stream = Stream::Shell) {
    if (integrands.size() != degrees.size()) fail(ErrorKind::DimensionMismatch, "one degree per integrand");
    const StratifiedWeights& w = spec.group.weights;
    std::vector<NumericPolynomial> fs;
    std::vector<double> factor;
    for (std::size_t k = 0; k < integrands.size(); ++k) {
        if (degrees[k] < 0) fail(ErrorKind::NegativeDegree, "integrand degree must be nonnegative");
        if (!integrands[k].is_zero() && !integrands[k].is_g_homogeneous(w, degrees[k])) {
            fail(ErrorKind::NotHomogeneous, "integrand is not G-homogeneous of degree " + std::to_string(degrees[k]));
        }
        fs.emplace_back(integrands[k], w);
        factor.push_back(1.0 / (1.0 - std::ldexp(1.0, -(degrees[k] + 2))));
    }
    const std::size_t dim = fs.size();
    const int n = spec.n();
    const double volume = detail::outer_region_volume(spec);
    const Moments m = run_blocks(opts, static_cast<std::uint64_t>(stream), dim,
                                 [&](std::mt19937_64& engine, Moments& acc, std::uint64_t count) {
                                     std::vector<double> p(n);
                                     std::vector<double> v(dim);
                                     for (std::uint64_t s = 0; s < count; ++s) {
                                         detail::draw_outer_region(spec, engine, p.data(), acc);
                                         std::fill(v.begin(), v.end(), 0.0);
                                         const double norm = spec.norm(p.data());
                                         if (norm > 0.5 && norm <= 1.0) {
                                             ++acc.accepted;
                                             const double g = spec.gamma(p.data()) * volume;
                                             for (std::size_t k = 0; k < dim; ++k) v[k] = fs[k](p.data()) * g * factor[k];
                                         }
                                         acc.add(v.data());
                                     }
                                 });
    if (m.accepted == 0) fail(ErrorKind::ZeroAcceptance, "no sample landed in the unit annulus");
    ShellEstimates out;
    for (std::size_t k = 0; k < dim; ++k) out.values.push_back(m.mean(k));
    out.covariance = detail::covariance_of_means(m);
    out.acceptance = static_cast<double>(m.accepted) / static_cast<double>(m.proposals);
    return out;
}

inline SampledEstimate shell_integrate(const GaugeSpec& spec, const Polynomial& integrand, int degree,
                                       const SamplingOptions& opts) {
    const ShellEstimates e = shell_integrate_many(spec, {integrand}, {degree}, opts);
    return {e[0], e.acceptance};
}

// ---------------------------------------------------------------------------
// Quartic coefficients

struct QuarticCoefficients {
    Estimate a0, a2, a4;
    Eigen::Matrix3d covariance = Eigen::Matrix3d::Zero();
    double acceptance = 0.0;

    /// a0 - 2 a2 r^2 + a4 r^4 with its standard error.
    Estimate phi(double r) const {
        const Eigen::Vector3d g(1.0, -2.0 * r * r, r * r * r * r);
        return {a0.value + g(1) * a2.value + g(2) * a4.value, std::sqrt(std::max(0.0, g.dot(covariance * g)))};
    }

    /// sqrt(a2 / a4), NaN unless both are positive.
    Estimate r_star() const {
        if (!(a2.value > 0.0 && a4.value > 0.0)) return {std::numeric_limits<double>::quiet_NaN(), 0.0};
        const double rs = std::sqrt(a2.value / a4.value);
        const Eigen::Vector3d g(0.0, 0.5 * rs / a2.value, -0.5 * rs / a4.value);
        return {rs, std::sqrt(std::max(0.0, g.dot(covariance * g)))};
    }
};

struct Decomposition {
    Polynomial p1, p3;  // u = P1 - P3
};

/// Splits u into G-homogeneous parts of degrees 1 and 3.
inline Decomposition decompose_13(const CarnotGroup& g, const Polynomial& u) {
    if (u.n() != g.n()) fail(ErrorKind::DimensionMismatch, "polynomial does not live on " + g.name);
    Decomposition d{u.g_homogeneous_part(g.weights, 1), -u.g_homogeneous_part(g.weights, 3)};
    if (d.p1 - d.p3 != u) fail(ErrorKind::BadDecomposition, "u has G-homogeneous parts outside degrees 1 and 3");
    return d;
}

inline QuarticCoefficients quartic_coeffs(const GaugeSpec& spec, const Polynomial& p1, const Polynomial& p3,
                                          const SamplingOptions& opts) {
    const CarnotGroup& g = spec.group;
    const HorizontalSection g1 = horizontal_gradient(g, p1);
    const HorizontalSection g3 = horizontal_gradient(g, p3);
    const ShellEstimates e = shell_integrate_many(
        spec, {horizontal_inner(g1, g1), horizontal_inner(g1, g3), horizontal_inner(g3, g3)}, {0, 2, 4}, opts,
        Stream::Quartic);
    QuarticCoefficients q;
    q.a0 = e[0];
    q.a2 = e[1];
    q.a4 = e[2];
    q.covariance = e.covariance;
    q.acceptance = e.acceptance;
    return q;
}

inline QuarticCoefficients quartic_coeffs(const GaugeSpec& spec, const CounterexampleResult& result,
                                          const SamplingOptions& opts) {
    return quartic_coeffs(spec, result.p1, result.p3, opts);
}

// ---------------------------------------------------------------------------
// Phi and J curves

enum class PhiMethod { Direct, Quartic };

struct CurveMetadata {
    std::uint64_t seed = 0;
    std::uint64_t samples = 0;
    int shells = 0;
    double acceptance = 0.0;
};

struct PhiCurve {
    std::vector<double> r;
    std::vector<Estimate> phi;      // tail bound included in std_error
    Eigen::MatrixXd covariance;     // sampling covariance across the grid
    std::vector<double> tail;       // bound on the truncated part, per r
    CurveMetadata meta;

    /// Standard error of phi[a] - phi[b], including both tail bounds.
    double difference_error(std::size_t a, std::size_t b) const {
        const auto i = static_cast<Eigen::Index>(a);
        const auto j = static_cast<Eigen::Index>(b);
        const double v = covariance(i, i) + covariance(j, j) - 2.0 * covariance(i, j);
        return std::sqrt(std::max(0.0, v) + tail[a] * tail[a] + tail[b] * tail[b]);
    }
};

struct TwoPhaseCurve {
    std::vector<double> r;
    std::vector<Estimate> i_plus, i_minus, j;
    Eigen::MatrixXd j_covariance;
    std::vector<double> difference_error;  // standard error of I+ - I- per r
    std::vector<double> tail;
    CurveMetadata meta;

    double j_difference_error(std::size_t a, std::size_t b) const {
        const auto i = static_cast<Eigen::Index>(a);
        const auto k = static_cast<Eigen::Index>(b);
        const double v = j_covariance(i, i) + j_covariance(k, k) - 2.0 * j_covariance(i, k);
        return std::sqrt(std::max(0.0, v) + tail[a] * tail[a] + tail[b] * tail[b]);
    }
};

namespace detail {

inline void check_grid(const std::vector<double>& r_grid) {
    if (r_grid.empty()) fail(ErrorKind::InvalidInput, "empty radius grid");
    for (double r : r_grid) check_radius(r);
}

inline void check_shells(int shells) {
    if (shells < 1 || shells > 200) fail(ErrorKind::InvalidInput, "shell depth must be in [1, 200]");
}

/// Prepared data for the dyadic sums over annuli delta_{r 2^-k} A, k < K.
struct DyadicSetup {
    NumericPolynomial f;  // |grad_G u|^2
    double volume = 0.0;

    /// Bound on r^-2 int_{B_{r 2^-K}} f Gamma given int_{B_1} Gamma.
    double tail(const GaugeSpec& spec, double r, int shells, double ball_gamma) const {
        const double inner = r * std::ldexp(1.0, -shells);
        return f.box_bound(spec.dilated_box(inner)) * std::ldexp(1.0, -2 * shells) * ball_gamma;
    }
};

inline DyadicSetup dyadic_setup(const GaugeSpec& spec, const Polynomial& u) {
    const HorizontalSection grad = horizontal_gradient(spec.group, u);
    return {NumericPolynomial(horizontal_inner(grad, grad), spec.group.weights), outer_region_volume(spec)};
}

}  // namespace detail

/// Phi(r) = sum_{k<K} 4^-k int_A |grad u|^2(delta_{r 2^-k} P) Gamma(P) dP plus a bounded tail.
/// Every radius reuses the same annulus samples. The last moment is int_{B_1} Gamma.
inline PhiCurve phi_curve_direct(const GaugeSpec& spec, const Polynomial& u, const std::vector<double>& r_grid,
                                 const SamplingOptions& opts, int shells = 20) {
    detail::check_grid(r_grid);
    detail::check_shells(shells);
    const detail::DyadicSetup setup = detail::dyadic_setup(spec, u);
    const std::vector<int>& degrees = setup.f.degrees();
    const std::size_t nr = r_grid.size();
    const std::size_t nd = degrees.size();
    std::vector<double> weight(nr * nd, 0.0);  // sum_k 4^-k (r 2^-k)^d
    for (std::size_t a = 0; a < nr; ++a) {
        for (std::size_t s = 0; s < nd; ++s) {
            double sum = 0.0;
            for (int k = 0; k < shells; ++k) {
                sum += std::ldexp(1.0, -2 * k) * std::pow(r_grid[a] * std::ldexp(1.0, -k), degrees[s]);
            }
            weight[a * nd + s] = sum;
        }
    }
    const int n = spec.n();
    const Moments m = run_blocks(
        opts, static_cast<std::uint64_t>(Stream::DirectPhi), nr + 1,
        [&](std::mt19937_64& engine, Moments& acc, std::uint64_t count) {
            std::vector<double> p(n);
            std::vector<double> parts(nd);
            std::vector<double> v(nr + 1);
            for (std::uint64_t s = 0; s < count; ++s) {
                detail::draw_outer_region(spec, engine, p.data(), acc);
                std::fill(v.begin(), v.end(), 0.0);
                const double norm = spec.norm(p.data());
                if (norm > 0.5 && norm <= 1.0) {
                    ++acc.accepted;
                    const double g = spec.gamma(p.data()) * setup.volume;
                    setup.f.degree_parts(p.data(), parts.data());
                    for (std::size_t a = 0; a < nr; ++a) {
                        double sum = 0.0;
                        for (std::size_t t = 0; t < nd; ++t) sum += weight[a * nd + t] * parts[t];
                        v[a] = sum * g;
                    }
                    v[nr] = g * (4.0 / 3.0);
                }
                acc.add(v.data());
            }
        });
    if (m.accepted == 0) fail(ErrorKind::ZeroAcceptance, "no sample landed in the unit annulus");
    PhiCurve c;
    c.r = r_grid;
    const Eigen::MatrixXd full = detail::covariance_of_means(m);
    c.covariance = full.topLeftCorner(nr, nr);
    const double ball_gamma = m.mean(nr) + 5.0 * std::sqrt(m.mean_covariance(nr, nr));
    for (std::size_t a = 0; a < nr; ++a) {
        c.tail.push_back(setup.tail(spec, r_grid[a], shells, ball_gamma));
        const double se = std::sqrt(c.covariance(a, a) + c.tail[a] * c.tail[a]);
        c.phi.push_back({m.mean(a), se});
    }
    c.meta = {opts.seed, opts.samples, shells, static_cast<double>(m.accepted) / static_cast<double>(m.proposals)};
    return c;
}

inline PhiCurve phi_curve_quartic(const GaugeSpec& spec, const Polynomial& u, const std::vector<double>& r_grid,
                                  const SamplingOptions& opts) {
    detail::check_grid(r_grid);
    const Decomposition d = decompose_13(spec.group, u);
    const QuarticCoefficients q = quartic_coeffs(spec, d.p1, d.p3, opts);
    PhiCurve c;
    c.r = r_grid;
    const auto nr = static_cast<Eigen::Index>(r_grid.size());
    Eigen::MatrixXd jac(nr, 3);
    for (Eigen::Index a = 0; a < nr; ++a) {
        const double r2 = r_grid[a] * r_grid[a];
        jac.row(a) << 1.0, -2.0 * r2, r2 * r2;
        c.phi.push_back(q.phi(r_grid[a]));
        c.tail.push_back(0.0);
    }
    c.covariance = jac * q.covariance * jac.transpose();
    c.meta = {opts.seed, opts.samples, 0, q.acceptance};
    return c;
}

inline PhiCurve phi_curve(const GaugeSpec& spec, const Polynomial& u, const std::vector<double>& r_grid,
                          const SamplingOptions& opts, PhiMethod method, int shells = 20) {
    return method == PhiMethod::Direct ? phi_curve_direct(spec, u, r_grid, opts, shells)
                                       : phi_curve_quartic(spec, u, r_grid, opts);
}

/// I+(r), I-(r) split by the sign of u at each dilated sample; J = I+ I- with
/// delta-method errors from the joint covariance of all (I+, I-) means.
inline TwoPhaseCurve j_curve(const GaugeSpec& spec, const Polynomial& u, const std::vector<double>& r_grid,
                             const SamplingOptions& opts, int shells = 20) {
    detail::check_grid(r_grid);
    detail::check_shells(shells);
    const detail::DyadicSetup setup = detail::dyadic_setup(spec, u);
    const NumericPolynomial un(u, spec.group.weights);
    const std::vector<int>& fdeg = setup.f.degrees();
    const std::vector<int>& udeg = un.degrees();
    const std::size_t nr = r_grid.size();
    const auto levels = static_cast<std::size_t>(shells);
    std::vector<double> fpow(nr * levels * fdeg.size());  // 4^-k lambda^d
    std::vector<double> upow(nr * levels * udeg.size());  // lambda^e
    for (std::size_t a = 0; a < nr; ++a) {
        for (std::size_t k = 0; k < levels; ++k) {
            const double lambda = r_grid[a] * std::ldexp(1.0, -static_cast<int>(k));
            for (std::size_t s = 0; s < fdeg.size(); ++s) {
                fpow[(a * levels + k) * fdeg.size() + s] = std::ldexp(1.0, -2 * static_cast<int>(k)) * std::pow(lambda, fdeg[s]);
            }
            for (std::size_t s = 0; s < udeg.size(); ++s) upow[(a * levels + k) * udeg.size() + s] = std::pow(lambda, udeg[s]);
        }
    }
    const int n = spec.n();
    const Moments m = run_blocks(
        opts, static_cast<std::uint64_t>(Stream::TwoPhase), 2 * nr + 1,
        [&](std::mt19937_64& engine, Moments& acc, std::uint64_t count) {
            std::vector<double> p(n);
            std::vector<double> fparts(fdeg.size());
            std::vector<double> uparts(udeg.size());
            std::vector<double> v(2 * nr + 1);
            for (std::uint64_t s = 0; s < count; ++s) {
                detail::draw_outer_region(spec, engine, p.data(), acc);
                std::fill(v.begin(), v.end(), 0.0);
                const double norm = spec.norm(p.data());
                if (norm > 0.5 && norm <= 1.0) {
                    ++acc.accepted;
                    const double g = spec.gamma(p.data()) * setup.volume;
                    setup.f.degree_parts(p.data(), fparts.data());
                    un.degree_parts(p.data(), uparts.data());
                    for (std::size_t a = 0; a < nr; ++a) {
                        double plus = 0.0;
                        double minus = 0.0;
                        for (std::size_t k = 0; k < levels; ++k) {
                            const double* fp = &fpow[(a * levels + k) * fdeg.size()];
                            const double* up = &upow[(a * levels + k) * udeg.size()];
                            double fv = 0.0;
                            for (std::size_t t = 0; t < fdeg.size(); ++t) fv += fp[t] * fparts[t];
                            double uv = 0.0;
                            for (std::size_t t = 0; t < udeg.size(); ++t) uv += up[t] * uparts[t];
                            if (uv > 0.0) plus += fv;
                            else if (uv < 0.0) minus += fv;
                        }
                        v[a] = plus * g;
                        v[nr + a] = minus * g;
                    }
                    v[2 * nr] = g * (4.0 / 3.0);
                }
                acc.add(v.data());
            }
        });
    if (m.accepted == 0) fail(ErrorKind::ZeroAcceptance, "no sample landed in the unit annulus");
    const Eigen::MatrixXd cov = detail::covariance_of_means(m);
    TwoPhaseCurve c;
    c.r = r_grid;
    const double ball_gamma = m.mean(2 * nr) + 5.0 * std::sqrt(m.mean_covariance(2 * nr, 2 * nr));
    // Gradient of J_a = mean(a) * mean(nr + a) over the 2 nr means.
    Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(nr), static_cast<Eigen::Index>(2 * nr));
    for (std::size_t a = 0; a < nr; ++a) {
        const double ip = m.mean(a);
        const double im = m.mean(nr + a);
        grad(a, a) = im;
        grad(a, nr + a) = ip;
        const double tail = setup.tail(spec, r_grid[a], shells, ball_gamma);
        c.tail.push_back(tail * (std::abs(ip) + std::abs(im) + tail));
        c.i_plus.push_back({ip, std::sqrt(cov(a, a) + tail * tail)});
        c.i_minus.push_back({im, std::sqrt(cov(nr + a, nr + a) + tail * tail)});
        const double dv = cov(a, a) + cov(nr + a, nr + a) - 2.0 * cov(a, nr + a);
        c.difference_error.push_back(std::sqrt(std::max(0.0, dv) + 2.0 * tail * tail));
    }
    c.j_covariance = grad * cov.topLeftCorner(2 * nr, 2 * nr) * grad.transpose();
    for (std::size_t a = 0; a < nr; ++a) {
        c.j.push_back({c.i_plus[a].value * c.i_minus[a].value, std::sqrt(c.j_covariance(a, a) + c.tail[a] * c.tail[a])});
    }
    c.meta = {opts.seed, opts.samples, shells, static_cast<double>(m.accepted) / static_cast<double>(m.proposals)};
    return c;
}

// ---------------------------------------------------------------------------
// Least-squares quartic fit

struct QuarticFit {
    double a0 = 0.0, a2 = 0.0, a4 = 0.0;
    double residual = 0.0;
};

/// Least squares in the basis (1, -2 r^2, r^4).
inline QuarticFit fit_quartic(const std::vector<double>& r, const std::vector<double>& phi) {
    if (r.size() != phi.size()) fail(ErrorKind::DimensionMismatch, "grid and values differ in length");
    const std::set<double> distinct(r.begin(), r.end());
    if (distinct.size() < 3) fail(ErrorKind::RankDeficient, "need at least 3 distinct radii");
    const auto rows = static_cast<Eigen::Index>(r.size());
    Eigen::MatrixXd a(rows, 3);
    Eigen::VectorXd y(rows);
    for (Eigen::Index k = 0; k < rows; ++k) {
        const double r2 = r[k] * r[k];
        a.row(k) << 1.0, -2.0 * r2, r2 * r2;
        y(k) = phi[k];
    }
    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    if (qr.rank() < 3) fail(ErrorKind::RankDeficient, "design matrix is rank deficient");
    const Eigen::Vector3d c = qr.solve(y);
    return {c(0), c(1), c(2), (a * c - y).norm()};
}

// ---------------------------------------------------------------------------
// Fundamental-solution probe

struct ProbeResult {
    double max_laplacian = 0.0;  // max |sum_j D_j^2 Gamma| over probe points
    double scale = 0.0;          // max sum_j |D_j^2 Gamma|, the size of the cancelling terms
};

/// D_j^2 f(P) = (f(P o h e_j) - 2 f(P) + f(P o -h e_j)) / h^2 = X_j^2 f(P) + O(h^2),
/// since t -> P o t e_j is the integral curve of X_j through P.
inline ProbeResult gamma_harmonicity_probe(const GaugeSpec& spec, std::uint64_t points, double h, std::uint64_t seed) {
    if (!(h > 0.0)) fail(ErrorKind::InvalidInput, "step must be positive");
    const int n = spec.n();
    ProbeResult out;
    SamplingOptions opts{points, seed, 1};
    std::vector<double> pts;
    run_blocks(opts, static_cast<std::uint64_t>(Stream::Probe), 0,
               [&](std::mt19937_64& engine, Moments& acc, std::uint64_t count) {
                   std::vector<double> p(n);
                   for (std::uint64_t s = 0; s < count;) {
                       detail::draw_outer_region(spec, engine, p.data(), acc);
                       const double norm = spec.norm(p.data());
                       if (norm > 0.5 && norm < 1.0) {
                           pts.insert(pts.end(), p.begin(), p.end());
                           ++s;
                       }
                   }
               });
    std::vector<double> e(n, 0.0);
    std::vector<double> q(n);
    for (std::size_t k = 0; k < pts.size(); k += static_cast<std::size_t>(n)) {
        const double* p = &pts[k];
        const double center = spec.gamma(p);
        double lap = 0.0;
        double scale = 0.0;
        for (int j = 0; j < spec.group.m1(); ++j) {
            e[j] = h;
            spec.compose(p, e.data(), q.data());
            const double fwd = spec.gamma(q.data());
            e[j] = -h;
            spec.compose(p, e.data(), q.data());
            const double bwd = spec.gamma(q.data());
            e[j] = 0.0;
            const double d2 = (fwd - 2.0 * center + bwd) / (h * h);
            lap += d2;
            scale += std::abs(d2);
        }
        out.max_laplacian = std::max(out.max_laplacian, std::abs(lap));
        out.scale = std::max(out.scale, scale);
    }
    return out;
}

}  // namespace carnot
