#pragma once

// carnot_acf command implementations. run() never calls exit(), so tests drive it in-process.
// Exit codes: 0 success, 1 usage or parse error, 2 mathematical-domain error, 3 unsupported.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "carnot/carnot.hpp"

namespace carnot::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kDomain = 2, kUnsupported = 3 };

inline int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::SyntaxError:
        case ErrorKind::UnknownVariable:
        case ErrorKind::InvalidInput:
            return kUsage;
        case ErrorKind::Unsupported:
        case ErrorKind::UnsupportedGroup:
            return kUnsupported;
        default:
            return kDomain;
    }
}

struct RunConfig {
    std::string group = "heisenberg:1";
    std::string b = "1";
    std::string p = "0";
    std::string q = "1/2";
    std::string u;
    double rmin = 0.0;
    double rmax = 0.0;  // 0: 0.9 sqrt(a2/a4)
    int steps = 20;
    std::uint64_t samples = 1000000;
    std::uint64_t seed = 0;
    int workers = 1;
    int shells = 20;
    std::string out;
    int precision = 9;
    std::string gnuplot;
    double gamma_constant = 1.0;

    std::string poly;           // check
    int n = 3;                  // euclid-ortho
    std::string ph, pk;         // euclid-ortho
    std::string alpha = "0,0,1,0";  // det-check: alpha_1^1, alpha_2^1, alpha_1^2, alpha_2^2
    int random = 0;             // det-check
};

inline int default_workers() {
    if (const char* env = std::getenv("CARNOT_ACF_WORKERS")) {
        try {
            const int w = std::stoi(env);
            if (w > 0) return w;
        } catch (const std::exception&) {
        }
    }
    return 1;
}

namespace detail {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::InvalidInput, "cannot read " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

/// --u accepts a polynomial, a text file holding one, or a certificate file.
inline std::string polynomial_text(const std::string& arg) {
    if (!std::filesystem::is_regular_file(arg)) return arg;
    const std::string text = read_file(arg);
    const auto doc = nlohmann::json::parse(text, nullptr, false);
    if (doc.is_object() && doc.contains("u") && doc["u"].is_string()) return doc["u"].get<std::string>();
    return text;
}

struct Params {
    Rational b, p, q;
};

inline Params parse_params(const RunConfig& cfg) {
    return {parse_rational(cfg.b), parse_rational(cfg.p), parse_rational(cfg.q)};
}

/// Separates CSV from the human summary: CSV to stdout means the summary goes to stderr.
struct Sinks {
    std::ofstream file;
    std::ostream* data = nullptr;
    std::ostream* report = nullptr;

    Sinks(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
        if (cfg.out.empty()) {
            data = &out;
            report = &err;
        } else {
            file.open(cfg.out);
            if (!file) fail(ErrorKind::InvalidInput, "cannot write " + cfg.out);
            data = &file;
            report = &out;
        }
    }
};

struct NumericSetup {
    CarnotGroup group;
    Polynomial u;
    GaugeSpec spec;
};

inline NumericSetup numeric_setup(const RunConfig& cfg) {
    const CarnotGroup g = load_group(cfg.group);
    Polynomial u;
    if (!cfg.u.empty()) {
        u = parse_poly(polynomial_text(cfg.u), g.weights);
    } else {
        const Params prm = parse_params(cfg);
        u = construct(g, prm.b, prm.p, prm.q).u;
    }
    auto [canonical, cu] = to_canonical_presentation(g, u);
    GaugeSpec spec = gauge_for(canonical);
    if (!(cfg.gamma_constant > 0.0)) fail(ErrorKind::InvalidInput, "gamma constant must be positive");
    spec.gamma_constant = cfg.gamma_constant;
    return {std::move(canonical), std::move(cu), std::move(spec)};
}

inline SamplingOptions sampling(const RunConfig& cfg) { return {cfg.samples, cfg.seed, cfg.workers}; }

inline std::optional<QuarticCoefficients> try_quartic(const NumericSetup& s, const RunConfig& cfg) {
    try {
        const Decomposition d = decompose_13(s.group, s.u);
        return quartic_coeffs(s.spec, d.p1, d.p3, sampling(cfg));
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::BadDecomposition) throw;
        return std::nullopt;
    }
}

inline std::vector<double> radius_grid(const RunConfig& cfg, const std::optional<QuarticCoefficients>& q) {
    if (cfg.steps < 1) fail(ErrorKind::InvalidInput, "--steps must be positive");
    double rmax = cfg.rmax;
    if (rmax <= 0.0) {
        const double rs = q ? q->r_star().value : std::numeric_limits<double>::quiet_NaN();
        if (!std::isfinite(rs)) fail(ErrorKind::InvalidInput, "cannot choose the radius grid automatically; pass --rmax");
        rmax = 0.9 * rs;
    }
    const double rmin = cfg.rmin > 0.0 ? cfg.rmin : rmax / cfg.steps;
    if (rmin > rmax) fail(ErrorKind::InvalidInput, "--rmin exceeds --rmax");
    std::vector<double> grid;
    for (int k = 0; k < cfg.steps; ++k) {
        grid.push_back(cfg.steps == 1 ? rmax : rmin + (rmax - rmin) * k / (cfg.steps - 1));
    }
    return grid;
}

inline void report_coefficients(std::ostream& os, const QuarticCoefficients& q, int precision) {
    auto line = [&](const char* name, const Estimate& e) {
        os << name << " = " << format_number(e.value, precision) << " +- " << format_number(e.std_error, precision) << '\n';
    };
    line("a0", q.a0);
    line("a2", q.a2);
    line("a4", q.a4);
    const Estimate rs = q.r_star();
    line("r*", rs);
    if (q.a2.value > 5.0 * q.a2.std_error) {
        os << "verdict: Phi decreasing on (0, r*) with r* = " << format_number(rs.value, precision) << '\n';
    } else {
        os << "verdict: a2 is not positive at 5 stderr; no decrease established\n";
    }
}

inline void maybe_gnuplot(const RunConfig& cfg, const std::string& title, int column, const std::string& ylabel) {
    if (cfg.gnuplot.empty()) return;
    if (cfg.out.empty()) fail(ErrorKind::InvalidInput, "--gnuplot needs --out for the data file");
    std::ofstream script(cfg.gnuplot);
    if (!script) fail(ErrorKind::InvalidInput, "cannot write " + cfg.gnuplot);
    script << gnuplot_script(cfg.out, title, column, ylabel);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Commands

inline int cmd_construct(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const CarnotGroup g = load_group(cfg.group);
    const detail::Params prm = detail::parse_params(cfg);
    const CounterexampleResult r = construct(g, prm.b, prm.p, prm.q);
    const std::string json = certificate_to_json(g, r).dump(2) + "\n";
    std::ostream* summary = &out;
    if (cfg.out.empty()) {
        out << json;
        summary = &err;
    } else {
        std::ofstream file(cfg.out);
        if (!file) fail(ErrorKind::InvalidInput, "cannot write " + cfg.out);
        file << json;
    }
    const VariableNames names(g.weights);
    *summary << "group: " << g.name << '\n'
             << "pair: X" << r.pair.i + 1 << ", X" << r.pair.s + 1 << " via " << names.name(g.weights.coordinate(2, r.pair.j))
             << '\n'
             << "c = (";
    for (std::size_t k = 0; k < r.coefficients.size(); ++k) *summary << (k ? ", " : "") << r.coefficients[k];
    *summary << ")\n"
             << "u = " << print_poly(r.u, names) << '\n'
             << "harmonic: " << (r.certificate.harmonic ? "yes" : "no") << '\n'
             << "<grad P1, grad P3> = " << print_poly(r.certificate.inner_product, names) << '\n'
             << "certificate: PASS\n";
    return kOk;
}

inline int cmd_check(const RunConfig& cfg, std::ostream& out) {
    const CarnotGroup g = load_group(cfg.group);
    const VariableNames names(g.weights);
    const Polynomial p = parse_poly(cfg.poly, names);
    const HarmonicityResult h = is_harmonic(g, p);
    out << "group: " << g.name << '\n'
        << "polynomial: " << print_poly(p, names) << '\n'
        << "sublaplacian: " << print_poly(h.residual, names) << '\n'
        << "harmonic: " << (h.harmonic ? "yes" : "no") << '\n'
        << "G-degree decomposition:\n";
    if (p.is_zero()) out << "  (zero polynomial)\n";
    std::set<int> degrees;
    for (const auto& [beta, c] : p.terms()) degrees.insert(weighted_degree(beta, g.weights));
    for (int d : degrees) out << "  degree " << d << ": " << print_poly(p.g_homogeneous_part(g.weights, d), names) << '\n';
    if (g.law) {
        out << "intrinsic-odd: " << (intrinsic_odd_check(g, p) ? "yes" : "no") << '\n';
    } else {
        out << "intrinsic-odd: n/a (no group law)\n";
    }
    return kOk;
}

inline int cmd_coeffs(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const detail::NumericSetup s = detail::numeric_setup(cfg);
    const Decomposition d = decompose_13(s.group, s.u);
    const QuarticCoefficients q = quartic_coeffs(s.spec, d.p1, d.p3, detail::sampling(cfg));
    detail::Sinks sinks(cfg, out, err);
    write_coeffs_csv(*sinks.data, q, cfg.precision);
    *sinks.report << "acceptance: " << format_number(q.acceptance, 4) << '\n';
    detail::report_coefficients(*sinks.report, q, cfg.precision);
    return kOk;
}

inline int cmd_phi(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const detail::NumericSetup s = detail::numeric_setup(cfg);
    const auto q = detail::try_quartic(s, cfg);
    const std::vector<double> grid = detail::radius_grid(cfg, q);
    const PhiCurve direct = phi_curve_direct(s.spec, s.u, grid, detail::sampling(cfg), cfg.shells);
    std::optional<PhiCurve> quartic;
    if (q) quartic = phi_curve_quartic(s.spec, s.u, grid, detail::sampling(cfg));
    detail::Sinks sinks(cfg, out, err);
    write_phi_csv(*sinks.data, direct, quartic, cfg.precision);
    *sinks.report << "acceptance: " << format_number(direct.meta.acceptance, 4) << '\n';
    if (q) detail::report_coefficients(*sinks.report, *q, cfg.precision);
    detail::maybe_gnuplot(cfg, "Phi(r)", 2, "Phi");
    return kOk;
}

inline int cmd_jay(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const detail::NumericSetup s = detail::numeric_setup(cfg);
    std::optional<QuarticCoefficients> q;
    if (cfg.rmax <= 0.0) q = detail::try_quartic(s, cfg);
    const std::vector<double> grid = detail::radius_grid(cfg, q);
    const TwoPhaseCurve c = j_curve(s.spec, s.u, grid, detail::sampling(cfg), cfg.shells);
    detail::Sinks sinks(cfg, out, err);
    write_jay_csv(*sinks.data, c, cfg.precision);
    int symmetric = 0;
    for (std::size_t a = 0; a < c.r.size(); ++a) {
        if (std::abs(c.i_plus[a].value - c.i_minus[a].value) < 3.0 * c.difference_error[a]) ++symmetric;
    }
    *sinks.report << "acceptance: " << format_number(c.meta.acceptance, 4) << '\n'
                  << "|I+ - I-| < 3 stderr at " << symmetric << " of " << c.r.size() << " radii\n";
    detail::maybe_gnuplot(cfg, "J(r)", 2, "J");
    return kOk;
}

inline int cmd_euclid_ortho(const RunConfig& cfg, std::ostream& out) {
    const CarnotGroup g = make_euclidean(cfg.n);
    const VariableNames names(g.weights);
    const Polynomial ph = parse_poly(cfg.ph, names);
    const Polynomial pk = parse_poly(cfg.pk, names);
    int degree[2] = {0, 0};
    const Polynomial* polys[2] = {&ph, &pk};
    for (int k = 0; k < 2; ++k) {
        const Polynomial& p = *polys[k];
        if (p.is_zero()) fail(ErrorKind::InvalidParams, "polynomials must be nonzero");
        degree[k] = p.g_degree(g.weights);
        if (!p.is_g_homogeneous(g.weights, degree[k])) fail(ErrorKind::NotHomogeneous, print_poly(p, names) + " is not homogeneous");
        if (!is_harmonic(g, p).harmonic) fail(ErrorKind::InvalidParams, print_poly(p, names) + " is not harmonic");
    }
    if (degree[0] == degree[1]) fail(ErrorKind::InvalidParams, "the degrees must differ");
    const Polynomial integrand = horizontal_inner(horizontal_gradient(g, ph), horizontal_gradient(g, pk));
    const GaugeSpec spec = gauge_for(g);
    const SampledEstimate e = shell_integrate(spec, integrand, degree[0] + degree[1] - 2, detail::sampling(cfg));
    const bool pass = std::abs(e.estimate.value) < 3.0 * e.estimate.std_error;
    out << "degrees: " << degree[0] << ", " << degree[1] << '\n'
        << "integral = " << format_number(e.estimate.value, cfg.precision) << " +- "
        << format_number(e.estimate.std_error, cfg.precision) << '\n'
        << (pass ? "PASS" : "FAIL") << '\n';
    return kOk;
}

namespace detail {

inline PairAlpha parse_alpha(const std::string& text) {
    std::vector<Rational> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) v.push_back(parse_rational(item));
    if (v.size() != 4) fail(ErrorKind::InvalidInput, "--alpha needs four comma-separated rationals");
    return {v[0], v[1], v[2], v[3]};
}

struct DetReport {
    Rational det, quartic_form, cubic_form;
};

inline DetReport det_report(const PairAlpha& a, const Rational& b) {
    const Rational det = determinant(assemble_for_alpha(a, b).matrix);
    return {det, Rational(-72) * b * b * b * b * a.gap(), Rational(-72) * b * b * b * a.gap()};
}

}  // namespace detail

inline int cmd_det_check(const RunConfig& cfg, std::ostream& out) {
    if (cfg.random > 0) {
        std::mt19937_64 engine(cfg.seed);
        std::uniform_int_distribution<int> num(-9, 9);
        std::uniform_int_distribution<int> den(1, 9);
        int quartic_matches = 0;
        int cubic_matches = 0;
        for (int t = 0; t < cfg.random; ++t) {
            auto draw = [&] { return make_rational(num(engine), den(engine)); };
            const PairAlpha a{draw(), draw(), draw(), draw()};
            Rational b = draw();
            while (b == 0) b = draw();
            const detail::DetReport r = detail::det_report(a, b);
            if (r.det == r.quartic_form) ++quartic_matches;
            if (r.det == r.cubic_form) ++cubic_matches;
        }
        out << "random trials: " << cfg.random << '\n'
            << "det == -72 b^4 (a_1^2 - a_2^1): " << quartic_matches << '\n'
            << "det == -72 b^3 (a_1^2 - a_2^1): " << cubic_matches << '\n'
            << (quartic_matches == cfg.random ? "PASS" : "FAIL") << '\n';
        return kOk;
    }
    const PairAlpha a = detail::parse_alpha(cfg.alpha);
    const Rational b = parse_rational(cfg.b);
    if (b == 0) fail(ErrorKind::ZeroB, "b must be nonzero");
    const detail::DetReport r = detail::det_report(a, b);
    out << "det A_b = " << r.det << '\n'
        << "-72 b^4 (a_1^2 - a_2^1) = " << r.quartic_form << '\n'
        << "-72 b^3 (a_1^2 - a_2^1) = " << r.cubic_form << '\n';
    if (r.det == 0) out << "SINGULAR\n";
    out << (r.det == r.quartic_form ? "PASS" : "FAIL") << '\n';
    return kOk;
}

// ---------------------------------------------------------------------------

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Carnot group ACF counterexample toolkit", "carnot_acf"};
    app.require_subcommand(1);
    RunConfig cfg;
    cfg.workers = default_workers();

    auto group_opt = [&](CLI::App* sub) { sub->add_option("--group", cfg.group, "preset name or group file"); };
    auto params = [&](CLI::App* sub) {
        sub->add_option("--b", cfg.b, "rational b != 0");
        sub->add_option("--p", cfg.p, "rational p >= 0");
        sub->add_option("--q", cfg.q, "rational q >= 0");
    };
    auto numeric = [&](CLI::App* sub) {
        group_opt(sub);
        params(sub);
        sub->add_option("--u", cfg.u, "polynomial, or a file holding one (certificates accepted)");
        sub->add_option("--samples", cfg.samples, "Monte Carlo samples");
        sub->add_option("--seed", cfg.seed, "random seed");
        sub->add_option("--workers", cfg.workers, "worker threads (default CARNOT_ACF_WORKERS or 1)");
        sub->add_option("--out", cfg.out, "CSV output path (default stdout)");
        sub->add_option("--precision", cfg.precision, "significant digits")->check(CLI::Range(1, 17));
        sub->add_option("--gamma-constant", cfg.gamma_constant, "multiplicative constant C of Gamma");
    };
    auto curve = [&](CLI::App* sub) {
        sub->add_option("--rmin", cfg.rmin, "smallest radius (default rmax/steps)");
        sub->add_option("--rmax", cfg.rmax, "largest radius (default 0.9 sqrt(a2/a4))");
        sub->add_option("--steps", cfg.steps, "grid points");
        sub->add_option("--shells", cfg.shells, "dyadic shell depth K");
        sub->add_option("--gnuplot", cfg.gnuplot, "also write a gnuplot script");
    };

    CLI::App* construct_cmd = app.add_subcommand("construct", "build and verify u = P1 - P3");
    group_opt(construct_cmd);
    params(construct_cmd);
    construct_cmd->add_option("--out", cfg.out, "certificate path (default stdout)");

    CLI::App* check_cmd = app.add_subcommand("check", "sub-Laplacian, degrees and oddness of a polynomial");
    group_opt(check_cmd);
    check_cmd->add_option("poly", cfg.poly, "polynomial")->required();

    CLI::App* phi_cmd = app.add_subcommand("phi", "Phi(r) by the direct and quartic methods");
    numeric(phi_cmd);
    curve(phi_cmd);

    CLI::App* coeffs_cmd = app.add_subcommand("coeffs", "quartic coefficients a0, a2, a4");
    numeric(coeffs_cmd);

    CLI::App* jay_cmd = app.add_subcommand("jay", "two-phase product J(r)");
    numeric(jay_cmd);
    curve(jay_cmd);

    CLI::App* ortho_cmd = app.add_subcommand("euclid-ortho", "orthogonality of harmonic polynomials in R^n");
    ortho_cmd->add_option("--n", cfg.n, "dimension (>= 3)");
    ortho_cmd->add_option("--ph", cfg.ph, "first harmonic polynomial")->required();
    ortho_cmd->add_option("--pk", cfg.pk, "second harmonic polynomial")->required();
    ortho_cmd->add_option("--samples", cfg.samples, "Monte Carlo samples");
    ortho_cmd->add_option("--seed", cfg.seed, "random seed");
    ortho_cmd->add_option("--workers", cfg.workers, "worker threads");
    ortho_cmd->add_option("--precision", cfg.precision, "significant digits")->check(CLI::Range(1, 17));

    CLI::App* det_cmd = app.add_subcommand("det-check", "exact determinant of the assembled 5x5 system");
    det_cmd->add_option("--alpha", cfg.alpha, "alpha_1^1,alpha_2^1,alpha_1^2,alpha_2^2");
    det_cmd->add_option("--b", cfg.b, "rational b != 0");
    det_cmd->add_option("--random", cfg.random, "check this many random (alpha, b) instead");
    det_cmd->add_option("--seed", cfg.seed, "seed for --random");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*construct_cmd) return cmd_construct(cfg, out, err);
        if (*check_cmd) return cmd_check(cfg, out);
        if (*phi_cmd) return cmd_phi(cfg, out, err);
        if (*coeffs_cmd) return cmd_coeffs(cfg, out, err);
        if (*jay_cmd) return cmd_jay(cfg, out, err);
        if (*ortho_cmd) return cmd_euclid_ortho(cfg, out);
        if (*det_cmd) return cmd_det_check(cfg, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e.kind());
    } catch (const nlohmann::json::exception& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}

}  // namespace carnot::cli
