#pragma once

#include <cmath>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include "carnot/acf.hpp"

namespace carnot {

inline std::string format_number(double v, int precision = 9) {
    if (std::isnan(v)) return "nan";
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os.precision(precision);
    os << v;
    return os.str();
}

/// r,phi,stderr,phi_quartic,quartic_stderr; the quartic columns are empty when absent.
inline void write_phi_csv(std::ostream& os, const PhiCurve& direct, const std::optional<PhiCurve>& quartic,
                          int precision = 9) {
    os << "r,phi,stderr,phi_quartic,quartic_stderr\n";
    for (std::size_t a = 0; a < direct.r.size(); ++a) {
        os << format_number(direct.r[a], precision) << ',' << format_number(direct.phi[a].value, precision) << ','
           << format_number(direct.phi[a].std_error, precision) << ',';
        if (quartic) {
            os << format_number(quartic->phi[a].value, precision) << ','
               << format_number(quartic->phi[a].std_error, precision);
        } else {
            os << ',';
        }
        os << '\n';
    }
}

/// name,estimate,stderr with rows a0, a2, a4, r_star.
inline void write_coeffs_csv(std::ostream& os, const QuarticCoefficients& q, int precision = 9) {
    auto row = [&](const char* name, const Estimate& e) {
        os << name << ',' << format_number(e.value, precision) << ',' << format_number(e.std_error, precision) << '\n';
    };
    os << "name,estimate,stderr\n";
    row("a0", q.a0);
    row("a2", q.a2);
    row("a4", q.a4);
    row("r_star", q.r_star());
}

/// r,J,J_stderr,I_plus,I_plus_stderr,I_minus,I_minus_stderr.
inline void write_jay_csv(std::ostream& os, const TwoPhaseCurve& c, int precision = 9) {
    os << "r,J,J_stderr,I_plus,I_plus_stderr,I_minus,I_minus_stderr\n";
    for (std::size_t a = 0; a < c.r.size(); ++a) {
        os << format_number(c.r[a], precision) << ',' << format_number(c.j[a].value, precision) << ','
           << format_number(c.j[a].std_error, precision) << ',' << format_number(c.i_plus[a].value, precision) << ','
           << format_number(c.i_plus[a].std_error, precision) << ',' << format_number(c.i_minus[a].value, precision)
           << ',' << format_number(c.i_minus[a].std_error, precision) << '\n';
    }
}

/// gnuplot script plotting a CSV with error bars on column value_col (stderr in value_col + 1).
inline std::string gnuplot_script(const std::string& csv_path, const std::string& title, int value_col,
                                  const std::string& ylabel) {
    std::ostringstream os;
    os << "set datafile separator ','\n"
       << "set key autotitle columnhead\n"
       << "set title '" << title << "'\n"
       << "set xlabel 'r'\n"
       << "set ylabel '" << ylabel << "'\n"
       << "plot '" << csv_path << "' using 1:" << value_col << ':' << value_col + 1 << " with yerrorlines\n";
    return os.str();
}

}  // namespace carnot
