#pragma once

// Text grammar for polynomials (whitespace-insensitive):
//   expr     := ('+'|'-')? term (('+'|'-') term)*
//   term     := factor ('*' factor)*
//   factor   := rational | var ('^' posint)? | '(' expr ')'
//   rational := int ('/' posint)?
// Variables follow the stratum convention of StratifiedWeights::variable_name.
// A primed copy (x1', y', ...) addresses a second point, used by group laws.

#include <cctype>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "carnot/polynomial.hpp"

namespace carnot {

/// Names of the variables of a polynomial space: the group coordinates, and
/// optionally a primed second copy at indices n..2n-1.
class VariableNames {
public:
    explicit VariableNames(const StratifiedWeights& w, bool with_primed_copy = false) {
        const int n = w.n();
        for (int j = 0; j < n; ++j) names_.push_back(w.variable_name(j));
        if (with_primed_copy) {
            for (int j = 0; j < n; ++j) names_.push_back(w.variable_name(j) + "'");
        }
        for (int j = 0; j < static_cast<int>(names_.size()); ++j) lookup_.emplace(names_[j], j);
        // "y1" stays valid when the layer has a single variable printed as "y".
        for (int j = 0; j < n; ++j) {
            const int layer = w.degree(j);
            if ((layer == 2 || layer == 3) && w.layer_dim(layer) == 1) {
                const std::string alias = std::string(layer == 2 ? "y" : "t") + "1";
                lookup_.emplace(alias, j);
                if (with_primed_copy) lookup_.emplace(alias + "'", n + j);
            }
        }
    }

    int size() const { return static_cast<int>(names_.size()); }
    const std::string& name(int j) const { return names_.at(j); }

    int find(const std::string& name) const {
        auto it = lookup_.find(name);
        return it == lookup_.end() ? -1 : it->second;
    }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, int> lookup_;
};

namespace detail {

class PolyParser {
public:
    PolyParser(std::string_view text, const VariableNames& names) : text_(text), names_(names) {}

    Polynomial parse() {
        skip_ws();
        if (pos_ == text_.size()) throw SyntaxError(pos_, "empty polynomial");
        Polynomial p = expr();
        skip_ws();
        if (pos_ != text_.size()) throw SyntaxError(pos_, std::string("unexpected '") + text_[pos_] + "'");
        return p;
    }

private:
    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Polynomial expr() {
        skip_ws();
        bool negate = false;
        if (accept('-')) negate = true;
        else accept('+');
        Polynomial p = term();
        if (negate) p = -p;
        for (;;) {
            if (accept('+')) p += term();
            else if (accept('-')) p -= term();
            else return p;
        }
    }

    Polynomial term() {
        Polynomial p = factor();
        while (accept('*')) p = p * factor();
        return p;
    }

    Integer digits(const char* what) {
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (start == pos_) throw SyntaxError(pos_, std::string("expected ") + what);
        return Integer(std::string(text_.substr(start, pos_ - start)));
    }

    Polynomial factor() {
        skip_ws();
        if (pos_ == text_.size()) throw SyntaxError(pos_, "unexpected end of input");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Polynomial p = expr();
            if (!accept(')')) throw SyntaxError(pos_, "expected ')'");
            return p;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            Integer num = digits("integer");
            Integer den = 1;
            if (accept('/')) {
                den = digits("denominator");
                if (den == 0) throw SyntaxError(pos_, "zero denominator");
            }
            return Polynomial::constant(names_.size(), make_rational(num, den));
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
                ++pos_;
            }
            if (pos_ < text_.size() && text_[pos_] == '\'') ++pos_;
            const std::string name(text_.substr(start, pos_ - start));
            const int index = names_.find(name);
            if (index < 0) throw Error(ErrorKind::UnknownVariable, "'" + name + "' at position " + std::to_string(start));
            Polynomial v = Polynomial::variable(names_.size(), index);
            if (accept('^')) {
                const Integer e = digits("exponent");
                if (e == 0 || !e.fits_uint_p()) throw SyntaxError(pos_, "exponent must be a positive integer");
                Monomial beta(names_.size(), 0u);
                beta[index] = static_cast<unsigned>(e.get_ui());
                return Polynomial::monomial(std::move(beta), 1);
            }
            return v;
        }
        throw SyntaxError(pos_, std::string("unexpected '") + c + "'");
    }

    std::string_view text_;
    const VariableNames& names_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline Polynomial parse_poly(std::string_view text, const VariableNames& names) {
    return detail::PolyParser(text, names).parse();
}

inline Polynomial parse_poly(std::string_view text, const StratifiedWeights& w) {
    return parse_poly(text, VariableNames(w));
}

/// Canonical rendering, terms in graded-lex order, e.g. "x2 - 1/6*x2^3 + 1/2*x1^2*x2".
inline std::string print_poly(const Polynomial& p, const VariableNames& names) {
    if (p.n() != names.size()) fail(ErrorKind::DimensionMismatch, "names do not match the polynomial");
    if (p.is_zero()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [beta, c] : p.terms()) {
        const bool negative = c < 0;
        const Rational magnitude = negative ? Rational(-c) : c;
        if (first) {
            if (negative) out << '-';
        } else {
            out << (negative ? " - " : " + ");
        }
        first = false;
        bool wrote = false;
        const bool is_constant = total_degree(beta) == 0;
        if (magnitude != 1 || is_constant) {
            out << magnitude.get_str();
            wrote = true;
        }
        for (int j = 0; j < p.n(); ++j) {
            if (beta[j] == 0) continue;
            if (wrote) out << '*';
            out << names.name(j);
            if (beta[j] > 1) out << '^' << beta[j];
            wrote = true;
        }
    }
    return out.str();
}

inline std::string print_poly(const Polynomial& p, const StratifiedWeights& w) {
    return print_poly(p, VariableNames(w));
}

}  // namespace carnot
