#pragma once

// Exact polynomials in the formal parameter alpha with rational coefficients.

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace polyrad {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline std::string to_string(const Rational& q) {
    using boost::multiprecision::denominator;
    using boost::multiprecision::numerator;
    std::string s = numerator(q).str();
    if (denominator(q) != 1) s += "/" + denominator(q).str();
    return s;
}

inline Rational parse_rational(std::string_view text) {
    auto slash = text.find('/');
    try {
        if (slash == std::string_view::npos) return Rational(Integer(std::string(text)));
        Integer num(std::string(text.substr(0, slash)));
        Integer den(std::string(text.substr(slash + 1)));
        if (den == 0) throw std::invalid_argument("zero denominator");
        return Rational(num, den);
    } catch (const std::runtime_error&) {
        throw std::invalid_argument("malformed rational: " + std::string(text));
    }
}

/// Polynomial c0 + c1*alpha + ... + cn*alpha^n over the rationals.
/// The coefficient vector never carries trailing zeros, so the zero
/// polynomial is the empty vector and degree() is -1 for it.
class AlphaPoly {
public:
    AlphaPoly() = default;
    AlphaPoly(long long c) : AlphaPoly(Rational(c)) {}  // NOLINT(implicit)
    AlphaPoly(Rational c) {                              // NOLINT(implicit)
        if (c != 0) coeffs_.push_back(std::move(c));
    }
    explicit AlphaPoly(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }
    AlphaPoly(std::initializer_list<long long> coeffs) {
        for (auto c : coeffs) coeffs_.emplace_back(c);
        trim();
    }

    /// The monomial alpha.
    static AlphaPoly alpha() { return AlphaPoly(std::vector<Rational>{0, 1}); }
    /// a*alpha + b.
    static AlphaPoly affine(long long a, long long b) { return AlphaPoly(std::vector<Rational>{b, a}); }

    bool is_zero() const noexcept { return coeffs_.empty(); }
    int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<Rational>& coefficients() const noexcept { return coeffs_; }
    Rational coefficient(int k) const {
        return (k >= 0 && k < static_cast<int>(coeffs_.size())) ? coeffs_[k] : Rational(0);
    }

    Rational evaluate(const Rational& x) const {
        Rational acc = 0;
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    double evaluate(double x) const {
        double acc = 0.0;
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
            acc = acc * x + static_cast<double>(*it);
        return acc;
    }

    AlphaPoly& operator+=(const AlphaPoly& o) {
        if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
        for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
        trim();
        return *this;
    }
    AlphaPoly& operator-=(const AlphaPoly& o) {
        if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
        for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] -= o.coeffs_[k];
        trim();
        return *this;
    }
    AlphaPoly& operator*=(const AlphaPoly& o) {
        *this = *this * o;
        return *this;
    }

    friend AlphaPoly operator+(AlphaPoly a, const AlphaPoly& b) { return a += b; }
    friend AlphaPoly operator-(AlphaPoly a, const AlphaPoly& b) { return a -= b; }
    friend AlphaPoly operator-(AlphaPoly a) {
        for (auto& c : a.coeffs_) c = -c;
        return a;
    }
    friend AlphaPoly operator*(const AlphaPoly& a, const AlphaPoly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<Rational> out(a.coeffs_.size() + b.coeffs_.size() - 1);
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
        return AlphaPoly(std::move(out));
    }
    friend bool operator==(const AlphaPoly& a, const AlphaPoly& b) { return a.coeffs_ == b.coeffs_; }
    friend bool operator!=(const AlphaPoly& a, const AlphaPoly& b) { return !(a == b); }

    /// Human-readable form, highest degree first: "2*a^2 - 3/2*a + 1".
    std::string str() const {
        if (is_zero()) return "0";
        std::ostringstream os;
        bool first = true;
        for (int k = degree(); k >= 0; --k) {
            const Rational& c = coeffs_[k];
            if (c == 0) continue;
            Rational mag = c < 0 ? Rational(-c) : c;
            if (first) {
                if (c < 0) os << "-";
            } else {
                os << (c < 0 ? " - " : " + ");
            }
            first = false;
            bool unit = (mag == 1);
            if (!unit || k == 0) os << to_string(mag);
            if (k > 0) {
                if (!unit) os << "*";
                os << "a";
                if (k > 1) os << "^" << k;
            }
        }
        return os.str();
    }

    /// Degree-indexed rational strings, the wire format used in JSON output.
    std::vector<std::string> to_strings() const {
        std::vector<std::string> out;
        out.reserve(coeffs_.size());
        for (const auto& c : coeffs_) out.push_back(to_string(c));
        return out;
    }
    static AlphaPoly from_strings(const std::vector<std::string>& s) {
        std::vector<Rational> c;
        c.reserve(s.size());
        for (const auto& t : s) c.push_back(parse_rational(t));
        return AlphaPoly(std::move(c));
    }

    friend std::ostream& operator<<(std::ostream& os, const AlphaPoly& p) { return os << p.str(); }

private:
    void trim() {
        while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
    }

    std::vector<Rational> coeffs_;
};

/// Product of (alpha + offset) over a list of integer offsets.
inline AlphaPoly product_of_shifts(const std::vector<long long>& offsets) {
    AlphaPoly p = 1;
    for (auto o : offsets) p *= AlphaPoly::affine(1, o);
    return p;
}

}  // namespace polyrad
