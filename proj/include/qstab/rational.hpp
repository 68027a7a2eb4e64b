#ifndef QSTAB_RATIONAL_HPP
#define QSTAB_RATIONAL_HPP

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace qstab {

/// Exact fraction with 64-bit parts. Model files store matrix entries as
/// [num, den] pairs; invariant checks on those matrices are done exactly.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t n) : num(n), den(1) {}
    Rational(std::int64_t n, std::int64_t d) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den == 0) throw std::invalid_argument("Rational: zero denominator");
        if (den < 0) { num = -num; den = -den; }
        const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
    }

    bool is_zero() const { return num == 0; }
    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

    friend bool operator==(const Rational& a, const Rational& b) {
        // normalized representatives are unique
        return a.num == b.num && a.den == b.den;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return Rational(checked(a.num, b.den) + checked(b.num, a.den), checked(a.den, b.den));
    }
    friend Rational operator-(const Rational& a) { return Rational(-a.num, a.den); }
    friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return Rational(checked(a.num, b.num), checked(a.den, b.den));
    }

private:
    static std::int64_t checked(std::int64_t a, std::int64_t b) {
        __int128 p = static_cast<__int128>(a) * b;
        if (p > INT64_MAX || p < INT64_MIN)
            throw std::overflow_error("Rational: 64-bit overflow");
        return static_cast<std::int64_t>(p);
    }
};

/// Dense row-major matrix of exact fractions.
struct RationalMatrix {
    int n = 0;
    std::vector<Rational> entries;  // n*n, row-major

    RationalMatrix() = default;
    explicit RationalMatrix(int dim) : n(dim), entries(dim * dim) {}

    Rational& operator()(int i, int j) { return entries[i * n + j]; }
    const Rational& operator()(int i, int j) const { return entries[i * n + j]; }

    bool is_zero() const {
        for (const auto& e : entries)
            if (!e.is_zero()) return false;
        return true;
    }

    bool is_symmetric() const {
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if ((*this)(i, j) != (*this)(j, i)) return false;
        return true;
    }
};

/// Exact determinant sign test via fraction-free (Bareiss) elimination on the
/// numerators after clearing denominators. Returns true iff det != 0.
bool rational_det_nonzero(const RationalMatrix& m);

}  // namespace qstab

#endif
