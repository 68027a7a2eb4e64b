#ifndef QSTAB_TYPES_HPP
#define QSTAB_TYPES_HPP

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace qstab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RowVector = Eigen::RowVectorXcd;

inline constexpr double euler_gamma = 0.5772156649015328606;

/// Geometric (log-uniform) grid on [t0, t1].
struct Grid {
    double t0 = 1.0;
    double t1 = 60.0;
    int points = 256;

    Grid() = default;
    Grid(double a, double b, int n) : t0(a), t1(b), points(n) {
        if (!(t0 > 0.0) || !(t1 > t0) || points < 2)
            throw std::invalid_argument("Grid: need 0 < t0 < t1 and points >= 2");
    }

    double operator[](int i) const {
        if (i == 0) return t0;
        if (i == points - 1) return t1;
        const double x = static_cast<double>(i) / (points - 1);
        return t0 * std::pow(t1 / t0, x);
    }

    std::vector<double> values() const {
        std::vector<double> v(points);
        for (int i = 0; i < points; ++i) v[i] = (*this)[i];
        return v;
    }
};

inline bool is_finite(Complex z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

inline bool is_finite(const Matrix& m) {
    return m.allFinite();
}

}  // namespace qstab

#endif
