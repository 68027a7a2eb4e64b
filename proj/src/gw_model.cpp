#include "qstab/gw_model.hpp"

#include <cmath>

namespace qstab {

bool rational_det_nonzero(const RationalMatrix& m) {
    // clear denominators row by row, then fraction-free Bareiss in __int128
    const int n = m.n;
    std::vector<__int128> a(n * n);
    for (int i = 0; i < n; ++i) {
        __int128 lcm = 1;
        for (int j = 0; j < n; ++j) {
            const std::int64_t d = m(i, j).den;
            const std::int64_t g = std::gcd(static_cast<std::int64_t>(lcm % d), d);
            lcm = lcm / g * d;
        }
        for (int j = 0; j < n; ++j)
            a[i * n + j] = static_cast<__int128>(m(i, j).num) * (lcm / m(i, j).den);
    }
    __int128 prev = 1;
    std::vector<__int128> w = a;
    for (int k = 0; k < n - 1; ++k) {
        if (w[k * n + k] == 0) {
            int p = -1;
            for (int i = k + 1; i < n; ++i)
                if (w[i * n + k] != 0) { p = i; break; }
            if (p < 0) return false;  // zero column -> singular
            for (int j = 0; j < n; ++j) std::swap(w[k * n + j], w[p * n + j]);
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j)
                w[i * n + j] = (w[i * n + j] * w[k * n + k] - w[i * n + k] * w[k * n + j]) / prev;
        prev = w[k * n + k];
    }
    return w[(n - 1) * n + (n - 1)] != 0;
}

}  // namespace qstab

namespace qstab::gw {

namespace {

Eigen::MatrixXd to_double(const RationalMatrix& m) {
    Eigen::MatrixXd r(m.n, m.n);
    for (int i = 0; i < m.n; ++i)
        for (int j = 0; j < m.n; ++j) r(i, j) = m(i, j).to_double();
    return r;
}

}  // namespace

Eigen::MatrixXd CohModel::pairing_d() const { return to_double(pairing); }
Eigen::MatrixXd CohModel::c1_cup_d() const { return to_double(c1_cup); }

Eigen::MatrixXd CohModel::mu_d() const {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim(), dim());
    for (int i = 0; i < dim(); ++i) m(i, i) = mu_diag[i].to_double();
    return m;
}

ValidationReport validate_model(const CohModel& model) {
    ValidationReport rep;
    auto fail = [&rep](const std::string& msg) {
        rep.pass = false;
        rep.violations.push_back(msg);
    };

    const int n = model.dim();
    if (model.pairing.n != n || model.c1_cup.n != n || static_cast<int>(model.mu_diag.size()) != n) {
        fail("dimension mismatch between basis and matrices");
        return rep;
    }

    if (!model.pairing.is_symmetric()) fail("pairing is not symmetric");
    if (!rational_det_nonzero(model.pairing)) fail("pairing is degenerate");

    // mu half-integer and anti-symmetric: P_ij != 0 requires mu_i + mu_j = 0
    for (int i = 0; i < n; ++i) {
        const Rational& mu = model.mu_diag[i];
        if (mu.den != 1 && mu.den != 2) fail("mu entry " + std::to_string(i) + " is not half-integer");
        const Rational expected(model.basis[i].deg - model.dim_x, 2);
        if (mu != expected)
            fail("mu entry " + std::to_string(i) + " != (deg - dim)/2");
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (!model.pairing(i, j).is_zero() && !(model.mu_diag[i] + model.mu_diag[j]).is_zero())
                fail("mu is not anti-symmetric for the pairing at (" + std::to_string(i) + "," +
                     std::to_string(j) + ")");

    // c1 cup raises degree by exactly 2
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (!model.c1_cup(i, j).is_zero() && model.basis[i].deg != model.basis[j].deg + 2)
                fail("c1_cup does not raise degree by 2 at (" + std::to_string(i) + "," +
                     std::to_string(j) + ")");

    for (const auto& cc : model.curve_classes) {
        if (cc.t_d.n != n) {
            fail("class " + cc.label + ": T_d dimension mismatch");
            continue;
        }
        if (cc.omega_dot_d < 0.0) fail("class " + cc.label + ": omega.d < 0");

        // symmetry w.r.t. pairing: (T a, b) = (a, T b), i.e. T^t P = P T
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                Rational lhs(0), rhs(0);
                for (int k = 0; k < n; ++k) {
                    lhs = lhs + cc.t_d(k, i) * model.pairing(k, j);
                    rhs = rhs + model.pairing(i, k) * cc.t_d(k, j);
                }
                if (lhs != rhs) {
                    fail("class " + cc.label + ": T_d is not symmetric for the pairing");
                    i = j = n;  // one report per class
                }
            }

        const int shift = 2 * (1 - cc.c1_dot_d);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (!cc.t_d(i, j).is_zero() && model.basis[i].deg - model.basis[j].deg != shift) {
                    fail("class " + cc.label + ": T_d not homogeneous of degree " +
                         std::to_string(shift));
                    i = j = n;
                }

        if ((cc.c1_dot_d > model.dim_x + 1 || cc.c1_dot_d <= 0) && !cc.t_d.is_zero())
            fail("class " + cc.label + ": T_d != 0 outside the degree window 0 < c1.d <= dim+1");
    }
    return rep;
}

std::vector<CurveClass> admissible_classes(const CohModel& model, const TruncationParams& params) {
    std::vector<CurveClass> out;
    for (const auto& cc : model.curve_classes) {
        if (cc.t_d.is_zero()) continue;
        if (cc.c1_dot_d <= 0 || cc.c1_dot_d > model.dim_x + 1)
            throw std::invalid_argument("admissible_classes: class " + cc.label +
                                        " has T_d != 0 but c1.d = " + std::to_string(cc.c1_dot_d) +
                                        " outside (0, dim+1]; inconsistent GW data");
        const double scaled_omega = params.scale_omega * cc.omega_dot_d;
        if (static_cast<double>(cc.c1_dot_d) - scaled_omega > 0.0) out.push_back(cc);
    }
    return out;
}

Matrix truncated_endomorphism(const CohModel& model, const TruncationParams& params, Complex u) {
    const int n = model.dim();
    Matrix e = model.c1_cup_d().cast<Complex>();
    for (const auto& cc : admissible_classes(model, params)) {
        Complex upow = 1.0;
        for (int k = 0; k < cc.c1_dot_d; ++k) upow *= u;
        const Complex weight = static_cast<double>(cc.c1_dot_d) * upow *
                               std::exp(-Complex(params.scale_omega * cc.omega_dot_d, cc.b_dot_d));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                e(i, j) += weight * cc.t_d(i, j).to_double();
    }
    return e;
}

CohModel builtin_p1(Complex a) {
    if (a.real() < 0.0)
        throw std::invalid_argument("builtin_p1: Re(a) >= 0 required (omega.d >= 0)");
    CohModel m;
    m.dim_x = 1;
    m.basis = {{"1", 0}, {"H", 2}};
    m.pairing = RationalMatrix(2);
    m.pairing(0, 1) = Rational(1);
    m.pairing(1, 0) = Rational(1);
    m.c1_cup = RationalMatrix(2);
    m.c1_cup(1, 0) = Rational(2);
    m.mu_diag = {Rational(-1, 2), Rational(1, 2)};

    CurveClass line;
    line.label = "line";
    line.c1_dot_d = 2;
    line.omega_dot_d = 2.0 * a.real();
    line.b_dot_d = 2.0 * a.imag();
    line.t_d = RationalMatrix(2);
    line.t_d(0, 1) = Rational(1);  // T_d(H) = 1, degree shift -2
    m.curve_classes.push_back(line);
    return m;
}

CohModel builtin_curve(int genus) {
    if (genus < 0) throw std::invalid_argument("builtin_curve: genus >= 0");
    if (genus == 0) return builtin_p1(0.0);
    CohModel m;
    m.dim_x = 1;
    m.basis = {{"1", 0}, {"H", 2}};
    m.pairing = RationalMatrix(2);
    m.pairing(0, 1) = Rational(1);
    m.pairing(1, 0) = Rational(1);
    m.c1_cup = RationalMatrix(2);
    m.c1_cup(1, 0) = Rational(2 - 2 * genus);
    m.mu_diag = {Rational(-1, 2), Rational(1, 2)};
    return m;
}

}  // namespace qstab::gw
