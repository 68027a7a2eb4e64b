#include "qstab/qde.hpp"

#include <cmath>

namespace qstab::qde {

namespace {

constexpr double kGaugeCap = 1e150;

// Dormand-Prince 5(4) tableau
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

struct Stepper {
    const std::function<Matrix(double)>& rhs;
    double rel_tol;

    Matrix f(double t, const Matrix& y) const { return rhs(t) * y; }

    // one adaptive step from (t, y); updates t, y, h; returns last stage slope
    void step(double& t, Matrix& y, double& h, double t_end) const {
        while (true) {
            if (t + h > t_end) h = t_end - t;
            const Matrix k1 = f(t, y);
            const Matrix k2 = f(t + c2 * h, y + h * (a21 * k1));
            const Matrix k3 = f(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
            const Matrix k4 = f(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
            const Matrix k5 = f(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
            const Matrix k6 =
                f(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
            const Matrix ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
            const Matrix k7 = f(t + h, ynew);
            const Matrix err =
                h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

            double err_norm = 0.0;
            for (int i = 0; i < y.rows(); ++i)
                for (int j = 0; j < y.cols(); ++j) {
                    const double scale =
                        rel_tol * std::max({std::abs(y(i, j)), std::abs(ynew(i, j)), 1e-290});
                    err_norm = std::max(err_norm, std::abs(err(i, j)) / scale);
                }

            if (err_norm <= 1.0) {
                t += h;
                y = ynew;
                const double grow = err_norm > 0.0 ? 0.9 * std::pow(err_norm, -0.2) : 5.0;
                h *= std::clamp(grow, 0.2, 5.0);
                return;
            }
            h *= std::clamp(0.9 * std::pow(err_norm, -0.2), 0.1, 0.9);
            if (!(h > 1e-14 * std::max(1.0, std::abs(t))))
                throw std::runtime_error("integrate: step size underflow at t = " +
                                         std::to_string(t));
        }
    }
};

}  // namespace

Matrix FundamentalSolution::at(int i) const {
    return std::exp(samples.at(i).log_gauge) * samples.at(i).phi;
}

Complex FundamentalSolution::log_det_drift(int i) const {
    const auto& s0 = samples.front();
    const auto& si = samples.at(i);
    const int n = static_cast<int>(s0.phi.rows());
    const Complex d0 = std::log(s0.phi.determinant()) + static_cast<double>(n) * s0.log_gauge;
    const Complex di = std::log(si.phi.determinant()) + static_cast<double>(n) * si.log_gauge;
    return di - d0;
}

FundamentalSolution integrate_linear(const std::function<Matrix(double)>& rhs_matrix,
                                     const Matrix& phi0, const Grid& grid, double rel_tol) {
    if (std::abs(phi0.determinant()) == 0.0)
        throw std::invalid_argument("integrate: phi0 must be invertible");

    FundamentalSolution out;
    out.kind = SolutionKind::numeric;
    out.samples.reserve(grid.points);

    Stepper st{rhs_matrix, rel_tol};
    double t = grid.t0;
    Matrix y = phi0;
    double gauge = 0.0;
    double h = 1e-4 * grid.t0;

    out.samples.push_back({t, y, gauge});
    for (int i = 1; i < grid.points; ++i) {
        const double target = grid[i];
        while (t < target) {
            st.step(t, y, h, target);
            const double nrm = y.cwiseAbs().maxCoeff();
            if (nrm > kGaugeCap) {
                y /= nrm;
                gauge += std::log(nrm);
            }
        }
        out.samples.push_back({t, y, gauge});
    }
    return out;
}

FundamentalSolution integrate_modified(const gw::CohModel& model,
                                       const gw::TruncationParams& params, const Matrix& phi0,
                                       const Grid& grid, double rel_tol) {
    const Matrix e1m = gw::truncated_endomorphism(model, params, 1.0);
    const Matrix mu = model.mu_d().cast<Complex>();
    const Complex inv_z = 1.0 / params.z;
    auto rhs = [e1m, mu, inv_z](double t) -> Matrix { return -inv_z * e1m + mu / t; };
    return integrate_linear(rhs, phi0, grid, rel_tol);
}

FundamentalSolution integrate_raw(const gw::CohModel& model, const gw::TruncationParams& params,
                                  const Matrix& phi0, const Grid& grid, double rel_tol) {
    const Complex inv_z = 1.0 / params.z;
    auto rhs = [&model, params, inv_z](double t) -> Matrix {
        return (-inv_z / t) * gw::truncated_endomorphism(model, params, t);
    };
    return integrate_linear(rhs, phi0, grid, rel_tol);
}

Matrix canonical_solution_curve(int genus, Complex z, double t) {
    if (genus < 1) throw std::invalid_argument("canonical_solution_curve: genus >= 1");
    if (z == Complex(0.0, 0.0)) throw std::invalid_argument("canonical_solution_curve: z != 0");
    const gw::CohModel model = gw::builtin_curve(genus);
    const Matrix c1 = model.c1_cup_d().cast<Complex>();
    Matrix a = Matrix::Identity(2, 2);
    a(1, 0) = 2.0 * (genus - 1) * euler_gamma;
    return linalg::mat_pow_t(-c1 / z, t) * a;
}

AsymptoticSpectrum asymptotic_spectrum(const gw::CohModel& model,
                                       const gw::TruncationParams& params) {
    const Matrix e1m = gw::truncated_endomorphism(model, params, 1.0);
    AsymptoticSpectrum s;
    s.full = linalg::eigen_decompose(-e1m / params.z);
    s.eigenvalues = s.full.eigenvalues;
    s.distinct_real_parts = s.full.distinct_real_parts;
    s.distinct_imag_parts = s.full.distinct_imag_parts;
    s.ramification_order = (s.full.is_semisimple && s.full.distinct_eigenvalues) ? 1 : 0;
    return s;
}

GrowthFit growth_rate(const std::vector<double>& t, const std::vector<Complex>& f) {
    if (t.size() != f.size() || t.size() < 20)
        throw std::invalid_argument("growth_rate: need >= 20 samples");
    if (!(t.back() / t.front() >= 10.0))
        throw std::invalid_argument("growth_rate: need t1/t0 >= 10");

    const std::size_t n = t.size();
    std::vector<double> tt, y;
    for (std::size_t i = n / 2; i < n; ++i) {
        const double mag = std::abs(f[i]);
        if (mag > 0.0 && std::isfinite(mag)) {
            tt.push_back(t[i]);
            y.push_back(std::log(mag));
        }
    }
    if (tt.size() < 4)
        throw std::runtime_error("growth_rate: tail has no nonzero samples, rate undefined");

    Eigen::MatrixXd a(tt.size(), 3);
    Eigen::VectorXd rhs(tt.size());
    for (std::size_t i = 0; i < tt.size(); ++i) {
        a(i, 0) = tt[i];
        a(i, 1) = std::log(tt[i]);
        a(i, 2) = 1.0;
        rhs(i) = y[i];
    }
    const Eigen::VectorXd coeff = a.colPivHouseholderQr().solve(rhs);
    const Eigen::VectorXd resid = a * coeff - rhs;

    GrowthFit g;
    g.rate = coeff(0);
    g.log_coeff = coeff(1);
    g.intercept = coeff(2);
    g.residual = std::sqrt(resid.squaredNorm() / resid.size());
    return g;
}

RowVector integration_row(const gw::CohModel& model) {
    // (alpha, 1)_X: pair with the unit class, assumed to be the degree-0
    // basis element
    int unit = -1;
    for (int i = 0; i < model.dim(); ++i)
        if (model.basis[i].deg == 0) {
            unit = i;
            break;
        }
    if (unit < 0) throw std::invalid_argument("integration_row: no degree-0 basis element");
    const Eigen::MatrixXd p = model.pairing_d();
    RowVector row(model.dim());
    for (int j = 0; j < model.dim(); ++j) row(j) = p(j, unit);
    return row;
}

Complex integrate_class(const gw::CohModel& model, const Matrix& phi, const Vector& v) {
    return integration_row(model) * (phi * v);
}

}  // namespace qstab::qde
