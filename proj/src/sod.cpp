#include "qstab/sod.hpp"

#include "qstab/linalg.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>

namespace qstab::sod {

namespace {

// continuous log-lift with nearest-branch unwrapping; the caller guarantees a
// grid fine enough that consecutive phase steps stay below pi/2
std::vector<Complex> log_lift(const std::vector<Complex>& z, const std::string& label) {
    std::vector<Complex> out(z.size());
    if (z.empty()) return out;
    if (z[0] == Complex(0.0, 0.0) || !is_finite(z[0]))
        throw std::runtime_error("fit_asymptotics: " + label + " vanishes at the first sample");
    out[0] = std::log(z[0]);
    for (std::size_t i = 1; i < z.size(); ++i) {
        if (z[i] == Complex(0.0, 0.0) || !is_finite(z[i]))
            throw std::runtime_error("fit_asymptotics: " + label +
                                     " is not eventually nonzero (zero crossing on the grid)");
        const Complex step = std::log(z[i] / z[i - 1]);
        if (std::abs(step.imag()) > 0.5 * 3.14159265358979323846)
            throw std::runtime_error("fit_asymptotics: " + label +
                                     " phase step exceeds pi/2; grid too coarse for the lift");
        out[i] = out[i - 1] + step;
    }
    return out;
}

struct WindowFit {
    Complex alpha, gamma, beta, sqrt_coeff;
    double residual_sup;
};

WindowFit fit_window(const std::vector<double>& t, const std::vector<Complex>& y,
                     std::size_t begin, bool with_sqrt) {
    const std::size_t rows = t.size() - begin;
    const int cols = with_sqrt ? 4 : 3;
    Eigen::MatrixXd a(rows, cols);
    Eigen::VectorXd re(rows), im(rows);
    for (std::size_t i = 0; i < rows; ++i) {
        const double ti = t[begin + i];
        int c = 0;
        a(i, c++) = ti;
        if (with_sqrt) a(i, c++) = std::sqrt(ti);
        a(i, c++) = std::log(ti);
        a(i, c++) = 1.0;
        re(i) = y[begin + i].real();
        im(i) = y[begin + i].imag();
    }
    const auto qr = a.colPivHouseholderQr();
    const Eigen::VectorXd cr = qr.solve(re);
    const Eigen::VectorXd ci = qr.solve(im);

    WindowFit w;
    int c = 0;
    w.alpha = Complex(cr(c), ci(c));
    ++c;
    if (with_sqrt) {
        w.sqrt_coeff = Complex(cr(c), ci(c));
        ++c;
    }
    w.gamma = Complex(cr(c), ci(c));
    ++c;
    w.beta = Complex(cr(c), ci(c));

    w.residual_sup = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
        const double ti = t[begin + i];
        Complex model = w.alpha * ti + w.gamma * std::log(ti) + w.beta;
        if (with_sqrt) model += w.sqrt_coeff * std::sqrt(ti);
        w.residual_sup = std::max(w.residual_sup, std::abs(y[begin + i] - model));
    }
    return w;
}

bool near_integer_matrix(const Matrix& m) {
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) {
            const Complex v = m(i, j);
            if (std::abs(v.real() - std::round(v.real())) > 1e-9 ||
                std::abs(v.imag() - std::round(v.imag())) > 1e-9)
                return false;
        }
    return true;
}

// exact rank of a Gaussian-integer matrix by fraction-free elimination
int rank_gaussian_integer(const Matrix& m) {
    const int rows = static_cast<int>(m.rows()), cols = static_cast<int>(m.cols());
    std::vector<std::complex<long double>> w(rows * cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            w[i * cols + j] = {std::round(m(i, j).real()), std::round(m(i, j).imag())};
    int rank = 0;
    for (int col = 0; col < cols && rank < rows; ++col) {
        int pivot = -1;
        for (int i = rank; i < rows; ++i)
            if (std::abs(w[i * cols + col]) > 0.5) { pivot = i; break; }
        if (pivot < 0) continue;
        for (int j = 0; j < cols; ++j) std::swap(w[rank * cols + j], w[pivot * cols + j]);
        for (int i = rank + 1; i < rows; ++i) {
            const auto f = w[i * cols + col];
            const auto p = w[rank * cols + col];
            for (int j = 0; j < cols; ++j)
                w[i * cols + j] = w[i * cols + j] * p - f * w[rank * cols + j];
        }
        ++rank;
    }
    return rank;
}

}  // namespace

AsymptoticFit fit_asymptotics(const ChargeSeries& series, const FitOptions& opt) {
    const std::size_t n = series.t.size();
    if (n != series.Z.size() || n < 20)
        throw std::invalid_argument("fit_asymptotics: need >= 20 samples");
    if (!(series.t.back() / series.t.front() >= 10.0))
        throw std::invalid_argument("fit_asymptotics: grid must span at least a decade");

    const std::size_t half = n / 2;
    std::vector<double> t_tail(series.t.begin() + half, series.t.end());
    std::vector<Complex> z_tail(series.Z.begin() + half, series.Z.end());
    const std::vector<Complex> y = log_lift(z_tail, series.label);

    const WindowFit main = fit_window(t_tail, y, 0, opt.include_sqrt_term);
    const WindowFit late = fit_window(t_tail, y, t_tail.size() / 2, opt.include_sqrt_term);

    AsymptoticFit fit;
    fit.label = series.label;
    fit.class_v = series.class_v;
    fit.alpha = main.alpha;
    fit.gamma = main.gamma;
    fit.beta = main.beta;
    fit.sqrt_coeff = main.sqrt_coeff;
    fit.residual_sup = main.residual_sup;
    fit.residual_late = late.residual_sup;
    fit.eventually_semistable = series.eventually_semistable;
    fit.quasi_convergent = late.residual_sup <= main.residual_sup * 1.05 + 1e-12;
    fit.accepted = fit.quasi_convergent && main.residual_sup < opt.fit_tol;
    return fit;
}

SODResult cluster_and_order(const std::vector<AsymptoticFit>& fits, double tol) {
    for (const auto& f : fits)
        if (!f.accepted)
            throw std::invalid_argument("cluster_and_order: fit for " + f.label +
                                        " was not accepted");

    struct Group {
        Complex alpha_sum{0.0, 0.0};
        Complex gamma_sum{0.0, 0.0};
        std::vector<const AsymptoticFit*> members;
        Complex mean() const { return alpha_sum / static_cast<double>(members.size()); }
    };
    std::vector<Group> groups;
    for (const auto& f : fits) {
        Group* home = nullptr;
        for (auto& g : groups) {
            const Complex d = f.alpha - g.mean();
            if (std::abs(d.real()) <= tol && std::abs(d.imag()) <= tol) {
                home = &g;
                break;
            }
        }
        if (!home) {
            groups.push_back({});
            home = &groups.back();
        }
        home->alpha_sum += f.alpha;
        home->gamma_sum += f.gamma;
        home->members.push_back(&f);
    }

    for (std::size_t i = 0; i < groups.size(); ++i)
        for (std::size_t j = i + 1; j < groups.size(); ++j) {
            const Complex d = groups[i].mean() - groups[j].mean();
            if (std::abs(d.imag()) <= tol && std::abs(d.real()) > tol)
                throw GenericityViolation(
                    "cluster_and_order: genericity violation, alpha pair (" +
                        std::to_string(groups[i].mean().real()) + "+" +
                        std::to_string(groups[i].mean().imag()) + "i, " +
                        std::to_string(groups[j].mean().real()) + "+" +
                        std::to_string(groups[j].mean().imag()) +
                        "i) has equal imaginary parts but distinct real parts",
                    groups[i].mean(), groups[j].mean());
        }

    std::sort(groups.begin(), groups.end(),
              [](const Group& a, const Group& b) { return a.mean().imag() < b.mean().imag(); });

    SODResult result;
    result.genericity_ok = true;
    for (const auto& g : groups) {
        Cluster c;
        c.alpha = g.mean();
        c.gamma = g.gamma_sum / static_cast<double>(g.members.size());
        for (const auto* f : g.members) c.members.push_back({f->label, f->class_v, f->beta, 0.0});
        result.clusters.push_back(std::move(c));
    }
    return result;
}

void build_sod(SODResult& skeleton, const std::vector<ChargeSeries>& series) {
    auto find_series = [&series](const std::string& label) -> const ChargeSeries& {
        for (const auto& s : series)
            if (s.label == label) return s;
        throw std::invalid_argument("build_sod: no charge series for " + label);
    };

    int total_classes = 0, dim = 0;
    for (auto& cluster : skeleton.clusters) {
        for (auto& member : cluster.members) {
            const ChargeSeries& s = find_series(member.label);
            const std::size_t n = s.t.size();
            if (n < 8) throw std::invalid_argument("build_sod: series too short");
            dim = static_cast<int>(member.class_v.size());
            ++total_classes;

            // Richardson in 1/t over spread tail points; adjacent points of a
            // dense geometric grid would make the 1/t basis nearly singular
            const std::size_t i1 = std::min(n - 2, static_cast<std::size_t>(n * 0.93));
            const std::size_t i2 = std::min(i1 - 1, static_cast<std::size_t>(n * 0.86));
            const std::size_t idx[3] = {n - 1, i1, i2};
            Eigen::Matrix3cd m;
            Eigen::Vector3cd rhs;
            for (int i = 0; i < 3; ++i) {
                const double ti = s.t[idx[i]];
                const Complex yi = std::exp(-cluster.alpha * ti) *
                                   std::exp(-cluster.gamma * std::log(ti)) * s.Z[idx[i]];
                m(i, 0) = 1.0;
                m(i, 1) = 1.0 / ti;
                m(i, 2) = 1.0 / (ti * ti);
                rhs(i) = yi;
            }
            const Eigen::Vector3cd c = m.fullPivLu().solve(rhs);
            member.limit_Z = c(0);
            if (!is_finite(member.limit_Z) || std::abs(member.limit_Z) < 1e-12)
                throw std::runtime_error("build_sod: limit charge of " + member.label +
                                         " is zero or non-finite");
        }
    }

    // direct-sum check: all member classes across clusters stay independent
    Matrix all(dim, total_classes);
    int col = 0;
    for (const auto& cluster : skeleton.clusters)
        for (const auto& member : cluster.members) all.col(col++) = member.class_v;
    const int rank = near_integer_matrix(all) ? rank_gaussian_integer(all)
                                              : linalg::rank_svd(all, 1e-8);
    skeleton.lattice_direct_sum = rank == total_classes;
    if (!skeleton.lattice_direct_sum)
        throw std::runtime_error("build_sod: member classes are dependent, not a direct sum");
}

SpanningEntry spanning_check(const qde::FundamentalSolution& phi, const RowVector& charge_row,
                             const std::vector<AsymptoticFit>& fits, double r, double rate_tol,
                             double ratio_floor) {
    const std::size_t n = phi.samples.size();
    if (n < 20) throw std::invalid_argument("spanning_check: need >= 20 samples");
    const int dim = static_cast<int>(phi.samples[0].phi.rows());

    // growth of the singular values over the tail: ln sigma_i(t) ~ rho_i t
    std::vector<std::vector<double>> lnsv(dim);
    std::vector<double> t_tail;
    for (std::size_t i = n / 2; i < n; ++i) {
        Eigen::JacobiSVD<Matrix> svd(phi.samples[i].phi);
        t_tail.push_back(phi.samples[i].t);
        for (int k = 0; k < dim; ++k)
            lnsv[k].push_back(std::log(svd.singularValues()(k)) + phi.samples[i].log_gauge);
    }
    SpanningEntry entry;
    entry.r = r;
    entry.dim_f = 0;
    for (int k = 0; k < dim; ++k) {
        // least squares slope against {t, ln t, 1}
        Eigen::MatrixXd a(t_tail.size(), 3);
        Eigen::VectorXd y(t_tail.size());
        for (std::size_t i = 0; i < t_tail.size(); ++i) {
            a(i, 0) = t_tail[i];
            a(i, 1) = std::log(t_tail[i]);
            a(i, 2) = 1.0;
            y(i) = lnsv[k][i];
        }
        const double slope = a.colPivHouseholderQr().solve(y)(0);
        if (slope <= r + rate_tol) ++entry.dim_f;
    }

    // span of classes of eventually semistable objects at this level whose
    // charge does not degenerate against ||Phi_t v||
    std::vector<Vector> classes;
    for (const auto& f : fits) {
        if (!f.accepted || !f.eventually_semistable) continue;
        if (f.alpha.real() > r + rate_tol) continue;
        double min_ratio = std::numeric_limits<double>::infinity();
        for (std::size_t i = n / 2; i < n; ++i) {
            const Vector w = phi.samples[i].phi * f.class_v;
            const double denom = w.norm();
            if (denom == 0.0) { min_ratio = 0.0; break; }
            const Complex z = charge_row * w;
            min_ratio = std::min(min_ratio, std::abs(z) / denom);
        }
        if (min_ratio > ratio_floor) classes.push_back(f.class_v);
    }
    if (classes.empty()) {
        entry.dim_span = 0;
    } else {
        Matrix m(dim, static_cast<int>(classes.size()));
        for (std::size_t j = 0; j < classes.size(); ++j) m.col(static_cast<int>(j)) = classes[j];
        entry.dim_span = linalg::rank_svd(m, 1e-8);
    }
    entry.holds = entry.dim_span == entry.dim_f;
    return entry;
}

}  // namespace qstab::sod
