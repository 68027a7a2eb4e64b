#include "qstab/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>

namespace qstab::linalg {

namespace {

// eigenvalue groups by relative gap 1e-7
std::vector<std::vector<int>> group_eigenvalues(const Vector& ev, double scale) {
    const double tol = 1e-7 * std::max(1.0, scale);
    const int n = static_cast<int>(ev.size());
    std::vector<int> group(n, -1);
    std::vector<std::vector<int>> groups;
    for (int i = 0; i < n; ++i) {
        if (group[i] >= 0) continue;
        groups.push_back({i});
        group[i] = static_cast<int>(groups.size()) - 1;
        for (int j = i + 1; j < n; ++j)
            if (group[j] < 0 && std::abs(ev[i] - ev[j]) <= tol) {
                group[j] = group[i];
                groups.back().push_back(j);
            }
    }
    return groups;
}

}  // namespace

Spectrum eigen_decompose(const Matrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("eigen_decompose: square matrix required");
    if (m.rows() > 64) throw std::invalid_argument("eigen_decompose: n <= 64");
    if (!is_finite(m)) throw std::invalid_argument("eigen_decompose: non-finite entries");

    Eigen::ComplexEigenSolver<Matrix> solver(m, true);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("eigen_decompose: QR iteration did not converge");

    Spectrum s;
    s.eigenvalues = solver.eigenvalues();
    s.eigenvectors = solver.eigenvectors();

    const double scale = op_norm(m);
    const auto groups = group_eigenvalues(s.eigenvalues, scale);
    const int n = static_cast<int>(m.rows());

    s.distinct_eigenvalues = static_cast<int>(groups.size()) == n;
    s.is_semisimple = true;
    for (const auto& g : groups) {
        if (g.size() == 1) continue;
        Complex lambda = 0.0;
        for (int idx : g) lambda += s.eigenvalues[idx];
        lambda /= static_cast<double>(g.size());
        const Matrix shifted = m - lambda * Matrix::Identity(n, n);
        const int geometric = n - rank_svd(shifted, 1e-9);
        if (geometric < static_cast<int>(g.size())) s.is_semisimple = false;
    }

    s.distinct_real_parts = s.distinct_imag_parts = true;
    const double tol = 1e-9 * std::max(1.0, scale);
    for (std::size_t a = 0; a < groups.size(); ++a)
        for (std::size_t b = a + 1; b < groups.size(); ++b) {
            const Complex la = s.eigenvalues[groups[a][0]];
            const Complex lb = s.eigenvalues[groups[b][0]];
            if (std::abs(la.real() - lb.real()) <= tol) s.distinct_real_parts = false;
            if (std::abs(la.imag() - lb.imag()) <= tol) s.distinct_imag_parts = false;
        }

    Eigen::JacobiSVD<Matrix> svd(s.eigenvectors);
    const double smin = svd.singularValues()(svd.singularValues().size() - 1);
    s.eigenvector_condition = smin > 0.0 ? svd.singularValues()(0) / smin
                                         : std::numeric_limits<double>::infinity();
    return s;
}

Matrix mat_exp(const Matrix& m) {
    const int n = static_cast<int>(m.rows());
    const double nrm = m.cwiseAbs().maxCoeff() * n;
    int squarings = 0;
    if (nrm > 0.25) {
        squarings = static_cast<int>(std::ceil(std::log2(nrm / 0.25)));
        squarings = std::min(squarings, 64);
    }
    const Matrix x = m / std::pow(2.0, squarings);
    Matrix term = Matrix::Identity(n, n);
    Matrix sum = term;
    for (int k = 1; k <= 40; ++k) {
        term = (term * x) / static_cast<double>(k);
        if (term.isZero(0.0)) break;  // nilpotent: series terminates exactly
        sum += term;
        if (term.cwiseAbs().maxCoeff() < 1e-18 * sum.cwiseAbs().maxCoeff()) break;
    }
    for (int k = 0; k < squarings; ++k) sum = sum * sum;
    return sum;
}

Matrix mat_pow_t(const Matrix& m, double t) {
    if (!(t > 0.0)) throw std::domain_error("mat_pow_t: t > 0 required");
    const double lnt = std::log(t);
    const Matrix r = mat_exp(lnt * m);
    if (!is_finite(r)) {
        double max_re = 0.0;
        for (int i = 0; i < m.rows(); ++i) max_re = std::max(max_re, m(i, i).real());
        throw std::overflow_error("mat_pow_t: overflow, leading exponent ln(t)*" +
                                  std::to_string(max_re) + " = " + std::to_string(lnt * max_re));
    }
    return r;
}

double op_norm(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues()(0);
}

int rank_svd(const Matrix& m, double rel_floor) {
    if (m.size() == 0) return 0;
    Eigen::JacobiSVD<Matrix> svd(m);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0.0) return 0;
    int r = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > rel_floor * sv(0)) ++r;
    return r;
}

}  // namespace qstab::linalg
