#include "heckeops/radial.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "heckeops/errors.hpp"

namespace heckeops {

double RadialPolynomial::eval(double lambda) const {
    double r = 0;
    for (std::size_t k = coeffs.size(); k-- > 0;) r = r * lambda + coeffs[k].get_d();
    return r;
}

RadialPolynomial t_poly(int n, long p) {
    if (n < 0) throw std::invalid_argument("t_poly: negative degree");
    std::vector<mpz_class> prev{1}, cur{0, 1};
    if (n == 0) return {0, p, prev};
    for (int k = 1; k < n; ++k) {
        // t_{k+1} = lambda t_k - c t_{k-1}, c = p+1 at k = 1 and p afterwards.
        const long c = (k == 1) ? p + 1 : p;
        std::vector<mpz_class> next(cur.size() + 1, 0);
        for (std::size_t i = 0; i < cur.size(); ++i) next[i + 1] += cur[i];
        for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= c * prev[i];
        prev = std::move(cur);
        cur = std::move(next);
    }
    return {n, p, cur};
}

std::vector<double> t_poly_values(int n_max, double lambda, long p) {
    std::vector<double> t(std::max(n_max + 1, 2));
    t[0] = 1;
    t[1] = lambda;
    for (int k = 1; k < n_max; ++k) t[k + 1] = lambda * t[k] - double(k == 1 ? p + 1 : p) * t[k - 1];
    t.resize(n_max + 1);
    return t;
}

double t_poly_eval(int n, double lambda, long p) {
    if (n < 0) throw std::invalid_argument("t_poly_eval: negative degree");
    return t_poly_values(n, lambda, p)[n];
}

namespace {

int radial_exponent(const DoubleCosetLabel& n, long p) {
    int e = 0;
    if (!is_power_of(n, p, &e)) throw NotRadial("label " + n.get_str() + " is not a power of " + std::to_string(p));
    return e;
}

}  // namespace

double char_phi_lambda(const HeckeElement& x, double lambda, long p) {
    int top = 0;
    for (auto& [n, c] : x.coeffs) top = std::max(top, radial_exponent(n, p));
    const auto t = t_poly_values(top, lambda, p);
    double s = 0;
    for (auto& [n, c] : x.coeffs) s += c.get_d() * t[radial_exponent(n, p)];
    return s;
}

std::vector<mpq_class> char_phi_polynomial(const HeckeElement& x, long p) {
    std::vector<mpq_class> out;
    for (auto& [n, c] : x.coeffs) {
        auto t = t_poly(radial_exponent(n, p), p);
        if (out.size() < t.coeffs.size()) out.resize(t.coeffs.size(), 0);
        for (std::size_t k = 0; k < t.coeffs.size(); ++k) out[k] += c * mpq_class(t.coeffs[k]);
    }
    while (!out.empty() && out.back() == 0) out.pop_back();
    return out;
}

mpz_class tree_moment(int m, long p) {
    if (m < 0) throw std::invalid_argument("tree_moment: negative order");
    // ways[r]: walks currently at distance r from the root.
    std::vector<mpz_class> ways(m + 2, 0);
    ways[0] = 1;
    for (int step = 0; step < m; ++step) {
        std::vector<mpz_class> next(m + 2, 0);
        next[1] += ways[0] * (p + 1);
        for (int r = 1; r <= m; ++r) {
            if (ways[r] == 0) continue;
            next[r - 1] += ways[r];
            next[r + 1] += ways[r] * p;
        }
        ways = std::move(next);
    }
    return ways[0];
}

double km_density(double lambda, long p) {
    const double q = double(p), edge = 4 * q - lambda * lambda;
    if (edge <= 0) return 0;
    return (q + 1) * std::sqrt(edge) / (2 * std::numbers::pi * ((q + 1) * (q + 1) - lambda * lambda));
}

double km_moment(int m, long p, double tol) {
    if (m < 0) throw std::invalid_argument("km_moment: negative order");
    const double q = double(p), r = 2 * std::sqrt(q);
    // lambda = 2 sqrt(p) cos(theta) removes the square-root edges, leaving a smooth
    // periodic integrand on [0, pi].
    auto f = [&](double th) {
        const double c = std::cos(th), s = std::sin(th);
        const double lam = r * c;
        return std::pow(lam, m) * (q + 1) * 4 * q * s * s / (2 * std::numbers::pi * ((q + 1) * (q + 1) - lam * lam));
    };
    double err = 0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, std::numbers::pi, 15, tol, &err);
    const double scale = std::max(1.0, std::abs(v));
    if (!std::isfinite(v) || err > 1e3 * tol * scale) throw QuadratureFailure("moment " + std::to_string(m) + " error estimate " + std::to_string(err));
    return v;
}

double spectral_radius_estimate(long p, int m) {
    if (m < 1) throw std::invalid_argument("spectral_radius_estimate: m must be >= 1");
    return std::sqrt(mpq_class(tree_moment(2 * m + 2, p), tree_moment(2 * m, p)).get_d());
}

const char* to_string(Temperedness t) { return t == Temperedness::tempered ? "tempered" : "untempered"; }

Temperedness multiplier_growth_test(double lambda, long p, int n_max, double tol) {
    if (std::abs(lambda) > double(p + 1)) throw OutsidePositivityWindow("|lambda| > p+1");
    if (n_max < 1) throw std::invalid_argument("n_max must be positive");
    const auto t = t_poly_values(n_max, lambda, p);
    // On the window, t_n = p^{n/2} (U_n(x) - U_{n-2}(x) / p) with x = lambda / (2 sqrt p),
    // so |t_n| <= (1 + 1/p)(n + 1) p^{n/2}. Outside it t_n grows exponentially faster.
    const double sq = std::sqrt(double(p));
    double worst = 0;
    for (int n = 0; n <= n_max; ++n) worst = std::max(worst, std::abs(t[n]) / ((n + 1) * std::pow(sq, n)));
    return worst <= (1 + 1.0 / double(p)) * (1 + tol) ? Temperedness::tempered : Temperedness::untempered;
}

double gram_psd_phi_lambda(double lambda, long p, const std::vector<int>& indices) {
    if (indices.empty()) throw std::invalid_argument("empty index set");
    int top = 0, lo = indices.front();
    for (int i : indices) top = std::max(top, i), lo = std::min(lo, i);
    const auto t = t_poly_values(top - lo, lambda, p);
    auto omega = [&](int n) { return n == 0 ? 1.0 : t[n] / ((p + 1) * std::pow(double(p), n - 1)); };
    const Eigen::Index k = static_cast<Eigen::Index>(indices.size());
    Eigen::MatrixXd M(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = 0; j < k; ++j) M(i, j) = omega(std::abs(indices[i] - indices[j]));
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(M, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
}

double gram_product_phi_lambda(double lambda, long p, const std::vector<int>& indices) {
    if (indices.empty()) throw std::invalid_argument("empty index set");
    const Eigen::Index k = static_cast<Eigen::Index>(indices.size());
    Eigen::MatrixXd M(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = 0; j < k; ++j)
            M(i, j) = char_phi_lambda(hecke_mul(HeckeElement::chi(indices[i], p), HeckeElement::chi(indices[j], p)), lambda, p);
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(M, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
}

}  // namespace heckeops
