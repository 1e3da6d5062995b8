#include "heckeops/geom.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "heckeops/errors.hpp"
#include "heckeops/parallel.hpp"

namespace heckeops {

namespace {

std::int64_t ipow(long p, int e) {
    std::int64_t r = 1;
    for (int i = 0; i < e; ++i) r *= p;
    return r;
}

std::int64_t mod(std::int64_t x, std::int64_t n) {
    std::int64_t r = x % n;
    return r < 0 ? r + n : r;
}

std::int64_t inverse_mod(std::int64_t x, std::int64_t n) {
    // Extended Euclid; x must be a unit mod n.
    std::int64_t a = mod(x, n), b = n, u = 1, v = 0;
    while (b) {
        std::int64_t q = a / b;
        a -= q * b; std::swap(a, b);
        u -= q * v; std::swap(u, v);
    }
    if (a != 1) throw std::invalid_argument("inverse_mod: not a unit");
    return mod(u, n);
}

}  // namespace

BallEnumeration enumerate_gamma_ball(double t) {
    if (t < std::sqrt(2.0) - 1e-12) throw EmptyBall("no element of PSL2(Z) has norm below sqrt(2)");
    return {t, det_ball(1, t)};
}

std::vector<P1Point> p1_points(long p, int e) {
    const std::int64_t N = ipow(p, e);
    std::vector<P1Point> out;
    for (std::int64_t x = 0; x < N; ++x) out.push_back({x, 1});
    for (std::int64_t y = 0; y < N; y += p) out.push_back({1, y});
    return out;
}

std::size_t p1_index(std::int64_t c, std::int64_t d, long p, int e) {
    const std::int64_t N = ipow(p, e);
    if (N == 1) return 0;
    c = mod(c, N);
    d = mod(d, N);
    if (d % p != 0) return static_cast<std::size_t>(mod(c * inverse_mod(d, N), N));
    if (c % p == 0) throw std::invalid_argument("p1_index: row is not primitive mod p");
    const std::int64_t y = mod(d * inverse_mod(c, N), N);
    return static_cast<std::size_t>(N + y / p);
}

Mat64 coset_representative(long p, int e, std::size_t which) {
    const auto pts = p1_points(p, e);
    if (which >= pts.size()) throw std::out_of_range("coset index");
    const P1Point q = pts[which];
    // Bottom row (u, v) completed to determinant one.
    if (q.v == 1) return {1, 0, q.u, 1};
    return {0, -1, 1, q.v};
}

std::vector<double> coset_fractions(double t, long p, int e) {
    const auto ball = enumerate_gamma_ball(t);
    std::vector<double> counts(p1_points(p, e).size(), 0.0);
    for (const Mat64& g : ball.elements) counts[p1_index(g.c, g.d, p, e)] += 1;
    for (double& c : counts) c /= double(ball.elements.size());
    return counts;
}

double coset_fraction(double t, long p, int e, std::size_t which) {
    const auto f = coset_fractions(t, p, e);
    if (which >= f.size()) throw std::out_of_range("coset index");
    return f[which];
}

McEstimate displacement_mc(const SL2RElement& g1, const SL2RElement& g2, double t, std::uint64_t n, std::uint64_t seed) {
    if (t * t <= 2) throw EmptyBall("ball radius must exceed sqrt(2)");
    const SL2RElement h1 = g1.inverse(), h2 = g2.inverse();
    const std::size_t shards = 64;
    std::vector<std::uint64_t> hits(shards, 0);
    parallel_shards(n, shards, [&](std::size_t s, std::size_t b, std::size_t e) {
        std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + s);
        std::uniform_real_distribution<double> angle(0, 2 * std::numbers::pi), w(2, t * t);
        std::uint64_t local = 0;
        for (std::size_t i = b; i < e; ++i) {
            // Haar measure in Cartan coordinates is sinh(2 alpha) d alpha d th1 d th2,
            // so |x|^2 = 2 cosh(2 alpha) is uniform on [2, t^2].
            const double alpha = 0.5 * std::acosh(w(rng) / 2);
            const double th1 = angle(rng), th2 = angle(rng);
            const SL2RElement x = SL2RElement::rotation(th1) * SL2RElement{std::exp(alpha), 0, 0, std::exp(-alpha)} * SL2RElement::rotation(th2);
            if ((h1 * x * h2).frob2() <= t * t) ++local;
        }
        hits[s] = local;
    });
    const std::uint64_t total = std::accumulate(hits.begin(), hits.end(), std::uint64_t{0});
    const double v = double(total) / double(n);
    return {v, std::sqrt(std::max(v * (1 - v), 0.0) / double(n)), n};
}

namespace {

struct Singular {
    double lo2, hi2;  // squared singular values, lo2 * hi2 = 1
};

Singular singular_values(const SL2RElement& g) {
    const double f = g.frob2();
    const double s = 0.5 * (std::sqrt(f + 2) + std::sqrt(std::max(f - 2, 0.0)));
    return {1 / (s * s), s * s};
}

// (2/pi) int_0^{pi/2} min(1, c / (a2 cos^2 + b2 sin^2)) d theta with a2 * b2 = 1.
double inner_average(double c, const Singular& sv) {
    const double a2 = sv.lo2, b2 = sv.hi2;
    if (b2 - a2 < 1e-14) return std::min(1.0, c);
    if (c <= a2) return c;
    if (c >= b2) return 1;
    const double ts = std::asin(std::sqrt((c - a2) / (b2 - a2)));
    const double ratio = std::sqrt(b2 / a2);
    return (2 / std::numbers::pi) * (ts + c * (std::numbers::pi / 2 - std::atan(ratio * std::tan(ts))));
}

}  // namespace

double displacement_integral(const SL2RElement& g1, const SL2RElement& g2) {
    const Singular s1 = singular_values(g1), s2 = singular_values(g2);
    // Both in SO(2): the two balls coincide.
    if (s1.hi2 - s1.lo2 <= 1e-14 && s2.hi2 - s2.lo2 <= 1e-14) return 1.0;
    auto f2 = [&](double th) { const double c = std::cos(th), s = std::sin(th); return s2.lo2 * c * c + s2.hi2 * s * s; };
    auto integrand = [&](double th) { return inner_average(1 / f2(th), s1); };
    // Break points where the inner formula switches branch, plus where f2 = 1.
    std::vector<double> cuts{0, std::numbers::pi / 2};
    if (s2.hi2 - s2.lo2 > 1e-14) {
        for (double v : {s1.lo2, s1.hi2, 1.0}) {
            const double r = (v - s2.lo2) / (s2.hi2 - s2.lo2);
            if (r > 0 && r < 1) cuts.push_back(std::asin(std::sqrt(r)));
        }
    }
    std::sort(cuts.begin(), cuts.end());
    double total = 0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (cuts[i + 1] - cuts[i] < 1e-15) continue;
        double err = 0;
        const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, cuts[i], cuts[i + 1], 20, 1e-12, &err);
        if (!std::isfinite(v) || err > 1e-8) throw QuadratureFailure("displacement integral error estimate " + std::to_string(err));
        total += v;
    }
    return std::clamp(total * 2 / std::numbers::pi, 0.0, 1.0);
}

double displacement_calibration(const SL2RElement& g1, const SL2RElement& g2, double t, std::uint64_t n, std::uint64_t seed) {
    return displacement_mc(g1, g2, t, n, seed).value / displacement_integral(g1, g2);
}

double displacement_order_statistic(const SL2RElement& g1, const SL2RElement& g2) {
    const double n1 = std::sqrt(g1.frob2()), n2 = std::sqrt(g2.frob2());
    return displacement_integral(g1, g2) * n1 * n2 / (std::log(n1) + std::log(n2));
}

double displacement_gram_min_eigenvalue(const std::vector<SL2RElement>& gammas, const std::vector<SL2RElement>& hs) {
    if (gammas.size() != hs.size() || gammas.empty()) throw std::invalid_argument("need equally many gammas and hs");
    const Eigen::Index n = static_cast<Eigen::Index>(gammas.size());
    Eigen::MatrixXd K(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            K(i, j) = displacement_integral(gammas[i].inverse() * gammas[j], hs[j] * hs[i].inverse());
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(K, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
}

mpq_class phi0_domain_measure(const ProjMat& g1, const ProjMat& g2, long p, int e, std::size_t which, std::uint64_t cap) {
    int e1 = 0, e2 = 0;
    if (!is_power_of(g1.det(), p, &e1) || !is_power_of(g2.det(), p, &e2)) throw NotInG("phi0 terms need p-power determinants");
    if ((e1 + e2) % 2 != 0) return 0;
    // g1 k g2 lies in K exactly when the content of M1 k M2 has valuation (e1+e2)/2,
    // which depends only on k modulo p^h.
    const int h = (e1 + e2) / 2;
    const int level = std::max(h, e);
    const std::int64_t N = ipow(p, level), P = ipow(p, h), Q = ipow(p, e);
    const double size4 = std::pow(double(N), 4);
    if (size4 > double(cap)) throw RaiseLevel("enumeration of SL2(Z/" + std::to_string(N) + ") exceeds the cap");
    const Mat64 M1 = to_mat64(g1), M2 = to_mat64(g2);
    const std::size_t ncos = p1_points(p, e).size();
    if (which >= ncos) throw std::out_of_range("coset index");
    std::uint64_t total = 0, good = 0;
    for (std::int64_t a = 0; a < N; ++a)
        for (std::int64_t b = 0; b < N; ++b)
            for (std::int64_t c = 0; c < N; ++c)
                for (std::int64_t d = 0; d < N; ++d) {
                    if (mod(a * d - b * c - 1, N) != 0) continue;
                    ++total;
                    if (e > 0 && p1_index(mod(c, Q), mod(d, Q), p, e) != which) continue;
                    const Mat64 x = mul64(mul64(M1, Mat64{a, b, c, d}), M2);
                    if (x.a % P == 0 && x.b % P == 0 && x.c % P == 0 && x.d % P == 0) ++good;
                }
    mpq_class r(mpz_class(static_cast<unsigned long>(good)), mpz_class(static_cast<unsigned long>(total)));
    r.canonicalize();
    return r;
}

Phi0Result phi0_state(const std::vector<Phi0Term>& terms) {
    Phi0Result r;
    for (const auto& t : terms) {
        const bool same = t.g1.det() == t.g2.det();
        const mpq_class mu = phi0_domain_measure(t.g1, t.g2, t.p, t.e, t.which);
        const double chi = mu == 0 ? 0.0 : displacement_integral(real_lift(to_signed(t.g1)), real_lift(to_signed(t.g2)));
        r.chi.push_back(chi);
        r.measure.push_back(mu);
        r.same_double_coset.push_back(same);
        r.value += t.weight.get_d() * chi * mu.get_d();
    }
    return r;
}

}  // namespace heckeops
