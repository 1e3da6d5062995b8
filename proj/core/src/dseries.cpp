#include "heckeops/dseries.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace heckeops {

SL2RElement SL2RElement::rotation(double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    return {c, s, -s, c};
}

SL2RElement SL2RElement::moving_i_to(cplx z) {
    if (z.imag() <= 0) throw std::invalid_argument("base point must lie in the upper half plane");
    const double r = std::sqrt(z.imag());
    return {r, z.real() / r, 0, 1 / r};
}

SL2RElement real_lift(const SignedMat& m) {
    const double s = std::sqrt(m.det().get_d());
    return {m.a.get_d() / s, m.b.get_d() / s, m.c.get_d() / s, m.d.get_d() / s};
}

SL2RElement real_lift(const Mat64& m) {
    const double s = std::sqrt(double(m.det()));
    return {double(m.a) / s, double(m.b) / s, double(m.c) / s, double(m.d) / s};
}

SU11Element cayley(const SL2RElement& g) {
    // Conjugation by C = (1, -i; 1, i), which sends i to 0.
    return {cplx(g.a + g.d, g.b - g.c) / 2.0, cplx(g.a - g.d, -(g.b + g.c)) / 2.0};
}

namespace {

cplx ipow(cplx z, int k) {
    cplx r = 1;
    bool neg = k < 0;
    unsigned e = static_cast<unsigned>(neg ? -k : k);
    while (e) {
        if (e & 1u) r *= z;
        z *= z;
        e >>= 1;
    }
    return neg ? 1.0 / r : r;
}

}  // namespace

cplx coef13_su11(const SU11Element& g, int weight) { return ipow(1.0 / std::conj(g.a), weight); }

cplx coef13_sl2(const SL2RElement& g, int weight) {
    const double tr = g.a + g.d, sk = g.b - g.c;
    const double den = tr * tr + sk * sk;
    return ipow(cplx(2 * tr / den, 2 * sk / den), weight);
}

double coef13_predicted_modulus(double frob2, int weight) { return std::pow((frob2 + 2) / 4, -0.5 * weight); }

double gram_psd_coef(const std::vector<SL2RElement>& gs, int weight) {
    const Eigen::Index n = static_cast<Eigen::Index>(gs.size());
    if (n == 0) throw std::invalid_argument("empty element list");
    Eigen::MatrixXcd K(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) K(i, j) = coef13_sl2(gs[i].inverse() * gs[j], weight);
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(K, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
}

ConjugatePairTerms conjugation_pair_terms(const SL2RElement& g1, const SL2RElement& g2, int weight) {
    const SL2RElement s{0, -1, 1, 0};
    const SL2RElement h1 = s * g1 * s.inverse(), h2 = s * g2 * s.inverse();
    return {coef13_sl2(g1, weight) * coef13_sl2(g2, weight), coef13_sl2(h1, weight) * coef13_sl2(h2, weight)};
}

}  // namespace heckeops
