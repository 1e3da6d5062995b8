#pragma once

#include <complex>
#include <vector>

#include "heckeops/projmat.hpp"

namespace heckeops {

using cplx = std::complex<double>;

struct SL2RElement {
    double a = 1, b = 0, c = 0, d = 1;

    double det() const { return a * d - b * c; }
    double frob2() const { return a * a + b * b + c * c + d * d; }
    SL2RElement operator*(const SL2RElement& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    }
    SL2RElement inverse() const { return {d, -b, -c, a}; }
    SL2RElement operator-() const { return {-a, -b, -c, -d}; }
    static SL2RElement identity() { return {}; }
    static SL2RElement rotation(double theta);
    // Upper triangular element moving i to z (Im z > 0).
    static SL2RElement moving_i_to(cplx z);
};

// Matrix (a, b; conj b, conj a) with |a|^2 - |b|^2 = 1.
struct SU11Element {
    cplx a{1, 0}, b{0, 0};

    SU11Element operator*(const SU11Element& o) const {
        return {a * o.a + b * std::conj(o.b), a * o.b + b * std::conj(o.a)};
    }
};

// Unimodular real lift M / sqrt(det M); keeps the sign of the entries.
SL2RElement real_lift(const SignedMat& m);
SL2RElement real_lift(const Mat64& m);

SU11Element cayley(const SL2RElement& g);

// Weight-k lowest-weight coefficient (1 / conj a)^k, normalized so the identity maps to 1.
cplx coef13_su11(const SU11Element& g, int weight = 13);
// The same coefficient expressed in SL2(R) entries:
// (2 / ((a + d) - i (b - c)))^k = (2 ((a + d) + i (b - c)) / ((a + d)^2 + (b - c)^2))^k.
cplx coef13_sl2(const SL2RElement& g, int weight = 13);
// Modulus predicted from the Frobenius norm: ((|g|^2 + 2) / 4)^(-k/2).
double coef13_predicted_modulus(double frob2, int weight = 13);

double gram_psd_coef(const std::vector<SL2RElement>& gs, int weight = 13);

// The two summands attached to (g1, g2) and to the conjugated pair (s g1 s^-1, s g2 s^-1)
// with s = (0, -1; 1, 0), for the product weight coef(g1) * coef(g2).
struct ConjugatePairTerms {
    cplx direct;
    cplx conjugated;
    cplx sum() const { return direct + conjugated; }
};
ConjugatePairTerms conjugation_pair_terms(const SL2RElement& g1, const SL2RElement& g2, int weight = 13);

}  // namespace heckeops
