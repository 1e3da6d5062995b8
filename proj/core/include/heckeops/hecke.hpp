#pragma once

#include <map>
#include <string>

#include "heckeops/cosets.hpp"

namespace heckeops {

// Finitely supported element of the Hecke algebra: label -> coefficient.
struct HeckeElement {
    std::map<DoubleCosetLabel, mpq_class> coeffs;

    static HeckeElement delta_e();
    static HeckeElement basis(const DoubleCosetLabel& n);
    static HeckeElement chi(int n, long p);  // [Gamma diag(1, p^n) Gamma]

    void add(const DoubleCosetLabel& n, const mpq_class& c);
    bool operator==(const HeckeElement& o) const { return coeffs == o.coeffs; }
    HeckeElement operator+(const HeckeElement& o) const;
    HeckeElement operator*(const mpq_class& s) const;
    std::string str() const;
};

// Vector in the span of left cosets Gamma h, keyed by the HNF representative.
struct CosetVector {
    std::map<ProjMat, mpq_class> coeffs;

    static CosetVector basis(const ProjMat& h);
    void add(const ProjMat& h, const mpq_class& c);
    bool operator==(const CosetVector& o) const { return coeffs == o.coeffs; }
};

// Parses "chi:3", "label:12", "delta" and sums such as "2*chi:1 - chi:2".
HeckeElement parse_hecke(const std::string& text, long p);

// Counts {Gamma theta2 in Gamma sigma2 Gamma : z theta2^-1 in Gamma sigma1 Gamma} for each
// candidate z = diag(1, L).
HeckeElement hecke_mul(const HeckeElement& x, const HeckeElement& y);
// Cross-check by a different route: counts all coset pairs (Gamma a, Gamma b) by the label
// of a b and divides by ind(label); throws InternalInvariantViolation if that division is
// not exact. Quadratic in the number of cosets.
HeckeElement hecke_mul_pairs(const HeckeElement& x, const HeckeElement& y);
HeckeElement adjoint(const HeckeElement& x);
mpq_class ind_hom(const HeckeElement& x);
mpq_class state_phi(const HeckeElement& x);
CosetVector act_left_regular(const HeckeElement& x, const CosetVector& v);

}  // namespace heckeops
