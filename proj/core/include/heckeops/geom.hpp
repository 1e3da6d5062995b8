#pragma once

#include <cstdint>
#include <vector>

#include "heckeops/cosets.hpp"
#include "heckeops/dseries.hpp"

namespace heckeops {

struct BallEnumeration {
    double t = 0;
    std::vector<Mat64> elements;  // sign-canonical, sorted
};

// Gamma_t = {gamma in PSL2(Z) : ||gamma||_F <= t}.
BallEnumeration enumerate_gamma_ball(double t);

// Points of P^1(Z/p^e) in a fixed order: (x : 1) for x = 0..N-1, then (1 : y) for
// y = 0, p, 2p, ... These label the right cosets Gamma_0(p^e) gamma through the
// bottom row of gamma; Gamma_0(p^e) is Gamma_sigma for sigma = diag(1, p^e).
struct P1Point {
    std::int64_t u = 0, v = 1;
    bool operator==(const P1Point& o) const { return u == o.u && v == o.v; }
};
std::vector<P1Point> p1_points(long p, int e);
// Index of the coset containing a matrix with bottom row (c, d).
std::size_t p1_index(std::int64_t c, std::int64_t d, long p, int e);
// A matrix of Gamma whose bottom row represents coset `which`.
Mat64 coset_representative(long p, int e, std::size_t which);

std::vector<double> coset_fractions(double t, long p, int e);
double coset_fraction(double t, long p, int e, std::size_t which);

struct McEstimate {
    double value = 0;
    double stderr_ = 0;
    std::uint64_t samples = 0;
};

// Monte Carlo estimate of vol(B_t cap g1 B_t g2) / vol(B_t) under Haar measure.
McEstimate displacement_mc(const SL2RElement& g1, const SL2RElement& g2, double t, std::uint64_t n, std::uint64_t seed);

// Large-t limit of the same ratio:
// (1/4 pi^2) int int min(1, 1 / (|g1^-1 u(th1)|^2 |g2^-T u(th2)|^2)) dth1 dth2,
// with u(th) = (cos th, sin th). It depends on g1, g2 only through their norms.
double displacement_integral(const SL2RElement& g1, const SL2RElement& g2);

// Ratio MC / integral at a reference pair; the asymptotic formula needs no fitted
// constant, so this is reported as a diagnostic and expected near 1.
double displacement_calibration(const SL2RElement& g1, const SL2RElement& g2, double t, std::uint64_t n, std::uint64_t seed);

// value * |g1| |g2| / (ln |g1| + ln |g2|).
double displacement_order_statistic(const SL2RElement& g1, const SL2RElement& g2);

// Gram matrix [F(gamma_i^-1 gamma_j, h_j h_i^-1)] of the displacement kernel; it is a
// limit of Gram matrices of the vectors 1_{gamma_i B_t h_i}.
double displacement_gram_min_eigenvalue(const std::vector<SL2RElement>& gammas, const std::vector<SL2RElement>& hs);

// One term of the state Phi_0: chi(g1, g2) times the Haar measure of
// C cap {k in K : g1 k g2 in K}, where K = PSL2(Z_p) and C is coset `which` of the
// closure of Gamma_0(p^e) (e = 0 means all of K).
struct Phi0Term {
    ProjMat g1, g2;
    long p = 2;
    int e = 0;
    std::size_t which = 0;
    mpq_class weight = 1;
};

struct Phi0Result {
    double value = 0;
    std::vector<double> chi;
    std::vector<mpq_class> measure;
    std::vector<bool> same_double_coset;
};

// Exact Haar measure of C cap D by enumeration of SL2(Z/p^N).
mpq_class phi0_domain_measure(const ProjMat& g1, const ProjMat& g2, long p, int e, std::size_t which,
                              std::uint64_t enumeration_cap = 50'000'000ULL);
Phi0Result phi0_state(const std::vector<Phi0Term>& terms);

}  // namespace heckeops
