#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "heckeops/errors.hpp"
#include "heckeops/geom.hpp"
#include "oracles.hpp"

using namespace heckeops;

namespace {

long ipow(long p, int k) {
    long r = 1;
    while (k--) r *= p;
    return r;
}

// gamma lies in the coset Gamma_0(p^e) r exactly when sigma^-1 (gamma r^-1) sigma is
// integral for sigma = diag(1, p^e), i.e. the lower left entry of gamma r^-1 is 0 mod p^e.
bool in_coset(const oracle::Quad& g, const Mat64& r, long p, int e) {
    const oracle::Quad rinv{r.d, -r.b, -r.c, r.a};
    const oracle::Quad x = oracle::mul(g, rinv);
    return x[2] % ipow(p, e) == 0;
}

SL2RElement diag(double r) { return {r, 0, 0, 1 / r}; }

}  // namespace

TEST_CASE("Gamma ball enumeration matches brute force") {
    CHECK_THROWS_AS(enumerate_gamma_ball(1.0), EmptyBall);
    // Both the identity and S = (0, -1; 1, 0) have norm sqrt(2).
    CHECK(enumerate_gamma_ball(std::sqrt(2.0)).elements == std::vector<Mat64>{Mat64{0, 1, -1, 0}, Mat64{1, 0, 0, 1}});
    for (double t : {2.0, 3.5, 7.0, 12.0}) {
        const auto got = enumerate_gamma_ball(t).elements;
        const auto ref = oracle::brute_det_ball(1, long(std::floor(t * t + 1e-9)));
        REQUIRE(got.size() == ref.size());
        std::size_t i = 0;
        for (const auto& q : ref) {
            CHECK(got[i] == Mat64{q[0], q[1], q[2], q[3]});
            ++i;
        }
    }
    const double c20 = double(enumerate_gamma_ball(20).elements.size());
    const double c40 = double(enumerate_gamma_ball(40).elements.size());
    CHECK(c40 / c20 >= 3.0);
    CHECK(c40 / c20 <= 5.0);
}

TEST_CASE("projective line cosets") {
    for (long p : {2L, 3L, 5L})
        for (int e = 1; e <= 3; ++e) {
            const auto pts = p1_points(p, e);
            CHECK(long(pts.size()) == ipow(p, e - 1) * (p + 1));
            for (std::size_t w = 0; w < pts.size(); ++w) {
                const Mat64 r = coset_representative(p, e, w);
                CHECK(r.det() == 1);
                CHECK(p1_index(r.c, r.d, p, e) == w);
            }
        }
    std::mt19937_64 rng(12);
    for (int i = 0; i < 300; ++i) {
        const auto g = oracle::random_gamma(rng, 4);
        for (long p : {2L, 3L})
            for (int e = 1; e <= 2; ++e) {
                const std::size_t w = p1_index(g[2], g[3], p, e);
                const std::size_t n = p1_points(p, e).size();
                for (std::size_t k = 0; k < n; ++k) CHECK(in_coset(g, coset_representative(p, e, k), p, e) == (k == w));
            }
    }
}

TEST_CASE("coset fractions") {
    CHECK(coset_fraction(10, 2, 0, 0) == 1.0);
    const auto fr = coset_fractions(20, 2, 1);
    REQUIRE(fr.size() == 3);
    CHECK(fr[0] + fr[1] + fr[2] == doctest::Approx(1.0).epsilon(1e-14));
    // Direct count over the brute-force ball.
    const auto ball = oracle::brute_det_ball(1, 100);
    std::vector<double> cnt(4, 0.0);
    for (const auto& q : ball)
        for (std::size_t k = 0; k < 4; ++k)
            if (in_coset(q, coset_representative(3, 1, k), 3, 1)) cnt[k] += 1;
    const auto fr3 = coset_fractions(10, 3, 1);
    for (std::size_t k = 0; k < 4; ++k) CHECK(fr3[k] == doctest::Approx(cnt[k] / double(ball.size())).epsilon(1e-14));
}

TEST_CASE("displacement integral") {
    const auto e = SL2RElement::identity();
    CHECK(displacement_integral(e, e) == 1.0);
    double prev = 1.0;
    for (double r : {1.5, 2.0, 4.0, 8.0, 16.0}) {
        const double v = displacement_integral(diag(r), e);
        CHECK(v >= 0.0);
        CHECK(v <= prev + 1e-12);
        prev = v;
    }
    // Depends only on the norms.
    const auto g = diag(3.0) * SL2RElement{1, 0.7, 0, 1};
    const double base = displacement_integral(g, diag(2.0));
    CHECK(displacement_integral(SL2RElement::rotation(0.4) * g * SL2RElement::rotation(1.1), diag(2.0)) ==
          doctest::Approx(base).epsilon(1e-8));
    CHECK(displacement_integral(diag(2.0), g) == doctest::Approx(base).epsilon(1e-8));
}

TEST_CASE("displacement Monte Carlo") {
    const auto e = SL2RElement::identity();
    const auto mc = displacement_mc(e, e, 30, 20000, 1);
    CHECK(mc.value == 1.0);
    CHECK(mc.samples == 20000);

    const SL2RElement g1{1, 3, 0, 1}, g2 = diag(2.0);
    const auto a = displacement_mc(g1, g2, 200, 200000, 7);
    const auto b = displacement_mc(g1.inverse(), g2.inverse(), 200, 200000, 8);
    CHECK(std::abs(a.value - b.value) <= 4 * std::hypot(a.stderr_, b.stderr_));
    const double F = displacement_integral(g1, g2);
    CHECK(std::abs(a.value - F) <= 0.1 * F);
    // Fixed seed, fixed answer.
    CHECK(displacement_mc(g1, g2, 200, 50000, 3).value == displacement_mc(g1, g2, 200, 50000, 3).value);
}

TEST_CASE("displacement kernel Gram") {
    std::vector<SL2RElement> gs{SL2RElement::identity(), SL2RElement{1, 1, 0, 1}, SL2RElement{0, -1, 1, 0}, SL2RElement{2, 1, 1, 1}};
    std::vector<SL2RElement> hs{SL2RElement::identity(), diag(2.0), SL2RElement{1, 0, 1, 1}, SL2RElement::identity()};
    CHECK(displacement_gram_min_eigenvalue(gs, hs) >= -1e-8);
}

TEST_CASE("phi0 state") {
    const ProjMat e = ProjMat::identity();
    auto one = phi0_state({Phi0Term{e, e, 2, 0, 0, 1}});
    CHECK(one.value == doctest::Approx(1.0));
    CHECK(one.measure[0] == 1);

    // Different double cosets: the domain is empty.
    const ProjMat s = make_projmat(1, 0, 0, 2);
    auto zero = phi0_state({Phi0Term{s, e, 2, 0, 0, 1}});
    CHECK(zero.value == 0.0);
    CHECK(zero.measure[0] == 0);

    // The coset pieces of a level-e refinement add up to the unrefined measure.
    for (const auto& [g1, g2] : std::vector<std::pair<ProjMat, ProjMat>>{{s, inv(s)}, {s, s}, {make_projmat(1, 1, 0, 2), make_projmat(2, 0, 1, 1)}}) {
        const mpq_class whole = phi0_domain_measure(g1, g2, 2, 0, 0);
        mpq_class sum = 0;
        for (std::size_t w = 0; w < 3; ++w) sum += phi0_domain_measure(g1, g2, 2, 1, w);
        CHECK(sum == whole);
        CHECK(whole > 0);
        CHECK(whole <= 1);
    }
    // g k g^-1 stays in K exactly for k in the stabilizer of the coset, which has index 3.
    CHECK(phi0_domain_measure(s, inv(s), 2, 0, 0) == mpq_class(1, 3));

    CHECK_THROWS_AS(phi0_domain_measure(make_projmat(1, 0, 0, 3), e, 2, 0, 0), NotInG);
    CHECK_THROWS_AS(phi0_domain_measure(make_projmat(1, 0, 0, 1 << 20), e, 2, 0, 0, 1000), RaiseLevel);
}

TEST_CASE("phi0 is nonnegative on x* x combinations") {
    // x = sum c_i delta_{g_i}; x* x = sum conj(c_i) c_j delta_{g_i^-1 g_j}, evaluated on K.
    std::mt19937_64 rng(21);
    std::uniform_int_distribution<int> coef(-3, 3);
    const std::vector<ProjMat> gs{ProjMat::identity(), make_projmat(1, 0, 0, 2), make_projmat(2, 1, 0, 1), make_projmat(1, 1, 0, 2)};
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<long> c(gs.size());
        for (auto& v : c) v = coef(rng);
        std::vector<Phi0Term> terms;
        for (std::size_t i = 0; i < gs.size(); ++i)
            for (std::size_t j = 0; j < gs.size(); ++j)
                terms.push_back(Phi0Term{inv(gs[i]), gs[j], 2, 0, 0, mpq_class(c[i] * c[j])});
        CHECK(phi0_state(terms).value >= -1e-9);
    }
}
