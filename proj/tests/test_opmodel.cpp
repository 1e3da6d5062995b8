#include <doctest.h>

#include <cmath>
#include <random>

#include "heckeops/errors.hpp"
#include "heckeops/opmodel.hpp"
#include "oracles.hpp"

using namespace heckeops;

namespace {

Mat64 m64(const oracle::Quad& q) { return {q[0], q[1], q[2], q[3]}; }

// Genuine product in the cover: reduce by the positive content, then read off the
// sign needed to reach the sign-canonical key.
std::pair<Mat64, int> cover_mul(const Mat64& x, const Mat64& y) {
    oracle::Quad q = oracle::mul({x.a, x.b, x.c, x.d}, {y.a, y.b, y.c, y.d});
    const long g = oracle::gcd4(q[0], q[1], q[2], q[3]);
    for (long& v : q) v /= g;
    const oracle::Quad f = oracle::sign_fix(q);
    return {m64(f), f == q ? 1 : -1};
}

TruncatedElement random_element(std::mt19937_64& rng, int terms) {
    std::normal_distribution<double> n(0, 1);
    std::uniform_int_distribution<int> pick(0, 3);
    const Mat64 gens[] = {{1, 1, 0, 1}, {0, -1, 1, 0}, {1, 0, 0, 2}, {2, 1, 0, 1}};
    TruncatedElement x;
    for (int i = 0; i < terms; ++i) {
        Mat64 g{1, 0, 0, 1};
        int sign = 1;
        for (int k = 0; k < 3; ++k) {
            auto [key, s] = cover_mul(g, gens[pick(rng)]);
            g = key;
            sign *= s;
        }
        x.add(g, double(sign) * cplx(n(rng), n(rng)));
    }
    return x;
}

double dist(const TruncatedElement& x, const TruncatedElement& y) { return l2_distance(x, y, 1e300); }

const OperatorModel& small_model() {
    static const OperatorModel m(ModelConfig{2, 4.0, {0.5, 2.0}, 13, 1e-10});
    return m;
}

}  // namespace

TEST_CASE("cover products of keys") {
    std::mt19937_64 rng(31);
    for (int i = 0; i < 300; ++i) {
        const Mat64 x = m64(oracle::sign_fix(oracle::random_gamma(rng, 3)));
        const Mat64 y = m64(oracle::sign_fix(oracle::mul(oracle::random_gamma(rng, 2), {1, 1, 0, 2})));
        CHECK(key_mul(x, y) == cover_mul(x, y));
        const auto [e, s] = key_mul(x, key_inv(x));
        CHECK(e == Mat64{1, 0, 0, 1});
        CHECK(s == 1);
    }
    CHECK(key_norm(Mat64{1, 0, 0, 4}) == doctest::Approx(std::sqrt(17.0 / 4.0)));
}

TEST_CASE("truncated elements in the cover") {
    TruncatedElement x;
    x.add(Mat64{-1, 0, 0, -1}, 2.0);
    CHECK(x.at(Mat64{1, 0, 0, 1}) == cplx(-2.0));
    CHECK(x.at(Mat64{-1, 0, 0, -1}) == cplx(2.0));
    CHECK(x.norm2() == doctest::Approx(4.0));
    CHECK_THROWS_AS(x.add(Mat64{1, 0, 0, 3}, 1.0), NotInG);

    // delta_g * delta_h = delta_{gh} with the cover sign.
    const Mat64 S{0, -1, 1, 0};
    const auto SS = convolve(TruncatedElement::delta(S, 2), TruncatedElement::delta(S, 2), 1e300);
    CHECK(SS.at(Mat64{1, 0, 0, 1}) == cplx(-1.0));
}

TEST_CASE("convolution algebra identities") {
    std::mt19937_64 rng(37);
    for (int i = 0; i < 10; ++i) {
        const auto x = random_element(rng, 5), y = random_element(rng, 5), z = random_element(rng, 5);
        const auto xy = convolve(x, y, 1e300);
        CHECK(dist(convolve(xy, z, 1e300), convolve(x, convolve(y, z, 1e300), 1e300)) < 1e-10);
        CHECK(dist(adjoint(xy), convolve(adjoint(y), adjoint(x), 1e300)) < 1e-10);
        CHECK(std::abs(trace(convolve(adjoint(x), x, 1e300)) - x.norm2()) < 1e-10);
        CHECK(dist(convolve(TruncatedElement::delta(Mat64{1, 0, 0, 1}, 2), x, 1e300), x) < 1e-14);
        // Expectation onto Gamma keeps exactly the determinant-one keys.
        const auto ex = expect_gamma(xy);
        for (auto& [k, v] : xy.support)
            if (k.det() == 1) CHECK(ex.at(k) == v);
        for (auto& [k, v] : ex.support) CHECK(k.det() == 1);
    }
}

TEST_CASE("gamma matrices") {
    std::mt19937_64 rng(41);
    TruncatedElement x;
    for (int i = 0; i < 6; ++i) x.add(m64(oracle::random_gamma(rng, 2)), cplx(i + 1, -i));
    const double R = 3;
    const auto L = to_gamma_matrix(x, R, Orientation::left);
    const auto Rm = to_gamma_matrix(x, R, Orientation::right);
    const auto ball = oracle::brute_det_ball(1, 9);
    REQUIRE(L.index.size() == ball.size());
    for (std::size_t i = 0; i < L.index.size(); ++i)
        for (std::size_t j = 0; j < L.index.size(); ++j) {
            const Mat64 gi = L.index[i], gj = L.index[j];
            const Mat64 gjinv{gj.d, -gj.b, -gj.c, gj.a}, giinv{gi.d, -gi.b, -gi.c, gi.a};
            const auto [k1, s1] = cover_mul(gi, gjinv);
            const auto [k2, s2] = cover_mul(giinv, gj);
            CHECK(L.M(Eigen::Index(i), Eigen::Index(j)) == double(s1) * x.at(k1));
            CHECK(Rm.M(Eigen::Index(i), Eigen::Index(j)) == double(s2) * x.at(k2));
        }
}

TEST_CASE("support sets") {
    // Label 2: all primitive determinant-2 matrices.
    const auto pts = support_points(SupportSet::double_coset(2), 3.0);
    CHECK(pts.size() == oracle::brute_det_ball(2, 18).size());
    // Left coset Gamma sigma: determinant-2 matrices whose Hermite form is sigma's.
    const ProjMat sigma = make_projmat(1, 1, 0, 2);
    const auto lc = support_points(SupportSet::left_coset(sigma), 3.0);
    std::size_t want = 0;
    for (const auto& q : oracle::brute_det_ball(2, 18)) want += oracle::left_hnf(q) == oracle::Quad{1, 1, 0, 2};
    CHECK(lc.size() == want);
    CHECK(SupportSet::left_coset(sigma).density() == 1.0);
    CHECK(SupportSet::double_coset(4).density() == 6.0);
    const auto prod = SupportSet::product(make_projmat(1, 0, 0, 2), make_projmat(1, 0, 0, 2));
    for (const Mat64& g : support_points(prod, 4.0)) CHECK(cosetset_member(to_projmat(g), prod.set));
    // Tail bounds shrink with the window and grow with the density.
    CHECK(coefficient_tail_bound(10, 3, 4) < coefficient_tail_bound(5, 3, 4));
    CHECK(coefficient_tail_bound(10, 6, 4) > coefficient_tail_bound(10, 3, 4));
}

TEST_CASE("tilde_t support matches the enumeration") {
    const auto x = small_model().tilde_t(SupportSet::double_coset(2), 10.0);
    CHECK(x.size() == oracle::brute_det_ball(2, 200).size());
    for (auto& [k, v] : x.support) CHECK(std::abs(v - std::conj(small_model().phi(k))) < 1e-15);
}

TEST_CASE("operator model basics") {
    CHECK_THROWS_AS(OperatorModel(ModelConfig{2, 4.0, {0.0, 1.0}, 13, 1e-10}), RadiusTooSmall);

    const auto& m = small_model();
    CHECK(m.min_eigenvalue() > 0);
    const Mat64 e{1, 0, 0, 1};
    CHECK(std::abs(m.t(e) - 1.0) < 1e-12);
    CHECK(std::abs(m.phi(e) - 1.0) < 1e-12);

    // phi(g) is the coefficient at g0^-1 g g0 with g0 moving i to the base point.
    const auto g0 = SL2RElement::moving_i_to(m.config().base_point);
    std::mt19937_64 rng(43);
    for (int i = 0; i < 30; ++i) {
        const Mat64 g = m64(oracle::random_gamma(rng, 3));
        const cplx ref = coef13_sl2(g0.inverse() * real_lift(g) * g0);
        CHECK(std::abs(m.phi(g) - ref) <= 1e-10 * std::abs(ref) + 1e-300);
        const Mat64 h = m64(oracle::sign_fix(oracle::mul(oracle::random_gamma(rng, 2), {1, 0, 0, 2})));
        CHECK(std::abs(m.t(key_inv(h)) - std::conj(m.t(h))) < 1e-12);
        CHECK(std::abs(m.t(key_inv(g)) - std::conj(m.t(g))) < 1e-12);
    }
    // t_many and t agree.
    std::vector<Mat64> ks{{1, 1, 0, 1}, {1, 0, 0, 2}, {2, 1, 1, 1}};
    const auto v = m.t_many(ks);
    for (std::size_t i = 0; i < ks.size(); ++i) CHECK(v[i] == m.t(ks[i]));
    // The correction is supported on the Gamma ball and has coefficient norm >= 1 at e.
    const auto c = m.correction();
    for (auto& [k, val] : c.support) CHECK(k.det() == 1);
    CHECK(m.correction_norm() == doctest::Approx(std::sqrt(c.norm2())));
}

TEST_CASE("Psi maps") {
    const auto& m = small_model();
    std::mt19937_64 rng(47);
    TruncatedElement x;
    for (int i = 0; i < 3; ++i) x.add(m64(oracle::random_gamma(rng, 1)), cplx(1.0 + i, 0.5 * i));
    CHECK(dist(psi_sigma(ProjMat::identity(), x, m, 3.0, 3.0), x) == 0.0);

    const ProjMat sp = make_projmat(1, 0, 0, 2);
    // Hermiticity: Psi(x*) = Psi(x)*.
    const auto a = psi_sigma(sp, adjoint(x), m, 3.0, 2.5);
    const auto b = adjoint(psi_sigma(sp, x, m, 3.0, 2.5));
    CHECK(dist(a, b) < 1e-9);
    // Psi_tilde(1) concentrates at the identity.
    const auto one = psi_tilde(sp, TruncatedElement::delta(Mat64{1, 0, 0, 1}, 2), m, 3.0, 2.0);
    CHECK(std::abs(one.at(Mat64{1, 0, 0, 1})) > 0.5);
    CHECK(one.at(Mat64{1, 0, 0, 1}).real() > 0);
    CHECK(std::abs(one.at(Mat64{1, 0, 0, 1}).imag()) < 1e-9);
}

TEST_CASE("t-elements on disjoint supports are orthogonal") {
    const auto& m = small_model();
    const auto t2 = m.double_coset_t(2, 3.0);
    const auto t8 = m.double_coset_t(8, 3.0);
    CHECK(t2.size() > 0);
    CHECK(t8.size() > 0);
    CHECK(std::abs(trace(convolve(adjoint(t2), t8, 1e300))) == 0.0);
    for (auto& [k, v] : t2.support) CHECK(k.det() == 2);
    // Coefficients are conj t(theta).
    for (auto& [k, v] : t2.support) CHECK(std::abs(v - std::conj(m.t(k))) < 1e-14);
}

TEST_CASE("pi matrix and Eq. 2 vector at the identity label") {
    const auto& m = small_model();
    const auto P = build_pi_matrix(ProjMat::identity(), 2.0, m);
    // Entries t(g1^-1 g2): Hermitian with unit diagonal.
    CHECK((P.M - P.M.adjoint()).norm() < 1e-12);
    for (Eigen::Index i = 0; i < P.M.rows(); ++i) CHECK(std::abs(P.M(i, i) - 1.0) < 1e-12);
    const auto v = coset_sum_vector(make_projmat(1, 0, 0, 2), Mat64{1, 0, 0, 1}, m, 2.0, {Mat64{1, 0, 0, 1}});
    CHECK(v.size() == 1);
    CHECK(std::isfinite(std::abs(v.at(Mat64{1, 0, 0, 1}))));
}
