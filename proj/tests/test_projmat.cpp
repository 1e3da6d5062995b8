#include <doctest.h>

#include <cmath>
#include <random>

#include "heckeops/errors.hpp"
#include "heckeops/projmat.hpp"
#include "oracles.hpp"

using namespace heckeops;

namespace {
ProjMat pm(long a, long b, long c, long d) { return make_projmat(a, b, c, d); }
}  // namespace

TEST_CASE("canonicalize picks the primitive sign-canonical representative") {
    CHECK(canonicalize(mpz_class(2), mpz_class(0), mpz_class(0), mpz_class(2)) == ProjMat::identity());
    CHECK(parse_projmat("1/2 0 0 2") == pm(1, 0, 0, 4));
    // Oracle: scale (-3, 0, 0, -3/2) by 2, divide by the content 3, flip the sign.
    oracle::Quad q = oracle::reduce({-6, 0, 0, -3});
    CHECK(parse_projmat("-3 0 0 -3/2") == pm(q[0], q[1], q[2], q[3]));
    CHECK(pm(2, 0, 0, 1) == parse_projmat("-3 0 0 -3/2"));
    CHECK_THROWS_AS(parse_projmat("1 2 2 4"), DegenerateMatrix);
    CHECK_THROWS_AS(parse_projmat("1 2 3"), std::invalid_argument);
}

TEST_CASE("canonicalize is constant on projective classes") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<long> e(-9, 9), s(1, 7);
    for (int trial = 0; trial < 200; ++trial) {
        long a = e(rng), b = e(rng), c = e(rng), d = e(rng);
        if (a * d - b * c <= 0) continue;
        ProjMat base = pm(a, b, c, d);
        mpq_class r(s(rng), s(rng));
        if (trial % 2) r = -r;
        r.canonicalize();
        ProjMat scaled = canonicalize(mpq_class(a) * r, mpq_class(b) * r, mpq_class(c) * r, mpq_class(d) * r);
        CHECK(scaled == base);
        CHECK(canonicalize(base.a, base.b, base.c, base.d) == base);
    }
}

TEST_CASE("group law") {
    const ProjMat s2 = pm(1, 0, 0, 2);
    CHECK(mul(s2, s2) == pm(1, 0, 0, 4));
    CHECK(mul(pm(1, 1, 0, 2), pm(2, 0, 0, 1)) == pm(2, 1, 0, 2));
    CHECK(mul(pm(1, 1, 0, 2), pm(2, 0, 0, 1)).det() == 4);
    CHECK(inv(ProjMat::identity()) == ProjMat::identity());
    CHECK(inv(s2) == pm(2, 0, 0, 1));
    CHECK(inv(pm(1, 1, 0, 2)) == pm(2, -1, 0, 1));

    std::mt19937_64 rng(5);
    std::uniform_int_distribution<long> e(-6, 6);
    auto random_pm = [&] {
        for (;;) {
            long a = e(rng), b = e(rng), c = e(rng), d = e(rng);
            if (a * d - b * c > 0) return pm(a, b, c, d);
        }
    };
    for (int i = 0; i < 100; ++i) {
        ProjMat x = random_pm(), y = random_pm(), z = random_pm();
        CHECK(mul(mul(x, y), z) == mul(x, mul(y, z)));
        CHECK(inv(inv(x)) == x);
        CHECK(mul(x, inv(x)) == ProjMat::identity());
        mpz_class full = x.det() * y.det(), got = mul(x, y).det();
        CHECK(mpz_divisible_p(full.get_mpz_t(), got.get_mpz_t()));
        mpz_class q = full / got;
        CHECK(mpz_perfect_square_p(q.get_mpz_t()));
    }
}

TEST_CASE("membership in Gamma and G") {
    CHECK(is_in_gamma(ProjMat::identity()));
    CHECK_FALSE(is_in_gamma(pm(1, 0, 0, 2)));
    CHECK(is_in_gamma(pm(0, 1, -1, 0)));
    CHECK(is_in_G(pm(1, 0, 0, 4), 2));
    CHECK_FALSE(is_in_G(pm(1, 0, 0, 2), 2));
    CHECK_FALSE(is_in_G(pm(1, 0, 0, 9), 2));
    for (long p : {2L, 3L, 5L}) CHECK(is_in_G(ProjMat::identity(), p));
    std::mt19937_64 rng(3);
    for (int i = 0; i < 50; ++i) {
        auto q = oracle::random_gamma(rng);
        ProjMat g = pm(q[0], q[1], q[2], q[3]);
        CHECK(is_in_gamma(g));
        for (long p : {2L, 3L, 7L}) CHECK(is_in_G(g, p));
    }
}

TEST_CASE("Hilbert-Schmidt norm of the unimodular representative") {
    CHECK(hs_norm(SignedMat::identity(), 2) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(hs_norm(make_signed(1, 1, 0, 1), 3) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
    CHECK(hs_norm(make_signed(1, 0, 0, 4), 2) == doctest::Approx(std::sqrt(17.0) / 2).epsilon(1e-15));
    CHECK_THROWS_AS(hs_norm(make_signed(1, 0, 0, 2), 2), NotInG);
}

TEST_CASE("signed matrices track the cover sign") {
    SignedMat s = make_signed(0, -1, 1, 0);
    SignedMat s2 = smul(s, s);
    CHECK(s2 == make_signed(-1, 0, 0, -1));
    CHECK_FALSE(is_canonical_sign(s2));
    CHECK(to_proj(s2) == ProjMat::identity());
    SignedMat x = make_signed(1, 1, 0, 2);
    CHECK(smul(x, sinv(x)) == SignedMat::identity());
}

TEST_CASE("checked 64-bit arithmetic refuses to overflow") {
    Mat64 big{1LL << 40, 0, 0, 1LL << 40};
    CHECK_THROWS_AS(mul64(big, big), Overflow);
    Mat64 x{2, 4, 6, 8};
    CHECK(primitive64(x) == Mat64{1, 2, 3, 4});
    bool flipped = false;
    CHECK(sign_canonical64(Mat64{0, -1, 1, 0}, &flipped) == Mat64{0, 1, -1, 0});
    CHECK(flipped);
}
