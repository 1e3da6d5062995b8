#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "heckeops/classical.hpp"
#include "heckeops/errors.hpp"

using namespace heckeops;

namespace {

// 1/2 sum over all coprime (c, d) != 0 in the box, straight from the definition.
double eisenstein_naive(cplxd z, double s, long cutoff) {
    double acc = 0;
    for (long c = -cutoff; c <= cutoff; ++c)
        for (long d = -cutoff; d <= cutoff; ++d) {
            if (std::gcd(c, d) != 1) continue;
            acc += std::pow(std::norm(double(c) * z + double(d)), -s);
        }
    return 0.5 * acc * std::pow(z.imag(), s);
}

double E(cplxd z) { return eisenstein(reduce_to_fundamental_domain(z), 2.0, 400).value; }

}  // namespace

TEST_CASE("Hecke maps for a prime") {
    for (long p : {2L, 3L, 5L}) {
        const auto h = hecke_maps(p);
        long total = 0;
        for (auto& [m, k] : h.maps) total += k;
        CHECK(total == p + 1);
        // T_p applied to the constant function.
        CHECK(apply(h, [](cplxd) { return cplxd(1, 0); }, cplxd(0.3, 1.2)) == cplxd(double(p + 1), 0));
        // Scale factors are {1/p (p times), p (once)}.
        const auto sc = imaginary_part_scales(h);
        CHECK(sc.size() == 2);
        CHECK(sc.at(mpq_class(1, p)) == p);
        CHECK(sc.at(mpq_class(p)) == 1);
        for (double s : {0.5, 1.0, 2.0, 3.25})
            CHECK(power_function_eigenvalue(h, s) == doctest::Approx(std::pow(double(p), s) + std::pow(double(p), 1 - s)).epsilon(1e-13));
    }
    CHECK_THROWS_AS(apply(hecke_maps(2), [](cplxd z) { return z; }, cplxd(0.1, -1)), DomainError);
}

TEST_CASE("maps act as in the classical formula") {
    // sum_{d=0}^{p-1} f((z + d) / p) + f(p z)
    const cplxd z(0.37, 0.81);
    auto f = [](cplxd w) { return std::exp(cplxd(0, 1) * w) + w * w; };
    for (long p : {2L, 3L}) {
        cplxd ref = f(double(p) * z);
        for (long d = 0; d < p; ++d) ref += f((z + double(d)) / double(p));
        CHECK(std::abs(apply(hecke_maps(p), f, z) - ref) < 1e-12);
    }
}

TEST_CASE("compose_check on p-power labels") {
    for (long p : {2L, 3L})
        for (long a = p; a <= p * p * p; a *= p)
            for (long b = p; b <= p * p * p; b *= p) CHECK(compose_check(a, b));
    CHECK(compose_check(6, 10));
}

TEST_CASE("fundamental domain reduction") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> X(-5, 5), Y(0.01, 2);
    for (int i = 0; i < 100; ++i) {
        const cplxd w = reduce_to_fundamental_domain(cplxd(X(rng), Y(rng)));
        CHECK(std::abs(w.real()) <= 0.5 + 1e-12);
        CHECK(std::norm(w) >= 1 - 1e-12);
    }
    CHECK_THROWS_AS(reduce_to_fundamental_domain(cplxd(0, -1)), DomainError);
}

TEST_CASE("Eisenstein series") {
    CHECK_THROWS_AS(eisenstein(cplxd(0, 1), 1.0, 10), DivergentSeries);
    const cplxd z(0.1, 1.3);
    const auto v = eisenstein(z, 2.0, 60);
    const double ref = eisenstein_naive(z, 2.0, 60);
    CHECK(v.value == doctest::Approx(ref).epsilon(1e-12));
    // The tail bound covers the gap to a much larger cutoff.
    const auto big = eisenstein(z, 2.0, 2000);
    CHECK(big.value - v.value <= v.tail);
    CHECK(big.value >= v.value);
    // Modular invariance.
    CHECK(E(z) == doctest::Approx(E(z + 1.0)).epsilon(1e-9));
    CHECK(E(z) == doctest::Approx(E(-1.0 / z)).epsilon(1e-5));
}

TEST_CASE("Eisenstein eigen-relation") {
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> X(-0.5, 0.5), Y(0.9, 2.0);
    for (long p : {2L, 3L})
        for (int i = 0; i < 4; ++i) {
            const cplxd z(X(rng), Y(rng));
            const double lhs = apply(hecke_maps(p), [](cplxd w) { return cplxd(E(w), 0); }, z).real();
            const double rhs = (std::pow(double(p), 2.0) + std::pow(double(p), -1.0)) * E(z);
            CHECK(std::abs(lhs - rhs) <= 1e-3 * std::abs(rhs));
        }
}
