#include "heckeops/classical.hpp"

#include <cmath>
#include <numeric>

#include "heckeops/errors.hpp"
#include "heckeops/parallel.hpp"

namespace heckeops {

cplxd MoebiusMap::operator()(cplxd z) const {
    return (m.a.get_d() * z + m.b.get_d()) / (m.c.get_d() * z + m.d.get_d());
}

HeckeImage hecke_maps(const DoubleCosetLabel& n) {
    HeckeImage h;
    for (const auto& r : left_cosets_of_double_coset(n)) h.maps.push_back({MoebiusMap{r}, 1});
    return h;
}

cplxd apply(const HeckeImage& h, const std::function<cplxd(cplxd)>& f, cplxd z) {
    if (!(z.imag() > 0)) throw DomainError("point must lie in the upper half plane");
    cplxd s = 0;
    for (const auto& [m, k] : h.maps) s += double(k) * f(m(z));
    return s;
}

std::map<mpq_class, long> imaginary_part_scales(const HeckeImage& h) {
    std::map<mpq_class, long> out;
    for (const auto& [m, k] : h.maps) {
        // Im(g z) = det(g) Im z / |c z + d|^2; the maps here are upper triangular.
        if (m.m.c != 0) throw std::invalid_argument("imaginary_part_scales expects upper triangular maps");
        mpq_class r(m.m.a, m.m.d);
        r.canonicalize();
        out[r] += k;
    }
    return out;
}

double power_function_eigenvalue(const HeckeImage& h, double s) {
    double v = 0;
    for (auto& [r, k] : imaginary_part_scales(h)) v += double(k) * std::pow(r.get_d(), s);
    return v;
}

bool compose_check(const DoubleCosetLabel& n1, const DoubleCosetLabel& n2) {
    std::map<ProjMat, long> lhs, rhs;
    const auto A = left_cosets_of_double_coset(n1), B = left_cosets_of_double_coset(n2);
    for (const auto& a : A)
        for (const auto& b : B) ++lhs[left_coset_canonical(mul(a, b))];
    const auto prod = hecke_mul(HeckeElement::basis(n1), HeckeElement::basis(n2));
    for (auto& [z, c] : prod.coeffs) {
        if (c.get_den() != 1 || !c.get_num().fits_slong_p()) return false;
        for (const auto& r : left_cosets_of_double_coset(z)) rhs[r] += c.get_num().get_si();
    }
    return lhs == rhs;
}

cplxd reduce_to_fundamental_domain(cplxd z) {
    if (!(z.imag() > 0)) throw DomainError("point must lie in the upper half plane");
    for (int it = 0; it < 10000; ++it) {
        z -= std::floor(z.real() + 0.5);
        if (std::norm(z) >= 1 - 1e-15) return z;
        z = -1.0 / z;
    }
    return z;
}

EisensteinValue eisenstein(cplxd z, double s, int cutoff) {
    if (s <= 1) throw DivergentSeries("Eisenstein series needs s > 1");
    if (!(z.imag() > 0)) throw DomainError("point must lie in the upper half plane");
    if (cutoff < 1) throw std::invalid_argument("cutoff must be positive");
    const double x = z.real(), y = z.imag();
    // Shards over c >= 0; (c, d) and (-c, -d) give equal terms, which the 1/2 absorbs.
    const std::size_t shards = 32;
    std::vector<double> part(shards, 0.0);
    parallel_shards(static_cast<std::size_t>(cutoff) + 1, shards, [&](std::size_t sh, std::size_t b, std::size_t e) {
        double acc = 0;
        for (std::size_t ci = b; ci < e; ++ci) {
            const long c = static_cast<long>(ci);
            for (long d = -cutoff; d <= cutoff; ++d) {
                if (c == 0 && d <= 0) continue;
                if (std::gcd(c, d) != 1) continue;
                const double re = c * x + d, im = c * y;
                acc += std::pow(re * re + im * im, -s);
            }
        }
        part[sh] = acc;
    });
    double sum = 0;
    for (double v : part) sum += v;
    // |cz + d|^2 >= q * max(|c|, |d|)^2 with q the least eigenvalue of the quadratic
    // form; there are 8m pairs with max(|c|, |d|) = m.
    const double A = x * x + y * y, B = x, C = 1;
    const double q = 0.5 * (A + C - std::sqrt((A - C) * (A - C) + 4 * B * B));
    const double tail = 0.5 * 8 * std::pow(q, -s) * std::pow(double(cutoff), 2 - 2 * s) / (2 * s - 2) * std::pow(y, s);
    return {sum * std::pow(y, s), tail};
}

}  // namespace heckeops
