#include "heckeops/hecke.hpp"

#include <regex>
#include <sstream>
#include <vector>

#include "heckeops/errors.hpp"
#include "heckeops/parallel.hpp"

namespace heckeops {

HeckeElement HeckeElement::delta_e() { return basis(1); }

HeckeElement HeckeElement::basis(const DoubleCosetLabel& n) {
    HeckeElement h;
    h.add(n, 1);
    return h;
}

HeckeElement HeckeElement::chi(int n, long p) {
    mpz_class l;
    mpz_ui_pow_ui(l.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(n));
    return basis(l);
}

void HeckeElement::add(const DoubleCosetLabel& n, const mpq_class& c_in) {
    mpq_class c = c_in;
    c.canonicalize();
    if (c == 0) return;
    auto [it, fresh] = coeffs.try_emplace(n, c);
    if (!fresh) {
        it->second += c;
        if (it->second == 0) coeffs.erase(it);
    }
}

HeckeElement HeckeElement::operator+(const HeckeElement& o) const {
    HeckeElement r = *this;
    for (auto& [n, c] : o.coeffs) r.add(n, c);
    return r;
}

HeckeElement HeckeElement::operator*(const mpq_class& s) const {
    HeckeElement r;
    for (auto& [n, c] : coeffs) r.add(n, c * s);
    return r;
}

std::string HeckeElement::str() const {
    if (coeffs.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [n, c] : coeffs) {
        if (!first) os << " + ";
        first = false;
        os << c << "*[" << n << "]";
    }
    return os.str();
}

CosetVector CosetVector::basis(const ProjMat& h) {
    CosetVector v;
    v.add(h, 1);
    return v;
}

void CosetVector::add(const ProjMat& h, const mpq_class& c_in) {
    mpq_class c = c_in;
    c.canonicalize();
    if (c == 0) return;
    ProjMat k = left_coset_canonical(h);
    auto [it, fresh] = coeffs.try_emplace(k, c);
    if (!fresh) {
        it->second += c;
        if (it->second == 0) coeffs.erase(it);
    }
}

HeckeElement parse_hecke(const std::string& text, long p) {
    static const std::regex term(R"(\s*([+-])?\s*(?:([0-9]+(?:/[0-9]+)?)\s*\*\s*)?(chi:([0-9]+)|label:([0-9]+)|delta)\s*)");
    HeckeElement h;
    auto it = text.cbegin();
    std::smatch m;
    bool any = false;
    while (it != text.cend() && std::regex_search(it, text.cend(), m, term, std::regex_constants::match_continuous)) {
        mpq_class c = 1;
        if (m[2].matched) {
            c.set_str(m[2].str(), 10);
            c.canonicalize();
        }
        if (m[1].matched && m[1].str() == "-") c = -c;
        if (m[4].matched) h = h + HeckeElement::chi(std::stoi(m[4].str()), p) * c;
        else if (m[5].matched) h.add(mpz_class(m[5].str()), c);
        else h.add(1, c);
        it = m[0].second;
        any = true;
    }
    if (!any || it != text.cend()) throw std::invalid_argument("cannot parse Hecke element '" + text + "'");
    return h;
}

namespace {

// Multiplicities c(n1, n2, z) for a product of two basis elements.
std::map<DoubleCosetLabel, mpq_class> basis_product_pairs(const DoubleCosetLabel& n1, const DoubleCosetLabel& n2) {
    const auto A = left_cosets_of_double_coset(n1);
    const auto B = left_cosets_of_double_coset(n2);
    const std::size_t shards = std::max<std::size_t>(1, std::min<std::size_t>(A.size(), 64));
    std::vector<std::map<DoubleCosetLabel, mpz_class>> partial(shards);
    parallel_shards(A.size(), shards, [&](std::size_t s, std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i)
            for (const auto& bj : B) partial[s][label_of(mul(A[i], bj))] += 1;
    });
    std::map<DoubleCosetLabel, mpz_class> counts;
    for (auto& part : partial)
        for (auto& [l, c] : part) counts[l] += c;
    std::map<DoubleCosetLabel, mpq_class> out;
    for (auto& [l, c] : counts) {
        mpz_class k = ind(l);
        if (!mpz_divisible_p(c.get_mpz_t(), k.get_mpz_t()))
            throw InternalInvariantViolation("coset count " + c.get_str() + " not divisible by ind(" + l.get_str() + ")");
        out[l] = mpq_class(c / k);
    }
    return out;
}

// c(n1, n2, z) = #{Gamma b in Gamma diag(1, n2) Gamma : z b^-1 in Gamma diag(1, n1) Gamma}.
// The content of a product a b divides gcd(n1, n2), so z = diag(1, n1 n2 / k^2) with
// k | gcd(n1, n2).
std::map<DoubleCosetLabel, mpq_class> basis_product(const DoubleCosetLabel& n1, const DoubleCosetLabel& n2) {
    std::map<DoubleCosetLabel, mpq_class> out;
    const mpz_class n = n1 * n2;
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), n1.get_mpz_t(), n2.get_mpz_t());
    const auto B = left_cosets_of_double_coset(n2);
    std::vector<mpz_class> divisors;
    for (mpz_class k = 1; k * k <= g; ++k)
        if (mpz_divisible_p(g.get_mpz_t(), k.get_mpz_t())) {
            divisors.push_back(k);
            if (k * k != g) divisors.push_back(g / k);
        }
    for (const mpz_class& k : divisors) {
        const mpz_class L = n / (k * k);
        const ProjMat z = canonicalize(mpz_class(1), mpz_class(0), mpz_class(0), L);
        const std::size_t shards = std::max<std::size_t>(1, std::min<std::size_t>(B.size(), 64));
        std::vector<long> part(shards, 0);
        parallel_shards(B.size(), shards, [&](std::size_t s, std::size_t b, std::size_t e) {
            for (std::size_t j = b; j < e; ++j) part[s] += label_of(mul(z, inv(B[j]))) == n1;
        });
        long count = 0;
        for (long c : part) count += c;
        if (count) out[L] = count;
    }
    return out;
}

HeckeElement bilinear(const HeckeElement& x, const HeckeElement& y,
                      std::map<DoubleCosetLabel, mpq_class> (*prod)(const DoubleCosetLabel&, const DoubleCosetLabel&)) {
    HeckeElement r;
    for (auto& [n1, c1] : x.coeffs)
        for (auto& [n2, c2] : y.coeffs)
            for (auto& [l, m] : prod(n1, n2)) r.add(l, c1 * c2 * m);
    return r;
}

}  // namespace

HeckeElement hecke_mul(const HeckeElement& x, const HeckeElement& y) { return bilinear(x, y, basis_product); }
HeckeElement hecke_mul_pairs(const HeckeElement& x, const HeckeElement& y) { return bilinear(x, y, basis_product_pairs); }

HeckeElement adjoint(const HeckeElement& x) {
    // [Gamma s Gamma]* = [Gamma s^-1 Gamma]; inversion preserves the label here.
    HeckeElement r;
    for (auto& [n, c] : x.coeffs) r.add(label_of(inv(canonicalize(mpz_class(1), mpz_class(0), mpz_class(0), n))), c);
    return r;
}

mpq_class ind_hom(const HeckeElement& x) {
    mpq_class s = 0;
    for (auto& [n, c] : x.coeffs) s += c * mpq_class(ind(n));
    return s;
}

mpq_class state_phi(const HeckeElement& x) {
    auto it = x.coeffs.find(1);
    return it == x.coeffs.end() ? mpq_class(0) : it->second;
}

CosetVector act_left_regular(const HeckeElement& x, const CosetVector& v) {
    CosetVector r;
    for (auto& [n, c] : x.coeffs) {
        const auto reps = left_cosets_of_double_coset(n);
        for (auto& [h, w] : v.coeffs)
            for (const auto& g : reps) r.add(mul(g, h), c * w);
    }
    return r;
}

}  // namespace heckeops
