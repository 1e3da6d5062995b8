#include "heckeops/cosets.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>
#include <set>

#include "heckeops/errors.hpp"

namespace heckeops {

ProjMat left_coset_canonical(const ProjMat& g) {
    // Row operations by SL2(Z) from the left: clear the lower-left entry with the
    // extended gcd of the first column, then reduce b modulo d with a power of T.
    mpz_class h, u, v;
    mpz_gcdext(h.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t(), g.a.get_mpz_t(), g.c.get_mpz_t());
    mpz_class n = g.det();
    mpz_class b = u * g.b + v * g.d;
    mpz_class d = n / h;
    mpz_class r;
    mpz_fdiv_r(r.get_mpz_t(), b.get_mpz_t(), d.get_mpz_t());
    return canonicalize(h, r, mpz_class(0), d);
}

ProjMat right_coset_canonical(const ProjMat& g) { return transpose(left_coset_canonical(transpose(g))); }

std::vector<ProjMat> left_cosets_of_double_coset(const DoubleCosetLabel& n) {
    if (n <= 0) throw std::invalid_argument("double coset label must be positive");
    std::vector<ProjMat> out;
    for (mpz_class a = 1; a <= n; ++a) {
        if (!mpz_divisible_p(n.get_mpz_t(), a.get_mpz_t())) continue;
        mpz_class d = n / a;
        for (mpz_class b = 0; b < d; ++b) {
            mpz_class g;
            mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), d.get_mpz_t());
            if (g == 1) out.push_back(ProjMat{a, b, 0, d});
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<ProjMat> right_cosets_of_double_coset(const DoubleCosetLabel& n) {
    auto out = left_cosets_of_double_coset(n);
    for (auto& m : out) m = transpose(m);
    std::sort(out.begin(), out.end());
    return out;
}

mpz_class ind(const DoubleCosetLabel& n) {
    if (n <= 0) throw std::invalid_argument("double coset label must be positive");
    mpz_class m = n, result = n;
    for (mpz_class q = 2; q * q <= m; ++q) {
        if (!mpz_divisible_p(m.get_mpz_t(), q.get_mpz_t())) continue;
        while (mpz_divisible_p(m.get_mpz_t(), q.get_mpz_t())) m /= q;
        result = result / q * (q + 1);
    }
    if (m > 1) result = result / m * (m + 1);
    return result;
}

mpz_class gamma_sigma_index(const ProjMat& sigma) { return ind(label_of(inv(sigma))); }

std::size_t gamma_sigma_index_orbit(const ProjMat& sigma) {
    // Gamma_sigma is the stabilizer of sigma*Gamma for left multiplication by Gamma,
    // so the index is the orbit size; S and T generate Gamma.
    const ProjMat S = make_projmat(0, -1, 1, 0), T = make_projmat(1, 1, 0, 1);
    std::set<ProjMat> seen;
    std::deque<ProjMat> queue;
    ProjMat start = right_coset_canonical(sigma);
    seen.insert(start);
    queue.push_back(start);
    while (!queue.empty()) {
        ProjMat x = queue.front();
        queue.pop_front();
        for (const ProjMat* gen : {&S, &T}) {
            ProjMat y = right_coset_canonical(mul(*gen, x));
            if (seen.insert(y).second) queue.push_back(y);
        }
    }
    return seen.size();
}

CosetSet coset_concat(const ProjMat& sigma1, const ProjMat& sigma2) {
    return {right_coset_canonical(sigma1), left_coset_canonical(sigma2)};
}

bool cosetset_member(const ProjMat& g, const CosetSet& s) {
    return is_in_gamma(mul(mul(inv(s.left), g), inv(s.right)));
}

std::vector<DoubleCosetLabel> cosetset_labels(const CosetSet& s) {
    mpz_class n = s.left.det() * s.right.det();
    std::vector<DoubleCosetLabel> out;
    for (mpz_class k = 1; k * k <= n; ++k) {
        mpz_class k2 = k * k;
        if (mpz_divisible_p(n.get_mpz_t(), k2.get_mpz_t())) out.push_back(n / k2);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Mat64> det_ball(std::int64_t n, double radius) {
    if (n <= 0) throw std::invalid_argument("det_ball: n must be positive");
    const double T = radius * radius * double(n);
    const std::int64_t B = static_cast<std::int64_t>(std::floor(std::sqrt(T) + 1e-9));
    const std::int64_t Tl = static_cast<std::int64_t>(std::floor(T + 1e-9));
    std::vector<Mat64> out;
    auto keep = [&](std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
        if (a * a + b * b + c * c + d * d > Tl) return;
        if (std::gcd(std::gcd(a, b), std::gcd(c, d)) != 1) return;
        Mat64 m{a, b, c, d};
        bool flipped = false;
        sign_canonical64(m, &flipped);
        if (!flipped) out.push_back(m);
    };
    for (std::int64_t a = -B; a <= B; ++a)
        for (std::int64_t b = -B; b <= B; ++b) {
            if (a * a + b * b > Tl) continue;
            for (std::int64_t c = -B; c <= B; ++c) {
                if (a * a + b * b + c * c > Tl) continue;
                if (a != 0) {
                    std::int64_t num = n + b * c;
                    if (num % a != 0) continue;
                    keep(a, b, c, num / a);
                } else if (b * c == -n) {
                    for (std::int64_t d = -B; d <= B; ++d) keep(a, b, c, d);
                }
            }
        }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

struct ItemView {
    const CosetUnionItem* item;
    std::vector<DoubleCosetLabel> labels() const {
        if (auto* s = std::get_if<CosetSet>(item)) return cosetset_labels(*s);
        return {std::get<DoubleCosetLabel>(*item)};
    }
    bool contains(const ProjMat& g) const {
        if (auto* s = std::get_if<CosetSet>(item)) return cosetset_member(g, *s);
        return label_of(g) == std::get<DoubleCosetLabel>(*item);
    }
    mpz_class density() const {
        if (std::get_if<CosetSet>(item)) return 1;
        return ind(std::get<DoubleCosetLabel>(*item));
    }
};

}  // namespace

bool union_relation_holds(const std::vector<CosetUnionItem>& lhs, const std::vector<CosetUnionItem>& rhs, double radius) {
    std::set<DoubleCosetLabel> labels;
    mpz_class dl = 0, dr = 0;
    for (auto& it : lhs) {
        for (auto& l : ItemView{&it}.labels()) labels.insert(l);
        dl += ItemView{&it}.density();
    }
    for (auto& it : rhs) {
        for (auto& l : ItemView{&it}.labels()) labels.insert(l);
        dr += ItemView{&it}.density();
    }
    bool agree = true;
    for (const auto& n : labels) {
        if (!n.fits_slong_p()) throw Overflow("label too large for ball enumeration");
        for (const Mat64& m : det_ball(n.get_si(), radius)) {
            ProjMat g = to_projmat(m);
            int cl = 0, cr = 0;
            for (auto& it : lhs) cl += ItemView{&it}.contains(g);
            for (auto& it : rhs) cr += ItemView{&it}.contains(g);
            if (cl > 1 || cr > 1) throw NotDisjoint("element " + g.str() + " lies in two sets of one side");
            if (cl != cr) agree = false;
        }
    }
    return agree && dl == dr;
}

}  // namespace heckeops
