#include "heckeops/projmat.hpp"

#include <cmath>
#include <numeric>
#include <ostream>
#include <sstream>
#include <tuple>
#include <vector>

#include "heckeops/errors.hpp"

namespace heckeops {

namespace {

mpz_class gcd4(const mpz_class& a, const mpz_class& b, const mpz_class& c, const mpz_class& d) {
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), d.get_mpz_t());
    return g;
}

bool first_nonzero_negative(const mpz_class& a, const mpz_class& b, const mpz_class& c, const mpz_class& d) {
    for (const mpz_class* v : {&a, &b, &c, &d})
        if (sgn(*v) != 0) return sgn(*v) < 0;
    return false;
}

std::int64_t cmul(std::int64_t x, std::int64_t y) {
    std::int64_t r;
    if (__builtin_mul_overflow(x, y, &r)) throw Overflow("int64 product");
    return r;
}
std::int64_t cadd(std::int64_t x, std::int64_t y) {
    std::int64_t r;
    if (__builtin_add_overflow(x, y, &r)) throw Overflow("int64 sum");
    return r;
}
std::int64_t csub(std::int64_t x, std::int64_t y) {
    std::int64_t r;
    if (__builtin_sub_overflow(x, y, &r)) throw Overflow("int64 difference");
    return r;
}

std::int64_t to_i64(const mpz_class& v) {
    if (!v.fits_slong_p()) throw Overflow("entry does not fit in 64 bits");
    return v.get_si();
}

}  // namespace

bool ProjMat::operator<(const ProjMat& o) const {
    if (a != o.a) return a < o.a;
    if (b != o.b) return b < o.b;
    if (c != o.c) return c < o.c;
    return d < o.d;
}

std::string ProjMat::str() const {
    std::ostringstream os;
    os << a << ' ' << b << ' ' << c << ' ' << d;
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const ProjMat& m) { return os << '(' << m.a << ',' << m.b << ';' << m.c << ',' << m.d << ')'; }

bool SignedMat::operator<(const SignedMat& o) const {
    if (a != o.a) return a < o.a;
    if (b != o.b) return b < o.b;
    if (c != o.c) return c < o.c;
    return d < o.d;
}

ProjMat canonicalize(const mpz_class& a, const mpz_class& b, const mpz_class& c, const mpz_class& d) {
    mpz_class det = a * d - b * c;
    if (det == 0) throw DegenerateMatrix("zero determinant");
    // Both det(M) and det(-M) have the same sign, so a negative determinant is not
    // repairable by the projective sign; PGL2(Q)+ requires det > 0.
    if (det < 0) throw DegenerateMatrix("negative determinant");
    mpz_class g = gcd4(a, b, c, d);
    ProjMat m{a / g, b / g, c / g, d / g};
    if (first_nonzero_negative(m.a, m.b, m.c, m.d)) {
        m.a = -m.a; m.b = -m.b; m.c = -m.c; m.d = -m.d;
    }
    return m;
}

ProjMat canonicalize(const mpq_class& a, const mpq_class& b, const mpq_class& c, const mpq_class& d) {
    mpz_class l = 1;
    for (const mpq_class* q : {&a, &b, &c, &d}) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q->get_den_mpz_t());
    auto lift = [&](const mpq_class& q) { return mpz_class(q.get_num() * (l / q.get_den())); };
    return canonicalize(lift(a), lift(b), lift(c), lift(d));
}

ProjMat make_projmat(long a, long b, long c, long d) { return canonicalize(mpz_class(a), mpz_class(b), mpz_class(c), mpz_class(d)); }

ProjMat parse_projmat(const std::string& text) {
    std::istringstream is(text);
    std::vector<mpq_class> v;
    std::string tok;
    while (is >> tok) {
        mpq_class q;
        if (q.set_str(tok, 10) != 0) throw std::invalid_argument("not a rational number: '" + tok + "'");
        q.canonicalize();
        v.push_back(q);
    }
    if (v.size() != 4) throw std::invalid_argument("expected four entries 'a b c d', got '" + text + "'");
    return canonicalize(v[0], v[1], v[2], v[3]);
}

ProjMat mul(const ProjMat& x, const ProjMat& y) {
    return canonicalize(mpz_class(x.a * y.a + x.b * y.c), mpz_class(x.a * y.b + x.b * y.d),
                        mpz_class(x.c * y.a + x.d * y.c), mpz_class(x.c * y.b + x.d * y.d));
}

ProjMat inv(const ProjMat& x) { return canonicalize(x.d, mpz_class(-x.b), mpz_class(-x.c), x.a); }

ProjMat transpose(const ProjMat& x) { return canonicalize(x.a, x.c, x.b, x.d); }

bool is_in_gamma(const ProjMat& x) { return x.det() == 1; }

int p_valuation(mpz_class n, long p) {
    if (n == 0) throw std::invalid_argument("valuation of zero");
    if (n < 0) n = -n;
    int v = 0;
    while (mpz_divisible_ui_p(n.get_mpz_t(), static_cast<unsigned long>(p))) {
        n /= p;
        ++v;
    }
    return v;
}

bool is_power_of(const mpz_class& n, long p, int* exponent) {
    if (n <= 0) return false;
    int v = p_valuation(n, p);
    mpz_class q;
    mpz_ui_pow_ui(q.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(v));
    if (q != n) return false;
    if (exponent) *exponent = v;
    return true;
}

bool is_in_G(const ProjMat& x, long p) {
    int e = 0;
    return is_power_of(x.det(), p, &e) && e % 2 == 0;
}

mpz_class label_of(const ProjMat& x) { return x.det(); }

SignedMat make_signed(long a, long b, long c, long d) {
    mpz_class A(a), B(b), C(c), D(d);
    if (A * D - B * C <= 0) throw DegenerateMatrix("signed matrix needs positive determinant");
    mpz_class g = gcd4(A, B, C, D);
    return {A / g, B / g, C / g, D / g};
}

SignedMat to_signed(const ProjMat& x) { return {x.a, x.b, x.c, x.d}; }
ProjMat to_proj(const SignedMat& x) { return canonicalize(x.a, x.b, x.c, x.d); }

SignedMat smul(const SignedMat& x, const SignedMat& y) {
    SignedMat r{x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
    mpz_class g = gcd4(r.a, r.b, r.c, r.d);
    r.a /= g; r.b /= g; r.c /= g; r.d /= g;
    return r;
}

SignedMat sinv(const SignedMat& x) { return {x.d, -x.b, -x.c, x.a}; }
SignedMat sneg(const SignedMat& x) { return {-x.a, -x.b, -x.c, -x.d}; }
bool is_canonical_sign(const SignedMat& x) { return !first_nonzero_negative(x.a, x.b, x.c, x.d); }

double hs_norm(const SignedMat& x, long p) {
    int e = 0;
    if (!is_power_of(x.det(), p, &e) || e % 2 != 0) throw NotInG("determinant is not an even power of p");
    mpz_class s = x.a * x.a + x.b * x.b + x.c * x.c + x.d * x.d;
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(e));
    return std::sqrt(mpq_class(s, scale).get_d());
}

double normalized_norm(const ProjMat& x) {
    mpz_class s = x.a * x.a + x.b * x.b + x.c * x.c + x.d * x.d;
    return std::sqrt(mpq_class(s, x.det()).get_d());
}

std::int64_t Mat64::det() const { return csub(cmul(a, d), cmul(b, c)); }

bool Mat64::operator<(const Mat64& o) const { return std::tie(a, b, c, d) < std::tie(o.a, o.b, o.c, o.d); }

Mat64 mul64(const Mat64& x, const Mat64& y) {
    return {cadd(cmul(x.a, y.a), cmul(x.b, y.c)), cadd(cmul(x.a, y.b), cmul(x.b, y.d)),
            cadd(cmul(x.c, y.a), cmul(x.d, y.c)), cadd(cmul(x.c, y.b), cmul(x.d, y.d))};
}

Mat64 adj64(const Mat64& x) { return {x.d, -x.b, -x.c, x.a}; }
Mat64 neg64(const Mat64& x) { return {-x.a, -x.b, -x.c, -x.d}; }

Mat64 primitive64(const Mat64& x) {
    std::int64_t g = std::gcd(std::gcd(x.a, x.b), std::gcd(x.c, x.d));
    if (g <= 1) return x;
    return {x.a / g, x.b / g, x.c / g, x.d / g};
}

Mat64 sign_canonical64(const Mat64& x, bool* flipped) {
    bool neg = false;
    for (std::int64_t v : {x.a, x.b, x.c, x.d})
        if (v != 0) {
            neg = v < 0;
            break;
        }
    if (flipped) *flipped = neg;
    return neg ? neg64(x) : x;
}

Mat64 to_mat64(const ProjMat& x) { return {to_i64(x.a), to_i64(x.b), to_i64(x.c), to_i64(x.d)}; }
Mat64 to_mat64(const SignedMat& x) { return {to_i64(x.a), to_i64(x.b), to_i64(x.c), to_i64(x.d)}; }
ProjMat to_projmat(const Mat64& x) { return canonicalize(mpz_class(static_cast<long>(x.a)), mpz_class(static_cast<long>(x.b)), mpz_class(static_cast<long>(x.c)), mpz_class(static_cast<long>(x.d))); }
SignedMat to_signedmat(const Mat64& x) { return {mpz_class(static_cast<long>(x.a)), mpz_class(static_cast<long>(x.b)), mpz_class(static_cast<long>(x.c)), mpz_class(static_cast<long>(x.d))}; }

double frob2(const Mat64& x) {
    double a = double(x.a), b = double(x.b), c = double(x.c), d = double(x.d);
    return a * a + b * b + c * c + d * d;
}

}  // namespace heckeops
