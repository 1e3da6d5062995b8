#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>

#include <gmpxx.h>

namespace heckeops {

// Primitive integer representative of a class in PGL2(Q)+. The sign rule (first
// nonzero of a,b,c,d positive) makes equality of classes equality of fields.
struct ProjMat {
    mpz_class a{1}, b{0}, c{0}, d{1};

    mpz_class det() const { return a * d - b * c; }
    static ProjMat identity() { return {}; }

    bool operator==(const ProjMat& o) const { return a == o.a && b == o.b && c == o.c && d == o.d; }
    bool operator!=(const ProjMat& o) const { return !(*this == o); }
    bool operator<(const ProjMat& o) const;

    std::string str() const;  // "a b c d"
};

std::ostream& operator<<(std::ostream& os, const ProjMat& m);

// Genuine (not projectively reduced) primitive integer matrix with positive
// determinant. It stands for the real unimodular matrix M/sqrt(det M), so the sign
// of the entries carries the Z/2 cover information.
struct SignedMat {
    mpz_class a{1}, b{0}, c{0}, d{1};

    mpz_class det() const { return a * d - b * c; }
    static SignedMat identity() { return {}; }
    bool operator==(const SignedMat& o) const { return a == o.a && b == o.b && c == o.c && d == o.d; }
    bool operator<(const SignedMat& o) const;
};

ProjMat canonicalize(const mpq_class& a, const mpq_class& b, const mpq_class& c, const mpq_class& d);
ProjMat canonicalize(const mpz_class& a, const mpz_class& b, const mpz_class& c, const mpz_class& d);
ProjMat make_projmat(long a, long b, long c, long d);
ProjMat parse_projmat(const std::string& text);  // "a b c d", rationals allowed ("1/2")

ProjMat mul(const ProjMat& x, const ProjMat& y);
ProjMat inv(const ProjMat& x);
ProjMat transpose(const ProjMat& x);
bool is_in_gamma(const ProjMat& x);
bool is_in_G(const ProjMat& x, long p);

// Double coset label of the class: the determinant of the primitive representative.
mpz_class label_of(const ProjMat& x);

SignedMat make_signed(long a, long b, long c, long d);
SignedMat to_signed(const ProjMat& x);
ProjMat to_proj(const SignedMat& x);
SignedMat smul(const SignedMat& x, const SignedMat& y);
SignedMat sinv(const SignedMat& x);
SignedMat sneg(const SignedMat& x);
bool is_canonical_sign(const SignedMat& x);

// Frobenius norm of x/p^m where det x = p^{2m}.
double hs_norm(const SignedMat& x, long p);
// Frobenius norm of x/sqrt(det x); defined on all of PGL2(Q)+.
double normalized_norm(const ProjMat& x);

// v_p(n) and whether n is a pure power of p (n >= 1).
int p_valuation(mpz_class n, long p);
bool is_power_of(const mpz_class& n, long p, int* exponent = nullptr);

// Fixed-width 2x2 integer matrix used by the numeric layers. All arithmetic is
// overflow checked and throws heckeops::Overflow rather than wrapping.
struct Mat64 {
    std::int64_t a = 1, b = 0, c = 0, d = 1;

    std::int64_t det() const;
    bool operator==(const Mat64& o) const { return a == o.a && b == o.b && c == o.c && d == o.d; }
    bool operator<(const Mat64& o) const;
    static Mat64 identity() { return {}; }
};

Mat64 mul64(const Mat64& x, const Mat64& y);  // plain product, no reduction
Mat64 adj64(const Mat64& x);                  // adjugate (inverse up to det)
Mat64 neg64(const Mat64& x);
// Divides out the positive gcd of the entries.
Mat64 primitive64(const Mat64& x);
// Flips the sign so the first nonzero entry is positive; reports whether it flipped.
Mat64 sign_canonical64(const Mat64& x, bool* flipped = nullptr);
Mat64 to_mat64(const ProjMat& x);
Mat64 to_mat64(const SignedMat& x);
ProjMat to_projmat(const Mat64& x);
SignedMat to_signedmat(const Mat64& x);
double frob2(const Mat64& x);

struct Mat64Hash {
    std::size_t operator()(const Mat64& m) const noexcept {
        std::size_t h = std::hash<std::int64_t>{}(m.a);
        for (std::int64_t v : {m.b, m.c, m.d}) h ^= std::hash<std::int64_t>{}(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    }
};

}  // namespace heckeops
