#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "heckeops/projmat.hpp"

namespace heckeops {

// Determinant of the primitive representative; classifies Gamma g Gamma because the
// Smith form of a primitive matrix is diag(1, n).
using DoubleCosetLabel = mpz_class;

// Gamma g  ->  (a, b; 0, d) with a > 0, 0 <= b < d.
ProjMat left_coset_canonical(const ProjMat& g);
// g Gamma  ->  lower triangular (a, 0; c, d), the transpose of the left form of g^T.
ProjMat right_coset_canonical(const ProjMat& g);

std::vector<ProjMat> left_cosets_of_double_coset(const DoubleCosetLabel& n);
std::vector<ProjMat> right_cosets_of_double_coset(const DoubleCosetLabel& n);

// Number of one-sided cosets in the double coset of label n (Dedekind psi).
mpz_class ind(const DoubleCosetLabel& n);

// [Gamma : Gamma_sigma] by index arithmetic, and independently by the size of the
// orbit of sigma*Gamma under left multiplication by the generators S and T.
mpz_class gamma_sigma_index(const ProjMat& sigma);
std::size_t gamma_sigma_index_orbit(const ProjMat& sigma);

// The point set sigma1 * Gamma * sigma2. Stored as the canonical right coset
// sigma1*Gamma and the canonical left coset Gamma*sigma2; together these determine the
// set uniquely because the normalizer of Gamma in PGL2(Q)+ is Gamma itself.
struct CosetSet {
    ProjMat left;   // representative of sigma1*Gamma
    ProjMat right;  // representative of Gamma*sigma2
    bool operator==(const CosetSet& o) const { return left == o.left && right == o.right; }
    bool operator<(const CosetSet& o) const { return left < o.left || (left == o.left && right < o.right); }
};

CosetSet coset_concat(const ProjMat& sigma1, const ProjMat& sigma2);
bool cosetset_member(const ProjMat& g, const CosetSet& s);

// Labels that can occur in sigma1*Gamma*sigma2.
std::vector<DoubleCosetLabel> cosetset_labels(const CosetSet& s);

// A union term: either a translate sigma1*Gamma*sigma2 or a whole double coset.
using CosetUnionItem = std::variant<CosetSet, DoubleCosetLabel>;

// Decides equality of two disjoint unions on the ball {normalized norm <= radius} over
// all compatible labels, together with equality of total densities (one translate of
// Gamma has density 1, a double coset of label n has density ind(n)). Throws
// NotDisjoint when a ball element lies in two sets of the same side.
bool union_relation_holds(const std::vector<CosetUnionItem>& lhs, const std::vector<CosetUnionItem>& rhs, double radius);

// Primitive integer matrices of determinant n with ||M||_F^2 <= radius^2 * n, one per
// projective class (sign canonical), sorted.
std::vector<Mat64> det_ball(std::int64_t n, double radius);

}  // namespace heckeops
