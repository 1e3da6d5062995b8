#pragma once

#include <complex>
#include <functional>
#include <map>
#include <vector>

#include "heckeops/hecke.hpp"

namespace heckeops {

using cplxd = std::complex<double>;

struct MoebiusMap {
    ProjMat m;
    cplxd operator()(cplxd z) const;
};

struct HeckeImage {
    std::vector<std::pair<MoebiusMap, long>> maps;  // (map, multiplicity)
};

// One map z -> (a z + b) / d per left coset representative of label n.
HeckeImage hecke_maps(const DoubleCosetLabel& n);

cplxd apply(const HeckeImage& h, const std::function<cplxd(cplxd)>& f, cplxd z);

// Exact image of (Im z)^s: each map scales Im z by a/d, so the eigenvalue is
// sum mult * (a/d)^s. Returned as the multiset of scale factors.
std::map<mpq_class, long> imaginary_part_scales(const HeckeImage& h);
double power_function_eigenvalue(const HeckeImage& h, double s);

// Exact multiset comparison of {Gamma a_i b_j} with sum_z c(z) * (cosets of z).
bool compose_check(const DoubleCosetLabel& n1, const DoubleCosetLabel& n2);

struct EisensteinValue {
    double value = 0;
    double tail = 0;  // bound on the omitted terms
};

// Moves z into the standard fundamental domain by translations and z -> -1/z.
cplxd reduce_to_fundamental_domain(cplxd z);

// 1/2 sum over coprime (c, d), max(|c|, |d|) <= cutoff, of y^s / |c z + d|^(2s).
EisensteinValue eisenstein(cplxd z, double s, int cutoff);

}  // namespace heckeops
