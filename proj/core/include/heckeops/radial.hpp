#pragma once

#include <vector>

#include "heckeops/hecke.hpp"

namespace heckeops {

// t_n as an exact integer polynomial in lambda (coefficient k multiplies lambda^k).
struct RadialPolynomial {
    int n = 0;
    long p = 2;
    std::vector<mpz_class> coeffs;

    double eval(double lambda) const;
};

RadialPolynomial t_poly(int n, long p);

// t_0 = 1, t_1 = lambda, t_2 = lambda^2 - (p+1), t_{n+1} = lambda t_n - p t_{n-1}.
double t_poly_eval(int n, double lambda, long p);
std::vector<double> t_poly_values(int n_max, double lambda, long p);

// Sum of coeff * t_k(lambda) over labels p^k; throws NotRadial otherwise.
double char_phi_lambda(const HeckeElement& x, double lambda, long p);
// Same character as an exact polynomial in lambda with rational coefficients.
std::vector<mpq_class> char_phi_polynomial(const HeckeElement& x, long p);

// Closed walks of length m from the root of the (p+1)-regular tree.
mpz_class tree_moment(int m, long p);

// Density of the spectral measure of chi_1 on [-2 sqrt p, 2 sqrt p].
double km_density(double lambda, long p);
// Integral of lambda^m against the density.
double km_moment(int m, long p, double tol = 1e-13);

double spectral_radius_estimate(long p, int m);

enum class Temperedness { tempered, untempered };
const char* to_string(Temperedness t);

Temperedness multiplier_growth_test(double lambda, long p, int n_max = 40, double tol = 0.01);

// Positive-definiteness kernel of the normalized spherical function
// omega(n) = t_n(lambda) / ind(p^n) on vertices v_i of a geodesic, [omega(|i - j|)].
// Returns its minimal eigenvalue.
double gram_psd_phi_lambda(double lambda, long p, const std::vector<int>& indices);
// The literal matrix [phi_lambda(chi_i chi_j)] = [t_i t_j]; rank one, for comparison.
double gram_product_phi_lambda(double lambda, long p, const std::vector<int>& indices);

}  // namespace heckeops
