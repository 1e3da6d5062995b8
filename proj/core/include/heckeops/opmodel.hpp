#pragma once

#include <complex>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "heckeops/cosets.hpp"
#include "heckeops/dseries.hpp"

namespace heckeops {

// Finitely supported function on the Z/2 cover of PGL2(Z[1/p])+. Keys are sign-canonical
// primitive integer matrices with determinant a power of p; the coefficient of the
// opposite lift -g is implicitly the negative of the stored one (pi(-I) = -1).
struct TruncatedElement {
    long p = 2;
    std::map<Mat64, cplx> support;
    double radius = 0;      // normalized-norm ball that the support is known to cover
    double tail_bound = 0;  // l2 mass known to lie outside the support

    static TruncatedElement delta(const Mat64& g, long p, cplx v = 1.0);

    // Adds v at the genuine lift g; flips the sign of v when g is not sign canonical.
    void add(const Mat64& g, cplx v);
    cplx at(const Mat64& g) const;
    double norm2() const;  // sum |x(g)|^2 over the support
    std::size_t size() const { return support.size(); }
};

TruncatedElement operator+(const TruncatedElement& x, const TruncatedElement& y);
TruncatedElement operator*(cplx s, const TruncatedElement& x);
// l2 distance of x and y restricted to keys with normalized norm <= window.
double l2_distance(const TruncatedElement& x, const TruncatedElement& y, double window);

TruncatedElement convolve(const TruncatedElement& x, const TruncatedElement& y, double out_radius);
TruncatedElement adjoint(const TruncatedElement& x);
TruncatedElement expect_gamma(const TruncatedElement& x);
cplx trace(const TruncatedElement& x);

// Genuine products and inverses of keys in the cover: (sign-canonical key, sign).
std::pair<Mat64, int> key_mul(const Mat64& x, const Mat64& y);
Mat64 key_inv(const Mat64& x);
double key_norm(const Mat64& x);  // Frobenius norm of x / sqrt(det x)

struct GammaMatrix {
    std::vector<Mat64> index;  // sorted Gamma ball
    Eigen::MatrixXcd M;
};

enum class Orientation {
    left,   // M[g1, g2] = x(g1 g2^-1): left convolution by x
    right,  // M[g1, g2] = x(g1^-1 g2): Gram matrix of the orbit vectors pi(g) eta
};

GammaMatrix to_gamma_matrix(const TruncatedElement& x, double R, Orientation o = Orientation::left);

// Sets on which t-elements are supported.
struct SupportSet {
    enum class Kind { double_coset, left_coset, coset_set } kind = Kind::double_coset;
    DoubleCosetLabel label = 1;  // double_coset
    ProjMat sigma;               // left_coset: Gamma sigma
    CosetSet set;                // coset_set: sigma1 Gamma sigma2

    static SupportSet double_coset(const DoubleCosetLabel& n);
    static SupportSet left_coset(const ProjMat& sigma);
    static SupportSet product(const ProjMat& sigma1, const ProjMat& sigma2);

    bool contains(const Mat64& g) const;
    std::vector<DoubleCosetLabel> labels() const;
    double density() const;  // number of translates of Gamma making up the set
};

// Sign-canonical elements of the set with normalized norm <= W, sorted.
std::vector<Mat64> support_points(const SupportSet& s, double W);

// A-priori l2 tail of the evaluation-vector coefficients outside the ball of radius
// W, from |phi(g)| = ((|g0^-1 g g0|^2 + 2) / 4)^(-k/2) and the lattice count
// #{|g| <= r} ~ 3 density r^2.
double coefficient_tail_bound(double W, double density, double distortion, int weight = 13);

struct ModelConfig {
    long p = 2;
    double radius = 10;           // Gamma ball used for the correction
    cplx base_point{0.5, 2.0};    // evaluation point of eta in the upper half plane
    int weight = 13;
    double eig_floor = 1e-10;     // relative floor below which the Gram is rejected
};

// Evaluation-vector coefficients phi(g) = <pi(g) eta, eta> together with the
// trace-vector correction xi = sum_k c_k pi(k) eta, c = W^-1/2 e, where
// W[l, k] = phi(l^-1 k) on the Gamma ball.
class OperatorModel {
public:
    explicit OperatorModel(const ModelConfig& cfg);

    const ModelConfig& config() const { return cfg_; }
    const std::vector<Mat64>& gamma_ball() const { return ball_; }
    double min_eigenvalue() const { return min_eig_; }
    double max_eigenvalue() const { return max_eig_; }
    double distortion() const { return distortion_; }  // |g0|_op^2

    cplx phi(const Mat64& g) const;
    // Corrected coefficient t(theta) = <pi(theta) xi, xi>; memoized.
    cplx t(const Mat64& theta) const;
    std::vector<cplx> t_many(const std::vector<Mat64>& thetas) const;

    TruncatedElement correction() const;  // sum c_k k on the Gamma ball
    double correction_norm() const;

    // sum_{theta in S, |theta| <= W} conj(phi(theta)) theta
    TruncatedElement tilde_t(const SupportSet& s, double W) const;
    // sum_{theta in S, |theta| <= W} conj(t(theta)) theta
    TruncatedElement corrected_t(const SupportSet& s, double W) const;

    double tail_bound(double W, double density) const;

    // corrected_t on the double coset of label n, cached per (n, W).
    const TruncatedElement& double_coset_t(const DoubleCosetLabel& n, double W) const;

private:
    cplx t_uncached(const Mat64& theta) const;

    ModelConfig cfg_;
    SL2RElement g0_, g0inv_;
    double distortion_ = 1;
    std::vector<Mat64> ball_;
    std::size_t e_index_ = 0;
    std::vector<double> La_, Lb_, Lc_, Ld_;  // g0^-1 l^-1 g0
    std::vector<double> Ja_, Jb_, Jc_, Jd_;  // g0^-1 j g0
    std::vector<double> cre_, cim_;
    double min_eig_ = 0, max_eig_ = 0;
    mutable std::mutex memo_mutex_;
    mutable std::unordered_map<Mat64, cplx, Mat64Hash> memo_;
    mutable std::map<std::pair<DoubleCosetLabel, double>, TruncatedElement> tcache_;
};

TruncatedElement trace_vector_correct(const OperatorModel& model);

// Psi_sigma(x) = E(t x t^*) with t the corrected element on the double coset of sigma,
// truncated to the window W. Psi_sigma(1) = [Gamma : Gamma_sigma].
TruncatedElement psi_sigma(const ProjMat& sigma, const TruncatedElement& x, const OperatorModel& model, double W, double out_radius);
// Unital version Psi_sigma / [Gamma : Gamma_sigma].
TruncatedElement psi_tilde(const ProjMat& sigma, const TruncatedElement& x, const OperatorModel& model, double W, double out_radius);

struct Residual {
    double value = 0;
    double budget = 0;
    bool within(double safety = 10) const { return value <= safety * budget; }
};

// || Psi_s1 Psi_s2 (x) - sum_z c(s1, s2, z) Psi_z (x) || on the output window, with
// c taken from the Hecke product.
Residual psi_composition_check(const ProjMat& sigma1, const ProjMat& sigma2, const TruncatedElement& x,
                               const OperatorModel& model, double W, double out_radius);

// Matrix [t(g1^-1 g g2)] over the Gamma ball of radius R.
GammaMatrix build_pi_matrix(const ProjMat& g, double R, const OperatorModel& model);

// The right-translation side of the two Hecke map formulas: the vector
// sum_i pi(s_i sigma) rho(gamma) pi(s_i sigma)^* delta_e evaluated on `outputs`, with the
// inner Gamma sum truncated to the ball of radius Rs.
TruncatedElement coset_sum_vector(const ProjMat& sigma, const Mat64& gamma, const OperatorModel& model, double Rs,
                            const std::vector<Mat64>& outputs);

// The identities a faithful model satisfies exactly, measured at one radius for
// sigma = diag(1, p): the Gamma-sum identity sum_gamma t(a gamma) t(gamma^-1 b) = t(a b),
// the coset product (t^{Gamma s})^* t^{Gamma s'} = t^{s^-1 Gamma s'}, the norm
// ||t^{Gamma s Gamma}||^2 = ind, unitality of Psi~ and agreement of the expectation and
// translation formulas for Psi. Each residual carries its a-priori tail budget.
struct NamedResidual {
    std::string name;
    Residual r;
};
std::vector<NamedResidual> model_residuals(const OperatorModel& model);

}  // namespace heckeops
