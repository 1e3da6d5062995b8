#include "heckeops/opmodel.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include <Eigen/Eigenvalues>

#include "heckeops/errors.hpp"
#include "heckeops/hecke.hpp"
#include "heckeops/parallel.hpp"

namespace heckeops {

// ---------------------------------------------------------------- elements

std::pair<Mat64, int> key_mul(const Mat64& x, const Mat64& y) {
    bool flipped = false;
    Mat64 k = sign_canonical64(primitive64(mul64(x, y)), &flipped);
    return {k, flipped ? -1 : 1};
}

Mat64 key_inv(const Mat64& x) { return adj64(x); }

double key_norm(const Mat64& x) { return std::sqrt(frob2(x) / double(x.det())); }

namespace {

bool is_p_power(std::int64_t n, long p) {
    if (n <= 0) return false;
    while (n % p == 0) n /= p;
    return n == 1;
}

}  // namespace

TruncatedElement TruncatedElement::delta(const Mat64& g, long p, cplx v) {
    TruncatedElement x;
    x.p = p;
    x.add(g, v);
    return x;
}

void TruncatedElement::add(const Mat64& g, cplx v) {
    if (!is_p_power(g.det(), p)) throw NotInG("support keys need a p-power determinant");
    bool flipped = false;
    Mat64 k = sign_canonical64(primitive64(g), &flipped);
    support[k] += flipped ? -v : v;
}

cplx TruncatedElement::at(const Mat64& g) const {
    bool flipped = false;
    Mat64 k = sign_canonical64(primitive64(g), &flipped);
    auto it = support.find(k);
    if (it == support.end()) return 0;
    return flipped ? -it->second : it->second;
}

double TruncatedElement::norm2() const {
    double s = 0;
    for (auto& [k, v] : support) s += std::norm(v);
    return s;
}

TruncatedElement operator+(const TruncatedElement& x, const TruncatedElement& y) {
    TruncatedElement r = x;
    for (auto& [k, v] : y.support) r.support[k] += v;
    r.radius = std::min(x.radius, y.radius);
    r.tail_bound = x.tail_bound + y.tail_bound;
    return r;
}

TruncatedElement operator*(cplx s, const TruncatedElement& x) {
    TruncatedElement r = x;
    for (auto& [k, v] : r.support) v *= s;
    r.tail_bound *= std::abs(s);
    return r;
}

double l2_distance(const TruncatedElement& x, const TruncatedElement& y, double window) {
    double s = 0;
    for (auto& [k, v] : x.support)
        if (key_norm(k) <= window) s += std::norm(v - y.at(k));
    for (auto& [k, v] : y.support)
        if (key_norm(k) <= window && !x.support.count(k)) s += std::norm(v);
    return std::sqrt(s);
}

TruncatedElement convolve(const TruncatedElement& x, const TruncatedElement& y, double out_radius) {
    std::vector<std::pair<Mat64, cplx>> xs(x.support.begin(), x.support.end());
    const std::size_t shards = std::max<std::size_t>(1, std::min<std::size_t>(xs.size(), 32));
    std::vector<std::unordered_map<Mat64, cplx, Mat64Hash>> part(shards);
    parallel_shards(xs.size(), shards, [&](std::size_t s, std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i)
            for (auto& [k, v] : y.support) {
                auto [key, sign] = key_mul(xs[i].first, k);
                part[s][key] += double(sign) * xs[i].second * v;
            }
    });
    TruncatedElement r;
    r.p = x.p;
    r.radius = out_radius;
    std::map<Mat64, cplx> merged;
    for (auto& m : part)
        for (auto& [k, v] : m) merged[k] += v;
    double dropped = 0;
    for (auto& [k, v] : merged) {
        if (key_norm(k) <= out_radius) r.support.emplace(k, v);
        else dropped += std::norm(v);
    }
    const double nx = std::sqrt(x.norm2()), ny = std::sqrt(y.norm2());
    // Bookkeeping estimate, not a theorem: l2 x l2 convolution is not bounded in l2.
    r.tail_bound = nx * y.tail_bound + ny * x.tail_bound + x.tail_bound * y.tail_bound + std::sqrt(dropped);
    return r;
}

TruncatedElement adjoint(const TruncatedElement& x) {
    TruncatedElement r;
    r.p = x.p;
    r.radius = x.radius;
    r.tail_bound = x.tail_bound;
    for (auto& [k, v] : x.support) r.add(key_inv(k), std::conj(v));
    return r;
}

TruncatedElement expect_gamma(const TruncatedElement& x) {
    TruncatedElement r;
    r.p = x.p;
    r.radius = x.radius;
    r.tail_bound = x.tail_bound;
    for (auto& [k, v] : x.support)
        if (k.det() == 1) r.support.emplace(k, v);
    return r;
}

cplx trace(const TruncatedElement& x) { return x.at(Mat64::identity()); }

GammaMatrix to_gamma_matrix(const TruncatedElement& x, double R, Orientation o) {
    for (auto& [k, v] : x.support)
        if (k.det() != 1) throw std::invalid_argument("to_gamma_matrix needs a Gamma-supported element");
    GammaMatrix G;
    G.index = det_ball(1, R);
    const Eigen::Index n = static_cast<Eigen::Index>(G.index.size());
    G.M.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            const auto [key, sign] = o == Orientation::left ? key_mul(G.index[i], key_inv(G.index[j]))
                                                            : key_mul(key_inv(G.index[i]), G.index[j]);
            G.M(i, j) = double(sign) * x.at(key);
        }
    return G;
}

// ---------------------------------------------------------------- support sets

SupportSet SupportSet::double_coset(const DoubleCosetLabel& n) {
    SupportSet s;
    s.kind = Kind::double_coset;
    s.label = n;
    return s;
}

SupportSet SupportSet::left_coset(const ProjMat& sigma) {
    SupportSet s;
    s.kind = Kind::left_coset;
    s.sigma = left_coset_canonical(sigma);
    s.label = label_of(sigma);
    return s;
}

SupportSet SupportSet::product(const ProjMat& sigma1, const ProjMat& sigma2) {
    SupportSet s;
    s.kind = Kind::coset_set;
    s.set = coset_concat(sigma1, sigma2);
    return s;
}

bool SupportSet::contains(const Mat64& g) const {
    switch (kind) {
        case Kind::double_coset: return mpz_class(static_cast<long>(g.det())) == label;
        case Kind::left_coset: return left_coset_canonical(to_projmat(g)) == sigma;
        case Kind::coset_set: return cosetset_member(to_projmat(g), set);
    }
    return false;
}

std::vector<DoubleCosetLabel> SupportSet::labels() const {
    if (kind == Kind::coset_set) return cosetset_labels(set);
    return {label};
}

double SupportSet::density() const { return kind == Kind::double_coset ? ind(label).get_d() : 1.0; }

std::vector<Mat64> support_points(const SupportSet& s, double W) {
    std::vector<Mat64> out;
    for (const auto& n : s.labels()) {
        if (!n.fits_slong_p()) throw Overflow("label too large");
        for (const Mat64& g : det_ball(n.get_si(), W))
            if (s.contains(g)) out.push_back(g);
    }
    std::sort(out.begin(), out.end());
    return out;
}

double coefficient_tail_bound(double W, double density, double distortion, int weight) {
    const double U = W * W / (distortion * distortion);
    const double k = double(weight);
    const double mass = 3 * density * distortion * distortion * 4 / (k - 1) * std::pow((U + 2) / 4, -(k - 1));
    return std::sqrt(mass);
}

// ---------------------------------------------------------------- model

namespace {

SL2RElement lift(const Mat64& m) { return real_lift(m); }

}  // namespace

OperatorModel::OperatorModel(const ModelConfig& cfg) : cfg_(cfg) {
    if (cfg.radius < std::sqrt(2.0)) throw RadiusTooSmall("correction radius below sqrt(2)");
    g0_ = SL2RElement::moving_i_to(cfg.base_point);
    g0inv_ = g0_.inverse();
    {
        const double f = g0_.frob2();
        const double s = 0.5 * (std::sqrt(f + 2) + std::sqrt(std::max(f - 2, 0.0)));
        distortion_ = s * s;
    }
    ball_ = det_ball(1, cfg.radius);
    const std::size_t n = ball_.size();
    e_index_ = static_cast<std::size_t>(std::find(ball_.begin(), ball_.end(), Mat64::identity()) - ball_.begin());
    La_.resize(n); Lb_.resize(n); Lc_.resize(n); Ld_.resize(n);
    Ja_.resize(n); Jb_.resize(n); Jc_.resize(n); Jd_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const SL2RElement g = lift(ball_[i]);
        const SL2RElement L = g0inv_ * g.inverse() * g0_, J = g0inv_ * g * g0_;
        La_[i] = L.a; Lb_[i] = L.b; Lc_[i] = L.c; Ld_[i] = L.d;
        Ja_[i] = J.a; Jb_[i] = J.b; Jc_[i] = J.c; Jd_[i] = J.d;
    }
    const Eigen::Index N = static_cast<Eigen::Index>(n);
    Eigen::MatrixXcd W(N, N);
    for (Eigen::Index l = 0; l < N; ++l)
        for (Eigen::Index k = 0; k < N; ++k) {
            const SL2RElement L{La_[l], Lb_[l], Lc_[l], Ld_[l]}, J{Ja_[k], Jb_[k], Jc_[k], Jd_[k]};
            W(l, k) = coef13_sl2(L * J, cfg.weight);
        }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(W);
    if (es.info() != Eigen::Success) throw RadiusTooSmall("eigendecomposition failed");
    const Eigen::VectorXd& lam = es.eigenvalues();
    min_eig_ = lam.minCoeff();
    max_eig_ = lam.maxCoeff();
    if (min_eig_ < cfg.eig_floor * max_eig_)
        throw RadiusTooSmall("Gram matrix not positive definite at this radius (min eigenvalue " + std::to_string(min_eig_) + ")");
    const Eigen::MatrixXcd& V = es.eigenvectors();
    Eigen::VectorXcd w = V.row(static_cast<Eigen::Index>(e_index_)).adjoint();
    for (Eigen::Index i = 0; i < N; ++i) w(i) /= std::sqrt(lam(i));
    const Eigen::VectorXcd c = V * w;
    cre_.resize(n);
    cim_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        cre_[i] = c(static_cast<Eigen::Index>(i)).real();
        cim_[i] = c(static_cast<Eigen::Index>(i)).imag();
    }
}

cplx OperatorModel::phi(const Mat64& g) const { return coef13_sl2(g0inv_ * lift(g) * g0_, cfg_.weight); }

cplx OperatorModel::t_uncached(const Mat64& theta) const {
    const SL2RElement Th = g0inv_ * lift(theta) * g0_;
    const std::size_t n = ball_.size();
    const int k = cfg_.weight;
    double tre = 0, tim = 0;
    for (std::size_t j = 0; j < n; ++j) {
        // P = Theta J_j; the coefficient of L_l P needs only its trace and b - c.
        const double pa = Th.a * Ja_[j] + Th.b * Jc_[j], pb = Th.a * Jb_[j] + Th.b * Jd_[j];
        const double pc = Th.c * Ja_[j] + Th.d * Jc_[j], pd = Th.c * Jb_[j] + Th.d * Jd_[j];
        double sre = 0, sim = 0;
        for (std::size_t l = 0; l < n; ++l) {
            const double tr = La_[l] * pa + Lb_[l] * pc + Lc_[l] * pb + Ld_[l] * pd;
            const double sk = La_[l] * pb + Lb_[l] * pd - Lc_[l] * pa - Ld_[l] * pc;
            const double den = 2 / (tr * tr + sk * sk);
            const double x = tr * den, y = sk * den;
            double wr, wi;
            if (k == 13) {
                const double x2 = x * x - y * y, y2 = 2 * x * y;
                const double x4 = x2 * x2 - y2 * y2, y4 = 2 * x2 * y2;
                const double x8 = x4 * x4 - y4 * y4, y8 = 2 * x4 * y4;
                const double x12 = x8 * x4 - y8 * y4, y12 = x8 * y4 + y8 * x4;
                wr = x12 * x - y12 * y;
                wi = x12 * y + y12 * x;
            } else {
                const cplx w = std::pow(cplx(x, y), k);
                wr = w.real();
                wi = w.imag();
            }
            // conj(c_l) * w
            sre += cre_[l] * wr + cim_[l] * wi;
            sim += cre_[l] * wi - cim_[l] * wr;
        }
        tre += cre_[j] * sre - cim_[j] * sim;
        tim += cre_[j] * sim + cim_[j] * sre;
    }
    return {tre, tim};
}

cplx OperatorModel::t(const Mat64& theta) const {
    bool flipped = false;
    const Mat64 key = sign_canonical64(primitive64(theta), &flipped);
    {
        std::lock_guard<std::mutex> lock(memo_mutex_);
        auto it = memo_.find(key);
        if (it != memo_.end()) return flipped ? -it->second : it->second;
    }
    const cplx v = t_uncached(key);
    {
        std::lock_guard<std::mutex> lock(memo_mutex_);
        memo_.emplace(key, v);
    }
    return flipped ? -v : v;
}

std::vector<cplx> OperatorModel::t_many(const std::vector<Mat64>& thetas) const {
    std::vector<cplx> out(thetas.size());
    parallel_shards(thetas.size(), std::max<std::size_t>(1, std::min<std::size_t>(thetas.size(), 256)),
                    [&](std::size_t, std::size_t b, std::size_t e) {
                        for (std::size_t i = b; i < e; ++i) out[i] = t(thetas[i]);
                    });
    return out;
}

TruncatedElement OperatorModel::correction() const {
    TruncatedElement x;
    x.p = cfg_.p;
    x.radius = cfg_.radius;
    for (std::size_t i = 0; i < ball_.size(); ++i) x.support.emplace(ball_[i], cplx(cre_[i], cim_[i]));
    return x;
}

double OperatorModel::correction_norm() const {
    double s = 0;
    for (std::size_t i = 0; i < ball_.size(); ++i) s += cre_[i] * cre_[i] + cim_[i] * cim_[i];
    return std::sqrt(s);
}

double OperatorModel::tail_bound(double W, double density) const {
    return coefficient_tail_bound(W, density, distortion_, cfg_.weight);
}

TruncatedElement OperatorModel::tilde_t(const SupportSet& s, double W) const {
    TruncatedElement x;
    x.p = cfg_.p;
    x.radius = W;
    x.tail_bound = tail_bound(W, s.density());
    for (const Mat64& g : support_points(s, W)) x.support.emplace(g, std::conj(phi(g)));
    return x;
}

TruncatedElement OperatorModel::corrected_t(const SupportSet& s, double W) const {
    TruncatedElement x;
    x.p = cfg_.p;
    x.radius = W;
    x.tail_bound = tail_bound(W, s.density());
    const auto pts = support_points(s, W);
    const auto vals = t_many(pts);
    for (std::size_t i = 0; i < pts.size(); ++i) x.support.emplace(pts[i], std::conj(vals[i]));
    return x;
}

const TruncatedElement& OperatorModel::double_coset_t(const DoubleCosetLabel& n, double W) const {
    {
        std::lock_guard<std::mutex> lock(memo_mutex_);
        auto it = tcache_.find({n, W});
        if (it != tcache_.end()) return it->second;
    }
    TruncatedElement x = corrected_t(SupportSet::double_coset(n), W);
    std::lock_guard<std::mutex> lock(memo_mutex_);
    return tcache_.emplace(std::make_pair(n, W), std::move(x)).first->second;
}

TruncatedElement trace_vector_correct(const OperatorModel& model) { return model.correction(); }

// ---------------------------------------------------------------- Hecke maps

TruncatedElement psi_sigma(const ProjMat& sigma, const TruncatedElement& x, const OperatorModel& model, double W, double out_radius) {
    const DoubleCosetLabel n = label_of(sigma);
    if (n == 1) {
        // The double coset is Gamma itself and t^Gamma = delta_e by the trace property.
        return x;
    }
    const TruncatedElement& t = model.double_coset_t(n, W);
    const TruncatedElement tx = convolve(t, x, 1e300);
    const TruncatedElement ts = adjoint(t);
    // Only Gamma-supported products survive the expectation.
    std::vector<std::pair<Mat64, cplx>> us(tx.support.begin(), tx.support.end());
    const std::size_t shards = std::max<std::size_t>(1, std::min<std::size_t>(us.size(), 32));
    std::vector<std::unordered_map<Mat64, cplx, Mat64Hash>> part(shards);
    parallel_shards(us.size(), shards, [&](std::size_t s, std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i)
            for (auto& [k, v] : ts.support) {
                // The raw product has determinant n^2; it lies in Gamma iff its content is n.
                const auto [key, sign] = key_mul(us[i].first, k);
                if (key.det() != 1) continue;
                if (key_norm(key) > out_radius) continue;
                part[s][key] += double(sign) * us[i].second * v;
            }
    });
    TruncatedElement r;
    r.p = x.p;
    r.radius = out_radius;
    for (auto& m : part)
        for (auto& [k, v] : m) r.support[k] += v;
    const double nx = std::sqrt(x.norm2());
    r.tail_bound = 2 * std::sqrt(t.norm2()) * t.tail_bound * nx + x.tail_bound * t.norm2();
    return r;
}

TruncatedElement psi_tilde(const ProjMat& sigma, const TruncatedElement& x, const OperatorModel& model, double W, double out_radius) {
    return cplx(1.0 / gamma_sigma_index(sigma).get_d()) * psi_sigma(sigma, x, model, W, out_radius);
}

Residual psi_composition_check(const ProjMat& sigma1, const ProjMat& sigma2, const TruncatedElement& x,
                               const OperatorModel& model, double W, double out_radius) {
    // Psi_s1(Psi_s2(x)) needs the inner output on a larger window than the final one.
    const double inner = out_radius + W;
    const TruncatedElement lhs = psi_sigma(sigma1, psi_sigma(sigma2, x, model, W, inner), model, W, out_radius);
    const HeckeElement prod = hecke_mul(HeckeElement::basis(label_of(sigma1)), HeckeElement::basis(label_of(sigma2)));
    TruncatedElement rhs;
    rhs.p = x.p;
    double budget = 0;
    const double nx = std::sqrt(x.norm2());
    for (auto& [z, c] : prod.coeffs) {
        const ProjMat sz = canonicalize(mpz_class(1), mpz_class(0), mpz_class(0), z);
        rhs = rhs + cplx(c.get_d()) * psi_sigma(sz, x, model, W, out_radius);
        if (z != 1) budget += std::abs(c.get_d()) * 2 * std::sqrt(ind(z).get_d()) * model.tail_bound(W, ind(z).get_d()) * nx;
    }
    for (const ProjMat* s : {&sigma1, &sigma2}) {
        const DoubleCosetLabel n = label_of(*s);
        if (n != 1) budget += ind(n).get_d() * 2 * std::sqrt(ind(n).get_d()) * model.tail_bound(W, ind(n).get_d()) * nx;
    }
    return {l2_distance(lhs, rhs, out_radius), budget};
}

GammaMatrix build_pi_matrix(const ProjMat& g, double R, const OperatorModel& model) {
    GammaMatrix G;
    G.index = det_ball(1, R);
    const Mat64 gm = to_mat64(g);
    const Eigen::Index n = static_cast<Eigen::Index>(G.index.size());
    std::vector<Mat64> keys;
    std::vector<int> signs;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            auto [k1, s1] = key_mul(key_inv(G.index[i]), gm);
            auto [k2, s2] = key_mul(k1, G.index[j]);
            keys.push_back(k2);
            signs.push_back(s1 * s2);
        }
    const auto vals = model.t_many(keys);
    G.M.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            const std::size_t q = static_cast<std::size_t>(i * n + j);
            G.M(i, j) = double(signs[q]) * vals[q];
        }
    return G;
}

TruncatedElement coset_sum_vector(const ProjMat& sigma, const Mat64& gamma, const OperatorModel& model, double Rs,
                            const std::vector<Mat64>& outputs) {
    const auto reps = right_cosets_of_double_coset(label_of(sigma));
    const auto inner = det_ball(1, Rs);
    const Mat64 ginv = key_inv(gamma);
    TruncatedElement r;
    r.p = model.config().p;
    r.radius = 0;
    for (const Mat64& o : outputs) r.radius = std::max(r.radius, key_norm(o));
    // Collect every coefficient the double sum needs, evaluate them in one batch.
    struct Term { std::size_t out; Mat64 k1; int s1; Mat64 k2; int s2; };
    std::vector<Term> terms;
    std::vector<Mat64> needed;
    for (const auto& rep : reps) {
        const Mat64 th = to_mat64(rep), thinv = key_inv(th);
        for (const Mat64& g3 : inner) {
            auto [a, sa] = key_mul(key_inv(g3), thinv);
            for (std::size_t q = 0; q < outputs.size(); ++q) {
                auto [b1, sb1] = key_mul(key_inv(outputs[q]), th);
                auto [b2, sb2] = key_mul(b1, g3);
                auto [b3, sb3] = key_mul(b2, ginv);
                terms.push_back({q, a, sa, b3, sb1 * sb2 * sb3});
                needed.push_back(a);
                needed.push_back(b3);
            }
        }
    }
    std::sort(needed.begin(), needed.end());
    needed.erase(std::unique(needed.begin(), needed.end()), needed.end());
    model.t_many(needed);
    std::vector<cplx> acc(outputs.size(), 0.0);
    for (const auto& tm : terms) acc[tm.out] += double(tm.s1 * tm.s2) * model.t(tm.k1) * model.t(tm.k2);
    for (std::size_t q = 0; q < outputs.size(); ++q) r.add(outputs[q], acc[q]);
    return r;
}

}  // namespace heckeops

namespace heckeops {

std::vector<NamedResidual> model_residuals(const OperatorModel& model) {
    const long p = model.config().p;
    const double R = model.config().radius, W = R / 2, out = 3.0;
    const ProjMat sp = canonicalize(mpz_class(1), mpz_class(0), mpz_class(0), mpz_class(p));
    const Mat64 spm = to_mat64(sp);
    std::vector<NamedResidual> res;

    {
        const std::vector<Mat64> th1{spm, {1, 1, 0, p}, {p, 1, p - 1, 1}}, th2{{p, 0, 0, 1}, {1, 0, 1, p}};
        const auto ball = det_ball(1, W);
        double worst = 0, budget = 0;
        for (const Mat64& a : th1)
            for (const Mat64& b : th2) {
                std::vector<Mat64> keys;
                std::vector<int> signs;
                for (const Mat64& g : ball) {
                    auto [k1, s1] = key_mul(a, g);
                    auto [k2, s2] = key_mul(key_inv(g), b);
                    keys.push_back(k1);
                    keys.push_back(k2);
                    signs.push_back(s1 * s2);
                }
                const auto v = model.t_many(keys);
                cplx s = 0;
                for (std::size_t i = 0; i < ball.size(); ++i) s += double(signs[i]) * v[2 * i] * v[2 * i + 1];
                auto [ab, sab] = key_mul(a, b);
                worst = std::max(worst, std::abs(s - double(sab) * model.t(ab)));
                // |theta gamma| >= |gamma| / |theta|, and the partner factor is a unit vector.
                budget = std::max(budget, model.tail_bound(W / std::max(key_norm(a), key_norm(b)), 1.0));
            }
        res.push_back({"gamma_sum", {worst, budget}});
    }
    {
        const ProjMat s2 = canonicalize(mpz_class(1), mpz_class(1), mpz_class(0), mpz_class(p));
        const auto a = model.corrected_t(SupportSet::left_coset(sp), W);
        const auto b = model.corrected_t(SupportSet::left_coset(s2), W);
        const auto lhs = convolve(adjoint(a), b, out);
        const auto rhs = model.corrected_t(SupportSet::product(inv(sp), s2), out);
        const double budget = std::sqrt(double(std::max<std::size_t>(rhs.size(), 1))) * 2 * model.tail_bound(W / out, 1.0);
        res.push_back({"coset_product", {l2_distance(lhs, rhs, out), budget}});
    }
    {
        const auto& t = model.double_coset_t(p, W);
        res.push_back({"norm_equals_ind", {std::abs(t.norm2() - ind(p).get_d()), t.tail_bound * t.tail_bound}});
    }
    {
        const auto e = TruncatedElement::delta(Mat64::identity(), p);
        const auto one = psi_tilde(sp, e, model, W, out);
        res.push_back({"unitality", {l2_distance(one, e, out), one.tail_bound}});
    }
    {
        const Mat64 gamma{1, 1, 0, 1};
        const double Rs = R / 4, wout = 2.0;
        const auto direct = psi_sigma(sp, TruncatedElement::delta(key_inv(gamma), p), model, W, wout);
        const auto outputs = det_ball(1, wout);
        const auto expanded = coset_sum_vector(sp, gamma, model, Rs, outputs);
        const double budget = direct.tail_bound + std::sqrt(double(outputs.size())) * ind(p).get_d() * model.tail_bound(Rs / key_norm(spm), 1.0);
        res.push_back({"direct_vs_coset_sum", {l2_distance(direct, expanded, wout), budget}});
    }
    return res;
}

}  // namespace heckeops
