#include "golayae/nn.hpp"

#include <cblas.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace golayae::nn {

namespace {

constexpr double kPi = 3.141592653589793238462643383279;

void require(bool ok, const char* msg) {
    if (!ok) throw std::domain_error(msg);
}

// out[MxN] = a[MxK] * b[KxN] (+ out if accumulate)
void gemm(const double* a, const double* b, double* out, std::size_t m, std::size_t k,
          std::size_t n, bool trans_a = false, bool trans_b = false, double accumulate = 0.0) {
    cblas_dgemm(CblasRowMajor, trans_a ? CblasTrans : CblasNoTrans,
                trans_b ? CblasTrans : CblasNoTrans, static_cast<int>(m), static_cast<int>(n),
                static_cast<int>(k), 1.0, a, static_cast<int>(trans_a ? m : k), b,
                static_cast<int>(trans_b ? k : n), accumulate, out, static_cast<int>(n));
}

double sigmoid(double t) {
    if (t >= 0.0) {
        const double z = std::exp(-t);
        return 1.0 / (1.0 + z);
    }
    const double z = std::exp(t);
    return z / (1.0 + z);
}

} // namespace

// --- Dense -------------------------------------------------------------

Dense::Dense(std::size_t in, std::size_t out)
    : w(in, out), dw(in, out), b(out, 0.0), db(out, 0.0), in_(in), out_(out) {}

void Dense::init_glorot(rng::SplitMix64& g) {
    const double bound = std::sqrt(6.0 / static_cast<double>(in_ + out_));
    for (double& x : w.v) x = g.next_uniform(-bound, bound);
    std::fill(b.begin(), b.end(), 0.0);
}

Tensor Dense::forward(const Tensor& x, bool training) {
    require(x.cols == in_, "Dense::forward: feature count mismatch");
    if (training) x_cache_ = x;
    Tensor y(x.rows, out_);
    gemm(x.v.data(), w.v.data(), y.v.data(), x.rows, in_, out_);
    for (std::size_t i = 0; i < y.rows; ++i) {
        double* r = y.row(i);
        for (std::size_t j = 0; j < out_; ++j) r[j] += b[j];
    }
    return y;
}

Tensor Dense::backward(const Tensor& upstream) {
    require(upstream.cols == out_, "Dense::backward: upstream feature count mismatch");
    require(upstream.rows == x_cache_.rows, "Dense::backward: upstream batch mismatch");
    // dW = X^T U, db = column sums of U, dX = U W^T
    gemm(x_cache_.v.data(), upstream.v.data(), dw.v.data(), in_, x_cache_.rows, out_,
         /*trans_a=*/true);
    std::fill(db.begin(), db.end(), 0.0);
    for (std::size_t i = 0; i < upstream.rows; ++i) {
        const double* r = upstream.row(i);
        for (std::size_t j = 0; j < out_; ++j) db[j] += r[j];
    }
    Tensor dx(upstream.rows, in_);
    gemm(upstream.v.data(), w.v.data(), dx.v.data(), upstream.rows, out_, in_,
         /*trans_a=*/false, /*trans_b=*/true);
    return dx;
}

std::vector<ParamRef> Dense::params(const std::string& prefix) {
    return {{prefix + ".w", w.v.data(), dw.v.data(), w.size()},
            {prefix + ".b", b.data(), db.data(), b.size()}};
}

// --- BatchNorm ----------------------------------------------------------

BatchNorm::BatchNorm(std::size_t features)
    : gamma(features, 1.0), beta(features, 0.0), dgamma(features, 0.0), dbeta(features, 0.0),
      run_mean(features, 0.0), run_var(features, 1.0), features_(features) {}

Tensor BatchNorm::forward(const Tensor& x, bool training) {
    require(x.cols == features_, "BatchNorm::forward: feature count mismatch");
    const std::size_t batch = x.rows;
    Tensor y(batch, features_);
    if (!training) {
        for (std::size_t j = 0; j < features_; ++j) {
            const double inv = 1.0 / std::sqrt(run_var[j] + kEps);
            const double scale = gamma[j] * inv;
            const double shift = beta[j] - run_mean[j] * scale;
            for (std::size_t i = 0; i < batch; ++i) y(i, j) = x(i, j) * scale + shift;
        }
        return y;
    }

    require(batch >= 2, "BatchNorm::forward: training mode requires batch size >= 2");
    std::vector<double> mean(features_, 0.0), var(features_, 0.0);
    for (std::size_t i = 0; i < batch; ++i) {
        const double* r = x.row(i);
        for (std::size_t j = 0; j < features_; ++j) mean[j] += r[j];
    }
    const double inv_b = 1.0 / static_cast<double>(batch);
    for (double& m : mean) m *= inv_b;
    for (std::size_t i = 0; i < batch; ++i) {
        const double* r = x.row(i);
        for (std::size_t j = 0; j < features_; ++j) {
            const double d = r[j] - mean[j];
            var[j] += d * d;
        }
    }
    for (double& s : var) s *= inv_b;

    xhat_cache_ = Tensor(batch, features_);
    inv_std_cache_.resize(features_);
    for (std::size_t j = 0; j < features_; ++j) {
        inv_std_cache_[j] = 1.0 / std::sqrt(var[j] + kEps);
        run_mean[j] = kMomentum * run_mean[j] + (1.0 - kMomentum) * mean[j];
        run_var[j] = kMomentum * run_var[j] + (1.0 - kMomentum) * var[j];
    }
    for (std::size_t i = 0; i < batch; ++i) {
        const double* r = x.row(i);
        double* xh = xhat_cache_.row(i);
        double* yr = y.row(i);
        for (std::size_t j = 0; j < features_; ++j) {
            xh[j] = (r[j] - mean[j]) * inv_std_cache_[j];
            yr[j] = gamma[j] * xh[j] + beta[j];
        }
    }
    return y;
}

Tensor BatchNorm::backward(const Tensor& upstream) {
    require(upstream.rows == xhat_cache_.rows && upstream.cols == features_,
            "BatchNorm::backward: shape mismatch");
    const std::size_t batch = upstream.rows;
    const double inv_b = 1.0 / static_cast<double>(batch);

    std::vector<double> sum_u(features_, 0.0), sum_uxh(features_, 0.0);
    for (std::size_t i = 0; i < batch; ++i) {
        const double* u = upstream.row(i);
        const double* xh = xhat_cache_.row(i);
        for (std::size_t j = 0; j < features_; ++j) {
            sum_u[j] += u[j];
            sum_uxh[j] += u[j] * xh[j];
        }
    }
    for (std::size_t j = 0; j < features_; ++j) {
        dbeta[j] = sum_u[j];
        dgamma[j] = sum_uxh[j];
    }

    Tensor dx(batch, features_);
    for (std::size_t i = 0; i < batch; ++i) {
        const double* u = upstream.row(i);
        const double* xh = xhat_cache_.row(i);
        double* d = dx.row(i);
        for (std::size_t j = 0; j < features_; ++j) {
            d[j] = gamma[j] * inv_std_cache_[j] *
                   (u[j] - inv_b * (sum_u[j] + xh[j] * sum_uxh[j]));
        }
    }
    return dx;
}

std::vector<ParamRef> BatchNorm::params(const std::string& prefix) {
    return {{prefix + ".gamma", gamma.data(), dgamma.data(), gamma.size()},
            {prefix + ".beta", beta.data(), dbeta.data(), beta.size()}};
}

// --- ReLU ----------------------------------------------------------------

Tensor ReLU::forward(const Tensor& x, bool training) {
    Tensor y = x;
    for (double& v : y.v) v = std::max(v, 0.0);
    if (training) out_cache_ = y;
    return y;
}

Tensor ReLU::backward(const Tensor& upstream) {
    require(upstream.size() == out_cache_.size(), "ReLU::backward: shape mismatch");
    Tensor dx = upstream;
    for (std::size_t i = 0; i < dx.size(); ++i)
        if (out_cache_.v[i] <= 0.0) dx.v[i] = 0.0;
    return dx;
}

// --- Clipping ---------------------------------------------------------------

Clipping::Clipping(std::size_t features, double lo, double hi)
    : lo_(features, lo), hi_(features, hi) {
    require(lo <= hi, "Clipping: r_min must not exceed r_max");
}

Clipping::Clipping(std::vector<double> lo, std::vector<double> hi)
    : lo_(std::move(lo)), hi_(std::move(hi)) {
    require(lo_.size() == hi_.size(), "Clipping: range vectors must have equal size");
    for (std::size_t j = 0; j < lo_.size(); ++j)
        require(lo_[j] <= hi_[j], "Clipping: r_min must not exceed r_max");
}

Tensor Clipping::forward(const Tensor& x, bool training) {
    require(x.cols == lo_.size(), "Clipping::forward: feature count mismatch");
    if (training) x_cache_ = x;
    Tensor y(x.rows, x.cols);
    for (std::size_t i = 0; i < x.rows; ++i) {
        const double* r = x.row(i);
        double* yr = y.row(i);
        for (std::size_t j = 0; j < x.cols; ++j)
            yr[j] = std::min(std::max(r[j], lo_[j]), hi_[j]);
    }
    return y;
}

Tensor Clipping::backward(const Tensor& upstream) {
    require(upstream.rows == x_cache_.rows && upstream.cols == x_cache_.cols,
            "Clipping::backward: shape mismatch");
    Tensor dx = upstream;
    for (std::size_t i = 0; i < dx.rows; ++i) {
        const double* xr = x_cache_.row(i);
        double* d = dx.row(i);
        for (std::size_t j = 0; j < dx.cols; ++j)
            if (xr[j] < lo_[j] || xr[j] > hi_[j]) d[j] = 0.0;
    }
    return dx;
}

// --- SoftmaxXent ---------------------------------------------------------

double SoftmaxXent::forward(const Tensor& logits, const std::vector<int>& labels, bool training) {
    require(labels.size() == logits.rows, "SoftmaxXent::forward: one label per sample required");
    const std::size_t batch = logits.rows, classes = logits.cols;
    Tensor probs(batch, classes);
    double loss = 0.0;
    for (std::size_t i = 0; i < batch; ++i) {
        const int label = labels[i];
        require(label >= 0 && static_cast<std::size_t>(label) < classes,
                "SoftmaxXent::forward: label out of range");
        const double* r = logits.row(i);
        double peak = r[0];
        for (std::size_t j = 1; j < classes; ++j) peak = std::max(peak, r[j]);
        double denom = 0.0;
        double* p = probs.row(i);
        for (std::size_t j = 0; j < classes; ++j) {
            p[j] = std::exp(r[j] - peak);
            denom += p[j];
        }
        const double inv = 1.0 / denom;
        for (std::size_t j = 0; j < classes; ++j) p[j] *= inv;
        loss -= std::log(p[static_cast<std::size_t>(label)]);
    }
    if (training) {
        probs_cache_ = std::move(probs);
        labels_cache_ = labels;
    }
    return loss / static_cast<double>(batch);
}

Tensor SoftmaxXent::backward() {
    require(probs_cache_.rows > 0, "SoftmaxXent::backward: no cached forward pass");
    Tensor d = probs_cache_;
    const double inv_b = 1.0 / static_cast<double>(d.rows);
    for (std::size_t i = 0; i < d.rows; ++i) {
        double* r = d.row(i);
        r[static_cast<std::size_t>(labels_cache_[i])] -= 1.0;
        for (std::size_t j = 0; j < d.cols; ++j) r[j] *= inv_b;
    }
    return d;
}

// --- GolayLayer ---------------------------------------------------------

GolayLayerConfig GolayLayerConfig::defaults(int m, double alpha, double beta) {
    GolayLayerConfig c;
    c.m = m;
    c.alpha = alpha;
    c.beta = beta;
    c.permutation.resize(static_cast<std::size_t>(m));
    std::iota(c.permutation.begin(), c.permutation.end(), 1);
    c.shifts.assign(static_cast<std::size_t>(m), 0);
    return c;
}

void GolayLayerConfig::validate() const {
    require(m >= 1 && m <= 20, "GolayLayerConfig: m must be in 1..20");
    require(alpha >= 0.0 && beta >= 0.0, "GolayLayerConfig: gains must be non-negative");
    require(permutation.size() == static_cast<std::size_t>(m),
            "GolayLayerConfig: permutation must have m entries");
    std::vector<bool> seen(static_cast<std::size_t>(m), false);
    for (int v : permutation) {
        require(v >= 1 && v <= m && !seen[static_cast<std::size_t>(v - 1)],
                "GolayLayerConfig: permutation must be a bijection on 1..m");
        seen[static_cast<std::size_t>(v - 1)] = true;
    }
    require(shifts.size() == static_cast<std::size_t>(m),
            "GolayLayerConfig: shifts must have m entries");
    for (long d : shifts) require(d >= 0, "GolayLayerConfig: shifts must be non-negative");
}

GolayLayer::GolayLayer(GolayLayerConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();
    const int m = cfg_.m;
    const std::size_t count = std::size_t{1} << m;
    mono_.resize(count * static_cast<std::size_t>(m));
    pbit_.resize(count * static_cast<std::size_t>(m));
    quad_.resize(count);
    for (std::size_t x = 0; x < count; ++x) {
        int q = 0;
        for (int n = 1; n <= m; ++n) {
            const int pn = cfg_.permutation[static_cast<std::size_t>(n - 1)];
            const int bit = static_cast<int>((x >> (m - pn)) & 1u);
            pbit_[x * static_cast<std::size_t>(m) + static_cast<std::size_t>(n - 1)] =
                static_cast<std::uint8_t>(bit);
        }
        for (int n = 1; n <= m; ++n) {
            const int xa = pbit_[x * static_cast<std::size_t>(m) + static_cast<std::size_t>(n - 1)];
            if (n < m) {
                const int xb = pbit_[x * static_cast<std::size_t>(m) + static_cast<std::size_t>(n)];
                mono_[x * static_cast<std::size_t>(m) + static_cast<std::size_t>(n - 1)] =
                    static_cast<std::uint8_t>((xa + xb) % 2);
                q += xa * xb;
            } else {
                mono_[x * static_cast<std::size_t>(m) + static_cast<std::size_t>(n - 1)] =
                    static_cast<std::uint8_t>(xa);
            }
        }
        quad_[x] = q;
    }
}

Tensor GolayLayer::forward(const Tensor& x, bool training) {
    const int m = cfg_.m;
    const std::size_t count = std::size_t{1} << m;
    require(x.cols == 2 * static_cast<std::size_t>(m) + 1,
            "GolayLayer::forward: expected 2m+1 input features");
    if (training) in_cache_ = x;

    Tensor y(x.rows, 2 * count);
    for (std::size_t i = 0; i < x.rows; ++i) {
        const double* e = x.row(i);            // e_1..e_m
        const double* k = e + m;               // k_0..k_m
        double e0 = 0.0;
        if (cfg_.alpha != 0.0) {
            double acc = 0.0;
            for (int n = 0; n < m; ++n) {
                const double t = 2.0 * cfg_.alpha * e[n];
                acc += std::max(t, 0.0) + std::log1p(std::exp(-std::abs(t))) -
                       0.6931471805599453094172321214582;
            }
            e0 = -acc / (2.0 * cfg_.alpha);
        }
        double* fr = y.row(i);
        double* fi = fr + count;
        for (std::size_t xx = 0; xx < count; ++xx) {
            const std::uint8_t* mono = &mono_[xx * static_cast<std::size_t>(m)];
            const std::uint8_t* pb = &pbit_[xx * static_cast<std::size_t>(m)];
            double amp = e0;
            double phase = k[0];
            for (int n = 0; n < m; ++n) {
                amp += e[n] * mono[n];
                phase += k[n + 1] * pb[n];
            }
            fr[xx] = cfg_.alpha * amp;
            fi[xx] = kPi * quad_[xx] + cfg_.beta * phase;
        }
    }
    return y;
}

Tensor GolayLayer::backward(const Tensor& upstream) {
    const int m = cfg_.m;
    const std::size_t count = std::size_t{1} << m;
    require(upstream.rows == in_cache_.rows && upstream.cols == 2 * count,
            "GolayLayer::backward: shape mismatch");

    Tensor dx(in_cache_.rows, in_cache_.cols, 0.0);
    for (std::size_t i = 0; i < upstream.rows; ++i) {
        const double* e = in_cache_.row(i);
        const double* ur = upstream.row(i);
        const double* ui = ur + count;
        double* de = dx.row(i);
        double* dk = de + m;

        double sum_ur = 0.0, sum_ui = 0.0;
        for (std::size_t xx = 0; xx < count; ++xx) {
            sum_ur += ur[xx];
            sum_ui += ui[xx];
        }
        // d f_i / d k_0 = beta
        dk[0] = cfg_.beta * sum_ui;
        for (int n = 0; n < m; ++n) {
            double mono_dot = 0.0, pbit_dot = 0.0;
            for (std::size_t xx = 0; xx < count; ++xx) {
                mono_dot += ur[xx] * mono_[xx * static_cast<std::size_t>(m) + static_cast<std::size_t>(n)];
                pbit_dot += ui[xx] * pbit_[xx * static_cast<std::size_t>(m) + static_cast<std::size_t>(n)];
            }
            // d f_r / d e_n = alpha * (monomial_n(x) - sigmoid(2 alpha e_n)),
            // the second term being d e_0 / d e_n
            de[n] = cfg_.alpha * (mono_dot - sigmoid(2.0 * cfg_.alpha * e[n]) * sum_ur);
            dk[n + 1] = cfg_.beta * pbit_dot;
        }
    }
    return dx;
}

// --- P2C -----------------------------------------------------------------

std::pair<Tensor, Tensor> P2C::forward(const Tensor& x, const Tensor& y, bool training) {
    require(x.rows == y.rows && x.cols == y.cols, "P2C::forward: shape mismatch");
    Tensor a(x.rows, x.cols), b(x.rows, x.cols);
    Tensor ex(x.rows, x.cols), cy(x.rows, x.cols), sy(x.rows, x.cols);
    for (std::size_t i = 0; i < x.size(); ++i) {
        ex.v[i] = std::exp(x.v[i]);
        cy.v[i] = std::cos(y.v[i]);
        sy.v[i] = std::sin(y.v[i]);
        a.v[i] = ex.v[i] * cy.v[i];
        b.v[i] = ex.v[i] * sy.v[i];
    }
    if (training) {
        ex_ = std::move(ex);
        cosy_ = std::move(cy);
        siny_ = std::move(sy);
    }
    return {std::move(a), std::move(b)};
}

std::pair<Tensor, Tensor> P2C::backward(const Tensor& up_a, const Tensor& up_b) {
    require(up_a.size() == ex_.size() && up_b.size() == ex_.size(),
            "P2C::backward: shape mismatch");
    Tensor dx(up_a.rows, up_a.cols), dy(up_a.rows, up_a.cols);
    for (std::size_t i = 0; i < dx.size(); ++i) {
        const double ec = ex_.v[i] * cosy_.v[i];
        const double es = ex_.v[i] * siny_.v[i];
        dx.v[i] = up_a.v[i] * ec + up_b.v[i] * es;
        dy.v[i] = -up_a.v[i] * es + up_b.v[i] * ec;
    }
    return {std::move(dx), std::move(dy)};
}

// --- AWGN ------------------------------------------------------------------

Tensor awgn_apply(const Tensor& input, double noise_variance, std::uint64_t seed) {
    require(noise_variance >= 0.0, "awgn_apply: noise variance must be non-negative");
    Tensor y = input;
    if (noise_variance == 0.0) return y;
    rng::SplitMix64 g(seed);
    const double stddev = std::sqrt(noise_variance / 2.0);
    std::vector<double> noise(y.size());
    rng::fill_gaussian(g, noise, stddev);
    for (std::size_t i = 0; i < y.size(); ++i) y.v[i] += noise[i];
    return y;
}

// --- optimizers -------------------------------------------------------------

void Sgd::step() {
    for (const ParamRef& p : params_)
        for (std::size_t i = 0; i < p.count; ++i) p.value[i] -= lr_ * p.grad[i];
}

Adam::Adam(double learning_rate, double beta1, double beta2, double eps)
    : lr_(learning_rate), beta1_(beta1), beta2_(beta2), eps_(eps) {}

void Adam::attach(std::vector<ParamRef> params) {
    params_ = std::move(params);
    m_.clear();
    v_.clear();
    for (const ParamRef& p : params_) {
        m_.emplace_back(p.count, 0.0);
        v_.emplace_back(p.count, 0.0);
    }
    t_ = 0;
}

void Adam::step() {
    ++t_;
    const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    for (std::size_t k = 0; k < params_.size(); ++k) {
        const ParamRef& p = params_[k];
        double* m = m_[k].data();
        double* v = v_[k].data();
        for (std::size_t i = 0; i < p.count; ++i) {
            const double g = p.grad[i];
            m[i] = beta1_ * m[i] + (1.0 - beta1_) * g;
            v[i] = beta2_ * v[i] + (1.0 - beta2_) * g * g;
            const double mhat = m[i] / c1;
            const double vhat = v[i] / c2;
            p.value[i] -= lr_ * mhat / (std::sqrt(vhat) + eps_);
        }
    }
}

} // namespace golayae::nn
