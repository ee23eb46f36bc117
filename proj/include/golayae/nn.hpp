#ifndef GOLAYAE_NN_HPP
#define GOLAYAE_NN_HPP

#include "golayae/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace golayae::nn {

// Row-major batch of real values: rows = samples, cols = features.
struct Tensor {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> v;

    Tensor() = default;
    Tensor(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), v(r * c, fill) {}

    double& operator()(std::size_t i, std::size_t j) { return v[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return v[i * cols + j]; }
    std::size_t size() const { return v.size(); }
    double* row(std::size_t i) { return v.data() + i * cols; }
    const double* row(std::size_t i) const { return v.data() + i * cols; }
};

// Non-owning handle to one learnable parameter array and its gradient.
struct ParamRef {
    std::string name;
    double* value = nullptr;
    double* grad = nullptr;
    std::size_t count = 0;
};

// y = x W + b with W of shape [in x out].
class Dense {
public:
    Dense(std::size_t in, std::size_t out);

    void init_glorot(rng::SplitMix64& g);
    Tensor forward(const Tensor& x, bool training);
    // Fills the weight/bias gradients and returns the input gradient.
    Tensor backward(const Tensor& upstream);
    std::vector<ParamRef> params(const std::string& prefix);

    std::size_t in_features() const { return in_; }
    std::size_t out_features() const { return out_; }

    Tensor w, dw;
    std::vector<double> b, db;

private:
    std::size_t in_, out_;
    Tensor x_cache_;
};

// Per-feature batch normalization. Training mode normalizes by batch
// statistics (epsilon 1e-5) and updates running statistics with momentum 0.9;
// inference mode normalizes by the running statistics. Training requires a
// batch of at least two samples.
class BatchNorm {
public:
    explicit BatchNorm(std::size_t features);

    Tensor forward(const Tensor& x, bool training);
    Tensor backward(const Tensor& upstream);
    std::vector<ParamRef> params(const std::string& prefix);

    std::vector<double> gamma, beta, dgamma, dbeta;
    std::vector<double> run_mean, run_var;
    static constexpr double kEps = 1e-5;
    static constexpr double kMomentum = 0.9;

private:
    std::size_t features_;
    Tensor xhat_cache_;
    std::vector<double> inv_std_cache_;
};

class ReLU {
public:
    Tensor forward(const Tensor& x, bool training);
    Tensor backward(const Tensor& upstream);

private:
    Tensor out_cache_;
};

// Elementwise clamp with per-column ranges. Gradient passes through where
// lo <= x <= hi (boundary inclusive) and is zero elsewhere.
class Clipping {
public:
    Clipping(std::size_t features, double lo, double hi);
    Clipping(std::vector<double> lo, std::vector<double> hi);

    Tensor forward(const Tensor& x, bool training);
    Tensor backward(const Tensor& upstream);

    const std::vector<double>& lo() const { return lo_; }
    const std::vector<double>& hi() const { return hi_; }

private:
    std::vector<double> lo_, hi_;
    Tensor x_cache_;
};

// Softmax over logits fused with categorical cross-entropy. forward returns
// the mean loss over the batch; backward returns (softmax - onehot)/B.
class SoftmaxXent {
public:
    double forward(const Tensor& logits, const std::vector<int>& labels, bool training);
    Tensor backward();

    const Tensor& probabilities() const { return probs_cache_; }

private:
    Tensor probs_cache_;
    std::vector<int> labels_cache_;
};

// Fixed (non-learned) structure of the complementary-sequence construction
// used by the Golay layer; amplitudes and phases arrive per sample as inputs.
struct GolayLayerConfig {
    int m = 1;
    double alpha = 0.0;
    double beta = 6.283185307179586476925286766559;
    std::vector<int> permutation;   // pi_1..pi_m
    std::vector<long> shifts;       // d_1..d_m, positions only; no effect on layer values

    static GolayLayerConfig defaults(int m, double alpha, double beta);
    void validate() const;
};

// Differentiable map [B x (2m+1)] -> [B x 2^(m+1)]. Input columns 0..m-1 are
// the amplitudes e_1..e_m and columns m..2m the phases k_0..k_m; the output
// holds the 2^m amplitude exponents f_r in lexicographic x order followed by
// the 2^m phases f_i. The constant term e_0 is computed per sample so the
// synthesized mean power is invariant to the amplitudes.
class GolayLayer {
public:
    explicit GolayLayer(GolayLayerConfig cfg);

    Tensor forward(const Tensor& x, bool training);
    Tensor backward(const Tensor& upstream);

    const GolayLayerConfig& config() const { return cfg_; }

private:
    GolayLayerConfig cfg_;
    // per x in 0..2^m-1: amplitude monomials, permuted bits, quadratic term
    std::vector<std::uint8_t> mono_;  // [2^m x m] (x_{pi_n} + x_{pi_{n+1}})_2, last col x_{pi_m}
    std::vector<std::uint8_t> pbit_;  // [2^m x m] x_{pi_n}
    std::vector<int> quad_;           // [2^m] sum_{n<m} x_{pi_n} x_{pi_{n+1}}
    Tensor in_cache_;
};

// Polar-to-Cartesian: a = e^x cos(y), b = e^x sin(y).
class P2C {
public:
    std::pair<Tensor, Tensor> forward(const Tensor& x, const Tensor& y, bool training);
    std::pair<Tensor, Tensor> backward(const Tensor& up_a, const Tensor& up_b);

private:
    Tensor ex_, cosy_, siny_;
};

// Adds independent zero-mean Gaussian noise of variance noise_variance/2 to
// every entry (real and imaginary components interleaved by convention).
// The backward map of the noise layer is the identity.
Tensor awgn_apply(const Tensor& input, double noise_variance, std::uint64_t seed);

class Sgd {
public:
    explicit Sgd(double learning_rate) : lr_(learning_rate) {}
    void attach(std::vector<ParamRef> params) { params_ = std::move(params); }
    void step();

private:
    double lr_;
    std::vector<ParamRef> params_;
};

class Adam {
public:
    explicit Adam(double learning_rate, double beta1 = 0.9, double beta2 = 0.999,
                  double eps = 1e-8);
    void attach(std::vector<ParamRef> params);
    void step();

private:
    double lr_, beta1_, beta2_, eps_;
    long t_ = 0;
    std::vector<ParamRef> params_;
    std::vector<std::vector<double>> m_, v_;
};

// --- gradient verification -------------------------------------------------
//
// Each check builds the layer at a random interior point, probes it with a
// fixed random linear loss J = sum c_i * out_i, and compares the analytic
// backward pass against central finite differences (step h) over all inputs
// and learnable parameters. Returns the max relative error
// |analytic - numeric| / max(|analytic|, |numeric|, 1).
double gradcheck_dense(std::uint64_t seed, double h = 1e-6);
double gradcheck_batchnorm(std::uint64_t seed, double h = 1e-6);
double gradcheck_softmax_xent(std::uint64_t seed, double h = 1e-6);
double gradcheck_golay(int m, double alpha, double beta, std::uint64_t seed, double h = 1e-6);
double gradcheck_p2c(std::uint64_t seed, double h = 1e-6);
// Interior points only; the analytic gradient there is the upstream itself,
// so the comparison is exact and the returned error is an absolute one.
double gradcheck_clipping_interior(std::uint64_t seed);

struct GradCheckRow {
    std::string layer;
    double max_rel_err;
};
std::vector<GradCheckRow> gradcheck_all(std::uint64_t seed);

} // namespace golayae::nn

#endif
