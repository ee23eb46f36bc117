#include "golayae/autoencoder.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace golayae::ae {

namespace {

using nn::Tensor;

constexpr std::uint64_t kRoleInit = 0x11;
constexpr std::uint64_t kRoleMessages = 0x22;
constexpr std::uint64_t kRoleNoise = 0x33;

// (f_r | f_i) halves -> interleaved (re0, im0, re1, im1, ...)
Tensor interleave(const Tensor& a, const Tensor& b) {
    Tensor out(a.rows, 2 * a.cols);
    for (std::size_t i = 0; i < a.rows; ++i) {
        const double* ra = a.row(i);
        const double* rb = b.row(i);
        double* ro = out.row(i);
        for (std::size_t j = 0; j < a.cols; ++j) {
            ro[2 * j] = ra[j];
            ro[2 * j + 1] = rb[j];
        }
    }
    return out;
}

std::pair<Tensor, Tensor> deinterleave(const Tensor& x) {
    Tensor a(x.rows, x.cols / 2), b(x.rows, x.cols / 2);
    for (std::size_t i = 0; i < x.rows; ++i) {
        const double* rx = x.row(i);
        double* ra = a.row(i);
        double* rb = b.row(i);
        for (std::size_t j = 0; j < a.cols; ++j) {
            ra[j] = rx[2 * j];
            rb[j] = rx[2 * j + 1];
        }
    }
    return {std::move(a), std::move(b)};
}

Tensor concat_halves(const Tensor& a, const Tensor& b) {
    Tensor out(a.rows, a.cols + b.cols);
    for (std::size_t i = 0; i < a.rows; ++i) {
        std::copy(a.row(i), a.row(i) + a.cols, out.row(i));
        std::copy(b.row(i), b.row(i) + b.cols, out.row(i) + a.cols);
    }
    return out;
}

std::pair<Tensor, Tensor> split_halves(const Tensor& x) {
    const std::size_t half = x.cols / 2;
    Tensor a(x.rows, half), b(x.rows, half);
    for (std::size_t i = 0; i < x.rows; ++i) {
        std::copy(x.row(i), x.row(i) + half, a.row(i));
        std::copy(x.row(i) + half, x.row(i) + x.cols, b.row(i));
    }
    return {std::move(a), std::move(b)};
}

} // namespace

std::vector<int> NetworkConfig::effective_permutation() const {
    if (!permutation.empty()) return permutation;
    std::vector<int> p(static_cast<std::size_t>(m));
    std::iota(p.begin(), p.end(), 1);
    return p;
}

void NetworkConfig::validate() const {
    if (S < 1 || S > 24) throw std::domain_error("NetworkConfig: S must be in 1..24");
    if (m < 1 || m > 16) throw std::domain_error("NetworkConfig: m must be in 1..16");
    if (alpha != 0.0 && alpha != 1.0)
        throw std::domain_error("NetworkConfig: alpha must be 0 or 1");
    if (beta < 0.0) throw std::domain_error("NetworkConfig: beta must be non-negative");
    if (tx_hidden.empty() || rx_hidden.empty())
        throw std::domain_error("NetworkConfig: hidden layer lists must be non-empty");
    if (clip_e_lo > clip_e_hi || clip_k_lo > clip_k_hi)
        throw std::domain_error("NetworkConfig: clipping ranges must be ordered");
    const auto perm = effective_permutation();
    std::vector<bool> seen(static_cast<std::size_t>(m), false);
    for (int v : perm) {
        if (v < 1 || v > m || seen[static_cast<std::size_t>(v - 1)])
            throw std::domain_error("NetworkConfig: permutation must be a bijection on 1..m");
        seen[static_cast<std::size_t>(v - 1)] = true;
    }
}

void TrainingConfig::validate() const {
    if (batch_size < 2)
        throw std::domain_error("TrainingConfig: batch size must be >= 2 for batch normalization");
    if (learning_rate <= 0.0) throw std::domain_error("TrainingConfig: learning rate must be positive");
    if (noise_variance < 0.0)
        throw std::domain_error("TrainingConfig: noise variance must be non-negative");
    if (iterations < 0) throw std::domain_error("TrainingConfig: iterations must be non-negative");
}

Network::Network(NetworkConfig cfg, std::uint64_t init_seed)
    : clip(0, 0.0, 0.0),
      golay(nn::GolayLayerConfig::defaults(1, 0.0, 1.0)),
      cfg_(std::move(cfg)) {
    cfg_.validate();
    const std::size_t params_out = 2 * static_cast<std::size_t>(cfg_.m) + 1;

    // per-column clipping: e columns then k columns
    std::vector<double> lo(params_out), hi(params_out);
    for (std::size_t j = 0; j < params_out; ++j) {
        const bool is_e = j < static_cast<std::size_t>(cfg_.m);
        lo[j] = is_e ? cfg_.clip_e_lo : cfg_.clip_k_lo;
        hi[j] = is_e ? cfg_.clip_e_hi : cfg_.clip_k_hi;
    }
    clip = nn::Clipping(std::move(lo), std::move(hi));

    nn::GolayLayerConfig gcfg;
    gcfg.m = cfg_.m;
    gcfg.alpha = cfg_.alpha;
    gcfg.beta = cfg_.beta;
    gcfg.permutation = cfg_.effective_permutation();
    gcfg.shifts.assign(static_cast<std::size_t>(cfg_.m), 0);
    golay = nn::GolayLayer(gcfg);

    rng::SplitMix64 g(init_seed);
    std::size_t width = static_cast<std::size_t>(cfg_.S);
    for (std::size_t h : cfg_.tx_hidden) {
        tx_dense.emplace_back(width, h);
        tx_bn.emplace_back(h);
        tx_relu.emplace_back();
        width = h;
    }
    tx_dense.emplace_back(width, params_out);

    width = 2 * cfg_.subcarriers();
    for (std::size_t h : cfg_.rx_hidden) {
        rx_dense.emplace_back(width, h);
        rx_bn.emplace_back(h);
        rx_relu.emplace_back();
        width = h;
    }
    rx_dense.emplace_back(width, static_cast<std::size_t>(cfg_.class_count()));
    rx_bn.emplace_back(static_cast<std::size_t>(cfg_.class_count()));

    for (auto& d : tx_dense) d.init_glorot(g);
    for (auto& d : rx_dense) d.init_glorot(g);
}

nn::Tensor Network::tx_forward(const Tensor& bits, bool training) {
    Tensor t = bits;
    for (std::size_t i = 0; i < tx_bn.size(); ++i) {
        t = tx_dense[i].forward(t, training);
        t = tx_bn[i].forward(t, training);
        t = tx_relu[i].forward(t, training);
    }
    t = tx_dense.back().forward(t, training);
    t = clip.forward(t, training);
    t = golay.forward(t, training);
    auto [fr, fi] = split_halves(t);
    auto [a, b] = p2c.forward(fr, fi, training);
    return interleave(a, b);
}

nn::Tensor Network::rx_forward(const Tensor& features, bool training) {
    Tensor t = features;
    for (std::size_t i = 0; i < rx_relu.size(); ++i) {
        t = rx_dense[i].forward(t, training);
        t = rx_bn[i].forward(t, training);
        t = rx_relu[i].forward(t, training);
    }
    t = rx_dense.back().forward(t, training);
    return rx_bn.back().forward(t, training);
}

nn::Tensor Network::rx_backward(const Tensor& dlogits) {
    Tensor d = rx_bn.back().backward(dlogits);
    d = rx_dense.back().backward(d);
    for (std::size_t i = rx_relu.size(); i-- > 0;) {
        d = rx_relu[i].backward(d);
        d = rx_bn[i].backward(d);
        d = rx_dense[i].backward(d);
    }
    return d;
}

void Network::tx_backward(const Tensor& dfeatures) {
    auto [up_a, up_b] = deinterleave(dfeatures);
    auto [dfr, dfi] = p2c.backward(up_a, up_b);
    Tensor d = concat_halves(dfr, dfi);
    d = golay.backward(d);
    d = clip.backward(d);
    d = tx_dense.back().backward(d);
    for (std::size_t i = tx_relu.size(); i-- > 0;) {
        d = tx_relu[i].backward(d);
        d = tx_bn[i].backward(d);
        d = tx_dense[i].backward(d);
    }
}

std::vector<nn::ParamRef> Network::params() {
    std::vector<nn::ParamRef> out;
    const auto add = [&out](std::vector<nn::ParamRef> refs) {
        for (auto& r : refs) out.push_back(std::move(r));
    };
    for (std::size_t i = 0; i < tx_dense.size(); ++i)
        add(tx_dense[i].params("tx.dense." + std::to_string(i)));
    for (std::size_t i = 0; i < tx_bn.size(); ++i)
        add(tx_bn[i].params("tx.bn." + std::to_string(i)));
    for (std::size_t i = 0; i < rx_dense.size(); ++i)
        add(rx_dense[i].params("rx.dense." + std::to_string(i)));
    for (std::size_t i = 0; i < rx_bn.size(); ++i)
        add(rx_bn[i].params("rx.bn." + std::to_string(i)));
    return out;
}

int bits_to_class(const std::vector<int>& bits) {
    int cls = 0;
    for (int b : bits) {
        if (b != 0 && b != 1) throw std::domain_error("bits_to_class: entries must be 0 or 1");
        cls = (cls << 1) | b;
    }
    return cls;
}

std::vector<int> class_to_bits(int cls, int S) {
    if (cls < 0 || cls >= (1 << S)) throw std::domain_error("class_to_bits: class out of range");
    std::vector<int> bits(static_cast<std::size_t>(S));
    for (int j = 0; j < S; ++j) bits[static_cast<std::size_t>(j)] = (cls >> (S - 1 - j)) & 1;
    return bits;
}

seqcore::ComplexSequence row_to_sequence(const Tensor& features, std::size_t row) {
    std::vector<seqcore::cplx> coeffs(features.cols / 2);
    const double* r = features.row(row);
    for (std::size_t j = 0; j < coeffs.size(); ++j)
        coeffs[j] = seqcore::cplx(r[2 * j], r[2 * j + 1]);
    return seqcore::ComplexSequence(std::move(coeffs));
}

seqcore::ComplexSequence encode(const std::vector<int>& bits, Network& net) {
    if (bits.size() != static_cast<std::size_t>(net.config().S))
        throw std::domain_error("encode: expected S bits");
    Tensor in(1, bits.size());
    for (std::size_t j = 0; j < bits.size(); ++j) {
        if (bits[j] != 0 && bits[j] != 1) throw std::domain_error("encode: bits must be 0 or 1");
        in(0, j) = static_cast<double>(bits[j]);
    }
    const Tensor out = net.tx_forward(in, false);
    return row_to_sequence(out, 0);
}

int decode(const seqcore::ComplexSequence& received, Network& net) {
    if (received.length() != net.config().subcarriers())
        throw std::domain_error("decode: expected 2^m subcarrier values");
    Tensor in(1, 2 * received.length());
    for (std::size_t j = 0; j < received.length(); ++j) {
        in(0, 2 * j) = received[j].real();
        in(0, 2 * j + 1) = received[j].imag();
    }
    return decode_batch(in, net)[0];
}

nn::Tensor encode_batch(const Tensor& bits, Network& net) {
    return net.tx_forward(bits, false);
}

std::vector<int> decode_batch(const Tensor& features, Network& net) {
    const Tensor logits = net.rx_forward(features, false);
    std::vector<int> classes(logits.rows);
    for (std::size_t i = 0; i < logits.rows; ++i) {
        const double* r = logits.row(i);
        std::size_t best = 0;
        for (std::size_t j = 1; j < logits.cols; ++j)
            if (r[j] > r[best]) best = j;
        classes[i] = static_cast<int>(best);
    }
    return classes;
}

TrainResult train(Network& net, const TrainingConfig& cfg, void (*progress)(long, double),
                  long progress_every) {
    cfg.validate();
    const int S = net.config().S;
    const std::size_t batch = cfg.batch_size;

    nn::Adam opt(cfg.learning_rate);
    opt.attach(net.params());

    TrainResult result;
    result.loss_history.reserve(static_cast<std::size_t>(cfg.iterations));

    Tensor bits(batch, static_cast<std::size_t>(S));
    std::vector<int> labels(batch);
    for (long it = 0; it < cfg.iterations; ++it) {
        rng::SplitMix64 msg_rng(rng::substream(cfg.seed, kRoleMessages, static_cast<std::uint64_t>(it)));
        for (std::size_t i = 0; i < batch; ++i) {
            int cls = 0;
            double* r = bits.row(i);
            for (int j = 0; j < S; ++j) {
                const int bit = msg_rng.next_bit() ? 1 : 0;
                r[j] = static_cast<double>(bit);
                cls = (cls << 1) | bit;
            }
            labels[i] = cls;
        }

        const Tensor tx = net.tx_forward(bits, true);
        const Tensor ch = nn::awgn_apply(tx, cfg.noise_variance,
                                         rng::substream(cfg.seed, kRoleNoise, static_cast<std::uint64_t>(it)));
        const Tensor logits = net.rx_forward(ch, true);
        const double loss = net.xent.forward(logits, labels, true);
        if (!std::isfinite(loss))
            throw std::runtime_error("train: loss diverged (not finite) at iteration " +
                                     std::to_string(it));
        result.loss_history.push_back(loss);

        const Tensor dlogits = net.xent.backward();
        const Tensor dch = net.rx_backward(dlogits);
        net.tx_backward(dch);  // noise layer backward is the identity
        opt.step();

        if (progress && progress_every > 0 && (it + 1) % progress_every == 0)
            progress(it + 1, loss);
    }
    return result;
}

Network train_new(const NetworkConfig& ncfg, const TrainingConfig& cfg, TrainResult& result,
                  void (*progress)(long, double), long progress_every) {
    Network net(ncfg, rng::substream(cfg.seed, kRoleInit));
    result = train(net, cfg, progress, progress_every);
    return net;
}

} // namespace golayae::ae
