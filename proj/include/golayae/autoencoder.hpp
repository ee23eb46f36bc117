#ifndef GOLAYAE_AUTOENCODER_HPP
#define GOLAYAE_AUTOENCODER_HPP

#include "golayae/nn.hpp"
#include "golayae/seqcore.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace golayae::ae {

// Transmitter/receiver stack description. The transmitter's final dense width
// is always 2m+1 and the receiver's always 2^S; both follow from S and m.
struct NetworkConfig {
    int S = 9;                                      // information bits per message
    int m = 5;                                      // Boolean variables; 2^m subcarriers
    double alpha = 1.0;                             // amplitude variant flag, 0 or 1
    double beta = 6.283185307179586476925286766559; // phase gain
    std::vector<int> permutation;                   // empty means identity
    std::vector<std::size_t> tx_hidden = {100, 100, 100};
    std::vector<std::size_t> rx_hidden = {1000, 1000};
    double clip_e_lo = -2.0, clip_e_hi = 1.0;       // amplitude clipping range
    double clip_k_lo = -1.0, clip_k_hi = 1.0;       // phase clipping range

    int class_count() const { return 1 << S; }
    std::size_t subcarriers() const { return std::size_t{1} << m; }
    std::vector<int> effective_permutation() const;
    void validate() const;
};

struct TrainingConfig {
    std::size_t batch_size = 5120;
    double learning_rate = 1e-4;
    double noise_variance = 1.0;   // sigma_n^2; each component gets sigma_n^2/2
    long iterations = 20000;
    std::uint64_t seed = 1;

    void validate() const;
};

// Full parameter state of the autoencoder. Forward passes in inference mode
// are pure; training mode caches activations for the matching backward call.
class Network {
public:
    Network(NetworkConfig cfg, std::uint64_t init_seed);

    const NetworkConfig& config() const { return cfg_; }

    // bits [B x S] -> channel features [B x 2*2^m], interleaved re/im
    nn::Tensor tx_forward(const nn::Tensor& bits, bool training);
    // channel features -> logits [B x 2^S]
    nn::Tensor rx_forward(const nn::Tensor& features, bool training);
    // gradient wrt channel features, from gradient wrt logits
    nn::Tensor rx_backward(const nn::Tensor& dlogits);
    // propagates the channel-feature gradient through P2C, Golay layer,
    // clipping and the transmitter dense stack
    void tx_backward(const nn::Tensor& dfeatures);

    std::vector<nn::ParamRef> params();

    std::vector<nn::Dense> tx_dense;
    std::vector<nn::BatchNorm> tx_bn;
    std::vector<nn::ReLU> tx_relu;
    nn::Clipping clip;
    nn::GolayLayer golay;
    nn::P2C p2c;
    std::vector<nn::Dense> rx_dense;
    std::vector<nn::BatchNorm> rx_bn;
    std::vector<nn::ReLU> rx_relu;
    nn::SoftmaxXent xent;

private:
    NetworkConfig cfg_;
};

// Big-endian bit-vector value: (0,...,0) -> 0, (0,...,0,1) -> 1.
int bits_to_class(const std::vector<int>& bits);
std::vector<int> class_to_bits(int cls, int S);

// Deterministic transmitter map for one message; inference-mode statistics.
seqcore::ComplexSequence encode(const std::vector<int>& bits, Network& net);
// Argmax of the receiver softmax; ties break toward the lowest index.
int decode(const seqcore::ComplexSequence& received, Network& net);

// Batched inference used by the Monte-Carlo evaluation loops.
nn::Tensor encode_batch(const nn::Tensor& bits, Network& net);
std::vector<int> decode_batch(const nn::Tensor& features, Network& net);

// interleaved [1 x 2*2^m] row <-> complex sequence
seqcore::ComplexSequence row_to_sequence(const nn::Tensor& features, std::size_t row);

struct TrainResult {
    std::vector<double> loss_history;
};

// Runs the sample -> TX -> AWGN -> RX -> cross-entropy -> backward -> Adam
// loop for cfg.iterations minibatches. Throws std::runtime_error with a
// diagnostic if the loss stops being finite. progress, when non-null, is
// called every progress_every iterations with (iteration, loss).
TrainResult train(Network& net, const TrainingConfig& cfg,
                  void (*progress)(long, double) = nullptr, long progress_every = 100);

// Convenience: fresh network initialized from cfg.seed, then trained.
Network train_new(const NetworkConfig& ncfg, const TrainingConfig& cfg, TrainResult& result,
                  void (*progress)(long, double) = nullptr, long progress_every = 100);

// --- checkpoint io -----------------------------------------------------
//
// Versioned JSON file holding the network config plus every parameter and
// running statistic as full-precision decimal arrays under stable names
// (tx.dense.0.w, tx.bn.0.run_mean, rx.dense.2.b, ...). Save/load round-trips
// reproduce inference bit-exactly.

struct CheckpointParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct CheckpointVersionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct CheckpointShapeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void save_checkpoint(Network& net, const std::string& path);
Network load_checkpoint(const std::string& path);

} // namespace golayae::ae

#endif
