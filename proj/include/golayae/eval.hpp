#ifndef GOLAYAE_EVAL_HPP
#define GOLAYAE_EVAL_HPP

#include "golayae/autoencoder.hpp"
#include "golayae/seqcore.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace golayae::eval {

struct CurvePoint {
    double x = 0.0;       // SNR dB or PAPR dB
    double y = 0.0;       // BER or complementary CDF probability
    long trials = 0;      // Monte-Carlo trials behind this point (0 for CCDF)
    double std_err = 0.0; // standard error of y where applicable
};

struct EvalReport {
    std::string kind;     // papr_ccdf | ber_awgn | ber_fading
    std::vector<CurvePoint> points;
    std::uint64_t seed = 0;
    long trial_cap = 0;
    std::string checkpoint_id;
};

// |waveform|^2 / mean power on the L-oversampled grid.
std::vector<double> trace_for_sequence(const seqcore::ComplexSequence& seq, int oversampling);

// One normalized instantaneous-power trace per message.
std::vector<std::vector<double>> power_traces(ae::Network& net, const std::vector<int>& messages,
                                              int oversampling);

// Empirical complementary CDF of papr_db over the message set; points are
// sorted by abscissa and the last point always carries probability zero.
EvalReport papr_ccdf(ae::Network& net, int oversampling, const std::vector<int>& messages);

struct ConstellationPoint {
    int subcarrier = 0;
    int message = 0;
    double re = 0.0, im = 0.0;
};
// Every message crossed with every subcarrier: 2^S x 2^m points.
std::vector<ConstellationPoint> constellation_dump(ae::Network& net);

// Single-tap frequency-domain MMSE estimate conj(h)*y / (|h|^2 + sigma_n^2);
// reduces exactly to zero-forcing at sigma_n^2 = 0.
seqcore::cplx mmse_equalize(seqcore::cplx h, seqcore::cplx y, double noise_variance);

struct BerOptions {
    std::vector<double> snr_db;   // per-subcarrier average symbol energy over sigma_n^2
    long trial_cap = 200000;      // messages per point, upper bound
    long target_bit_errors = 100; // stop early once accumulated
    std::uint64_t seed = 1;
};

// Monte-Carlo bit error rate over AWGN. Each trial derives its own generator
// state from (seed, point, trial), so results are independent of batching.
EvalReport ber_awgn(ae::Network& net, const BerOptions& opt);

// Flat Rayleigh fading: one h ~ CN(0,1) per OFDM symbol applied to all
// subcarriers, MMSE-equalized with ideal channel knowledge.
EvalReport ber_flat_fading(ae::Network& net, const BerOptions& opt);

// CSV writers (full-precision decimals, newline-terminated rows)
void write_trace_csv(const std::string& path, const std::vector<int>& messages,
                     const std::vector<std::vector<double>>& traces);
void write_ccdf_csv(const std::string& path, const EvalReport& report);
void write_ber_csv(const std::string& path, const EvalReport& report);
void write_constellation_csv(const std::string& path,
                             const std::vector<ConstellationPoint>& points);

} // namespace golayae::eval

#endif
