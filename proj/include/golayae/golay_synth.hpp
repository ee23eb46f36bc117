#ifndef GOLAYAE_GOLAY_SYNTH_HPP
#define GOLAYAE_GOLAY_SYNTH_HPP

#include "golayae/seqcore.hpp"

#include <cstdint>
#include <vector>

namespace golayae::synth {

// Free variables of the complementary-sequence construction. The constant
// amplitude term e_0 is never stored; it is recomputed from the amplitudes on
// every use so the synthesized mean power cannot drift out of sync.
struct GolayParams {
    int m = 1;                        // number of Boolean variables
    double alpha = 0.0;               // amplitude-deviation gain
    double beta = 6.283185307179586476925286766559;  // phase-deviation gain
    std::vector<int> permutation;     // pi_1..pi_m, a permutation of 1..m
    std::vector<long> shifts;         // d_1..d_m, non-negative
    std::vector<double> amplitudes;   // e_1..e_m
    std::vector<double> phases;       // k_0..k_m (index 0 is k_0)
    seqcore::ComplexSequence a = seqcore::ComplexSequence::unit();
    seqcore::ComplexSequence b = seqcore::ComplexSequence::unit();

    // identity permutation, zero shifts/amplitudes/phases, a = b = (1)
    static GolayParams defaults(int m);

    // Throws std::domain_error when an invariant is violated (permutation not
    // a bijection, negative gains/shifts, initial pair not a GCP at 1e-12).
    void validate() const;
};

// Bits (x_1..x_m) of x in the lexicographic convention x = sum x_j 2^(m-j);
// the most significant bit is x_1.
std::vector<int> monomial_bits(std::uint32_t x, int m);

// Constant amplitude term making the synthesized mean power invariant to the
// amplitudes: e_0 = -(1/(2*alpha)) * sum_n ln((1 + exp(2*alpha*e_n)) / 2).
// Returns 0 when alpha = 0 (the amplitude function is inert). Evaluated in a
// log-sum form that cannot overflow.
double normalize_e0(double alpha, const std::vector<double>& amplitudes);

// Amplitude exponent: alpha * (e_m x_{pi_m} + sum_{n<m} e_n (x_{pi_n} + x_{pi_{n+1}} mod 2) + e_0).
double f_r(const std::vector<int>& x_bits, const GolayParams& p);

// Phase: pi * sum_{n<m} x_{pi_n} x_{pi_{n+1}} + beta * (sum_n k_n x_{pi_n} + k_0).
double f_i(const std::vector<int>& x_bits, const GolayParams& p);

// Subcarrier shift: sum_n d_n x_{pi_n}.
long f_s(const std::vector<int>& x_bits, const GolayParams& p);

// Builds the complementary sequence c with polynomial
//   p_c(z) = sum_x p_o(x,z) * exp(f_r(x) + j f_i(x)) * z^(f_s(x) + x*N),
// where p_o selects a when x_{pi_1} = 0 and b when x_{pi_1} = 1. Output
// length is N*2^m + sum_n d_n; overlapping powers of z accumulate additively.
seqcore::ComplexSequence synthesize(const GolayParams& p);

// True iff the peak instantaneous power on the oversampled grid stays within
// twice the mean power (the defining 3 dB property).
bool verify_cs(const seqcore::ComplexSequence& seq, int oversampling = 16);

// Reed-Muller coset instance: alpha = 0, beta = 2*pi/2^q, integer phases
// k_0..k_m from Z_{2^q}, a = b = (1), zero shifts. Synthesis yields a
// 2^q-PSK complementary sequence.
GolayParams rm_coset_params(int m, int q, const std::vector<int>& k_vector,
                            const std::vector<int>& permutation);

} // namespace golayae::synth

#endif
