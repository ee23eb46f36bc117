#ifndef GOLAYAE_SEQCORE_HPP
#define GOLAYAE_SEQCORE_HPP

#include <complex>
#include <cstddef>
#include <vector>

namespace golayae::seqcore {

using cplx = std::complex<double>;

// Frequency-domain sequence: coefficient i multiplies z^i of the symbol
// polynomial p(z) = a_{N-1} z^{N-1} + ... + a_0 evaluated on the unit circle.
class ComplexSequence {
public:
    explicit ComplexSequence(std::vector<cplx> coefficients);

    // length-one sequence (1)
    static ComplexSequence unit() { return ComplexSequence({cplx(1.0, 0.0)}); }

    std::size_t length() const { return coefficients_.size(); }
    const std::vector<cplx>& coefficients() const { return coefficients_; }
    const cplx& operator[](std::size_t i) const { return coefficients_[i]; }

private:
    std::vector<cplx> coefficients_;
};

// Time-domain evaluation of the sequence polynomial on the normalized grid
// t/T_s = n/(L*N), n = 0..L*N-1.
struct OversampledWaveform {
    std::vector<cplx> samples;
    int oversampling_factor = 1;
    std::size_t sequence_length = 0;
};

// Aperiodic autocorrelation rho(k) = sum_i a_{i+k} * conj(a_i) for k >= 0,
// rho(-k) = conj(rho(k)). Requires |lag| < length.
cplx apac(const ComplexSequence& seq, long lag);

// Sample n = sum_i a_i * exp(j*2*pi*n*i/(L*N)); a zero-padded inverse DFT
// without 1/N scaling. Direct O(N^2 L) evaluation.
OversampledWaveform evaluate_waveform(const ComplexSequence& seq, int oversampling);

// Instantaneous power on the oversampled grid computed from the
// autocorrelation route: p[n] = sum_{k=-N+1}^{N-1} rho(k) exp(j*2*pi*n*k/(L*N)).
// The residual imaginary part must stay below 1e-9 * rho(0) or the call
// reports an internal-consistency failure.
std::vector<double> instantaneous_power_via_apac(const ComplexSequence& seq, int oversampling);

// Time-average of |p(z)|^2 over one symbol = rho(0) = sum |a_i|^2.
double mean_power(const ComplexSequence& seq);

// 10*log10(max_n |sample n|^2 / rho(0)). Requires nonzero mean power.
double papr_db(const ComplexSequence& seq, int oversampling = 16);

// True iff |rho_a(k) + rho_b(k)| <= tol for every k != 0.
bool is_gcp(const ComplexSequence& a, const ComplexSequence& b, double tol);

} // namespace golayae::seqcore

#endif
