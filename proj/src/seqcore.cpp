#include "golayae/seqcore.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace golayae::seqcore {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// twiddle table w[k] = exp(j*2*pi*k/M), k = 0..M-1
std::vector<cplx> twiddle_table(std::size_t grid) {
    std::vector<cplx> w(grid);
    for (std::size_t k = 0; k < grid; ++k)
        w[k] = std::polar(1.0, kTwoPi * static_cast<double>(k) / static_cast<double>(grid));
    return w;
}

} // namespace

ComplexSequence::ComplexSequence(std::vector<cplx> coefficients)
    : coefficients_(std::move(coefficients)) {
    if (coefficients_.empty())
        throw std::domain_error("ComplexSequence: length must be >= 1");
    for (const cplx& c : coefficients_)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
            throw std::domain_error("ComplexSequence: coefficients must be finite");
}

cplx apac(const ComplexSequence& seq, long lag) {
    const long n = static_cast<long>(seq.length());
    if (lag <= -n || lag >= n)
        throw std::domain_error("apac: |lag| must be < sequence length");
    if (lag < 0) return std::conj(apac(seq, -lag));
    cplx acc(0.0, 0.0);
    for (long i = 0; i + lag < n; ++i)
        acc += seq[static_cast<std::size_t>(i + lag)] * std::conj(seq[static_cast<std::size_t>(i)]);
    return acc;
}

OversampledWaveform evaluate_waveform(const ComplexSequence& seq, int oversampling) {
    if (oversampling < 1)
        throw std::domain_error("evaluate_waveform: oversampling factor must be >= 1");
    const std::size_t n = seq.length();
    const std::size_t grid = n * static_cast<std::size_t>(oversampling);
    const auto w = twiddle_table(grid);

    OversampledWaveform out;
    out.oversampling_factor = oversampling;
    out.sequence_length = n;
    out.samples.resize(grid);
    for (std::size_t s = 0; s < grid; ++s) {
        cplx acc(0.0, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            acc += seq[i] * w[(s * i) % grid];
        out.samples[s] = acc;
    }
    return out;
}

std::vector<double> instantaneous_power_via_apac(const ComplexSequence& seq, int oversampling) {
    if (oversampling < 1)
        throw std::domain_error("instantaneous_power_via_apac: oversampling factor must be >= 1");
    const long n = static_cast<long>(seq.length());
    const std::size_t grid = static_cast<std::size_t>(n) * static_cast<std::size_t>(oversampling);
    const auto w = twiddle_table(grid);

    std::vector<cplx> rho(static_cast<std::size_t>(n));
    for (long k = 0; k < n; ++k) rho[static_cast<std::size_t>(k)] = apac(seq, k);
    const double rho0 = rho[0].real();
    const double imag_tol = 1e-9 * rho0;

    std::vector<double> power(grid);
    const long m = static_cast<long>(grid);
    for (long s = 0; s < m; ++s) {
        cplx acc = rho[0];
        for (long k = 1; k < n; ++k) {
            const std::size_t fwd = static_cast<std::size_t>((s * k) % m);
            const std::size_t bwd = (grid - fwd) % grid;
            acc += rho[static_cast<std::size_t>(k)] * w[fwd];
            acc += std::conj(rho[static_cast<std::size_t>(k)]) * w[bwd];
        }
        if (std::abs(acc.imag()) >= imag_tol)
            throw std::runtime_error("instantaneous_power_via_apac: imaginary residue " +
                                     std::to_string(acc.imag()) + " exceeds tolerance");
        power[static_cast<std::size_t>(s)] = acc.real();
    }
    return power;
}

double mean_power(const ComplexSequence& seq) {
    double acc = 0.0;
    for (const cplx& c : seq.coefficients()) acc += std::norm(c);
    return acc;
}

double papr_db(const ComplexSequence& seq, int oversampling) {
    const double mean = mean_power(seq);
    if (mean <= 0.0)
        throw std::domain_error("papr_db: zero-power sequence");
    const auto wf = evaluate_waveform(seq, oversampling);
    double peak = 0.0;
    for (const cplx& s : wf.samples) peak = std::max(peak, std::norm(s));
    return 10.0 * std::log10(peak / mean);
}

bool is_gcp(const ComplexSequence& a, const ComplexSequence& b, double tol) {
    if (a.length() != b.length())
        throw std::domain_error("is_gcp: sequences must have equal length");
    const long n = static_cast<long>(a.length());
    for (long k = 1; k < n; ++k)
        if (std::abs(apac(a, k) + apac(b, k)) > tol) return false;
    return true;
}

} // namespace golayae::seqcore
