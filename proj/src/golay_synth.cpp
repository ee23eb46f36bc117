#include "golayae/golay_synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace golayae::synth {

namespace {

constexpr double kPi = 3.141592653589793238462643383279;

// ln((1 + e^t) / 2) without overflow for large |t|
double log_half_one_plus_exp(double t) {
    const double softplus = std::max(t, 0.0) + std::log1p(std::exp(-std::abs(t)));
    return softplus - 0.6931471805599453094172321214582;
}

double e0_or_zero(const GolayParams& p) {
    return normalize_e0(p.alpha, p.amplitudes);
}

double f_r_with_e0(const std::vector<int>& x_bits, const GolayParams& p, double e0) {
    const int m = p.m;
    double acc = p.amplitudes[static_cast<std::size_t>(m - 1)] *
                 x_bits[static_cast<std::size_t>(p.permutation[static_cast<std::size_t>(m - 1)] - 1)];
    for (int n = 1; n < m; ++n) {
        const int xa = x_bits[static_cast<std::size_t>(p.permutation[static_cast<std::size_t>(n - 1)] - 1)];
        const int xb = x_bits[static_cast<std::size_t>(p.permutation[static_cast<std::size_t>(n)] - 1)];
        acc += p.amplitudes[static_cast<std::size_t>(n - 1)] * ((xa + xb) % 2);
    }
    return p.alpha * (acc + e0);
}

} // namespace

GolayParams GolayParams::defaults(int m) {
    if (m < 1) throw std::domain_error("GolayParams: m must be positive");
    GolayParams p;
    p.m = m;
    p.permutation.resize(static_cast<std::size_t>(m));
    std::iota(p.permutation.begin(), p.permutation.end(), 1);
    p.shifts.assign(static_cast<std::size_t>(m), 0);
    p.amplitudes.assign(static_cast<std::size_t>(m), 0.0);
    p.phases.assign(static_cast<std::size_t>(m) + 1, 0.0);
    return p;
}

void GolayParams::validate() const {
    if (m < 1) throw std::domain_error("GolayParams: m must be positive");
    const auto mu = static_cast<std::size_t>(m);
    if (permutation.size() != mu)
        throw std::domain_error("GolayParams: permutation must have m entries");
    std::vector<bool> seen(mu, false);
    for (int v : permutation) {
        if (v < 1 || v > m || seen[static_cast<std::size_t>(v - 1)])
            throw std::domain_error("GolayParams: permutation must be a bijection on 1..m");
        seen[static_cast<std::size_t>(v - 1)] = true;
    }
    if (alpha < 0.0 || beta < 0.0)
        throw std::domain_error("GolayParams: alpha and beta must be non-negative");
    if (shifts.size() != mu)
        throw std::domain_error("GolayParams: shifts must have m entries");
    for (long d : shifts)
        if (d < 0) throw std::domain_error("GolayParams: shifts must be non-negative");
    if (amplitudes.size() != mu)
        throw std::domain_error("GolayParams: amplitudes must have m entries");
    if (phases.size() != mu + 1)
        throw std::domain_error("GolayParams: phases must have m+1 entries (k_0..k_m)");
    if (a.length() != b.length())
        throw std::domain_error("GolayParams: initial pair must have equal length");
    if (!seqcore::is_gcp(a, b, 1e-12))
        throw std::domain_error("GolayParams: initial pair is not a Golay complementary pair");
}

std::vector<int> monomial_bits(std::uint32_t x, int m) {
    if (m < 1 || m > 31)
        throw std::domain_error("monomial_bits: m must be in 1..31");
    if (x >= (1u << m))
        throw std::domain_error("monomial_bits: x must be < 2^m");
    std::vector<int> bits(static_cast<std::size_t>(m));
    for (int j = 1; j <= m; ++j)
        bits[static_cast<std::size_t>(j - 1)] = static_cast<int>((x >> (m - j)) & 1u);
    return bits;
}

double normalize_e0(double alpha, const std::vector<double>& amplitudes) {
    if (alpha == 0.0) return 0.0;
    double acc = 0.0;
    for (double e : amplitudes) acc += log_half_one_plus_exp(2.0 * alpha * e);
    return -acc / (2.0 * alpha);
}

double f_r(const std::vector<int>& x_bits, const GolayParams& p) {
    return f_r_with_e0(x_bits, p, e0_or_zero(p));
}

double f_i(const std::vector<int>& x_bits, const GolayParams& p) {
    const int m = p.m;
    int quad = 0;
    for (int n = 1; n < m; ++n) {
        quad += x_bits[static_cast<std::size_t>(p.permutation[static_cast<std::size_t>(n - 1)] - 1)] *
                x_bits[static_cast<std::size_t>(p.permutation[static_cast<std::size_t>(n)] - 1)];
    }
    double lin = p.phases[0];
    for (int n = 1; n <= m; ++n) {
        lin += p.phases[static_cast<std::size_t>(n)] *
               x_bits[static_cast<std::size_t>(p.permutation[static_cast<std::size_t>(n - 1)] - 1)];
    }
    return kPi * quad + p.beta * lin;
}

long f_s(const std::vector<int>& x_bits, const GolayParams& p) {
    long acc = 0;
    for (int n = 1; n <= p.m; ++n) {
        acc += p.shifts[static_cast<std::size_t>(n - 1)] *
               x_bits[static_cast<std::size_t>(p.permutation[static_cast<std::size_t>(n - 1)] - 1)];
    }
    return acc;
}

seqcore::ComplexSequence synthesize(const GolayParams& p) {
    p.validate();
    const std::size_t n = p.a.length();
    const std::uint32_t count = 1u << p.m;
    const long total_shift = std::accumulate(p.shifts.begin(), p.shifts.end(), 0L);
    const std::size_t out_len = n * count + static_cast<std::size_t>(total_shift);

    const double e0 = e0_or_zero(p);
    std::vector<seqcore::cplx> out(out_len, seqcore::cplx(0.0, 0.0));
    for (std::uint32_t x = 0; x < count; ++x) {
        const auto bits = monomial_bits(x, p.m);
        const double fr = f_r_with_e0(bits, p, e0);
        const double fi = f_i(bits, p);
        const seqcore::cplx w = std::polar(std::exp(fr), fi);
        const bool use_b = bits[static_cast<std::size_t>(p.permutation[0] - 1)] != 0;
        const auto& src = use_b ? p.b : p.a;
        const std::size_t offset = static_cast<std::size_t>(f_s(bits, p)) + static_cast<std::size_t>(x) * n;
        for (std::size_t i = 0; i < n; ++i)
            out[offset + i] += src[i] * w;
    }
    return seqcore::ComplexSequence(std::move(out));
}

bool verify_cs(const seqcore::ComplexSequence& seq, int oversampling) {
    const double mean = seqcore::mean_power(seq);
    if (mean <= 0.0)
        throw std::domain_error("verify_cs: zero-power sequence");
    const auto wf = seqcore::evaluate_waveform(seq, oversampling);
    double peak = 0.0;
    for (const auto& s : wf.samples) peak = std::max(peak, std::norm(s));
    return peak <= 2.0 * mean * (1.0 + 1e-9);
}

GolayParams rm_coset_params(int m, int q, const std::vector<int>& k_vector,
                            const std::vector<int>& permutation) {
    if (q < 1) throw std::domain_error("rm_coset_params: q must be positive");
    if (k_vector.size() != static_cast<std::size_t>(m) + 1)
        throw std::domain_error("rm_coset_params: k_vector must have m+1 entries");
    const int modulus = 1 << q;
    for (int k : k_vector)
        if (k < 0 || k >= modulus)
            throw std::domain_error("rm_coset_params: k entries must lie in Z_{2^q}");

    GolayParams p = GolayParams::defaults(m);
    p.permutation = permutation;
    p.alpha = 0.0;
    p.beta = 2.0 * kPi / static_cast<double>(modulus);
    for (std::size_t i = 0; i < k_vector.size(); ++i)
        p.phases[i] = static_cast<double>(k_vector[i]);
    p.validate();
    return p;
}

} // namespace golayae::synth
