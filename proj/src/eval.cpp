#include "golayae/eval.hpp"

#include "golayae/rng.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <span>
#include <stdexcept>

namespace golayae::eval {

namespace {

using nn::Tensor;

constexpr std::uint64_t kRoleAwgnTrial = 0x1000;
constexpr std::uint64_t kRoleFadingTrial = 0x2000;
constexpr long kTrialBatch = 1024;

std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::ofstream open_csv(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    return out;
}

struct BerAccumulator {
    long trials = 0;
    long bit_errors = 0;
    double sum_e = 0.0, sum_e2 = 0.0;

    void add(int errors) {
        ++trials;
        bit_errors += errors;
        sum_e += errors;
        sum_e2 += static_cast<double>(errors) * errors;
    }
    double ber(int S) const {
        return trials == 0 ? 0.0 : sum_e / (static_cast<double>(S) * trials);
    }
    double std_err(int S) const {
        if (trials < 2) return 0.0;
        const double mean = sum_e / trials;
        const double var = std::max(sum_e2 / trials - mean * mean, 0.0);
        return std::sqrt(var / trials) / static_cast<double>(S);
    }
};

// Shared Monte-Carlo loop. Per trial the stream yields the message bits
// first, then the channel draws (fading coefficient, then noise), so the
// two channel kinds stay comparable draw-for-draw.
EvalReport ber_run(ae::Network& net, const BerOptions& opt, bool fading) {
    const int S = net.config().S;
    const std::size_t nsub = net.config().subcarriers();
    EvalReport report;
    report.kind = fading ? "ber_fading" : "ber_awgn";
    report.seed = opt.seed;
    report.trial_cap = opt.trial_cap;

    const std::uint64_t role = fading ? kRoleFadingTrial : kRoleAwgnTrial;
    for (std::size_t point = 0; point < opt.snr_db.size(); ++point) {
        const double snr_db = opt.snr_db[point];
        const double sigma2 = std::pow(10.0, -snr_db / 10.0);
        const double noise_std = std::sqrt(sigma2 / 2.0);

        BerAccumulator acc;
        while (acc.trials < opt.trial_cap && acc.bit_errors < opt.target_bit_errors) {
            const long batch =
                std::min<long>(kTrialBatch, opt.trial_cap - acc.trials);
            Tensor bits(static_cast<std::size_t>(batch), static_cast<std::size_t>(S));
            std::vector<int> sent(static_cast<std::size_t>(batch));
            std::vector<seqcore::cplx> h(static_cast<std::size_t>(batch));
            std::vector<double> noise(static_cast<std::size_t>(batch) * 2 * nsub);

            for (long t = 0; t < batch; ++t) {
                const std::uint64_t trial = static_cast<std::uint64_t>(acc.trials + t);
                rng::SplitMix64 g(rng::substream(opt.seed, role + point, trial));
                int cls = 0;
                double* r = bits.row(static_cast<std::size_t>(t));
                for (int j = 0; j < S; ++j) {
                    const int bit = g.next_bit() ? 1 : 0;
                    r[j] = static_cast<double>(bit);
                    cls = (cls << 1) | bit;
                }
                sent[static_cast<std::size_t>(t)] = cls;
                if (fading) {
                    double z0, z1;
                    rng::gaussian_pair(g, z0, z1);
                    h[static_cast<std::size_t>(t)] =
                        seqcore::cplx(z0, z1) * 0.70710678118654752440;
                }
                rng::fill_gaussian(
                    g, std::span<double>(noise.data() + static_cast<std::size_t>(t) * 2 * nsub, 2 * nsub),
                    noise_std);
            }

            Tensor features = ae::encode_batch(bits, net);
            for (long t = 0; t < batch; ++t) {
                double* f = features.row(static_cast<std::size_t>(t));
                const double* n = noise.data() + static_cast<std::size_t>(t) * 2 * nsub;
                if (fading) {
                    const seqcore::cplx hc = h[static_cast<std::size_t>(t)];
                    for (std::size_t s = 0; s < nsub; ++s) {
                        const seqcore::cplx y =
                            hc * seqcore::cplx(f[2 * s], f[2 * s + 1]) +
                            seqcore::cplx(n[2 * s], n[2 * s + 1]);
                        const seqcore::cplx eq = mmse_equalize(hc, y, sigma2);
                        f[2 * s] = eq.real();
                        f[2 * s + 1] = eq.imag();
                    }
                } else {
                    for (std::size_t k = 0; k < 2 * nsub; ++k) f[k] += n[k];
                }
            }

            const std::vector<int> decoded = ae::decode_batch(features, net);
            for (long t = 0; t < batch; ++t) {
                const int diff = sent[static_cast<std::size_t>(t)] ^ decoded[static_cast<std::size_t>(t)];
                acc.add(std::popcount(static_cast<unsigned>(diff)));
            }
        }
        report.points.push_back({snr_db, acc.ber(S), acc.trials, acc.std_err(S)});
    }
    return report;
}

} // namespace

std::vector<double> trace_for_sequence(const seqcore::ComplexSequence& seq, int oversampling) {
    const double mean = seqcore::mean_power(seq);
    if (mean <= 0.0) throw std::domain_error("trace_for_sequence: zero-power sequence");
    const auto wf = seqcore::evaluate_waveform(seq, oversampling);
    std::vector<double> trace(wf.samples.size());
    for (std::size_t i = 0; i < trace.size(); ++i) trace[i] = std::norm(wf.samples[i]) / mean;
    return trace;
}

std::vector<std::vector<double>> power_traces(ae::Network& net, const std::vector<int>& messages,
                                              int oversampling) {
    std::vector<std::vector<double>> traces;
    traces.reserve(messages.size());
    for (int msg : messages) {
        const auto seq = ae::encode(ae::class_to_bits(msg, net.config().S), net);
        traces.push_back(trace_for_sequence(seq, oversampling));
    }
    return traces;
}

EvalReport papr_ccdf(ae::Network& net, int oversampling, const std::vector<int>& messages) {
    if (messages.empty()) throw std::domain_error("papr_ccdf: message set must be non-empty");
    std::vector<double> values;
    values.reserve(messages.size());
    for (int msg : messages) {
        const auto seq = ae::encode(ae::class_to_bits(msg, net.config().S), net);
        values.push_back(seqcore::papr_db(seq, oversampling));
    }
    std::sort(values.begin(), values.end());

    EvalReport report;
    report.kind = "papr_ccdf";
    const double total = static_cast<double>(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i + 1 < values.size() && values[i + 1] == values[i]) continue;
        // strictly-greater count = entries after index i
        report.points.push_back({values[i], static_cast<double>(values.size() - 1 - i) / total,
                                 static_cast<long>(values.size()), 0.0});
    }
    return report;
}

std::vector<ConstellationPoint> constellation_dump(ae::Network& net) {
    const int classes = net.config().class_count();
    const std::size_t nsub = net.config().subcarriers();
    std::vector<ConstellationPoint> points;
    points.reserve(static_cast<std::size_t>(classes) * nsub);
    for (int msg = 0; msg < classes; ++msg) {
        const auto seq = ae::encode(ae::class_to_bits(msg, net.config().S), net);
        for (std::size_t s = 0; s < nsub; ++s)
            points.push_back({static_cast<int>(s), msg, seq[s].real(), seq[s].imag()});
    }
    return points;
}

seqcore::cplx mmse_equalize(seqcore::cplx h, seqcore::cplx y, double noise_variance) {
    return std::conj(h) * y / (std::norm(h) + noise_variance);
}

EvalReport ber_awgn(ae::Network& net, const BerOptions& opt) {
    return ber_run(net, opt, /*fading=*/false);
}

EvalReport ber_flat_fading(ae::Network& net, const BerOptions& opt) {
    return ber_run(net, opt, /*fading=*/true);
}

void write_trace_csv(const std::string& path, const std::vector<int>& messages,
                     const std::vector<std::vector<double>>& traces) {
    auto out = open_csv(path);
    out << "message,t_norm,power\n";
    for (std::size_t k = 0; k < traces.size(); ++k) {
        const auto& trace = traces[k];
        for (std::size_t n = 0; n < trace.size(); ++n) {
            out << messages[k] << ',' << fmt_double(static_cast<double>(n) / trace.size()) << ','
                << fmt_double(trace[n]) << '\n';
        }
    }
}

void write_ccdf_csv(const std::string& path, const EvalReport& report) {
    auto out = open_csv(path);
    out << "papr_db,ccdf\n";
    for (const auto& p : report.points)
        out << fmt_double(p.x) << ',' << fmt_double(p.y) << '\n';
}

void write_ber_csv(const std::string& path, const EvalReport& report) {
    auto out = open_csv(path);
    out << "snr_db,ber,trials\n";
    for (const auto& p : report.points)
        out << fmt_double(p.x) << ',' << fmt_double(p.y) << ',' << p.trials << '\n';
}

void write_constellation_csv(const std::string& path,
                             const std::vector<ConstellationPoint>& points) {
    auto out = open_csv(path);
    out << "subcarrier,message,re,im\n";
    for (const auto& p : points)
        out << p.subcarrier << ',' << p.message << ',' << fmt_double(p.re) << ','
            << fmt_double(p.im) << '\n';
}

} // namespace golayae::eval
