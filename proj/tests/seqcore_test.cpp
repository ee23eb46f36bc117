#include "golayae/seqcore.hpp"

#include "golayae/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

using namespace golayae;
using seqcore::ComplexSequence;
using seqcore::cplx;

namespace {

ComplexSequence seq(std::initializer_list<cplx> values) {
    return ComplexSequence(std::vector<cplx>(values));
}

ComplexSequence random_sequence(rng::SplitMix64& g, std::size_t length) {
    std::vector<cplx> c(length);
    for (auto& v : c) v = cplx(g.next_uniform(-1.0, 1.0), g.next_uniform(-1.0, 1.0));
    return ComplexSequence(std::move(c));
}

// doubling construction: (a, b) -> (a | w b, a | -w b) stays a GCP for |w| = 1
std::pair<ComplexSequence, ComplexSequence> random_gcp(rng::SplitMix64& g, int doublings) {
    std::vector<cplx> a{cplx(g.next_uniform(-1.0, 1.0), g.next_uniform(-1.0, 1.0))};
    std::vector<cplx> b{cplx(g.next_uniform(-1.0, 1.0), g.next_uniform(-1.0, 1.0))};
    if (std::abs(a[0]) < 0.1) a[0] += cplx(0.5, 0.0);
    if (std::abs(b[0]) < 0.1) b[0] += cplx(0.5, 0.0);
    for (int d = 0; d < doublings; ++d) {
        const cplx w = std::polar(1.0, g.next_uniform(0.0, 6.283185307179586));
        std::vector<cplx> na(a), nb(a);
        for (const cplx& v : b) na.push_back(w * v);
        for (const cplx& v : b) nb.push_back(-w * v);
        a = std::move(na);
        b = std::move(nb);
    }
    return {ComplexSequence(a), ComplexSequence(b)};
}

} // namespace

TEST_CASE("sequence construction enforces invariants") {
    CHECK_THROWS_AS(ComplexSequence({}), std::domain_error);
    CHECK_THROWS_AS(seq({cplx(std::nan(""), 0.0)}), std::domain_error);
    CHECK_THROWS_AS(seq({cplx(0.0, INFINITY)}), std::domain_error);
    CHECK(seq({cplx(1, 0)}).length() == 1);
}

TEST_CASE("apac matches direct summation") {
    const auto s = seq({1, 1, 1, -1});
    CHECK(seqcore::apac(s, 0).real() == doctest::Approx(4.0));
    CHECK(seqcore::apac(s, 0).imag() == doctest::Approx(0.0));
    CHECK(seqcore::apac(s, 2).real() == doctest::Approx(0.0));

    const auto single = seq({cplx(0.4, -1.3)});
    CHECK(seqcore::apac(single, 0).real() == doctest::Approx(std::norm(cplx(0.4, -1.3))));

    CHECK_THROWS_AS(seqcore::apac(s, 4), std::domain_error);
    CHECK_THROWS_AS(seqcore::apac(s, -4), std::domain_error);
}

TEST_CASE("apac conjugate symmetry on random sequences") {
    rng::SplitMix64 g(101);
    for (int rep = 0; rep < 20; ++rep) {
        const auto s = random_sequence(g, 1 + g.next_u64() % 16);
        for (long k = 0; k < static_cast<long>(s.length()); ++k) {
            const cplx fwd = seqcore::apac(s, k);
            const cplx bwd = seqcore::apac(s, -k);
            CHECK(std::abs(bwd - std::conj(fwd)) < 1e-12);
        }
    }
}

TEST_CASE("waveform evaluation on hand examples") {
    const auto constant = seqcore::evaluate_waveform(seq({1}), 4);
    REQUIRE(constant.samples.size() == 4);
    for (const auto& v : constant.samples) CHECK(std::abs(v - cplx(1, 0)) < 1e-12);

    const auto two = seqcore::evaluate_waveform(seq({1, 1}), 1);
    REQUIRE(two.samples.size() == 2);
    CHECK(std::abs(two.samples[0] - cplx(2, 0)) < 1e-12);
    CHECK(std::abs(two.samples[1] - cplx(0, 0)) < 1e-12);

    // z^1 at the 4th roots of unity
    const auto rot = seqcore::evaluate_waveform(seq({0, 1}), 2);
    REQUIRE(rot.samples.size() == 4);
    CHECK(std::abs(rot.samples[0] - cplx(1, 0)) < 1e-12);
    CHECK(std::abs(rot.samples[1] - cplx(0, 1)) < 1e-12);
    CHECK(std::abs(rot.samples[2] - cplx(-1, 0)) < 1e-12);
    CHECK(std::abs(rot.samples[3] - cplx(0, -1)) < 1e-12);

    CHECK_THROWS_AS(seqcore::evaluate_waveform(seq({1}), 0), std::domain_error);
}

TEST_CASE("autocorrelation route reproduces |waveform|^2") {
    const auto s = seq({1, 1, 1, -1});
    const auto power = seqcore::instantaneous_power_via_apac(s, 16);
    const auto wf = seqcore::evaluate_waveform(s, 16);
    REQUIRE(power.size() == wf.samples.size());
    for (std::size_t n = 0; n < power.size(); ++n)
        CHECK(power[n] == doctest::Approx(std::norm(wf.samples[n])).epsilon(1e-10));

    for (int L : {1, 3, 8}) {
        for (double v : seqcore::instantaneous_power_via_apac(seq({1}), L))
            CHECK(v == doctest::Approx(1.0));
        for (double v : seqcore::instantaneous_power_via_apac(seq({2}), L))
            CHECK(v == doctest::Approx(4.0));
    }
}

TEST_CASE("autocorrelation route on random sequences up to length 64") {
    rng::SplitMix64 g(77);
    for (int rep = 0; rep < 25; ++rep) {
        const auto s = random_sequence(g, 1 + g.next_u64() % 64);
        const auto power = seqcore::instantaneous_power_via_apac(s, 4);
        const auto wf = seqcore::evaluate_waveform(s, 4);
        const double scale = seqcore::mean_power(s);
        for (std::size_t n = 0; n < power.size(); ++n)
            CHECK(std::abs(power[n] - std::norm(wf.samples[n])) <= 1e-9 * scale);
    }
}

TEST_CASE("mean power is rho(0)") {
    CHECK(seqcore::mean_power(seq({1, 1, 1, -1})) == doctest::Approx(4.0));
    CHECK(seqcore::mean_power(seq({1})) == doctest::Approx(1.0));
    CHECK(seqcore::mean_power(seq({0, 0})) == doctest::Approx(0.0));
}

TEST_CASE("parseval consistency: grid mean of |waveform|^2 equals rho(0)") {
    rng::SplitMix64 g(55);
    for (int rep = 0; rep < 20; ++rep) {
        const auto s = random_sequence(g, 1 + g.next_u64() % 32);
        const int L = 1 + static_cast<int>(g.next_u64() % 8);
        const auto wf = seqcore::evaluate_waveform(s, L);
        double grid_mean = 0.0;
        for (const auto& v : wf.samples) grid_mean += std::norm(v);
        grid_mean /= static_cast<double>(wf.samples.size());
        const double rho0 = seqcore::mean_power(s);
        CHECK(std::abs(grid_mean - rho0) <= 1e-9 * std::max(rho0, 1.0));
    }
}

TEST_CASE("papr of known sequences") {
    // dense-grid maximization of 4 + 2 cos t - 2 cos 3t as the independent route
    double peak = 0.0;
    for (int i = 0; i < 1000000; ++i) {
        const double t = 6.283185307179586 * i / 1000000.0;
        peak = std::max(peak, 4.0 + 2.0 * std::cos(t) - 2.0 * std::cos(3.0 * t));
    }
    const double oracle = 10.0 * std::log10(peak / 4.0);
    CHECK(oracle == doctest::Approx(2.4792).epsilon(1e-3));
    CHECK(seqcore::papr_db(seq({1, 1, 1, -1}), 64) == doctest::Approx(oracle).epsilon(2e-3));

    // single nonzero coefficient: constant envelope
    CHECK(seqcore::papr_db(seq({1, 0, 0, 0}), 16) == doctest::Approx(0.0));
    // (1,1): peak 4 at z=1, mean 2
    CHECK(seqcore::papr_db(seq({1, 1}), 16) == doctest::Approx(10.0 * std::log10(2.0)).epsilon(1e-6));

    CHECK_THROWS_AS(seqcore::papr_db(seq({0, 0}), 16), std::domain_error);
}

TEST_CASE("gcp detection") {
    CHECK(seqcore::is_gcp(seq({1, 1}), seq({1, -1}), 1e-12));
    CHECK_FALSE(seqcore::is_gcp(seq({1, 1}), seq({1, 1}), 1e-12));
    CHECK(seqcore::is_gcp(seq({1}), seq({1}), 1e-12));
    CHECK_THROWS_AS(seqcore::is_gcp(seq({1, 1}), seq({1}), 1e-12), std::domain_error);
}

TEST_CASE("gcp pairs have flat summed instantaneous power") {
    rng::SplitMix64 g(2024);
    for (int rep = 0; rep < 20; ++rep) {
        const int doublings = 1 + static_cast<int>(g.next_u64() % 6);  // lengths 2..64
        const auto [a, b] = random_gcp(g, doublings);
        REQUIRE(seqcore::is_gcp(a, b, 1e-9 * (seqcore::mean_power(a) + seqcore::mean_power(b))));

        const auto wa = seqcore::evaluate_waveform(a, 64);
        const auto wb = seqcore::evaluate_waveform(b, 64);
        double lo = 1e300, hi = -1e300;
        for (std::size_t n = 0; n < wa.samples.size(); ++n) {
            const double total = std::norm(wa.samples[n]) + std::norm(wb.samples[n]);
            lo = std::min(lo, total);
            hi = std::max(hi, total);
        }
        const double budget = 1e-8 * (seqcore::mean_power(a) + seqcore::mean_power(b));
        CHECK(hi - lo <= budget);
    }
}
