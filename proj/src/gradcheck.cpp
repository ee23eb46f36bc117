#include "golayae/nn.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace golayae::nn {

namespace {

double rel_err(double a, double f) {
    return std::abs(a - f) / std::max({std::abs(a), std::abs(f), 1.0});
}

double dot(const Tensor& a, const Tensor& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a.v[i] * b.v[i];
    return acc;
}

Tensor random_tensor(rng::SplitMix64& g, std::size_t rows, std::size_t cols, double lo, double hi) {
    Tensor t(rows, cols);
    for (double& v : t.v) v = g.next_uniform(lo, hi);
    return t;
}

// Sweeps every coordinate of vals with central differences of the scalar
// probe and tracks the worst relative error against the analytic gradient.
double sweep(double* vals, const double* analytic, std::size_t n, double h,
             const std::function<double()>& probe) {
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double save = vals[i];
        vals[i] = save + h;
        const double jp = probe();
        vals[i] = save - h;
        const double jm = probe();
        vals[i] = save;
        worst = std::max(worst, rel_err(analytic[i], (jp - jm) / (2.0 * h)));
    }
    return worst;
}

} // namespace

double gradcheck_dense(std::uint64_t seed, double h) {
    rng::SplitMix64 g(seed);
    Dense layer(3, 2);
    layer.init_glorot(g);
    Tensor x = random_tensor(g, 4, 3, -1.0, 1.0);
    for (double& v : layer.b) v = g.next_uniform(-0.5, 0.5);
    const Tensor out = layer.forward(x, true);
    const Tensor c = random_tensor(g, out.rows, out.cols, -1.0, 1.0);
    const Tensor dx = layer.backward(c);

    const auto probe = [&] { return dot(layer.forward(x, true), c); };
    double worst = sweep(x.v.data(), dx.v.data(), x.size(), h, probe);
    worst = std::max(worst, sweep(layer.w.v.data(), layer.dw.v.data(), layer.w.size(), h, probe));
    worst = std::max(worst, sweep(layer.b.data(), layer.db.data(), layer.b.size(), h, probe));
    return worst;
}

double gradcheck_batchnorm(std::uint64_t seed, double h) {
    rng::SplitMix64 g(seed);
    BatchNorm layer(4);
    for (double& v : layer.gamma) v = g.next_uniform(0.5, 1.5);
    for (double& v : layer.beta) v = g.next_uniform(-0.5, 0.5);
    Tensor x = random_tensor(g, 5, 4, -2.0, 2.0);
    const Tensor out = layer.forward(x, true);
    const Tensor c = random_tensor(g, out.rows, out.cols, -1.0, 1.0);
    const Tensor dx = layer.backward(c);
    std::vector<double> dgamma = layer.dgamma, dbeta = layer.dbeta;

    const auto probe = [&] { return dot(layer.forward(x, true), c); };
    double worst = sweep(x.v.data(), dx.v.data(), x.size(), h, probe);
    worst = std::max(worst, sweep(layer.gamma.data(), dgamma.data(), layer.gamma.size(), h, probe));
    worst = std::max(worst, sweep(layer.beta.data(), dbeta.data(), layer.beta.size(), h, probe));
    return worst;
}

double gradcheck_softmax_xent(std::uint64_t seed, double h) {
    rng::SplitMix64 g(seed);
    Tensor logits = random_tensor(g, 4, 8, -2.0, 2.0);
    std::vector<int> labels(4);
    for (int& l : labels) l = static_cast<int>(g.next_u64() % 8);

    SoftmaxXent layer;
    layer.forward(logits, labels, true);
    const Tensor dlogits = layer.backward();
    const auto probe = [&] { return layer.forward(logits, labels, true); };
    return sweep(logits.v.data(), dlogits.v.data(), logits.size(), h, probe);
}

double gradcheck_golay(int m, double alpha, double beta, std::uint64_t seed, double h) {
    rng::SplitMix64 g(seed);
    GolayLayer layer(GolayLayerConfig::defaults(m, alpha, beta));
    const std::size_t features = 2 * static_cast<std::size_t>(m) + 1;
    Tensor x(3, features);
    for (std::size_t i = 0; i < x.rows; ++i) {
        for (int n = 0; n < m; ++n) x(i, static_cast<std::size_t>(n)) = g.next_uniform(-2.0, 1.0);
        for (int n = 0; n <= m; ++n)
            x(i, static_cast<std::size_t>(m + n)) = g.next_uniform(-1.0, 1.0);
    }
    const Tensor out = layer.forward(x, true);
    const Tensor c = random_tensor(g, out.rows, out.cols, -1.0, 1.0);
    const Tensor dx = layer.backward(c);

    const auto probe = [&] { return dot(layer.forward(x, true), c); };
    return sweep(x.v.data(), dx.v.data(), x.size(), h, probe);
}

double gradcheck_p2c(std::uint64_t seed, double h) {
    rng::SplitMix64 g(seed);
    P2C layer;
    Tensor x = random_tensor(g, 3, 6, -1.5, 1.0);
    Tensor y = random_tensor(g, 3, 6, -3.0, 3.0);
    auto [a, b] = layer.forward(x, y, true);
    const Tensor ca = random_tensor(g, a.rows, a.cols, -1.0, 1.0);
    const Tensor cb = random_tensor(g, b.rows, b.cols, -1.0, 1.0);
    auto [dx, dy] = layer.backward(ca, cb);

    const auto probe = [&] {
        auto [pa, pb] = layer.forward(x, y, true);
        return dot(pa, ca) + dot(pb, cb);
    };
    double worst = sweep(x.v.data(), dx.v.data(), x.size(), h, probe);
    worst = std::max(worst, sweep(y.v.data(), dy.v.data(), y.size(), h, probe));
    return worst;
}

double gradcheck_clipping_interior(std::uint64_t seed) {
    rng::SplitMix64 g(seed);
    Clipping layer(5, -2.0, 1.0);
    Tensor x(4, 5);
    for (double& v : x.v) v = g.next_uniform(-1.9, 0.9);  // strictly interior
    layer.forward(x, true);
    const Tensor c = random_tensor(g, 4, 5, -1.0, 1.0);
    const Tensor dx = layer.backward(c);
    // piecewise linear: the analytic gradient must equal the upstream exactly
    double worst = 0.0;
    for (std::size_t i = 0; i < dx.size(); ++i)
        worst = std::max(worst, std::abs(dx.v[i] - c.v[i]));
    return worst;
}

std::vector<GradCheckRow> gradcheck_all(std::uint64_t seed) {
    constexpr double kTwoPi = 6.283185307179586476925286766559;
    return {
        {"dense", gradcheck_dense(seed)},
        {"batchnorm", gradcheck_batchnorm(seed)},
        {"softmax_xent", gradcheck_softmax_xent(seed)},
        {"golay_m2", gradcheck_golay(2, 1.0, kTwoPi, seed)},
        {"golay_m3", gradcheck_golay(3, 1.0, kTwoPi, seed)},
        {"golay_m5", gradcheck_golay(5, 1.0, kTwoPi, seed)},
        {"p2c", gradcheck_p2c(seed)},
        {"clipping", gradcheck_clipping_interior(seed)},
    };
}

} // namespace golayae::nn
