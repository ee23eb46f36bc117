#include "golayae/autoencoder.hpp"

#include <json.hpp>

#include <fstream>
#include <utility>

namespace golayae::ae {

namespace {

using nlohmann::json;

constexpr int kVersion = 1;
constexpr const char* kFormat = "golay-ae-checkpoint";

struct ArrayRef {
    std::string name;
    double* data;
    std::vector<std::size_t> shape;
    std::size_t count() const {
        std::size_t n = 1;
        for (std::size_t s : shape) n *= s;
        return n;
    }
};

// Every persisted array with its stable path, in a fixed order.
std::vector<ArrayRef> manifest(Network& net) {
    std::vector<ArrayRef> out;
    const auto add_dense = [&out](const std::string& prefix, nn::Dense& d) {
        out.push_back({prefix + ".w", d.w.v.data(), {d.w.rows, d.w.cols}});
        out.push_back({prefix + ".b", d.b.data(), {d.b.size()}});
    };
    const auto add_bn = [&out](const std::string& prefix, nn::BatchNorm& bn) {
        out.push_back({prefix + ".gamma", bn.gamma.data(), {bn.gamma.size()}});
        out.push_back({prefix + ".beta", bn.beta.data(), {bn.beta.size()}});
        out.push_back({prefix + ".run_mean", bn.run_mean.data(), {bn.run_mean.size()}});
        out.push_back({prefix + ".run_var", bn.run_var.data(), {bn.run_var.size()}});
    };
    for (std::size_t i = 0; i < net.tx_dense.size(); ++i)
        add_dense("tx.dense." + std::to_string(i), net.tx_dense[i]);
    for (std::size_t i = 0; i < net.tx_bn.size(); ++i)
        add_bn("tx.bn." + std::to_string(i), net.tx_bn[i]);
    for (std::size_t i = 0; i < net.rx_dense.size(); ++i)
        add_dense("rx.dense." + std::to_string(i), net.rx_dense[i]);
    for (std::size_t i = 0; i < net.rx_bn.size(); ++i)
        add_bn("rx.bn." + std::to_string(i), net.rx_bn[i]);
    return out;
}

json config_to_json(const NetworkConfig& cfg) {
    return json{{"S", cfg.S},
                {"m", cfg.m},
                {"alpha", cfg.alpha},
                {"beta", cfg.beta},
                {"permutation", cfg.effective_permutation()},
                {"tx_hidden", cfg.tx_hidden},
                {"rx_hidden", cfg.rx_hidden},
                {"clip_e", {cfg.clip_e_lo, cfg.clip_e_hi}},
                {"clip_k", {cfg.clip_k_lo, cfg.clip_k_hi}}};
}

NetworkConfig config_from_json(const json& j) {
    NetworkConfig cfg;
    cfg.S = j.at("S").get<int>();
    cfg.m = j.at("m").get<int>();
    cfg.alpha = j.at("alpha").get<double>();
    cfg.beta = j.at("beta").get<double>();
    cfg.permutation = j.at("permutation").get<std::vector<int>>();
    cfg.tx_hidden = j.at("tx_hidden").get<std::vector<std::size_t>>();
    cfg.rx_hidden = j.at("rx_hidden").get<std::vector<std::size_t>>();
    const auto ce = j.at("clip_e").get<std::vector<double>>();
    const auto ck = j.at("clip_k").get<std::vector<double>>();
    if (ce.size() != 2 || ck.size() != 2)
        throw CheckpointShapeError("checkpoint: clip ranges must have two entries");
    cfg.clip_e_lo = ce[0];
    cfg.clip_e_hi = ce[1];
    cfg.clip_k_lo = ck[0];
    cfg.clip_k_hi = ck[1];
    return cfg;
}

} // namespace

void save_checkpoint(Network& net, const std::string& path) {
    json j;
    j["format"] = kFormat;
    j["version"] = kVersion;
    j["network"] = config_to_json(net.config());
    json params = json::object();
    for (const ArrayRef& a : manifest(net)) {
        json entry;
        entry["shape"] = a.shape;
        entry["data"] = std::vector<double>(a.data, a.data + a.count());
        params[a.name] = std::move(entry);
    }
    j["params"] = std::move(params);

    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_checkpoint: cannot open " + path);
    out << j.dump();
    out << '\n';
    if (!out) throw std::runtime_error("save_checkpoint: write failed for " + path);
}

Network load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CheckpointParseError("load_checkpoint: cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw CheckpointParseError(std::string("load_checkpoint: ") + e.what());
    }

    try {
        if (!j.contains("format") || j.at("format").get<std::string>() != kFormat)
            throw CheckpointParseError("load_checkpoint: not a checkpoint file");
        if (!j.contains("version") || !j.at("version").is_number_integer())
            throw CheckpointVersionError("load_checkpoint: missing version field");
        if (const int v = j.at("version").get<int>(); v != kVersion)
            throw CheckpointVersionError("load_checkpoint: unsupported version " +
                                         std::to_string(v));

        Network net(config_from_json(j.at("network")), /*init_seed=*/0);
        const json& params = j.at("params");
        if (!params.is_object())
            throw CheckpointShapeError("load_checkpoint: params must be an object");

        std::size_t consumed = 0;
        for (const ArrayRef& a : manifest(net)) {
            if (!params.contains(a.name))
                throw CheckpointShapeError("load_checkpoint: missing array " + a.name);
            const json& entry = params.at(a.name);
            const auto shape = entry.at("shape").get<std::vector<std::size_t>>();
            if (shape != a.shape)
                throw CheckpointShapeError("load_checkpoint: shape mismatch for " + a.name);
            const auto data = entry.at("data").get<std::vector<double>>();
            if (data.size() != a.count())
                throw CheckpointShapeError("load_checkpoint: element count mismatch for " + a.name);
            std::copy(data.begin(), data.end(), a.data);
            ++consumed;
        }
        if (params.size() != consumed)
            throw CheckpointShapeError("load_checkpoint: unexpected extra arrays in params");
        return net;
    } catch (const json::exception& e) {
        throw CheckpointParseError(std::string("load_checkpoint: ") + e.what());
    }
}

} // namespace golayae::ae
