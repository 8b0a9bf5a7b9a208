#include "core/embed.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "core/error.hpp"
#include "core/meta.hpp"

namespace areaflow::embed {

namespace {

constexpr double kLrFinal = 1e-4;

// RNG stream tags for the independent phases
constexpr std::uint64_t kStreamInit = 0x696e6974;   // init
constexpr std::uint64_t kStreamTrain = 0x73676e73;  // sgns
constexpr std::uint64_t kStreamWalkBase = 0x77616c6b0000ULL;

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// -log sigmoid(x), stable for large |x|
double neg_log_sigmoid(double x) {
    if (x > 0) return std::log1p(std::exp(-x));
    return -x + std::log1p(std::exp(x));
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// Cumulative unigram^(3/4) table over corpus node frequencies.
struct NegativeTable {
    std::vector<std::uint32_t> node;  // nodes with nonzero frequency
    std::vector<double> cdf;

    void build(const std::vector<std::uint64_t>& freq) {
        double total = 0.0;
        for (std::size_t i = 0; i < freq.size(); ++i) {
            if (freq[i] == 0) continue;
            total += std::pow(static_cast<double>(freq[i]), 0.75);
        }
        double acc = 0.0;
        for (std::size_t i = 0; i < freq.size(); ++i) {
            if (freq[i] == 0) continue;
            acc += std::pow(static_cast<double>(freq[i]), 0.75) / total;
            node.push_back(static_cast<std::uint32_t>(i));
            cdf.push_back(acc);
        }
        if (!cdf.empty()) cdf.back() = 1.0;
    }

    std::uint32_t draw(Rng& rng) const {
        const double u = rng.uniform01();
        auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
        if (it == cdf.end()) --it;
        return node[it - cdf.begin()];
    }
};

std::uint32_t sample_cdf(std::span<const double> probs, Rng& rng) {
    const double u = rng.uniform01();
    double acc = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        acc += probs[i];
        if (u < acc) return static_cast<std::uint32_t>(i);
    }
    return static_cast<std::uint32_t>(probs.size() - 1);
}

}  // namespace

void WalkConfig::validate() const {
    if (!(p > 0.0)) throw_invalid("walk config: p must be > 0");
    if (!(q > 0.0)) throw_invalid("walk config: q must be > 0");
    if (num_walks < 1 && walks_per_node < 1) throw_invalid("walk config: num_walks must be >= 1");
    if (walk_length < 2) throw_invalid("walk config: walk_length must be >= 2");
}

void TrainConfig::validate() const {
    if (dim < 1) throw_invalid("train config: dim must be >= 1");
    if (window < 1) throw_invalid("train config: window must be >= 1");
    if (negatives < 1) throw_invalid("train config: negatives must be >= 1");
    if (epochs < 1) throw_invalid("train config: epochs must be >= 1");
    if (!(lr_initial > 0.0)) throw_invalid("train config: lr_initial must be > 0");
}

std::vector<double> transition_probs(const flownet::FlowNetwork& net, std::uint32_t prev, std::uint32_t cur,
                                     double p, double q) {
    const auto& adj = net.out[cur];
    if (adj.empty()) {
        throw_analysis("dead end: node '" + net.nodes[cur] + "' has no out-neighbors");
    }
    std::vector<double> probs(adj.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < adj.size(); ++i) {
        const auto [x, w] = adj[i];
        double alpha;
        if (x == prev) {
            alpha = 1.0 / p;
        } else if (net.has_edge(prev, x)) {
            alpha = 1.0;
        } else {
            alpha = 1.0 / q;
        }
        probs[i] = alpha * static_cast<double>(w);
        sum += probs[i];
    }
    for (auto& v : probs) v /= sum;
    return probs;
}

std::uint32_t sample_next(const flownet::FlowNetwork& net, std::uint32_t prev, std::uint32_t cur, double p,
                          double q, Rng& rng) {
    const auto probs = transition_probs(net, prev, cur, p, q);
    return net.out[cur][sample_cdf(probs, rng)].first;
}

std::vector<std::vector<std::uint32_t>> sample_walks(const flownet::FlowNetwork& net, const WalkConfig& cfg) {
    cfg.validate();
    const flownet::FlowNetwork* walk_net = &net;
    flownet::FlowNetwork sym;
    if (cfg.symmetrize) {
        sym = flownet::symmetrized(net);
        walk_net = &sym;
    }

    std::vector<std::uint32_t> starts;
    for (std::uint32_t i = 0; i < walk_net->nodes.size(); ++i) {
        if (!walk_net->isolated(i)) starts.push_back(i);
    }
    if (starts.empty()) {
        throw_analysis("no walkable nodes");
    }

    const std::uint64_t total =
        cfg.walks_per_node > 0 ? static_cast<std::uint64_t>(cfg.walks_per_node) * starts.size() : cfg.num_walks;

    std::vector<std::vector<std::uint32_t>> walks;
    walks.reserve(total);
    for (std::uint64_t wi = 0; wi < total; ++wi) {
        Rng rng(derive_seed(cfg.seed, kStreamWalkBase + wi));
        std::vector<std::uint32_t> walk;
        walk.reserve(cfg.walk_length);
        walk.push_back(starts[wi % starts.size()]);
        while (walk.size() < cfg.walk_length) {
            const std::uint32_t cur = walk.back();
            const auto& adj = walk_net->out[cur];
            if (adj.empty()) break;  // dead end
            if (walk.size() == 1) {
                // first step: proportional to out-edge weights
                double sum = 0.0;
                for (const auto& [_, w] : adj) sum += static_cast<double>(w);
                std::vector<double> probs(adj.size());
                for (std::size_t i = 0; i < adj.size(); ++i) {
                    probs[i] = static_cast<double>(adj[i].second) / sum;
                }
                walk.push_back(adj[sample_cdf(probs, rng)].first);
            } else {
                walk.push_back(sample_next(*walk_net, walk[walk.size() - 2], cur, cfg.p, cfg.q, rng));
            }
        }
        walks.push_back(std::move(walk));
    }
    return walks;
}

SgnsGrad sgns_loss_grad(std::span<const double> v_center, std::span<const double> u_context,
                        std::span<const std::span<const double>> u_negatives) {
    const std::size_t d = v_center.size();
    if (u_context.size() != d) throw_invalid("sgns: dimension mismatch");
    SgnsGrad g;
    g.d_center.assign(d, 0.0);
    g.d_context.assign(d, 0.0);
    g.d_negatives.resize(u_negatives.size());

    // positive pair: d/dx of -log sigmoid(x) is sigmoid(x) - 1
    const double s_pos = dot(u_context, v_center);
    g.loss += neg_log_sigmoid(s_pos);
    const double c_pos = sigmoid(s_pos) - 1.0;
    for (std::size_t i = 0; i < d; ++i) {
        g.d_center[i] += c_pos * u_context[i];
        g.d_context[i] += c_pos * v_center[i];
    }

    // negatives: d/dx of -log sigmoid(-x) is sigmoid(x)
    for (std::size_t n = 0; n < u_negatives.size(); ++n) {
        const auto& u_n = u_negatives[n];
        if (u_n.size() != d) throw_invalid("sgns: dimension mismatch");
        const double s_neg = dot(u_n, v_center);
        g.loss += neg_log_sigmoid(-s_neg);
        const double c_neg = sigmoid(s_neg);
        g.d_negatives[n].assign(d, 0.0);
        for (std::size_t i = 0; i < d; ++i) {
            g.d_center[i] += c_neg * u_n[i];
            g.d_negatives[n][i] = c_neg * v_center[i];
        }
    }
    return g;
}

TrainResult train_sgns(const flownet::FlowNetwork& net, const std::vector<std::vector<std::uint32_t>>& walks,
                       const TrainConfig& cfg, const EpochObserver& observer) {
    cfg.validate();
    if (walks.empty()) throw_invalid("train: walk corpus is empty");
    const std::size_t n = net.nodes.size();
    const std::size_t d = cfg.dim;

    std::vector<std::uint64_t> freq(n, 0);
    std::uint64_t total_positions_per_epoch = 0;
    for (const auto& w : walks) {
        for (const auto node : w) {
            if (node >= n) throw error(errc::state, "walk references a node outside the vocabulary");
            ++freq[node];
        }
        total_positions_per_epoch += w.size();
    }

    TrainResult res;
    res.model.dim = d;
    res.model.v.resize(n * d);
    res.model.u.assign(n * d, 0.0);

    {
        Rng rng(derive_seed(cfg.seed, kStreamInit));
        const double half = 0.5 / static_cast<double>(d);
        for (auto& x : res.model.v) x = rng.uniform(-half, half);
    }

    NegativeTable table;
    table.build(freq);

    Rng rng(derive_seed(cfg.seed, kStreamTrain));
    const std::uint64_t total_positions = total_positions_per_epoch * cfg.epochs;
    std::uint64_t pos = 0;
    std::vector<double> grad_center(d);
    auto* v = res.model.v.data();
    auto* u = res.model.u.data();

    for (std::uint32_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        for (const auto& walk : walks) {
            const int len = static_cast<int>(walk.size());
            for (int t = 0; t < len; ++t) {
                const double progress = static_cast<double>(pos) / static_cast<double>(total_positions);
                const double lr = cfg.lr_initial + (kLrFinal - cfg.lr_initial) * progress;
                ++pos;
                const std::uint32_t center = walk[t];
                double* vc = v + static_cast<std::size_t>(center) * d;
                const int w = static_cast<int>(cfg.window);
                for (int off = -w; off <= w; ++off) {
                    if (off == 0) continue;
                    const int j = t + off;
                    if (j < 0 || j >= len) continue;
                    const std::uint32_t context = walk[j];
                    double* uc = u + static_cast<std::size_t>(context) * d;

                    // positive pair
                    std::fill(grad_center.begin(), grad_center.end(), 0.0);
                    const double c_pos = sigmoid(dot({uc, d}, {vc, d})) - 1.0;
                    for (std::size_t i = 0; i < d; ++i) {
                        grad_center[i] += c_pos * uc[i];
                        uc[i] -= lr * c_pos * vc[i];
                    }
                    // negatives, drawn fresh per pair; a draw equal to the
                    // positive context is skipped
                    for (std::uint32_t k = 0; k < cfg.negatives; ++k) {
                        const std::uint32_t neg = table.draw(rng);
                        if (neg == context) continue;
                        double* un = u + static_cast<std::size_t>(neg) * d;
                        const double c_neg = sigmoid(dot({un, d}, {vc, d}));
                        for (std::size_t i = 0; i < d; ++i) {
                            grad_center[i] += c_neg * un[i];
                            un[i] -= lr * c_neg * vc[i];
                        }
                    }
                    for (std::size_t i = 0; i < d; ++i) vc[i] -= lr * grad_center[i];
                }
            }
        }
        if (observer) observer(epoch + 1, res.model);
    }

    // never-visited nodes keep no information from their random init
    res.embedding.nodes = net.nodes;
    res.embedding.dim = d;
    res.embedding.values = res.model.v;
    for (std::size_t i = 0; i < n; ++i) {
        if (freq[i] == 0) {
            res.zero_vector_nodes.push_back(net.nodes[i]);
            auto row = res.embedding.row(i);
            std::fill(row.begin(), row.end(), 0.0);
        }
    }
    return res;
}

VectorSet embed_network(const flownet::FlowNetwork& net, const WalkConfig& wcfg, const TrainConfig& tcfg,
                        std::vector<std::string>* zero_vector_nodes) {
    const auto walks = sample_walks(net, wcfg);
    auto res = train_sgns(net, walks, tcfg);
    if (zero_vector_nodes) *zero_vector_nodes = std::move(res.zero_vector_nodes);
    return std::move(res.embedding);
}

double corpus_loss(const std::vector<std::vector<std::uint32_t>>& walks, const TrainModel& model,
                   const TrainConfig& cfg, std::uint64_t eval_seed) {
    const std::size_t d = model.dim;
    std::vector<std::uint64_t> freq(model.v.size() / d, 0);
    for (const auto& w : walks) {
        for (const auto node : w) ++freq[node];
    }
    NegativeTable table;
    table.build(freq);

    Rng rng(eval_seed);
    double loss = 0.0;
    for (const auto& walk : walks) {
        const int len = static_cast<int>(walk.size());
        for (int t = 0; t < len; ++t) {
            const auto vc = model.v_row(walk[t]);
            const int w = static_cast<int>(cfg.window);
            for (int off = -w; off <= w; ++off) {
                if (off == 0) continue;
                const int j = t + off;
                if (j < 0 || j >= len) continue;
                const std::uint32_t context = walk[j];
                loss += neg_log_sigmoid(dot(model.u_row(context), vc));
                for (std::uint32_t k = 0; k < cfg.negatives; ++k) {
                    const std::uint32_t neg = table.draw(rng);
                    if (neg == context) continue;
                    loss += neg_log_sigmoid(-dot(model.u_row(neg), vc));
                }
            }
        }
    }
    return loss;
}

void save_embedding(std::ostream& out, const VectorSet& embedding, const std::string* meta) {
    if (meta) out << "# meta: " << *meta << '\n';
    out << embedding.nodes.size() << ' ' << embedding.dim << '\n';
    for (std::size_t i = 0; i < embedding.nodes.size(); ++i) {
        out << embedding.nodes[i];
        for (const double x : embedding.row(i)) out << ' ' << format_double(x);
        out << '\n';
    }
}

VectorSet load_embedding(std::istream& in, const std::string& source) {
    std::string line;
    std::size_t line_no = 0;
    // skip leading comments
    for (;;) {
        if (!std::getline(in, line)) throw_parse(source, line_no + 1, "missing '<node_count> <dim>' header");
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        break;
    }
    std::size_t count = 0, dim = 0;
    {
        std::istringstream hs(line);
        if (!(hs >> count >> dim) || dim < 1) {
            throw_parse(source, line_no, "bad header '" + line + "' (expected '<node_count> <dim>')");
        }
        std::string extra;
        if (hs >> extra) throw_parse(source, line_no, "trailing data in header");
    }

    VectorSet vs;
    vs.dim = dim;
    vs.nodes.reserve(count);
    vs.values.reserve(count * dim);
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string node;
        if (!(ls >> node)) throw_parse(source, line_no, "missing node id");
        std::vector<double> row;
        std::string tok;
        while (ls >> tok) {
            double x = 0.0;
            auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), x);
            if (ec != std::errc() || p != tok.data() + tok.size()) {
                throw_parse(source, line_no, "bad vector component '" + tok + "'");
            }
            row.push_back(x);
        }
        if (row.size() != dim) {
            throw_parse(source, line_no,
                        "expected " + std::to_string(dim) + " components, got " + std::to_string(row.size()));
        }
        vs.nodes.push_back(std::move(node));
        vs.values.insert(vs.values.end(), row.begin(), row.end());
    }
    if (vs.nodes.size() != count) {
        throw_parse(source, line_no,
                    "header declares " + std::to_string(count) + " nodes, file contains " +
                        std::to_string(vs.nodes.size()));
    }
    return vs;
}

}  // namespace areaflow::embed
