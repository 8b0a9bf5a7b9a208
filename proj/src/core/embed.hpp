#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "core/flownet.hpp"
#include "core/rng.hpp"
#include "core/types.hpp"

namespace areaflow::embed {

struct WalkConfig {
    double p = 1.0;                   // return parameter
    double q = 2.0;                   // in-out parameter
    std::uint32_t num_walks = 1000;   // total walk budget
    std::uint32_t walks_per_node = 0; // when > 0, overrides num_walks
    std::uint32_t walk_length = 80;   // max nodes per walk
    bool symmetrize = false;          // walk over the symmetrized network
    std::uint64_t seed = 1;

    void validate() const;
};

struct TrainConfig {
    std::uint32_t dim = 10;
    std::uint32_t window = 10;
    std::uint32_t negatives = 5;
    std::uint32_t epochs = 5;
    double lr_initial = 0.025;
    std::uint64_t seed = 1;

    void validate() const;
};

// Second-order transition distribution out of `cur` given the walk arrived
// from `prev`. The bias on candidate x is 1/p when x == prev, 1 when prev has
// a direct edge to x, 1/q otherwise; each is multiplied by w(cur->x).
// The result is aligned with net.out[cur] and sums to 1.
std::vector<double> transition_probs(const flownet::FlowNetwork& net, std::uint32_t prev, std::uint32_t cur,
                                     double p, double q);

// One biased step; returns the chosen target node index.
std::uint32_t sample_next(const flownet::FlowNetwork& net, std::uint32_t prev, std::uint32_t cur, double p,
                          double q, Rng& rng);

// Walks start round-robin over non-isolated nodes in node order; the first
// step is proportional to out-edge weights, later steps follow
// transition_probs. Walks truncate at dead ends. Each walk draws from its own
// RNG stream derived from (seed, walk index).
std::vector<std::vector<std::uint32_t>> sample_walks(const flownet::FlowNetwork& net, const WalkConfig& cfg);

// Loss and gradients of one skip-gram negative-sampling step:
//   L = -log sigmoid(u_ctx . v_ctr) - sum_n log sigmoid(-u_n . v_ctr)
struct SgnsGrad {
    double loss = 0.0;
    std::vector<double> d_center;
    std::vector<double> d_context;
    std::vector<std::vector<double>> d_negatives;
};

SgnsGrad sgns_loss_grad(std::span<const double> v_center, std::span<const double> u_context,
                        std::span<const std::span<const double>> u_negatives);

// Input ("v") and output ("u") matrices during/after training.
struct TrainModel {
    std::size_t dim = 0;
    std::vector<double> v;  // node_count * dim
    std::vector<double> u;
    std::span<const double> v_row(std::size_t i) const { return {v.data() + i * dim, dim}; }
    std::span<const double> u_row(std::size_t i) const { return {u.data() + i * dim, dim}; }
};

struct TrainResult {
    VectorSet embedding;                        // the "v" vectors, one per network node
    TrainModel model;                           // full state, for inspection
    std::vector<std::string> zero_vector_nodes; // nodes never visited by a walk
};

// Called after each completed epoch (1-based) with the current model.
using EpochObserver = std::function<void(std::uint32_t epoch, const TrainModel&)>;

// Trains SGNS over the walk corpus. Negatives are drawn from the corpus node
// frequencies raised to 3/4. The learning rate decays linearly from
// lr_initial to 1e-4 over all center positions. Deterministic given the seed.
TrainResult train_sgns(const flownet::FlowNetwork& net, const std::vector<std::vector<std::uint32_t>>& walks,
                       const TrainConfig& cfg, const EpochObserver& observer = nullptr);

// sample_walks + train_sgns + zeroing of never-visited nodes.
VectorSet embed_network(const flownet::FlowNetwork& net, const WalkConfig& wcfg, const TrainConfig& tcfg,
                        std::vector<std::string>* zero_vector_nodes = nullptr);

// Corpus loss under a fixed negative-sample stream; comparable across calls
// with the same eval_seed.
double corpus_loss(const std::vector<std::vector<std::uint32_t>>& walks, const TrainModel& model,
                   const TrainConfig& cfg, std::uint64_t eval_seed);

// Text format: optional leading comments, then `<node_count> <dim>`, then one
// `<zip> <v_1> ... <v_dim>` line per node with round-trip-exact floats.
void save_embedding(std::ostream& out, const VectorSet& embedding, const std::string* meta = nullptr);
VectorSet load_embedding(std::istream& in, const std::string& source);

}  // namespace areaflow::embed
