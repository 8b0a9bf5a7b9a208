#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "core/types.hpp"

namespace areaflow::simanalysis {

// Pairwise similarities sigma_ij = exp(-||x_i - x_j||) over an ordered node
// list; symmetric, unit diagonal, entries in (0, 1].
struct SimilarityMatrix {
    std::vector<std::string> nodes;
    std::vector<double> sigma;  // n*n row-major

    double at(std::size_t i, std::size_t j) const { return sigma[i * nodes.size() + j]; }
};

double similarity(std::span<const double> x, std::span<const double> y);

SimilarityMatrix similarity_matrix(const VectorSet& representation);

struct Alignment {
    std::vector<std::string> nodes;  // lexicographic intersection
    std::size_t only_in_a = 0;
    std::size_t only_in_b = 0;
};

Alignment align_nodes(const SimilarityMatrix& a, const SimilarityMatrix& b);

struct PearsonResult {
    double rho = 0.0;
    double t_stat = 0.0;
    double p_value = 1.0;
    std::uint64_t n_pairs = 0;
};

// Pearson correlation over the strictly-upper-triangle entries of both
// matrices after node alignment. `on_distances` correlates -log(sigma)
// instead of sigma. The significance test is two-sided Student-t with
// n_pairs - 2 degrees of freedom.
PearsonResult pearson_compare(const SimilarityMatrix& a, const SimilarityMatrix& b, bool on_distances = false);

// The k nodes j != i with the largest sigma_ij; ties broken by node order.
std::vector<std::string> top_k_neighbors(const SimilarityMatrix& s, std::string_view node, std::uint32_t k);
std::vector<std::string> top_k_neighbors(const SimilarityMatrix& s, std::size_t index, std::uint32_t k);

// |A n B| / |A u B|; 1 when both sets are empty.
double jaccard(const std::set<std::string>& a, const std::set<std::string>& b);

struct OverlapReport {
    std::uint32_t k = 0;
    std::map<std::string, double> per_node;               // node -> Jaccard of top-k sets
    double mean = 0.0;
    std::vector<std::pair<std::uint32_t, double>> by_k;   // mean Jaccard for k' = 1..k_max
};

// Per-node overlap of top-k neighbor sets from two similarity matrices, the
// mean over nodes, and the k-sweep curve.
OverlapReport neighbor_overlap_report(const SimilarityMatrix& a, const SimilarityMatrix& b, std::uint32_t k,
                                      std::uint32_t k_max);

// Pairwise rho between per-period embeddings; row-major K x K, unit diagonal,
// symmetric. Input order defines the row/column order.
std::vector<double> cross_period_correlation(std::span<const VectorSet* const> embeddings);

// CSV: label row, then one row per node: label + n similarity values.
void save_similarity_csv(std::ostream& out, const SimilarityMatrix& s, const std::string* meta = nullptr);
SimilarityMatrix load_similarity_csv(std::istream& in, const std::string& source);

}  // namespace areaflow::simanalysis
