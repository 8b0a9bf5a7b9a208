#include "core/simanalysis.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <unordered_map>

#include <boost/math/distributions/students_t.hpp>

#include "core/csv.hpp"
#include "core/error.hpp"
#include "core/meta.hpp"

namespace areaflow::simanalysis {

namespace {

// Flattened strictly-upper-triangle values of the aligned matrices.
std::pair<std::vector<double>, std::vector<double>> aligned_upper_triangles(const SimilarityMatrix& a,
                                                                            const SimilarityMatrix& b,
                                                                            const Alignment& common) {
    std::unordered_map<std::string_view, std::size_t> ia, ib;
    for (std::size_t i = 0; i < a.nodes.size(); ++i) ia.emplace(a.nodes[i], i);
    for (std::size_t i = 0; i < b.nodes.size(); ++i) ib.emplace(b.nodes[i], i);
    const std::size_t n = common.nodes.size();
    std::vector<double> xs, ys;
    xs.reserve(n * (n - 1) / 2);
    ys.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            xs.push_back(a.at(ia.at(common.nodes[i]), ia.at(common.nodes[j])));
            ys.push_back(b.at(ib.at(common.nodes[i]), ib.at(common.nodes[j])));
        }
    }
    return {std::move(xs), std::move(ys)};
}

double pearson_rho(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) {
        throw_analysis("degenerate similarity vector: zero variance");
    }
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace

double similarity(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw_invalid("similarity: dimension mismatch (" + std::to_string(x.size()) + " vs " +
                      std::to_string(y.size()) + ")");
    }
    double sq = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        sq += d * d;
    }
    return std::exp(-std::sqrt(sq));
}

SimilarityMatrix similarity_matrix(const VectorSet& representation) {
    const std::size_t n = representation.nodes.size();
    if (n == 0) throw_invalid("similarity_matrix: empty representation");
    SimilarityMatrix s;
    s.nodes = representation.nodes;
    s.sigma.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        s.sigma[i * n + i] = 1.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = similarity(representation.row(i), representation.row(j));
            s.sigma[i * n + j] = v;
            s.sigma[j * n + i] = v;
        }
    }
    return s;
}

Alignment align_nodes(const SimilarityMatrix& a, const SimilarityMatrix& b) {
    std::set<std::string> sa(a.nodes.begin(), a.nodes.end());
    std::set<std::string> sb(b.nodes.begin(), b.nodes.end());
    Alignment out;
    std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(out.nodes));
    if (out.nodes.empty()) {
        throw_analysis("node sets are disjoint, nothing to compare");
    }
    out.only_in_a = sa.size() - out.nodes.size();
    out.only_in_b = sb.size() - out.nodes.size();
    return out;
}

PearsonResult pearson_compare(const SimilarityMatrix& a, const SimilarityMatrix& b, bool on_distances) {
    const auto common = align_nodes(a, b);
    if (common.nodes.size() < 3) {
        throw_analysis("need at least 3 common nodes for a correlation");
    }
    auto [xs, ys] = aligned_upper_triangles(a, b, common);
    if (on_distances) {
        for (auto& v : xs) v = -std::log(v);
        for (auto& v : ys) v = -std::log(v);
    }

    PearsonResult res;
    res.n_pairs = xs.size();
    res.rho = pearson_rho(xs, ys);
    const double df = static_cast<double>(res.n_pairs - 2);
    const double denom = std::max(1.0 - res.rho * res.rho, 1e-300);
    res.t_stat = res.rho * std::sqrt(df / denom);
    boost::math::students_t_distribution<double> dist(df);
    res.p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(res.t_stat)));
    return res;
}

std::vector<std::string> top_k_neighbors(const SimilarityMatrix& s, std::size_t index, std::uint32_t k) {
    const std::size_t n = s.nodes.size();
    if (k >= n) {
        throw_invalid("top_k_neighbors: k=" + std::to_string(k) + " must be < node count " + std::to_string(n));
    }
    std::vector<std::size_t> order;
    order.reserve(n - 1);
    for (std::size_t j = 0; j < n; ++j) {
        if (j != index) order.push_back(j);
    }
    std::partial_sort(order.begin(), order.begin() + k, order.end(), [&](std::size_t x, std::size_t y) {
        const double sx = s.at(index, x), sy = s.at(index, y);
        if (sx != sy) return sx > sy;
        return s.nodes[x] < s.nodes[y];
    });
    std::vector<std::string> out;
    out.reserve(k);
    for (std::uint32_t i = 0; i < k; ++i) out.push_back(s.nodes[order[i]]);
    return out;
}

std::vector<std::string> top_k_neighbors(const SimilarityMatrix& s, std::string_view node, std::uint32_t k) {
    for (std::size_t i = 0; i < s.nodes.size(); ++i) {
        if (s.nodes[i] == node) return top_k_neighbors(s, i, k);
    }
    throw_invalid("top_k_neighbors: unknown node '" + std::string(node) + "'");
}

double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
    if (a.empty() && b.empty()) return 1.0;
    std::size_t inter = 0;
    for (const auto& x : a) inter += b.count(x);
    const std::size_t uni = a.size() + b.size() - inter;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

OverlapReport neighbor_overlap_report(const SimilarityMatrix& a, const SimilarityMatrix& b, std::uint32_t k,
                                      std::uint32_t k_max) {
    const auto common = align_nodes(a, b);
    const std::size_t n = common.nodes.size();
    if (k >= n) {
        throw_invalid("neighbor overlap: k=" + std::to_string(k) + " must be < common node count " +
                      std::to_string(n));
    }

    // Restrict both matrices to the common nodes so top-k sets are comparable.
    auto restrict_to = [&](const SimilarityMatrix& s) {
        std::unordered_map<std::string_view, std::size_t> idx;
        for (std::size_t i = 0; i < s.nodes.size(); ++i) idx.emplace(s.nodes[i], i);
        SimilarityMatrix r;
        r.nodes = common.nodes;
        r.sigma.assign(n * n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                r.sigma[i * n + j] = s.at(idx.at(common.nodes[i]), idx.at(common.nodes[j]));
            }
        }
        return r;
    };
    const SimilarityMatrix ra = restrict_to(a);
    const SimilarityMatrix rb = restrict_to(b);

    auto mean_at = [&](std::uint32_t kk, std::map<std::string, double>* per_node) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const auto na = top_k_neighbors(ra, i, kk);
            const auto nb = top_k_neighbors(rb, i, kk);
            const double j = jaccard({na.begin(), na.end()}, {nb.begin(), nb.end()});
            if (per_node) (*per_node)[common.nodes[i]] = j;
            sum += j;
        }
        return sum / static_cast<double>(n);
    };

    OverlapReport rep;
    rep.k = k;
    rep.mean = mean_at(k, &rep.per_node);
    const std::uint32_t sweep_max = std::min<std::uint32_t>(k_max, static_cast<std::uint32_t>(n - 1));
    for (std::uint32_t kk = 1; kk <= sweep_max; ++kk) {
        rep.by_k.emplace_back(kk, kk == k ? rep.mean : mean_at(kk, nullptr));
    }
    return rep;
}

std::vector<double> cross_period_correlation(std::span<const VectorSet* const> embeddings) {
    const std::size_t m = embeddings.size();
    if (m < 2) throw_invalid("cross-period correlation needs at least 2 embeddings");
    std::vector<SimilarityMatrix> mats;
    mats.reserve(m);
    for (const auto* e : embeddings) {
        if (!e) throw_invalid("cross-period correlation: null embedding");
        mats.push_back(similarity_matrix(*e));
    }
    std::vector<double> rho(m * m, 1.0);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            const double r = pearson_compare(mats[i], mats[j]).rho;
            rho[i * m + j] = r;
            rho[j * m + i] = r;
        }
    }
    return rho;
}

void save_similarity_csv(std::ostream& out, const SimilarityMatrix& s, const std::string* meta) {
    if (meta) out << "# meta: " << *meta << '\n';
    const std::size_t n = s.nodes.size();
    std::vector<std::string> row;
    row.emplace_back("zip");
    row.insert(row.end(), s.nodes.begin(), s.nodes.end());
    csv::write_row(out, row);
    for (std::size_t i = 0; i < n; ++i) {
        row.clear();
        row.push_back(s.nodes[i]);
        for (std::size_t j = 0; j < n; ++j) row.push_back(format_double(s.at(i, j)));
        csv::write_row(out, row);
    }
}

SimilarityMatrix load_similarity_csv(std::istream& in, const std::string& source) {
    csv::Reader r(in, source);
    std::vector<std::string> f;
    if (!r.next(f)) throw_parse(source, 1, "empty file, expected label header");
    if (f.size() < 2 || f[0] != "zip") {
        throw_parse(source, r.record_line(), "bad header, expected 'zip,<labels...>'");
    }
    SimilarityMatrix s;
    s.nodes.assign(f.begin() + 1, f.end());
    const std::size_t n = s.nodes.size();
    s.sigma.reserve(n * n);
    std::size_t rows = 0;
    while (r.next(f)) {
        if (f.size() != n + 1) {
            throw_parse(source, r.record_line(),
                        "expected " + std::to_string(n + 1) + " fields, got " + std::to_string(f.size()));
        }
        if (rows >= n) throw_parse(source, r.record_line(), "more rows than labels");
        if (f[0] != s.nodes[rows]) {
            throw_parse(source, r.record_line(), "row label '" + f[0] + "' does not match column label '" +
                                                     s.nodes[rows] + "'");
        }
        for (std::size_t j = 1; j <= n; ++j) {
            double x = 0.0;
            auto [p, ec] = std::from_chars(f[j].data(), f[j].data() + f[j].size(), x);
            if (ec != std::errc() || p != f[j].data() + f[j].size()) {
                throw_parse(source, r.record_line(), "bad value '" + f[j] + "'");
            }
            s.sigma.push_back(x);
        }
        ++rows;
    }
    if (rows != n) {
        throw_parse(source, r.record_line() + 1,
                    "expected " + std::to_string(n) + " rows, got " + std::to_string(rows));
    }
    return s;
}

}  // namespace areaflow::simanalysis
