#include "pals/graph.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

namespace pals {

Standardizer Standardizer::fit(const std::vector<Instance>& pool) {
    if (pool.empty()) throw UsageError("Standardizer::fit: empty pool");
    const std::size_t dim = pool.front().features.size();
    Standardizer s;
    s.mean_.assign(dim, 0.0);
    s.stddev_.assign(dim, 0.0);
    for (const auto& inst : pool) {
        if (inst.features.size() != dim)
            throw UsageError("Standardizer::fit: inconsistent feature dimension");
        for (std::size_t d = 0; d < dim; ++d) s.mean_[d] += inst.features[d];
    }
    const auto n = static_cast<double>(pool.size());
    for (std::size_t d = 0; d < dim; ++d) s.mean_[d] /= n;
    for (const auto& inst : pool)
        for (std::size_t d = 0; d < dim; ++d) {
            const double diff = inst.features[d] - s.mean_[d];
            s.stddev_[d] += diff * diff;
        }
    for (std::size_t d = 0; d < dim; ++d) {
        s.stddev_[d] = std::sqrt(s.stddev_[d] / n);
        if (s.stddev_[d] <= 0.0) s.stddev_[d] = 1.0;
    }
    return s;
}

Standardizer Standardizer::identity(std::size_t dim) {
    Standardizer s;
    s.mean_.assign(dim, 0.0);
    s.stddev_.assign(dim, 1.0);
    return s;
}

std::vector<double> Standardizer::apply(const std::vector<double>& features) const {
    if (features.size() != mean_.size())
        throw UsageError("Standardizer: feature dimension mismatch");
    std::vector<double> z(features.size());
    for (std::size_t d = 0; d < features.size(); ++d)
        z[d] = (features[d] - mean_[d]) / stddev_[d];
    return z;
}

void Standardizer::set(std::vector<double> mean, std::vector<double> stddev) {
    if (mean.size() != stddev.size()) throw UsageError("Standardizer: mean/std size mismatch");
    mean_ = std::move(mean);
    stddev_ = std::move(stddev);
}

// ---------------------------------------------------------------------------

void ProximityGraph::init_nodes(std::vector<Instance> instances,
                                std::optional<Standardizer> standardizer) {
    if (instances.empty()) throw UsageError("graph build: no instances");
    standardizer_ = standardizer ? std::move(*standardizer) : Standardizer::fit(instances);
    nodes_ = std::move(instances);
    z_.clear();
    z_.reserve(nodes_.size());
    id_to_index_.clear();
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        auto& inst = nodes_[i];
        if (!id_to_index_.emplace(inst.id, i).second)
            throw UsageError("graph build: duplicate instance id " + std::to_string(inst.id));
        z_.push_back(standardizer_.apply(inst.features));
        if (inst.true_label) {
            inst.distribution = LabelDistribution::one_hot(*inst.true_label);
        } else {
            inst.distribution = LabelDistribution::uniform();
        }
    }
    isolated_.assign(nodes_.size(), 0);
}

double ProximityGraph::zdist(std::size_t i, std::size_t j) const {
    return pairwise_distance(z_[i], z_[j]);
}

double ProximityGraph::affinity(double distance) const {
    const double s = sigma();
    return edge_scale_ * std::exp(-(distance * distance) / (2.0 * s * s));
}

void ProximityGraph::build_neighborhoods() {
    const std::size_t n = nodes_.size();
    const auto k = static_cast<std::size_t>(config_.k);
    knn_.assign(n, {});
    double kth_distance_sum = 0.0;

    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        order.erase(order.begin() + static_cast<std::ptrdiff_t>(i));
        const std::size_t keep = std::min(k, order.size());
        std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep),
                          order.end(), [&](std::size_t a, std::size_t b) {
                              const double da = zdist(i, a);
                              const double db = zdist(i, b);
                              if (da != db) return da < db;
                              return nodes_[a].id < nodes_[b].id;
                          });
        knn_[i].assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep));
        if (!knn_[i].empty()) kth_distance_sum += zdist(i, knn_[i].back());
    }
    if (config_.sigma <= 0.0) {
        double mean_kth = kth_distance_sum / static_cast<double>(n);
        config_.sigma = mean_kth > 0.0 ? mean_kth : 1.0;
    }
    rebuild_adjacency();
}

void ProximityGraph::rebuild_adjacency() {
    const std::size_t n = nodes_.size();
    adj_.assign(n, {});
    // kappa sets are directional; the edge set is their union.
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j : knn_[i]) {
            const std::size_t a = std::min(i, j);
            const std::size_t b = std::max(i, j);
            bool already = false;
            for (const auto& [nb, w] : adj_[a])
                if (nb == b) {
                    already = true;
                    break;
                }
            if (already) continue;
            const double w = affinity(zdist(i, j));
            adj_[a].emplace_back(b, w);
            adj_[b].emplace_back(a, w);
        }
    }
    for (auto& row : adj_)
        std::sort(row.begin(), row.end(),
                  [](const auto& x, const auto& y) { return x.first < y.first; });
}

ProximityGraph ProximityGraph::build_knn(std::vector<Instance> instances, int k) {
    KernelConfig cfg;
    cfg.kind = KernelConfig::Kind::kNN;
    cfg.k = k;
    return build_knn(std::move(instances), cfg);
}

ProximityGraph ProximityGraph::build_knn(std::vector<Instance> instances, KernelConfig config,
                                         std::optional<Standardizer> standardizer) {
    if (config.k < 1 || static_cast<std::size_t>(config.k) >= instances.size())
        throw ConfigError("build_knn: need 1 <= k < pool size, got k=" +
                          std::to_string(config.k) + " with " +
                          std::to_string(instances.size()) + " instances");
    config.kind = KernelConfig::Kind::kNN;
    ProximityGraph g(config);
    g.init_nodes(std::move(instances), std::move(standardizer));
    g.build_neighborhoods();
    return g;
}

ProximityGraph ProximityGraph::build_rbf(std::vector<Instance> instances, double sigma,
                                         std::optional<Standardizer> standardizer) {
    if (sigma <= 0.0) throw ConfigError("build_rbf: sigma must be positive");
    KernelConfig cfg;
    cfg.kind = KernelConfig::Kind::RBF;
    cfg.sigma = sigma;
    ProximityGraph g(cfg);
    g.init_nodes(std::move(instances), std::move(standardizer));
    return g;
}

std::vector<std::pair<std::size_t, double>> ProximityGraph::neighbor_row(std::size_t i) const {
    if (config_.kind == KernelConfig::Kind::kNN) return adj_[i];
    std::vector<std::pair<std::size_t, double>> row;
    row.reserve(nodes_.size() - 1);
    for (std::size_t j = 0; j < nodes_.size(); ++j)
        if (j != i) row.emplace_back(j, affinity(zdist(i, j)));
    return row;
}

int ProximityGraph::propagate(const PropagationConfig& config) {
    if (config.max_iterations < 1 || config.tolerance <= 0.0)
        throw ConfigError("propagate: max_iterations >= 1 and tolerance > 0 required");
    if (nodes_.empty()) throw UsageError("propagate: empty graph");

    std::vector<std::size_t> unlabeled;
    std::size_t labeled = 0;
    std::vector<double> prior(kNumClasses, 0.0);
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (nodes_[i].true_label) {
            nodes_[i].distribution = LabelDistribution::one_hot(*nodes_[i].true_label);
            prior[static_cast<std::size_t>(*nodes_[i].true_label)] += 1.0;
            ++labeled;
        } else {
            unlabeled.push_back(i);
        }
    }
    if (unlabeled.empty()) return 0;
    if (labeled == 0) throw UsageError("propagate: no labeled node in graph");
    for (double& p : prior) p /= static_cast<double>(labeled);

    // Freeze neighbor rows; only distributions move between sweeps.
    std::vector<std::vector<std::pair<std::size_t, double>>> rows;
    rows.reserve(unlabeled.size());
    std::vector<std::size_t> active;
    for (std::size_t u : unlabeled) {
        auto row = neighbor_row(u);
        double total = 0.0;
        for (const auto& [j, w] : row) total += w;
        if (total <= 0.0) {
            nodes_[u].distribution = LabelDistribution(prior);
            isolated_[u] = 1;
        } else {
            isolated_[u] = 0;
            rows.push_back(std::move(row));
            active.push_back(u);
        }
    }

    int iterations = 0;
    std::vector<LabelDistribution> next(active.size());
    for (; iterations < config.max_iterations; ++iterations) {
        double max_change = 0.0;
        for (std::size_t idx = 0; idx < active.size(); ++idx) {
            std::vector<double> acc(kNumClasses, 0.0);
            double total = 0.0;
            for (const auto& [j, w] : rows[idx]) {
                total += w;
                const auto& p = nodes_[j].distribution.p;
                for (std::size_t c = 0; c < kNumClasses; ++c) acc[c] += w * p[c];
            }
            double sum = 0.0;
            for (std::size_t c = 0; c < kNumClasses; ++c) {
                acc[c] /= total;
                sum += acc[c];
            }
            for (std::size_t c = 0; c < kNumClasses; ++c) acc[c] /= sum;
            next[idx] = LabelDistribution(std::move(acc));
        }
        for (std::size_t idx = 0; idx < active.size(); ++idx) {
            const auto& old_p = nodes_[active[idx]].distribution.p;
            for (std::size_t c = 0; c < kNumClasses; ++c)
                max_change = std::max(max_change, std::abs(next[idx].p[c] - old_p[c]));
            nodes_[active[idx]].distribution = next[idx];
        }
        if (max_change < config.tolerance) {
            ++iterations;
            break;
        }
    }
    return iterations;
}

LabelDistribution ProximityGraph::weighted_average(const std::vector<double>& z,
                                                   std::optional<std::size_t> exclude) const {
    struct Cand {
        std::size_t index;
        double distance;
    };
    std::vector<Cand> cands;
    cands.reserve(nodes_.size());
    for (std::size_t j = 0; j < nodes_.size(); ++j) {
        if (exclude && j == *exclude) continue;
        cands.push_back({j, pairwise_distance(z, z_[j])});
    }
    if (cands.empty()) throw UsageError("predict: graph has no usable nodes");

    // Exact feature matches override the neighborhood average.
    double min_d = std::numeric_limits<double>::infinity();
    for (const auto& c : cands) min_d = std::min(min_d, c.distance);
    if (min_d == 0.0) {
        std::vector<double> acc(kNumClasses, 0.0);
        std::size_t hits = 0;
        for (const auto& c : cands)
            if (c.distance == 0.0) {
                for (std::size_t cc = 0; cc < kNumClasses; ++cc)
                    acc[cc] += nodes_[c.index].distribution.p[cc];
                ++hits;
            }
        for (double& v : acc) v /= static_cast<double>(hits);
        return LabelDistribution(std::move(acc));
    }

    if (config_.kind == KernelConfig::Kind::kNN) {
        const std::size_t keep = std::min<std::size_t>(static_cast<std::size_t>(config_.k),
                                                       cands.size());
        std::partial_sort(cands.begin(), cands.begin() + static_cast<std::ptrdiff_t>(keep),
                          cands.end(), [&](const Cand& a, const Cand& b) {
                              if (a.distance != b.distance) return a.distance < b.distance;
                              return nodes_[a.index].id < nodes_[b.index].id;
                          });
        cands.resize(keep);
    }

    std::vector<double> acc(kNumClasses, 0.0);
    double total = 0.0;
    for (const auto& c : cands) {
        const double w = affinity(c.distance);
        total += w;
        for (std::size_t cc = 0; cc < kNumClasses; ++cc)
            acc[cc] += w * nodes_[c.index].distribution.p[cc];
    }
    if (total <= 0.0) {
        // All affinities underflowed: fall back to the nearest node.
        auto nearest = std::min_element(cands.begin(), cands.end(),
                                        [&](const Cand& a, const Cand& b) {
                                            if (a.distance != b.distance)
                                                return a.distance < b.distance;
                                            return nodes_[a.index].id < nodes_[b.index].id;
                                        });
        return nodes_[nearest->index].distribution;
    }
    for (double& v : acc) v /= total;
    double sum = std::accumulate(acc.begin(), acc.end(), 0.0);
    for (double& v : acc) v /= sum;
    return LabelDistribution(std::move(acc));
}

std::pair<int, LabelDistribution> ProximityGraph::predict(const Instance& x) const {
    if (nodes_.empty()) throw UsageError("predict: empty graph");
    auto dist = weighted_average(standardizer_.apply(x.features), std::nullopt);
    return {dist.argmax(), std::move(dist)};
}

LabelDistribution ProximityGraph::loo_distribution(std::size_t node_index) const {
    if (node_index >= nodes_.size()) throw UsageError("loo_distribution: index out of range");
    if (nodes_.size() < 2) return LabelDistribution::uniform();
    return weighted_average(z_[node_index], node_index);
}

void ProximityGraph::add_labeled_node(Instance x, int label) {
    if (label != 0 && label != 1) throw UsageError("add_labeled_node: label must be binary");

    auto existing = index_of(x.id);
    if (existing) {
        Instance& node = nodes_[*existing];
        if (node.true_label) {
            if (*node.true_label != label)
                throw UsageError("add_labeled_node: conflicting re-label of clamped node id " +
                                 std::to_string(x.id));
            return; // idempotent
        }
        node.true_label = label;
        node.distribution = LabelDistribution::one_hot(label);
        return;
    }

    if (nodes_.empty() && standardizer_.dim() == 0)
        standardizer_ = Standardizer::identity(x.features.size());

    const std::size_t idx = nodes_.size();
    x.true_label = label;
    x.distribution = LabelDistribution::one_hot(label);
    z_.push_back(standardizer_.apply(x.features));
    nodes_.push_back(std::move(x));
    id_to_index_.emplace(nodes_.back().id, idx);
    isolated_.push_back(0);

    if (config_.kind != KernelConfig::Kind::kNN) return;

    const auto k = static_cast<std::size_t>(std::max(config_.k, 1));
    // kappa for the new node.
    std::vector<std::size_t> order(idx);
    std::iota(order.begin(), order.end(), 0);
    const std::size_t keep = std::min(k, order.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep),
                      order.end(), [&](std::size_t a, std::size_t b) {
                          const double da = zdist(idx, a);
                          const double db = zdist(idx, b);
                          if (da != db) return da < db;
                          return nodes_[a].id < nodes_[b].id;
                      });
    knn_.emplace_back(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep));

    // The new node may displace the worst entry of existing neighborhoods.
    for (std::size_t i = 0; i < idx; ++i) {
        const double d_new = zdist(i, idx);
        if (knn_[i].size() < k) {
            knn_[i].push_back(idx);
            continue;
        }
        const std::size_t worst = knn_[i].back();
        const double d_worst = zdist(i, worst);
        const bool beats = d_new < d_worst ||
                           (d_new == d_worst && nodes_[idx].id < nodes_[worst].id);
        if (beats) knn_[i].back() = idx;
    }
    // Keep each kappa sorted by (distance, id) so back() is always the worst.
    for (std::size_t i = 0; i < nodes_.size(); ++i)
        std::sort(knn_[i].begin(), knn_[i].end(), [&](std::size_t a, std::size_t b) {
            const double da = zdist(i, a);
            const double db = zdist(i, b);
            if (da != db) return da < db;
            return nodes_[a].id < nodes_[b].id;
        });
    rebuild_adjacency();
}

std::optional<std::size_t> ProximityGraph::index_of(std::int64_t id) const {
    auto it = id_to_index_.find(id);
    if (it == id_to_index_.end()) return std::nullopt;
    return it->second;
}

std::vector<std::pair<std::int64_t, LabelDistribution>>
ProximityGraph::unlabeled_distributions() const {
    std::vector<std::pair<std::int64_t, LabelDistribution>> out;
    for (const auto& node : nodes_)
        if (!node.true_label) out.emplace_back(node.id, node.distribution);
    return out;
}

std::size_t ProximityGraph::labeled_count() const {
    std::size_t n = 0;
    for (const auto& node : nodes_)
        if (node.true_label) ++n;
    return n;
}

std::vector<std::tuple<std::int64_t, std::int64_t, double>> ProximityGraph::edge_list() const {
    std::vector<std::tuple<std::int64_t, std::int64_t, double>> edges;
    if (config_.kind == KernelConfig::Kind::kNN) {
        for (std::size_t i = 0; i < nodes_.size(); ++i)
            for (const auto& [j, w] : adj_[i])
                if (i < j) {
                    const auto a = std::min(nodes_[i].id, nodes_[j].id);
                    const auto b = std::max(nodes_[i].id, nodes_[j].id);
                    edges.emplace_back(a, b, w);
                }
    } else {
        for (std::size_t i = 0; i < nodes_.size(); ++i)
            for (std::size_t j = i + 1; j < nodes_.size(); ++j) {
                const auto a = std::min(nodes_[i].id, nodes_[j].id);
                const auto b = std::max(nodes_[i].id, nodes_[j].id);
                edges.emplace_back(a, b, affinity(zdist(i, j)));
            }
    }
    std::sort(edges.begin(), edges.end());
    return edges;
}

double ProximityGraph::edge_weight_between(std::int64_t id_a, std::int64_t id_b) const {
    auto ia = index_of(id_a);
    auto ib = index_of(id_b);
    if (!ia || !ib) throw UsageError("edge_weight_between: unknown id");
    if (*ia == *ib) return 0.0;
    if (config_.kind == KernelConfig::Kind::RBF) return affinity(zdist(*ia, *ib));
    for (const auto& [j, w] : adj_[*ia])
        if (j == *ib) return w;
    return 0.0;
}

void ProximityGraph::scale_edge_weights(double factor) {
    if (!(factor > 0.0)) throw UsageError("scale_edge_weights: factor must be positive");
    edge_scale_ *= factor;
    for (auto& row : adj_)
        for (auto& [j, w] : row) w *= factor;
}

void ProximityGraph::reset_unlabeled_distributions() {
    for (std::size_t i = 0; i < nodes_.size(); ++i)
        if (!nodes_[i].true_label) {
            nodes_[i].distribution = LabelDistribution::uniform();
            isolated_[i] = 0;
        }
}

// --- serialization ---------------------------------------------------------

void ProximityGraph::write(std::ostream& out) const {
    out << std::setprecision(17);
    out << "palsgraph v1\n";
    out << "kind " << (config_.kind == KernelConfig::Kind::kNN ? "knn" : "rbf") << "\n";
    out << "k " << config_.k << "\n";
    out << "sigma " << config_.sigma << "\n";
    out << "edge_scale " << edge_scale_ << "\n";
    out << "dim " << standardizer_.dim() << "\n";
    out << "mean";
    for (double v : standardizer_.mean()) out << " " << v;
    out << "\nstd";
    for (double v : standardizer_.stddev()) out << " " << v;
    out << "\nnodes " << nodes_.size() << "\n";
    for (const auto& node : nodes_) {
        out << "node " << node.id << " " << node.t_ms << " "
            << (node.true_label ? std::to_string(*node.true_label) : "-") << " "
            << (node.synthetic ? 1 : 0) << " p";
        for (double v : node.distribution.p) out << " " << v;
        out << " f";
        for (double v : node.features) out << " " << v;
        out << "\n";
    }
    // Edge dump for inspection; the reader reconstructs neighborhoods from
    // the node features, which is deterministic and identical.
    auto edges = edge_list();
    out << "edges " << edges.size() << "\n";
    for (const auto& [a, b, w] : edges) out << "edge " << a << " " << b << " " << w << "\n";
}

ProximityGraph ProximityGraph::read(std::istream& in) {
    std::string magic, version;
    in >> magic >> version;
    if (magic != "palsgraph" || version != "v1")
        throw DataError("graph file: unsupported header '" + magic + " " + version + "'");

    std::string word;
    KernelConfig cfg;
    in >> word;
    std::string kind;
    in >> kind;
    if (word != "kind" || (kind != "knn" && kind != "rbf"))
        throw DataError("graph file: bad kind line");
    cfg.kind = kind == "knn" ? KernelConfig::Kind::kNN : KernelConfig::Kind::RBF;
    in >> word >> cfg.k;
    if (word != "k") throw DataError("graph file: bad k line");
    in >> word >> cfg.sigma;
    if (word != "sigma") throw DataError("graph file: bad sigma line");
    double edge_scale = 1.0;
    in >> word >> edge_scale;
    if (word != "edge_scale") throw DataError("graph file: bad edge_scale line");
    std::size_t dim = 0;
    in >> word >> dim;
    if (word != "dim") throw DataError("graph file: bad dim line");

    std::vector<double> mean(dim), stddev(dim);
    in >> word;
    if (word != "mean") throw DataError("graph file: bad mean line");
    for (auto& v : mean) in >> v;
    in >> word;
    if (word != "std") throw DataError("graph file: bad std line");
    for (auto& v : stddev) in >> v;

    std::size_t count = 0;
    in >> word >> count;
    if (word != "nodes") throw DataError("graph file: bad nodes line");
    if (count == 0) {
        ProximityGraph g(cfg);
        Standardizer st;
        st.set(std::move(mean), std::move(stddev));
        g.standardizer_ = st;
        g.edge_scale_ = edge_scale;
        return g;
    }

    std::vector<Instance> instances;
    instances.reserve(count);
    std::vector<LabelDistribution> dists;
    dists.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        in >> word;
        if (word != "node") throw DataError("graph file: bad node line");
        Instance inst;
        std::string label;
        int synthetic = 0;
        in >> inst.id >> inst.t_ms >> label >> synthetic;
        inst.synthetic = synthetic != 0;
        if (label != "-") inst.true_label = std::stoi(label);
        in >> word;
        if (word != "p") throw DataError("graph file: bad node p section");
        std::vector<double> p(kNumClasses);
        for (auto& v : p) in >> v;
        dists.emplace_back(std::move(p));
        in >> word;
        if (word != "f") throw DataError("graph file: bad node f section");
        inst.features.resize(dim);
        for (auto& v : inst.features) in >> v;
        instances.push_back(std::move(inst));
    }
    if (!in) throw DataError("graph file: truncated node section");

    Standardizer st;
    st.set(std::move(mean), std::move(stddev));

    ProximityGraph g(cfg);
    g.init_nodes(std::move(instances), st);
    if (cfg.kind == KernelConfig::Kind::kNN) g.build_neighborhoods();
    g.edge_scale_ = edge_scale;
    if (edge_scale != 1.0 && cfg.kind == KernelConfig::Kind::kNN) g.rebuild_adjacency();
    // Restore propagated distributions for unlabeled nodes.
    for (std::size_t i = 0; i < g.nodes_.size(); ++i)
        if (!g.nodes_[i].true_label) g.nodes_[i].distribution = dists[i];
    return g;
}

} // namespace pals
