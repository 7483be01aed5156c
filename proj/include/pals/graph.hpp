#pragma once

#include "pals/instance.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <tuple>
#include <unordered_map>
#include <vector>

namespace pals {

struct KernelConfig {
    enum class Kind { kNN, RBF };
    Kind kind = Kind::kNN;
    int k = 7;          // kNN neighbor count
    double sigma = 0.0; // RBF width; for kNN, 0 means self-tune at build time
};

struct PropagationConfig {
    int max_iterations = 1000;
    double tolerance = 1e-6; // max-abs distribution change stopping criterion
};

// Per-dimension z-scoring fitted on a pool. Euclidean distances inside the
// graph are always taken in standardized space; zero-variance dimensions get
// unit scale.
class Standardizer {
public:
    Standardizer() = default;
    static Standardizer fit(const std::vector<Instance>& pool);
    static Standardizer identity(std::size_t dim);

    std::vector<double> apply(const std::vector<double>& features) const;
    std::size_t dim() const { return mean_.size(); }
    const std::vector<double>& mean() const { return mean_; }
    const std::vector<double>& stddev() const { return stddev_; }
    void set(std::vector<double> mean, std::vector<double> stddev);

private:
    std::vector<double> mean_;
    std::vector<double> stddev_;
};

// Weighted similarity graph over labeled and unlabeled instances.
//
// Under the kNN kernel an edge (i,j) exists iff i is among j's k nearest
// neighbors or vice versa; the RBF kernel connects every pair. Either way the
// edge weight is the Gaussian affinity exp(-d^2 / (2 sigma^2)) of the
// standardized Euclidean distance d, so weights live in (0,1] and larger
// means more similar. For kNN graphs sigma defaults to the mean distance to
// the k-th neighbor over all nodes.
//
// Nodes with ground truth are clamped: their distributions stay one-hot
// through propagation. Distance ties are broken toward the lower instance id.
class ProximityGraph {
public:
    ProximityGraph() = default;
    explicit ProximityGraph(KernelConfig config) : config_(config) {}

    static ProximityGraph build_knn(std::vector<Instance> instances, int k);
    static ProximityGraph build_knn(std::vector<Instance> instances, KernelConfig config,
                                    std::optional<Standardizer> standardizer = std::nullopt);
    static ProximityGraph build_rbf(std::vector<Instance> instances, double sigma,
                                    std::optional<Standardizer> standardizer = std::nullopt);

    // Iterative label propagation: each unlabeled node's distribution becomes
    // the weight-normalized average of its neighbors', swept Jacobi-style
    // until the largest change drops below tolerance or the iteration cap is
    // hit. Labeled nodes never move. Unlabeled nodes with zero incident
    // weight receive the labeled class prior and are flagged isolated.
    // Returns the number of sweeps run.
    int propagate(const PropagationConfig& config = {});

    // Predicted (label, distribution) for x. If x coincides with graph nodes
    // in feature space the answer is their average; otherwise it is the
    // affinity-weighted average over x's k nearest nodes (kNN kernel) or all
    // nodes (RBF kernel). Argmax ties resolve to non-eating.
    std::pair<int, LabelDistribution> predict(const Instance& x) const;

    // Leave-one-out prediction for a node already in the graph, used to
    // calibrate entropy thresholds on training data.
    LabelDistribution loo_distribution(std::size_t node_index) const;

    // Inserts x clamped to one-hot `label`, or clamps the existing node with
    // the same id. Conflicting re-labels are rejected. kNN neighborhoods are
    // updated incrementally; standardizer and sigma stay frozen.
    void add_labeled_node(Instance x, int label);

    std::size_t size() const { return nodes_.size(); }
    bool empty() const { return nodes_.empty(); }
    const std::vector<Instance>& nodes() const { return nodes_; }
    const Instance& node(std::size_t i) const { return nodes_.at(i); }
    std::optional<std::size_t> index_of(std::int64_t id) const;

    std::vector<std::pair<std::int64_t, LabelDistribution>> unlabeled_distributions() const;
    std::size_t labeled_count() const;

    // Undirected edge list (id_a, id_b, weight) with id_a < id_b.
    std::vector<std::tuple<std::int64_t, std::int64_t, double>> edge_list() const;
    double edge_weight_between(std::int64_t id_a, std::int64_t id_b) const;

    bool isolated(std::size_t node_index) const { return isolated_.at(node_index) != 0; }

    // Multiplies every edge weight by a positive factor. Propagation and
    // prediction are invariant to this; exposed to let tests assert it.
    void scale_edge_weights(double factor);
    void reset_unlabeled_distributions();

    const KernelConfig& kernel() const { return config_; }
    double sigma() const { return config_.sigma > 0.0 ? config_.sigma : 1.0; }
    const Standardizer& standardizer() const { return standardizer_; }

    void write(std::ostream& out) const;
    static ProximityGraph read(std::istream& in);

private:
    void init_nodes(std::vector<Instance> instances,
                    std::optional<Standardizer> standardizer);
    void build_neighborhoods();
    void rebuild_adjacency();
    double zdist(std::size_t i, std::size_t j) const;
    double affinity(double distance) const;
    LabelDistribution weighted_average(const std::vector<double>& z,
                                       std::optional<std::size_t> exclude) const;
    std::vector<std::pair<std::size_t, double>> neighbor_row(std::size_t i) const;

    KernelConfig config_;
    Standardizer standardizer_;
    std::vector<Instance> nodes_;
    std::vector<std::vector<double>> z_;            // standardized features
    std::vector<std::vector<std::size_t>> knn_;     // kappa(i), kNN kernel only
    std::vector<std::vector<std::pair<std::size_t, double>>> adj_; // kNN kernel only
    std::vector<char> isolated_;
    std::unordered_map<std::int64_t, std::size_t> id_to_index_;
    double edge_scale_ = 1.0;
};

} // namespace pals
