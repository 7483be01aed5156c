#include "pals/offline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>
#include <unordered_set>

namespace pals {

void OfflineConfig::validate(std::size_t unlabeled_count) const {
    std::string problems;
    auto add = [&problems](const std::string& p) {
        if (!problems.empty()) problems += "; ";
        problems += p;
    };
    if (iterations < 1) add("iterations must be >= 1");
    if (iterations >= 1 && budget < iterations) add("budget must be >= iterations");
    if (iterations >= 1 && budget % iterations != 0)
        add("budget must be divisible by iterations (got " + std::to_string(budget) + "/" +
            std::to_string(iterations) + ")");
    if (budget > unlabeled_count)
        add("budget exceeds unlabeled pool size (" + std::to_string(budget) + " > " +
            std::to_string(unlabeled_count) + ")");
    if (!problems.empty()) throw ConfigError("offline config: " + problems);
}

std::vector<std::pair<std::int64_t, LabelDistribution>>
infer_unlabeled(const ProximityGraph& graph) {
    return graph.unlabeled_distributions();
}

std::vector<std::int64_t> farthest_point_sample(const std::vector<Instance>& candidates,
                                                const std::vector<Instance>& covered,
                                                std::size_t count,
                                                const Standardizer& standardizer) {
    count = std::min(count, candidates.size());
    std::vector<std::vector<double>> cz;
    cz.reserve(candidates.size());
    for (const auto& inst : candidates) cz.push_back(standardizer.apply(inst.features));

    std::vector<double> min_dist(candidates.size(), std::numeric_limits<double>::infinity());
    for (const auto& inst : covered) {
        const auto z = standardizer.apply(inst.features);
        for (std::size_t i = 0; i < candidates.size(); ++i)
            min_dist[i] = std::min(min_dist[i], pairwise_distance(z, cz[i]));
    }
    if (covered.empty()) {
        // Seed from the centroid so the first pick is the pool's far extreme.
        std::vector<double> centroid(standardizer.dim(), 0.0);
        for (const auto& z : cz)
            for (std::size_t d = 0; d < z.size(); ++d) centroid[d] += z[d];
        for (double& v : centroid) v /= static_cast<double>(cz.size());
        for (std::size_t i = 0; i < candidates.size(); ++i)
            min_dist[i] = pairwise_distance(centroid, cz[i]);
    }

    std::vector<std::int64_t> picks;
    std::vector<char> taken(candidates.size(), 0);
    for (std::size_t p = 0; p < count; ++p) {
        std::size_t best = candidates.size();
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            if (taken[i]) continue;
            if (best == candidates.size() || min_dist[i] > min_dist[best] ||
                (min_dist[i] == min_dist[best] && candidates[i].id < candidates[best].id))
                best = i;
        }
        taken[best] = 1;
        picks.push_back(candidates[best].id);
        for (std::size_t i = 0; i < candidates.size(); ++i)
            if (!taken[i]) min_dist[i] = std::min(min_dist[i], pairwise_distance(cz[best], cz[i]));
    }
    return picks;
}

namespace {

bool has_both_classes(const ProximityGraph& graph) {
    bool seen[kNumClasses] = {false, false};
    for (const auto& node : graph.nodes())
        if (node.true_label) seen[static_cast<std::size_t>(*node.true_label)] = true;
    return seen[0] && seen[1];
}

std::vector<Instance> labeled_nodes(const ProximityGraph& graph) {
    std::vector<Instance> out;
    for (const auto& node : graph.nodes())
        if (node.true_label) out.push_back(node);
    return out;
}

std::vector<Instance> unlabeled_nodes(const ProximityGraph& graph) {
    std::vector<Instance> out;
    for (const auto& node : graph.nodes())
        if (!node.true_label) out.push_back(node);
    return out;
}

} // namespace

OfflineResult run_offline(const std::vector<Instance>& labeled,
                          const std::vector<Instance>& unlabeled, Oracle& oracle,
                          const OfflineConfig& config, const IterationObserver& on_iteration) {
    if (unlabeled.empty()) throw UsageError("run_offline: unlabeled pool is empty");
    config.validate(unlabeled.size());

    std::vector<Instance> pool;
    pool.reserve(labeled.size() + unlabeled.size());
    for (auto inst : labeled) {
        if (!inst.true_label) throw UsageError("run_offline: instance in labeled set lacks label");
        pool.push_back(std::move(inst));
    }
    for (auto inst : unlabeled) {
        inst.true_label.reset(); // the oracle is the only label source for the pool
        pool.push_back(std::move(inst));
    }

    OfflineResult result;
    result.model = config.kernel.kind == KernelConfig::Kind::kNN
                       ? ProximityGraph::build_knn(std::move(pool), config.kernel)
                       : ProximityGraph::build_rbf(std::move(pool), config.kernel.sigma);
    ProximityGraph& graph = result.model;

    const std::size_t delta = config.per_iteration();
    QueryBudget budget(config.budget);
    if (graph.labeled_count() > 0) graph.propagate(config.propagation);

    for (std::size_t iter = 1; iter <= config.iterations; ++iter) {
        std::unordered_map<std::int64_t, double> entropy_by_id;
        std::vector<InformativenessScore> scores;
        for (const auto& [id, dist] : infer_unlabeled(graph)) {
            const double h = entropy(dist);
            entropy_by_id[id] = h;
            scores.push_back({id, h});
        }

        std::vector<std::int64_t> selected;
        if (!has_both_classes(graph)) {
            selected = farthest_point_sample(unlabeled_nodes(graph), labeled_nodes(graph),
                                             delta, graph.standardizer());
            ++result.bootstrap_iterations;
        } else if (config.selection == SelectionStrategy::Entropy) {
            selected = select_top(scores, delta);
        } else {
            std::vector<std::int64_t> candidates;
            candidates.reserve(scores.size());
            for (const auto& s : scores) candidates.push_back(s.instance_id);
            std::sort(candidates.begin(), candidates.end());
            selected = uniform_select(candidates, std::min(delta, candidates.size()),
                                      config.seed + 0x9e3779b97f4a7c15ULL * iter);
        }

        // Log and query most-informative first regardless of strategy.
        std::sort(selected.begin(), selected.end(), [&](std::int64_t a, std::int64_t b) {
            const double ha = entropy_by_id.at(a);
            const double hb = entropy_by_id.at(b);
            if (ha != hb) return ha > hb;
            return a < b;
        });

        for (std::int64_t id : selected) {
            const auto idx = graph.index_of(id);
            const auto answer = oracle.label_of(graph.node(*idx));
            if (!answer) {
                result.aborted = true;
                return result;
            }
            budget.spend();
            result.query_log.push_back({iter, id, entropy_by_id.at(id), *answer});
            graph.add_labeled_node(graph.node(*idx), *answer);
        }

        if (config.smote_enabled) {
            std::int64_t graph_max_id = kSyntheticIdBase - 1;
            for (const auto& node : graph.nodes()) graph_max_id = std::max(graph_max_id, node.id);
            auto balanced = smote_balance(labeled_nodes(graph), config.smote_k,
                                          config.seed + 0xc2b2ae3d27d4eb4fULL * iter,
                                          graph_max_id + 1);
            if (balanced.skipped) result.smote_skipped = true;
            for (std::size_t s = balanced.instances.size() - balanced.synthetic_count;
                 s < balanced.instances.size(); ++s) {
                const Instance& synth = balanced.instances[s];
                graph.add_labeled_node(synth, *synth.true_label);
            }
        }

        if (graph.labeled_count() > 0) graph.propagate(config.propagation);
        if (on_iteration) on_iteration(iter, graph);
    }
    return result;
}

} // namespace pals
