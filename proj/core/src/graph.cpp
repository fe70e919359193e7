#include "isowalk/graph.hpp"

#include <algorithm>
#include <deque>

#include "isowalk/errors.hpp"

namespace isowalk {

std::string to_string(const Step& s) { return s.inverted ? s.label + "^-1" : s.label; }

RegularGraph::RegularGraph(std::vector<std::string> vertex_names, std::vector<Step> slot_labels,
                           std::vector<std::size_t> inverse_slots, std::vector<std::size_t> neighbors)
    : names_(std::move(vertex_names)),
      labels_(std::move(slot_labels)),
      inverse_(std::move(inverse_slots)),
      neighbors_(std::move(neighbors)) {
    const std::size_t n = names_.size();
    const std::size_t k = labels_.size();
    if (inverse_.size() != k) throw ConsistencyError("every slot needs an inverse slot");
    if (neighbors_.size() != n * k) throw ConsistencyError("neighbor table has the wrong size");
    for (std::size_t j = 0; j < k; ++j) {
        if (inverse_[j] >= k || inverse_[inverse_[j]] != j) throw ConsistencyError("slot inverses are not an involution");
        for (std::size_t i = 0; i < j; ++i)
            if (labels_[i] == labels_[j]) throw ConsistencyError("duplicate slot label " + to_string(labels_[j]));
    }
    for (std::size_t v = 0; v < n; ++v) {
        for (std::size_t j = 0; j < k; ++j) {
            const std::size_t w = neighbor(v, j);
            if (w >= n) throw ConsistencyError("neighbor index out of range");
            if (neighbor(w, inverse_[j]) != v)
                throw ConsistencyError("edge " + names_[v] + " --" + to_string(labels_[j]) + "--> " + names_[w] +
                                       " is not undone by its inverse slot");
        }
    }
    for (std::size_t v = 0; v < n; ++v) by_name_.emplace(names_[v], v);
}

std::optional<std::size_t> RegularGraph::slot_of(const Step& step) const {
    for (std::size_t j = 0; j < labels_.size(); ++j)
        if (labels_[j] == step) return j;
    return std::nullopt;
}

std::optional<std::size_t> RegularGraph::vertex_named(const std::string& name) const {
    auto it = by_name_.find(name);
    if (it == by_name_.end()) return std::nullopt;
    return it->second;
}

Eigen::MatrixXd RegularGraph::adjacency() const {
    const auto n = static_cast<Eigen::Index>(vertex_count());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t v = 0; v < vertex_count(); ++v)
        for (std::size_t j = 0; j < degree(); ++j)
            a(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(neighbor(v, j))) += 1.0;
    return a;
}

std::size_t RegularGraph::component_count() const {
    std::vector<bool> seen(vertex_count(), false);
    std::size_t components = 0;
    for (std::size_t s = 0; s < vertex_count(); ++s) {
        if (seen[s]) continue;
        ++components;
        std::deque<std::size_t> queue{s};
        seen[s] = true;
        while (!queue.empty()) {
            const std::size_t v = queue.front();
            queue.pop_front();
            for (std::size_t j = 0; j < degree(); ++j) {
                const std::size_t w = neighbor(v, j);
                if (!seen[w]) {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    return components;
}

std::vector<double> RegularGraph::numeric_spectrum() const {
    if (vertex_count() > kMaxDenseVertices)
        throw PreconditionError("dense eigensolver limited to " + std::to_string(kMaxDenseVertices) + " vertices");
    if (vertex_count() == 0) return {};
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(adjacency(), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw ConsistencyError("eigensolver did not converge");
    std::vector<double> out(solver.eigenvalues().data(), solver.eigenvalues().data() + solver.eigenvalues().size());
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

std::optional<std::size_t> RegularGraph::replay(std::size_t start, const std::vector<Step>& steps) const {
    if (start >= vertex_count()) return std::nullopt;
    std::size_t v = start;
    for (const auto& s : steps) {
        auto slot = slot_of(s);
        if (!slot) return std::nullopt;
        v = neighbor(v, *slot);
    }
    return v;
}

}  // namespace isowalk
