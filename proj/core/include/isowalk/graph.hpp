#pragma once

// k-regular undirected multigraphs whose edge slots carry labels. Slot j has the
// same label at every vertex and an inverse slot, so a walk is a label sequence
// that replays from any start. Cayley graphs and isogeny graphs both map onto it.

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

namespace isowalk {

/// A generator label plus the inversion flag selecting its inverse.
struct Step {
    std::string label;
    bool inverted = false;

    Step inverse() const { return Step{label, !inverted}; }
    auto operator<=>(const Step&) const = default;
    bool operator==(const Step&) const = default;
};

std::string to_string(const Step& s);

class RegularGraph {
public:
    RegularGraph() = default;
    /// neighbors is row-major: neighbors[v * degree + slot]. Throws
    /// ConsistencyError if some edge slot is not undone by its inverse slot.
    RegularGraph(std::vector<std::string> vertex_names, std::vector<Step> slot_labels,
                 std::vector<std::size_t> inverse_slots, std::vector<std::size_t> neighbors);

    std::size_t vertex_count() const { return names_.size(); }
    std::size_t degree() const { return labels_.size(); }

    std::size_t neighbor(std::size_t v, std::size_t slot) const { return neighbors_[v * degree() + slot]; }
    const Step& label(std::size_t slot) const { return labels_[slot]; }
    std::size_t inverse_slot(std::size_t slot) const { return inverse_[slot]; }
    std::optional<std::size_t> slot_of(const Step& step) const;

    const std::string& name(std::size_t v) const { return names_[v]; }
    const std::vector<std::string>& names() const { return names_; }
    std::optional<std::size_t> vertex_named(const std::string& name) const;

    Eigen::MatrixXd adjacency() const;
    std::size_t component_count() const;
    /// Eigenvalues of the adjacency matrix, descending. Throws
    /// PreconditionError above kMaxDenseVertices.
    std::vector<double> numeric_spectrum() const;

    /// End vertex of replaying steps from start, or nullopt if a label is unknown.
    std::optional<std::size_t> replay(std::size_t start, const std::vector<Step>& steps) const;

    static constexpr std::size_t kMaxDenseVertices = 4096;

private:
    std::vector<std::string> names_;
    std::vector<Step> labels_;
    std::vector<std::size_t> inverse_;
    std::vector<std::size_t> neighbors_;
    std::unordered_map<std::string, std::size_t> by_name_;
};

}  // namespace isowalk
