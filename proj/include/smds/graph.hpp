#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

namespace smds {

// ---------------------------------------------------------------------------
// Graph
// ---------------------------------------------------------------------------

using Vertex = std::uint32_t;

struct Edge {
    Vertex u;
    Vertex v; // u < v

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Undirected, unweighted simple graph. Self-loops and repeated edges are
/// silently dropped by add_edge.
class Graph {
public:
    Graph() = default;
    explicit Graph(std::size_t n);

    /// Returns true if the edge was new.
    bool add_edge(Vertex u, Vertex v);
    [[nodiscard]] bool has_edge(Vertex u, Vertex v) const;

    [[nodiscard]] std::size_t num_vertices() const noexcept { return adjacency_.size(); }
    [[nodiscard]] std::size_t num_edges() const noexcept { return edges_.size(); }
    [[nodiscard]] const std::vector<Edge>& edges() const noexcept { return edges_; }
    [[nodiscard]] const std::vector<Vertex>& neighbors(Vertex v) const { return adjacency_.at(v); }
    [[nodiscard]] std::size_t degree(Vertex v) const { return adjacency_.at(v).size(); }

    // Empty, or one entry per vertex.
    [[nodiscard]] const std::vector<std::string>& labels() const noexcept { return labels_; }
    void set_labels(std::vector<std::string> labels);
    [[nodiscard]] std::string label(Vertex v) const;

private:
    std::vector<std::vector<Vertex>> adjacency_;
    std::vector<Edge> edges_;
    std::unordered_set<std::uint64_t> edge_keys_;
    std::vector<std::string> labels_;
};

// ---------------------------------------------------------------------------
// DistanceMatrix
// ---------------------------------------------------------------------------

/// Dense symmetric matrix of target distances, row-major.
class DistanceMatrix {
public:
    DistanceMatrix() = default;
    explicit DistanceMatrix(std::size_t n);

    [[nodiscard]] std::size_t size() const noexcept { return n_; }
    [[nodiscard]] double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * n_ + j]; }
    [[nodiscard]] const double* row(std::size_t i) const noexcept { return data_.data() + i * n_; }

    /// Writes both (i, j) and (j, i).
    void set(std::size_t i, std::size_t j, double value);

    /// Cumulative scale factor applied since the matrix was built.
    [[nodiscard]] double dilation() const noexcept { return dilation_; }

    [[nodiscard]] double max_value() const noexcept;

    /// Copy with every entry multiplied by factor; dilation() is multiplied too.
    [[nodiscard]] DistanceMatrix scaled(double factor) const;

    [[nodiscard]] const std::vector<std::string>& labels() const noexcept { return labels_; }
    void set_labels(std::vector<std::string> labels);

    /// Throws InputError unless the matrix has a zero diagonal, is symmetric,
    /// and all entries are finite and nonnegative.
    void validate() const;

private:
    std::size_t n_ = 0;
    std::vector<double> data_;
    double dilation_ = 1.0;
    std::vector<std::string> labels_;
};

// ---------------------------------------------------------------------------
// Readers, writers, generators
// ---------------------------------------------------------------------------

/// Sparsity pattern of a square coordinate-format Matrix Market file as an
/// undirected graph. Values and diagonal entries are ignored.
[[nodiscard]] Graph parse_matrix_market(std::string_view text);

/// Whitespace separated "u v" lines, '#' comments. Vertex ids are reindexed
/// densely in first-appearance order and kept as labels.
[[nodiscard]] Graph parse_edge_list(std::string_view text);
[[nodiscard]] std::string to_edge_list(const Graph& g);

enum class Polytope { tetrahedron, cube, octahedron, dodecahedron, icosahedron };

[[nodiscard]] Graph generate_polytope(Polytope kind);
[[nodiscard]] Graph generate_cycle(std::size_t n);
[[nodiscard]] Graph generate_path(std::size_t n);
[[nodiscard]] Graph generate_grid(std::size_t rows, std::size_t cols);

/// Edge subdivision: every round replaces each edge u-v by u-m-v through a
/// fresh vertex m. New vertices are appended after the existing ones.
[[nodiscard]] Graph subdivide(const Graph& g, unsigned times);

/// All-pairs hop distances by BFS from every vertex. Throws InputError naming
/// two vertices in different components if g is disconnected.
[[nodiscard]] DistanceMatrix apsp(const Graph& g);

/// Header row of labels (leading empty cell), then one labeled row per vertex.
[[nodiscard]] std::string to_csv(const DistanceMatrix& dm);

/// Reads the to_csv layout. Row labels and the header are optional when the
/// file is purely numeric. Rejects asymmetric or incomplete matrices.
[[nodiscard]] DistanceMatrix parse_distance_csv(std::string_view text);

} // namespace smds
