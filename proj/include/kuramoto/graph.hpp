#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kuramoto/rational.hpp"

namespace kuramoto {

/// Undirected, unweighted network stored as a dense symmetric 0/1 matrix.
///
/// The diagonal is uniform: either every node carries a self-loop or none
/// does. Self-loops never change the dynamics (sin 0 = 0) but they change how
/// connectivity is counted. Instances are immutable once built.
class Graph {
public:
    /// `adjacency` is row-major n*n. Throws ParseError on asymmetry or a
    /// non-uniform diagonal, DomainError when n == 0.
    Graph(std::size_t n, std::vector<std::uint8_t> adjacency, bool self_loops);

    static Graph from_edges(std::size_t n, std::span<const std::pair<std::size_t, std::size_t>> edges,
                            bool self_loops = false);

    [[nodiscard]] std::size_t size() const noexcept { return n_; }
    [[nodiscard]] bool self_loops() const noexcept { return self_loops_; }

    [[nodiscard]] bool adjacent(std::size_t j, std::size_t k) const noexcept { return adj_[j * n_ + k] != 0; }

    /// Row j of the 0/1 matrix, diagonal included.
    [[nodiscard]] std::span<const std::uint8_t> row(std::size_t j) const noexcept
    {
        return {adj_.data() + j * n_, n_};
    }

    /// Row j as doubles with the diagonal forced to zero. Used by the
    /// trig-free kernels, where a self term would only add roundoff.
    [[nodiscard]] std::span<const double> coupling_row(std::size_t j) const noexcept
    {
        return {coupling_.data() + j * n_, n_};
    }

    /// Number of neighbours of j other than j itself.
    [[nodiscard]] std::size_t degree(std::size_t j) const noexcept { return degree_[j]; }
    [[nodiscard]] std::size_t min_degree() const noexcept;
    [[nodiscard]] std::size_t edge_count() const noexcept;
    [[nodiscard]] bool is_connected() const;
    [[nodiscard]] bool is_complete() const noexcept { return min_degree() + 1 == n_; }

    friend bool operator==(const Graph& a, const Graph& b)
    {
        return a.n_ == b.n_ && a.self_loops_ == b.self_loops_ && a.adj_ == b.adj_;
    }

private:
    std::size_t n_;
    bool self_loops_;
    std::vector<std::uint8_t> adj_;
    std::vector<double> coupling_;
    std::vector<std::size_t> degree_;
};

/// mu = (min off-diagonal degree)/(n-1); mu_tilde = (min degree + 1)/n, the
/// connectivity the same network has once every node carries a self-loop.
struct Connectivity {
    Rational mu;
    Rational mu_tilde;
};

/// Throws DomainError for n < 2 and PreconditionError for a disconnected graph.
[[nodiscard]] Connectivity connectivity(const Graph& g);

/// Same off-diagonal structure with every diagonal entry set. Applying it to
/// a graph that already has loops returns the input and logs a warning.
[[nodiscard]] Graph add_self_loops(const Graph& g);

/// Lexicographic product G[K_tau]: node j becomes the clique
/// {j*tau, ..., j*tau + tau - 1}; cliques are joined exactly where their
/// parents were.
[[nodiscard]] Graph twin(const Graph& g, std::size_t tau);

/// C_n(offsets): j ~ j +- s (mod n) for every s in offsets. Offsets must lie
/// in 1..n/2 and the result must be connected.
[[nodiscard]] Graph circulant(std::size_t n, std::span<const std::size_t> offsets);
[[nodiscard]] Graph circulant(std::size_t n, std::initializer_list<std::size_t> offsets);

[[nodiscard]] Graph complete_graph(std::size_t n, bool self_loops = false);
[[nodiscard]] Graph cycle_graph(std::size_t n);

/// floor(3n/4 - 1)/(n-1): any connectivity strictly above this value forces
/// global synchrony on n nodes.
[[nodiscard]] Rational sync_sufficient_mu(std::size_t n);

/// Text format: a header `n <n> self_loops <0|1>` followed by n lines
/// `j: k1 k2 ...`. Canonical files list only k > j; a k < j entry must mirror
/// an edge already declared on line k.
[[nodiscard]] Graph read_graph(std::istream& in);
[[nodiscard]] Graph load_graph(const std::string& path);
void write_graph(std::ostream& out, const Graph& g);

} // namespace kuramoto
