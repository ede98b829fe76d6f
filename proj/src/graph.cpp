#include "kuramoto/graph.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <numeric>
#include <queue>
#include <sstream>

#include "kuramoto/errors.hpp"

namespace kuramoto {

Graph::Graph(std::size_t n, std::vector<std::uint8_t> adjacency, bool self_loops)
    : n_(n), self_loops_(self_loops), adj_(std::move(adjacency))
{
    if (n_ == 0) throw DomainError("graph must have at least one node");
    if (adj_.size() != n_ * n_) throw ParseError("adjacency size does not match n*n");

    coupling_.assign(n_ * n_, 0.0);
    degree_.assign(n_, 0);
    for (std::size_t j = 0; j < n_; ++j) {
        auto& diag = adj_[j * n_ + j];
        if (diag > 1) diag = 1;
        if ((diag != 0) != self_loops_)
            throw ParseError("diagonal entry " + std::to_string(j) + " disagrees with the self_loops flag");
        for (std::size_t k = j + 1; k < n_; ++k) {
            auto& a = adj_[j * n_ + k];
            auto& b = adj_[k * n_ + j];
            if ((a != 0) != (b != 0))
                throw ParseError("adjacency is not symmetric at (" + std::to_string(j) + ", " + std::to_string(k) + ")");
            a = b = (a != 0);
            if (a) {
                coupling_[j * n_ + k] = coupling_[k * n_ + j] = 1.0;
                ++degree_[j];
                ++degree_[k];
            }
        }
    }
}

Graph Graph::from_edges(std::size_t n, std::span<const std::pair<std::size_t, std::size_t>> edges, bool self_loops)
{
    std::vector<std::uint8_t> adj(n * n, 0);
    for (std::size_t j = 0; j < n; ++j) adj[j * n + j] = self_loops;
    for (auto [j, k] : edges) {
        if (j >= n || k >= n) throw DomainError("edge endpoint out of range");
        if (j == k) continue;
        adj[j * n + k] = adj[k * n + j] = 1;
    }
    return Graph(n, std::move(adj), self_loops);
}

std::size_t Graph::min_degree() const noexcept
{
    return *std::min_element(degree_.begin(), degree_.end());
}

std::size_t Graph::edge_count() const noexcept
{
    return std::accumulate(degree_.begin(), degree_.end(), std::size_t{0}) / 2;
}

bool Graph::is_connected() const
{
    std::vector<char> seen(n_, 0);
    std::queue<std::size_t> frontier;
    frontier.push(0);
    seen[0] = 1;
    std::size_t reached = 1;
    while (!frontier.empty()) {
        const auto j = frontier.front();
        frontier.pop();
        const auto r = row(j);
        for (std::size_t k = 0; k < n_; ++k) {
            if (r[k] && !seen[k]) {
                seen[k] = 1;
                ++reached;
                frontier.push(k);
            }
        }
    }
    return reached == n_;
}

Connectivity connectivity(const Graph& g)
{
    const auto n = static_cast<std::int64_t>(g.size());
    if (n < 2) throw DomainError("connectivity needs n >= 2");
    if (!g.is_connected()) throw PreconditionError("connectivity of a disconnected graph is not meaningful");
    const auto d = static_cast<std::int64_t>(g.min_degree());
    return {Rational{d, n - 1}, Rational{d + 1, n}};
}

Graph add_self_loops(const Graph& g)
{
    if (g.self_loops()) {
        std::clog << "warning: add_self_loops called on a graph that already has self-loops\n";
        return g;
    }
    const auto n = g.size();
    std::vector<std::uint8_t> adj(n * n);
    for (std::size_t j = 0; j < n; ++j) {
        const auto r = g.row(j);
        std::copy(r.begin(), r.end(), adj.begin() + static_cast<std::ptrdiff_t>(j * n));
        adj[j * n + j] = 1;
    }
    return Graph(n, std::move(adj), true);
}

Graph twin(const Graph& g, std::size_t tau)
{
    if (tau == 0) throw DomainError("twin: tau must be >= 1");
    if (g.self_loops()) throw PreconditionError("twin: parent graph must not carry self-loops");
    const auto n = g.size();
    const auto big = n * tau;
    std::vector<std::uint8_t> adj(big * big, 0);
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t c = 0; c < tau; ++c) {
            const auto j = p * tau + c;
            for (std::size_t p2 = 0; p2 < n; ++p2) {
                const bool joined = (p2 == p) || g.adjacent(p, p2);
                if (!joined) continue;
                for (std::size_t c2 = 0; c2 < tau; ++c2) {
                    const auto k = p2 * tau + c2;
                    if (k != j) adj[j * big + k] = 1;
                }
            }
        }
    }
    return Graph(big, std::move(adj), false);
}

Graph circulant(std::size_t n, std::span<const std::size_t> offsets)
{
    if (n < 3) throw DomainError("circulant: n must be >= 3");
    if (offsets.empty()) throw DomainError("circulant: offset set is empty");
    std::vector<std::uint8_t> adj(n * n, 0);
    for (auto s : offsets) {
        if (s == 0 || s > n / 2)
            throw DomainError("circulant: offset " + std::to_string(s) + " outside 1.." + std::to_string(n / 2));
        for (std::size_t j = 0; j < n; ++j) {
            const auto k = (j + s) % n;
            adj[j * n + k] = adj[k * n + j] = 1;
        }
    }
    Graph g(n, std::move(adj), false);
    if (!g.is_connected()) throw DomainError("circulant: offsets generate a disconnected graph");
    return g;
}

Graph circulant(std::size_t n, std::initializer_list<std::size_t> offsets)
{
    return circulant(n, std::span<const std::size_t>(offsets.begin(), offsets.size()));
}

Graph complete_graph(std::size_t n, bool self_loops)
{
    std::vector<std::uint8_t> adj(n * n, 1);
    if (!self_loops)
        for (std::size_t j = 0; j < n; ++j) adj[j * n + j] = 0;
    return Graph(n, std::move(adj), self_loops);
}

Graph cycle_graph(std::size_t n)
{
    return circulant(n, {1});
}

Rational sync_sufficient_mu(std::size_t n)
{
    if (n < 2) throw DomainError("sync_sufficient_mu needs n >= 2");
    const auto nn = static_cast<std::int64_t>(n);
    // floor(3n/4 - 1) == floor(3n/4) - 1 for integer n
    return Rational{(3 * nn) / 4 - 1, nn - 1};
}

Graph read_graph(std::istream& in)
{
    std::string line;
    auto next_line = [&]() -> bool {
        while (std::getline(in, line)) {
            if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
            if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
        }
        return false;
    };

    if (!next_line()) throw ParseError("graph file is empty");
    std::istringstream header(line);
    std::string tag_n, tag_loops;
    long long n_raw = -1;
    int loops = -1;
    if (!(header >> tag_n >> n_raw >> tag_loops >> loops) || tag_n != "n" || tag_loops != "self_loops")
        throw ParseError("expected header `n <n> self_loops <0|1>`");
    if (n_raw < 1) throw ParseError("n must be >= 1");
    if (loops != 0 && loops != 1) throw ParseError("self_loops must be 0 or 1");
    const auto n = static_cast<std::size_t>(n_raw);

    std::vector<std::uint8_t> adj(n * n, 0);
    std::vector<std::pair<std::size_t, std::size_t>> mirrored;
    std::vector<char> seen_row(n, 0);
    for (std::size_t line_no = 0; line_no < n; ++line_no) {
        if (!next_line()) throw ParseError("expected " + std::to_string(n) + " adjacency lines");
        const auto colon = line.find(':');
        if (colon == std::string::npos) throw ParseError("adjacency line missing ':' : " + line);
        long long j_raw = -1;
        try {
            j_raw = std::stoll(line.substr(0, colon));
        } catch (const std::exception&) {
            throw ParseError("bad node index in line: " + line);
        }
        if (j_raw < 0 || static_cast<std::size_t>(j_raw) >= n) throw ParseError("node index out of range: " + line);
        const auto j = static_cast<std::size_t>(j_raw);
        if (seen_row[j]) throw ParseError("duplicate line for node " + std::to_string(j));
        seen_row[j] = 1;

        std::istringstream rest(line.substr(colon + 1));
        std::string token;
        while (rest >> token) {
            long long k_raw = -1;
            try {
                std::size_t used = 0;
                k_raw = std::stoll(token, &used);
                if (used != token.size()) throw ParseError("");
            } catch (const std::exception&) {
                throw ParseError("bad neighbour token '" + token + "' on line for node " + std::to_string(j));
            }
            if (k_raw < 0 || static_cast<std::size_t>(k_raw) >= n)
                throw ParseError("neighbour out of range on line for node " + std::to_string(j));
            const auto k = static_cast<std::size_t>(k_raw);
            if (k == j) throw ParseError("diagonal entries are implied by the self_loops flag (node " + std::to_string(j) + ")");
            if (k > j)
                adj[j * n + k] = adj[k * n + j] = 1;
            else
                mirrored.emplace_back(k, j);
        }
    }
    for (auto [k, j] : mirrored) {
        if (!adj[k * n + j])
            throw ParseError("asymmetric adjacency: " + std::to_string(j) + " lists " + std::to_string(k) +
                             " but not vice versa");
    }
    for (std::size_t j = 0; j < n; ++j) adj[j * n + j] = static_cast<std::uint8_t>(loops);

    Graph g(n, std::move(adj), loops == 1);
    if (!g.is_connected()) throw ParseError("graph is disconnected");
    return g;
}

Graph load_graph(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open graph file: " + path);
    return read_graph(in);
}

void write_graph(std::ostream& out, const Graph& g)
{
    const auto n = g.size();
    out << "n " << n << " self_loops " << (g.self_loops() ? 1 : 0) << '\n';
    for (std::size_t j = 0; j < n; ++j) {
        out << j << ':';
        for (std::size_t k = j + 1; k < n; ++k)
            if (g.adjacent(j, k)) out << ' ' << k;
        out << '\n';
    }
}

} // namespace kuramoto
