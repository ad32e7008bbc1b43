#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rbhs
{
    using NodeId = int;
    // 1-based position of a node in an Ordering (v_1 .. v_n).
    using Rank = int;

    // Undirected simple graph. Each node's neighbours are kept in ascending id
    // order and the port of a neighbour is its index in that list, so port
    // labels are dense (0..degree-1) and deterministic.
    class Graph
    {
    public:
        Graph() = default;
        // Throws DuplicateEdge / SelfLoop / EmptyGraph / ParseError.
        Graph(int node_count, const std::vector<std::pair<NodeId, NodeId>> &edges);

        int node_count() const noexcept { return static_cast<int>(m_adj.size()); }
        int edge_count() const noexcept { return m_edge_count; }
        int degree(NodeId v) const { return static_cast<int>(m_adj.at(v).size()); }

        std::span<const NodeId> neighbors(NodeId v) const { return m_adj.at(v); }
        bool adjacent(NodeId u, NodeId v) const;

        // Returns -1 when v is not a neighbour of u.
        int port_of(NodeId u, NodeId v) const;
        NodeId neighbor_at(NodeId u, int port) const { return m_adj.at(u).at(port); }

        // Sorted list of (u, v) with u < v.
        std::vector<std::pair<NodeId, NodeId>> edges() const;

        std::string to_edge_list() const;

    private:
        std::vector<std::vector<NodeId>> m_adj;
        int m_edge_count = 0;
    };

    struct Ordering
    {
        std::vector<NodeId> permutation; // permutation[k-1] = v_k
        std::vector<Rank> rank_of;       // rank_of[node] = k

        int size() const noexcept { return static_cast<int>(permutation.size()); }
        NodeId at(Rank k) const { return permutation.at(k - 1); }
        Rank rank(NodeId v) const { return rank_of.at(v); }
        NodeId homebase() const { return permutation.front(); }
        NodeId terminal() const { return permutation.back(); }

        static Ordering from_permutation(std::vector<NodeId> permutation);
    };

    // Edge-list document: one "u v" pair per line, '#' starts a comment. Node
    // ids are compacted to 0..n-1 preserving their relative order.
    Graph parse_graph(std::string_view text);

    // Descriptors: ring:N, complete:N, grid:AxB (torus), random-biconnected:N,M.
    Graph generate_graph(std::string_view spec, std::uint64_t seed);

    bool is_connected(const Graph &g);
    bool is_biconnected(const Graph &g);

    // Ordering v_1 = s, v_n = t in which every prefix and every suffix induces a
    // connected subgraph. Throws NotAdjacent / NotBiconnected.
    Ordering st_numbering(const Graph &g, NodeId s, NodeId t);

    // Default (homebase, terminal) choice used throughout: node 0 and its
    // largest-id neighbour, which gives rings their natural clockwise order.
    Ordering default_ordering(const Graph &g);

    // Validates permutation, adjacency of the endpoints and the prefix/suffix
    // connectivity property.
    bool is_valid_ordering(const Graph &g, const Ordering &o);

    // Connectivity of the subgraph induced by `members` (a mask over nodes).
    bool induced_connected(const Graph &g, const std::vector<bool> &members);

    // Shortest path from `from` to `to` using only nodes with allowed[v] true.
    // Among shortest paths the lexicographically smallest id sequence wins.
    // Returns the node sequence including both ends, or empty if unreachable.
    std::vector<NodeId> shortest_path(const Graph &g, NodeId from, NodeId to,
                                      const std::vector<bool> &allowed);
}
