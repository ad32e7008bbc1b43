#include "rbhs/graph.hpp"

#include "rbhs/error.hpp"
#include "rbhs/random.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <list>
#include <map>
#include <set>
#include <sstream>

namespace rbhs
{
    Graph::Graph(int node_count, const std::vector<std::pair<NodeId, NodeId>> &edges)
    {
        if (node_count <= 0 || edges.empty())
        {
            throw Error(ErrorCode::EmptyGraph, "graph has no edges");
        }
        m_adj.assign(static_cast<std::size_t>(node_count), {});
        std::set<std::pair<NodeId, NodeId>> seen;
        for (auto [u, v] : edges)
        {
            if (u < 0 || v < 0 || u >= node_count || v >= node_count)
            {
                throw Error(ErrorCode::ParseError, "edge endpoint out of range");
            }
            if (u == v)
            {
                throw Error(ErrorCode::SelfLoop, "self-loop at node " + std::to_string(u));
            }
            const auto key = std::minmax(u, v);
            if (!seen.insert(key).second)
            {
                throw Error(ErrorCode::DuplicateEdge,
                            "duplicate edge " + std::to_string(key.first) + "-" + std::to_string(key.second));
            }
            m_adj[u].push_back(v);
            m_adj[v].push_back(u);
        }
        for (auto &list : m_adj)
        {
            std::sort(list.begin(), list.end());
        }
        m_edge_count = static_cast<int>(edges.size());
    }

    bool Graph::adjacent(NodeId u, NodeId v) const { return port_of(u, v) >= 0; }

    int Graph::port_of(NodeId u, NodeId v) const
    {
        const auto &list = m_adj.at(u);
        auto it = std::lower_bound(list.begin(), list.end(), v);
        if (it == list.end() || *it != v)
        {
            return -1;
        }
        return static_cast<int>(it - list.begin());
    }

    std::vector<std::pair<NodeId, NodeId>> Graph::edges() const
    {
        std::vector<std::pair<NodeId, NodeId>> out;
        out.reserve(static_cast<std::size_t>(m_edge_count));
        for (NodeId u = 0; u < node_count(); ++u)
        {
            for (NodeId v : m_adj[u])
            {
                if (u < v)
                {
                    out.emplace_back(u, v);
                }
            }
        }
        return out;
    }

    std::string Graph::to_edge_list() const
    {
        std::ostringstream os;
        for (auto [u, v] : edges())
        {
            os << u << ' ' << v << '\n';
        }
        return os.str();
    }

    Ordering Ordering::from_permutation(std::vector<NodeId> permutation)
    {
        Ordering o;
        o.rank_of.assign(permutation.size(), 0);
        for (std::size_t k = 0; k < permutation.size(); ++k)
        {
            const NodeId v = permutation[k];
            if (v < 0 || static_cast<std::size_t>(v) >= permutation.size() || o.rank_of[v] != 0)
            {
                throw Error(ErrorCode::InvalidOrdering, "not a permutation of the nodes");
            }
            o.rank_of[v] = static_cast<Rank>(k + 1);
        }
        o.permutation = std::move(permutation);
        return o;
    }

    namespace
    {
        long long parse_int(std::string_view token)
        {
            long long value = 0;
            const auto *first = token.data();
            const auto *last = token.data() + token.size();
            auto [ptr, ec] = std::from_chars(first, last, value);
            if (ec != std::errc{} || ptr != last)
            {
                throw Error(ErrorCode::ParseError, "not an integer: '" + std::string(token) + "'");
            }
            return value;
        }

        std::vector<std::string_view> split(std::string_view s, char sep)
        {
            std::vector<std::string_view> out;
            std::size_t start = 0;
            for (;;)
            {
                const auto pos = s.find(sep, start);
                out.push_back(s.substr(start, pos == std::string_view::npos ? s.size() - start : pos - start));
                if (pos == std::string_view::npos)
                {
                    return out;
                }
                start = pos + 1;
            }
        }
    }

    Graph parse_graph(std::string_view text)
    {
        std::vector<std::pair<long long, long long>> raw;
        std::istringstream in{std::string(text)};
        std::string line;
        while (std::getline(in, line))
        {
            if (auto hash = line.find('#'); hash != std::string::npos)
            {
                line.erase(hash);
            }
            std::istringstream ls(line);
            std::vector<std::string> tokens;
            for (std::string tok; ls >> tok;)
            {
                tokens.push_back(tok);
            }
            if (tokens.empty())
            {
                continue;
            }
            if (tokens.size() != 2)
            {
                throw Error(ErrorCode::ParseError, "expected 'u v', got '" + line + "'");
            }
            const long long u = parse_int(tokens[0]);
            const long long v = parse_int(tokens[1]);
            if (u < 0 || v < 0)
            {
                throw Error(ErrorCode::ParseError, "negative node id");
            }
            raw.emplace_back(u, v);
        }
        if (raw.empty())
        {
            throw Error(ErrorCode::EmptyGraph, "no edges in input");
        }
        std::map<long long, NodeId> compact;
        for (auto [u, v] : raw)
        {
            compact.emplace(u, 0);
            compact.emplace(v, 0);
        }
        NodeId next = 0;
        for (auto &[id, idx] : compact)
        {
            idx = next++;
        }
        std::vector<std::pair<NodeId, NodeId>> edges;
        edges.reserve(raw.size());
        for (auto [u, v] : raw)
        {
            edges.emplace_back(compact[u], compact[v]);
        }
        return Graph(next, edges);
    }

    Graph generate_graph(std::string_view spec, std::uint64_t seed)
    {
        const auto colon = spec.find(':');
        if (colon == std::string_view::npos)
        {
            throw Error(ErrorCode::InfeasibleSpec, "expected kind:params, got '" + std::string(spec) + "'");
        }
        const auto kind = spec.substr(0, colon);
        const auto params = spec.substr(colon + 1);
        std::vector<std::pair<NodeId, NodeId>> edges;

        auto as_int = [&](std::string_view token) {
            try
            {
                return static_cast<int>(parse_int(token));
            }
            catch (const Error &)
            {
                throw Error(ErrorCode::InfeasibleSpec, "bad parameter in '" + std::string(spec) + "'");
            }
        };

        if (kind == "ring")
        {
            const int n = as_int(params);
            if (n < 3)
            {
                throw Error(ErrorCode::InfeasibleSpec, "ring needs n >= 3");
            }
            for (int i = 0; i < n; ++i)
            {
                edges.emplace_back(i, (i + 1) % n);
            }
            return Graph(n, edges);
        }
        if (kind == "complete")
        {
            const int n = as_int(params);
            if (n < 3)
            {
                throw Error(ErrorCode::InfeasibleSpec, "complete needs n >= 3");
            }
            for (int u = 0; u < n; ++u)
            {
                for (int v = u + 1; v < n; ++v)
                {
                    edges.emplace_back(u, v);
                }
            }
            return Graph(n, edges);
        }
        if (kind == "grid")
        {
            // Accept both "3x4" and the multiplication sign.
            std::string dims(params);
            if (auto pos = dims.find("\xC3\x97"); pos != std::string::npos)
            {
                dims.replace(pos, 2, "x");
            }
            const auto parts = split(dims, 'x');
            if (parts.size() != 2)
            {
                throw Error(ErrorCode::InfeasibleSpec, "grid needs AxB");
            }
            const int a = as_int(parts[0]);
            const int b = as_int(parts[1]);
            if (a < 3 || b < 3)
            {
                throw Error(ErrorCode::InfeasibleSpec, "torus grid needs both sides >= 3");
            }
            for (int i = 0; i < a; ++i)
            {
                for (int j = 0; j < b; ++j)
                {
                    const int id = i * b + j;
                    edges.emplace_back(id, ((i + 1) % a) * b + j);
                    edges.emplace_back(id, i * b + (j + 1) % b);
                }
            }
            return Graph(a * b, edges);
        }
        if (kind == "random-biconnected")
        {
            const auto parts = split(params, ',');
            if (parts.size() != 2)
            {
                throw Error(ErrorCode::InfeasibleSpec, "random-biconnected needs n,m");
            }
            const int n = as_int(parts[0]);
            const int m = as_int(parts[1]);
            const long long max_edges = static_cast<long long>(n) * (n - 1) / 2;
            if (n < 3 || m < n || m > max_edges)
            {
                throw Error(ErrorCode::InfeasibleSpec, "need n >= 3 and n <= m <= n(n-1)/2");
            }
            std::mt19937_64 rng(splitmix64(seed));
            std::vector<NodeId> perm(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i)
            {
                perm[i] = i;
            }
            for (int i = n - 1; i > 0; --i)
            {
                std::swap(perm[i], perm[uniform_below(rng, static_cast<std::uint64_t>(i) + 1)]);
            }
            // A Hamiltonian cycle is biconnected; extra chords keep it so.
            std::set<std::pair<NodeId, NodeId>> used;
            for (int i = 0; i < n; ++i)
            {
                auto e = std::minmax(perm[i], perm[(i + 1) % n]);
                used.insert(e);
                edges.emplace_back(e.first, e.second);
            }
            std::vector<std::pair<NodeId, NodeId>> candidates;
            for (int u = 0; u < n; ++u)
            {
                for (int v = u + 1; v < n; ++v)
                {
                    if (!used.count({u, v}))
                    {
                        candidates.emplace_back(u, v);
                    }
                }
            }
            for (int k = 0; k < m - n; ++k)
            {
                const auto pick = k + uniform_below(rng, candidates.size() - static_cast<std::size_t>(k));
                std::swap(candidates[k], candidates[pick]);
                edges.push_back(candidates[k]);
            }
            return Graph(n, edges);
        }
        throw Error(ErrorCode::InfeasibleSpec, "unknown generator '" + std::string(kind) + "'");
    }

    bool induced_connected(const Graph &g, const std::vector<bool> &members)
    {
        const int n = g.node_count();
        NodeId start = -1;
        int total = 0;
        for (NodeId v = 0; v < n; ++v)
        {
            if (members[v])
            {
                ++total;
                if (start < 0)
                {
                    start = v;
                }
            }
        }
        if (total == 0)
        {
            return true;
        }
        std::vector<bool> seen(static_cast<std::size_t>(n), false);
        std::vector<NodeId> stack{start};
        seen[start] = true;
        int reached = 0;
        while (!stack.empty())
        {
            const NodeId u = stack.back();
            stack.pop_back();
            ++reached;
            for (NodeId v : g.neighbors(u))
            {
                if (members[v] && !seen[v])
                {
                    seen[v] = true;
                    stack.push_back(v);
                }
            }
        }
        return reached == total;
    }

    bool is_connected(const Graph &g) { return induced_connected(g, std::vector<bool>(g.node_count(), true)); }

    bool is_biconnected(const Graph &g)
    {
        const int n = g.node_count();
        if (n < 3 || !is_connected(g))
        {
            return false;
        }
        // Iterative Tarjan articulation-point search rooted at node 0.
        std::vector<int> pre(n, -1), low(n, 0), parent(n, -1);
        std::vector<std::size_t> next_edge(n, 0);
        int counter = 0;
        int root_children = 0;
        std::vector<NodeId> stack{0};
        pre[0] = low[0] = counter++;
        while (!stack.empty())
        {
            const NodeId u = stack.back();
            const auto nbrs = g.neighbors(u);
            if (next_edge[u] < nbrs.size())
            {
                const NodeId w = nbrs[next_edge[u]++];
                if (pre[w] < 0)
                {
                    parent[w] = u;
                    pre[w] = low[w] = counter++;
                    if (u == 0)
                    {
                        ++root_children;
                    }
                    stack.push_back(w);
                }
                else if (w != parent[u])
                {
                    low[u] = std::min(low[u], pre[w]);
                }
                continue;
            }
            stack.pop_back();
            const NodeId p = parent[u];
            if (p >= 0)
            {
                low[p] = std::min(low[p], low[u]);
                if (p != 0 && low[u] >= pre[p])
                {
                    return false;
                }
            }
        }
        return root_children == 1;
    }

    Ordering st_numbering(const Graph &g, NodeId s, NodeId t)
    {
        const int n = g.node_count();
        if (s < 0 || t < 0 || s >= n || t >= n || !g.adjacent(s, t))
        {
            throw Error(ErrorCode::NotAdjacent, "st-numbering endpoints must be adjacent");
        }
        if (!is_biconnected(g))
        {
            throw Error(ErrorCode::NotBiconnected, "st-numbering requires a biconnected graph");
        }

        // DFS from s whose first tree edge is (s, t); low[v] holds the vertex of
        // smallest preorder reachable from v's subtree through one back edge.
        std::vector<int> pre(n, -1);
        std::vector<NodeId> parent(n, -1), low(n, -1), order;
        order.reserve(n);
        std::vector<std::vector<NodeId>> nbr_order(n);
        for (NodeId v = 0; v < n; ++v)
        {
            const auto nb = g.neighbors(v);
            nbr_order[v].assign(nb.begin(), nb.end());
        }
        std::stable_partition(nbr_order[s].begin(), nbr_order[s].end(), [&](NodeId v) { return v == t; });

        std::vector<std::size_t> next_edge(n, 0);
        int counter = 0;
        std::vector<NodeId> stack{s};
        pre[s] = counter++;
        low[s] = s;
        order.push_back(s);
        while (!stack.empty())
        {
            const NodeId u = stack.back();
            if (next_edge[u] < nbr_order[u].size())
            {
                const NodeId w = nbr_order[u][next_edge[u]++];
                if (pre[w] < 0)
                {
                    parent[w] = u;
                    pre[w] = counter++;
                    low[w] = w;
                    order.push_back(w);
                    stack.push_back(w);
                }
                else if (w != parent[u] && pre[w] < pre[low[u]])
                {
                    low[u] = w;
                }
                continue;
            }
            stack.pop_back();
            const NodeId p = parent[u];
            if (p >= 0 && pre[low[u]] < pre[low[p]])
            {
                low[p] = low[u];
            }
        }

        // Tarjan's sign-list construction.
        std::list<NodeId> list{s, t};
        std::vector<std::list<NodeId>::iterator> where(n);
        where[s] = list.begin();
        where[t] = std::next(list.begin());
        std::vector<bool> plus(n, false);
        for (NodeId v : order)
        {
            if (v == s || v == t)
            {
                continue;
            }
            const NodeId p = parent[v];
            if (!plus[low[v]])
            {
                where[v] = list.insert(where[p], v);
                plus[p] = true;
            }
            else
            {
                where[v] = list.insert(std::next(where[p]), v);
                plus[p] = false;
            }
        }
        return Ordering::from_permutation(std::vector<NodeId>(list.begin(), list.end()));
    }

    Ordering default_ordering(const Graph &g)
    {
        const auto nb = g.neighbors(0);
        if (nb.empty())
        {
            throw Error(ErrorCode::NotBiconnected, "homebase has no neighbours");
        }
        return st_numbering(g, 0, nb.back());
    }

    bool is_valid_ordering(const Graph &g, const Ordering &o)
    {
        const int n = g.node_count();
        if (o.size() != n || static_cast<int>(o.rank_of.size()) != n)
        {
            return false;
        }
        std::vector<bool> seen(n, false);
        for (Rank k = 1; k <= n; ++k)
        {
            const NodeId v = o.at(k);
            if (v < 0 || v >= n || seen[v] || o.rank(v) != k)
            {
                return false;
            }
            seen[v] = true;
        }
        if (!g.adjacent(o.homebase(), o.terminal()))
        {
            return false;
        }
        std::vector<bool> prefix(n, false), suffix(n, false);
        for (Rank k = 1; k <= n; ++k)
        {
            prefix[o.at(k)] = true;
            suffix[o.at(n - k + 1)] = true;
            if (!induced_connected(g, prefix) || !induced_connected(g, suffix))
            {
                return false;
            }
        }
        return true;
    }

    std::vector<NodeId> shortest_path(const Graph &g, NodeId from, NodeId to, const std::vector<bool> &allowed)
    {
        const int n = g.node_count();
        if (!allowed[from] || !allowed[to])
        {
            return {};
        }
        // Distances towards `to`, then greedy smallest-id descent from `from`.
        std::vector<int> dist(n, -1);
        std::deque<NodeId> queue{to};
        dist[to] = 0;
        while (!queue.empty())
        {
            const NodeId u = queue.front();
            queue.pop_front();
            for (NodeId v : g.neighbors(u))
            {
                if (allowed[v] && dist[v] < 0)
                {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        if (dist[from] < 0)
        {
            return {};
        }
        std::vector<NodeId> path{from};
        NodeId cur = from;
        while (cur != to)
        {
            for (NodeId v : g.neighbors(cur))
            {
                if (allowed[v] && dist[v] == dist[cur] - 1)
                {
                    cur = v;
                    break;
                }
            }
            path.push_back(cur);
        }
        return path;
    }
}
