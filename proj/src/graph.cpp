#include "domset/graph.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <deque>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "domset/rng.hpp"

namespace domset {

int Graph::edge_count() const {
    size_t deg = 0;
    for (const auto& nbrs : adj_) deg += nbrs.size();
    return static_cast<int>(deg / 2);
}

bool Graph::has_edge(int u, int v) const {
    const auto& nbrs = adj_[u];
    return std::binary_search(nbrs.begin(), nbrs.end(), v);
}

void Graph::add_edge(int u, int v) {
    int n = vertex_count();
    if (u < 0 || v < 0 || u >= n || v >= n)
        throw std::out_of_range("edge endpoint out of range");
    if (u == v) throw std::invalid_argument("loop edge");
    if (has_edge(u, v)) throw std::invalid_argument("duplicate edge");
    adj_[u].insert(std::upper_bound(adj_[u].begin(), adj_[u].end(), v), v);
    adj_[v].insert(std::upper_bound(adj_[v].begin(), adj_[v].end(), u), u);
}

void Graph::remove_edge(int u, int v) {
    auto erase_from = [](std::vector<int>& nbrs, int w) {
        auto it = std::lower_bound(nbrs.begin(), nbrs.end(), w);
        if (it == nbrs.end() || *it != w)
            throw std::invalid_argument("removing a missing edge");
        nbrs.erase(it);
    };
    erase_from(adj_[u], v);
    erase_from(adj_[v], u);
}

bool Graph::is_cubic() const {
    for (const auto& nbrs : adj_)
        if (nbrs.size() != 3) return false;
    return vertex_count() > 0;
}

std::vector<std::pair<int, int>> Graph::edges() const {
    std::vector<std::pair<int, int>> out;
    for (int u = 0; u < vertex_count(); ++u)
        for (int v : adj_[u])
            if (u < v) out.emplace_back(u, v);
    return out;
}

Graph load_graph(std::string_view text) {
    std::vector<long> numbers;
    int line_no = 0;
    size_t pos = 0;
    std::optional<int> n;
    Graph g;
    while (pos <= text.size()) {
        size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos
                                                     ? std::string_view::npos
                                                     : eol - pos);
        pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
        ++line_no;
        if (size_t hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);

        numbers.clear();
        size_t i = 0;
        while (i < line.size()) {
            while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
            if (i >= line.size()) break;
            long value = 0;
            auto [p, ec] = std::from_chars(line.data() + i, line.data() + line.size(), value);
            if (ec != std::errc())
                throw std::runtime_error("graph line " + std::to_string(line_no) +
                                         ": expected an integer");
            i = static_cast<size_t>(p - line.data());
            numbers.push_back(value);
        }
        if (numbers.empty()) continue;

        if (!n) {
            if (numbers.size() != 1 || numbers[0] < 0)
                throw std::runtime_error("graph line " + std::to_string(line_no) +
                                         ": expected the vertex count");
            n = static_cast<int>(numbers[0]);
            g = Graph(*n);
            continue;
        }
        if (numbers.size() != 2)
            throw std::runtime_error("graph line " + std::to_string(line_no) +
                                     ": expected `u v`");
        try {
            g.add_edge(static_cast<int>(numbers[0]), static_cast<int>(numbers[1]));
        } catch (const std::exception& e) {
            throw std::runtime_error("graph line " + std::to_string(line_no) + ": " +
                                     e.what());
        }
    }
    if (!n) throw std::runtime_error("empty graph file");
    return g;
}

Graph load_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open graph file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return load_graph(buf.str());
}

std::string save_graph(const Graph& g) {
    std::string out = std::to_string(g.vertex_count()) + "\n";
    for (auto [u, v] : g.edges())
        out += std::to_string(u) + " " + std::to_string(v) + "\n";
    return out;
}

namespace {

// Shortest cycle discovered by a BFS from source, pruned at depth bound/2.
// Returns the trimmed witness (may not pass through source); its length never
// underestimates the girth, and a BFS from a vertex of a shortest cycle
// attains it.
std::vector<int> bfs_short_cycle(const Graph& g, int source, int upper_bound,
                                 std::vector<int>& dist, std::vector<int>& parent,
                                 std::vector<int>& touched) {
    const int depth_cap = upper_bound / 2;
    dist[source] = 0;
    parent[source] = -1;
    touched.push_back(source);
    std::deque<int> queue{source};

    std::vector<int> best;
    int best_len = upper_bound;
    while (!queue.empty()) {
        int u = queue.front();
        queue.pop_front();
        if (dist[u] >= depth_cap) continue;
        for (int w : g.neighbors(u)) {
            if (w == parent[u]) continue;
            if (dist[w] < 0) {
                dist[w] = dist[u] + 1;
                parent[w] = u;
                touched.push_back(w);
                queue.push_back(w);
                continue;
            }
            if (dist[u] + dist[w] + 1 >= best_len) continue;

            // Walk both endpoints up to their lowest common ancestor; the
            // trimmed closed walk is a simple cycle through edge (u, w).
            std::vector<int> up_u{u}, up_w{w};
            int a = u, b = w;
            while (dist[a] > dist[b]) { a = parent[a]; up_u.push_back(a); }
            while (dist[b] > dist[a]) { b = parent[b]; up_w.push_back(b); }
            while (a != b) {
                a = parent[a]; up_u.push_back(a);
                b = parent[b]; up_w.push_back(b);
            }
            int len = static_cast<int>(up_u.size() + up_w.size()) - 1;
            if (len < best_len && len >= 3) {
                best_len = len;
                best.assign(up_u.begin(), up_u.end());  // u .. lca
                for (size_t i = up_w.size() - 1; i-- > 0;) best.push_back(up_w[i]);
            }
        }
    }
    for (int v : touched) { dist[v] = -1; parent[v] = -1; }
    touched.clear();
    return best;
}

}  // namespace

GirthReport girth(const Graph& g) {
    const int n = g.vertex_count();
    GirthReport report;
    std::vector<int> dist(n, -1), parent(n, -1), touched;
    touched.reserve(n);

    int best = n + 1;
    for (int s = 0; s < n; ++s) {
        auto cycle = bfs_short_cycle(g, s, best, dist, parent, touched);
        if (!cycle.empty() && static_cast<int>(cycle.size()) < best) {
            best = static_cast<int>(cycle.size());
            report.cycle = std::move(cycle);
            if (best == 3) break;
        }
    }
    if (best <= n) report.girth = best;
    return report;
}

Graph generate_random_cubic(int n, uint64_t seed) {
    if (n < 4 || n % 2 != 0)
        throw std::invalid_argument("cubic graphs need an even vertex count >= 4");

    Rng rng = Rng::stream(seed, /*tag=*/0x67656eULL);
    std::vector<int> points(3 * static_cast<size_t>(n));
    for (size_t i = 0; i < points.size(); ++i) points[i] = static_cast<int>(i / 3);

    constexpr int kMaxAttempts = 20000;
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        for (size_t i = points.size(); i > 1; --i)
            std::swap(points[i - 1], points[rng.below(i)]);

        Graph g(n);
        bool simple = true;
        for (size_t i = 0; i + 1 < points.size() && simple; i += 2) {
            int u = points[i], v = points[i + 1];
            if (u == v || g.has_edge(u, v))
                simple = false;
            else
                g.add_edge(u, v);
        }
        if (simple) return g;
    }
    throw std::runtime_error("pairing model failed to produce a simple graph");
}

BoostResult boost_girth(const Graph& g, int girth_target, uint64_t seed,
                        long max_proposals) {
    BoostResult result;
    result.graph = g;
    Graph& work = result.graph;
    const int n = work.vertex_count();
    if (!work.is_cubic())
        throw std::invalid_argument("boost_girth expects a cubic graph");

    Rng rng = Rng::stream(seed, /*tag=*/0x626f6f7374ULL);
    std::vector<int> dist(n, -1), parent(n, -1), touched;

    auto short_cycle_through = [&](int v) {
        return bfs_short_cycle(work, v, girth_target, dist, parent, touched);
    };

    // Shortest cycle through edge (x, y) is one more than the shortest x-y
    // path that avoids the edge itself; the swap is acceptable only if that
    // cycle is not shorter than the target.
    auto edge_ok = [&](int x, int y) {
        const int depth_cap = girth_target - 2;  // reaching y this deep is bad
        dist[x] = 0;
        touched.push_back(x);
        std::deque<int> queue{x};
        bool reached = false;
        while (!queue.empty() && !reached) {
            int u = queue.front();
            queue.pop_front();
            if (dist[u] >= depth_cap) continue;
            for (int w : work.neighbors(u)) {
                if (u == x && w == y) continue;  // skip the edge under test
                if (dist[w] >= 0) continue;
                if (w == y) { reached = true; break; }
                dist[w] = dist[u] + 1;
                touched.push_back(w);
                queue.push_back(w);
            }
        }
        for (int v : touched) { dist[v] = -1; parent[v] = -1; }
        touched.clear();
        return !reached;
    };

    // An accepted swap never introduces a cycle shorter than the target (both
    // new edges are re-checked), so a vertex verified clean stays clean and a
    // single forward pass suffices.
    for (int v = 0; v < n && result.proposals < max_proposals;) {
        auto cycle = short_cycle_through(v);
        if (cycle.empty()) {
            ++v;
            continue;
        }
        while (result.proposals < max_proposals) {
            ++result.proposals;
            size_t e = rng.below(cycle.size());
            int a = cycle[e];
            int b = cycle[(e + 1) % cycle.size()];
            int c = static_cast<int>(rng.below(n));
            const auto& cn = work.neighbors(c);
            int d = cn[rng.below(cn.size())];
            if (rng.below(2)) std::swap(c, d);

            if (a == c || a == d || b == c || b == d) continue;
            if (work.has_edge(a, c) || work.has_edge(b, d)) continue;

            work.remove_edge(a, b);
            work.remove_edge(c, d);
            work.add_edge(a, c);
            work.add_edge(b, d);
            if (!edge_ok(a, c) || !edge_ok(b, d)) {
                work.remove_edge(a, c);
                work.remove_edge(b, d);
                work.add_edge(a, b);
                work.add_edge(c, d);
                continue;
            }
            break;  // fixed; re-examine v for further short cycles
        }
    }

    auto report = girth(work);
    result.achieved_girth = report.girth.value_or(n + 1);
    result.reached = result.achieved_girth >= girth_target;
    return result;
}

PathSystem decompose_paths(const Graph& g, const Matching& m, int girth_param,
                           int levels,
                           std::optional<std::pair<int, int>> window) {
    if (!g.is_cubic())
        throw std::invalid_argument("decompose_paths expects a cubic graph");
    const int n = g.vertex_count();

    PathSystem ps;
    ps.params.girth_param = girth_param;
    ps.params.levels = levels;
    if (window) {
        ps.params.min_len = std::max(1, window->first);
        ps.params.max_len = std::max(ps.params.min_len, window->second);
    } else {
        int lo = std::max(1, (girth_param + 4 * levels - 1) / (4 * levels));
        int hi = (girth_param + 2 * levels - 1) / (2 * levels) - 1;
        ps.params.min_len = lo;
        ps.params.max_len = std::max(lo, hi);
    }
    const int max_len = ps.params.max_len;

    ps.mate.assign(n, -1);
    ps.path_of.assign(n, -1);
    for (int v = 0; v < n; ++v) {
        if (m.partner[v] < 0)
            ps.uncovered.push_back(v);
        else
            ps.mate[v] = m.partner[v];
    }

    // Remainder graph: covered vertices, all edges except matching edges.
    // Every degree is at most 2, so components are paths and cycles.
    std::vector<std::array<int, 2>> link(n, {-1, -1});
    std::vector<int> degree(n, 0);
    for (int v = 0; v < n; ++v) {
        if (ps.mate[v] < 0) continue;
        for (int w : g.neighbors(v)) {
            if (ps.mate[w] < 0 || w == ps.mate[v]) continue;
            link[v][degree[v]++] = w;
        }
    }

    auto cut_into_segments = [&](const std::vector<int>& walk) {
        int total = static_cast<int>(walk.size());
        int pieces = (total + max_len - 1) / max_len;
        int base = total / pieces, extra = total % pieces;
        int at = 0;
        for (int s = 0; s < pieces; ++s) {
            int len = base + (s < extra ? 1 : 0);
            std::vector<int> segment(walk.begin() + at, walk.begin() + at + len);
            int index = static_cast<int>(ps.paths.size());
            for (int v : segment) ps.path_of[v] = index;
            ps.paths.push_back(std::move(segment));
            at += len;
        }
    };

    std::vector<char> seen(n, 0);
    // Open paths first: walk from each endpoint of degree < 2.
    for (int v = 0; v < n; ++v) {
        if (seen[v] || ps.mate[v] < 0 || degree[v] == 2) continue;
        std::vector<int> walk{v};
        seen[v] = 1;
        int prev = -1, cur = v;
        while (true) {
            int next = (link[cur][0] != prev && link[cur][0] != -1) ? link[cur][0]
                                                                    : link[cur][1];
            if (next == -1 || next == prev) break;
            walk.push_back(next);
            seen[next] = 1;
            prev = cur;
            cur = next;
        }
        cut_into_segments(walk);
    }
    // Remaining covered vertices lie on cycles; start each at its lowest id.
    for (int v = 0; v < n; ++v) {
        if (seen[v] || ps.mate[v] < 0) continue;
        std::vector<int> walk{v};
        seen[v] = 1;
        int prev = v;
        int cur = std::min(link[v][0], link[v][1]);
        while (cur != v) {
            walk.push_back(cur);
            seen[cur] = 1;
            int next = link[cur][0] != prev ? link[cur][0] : link[cur][1];
            prev = cur;
            cur = next;
        }
        cut_into_segments(walk);
    }
    return ps;
}

}  // namespace domset
