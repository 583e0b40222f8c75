#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace domset {

class Graph {
public:
    Graph() = default;
    explicit Graph(int n) : adj_(n) {}

    int vertex_count() const { return static_cast<int>(adj_.size()); }
    int edge_count() const;
    const std::vector<int>& neighbors(int v) const { return adj_[v]; }

    bool has_edge(int u, int v) const;
    void add_edge(int u, int v);     // throws on loops, duplicates, bad ids
    void remove_edge(int u, int v);  // throws if absent

    bool is_cubic() const;
    std::vector<std::pair<int, int>> edges() const;  // each once, u < v

private:
    std::vector<std::vector<int>> adj_;  // sorted neighbor lists
};

// Edge-list format: first line `n`, then one `u v` per line, 0-based, each
// undirected edge once. `#` starts a comment.
Graph load_graph(std::string_view text);
Graph load_graph_file(const std::string& path);
std::string save_graph(const Graph& g);

struct GirthReport {
    std::optional<int> girth;  // nullopt for forests
    std::vector<int> cycle;    // witness of length girth when finite
};

GirthReport girth(const Graph& g);

struct Matching {
    std::vector<int> partner;  // -1 when unmatched

    int size() const {
        int c = 0;
        for (int p : partner) c += p >= 0;
        return c / 2;
    }
};

// Maximum-cardinality matching in a general graph (blossom contraction over
// a greedy initial matching).
Matching maximum_matching(const Graph& g);

// Vertex-disjoint paths covering the matched vertices, produced by deleting
// unmatched vertices and matching edges and then cutting the leftover paths
// and cycles into segments of at most max_len vertices.
struct PathSystem {
    struct Params {
        int girth_param = 0;
        int levels = 0;
        int min_len = 1;
        int max_len = 1;
    };

    std::vector<std::vector<int>> paths;
    std::vector<int> mate;      // matching partner, -1 for uncovered vertices
    std::vector<int> path_of;   // path index per vertex, -1 for uncovered
    std::vector<int> uncovered;
    Params params;
};

// Default segment window from the girth parameter: min = max(1, ceil(g/4K)),
// max = max(min, ceil(g/2K) - 1). Pass an explicit window to override.
PathSystem decompose_paths(const Graph& g, const Matching& m, int girth_param,
                           int levels,
                           std::optional<std::pair<int, int>> window = std::nullopt);

// Pairing-model sample, resampled until simple. n must be even and >= 4.
Graph generate_random_cubic(int n, uint64_t seed);

struct BoostResult {
    Graph graph;
    int achieved_girth = 0;
    long proposals = 0;  // swap proposals examined
    bool reached = false;
};

// Raise the girth to at least target by 2-edge swaps on shortest cycles;
// each accepted swap keeps the graph cubic and simple and never introduces
// a cycle shorter than the target through the new edges.
BoostResult boost_girth(const Graph& g, int girth_target, uint64_t seed,
                        long max_proposals = 2'000'000);

}  // namespace domset
