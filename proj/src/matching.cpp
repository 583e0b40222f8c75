#include <algorithm>
#include <queue>
#include <vector>

#include "domset/graph.hpp"

namespace domset {

namespace {

// Augmenting-path search with blossom contraction (the classic array-based
// formulation). One BFS per exposed vertex over a greedy initial matching.
class BlossomSearch {
public:
    explicit BlossomSearch(const Graph& g)
        : g_(g),
          n_(g.vertex_count()),
          match_(n_, -1),
          parent_(n_, -1),
          base_(n_),
          used_(n_, 0),
          in_blossom_(n_, 0) {}

    Matching run() {
        for (int v = 0; v < n_; ++v) {
            if (match_[v] >= 0) continue;
            for (int w : g_.neighbors(v)) {
                if (match_[w] < 0) {
                    match_[v] = w;
                    match_[w] = v;
                    break;
                }
            }
        }
        for (int v = 0; v < n_; ++v)
            if (match_[v] < 0) {
                int leaf = find_augmenting_path(v);
                if (leaf >= 0) augment(leaf);
            }
        return Matching{match_};
    }

private:
    int find_augmenting_path(int root) {
        std::fill(used_.begin(), used_.end(), 0);
        std::fill(parent_.begin(), parent_.end(), -1);
        for (int i = 0; i < n_; ++i) base_[i] = i;

        used_[root] = 1;
        std::queue<int> queue;
        queue.push(root);
        while (!queue.empty()) {
            int v = queue.front();
            queue.pop();
            for (int to : g_.neighbors(v)) {
                if (base_[v] == base_[to] || match_[v] == to) continue;
                if (to == root || (match_[to] >= 0 && parent_[match_[to]] >= 0)) {
                    // Odd cycle: contract the blossom around the common base.
                    int cur_base = lowest_common_base(v, to);
                    std::fill(in_blossom_.begin(), in_blossom_.end(), 0);
                    mark_path(v, cur_base, to);
                    mark_path(to, cur_base, v);
                    for (int i = 0; i < n_; ++i)
                        if (in_blossom_[base_[i]]) {
                            base_[i] = cur_base;
                            if (!used_[i]) {
                                used_[i] = 1;
                                queue.push(i);
                            }
                        }
                } else if (parent_[to] < 0) {
                    parent_[to] = v;
                    if (match_[to] < 0) return to;
                    used_[match_[to]] = 1;
                    queue.push(match_[to]);
                }
            }
        }
        return -1;
    }

    int lowest_common_base(int a, int b) {
        std::vector<char> visited(n_, 0);
        int v = a;
        while (true) {
            v = base_[v];
            visited[v] = 1;
            if (match_[v] < 0) break;  // reached the root
            v = parent_[match_[v]];
        }
        int u = b;
        while (true) {
            u = base_[u];
            if (visited[u]) return u;
            u = parent_[match_[u]];
        }
    }

    void mark_path(int v, int until_base, int child) {
        while (base_[v] != until_base) {
            in_blossom_[base_[v]] = 1;
            in_blossom_[base_[match_[v]]] = 1;
            parent_[v] = child;
            child = match_[v];
            v = parent_[match_[v]];
        }
    }

    void augment(int leaf) {
        int v = leaf;
        while (v >= 0) {
            int pv = parent_[v];
            int next = match_[pv];
            match_[v] = pv;
            match_[pv] = v;
            v = next;
        }
    }

    const Graph& g_;
    int n_;
    std::vector<int> match_, parent_, base_;
    std::vector<char> used_, in_blossom_;
};

}  // namespace

Matching maximum_matching(const Graph& g) { return BlossomSearch(g).run(); }

}  // namespace domset
