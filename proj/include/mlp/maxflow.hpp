#pragma once

#include <queue>
#include <stdexcept>
#include <vector>

namespace mlp {

template <class T>
struct FlowResult {
    T value{};
    std::vector<bool> source_side;  // nodes reachable from s in the final residual graph
};

// Shortest-augmenting-path max flow on a dense capacity matrix. Works for any
// ordered field or integer type; small graphs only.
template <class T>
FlowResult<T> max_flow(const std::vector<std::vector<T>>& cap, int s, int t, const T* stop_at = nullptr) {
    const int n = static_cast<int>(cap.size());
    if (s < 0 || t < 0 || s >= n || t >= n || s == t) throw std::invalid_argument("bad flow endpoints");
    std::vector<std::vector<T>> res = cap;
    FlowResult<T> out;
    out.value = T(0);
    std::vector<int> prev(n);
    while (true) {
        std::fill(prev.begin(), prev.end(), -1);
        prev[s] = s;
        std::queue<int> q;
        q.push(s);
        while (!q.empty() && prev[t] < 0) {
            int a = q.front();
            q.pop();
            for (int b = 0; b < n; ++b)
                if (prev[b] < 0 && res[a][b] > T(0)) {
                    prev[b] = a;
                    q.push(b);
                }
        }
        if (prev[t] < 0) break;
        T push = res[prev[t]][t];
        for (int b = t; b != s; b = prev[b])
            if (res[prev[b]][b] < push) push = res[prev[b]][b];
        for (int b = t; b != s; b = prev[b]) {
            res[prev[b]][b] -= push;
            res[b][prev[b]] += push;
        }
        out.value += push;
        if (stop_at && !(out.value < *stop_at)) return out;
    }
    out.source_side.assign(n, false);
    for (int v = 0; v < n; ++v) out.source_side[v] = prev[v] >= 0;
    return out;
}

}  // namespace mlp
