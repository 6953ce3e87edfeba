// Compiled lazy-Dijkstra kernel for the built-in generators and hash weight field.
// Mirrors fppmorse/_pysearch.py and fppmorse/weights.py operation for operation;
// build with -ffp-contract=off so floating-point results are bit-identical.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace fpp {

struct V {
    int64_t a, b, c;
};

inline bool operator==(const V& x, const V& y) { return x.a == y.a && x.b == y.b && x.c == y.c; }
inline bool operator<(const V& x, const V& y) {
    if (x.a != y.a) return x.a < y.a;
    if (x.b != y.b) return x.b < y.b;
    return x.c < y.c;
}

constexpr uint64_t GAMMA = 0x9E3779B97F4A7C15ULL;
constexpr uint64_t M1 = 0xBF58476D1CE4E5B9ULL;
constexpr uint64_t M2 = 0x94D049BB133111EBULL;

inline uint64_t fmix64(uint64_t z) {
    z = (z ^ (z >> 30)) * M1;
    z = (z ^ (z >> 27)) * M2;
    return z ^ (z >> 31);
}

struct VHash {
    size_t operator()(const V& v) const {
        uint64_t h = fmix64(static_cast<uint64_t>(v.a) + GAMMA);
        h = fmix64((h ^ static_cast<uint64_t>(v.b)) + GAMMA);
        h = fmix64((h ^ static_cast<uint64_t>(v.c)) + GAMMA);
        return static_cast<size_t>(h);
    }
};

inline double norm_ppf(double p) {
    double q = p - 0.5;
    double r, num, den;
    if (std::fabs(q) <= 0.425) {
        r = 0.180625 - q * q;
        num = (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r + 6.7265770927008700853e+4) * r
                   + 4.5921953931549871457e+4) * r + 1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r
                + 1.3314166789178437745e+2) * r + 3.3871328727963666080e+0) * q;
        den = (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r + 3.9307895800092710610e+4) * r
                   + 2.1213794301586595867e+4) * r + 5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r
                + 4.2313330701600911252e+1) * r + 1.0);
        return num / den;
    }
    r = (q <= 0.0) ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    if (r <= 5.0) {
        r = r - 1.6;
        num = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r + 2.41780725177450611770e-1) * r
                   + 1.27045825245236838258e+0) * r + 3.64784832476320460504e+0) * r + 5.76949722146069140550e+0) * r
                + 4.63033784615654529590e+0) * r + 1.42343711074968357734e+0);
        den = (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r + 1.51986665636164571966e-2) * r
                   + 1.48103976427480074590e-1) * r + 6.89767334985100004550e-1) * r + 1.67638483018380384940e+0) * r
                + 2.05319162663775882187e+0) * r + 1.0);
    } else {
        r = r - 5.0;
        num = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r + 1.24266094738807843860e-3) * r
                   + 2.65321895265761230930e-2) * r + 2.96560571828504891230e-1) * r + 1.78482653991729133580e+0) * r
                + 5.46378491116411436990e+0) * r + 6.65790464350110377720e+0);
        den = (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r + 1.84631831751005468180e-5) * r
                   + 7.86869131145613259100e-4) * r + 1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r
                + 5.99832206555887937690e-1) * r + 1.0);
    }
    double x = num / den;
    return q < 0.0 ? -x : x;
}

// dist codes follow weights.DIST_KINDS: const, unif, exp, lognorm
struct Field {
    uint64_t seed;
    int kind;
    double a, b;

    double weight(const V& x, const V& y) const {
        if (kind == 0) return a;
        const V& u = (x < y) ? x : y;
        const V& v = (x < y) ? y : x;
        uint64_t h = fmix64(seed + GAMMA);
        const int64_t words[6] = {u.a, u.b, u.c, v.a, v.b, v.c};
        for (int i = 0; i < 6; ++i) h = fmix64((h ^ static_cast<uint64_t>(words[i])) + GAMMA);
        double unit = (static_cast<double>(h >> 12) + 0.5) / 4503599627370496.0;
        if (kind == 1) return a + (b - a) * unit;
        if (kind == 2) return -std::log1p(-unit) / a;
        return std::exp(a + b * norm_ppf(unit));
    }
};

// gen kinds follow graphs.Generator.kernel_kind: lattice, tree, strip
struct Gen {
    int kind;
    int64_t param;  // lattice dimension or tree degree
    std::vector<int64_t> lefts, widths, rights;  // strip: positive-side patch table
    int64_t extent = 0;

    void positive_patches(int64_t x, std::vector<std::pair<int64_t, int64_t>>& out) const {
        auto it = std::upper_bound(lefts.begin(), lefts.end(), x);
        int64_t i = static_cast<int64_t>(it - lefts.begin()) - 1;
        if (i >= 1 && rights[i - 1] >= x) out.emplace_back(lefts[i - 1], widths[i - 1]);
        if (i >= 0 && rights[i] >= x) out.emplace_back(lefts[i], widths[i]);
    }

    void check_extent(int64_t x) const {
        int64_t ax = x < 0 ? -x : x;
        if (ax + 1 > extent) throw std::out_of_range("strip position beyond patch table");
    }

    int64_t patch_width(int64_t left) const {
        check_extent(left);
        if (left >= 0) {
            auto it = std::lower_bound(lefts.begin(), lefts.end(), left);
            if (it != lefts.end() && *it == left) return widths[it - lefts.begin()];
        } else {
            auto it = std::lower_bound(rights.begin(), rights.end(), -left);
            if (it != rights.end() && *it == -left) return widths[it - rights.begin()];
        }
        throw std::invalid_argument("no strip patch with that left endpoint");
    }

    void neighbors(const V& v, std::vector<V>& out) const {
        out.clear();
        if (kind == 0) {
            for (int64_t axis = 0; axis < param; ++axis) {
                for (int step : {1, -1}) {
                    V w = v;
                    if (axis == 0) w.a += step;
                    else if (axis == 1) w.b += step;
                    else w.c += step;
                    out.push_back(w);
                }
            }
            return;
        }
        if (kind == 1) {
            const int64_t k = param;
            if (v.b == 0) {
                out.push_back({v.a - 1, 0, 0});
                out.push_back({v.a + 1, 0, 0});
                for (int64_t j = 0; j < k - 2; ++j) out.push_back({v.a, 1, j});
                return;
            }
            if (v.b == 1) out.push_back({v.a, 0, 0});
            else out.push_back({v.a, v.b - 1, v.c / (k - 1)});
            if (v.c > (std::numeric_limits<int64_t>::max() - (k - 2)) / (k - 1))
                throw std::overflow_error("tree vertex too deep for 64-bit words");
            int64_t base = v.c * (k - 1);
            for (int64_t j = 0; j < k - 1; ++j) out.push_back({v.a, v.b + 1, base + j});
            return;
        }
        // strip
        const int64_t x = v.a, r = v.b, L = v.c;
        if (r == 0) {
            check_extent(x);
            out.push_back({x - 1, 0, 0});
            out.push_back({x + 1, 0, 0});
            std::vector<std::pair<int64_t, int64_t>> ps;
            if (x <= 0) {
                std::vector<std::pair<int64_t, int64_t>> tmp;
                positive_patches(-x, tmp);
                for (auto& p : tmp) ps.emplace_back(-p.first - p.second, p.second);
            }
            if (x >= 0) positive_patches(x, ps);
            std::sort(ps.begin(), ps.end());
            for (auto& p : ps) out.push_back({x, 1, p.first});
            return;
        }
        const int64_t w = patch_width(L);
        out.push_back(r > 1 ? V{x, r - 1, L} : V{x, 0, 0});
        if (r < w) out.push_back({x, r + 1, L});
        if (x > L) out.push_back({x - 1, r, L});
        if (x < L + w) out.push_back({x + 1, r, L});
    }
};

struct Result {
    double distance;
    std::vector<V> path;
    int64_t settled;
    bool exact;
    bool found;
};

struct HeapItem {
    double d;
    V v;
};

struct HeapGreater {
    bool operator()(const HeapItem& x, const HeapItem& y) const {
        if (x.d != y.d) return x.d > y.d;
        return y.v < x.v;
    }
};

inline Result dijkstra(const Gen& g, const Field& f, const V& source, const std::vector<V>& targets_in,
                       int64_t cap, const std::vector<V>* allowed_in) {
    std::unordered_set<V, VHash> targets(targets_in.begin(), targets_in.end());
    Result res{0.0, {}, 0, true, false};
    if (targets.count(source)) {
        res.path.push_back(source);
        res.settled = 1;
        res.found = true;
        return res;
    }
    std::unordered_set<V, VHash> allowed;
    const bool restrict = allowed_in != nullptr;
    if (restrict) allowed.insert(allowed_in->begin(), allowed_in->end());

    std::unordered_map<V, int64_t, VHash> index;
    std::vector<V> verts;
    std::vector<double> dist;
    std::vector<int64_t> pred;
    std::vector<char> settled;
    index.reserve(1024);
    auto intern = [&](const V& v) -> int64_t {
        auto it = index.find(v);
        if (it != index.end()) return it->second;
        int64_t id = static_cast<int64_t>(verts.size());
        index.emplace(v, id);
        verts.push_back(v);
        dist.push_back(std::numeric_limits<double>::infinity());
        pred.push_back(-1);
        settled.push_back(0);
        return id;
    };
    auto trace = [&](int64_t id) {
        std::vector<V> out;
        for (int64_t cur = id; cur != -1; cur = pred[cur]) out.push_back(verts[cur]);
        std::reverse(out.begin(), out.end());
        return out;
    };

    int64_t src = intern(source);
    dist[src] = 0.0;
    std::priority_queue<HeapItem, std::vector<HeapItem>, HeapGreater> heap;
    heap.push({0.0, source});
    int64_t count = 0;
    std::vector<V> nbrs;
    nbrs.reserve(8);
    while (!heap.empty()) {
        HeapItem top = heap.top();
        heap.pop();
        int64_t u = index.find(top.v)->second;
        if (settled[u] || top.d > dist[u]) continue;
        if (targets.count(top.v)) {
            res.distance = top.d;
            res.path = trace(u);
            res.settled = count + 1;
            res.found = true;
            return res;
        }
        if (count >= cap) break;
        settled[u] = 1;
        ++count;
        const V uv = top.v;
        const double d = top.d;
        g.neighbors(uv, nbrs);
        for (const V& nv : nbrs) {
            if (restrict && !allowed.count(nv)) continue;
            int64_t v = intern(nv);
            if (settled[v]) continue;
            double nd = d + f.weight(uv, nv);
            if (nd < dist[v]) {
                dist[v] = nd;
                pred[v] = u;
                heap.push({nd, nv});
            } else if (nd == dist[v] && uv < verts[pred[v]]) {
                pred[v] = u;
            }
        }
    }
    res.exact = false;
    res.settled = count;
    std::vector<V> sorted_targets(targets_in.begin(), targets_in.end());
    std::sort(sorted_targets.begin(), sorted_targets.end());
    int64_t best = -1;
    for (const V& t : sorted_targets) {
        auto it = index.find(t);
        if (it == index.end() || !std::isfinite(dist[it->second])) continue;
        if (best == -1 || dist[it->second] < dist[best]) best = it->second;
    }
    if (best == -1) {
        res.distance = std::numeric_limits<double>::infinity();
        return res;
    }
    res.distance = dist[best];
    res.path = trace(best);
    res.found = true;
    return res;
}

}  // namespace fpp
