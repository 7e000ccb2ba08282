#include "compsize/mc_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <thread>

#include "compsize/errors.hpp"

namespace compsize {

std::vector<std::uint32_t> sample_degree_sequence(const DegreeDistribution& u,
                                                  std::size_t n_nodes, Rng& rng,
                                                  std::size_t* odd_fixups) {
    if (n_nodes == 0) raise(errc::invalid_parameter, "need at least one node");
    const std::vector<double>& pmf = u.pmf();
    std::vector<double> cdf(pmf.size());
    double acc = 0.0;
    for (std::size_t k = 0; k < pmf.size(); ++k) {
        acc += pmf[k];
        cdf[k] = acc;
    }
    // acc is 1 up to rounding; dividing the uniform draw by it makes the last
    // bin close exactly.
    std::vector<std::uint32_t> degrees(n_nodes);
    std::uint64_t stub_sum = 0;
    for (std::size_t i = 0; i < n_nodes; ++i) {
        const double v = rng.next_double() * acc;
        // upper_bound so zero-probability bins can never be drawn (v == 0
        // lands on the first k with positive mass)
        const std::size_t k =
            std::upper_bound(cdf.begin(), cdf.end(), v) - cdf.begin();
        degrees[i] = std::uint32_t(std::min(k, pmf.size() - 1));
        stub_sum += degrees[i];
    }
    if (stub_sum % 2 != 0) {
        degrees[rng.next_below(n_nodes)] += 1;
        if (odd_fixups) ++*odd_fixups;
    }
    return degrees;
}

std::vector<std::uint32_t> match_stubs(const std::vector<std::uint32_t>& degrees,
                                       Rng& rng) {
    std::uint64_t total = 0;
    for (std::uint32_t d : degrees) total += d;
    if (total % 2 != 0) raise(errc::odd_stubs, "degree sum must be even");
    std::vector<std::uint32_t> stubs;
    stubs.reserve(total);
    for (std::uint32_t node = 0; node < degrees.size(); ++node)
        stubs.insert(stubs.end(), degrees[node], node);
    // Fisher-Yates; pairing consecutive entries afterwards is then a uniform
    // perfect matching.
    for (std::size_t i = stubs.size(); i > 1; --i)
        std::swap(stubs[i - 1], stubs[rng.next_below(i)]);
    return stubs;
}

namespace {

struct UnionFind {
    std::vector<std::uint32_t> parent;
    std::vector<std::uint32_t> size;

    explicit UnionFind(std::size_t n) : parent(n), size(n, 1) {
        std::iota(parent.begin(), parent.end(), 0);
    }

    std::uint32_t find(std::uint32_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];  // path halving
            x = parent[x];
        }
        return x;
    }

    void unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (size[a] < size[b]) std::swap(a, b);
        parent[b] = a;
        size[a] += size[b];
    }
};

} // namespace

std::map<std::size_t, std::size_t> component_histogram(
    std::size_t n_nodes, const std::vector<std::uint32_t>& edge_endpoints) {
    if (edge_endpoints.size() % 2 != 0)
        raise(errc::invalid_parameter, "endpoint list must pair up");
    UnionFind uf(n_nodes);
    for (std::size_t i = 0; i + 1 < edge_endpoints.size(); i += 2)
        uf.unite(edge_endpoints[i], edge_endpoints[i + 1]);
    std::map<std::size_t, std::size_t> hist;
    for (std::uint32_t v = 0; v < n_nodes; ++v)
        if (uf.find(v) == v) ++hist[uf.size[v]];
    return hist;
}

namespace {

struct ReplicaStats {
    std::vector<double> w;  // node fraction per size, 1..max_size
    double giant = 0.0;
    std::size_t odd_fixups = 0;
};

ReplicaStats run_replica(const DegreeDistribution& u, std::size_t nodes,
                         std::uint64_t stream_seed, std::size_t max_size,
                         std::size_t threshold) {
    Rng rng(stream_seed);
    ReplicaStats st;
    st.w.assign(max_size + 1, 0.0);
    std::vector<std::uint32_t> degrees =
        sample_degree_sequence(u, nodes, rng, &st.odd_fixups);
    std::vector<std::uint32_t> endpoints = match_stubs(degrees, rng);
    std::map<std::size_t, std::size_t> hist = component_histogram(nodes, endpoints);
    // A replica has at most one component above N^(2/3); treat only the
    // largest one as the giant so near-threshold runs stay consistent.
    std::size_t giant_size = 0;
    if (!hist.empty() && hist.rbegin()->first > threshold) giant_size = hist.rbegin()->first;
    for (const auto& [sz, count] : hist) {
        std::size_t cnt = count;
        if (sz == giant_size) {
            st.giant += double(sz) / double(nodes);
            cnt -= 1;
        }
        if (sz <= max_size && cnt > 0)
            st.w[sz] += double(sz * cnt) / double(nodes);
    }
    return st;
}

std::size_t thread_budget() {
    const char* env = std::getenv("COMPSIZE_THREADS");
    if (!env || !*env) return 1;
    const long v = std::strtol(env, nullptr, 10);
    if (v <= 1) return 1;
    return std::size_t(v);
}

} // namespace

EnsembleEstimate ensemble_estimate(const DegreeDistribution& u, std::size_t nodes,
                                   std::size_t replicas, std::uint64_t seed,
                                   std::size_t max_size) {
    if (nodes < 2) raise(errc::invalid_parameter, "need at least two nodes");
    if (replicas < 1) raise(errc::invalid_parameter, "need at least one replica");
    EnsembleEstimate est;
    est.nodes = nodes;
    est.replicas = replicas;
    est.seed = seed;
    est.giant_threshold = std::size_t(std::ceil(std::pow(double(nodes), 2.0 / 3.0)));
    max_size = std::min(max_size, nodes);

    std::vector<ReplicaStats> stats(replicas);
    const std::size_t workers = std::min(thread_budget(), replicas);
    if (workers <= 1) {
        for (std::size_t r = 0; r < replicas; ++r)
            stats[r] = run_replica(u, nodes, replica_seed(seed, r), max_size,
                                   est.giant_threshold);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t wix = 0; wix < workers; ++wix) {
            pool.emplace_back([&, wix] {
                for (std::size_t r = wix; r < replicas; r += workers)
                    stats[r] = run_replica(u, nodes, replica_seed(seed, r), max_size,
                                           est.giant_threshold);
            });
        }
        for (std::thread& t : pool) t.join();
    }

    est.w_hat.assign(max_size + 1, 0.0);
    est.w_se.assign(max_size + 1, 0.0);
    const double R = double(replicas);
    for (const ReplicaStats& st : stats) {
        for (std::size_t n = 1; n <= max_size; ++n) est.w_hat[n] += st.w[n];
        est.giant_hat += st.giant;
        est.odd_fixups += st.odd_fixups;
    }
    for (std::size_t n = 1; n <= max_size; ++n) est.w_hat[n] /= R;
    est.giant_hat /= R;
    if (replicas > 1) {
        double gvar = 0.0;
        for (const ReplicaStats& st : stats) {
            for (std::size_t n = 1; n <= max_size; ++n) {
                const double d = st.w[n] - est.w_hat[n];
                est.w_se[n] += d * d;
            }
            const double dg = st.giant - est.giant_hat;
            gvar += dg * dg;
        }
        for (std::size_t n = 1; n <= max_size; ++n)
            est.w_se[n] = std::sqrt(est.w_se[n] / (R * (R - 1.0)));
        est.giant_se = std::sqrt(gvar / (R * (R - 1.0)));
    }
    return est;
}

} // namespace compsize
