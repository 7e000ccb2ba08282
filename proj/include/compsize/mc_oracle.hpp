#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

#include "compsize/degree_model.hpp"
#include "compsize/numeric.hpp"

namespace compsize {

// Simulation estimate of the component size law on finite sampled networks.
// w_hat[n] is the mean over replicas of (nodes in components of size n)/N,
// with the largest component of a replica excluded (counted in giant_hat
// instead) whenever it exceeds giant_threshold = ceil(N^(2/3)). Component
// sizes in a replica always add up to N; w_hat reports sizes up to max_size.
struct EnsembleEstimate {
    std::vector<double> w_hat;  // index n, up to max_size; entry 0 unused
    std::vector<double> w_se;   // standard error over replicas
    double giant_hat = 0.0;
    double giant_se = 0.0;
    std::size_t nodes = 0;
    std::size_t replicas = 0;
    std::uint64_t seed = 0;
    std::size_t giant_threshold = 0;
    std::size_t odd_fixups = 0;  // replicas that needed the odd-stub repair
};

// Draw N degrees by inverting the cumulative pmf. If the total stub count
// comes out odd, one extra stub is added to a uniformly random node and the
// repair is counted in *odd_fixups.
std::vector<std::uint32_t> sample_degree_sequence(const DegreeDistribution& u,
                                                  std::size_t n_nodes, Rng& rng,
                                                  std::size_t* odd_fixups = nullptr);

// Uniform stub matching: every stub is listed, the list is shuffled, and
// consecutive entries are paired. Self-loops and multi-edges are kept (they
// do not affect connectivity). Returns flat endpoints: entries 2i and 2i+1
// are the two ends of edge i. Throws odd_stubs if the degree sum is odd.
std::vector<std::uint32_t> match_stubs(const std::vector<std::uint32_t>& degrees, Rng& rng);

// Component size -> count, via union-find (path halving, union by size).
std::map<std::size_t, std::size_t> component_histogram(
    std::size_t n_nodes, const std::vector<std::uint32_t>& edge_endpoints);

// Run `replicas` independent networks of `nodes` nodes. Replica r uses the
// stream replica_seed(seed, r), so results do not depend on scheduling; the
// COMPSIZE_THREADS environment variable (default 1) only sets how many run
// concurrently, and the merge is done in replica order.
EnsembleEstimate ensemble_estimate(const DegreeDistribution& u, std::size_t nodes,
                                   std::size_t replicas, std::uint64_t seed,
                                   std::size_t max_size = 100);

} // namespace compsize
