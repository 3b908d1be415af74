#include "rcplan/product.hpp"

#include <algorithm>
#include <stdexcept>

namespace rcplan {

double joint_belief_alph(const BeliefMap& beliefs, int cell, std::uint32_t sigma) {
    double prod = 1.0;
    for (int ap = 0; ap < beliefs.num_aps(); ++ap) {
        const double b = beliefs.get(cell, ap);
        prod *= ((sigma >> ap) & 1u) ? b : (1.0 - b);
    }
    return prod;
}

double belief_en(const BeliefMap& beliefs, const Fsa& fsa, int cell, int q, int q2) {
    double sum = 0.0;
    for (std::uint32_t sigma = 0; sigma < fsa.num_symbols(); ++sigma)
        if (fsa.delta[q][sigma] == q2) sum += joint_belief_alph(beliefs, cell, sigma);
    return sum;
}

ProductBeliefMdp build_product(const FiniteMdp& rover_mdp, const Fsa& fsa,
                               const BeliefMap& beliefs, int rover_cell) {
    const int nx = rover_mdp.num_states;
    const int nq = fsa.num_states;
    if (beliefs.num_cells() != nx)
        throw std::invalid_argument("belief map does not cover the rover state space");

    ProductBeliefMdp prod;
    prod.num_cells = nx;
    prod.num_fsa_states = nq;
    prod.initial = rover_cell * nq + fsa.initial;
    prod.mdp.init(nx * nq, rover_mdp.num_inputs);
    prod.accepting.assign(static_cast<std::size_t>(nx) * nq, 0);
    for (int x = 0; x < nx; ++x)
        for (int q = 0; q < nq; ++q)
            if (fsa.accepting[q]) prod.accepting[prod.state(x, q)] = 1;

    // B_en(x, q -> q2) for all successors, flattened [x][q*nq + q2]
    const std::uint32_t nsym = fsa.num_symbols();
    std::vector<double> balph(nsym);
    std::vector<double> ben(static_cast<std::size_t>(nq) * nq);
    for (int x = 0; x < nx; ++x) {
        for (std::uint32_t sigma = 0; sigma < nsym; ++sigma)
            balph[sigma] = joint_belief_alph(beliefs, x, sigma);
        std::fill(ben.begin(), ben.end(), 0.0);
        for (int q = 0; q < nq; ++q)
            for (std::uint32_t sigma = 0; sigma < nsym; ++sigma)
                ben[static_cast<std::size_t>(q) * nq + fsa.delta[q][sigma]] += balph[sigma];

        for (int q = 0; q < nq; ++q) {
            for (int u = 0; u < rover_mdp.num_inputs; ++u) {
                auto& out = prod.mdp.row(prod.state(x, q), u);
                for (const auto& [x2, p] : rover_mdp.row(x, u)) {
                    for (int q2 = 0; q2 < nq; ++q2) {
                        const double w = ben[static_cast<std::size_t>(q) * nq + q2];
                        if (w <= 0.0) continue;
                        out.emplace_back(prod.state(x2, q2), p * w);
                    }
                }
                std::sort(out.begin(), out.end());
            }
        }
    }
    return prod;
}

PolicySynthesisResult synthesize_policy(const ProductBeliefMdp& product, int horizon,
                                        int sweep_cap) {
    ValueIterationOptions opts;
    opts.horizon = horizon >= 0 ? horizon : -1;
    opts.sweep_cap = sweep_cap;
    auto vi = reachability_value_iteration(product.mdp, product.accepting, opts);
    return {std::move(vi.policy), std::move(vi.value), vi.sweeps};
}

std::vector<int> induce_rover_policy(const ProductBeliefMdp& product,
                                     const std::vector<int>& policy, int q) {
    std::vector<int> per_cell(product.num_cells);
    for (int x = 0; x < product.num_cells; ++x)
        per_cell[x] = policy[product.state(x, q)];
    return per_cell;
}

std::vector<double> compute_b_max(const ProductBeliefMdp& product,
                                  const std::vector<int>& policy, int rover_cell,
                                  int t_r) {
    if (t_r < 1) throw std::invalid_argument("t_r must be >= 1");
    const int nq = product.num_fsa_states;
    const int q0 = product.fsa_state_of(product.initial);
    MarkovChain chain = induce_chain(product.mdp, policy, product.state(rover_cell, q0));
    Eigen::VectorXd b = chain.initial;
    std::vector<double> bmax(product.num_cells, 0.0);
    for (int step = 0;; ++step) {
        for (int x = 0; x < product.num_cells; ++x) {
            double mass = 0.0;
            for (int q = 0; q < nq; ++q) mass += b[product.state(x, q)];
            bmax[x] = std::max(bmax[x], mass);
        }
        if (step >= t_r - 1) break;
        b = chain_step(chain, b);
    }
    return bmax;
}

}  // namespace rcplan
