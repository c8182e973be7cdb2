#pragma once

#include <utility>
#include <vector>

#include "occuflow/rng.hpp"

namespace occuflow {

// Intensities of the two latent Poisson counting processes whose difference
// is observed. Zero is permitted only for degenerate cases.
struct SkellamParams {
    double lambda_in = 0.0;
    double lambda_out = 0.0;
};

// Joint PMF of (I = i, R = i - delta) conditional on I <= i_max, over the
// admissible support i in [i_min, i_max] with i_min = max(0, delta).
struct TruncatedJointPmf {
    long delta = 0;
    long i_min = 0;
    long i_max = 0;
    std::vector<double> probs;  // probs[k] is P(I = i_min + k)

    double prob_at(long i) const { return probs[static_cast<std::size_t>(i - i_min)]; }
    double mean_inflow() const;
    double mean_outflow() const;
};

// P(Delta = delta) for the difference of two independent Poisson variables,
// computed as the convolution sum in log space to relative accuracy ~1e-10.
double skellam_pmf(long delta, const SkellamParams& params);
double skellam_log_pmf(long delta, const SkellamParams& params);

// Smallest truncation bound m >= max(0, delta) such that the unnormalized
// joint mass beyond m is below tail_tol times the mass up to m.
long choose_imax(long delta, const SkellamParams& params, double tail_tol = 1e-10);

TruncatedJointPmf truncated_joint_pmf(long delta, const SkellamParams& params, long i_max);

// One draw of (inflow, outflow) conditional on the observed difference, via
// inverse-CDF sampling over the truncated joint PMF. Guarantees i - r == delta.
std::pair<long, long> sample_conditional(long delta, const SkellamParams& params, RngEngine& rng,
                                         double tail_tol = 1e-10);

}  // namespace occuflow
