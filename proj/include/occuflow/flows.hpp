#pragma once

#include <Eigen/Dense>

namespace occuflow {

// One stochastic E-step draw of the latent inflow/outflow counts. The inflow
// matrix carries a burn-in prefix of length L: row j holds flow time
// t = j - burn_in + 1, so rows 0..L-1 are the simulated pre-observation
// inflows for t = -L+1..0 and row L is the first observed flow day t = 1.
struct LatentFlows {
    Eigen::MatrixXi inflow;   // (burn_in + T_flow) x D
    Eigen::MatrixXi outflow;  // T_flow x D
    int burn_in = 0;

    Eigen::Index num_flow_days() const { return outflow.rows(); }
    Eigen::Index num_districts() const { return outflow.cols(); }

    // t is the 1-based flow day; t <= 0 addresses the burn-in prefix.
    int inflow_at(Eigen::Index t, Eigen::Index d) const { return inflow(burn_in + t - 1, d); }
    int& inflow_at(Eigen::Index t, Eigen::Index d) { return inflow(burn_in + t - 1, d); }
    int outflow_at(Eigen::Index t, Eigen::Index d) const { return outflow(t - 1, d); }

    // Inflow rows for the observed window t >= 1 only.
    Eigen::MatrixXi observed_inflow() const {
        return inflow.bottomRows(inflow.rows() - burn_in);
    }
};

}  // namespace occuflow
