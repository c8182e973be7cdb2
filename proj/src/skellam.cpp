#include "occuflow/skellam.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "occuflow/errors.hpp"

namespace occuflow {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log of the unnormalized joint term lambda_in^i * lambda_out^(i-delta) /
// (i! (i-delta)!), with the 0^0 := 1 convention for zero intensities. The
// common factor exp(-lambda_in - lambda_out) is omitted; it cancels in
// normalized quantities and is restored where absolute mass is needed.
double log_joint_term(long i, long delta, const SkellamParams& p) {
    const long r = i - delta;
    if (i < 0 || r < 0) return kNegInf;
    double t = 0.0;
    if (i > 0) {
        if (p.lambda_in <= 0.0) return kNegInf;
        t += static_cast<double>(i) * std::log(p.lambda_in);
    }
    if (r > 0) {
        if (p.lambda_out <= 0.0) return kNegInf;
        t += static_cast<double>(r) * std::log(p.lambda_out);
    }
    t -= std::lgamma(static_cast<double>(i) + 1.0) + std::lgamma(static_cast<double>(r) + 1.0);
    return t;
}

double log_add(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    const double m = std::max(a, b);
    return m + std::log1p(std::exp(std::min(a, b) - m));
}

// Ratio term(i+1)/term(i); strictly decreasing in i, so once it drops below
// one the tail is bounded by a geometric series.
double term_ratio(long i, long delta, const SkellamParams& p) {
    const double denom = static_cast<double>(i + 1) * static_cast<double>(i + 1 - delta);
    return p.lambda_in * p.lambda_out / denom;
}

}  // namespace

double TruncatedJointPmf::mean_inflow() const {
    double m = 0.0;
    for (std::size_t k = 0; k < probs.size(); ++k) {
        m += probs[k] * static_cast<double>(i_min + static_cast<long>(k));
    }
    return m;
}

double TruncatedJointPmf::mean_outflow() const {
    double m = 0.0;
    for (std::size_t k = 0; k < probs.size(); ++k) {
        m += probs[k] * static_cast<double>(i_min + static_cast<long>(k) - delta);
    }
    return m;
}

long choose_imax(long delta, const SkellamParams& p, double tail_tol) {
    const long i_min = std::max<long>(0, delta);
    if (p.lambda_in <= 0.0 || p.lambda_out <= 0.0) {
        // At most one admissible support point carries mass.
        return i_min;
    }
    const double log_tol = std::log(tail_tol);
    double log_mass = kNegInf;
    long i = i_min;
    const long hard_cap = i_min + 4096;
    for (; i < hard_cap; ++i) {
        log_mass = log_add(log_mass, log_joint_term(i, delta, p));
        const double r_next = term_ratio(i, delta, p);
        if (r_next < 1.0) {
            // tail(i) <= term(i+1) / (1 - r(i+1)) since ratios keep shrinking
            const double log_tail_bound =
                log_joint_term(i + 1, delta, p) - std::log1p(-term_ratio(i + 1, delta, p));
            if (log_tail_bound < log_tol + log_mass) break;
        }
    }
    return i;
}

double skellam_log_pmf(long delta, const SkellamParams& p) {
    const long i_min = std::max<long>(0, delta);
    if (p.lambda_in <= 0.0 && p.lambda_out <= 0.0) {
        return delta == 0 ? 0.0 : kNegInf;
    }
    if (p.lambda_in <= 0.0) {
        // Only I = 0 possible, so delta must be non-positive.
        if (delta > 0) return kNegInf;
        const double r = static_cast<double>(-delta);
        return -p.lambda_out + r * std::log(p.lambda_out) - std::lgamma(r + 1.0);
    }
    if (p.lambda_out <= 0.0) {
        if (delta < 0) return kNegInf;
        const double i = static_cast<double>(delta);
        return -p.lambda_in + i * std::log(p.lambda_in) - std::lgamma(i + 1.0);
    }
    const long m = choose_imax(delta, p, 1e-14);
    double log_sum = kNegInf;
    for (long i = i_min; i <= m; ++i) {
        log_sum = log_add(log_sum, log_joint_term(i, delta, p));
    }
    return log_sum - p.lambda_in - p.lambda_out;
}

double skellam_pmf(long delta, const SkellamParams& p) {
    return std::exp(skellam_log_pmf(delta, p));
}

TruncatedJointPmf truncated_joint_pmf(long delta, const SkellamParams& p, long i_max) {
    const long i_min = std::max<long>(0, delta);
    if (i_max < i_min) {
        throw EmptySupportError("i_max=" + std::to_string(i_max) + " below admissible minimum " +
                                std::to_string(i_min));
    }
    const std::size_t n = static_cast<std::size_t>(i_max - i_min + 1);
    std::vector<double> log_terms(n);
    double log_norm = kNegInf;
    for (std::size_t k = 0; k < n; ++k) {
        log_terms[k] = log_joint_term(i_min + static_cast<long>(k), delta, p);
        log_norm = log_add(log_norm, log_terms[k]);
    }
    if (log_norm == kNegInf) {
        throw EmptySupportError("truncated joint PMF has no admissible mass");
    }
    TruncatedJointPmf out;
    out.delta = delta;
    out.i_min = i_min;
    out.i_max = i_max;
    out.probs.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        out.probs[k] = std::exp(log_terms[k] - log_norm);
    }
    return out;
}

std::pair<long, long> sample_conditional(long delta, const SkellamParams& p, RngEngine& rng,
                                         double tail_tol) {
    const long m = choose_imax(delta, p, tail_tol);
    const TruncatedJointPmf pmf = truncated_joint_pmf(delta, p, m);
    const double u = uniform01(rng);
    double cum = 0.0;
    long i = pmf.i_max;
    for (std::size_t k = 0; k < pmf.probs.size(); ++k) {
        cum += pmf.probs[k];
        if (u < cum) {
            i = pmf.i_min + static_cast<long>(k);
            break;
        }
    }
    return {i, i - delta};
}

}  // namespace occuflow
