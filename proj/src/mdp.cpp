#include "polco/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

namespace polco {

namespace {

constexpr double kRowSumTol = 1e-12;

bool row_ok(std::span<const double> row, double& sum) {
    sum = 0.0;
    bool nonneg = true;
    for (double x : row) {
        if (x < 0.0) nonneg = false;
        sum += x;
    }
    return nonneg && std::abs(sum - 1.0) <= kRowSumTol;
}

} // namespace

TabularPolicy TabularPolicy::uniform(int num_states, int num_actions) {
    TabularPolicy p;
    p.num_states = num_states;
    p.num_actions = num_actions;
    p.pi.assign(static_cast<std::size_t>(num_states) * num_actions, 1.0 / num_actions);
    return p;
}

std::vector<std::string> validate_cmp(const Cmp& c) {
    std::vector<std::string> report;
    if (c.num_states <= 0) report.push_back("num_states must be positive");
    if (c.num_actions <= 0) report.push_back("num_actions must be positive");
    if (!report.empty()) return report;

    if (!(c.gamma > 0.0 && c.gamma < 1.0)) {
        report.push_back("gamma out of range: need 0 < gamma < 1, got " + std::to_string(c.gamma));
    }
    const std::size_t expected = static_cast<std::size_t>(c.num_states) * c.num_actions * c.num_states;
    if (c.transition.size() != expected) {
        report.push_back("transition tensor has wrong size");
        return report;
    }
    if (c.mu.size() != static_cast<std::size_t>(c.num_states)) {
        report.push_back("mu has wrong length");
        return report;
    }
    for (int s = 0; s < c.num_states; ++s) {
        for (int a = 0; a < c.num_actions; ++a) {
            std::span<const double> row(c.transition.data() +
                                            (static_cast<std::size_t>(s) * c.num_actions + a) * c.num_states,
                                        static_cast<std::size_t>(c.num_states));
            double sum = 0.0;
            if (!row_ok(row, sum)) {
                std::ostringstream os;
                os << "P[" << s << "][" << a << "] invalid: sum=" << sum
                   << (std::any_of(row.begin(), row.end(), [](double x) { return x < 0.0; })
                           ? ", has negative entries"
                           : "");
                report.push_back(os.str());
            }
        }
    }
    double mu_sum = 0.0;
    if (!row_ok(c.mu, mu_sum)) {
        report.push_back("mu invalid: sum=" + std::to_string(mu_sum));
    }
    if (c.reward) {
        if (c.reward->size() != static_cast<std::size_t>(c.num_states) * c.num_actions) {
            report.push_back("reward table has wrong size");
        } else {
            for (std::size_t i = 0; i < c.reward->size(); ++i) {
                double r = (*c.reward)[i];
                if (r < 0.0 || r > c.r_max) {
                    std::ostringstream os;
                    os << "reward[" << i / c.num_actions << "][" << i % c.num_actions
                       << "]=" << r << " outside [0, r_max=" << c.r_max << "]";
                    report.push_back(os.str());
                }
            }
        }
    }
    return report;
}

std::vector<std::string> validate_policy(const Cmp& c, const TabularPolicy& p) {
    std::vector<std::string> report;
    if (p.num_states != c.num_states || p.num_actions != c.num_actions ||
        p.pi.size() != static_cast<std::size_t>(c.num_states) * c.num_actions) {
        report.push_back("policy dimensions do not match the CMP");
        return report;
    }
    for (int s = 0; s < p.num_states; ++s) {
        std::span<const double> row(p.pi.data() + static_cast<std::size_t>(s) * p.num_actions,
                                    static_cast<std::size_t>(p.num_actions));
        double sum = 0.0;
        if (!row_ok(row, sum)) {
            report.push_back("pi[" + std::to_string(s) + "] invalid: sum=" + std::to_string(sum));
        }
    }
    return report;
}

void require_valid(const Cmp& c, const TabularPolicy& p) {
    auto report = validate_cmp(c);
    auto policy_report = validate_policy(c, p);
    report.insert(report.end(), policy_report.begin(), policy_report.end());
    if (!report.empty()) {
        std::string msg = "invalid inputs:";
        for (const auto& line : report) msg += "\n  " + line;
        throw std::invalid_argument(msg);
    }
}

PolicyInducedChain induced_chain(const Cmp& c, const TabularPolicy& p) {
    if (p.num_states != c.num_states || p.num_actions != c.num_actions) {
        throw std::invalid_argument("induced_chain: dimension mismatch");
    }
    PolicyInducedChain chain;
    chain.num_states = c.num_states;
    chain.m.assign(static_cast<std::size_t>(c.num_states) * c.num_states, 0.0);
    for (int s = 0; s < c.num_states; ++s) {
        for (int a = 0; a < c.num_actions; ++a) {
            const double w = p.prob(s, a);
            if (w == 0.0) continue;
            for (int t = 0; t < c.num_states; ++t) {
                chain.m[static_cast<std::size_t>(s) * c.num_states + t] += w * c.p(s, a, t);
            }
        }
    }
    return chain;
}

std::pair<OccupancyMeasure, std::vector<double>> occupancy(const Cmp& c, const TabularPolicy& p) {
    require_valid(c, p);
    const int n = c.num_states;
    PolicyInducedChain chain = induced_chain(c, p);

    // (I - gamma M^T) d = (1 - gamma) mu
    Eigen::MatrixXd system = Eigen::MatrixXd::Identity(n, n);
    for (int s = 0; s < n; ++s) {
        for (int t = 0; t < n; ++t) {
            system(t, s) -= c.gamma * chain.at(s, t);
        }
    }
    Eigen::VectorXd rhs(n);
    for (int s = 0; s < n; ++s) rhs(s) = (1.0 - c.gamma) * c.mu[s];

    Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);
    const double min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
    if (min_pivot < 1e-14) {
        throw std::runtime_error("occupancy: near-singular system, pivot " + std::to_string(min_pivot));
    }
    Eigen::VectorXd d_state = lu.solve(rhs);

    std::vector<double> marginal(n);
    for (int s = 0; s < n; ++s) marginal[s] = d_state(s);

    OccupancyMeasure d;
    d.kind = OccupancyKind::exact;
    d.sample_count = 0;
    d.values.resize(static_cast<std::size_t>(n) * c.num_actions);
    for (int s = 0; s < n; ++s) {
        for (int a = 0; a < c.num_actions; ++a) {
            d.values[static_cast<std::size_t>(s) * c.num_actions + a] = p.prob(s, a) * marginal[s];
        }
    }
    return {std::move(d), std::move(marginal)};
}

int truncation_length(double gamma, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("truncation_length: tol must be positive");
    if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("truncation_length: gamma in (0,1)");
    int t = 0;
    double tail = gamma / (1.0 - gamma); // gamma^{t+1}/(1-gamma) at t = 0
    while (tail >= tol) {
        tail *= gamma;
        ++t;
        if (t > 100000000) throw std::runtime_error("truncation_length: tolerance unreachable");
    }
    return t;
}

OccupancyMeasure occupancy_oracle(const Cmp& c, const TabularPolicy& p, double tol) {
    require_valid(c, p);
    const int n = c.num_states;
    const int terms = truncation_length(c.gamma, tol);
    PolicyInducedChain chain = induced_chain(c, p);

    // (1-gamma) sum_{t=0}^{T} gamma^t mu^T M^t, accumulated with plain loops
    std::vector<double> dist(c.mu);
    std::vector<double> acc(n, 0.0);
    std::vector<double> next(n, 0.0);
    double coeff = 1.0 - c.gamma;
    for (int t = 0; t <= terms; ++t) {
        for (int s = 0; s < n; ++s) acc[s] += coeff * dist[s];
        if (t == terms) break;
        std::fill(next.begin(), next.end(), 0.0);
        for (int s = 0; s < n; ++s) {
            const double mass = dist[s];
            if (mass == 0.0) continue;
            for (int u = 0; u < n; ++u) next[u] += mass * chain.at(s, u);
        }
        dist.swap(next);
        coeff *= c.gamma;
    }

    OccupancyMeasure d;
    d.kind = OccupancyKind::exact;
    d.sample_count = 0;
    d.values.resize(static_cast<std::size_t>(n) * c.num_actions);
    for (int s = 0; s < n; ++s) {
        for (int a = 0; a < c.num_actions; ++a) {
            d.values[static_cast<std::size_t>(s) * c.num_actions + a] = p.prob(s, a) * acc[s];
        }
    }
    return d;
}

SpectralInfo spectral_gap(const PolicyInducedChain& chain) {
    const int n = chain.num_states;
    if (n <= 0 || chain.m.size() != static_cast<std::size_t>(n) * n) {
        throw std::invalid_argument("spectral_gap: malformed chain");
    }
    for (int s = 0; s < n; ++s) {
        double sum = 0.0;
        for (int t = 0; t < n; ++t) sum += chain.at(s, t);
        if (std::abs(sum - 1.0) > 1e-10) {
            throw std::invalid_argument("spectral_gap: row " + std::to_string(s) + " not stochastic");
        }
    }

    Eigen::MatrixXd m(n, n);
    for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t) m(s, t) = chain.at(s, t);

    SpectralInfo info;
    if (n == 1) {
        info.lambda2 = 0.0; // no second eigenvalue; gap is maximal
        info.lambda2_modulus = 0.0;
        info.gamma0 = 1.0;
        info.reversible = true;
        return info;
    }

    bool symmetric = true;
    for (int s = 0; s < n && symmetric; ++s)
        for (int t = s + 1; t < n; ++t)
            if (std::abs(m(s, t) - m(t, s)) > 1e-12) {
                symmetric = false;
                break;
            }

    if (symmetric) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
        if (solver.info() != Eigen::Success) {
            throw std::runtime_error("spectral_gap: symmetric eigen-solve did not converge");
        }
        Eigen::VectorXd ev = solver.eigenvalues(); // ascending
        info.lambda2 = ev(n - 2);
        info.lambda2_modulus = std::abs(ev(n - 2));
        info.reversible = true;
    } else {
        Eigen::EigenSolver<Eigen::MatrixXd> solver(m);
        if (solver.info() != Eigen::Success) {
            throw std::runtime_error("spectral_gap: eigen-solve did not converge");
        }
        std::vector<std::complex<double>> ev(n);
        for (int i = 0; i < n; ++i) ev[i] = solver.eigenvalues()(i);
        std::sort(ev.begin(), ev.end(), [](const auto& x, const auto& y) {
            if (x.real() != y.real()) return x.real() > y.real();
            return std::abs(x.imag()) < std::abs(y.imag());
        });
        info.lambda2 = ev[1].real();
        info.lambda2_modulus = std::abs(ev[1]);
        // Detailed balance under the stationary distribution would still mark
        // the chain reversible, but any such chain is similar to a symmetric
        // one and shows up real-spectrum; asymmetric m with complex or
        // unordered spectrum is what this flag warns about.
        info.reversible = false;
        if (std::abs(ev[1].imag()) <= 1e-12) {
            // check pi_s m(s,t) = pi_t m(t,s) with pi from the eigenvector at 1
            Eigen::MatrixXd a = m.transpose() - Eigen::MatrixXd::Identity(n, n);
            for (int t = 0; t < n; ++t) a(n - 1, t) = 1.0;
            Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
            b(n - 1) = 1.0;
            Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
            if (lu.matrixLU().diagonal().cwiseAbs().minCoeff() > 1e-12) {
                Eigen::VectorXd pi = lu.solve(b);
                bool balanced = pi.minCoeff() > -1e-12;
                for (int s = 0; s < n && balanced; ++s)
                    for (int t = s + 1; t < n; ++t)
                        if (std::abs(pi(s) * m(s, t) - pi(t) * m(t, s)) > 1e-10) {
                            balanced = false;
                            break;
                        }
                info.reversible = balanced;
            }
        }
    }
    info.gamma0 = std::min(1.0 - info.lambda2, 1.0);
    if (info.gamma0 < 0.0 && info.gamma0 > -1e-12) info.gamma0 = 0.0;
    return info;
}

double exact_return(const Cmp& c, const TabularPolicy& p) {
    if (!c.reward) throw std::invalid_argument("exact_return: CMP has no reward table");
    auto [d, marginal] = occupancy(c, p);
    double mean_reward = 0.0;
    for (int s = 0; s < c.num_states; ++s)
        for (int a = 0; a < c.num_actions; ++a)
            mean_reward += d.values[static_cast<std::size_t>(s) * c.num_actions + a] * c.r(s, a);
    return mean_reward / (1.0 - c.gamma);
}

double mc_return(std::span<const std::pair<int, int>> samples, const Cmp& c) {
    if (!c.reward) throw std::invalid_argument("mc_return: CMP has no reward table");
    if (samples.empty()) throw std::invalid_argument("mc_return: empty batch");
    double total = 0.0;
    for (const auto& [s, a] : samples) total += c.r(s, a);
    return total / ((1.0 - c.gamma) * static_cast<double>(samples.size()));
}

} // namespace polco
