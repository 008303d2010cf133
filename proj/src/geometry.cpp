#include "polco/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "polco/divergence.hpp"

namespace polco {

namespace {

void require_n(int n, int minimum) {
    if (n < minimum) {
        throw std::invalid_argument("simplex dimension n must be >= " + std::to_string(minimum));
    }
}

SimplexPoint equal_tail_point(int n, double first, PointLabel label) {
    SimplexPoint p;
    p.label = label;
    p.values.assign(n, (1.0 - first) / (n - 1));
    p.values[0] = first;
    return p;
}

} // namespace

SimplexPoint make_uniform(int n) {
    require_n(n, 2);
    SimplexPoint p;
    p.label = PointLabel::uniform;
    p.values.assign(n, 1.0 / n);
    return p;
}

SimplexPoint make_vertex(int n, int i) {
    require_n(n, 2);
    if (i < 0 || i >= n) throw std::invalid_argument("make_vertex: index out of range");
    SimplexPoint p;
    p.label = PointLabel::vertex;
    p.values.assign(n, 0.0);
    p.values[i] = 1.0;
    return p;
}

SimplexPoint make_random(int n, RngSeed seed) {
    require_n(n, 2);
    SplitRng rng(seed);
    SimplexPoint p;
    p.label = PointLabel::free_point;
    p.values = rng.dirichlet_uniform(n);
    return p;
}

SimplexPoint max_tv_family(int n, double sigma2, Sign sign) {
    require_n(n, 2);
    if (!(sigma2 > 1.0)) throw std::invalid_argument("max_tv_family: sigma2 must exceed 1");
    const double offset = std::sqrt((n - 1.0) * (sigma2 - 1.0));
    const double first = (sign == Sign::plus ? 1.0 + offset : 1.0 - offset) / n;
    if (first < 0.0) {
        std::ostringstream os;
        os << "max_tv_family: first coordinate " << first << " < 0 (sigma2=" << sigma2
           << " beyond the minus-branch range n/(n-1))";
        throw std::domain_error(os.str());
    }
    if (first > 1.0) {
        std::ostringstream os;
        os << "max_tv_family: first coordinate " << first << " > 1 (sigma2=" << sigma2
           << " exceeds n=" << n << ")";
        throw std::domain_error(os.str());
    }
    return equal_tail_point(n, first, PointLabel::max_tv_dir);
}

SimplexPoint vertex_rep(int n, double sigma2) {
    require_n(n, 2);
    if (!(sigma2 > 1.0)) throw std::invalid_argument("vertex_rep: sigma2 must exceed 1");
    SimplexPoint p;
    p.label = PointLabel::vertex_rep;
    p.values.assign(n, (sigma2 - 1.0) / (sigma2 * (n - 1)));
    p.values[0] = 1.0 / sigma2;
    return p;
}

SimplexPoint loosest_tv_family(int n, double sigma2, LoosestBranch branch) {
    require_n(n, 2);
    if (!(sigma2 > 1.0)) throw std::invalid_argument("loosest_tv_family: sigma2 must exceed 1");
    if (branch == LoosestBranch::vertex) {
        SimplexPoint p = make_vertex(n, 0);
        p.label = PointLabel::loosest_tv_dir;
        return p;
    }
    const double first = (2.0 - sigma2) / sigma2;
    if (first < 0.0) {
        std::ostringstream os;
        os << "loosest_tv_family: interior branch needs sigma2 <= 2, got " << sigma2
           << " (first coordinate " << first << ")";
        throw std::domain_error(os.str());
    }
    return equal_tail_point(n, first, PointLabel::loosest_tv_dir);
}

SimplexPoint min_tv_family(int n, double sigma2, Sign sign) {
    require_n(n, 3);
    if (!(sigma2 > 1.0)) throw std::invalid_argument("min_tv_family: sigma2 must exceed 1");
    const double root = std::sqrt(sigma2 / (n - 2.0));
    const double numer = 1.0 / (n - 2.0) + (sign == Sign::plus ? root : -root);
    const double denom = sigma2 * (n - 1.0) / ((sigma2 - 1.0) * (n - 2.0));
    const double second = numer / denom;
    const double first = 1.0 / sigma2;
    const double rest = (1.0 - first - second) / (n - 2.0);
    if (second < 0.0 || rest < 0.0) {
        std::ostringstream os;
        os << "min_tv_family: " << (sign == Sign::plus ? "plus" : "minus")
           << " branch infeasible at n=" << n << ", sigma2=" << sigma2
           << " (second coordinate " << second << ", tail coordinates " << rest << ")";
        throw std::domain_error(os.str());
    }
    SimplexPoint p;
    p.label = PointLabel::min_tv_dir;
    p.values.assign(n, rest);
    p.values[0] = first;
    p.values[1] = second;
    return p;
}

ClosedFormTv closed_form_tv(int n, double sigma2) {
    require_n(n, 3);
    if (!(sigma2 > 1.0)) throw std::invalid_argument("closed_form_tv: sigma2 must exceed 1");
    ClosedFormTv out;
    out.max_tv = std::sqrt((n - 1.0) * (sigma2 - 1.0)) / n;
    out.loosest_tv = (sigma2 - 1.0) / sigma2;
    out.min_tv = (sigma2 - 1.0) * std::sqrt(n - 2.0) / (std::sqrt(sigma2) * (n - 1.0));
    return out;
}

namespace {

struct DirectionScan {
    const std::vector<double>& q;
    double sigma2;
    int n;

    double tv_min = std::numeric_limits<double>::infinity();
    double tv_max = -std::numeric_limits<double>::infinity();
    std::vector<double> best_min_dir;
    std::vector<double> best_max_dir;
    SimplexPoint argmin;
    SimplexPoint argmax;
    long long feasible = 0;

    explicit DirectionScan(const std::vector<double>& rep, double s2)
        : q(rep), sigma2(s2), n(static_cast<int>(rep.size())) {}

    // Along x(t) = q + t d with sum(d) = 0 the divergence is
    // D2(x||q) = 1 + t^2 sum d_i^2/q_i, so the sigma2 shell is hit at a
    // single closed-form t and every accepted point is exactly feasible.
    bool probe(const std::vector<double>& dir) {
        double quad = 0.0;
        double l1 = 0.0;
        double t_max = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i) {
            quad += dir[i] * dir[i] / q[i];
            l1 += std::abs(dir[i]);
            if (dir[i] < 0.0) t_max = std::min(t_max, q[i] / -dir[i]);
        }
        if (!(quad > 0.0)) return false;
        const double t = std::sqrt((sigma2 - 1.0) / quad);
        if (t > t_max * (1.0 + 1e-12)) return false;
        ++feasible;
        const double tv = 0.5 * t * l1;
        if (tv > tv_max) {
            tv_max = tv;
            best_max_dir = dir;
            argmax = realize(dir, t);
        }
        if (tv < tv_min) {
            tv_min = tv;
            best_min_dir = dir;
            argmin = realize(dir, t);
        }
        return true;
    }

    bool probe_point(const std::vector<double>& u) {
        std::vector<double> dir(n);
        double norm = 0.0;
        for (int i = 0; i < n; ++i) {
            dir[i] = u[i] - q[i];
            norm += std::abs(dir[i]);
        }
        if (norm < 1e-14) return false;
        return probe(dir);
    }

    SimplexPoint realize(const std::vector<double>& dir, double t) const {
        SimplexPoint x;
        x.label = PointLabel::free_point;
        x.values.resize(n);
        for (int i = 0; i < n; ++i) {
            double v = q[i] + t * dir[i];
            x.values[i] = v < 0.0 ? 0.0 : v; // boundary hits can round below zero
        }
        return x;
    }
};

// Grid over compositions of kGridResolution into n parts (n <= 4 only).
constexpr int kGridResolution = 200;

void grid_scan(DirectionScan& scan, int n) {
    std::vector<double> u(n);
    const double inv = 1.0 / kGridResolution;
    if (n == 3) {
        for (int i = 0; i <= kGridResolution; ++i) {
            for (int j = 0; j <= kGridResolution - i; ++j) {
                u[0] = i * inv;
                u[1] = j * inv;
                u[2] = (kGridResolution - i - j) * inv;
                scan.probe_point(u);
            }
        }
    } else if (n == 4) {
        for (int i = 0; i <= kGridResolution; ++i) {
            for (int j = 0; j <= kGridResolution - i; ++j) {
                for (int k = 0; k <= kGridResolution - i - j; ++k) {
                    u[0] = i * inv;
                    u[1] = j * inv;
                    u[2] = k * inv;
                    u[3] = (kGridResolution - i - j - k) * inv;
                    scan.probe_point(u);
                }
            }
        }
    }
}

// Deterministic structured directions: rays toward/away from each vertex and
// single-coordinate spikes inside each "coordinate i held" slice. These cover
// the closed-form family rays for both canonical representatives.
void structured_scan(DirectionScan& scan, int n) {
    std::vector<double> dir(n);
    for (int i = 0; i < n; ++i) {
        for (int v = 0; v < n; ++v) dir[v] = (v == i ? 1.0 : 0.0) - scan.q[v];
        scan.probe(dir);
        for (double& d : dir) d = -d;
        scan.probe(dir);
    }
    for (int hold = 0; hold < n; ++hold) {
        for (int spike = 0; spike < n; ++spike) {
            if (spike == hold) continue;
            for (int v = 0; v < n; ++v) {
                if (v == hold) {
                    dir[v] = 0.0;
                } else {
                    dir[v] = (v == spike ? 1.0 : 0.0) - 1.0 / (n - 1);
                }
            }
            scan.probe(dir);
            for (double& d : dir) d = -d;
            scan.probe(dir);
        }
    }
}

void refine(DirectionScan& scan, std::vector<double> base, bool maximize, int iterations,
            SplitRng& rng) {
    if (base.empty()) return;
    const int n = static_cast<int>(base.size());
    double step = 0.25;
    double best = maximize ? scan.tv_max : scan.tv_min;
    std::vector<double> trial(n);
    for (int it = 0; it < iterations; ++it) {
        double mean = 0.0;
        for (int i = 0; i < n; ++i) {
            trial[i] = rng.next_double() - 0.5;
            mean += trial[i];
        }
        mean /= n;
        for (int i = 0; i < n; ++i) trial[i] = base[i] + step * (trial[i] - mean);
        scan.probe(trial);
        const double current = maximize ? scan.tv_max : scan.tv_min;
        if ((maximize && current > best) || (!maximize && current < best)) {
            best = current;
            base = maximize ? scan.best_max_dir : scan.best_min_dir;
        } else {
            step *= 0.97;
        }
    }
}

} // namespace

TvExtrema tv_extrema_oracle(const SimplexPoint& rep, double sigma2,
                            OracleBudget budget, RngSeed seed) {
    const int n = rep.size();
    require_n(n, 2);
    if (!(sigma2 > 1.0)) throw std::invalid_argument("tv_extrema_oracle: sigma2 must exceed 1");
    for (double v : rep.values) {
        if (!(v > 0.0)) {
            throw std::invalid_argument("tv_extrema_oracle: representative must be strictly positive");
        }
    }

    DirectionScan scan(rep.values, sigma2);
    structured_scan(scan, n);
    if (n <= 4) grid_scan(scan, n);

    SplitRng rng(seed);
    for (int r = 0; r < budget.restarts; ++r) {
        scan.probe_point(rng.dirichlet_uniform(n));
    }
    refine(scan, scan.best_max_dir, true, budget.iterations, rng);
    refine(scan, scan.best_min_dir, false, budget.iterations, rng);

    if (scan.feasible == 0) {
        throw std::runtime_error("tv_extrema_oracle: no feasible point on the sigma2 shell "
                                 "inside the simplex within budget");
    }
    TvExtrema out;
    out.tv_min = scan.tv_min;
    out.tv_max = scan.tv_max;
    out.argmin = std::move(scan.argmin);
    out.argmax = std::move(scan.argmax);
    return out;
}

GeometryCertificate certificate(int n, double sigma2, RngSeed seed, OracleBudget budget) {
    require_n(n, 3);
    if (!(sigma2 > 1.0 && sigma2 < n)) {
        throw std::invalid_argument("certificate: need 1 < sigma2 < n");
    }

    GeometryCertificate cert;
    cert.n = n;
    cert.sigma2 = sigma2;
    cert.closed_form = closed_form_tv(n, sigma2);

    const SimplexPoint uniform = make_uniform(n);
    const SimplexPoint rep = vertex_rep(n, sigma2);

    auto record = [&](const SimplexPoint& point, const SimplexPoint& reference) {
        const double residual = std::abs(renyi2(point.values, reference.values) - sigma2);
        cert.family_residual_max = std::max(cert.family_residual_max, residual);
    };
    auto attempt = [&](const char* name, auto&& build, const SimplexPoint& reference) {
        try {
            record(build(), reference);
        } catch (const std::domain_error&) {
            cert.family_notes.push_back(std::string(name) + ": infeasible, skipped");
        }
    };

    attempt("max_tv_family+", [&] { return max_tv_family(n, sigma2, Sign::plus); }, uniform);
    attempt("max_tv_family-", [&] { return max_tv_family(n, sigma2, Sign::minus); }, uniform);
    record(loosest_tv_family(n, sigma2, LoosestBranch::vertex), rep);
    attempt("loosest_tv_family interior", [&] { return loosest_tv_family(n, sigma2, LoosestBranch::interior); }, rep);
    attempt("min_tv_family+", [&] { return min_tv_family(n, sigma2, Sign::plus); }, rep);
    attempt("min_tv_family-", [&] { return min_tv_family(n, sigma2, Sign::minus); }, rep);

    TvExtrema from_uniform = tv_extrema_oracle(uniform, sigma2, budget, seed);
    TvExtrema from_rep = tv_extrema_oracle(rep, sigma2, budget, {seed.seed, seed.stream + 1});
    cert.oracle_max_uniform = from_uniform.tv_max;
    cert.oracle_min_uniform = from_uniform.tv_min;
    cert.oracle_max_vrep = from_rep.tv_max;
    cert.oracle_min_vrep = from_rep.tv_min;
    cert.oracle_exceeds_max_tv = from_uniform.tv_max > cert.closed_form.max_tv + 1e-9;
    cert.oracle_confirms_min_tv = from_rep.tv_min <= cert.closed_form.min_tv + 1e-6;
    return cert;
}

} // namespace polco
