#pragma once

#include <string>
#include <vector>

#include "polco/rng.hpp"

namespace polco {

enum class PointLabel { uniform, vertex, max_tv_dir, vertex_rep, loosest_tv_dir, min_tv_dir, free_point };

/// Point on the probability simplex over n state-action pairs.
struct SimplexPoint {
    std::vector<double> values;
    PointLabel label = PointLabel::free_point;

    int size() const { return static_cast<int>(values.size()); }
};

enum class Sign { plus, minus };
enum class LoosestBranch { vertex, interior };

SimplexPoint make_uniform(int n);
SimplexPoint make_vertex(int n, int i);
SimplexPoint make_random(int n, RngSeed seed);

/// Equal-tail point at Renyi distance sigma2 from the uniform distribution:
/// first coordinate (1 +/- sqrt((n-1)(sigma2-1)))/n, rest equal. Throws
/// std::domain_error naming the violated coordinate bound when the requested
/// branch leaves the simplex.
SimplexPoint max_tv_family(int n, double sigma2, Sign sign);

/// The distribution at exact Renyi distance sigma2 from vertex 1:
/// first coordinate 1/sigma2, remaining mass spread equally.
SimplexPoint vertex_rep(int n, double sigma2);

/// Loosest-direction points at Renyi distance sigma2 from vertex_rep:
/// the vertex itself, or the interior point with first coordinate
/// (2-sigma2)/sigma2 (requires sigma2 <= 2).
SimplexPoint loosest_tv_family(int n, double sigma2, LoosestBranch branch);

/// Tightest-direction point at Renyi distance sigma2 from vertex_rep: first
/// coordinate pinned at 1/sigma2, second coordinate
/// (1/(n-2) +/- sqrt(sigma2/(n-2))) / (sigma2(n-1)/((sigma2-1)(n-2))),
/// rest equal. Infeasible sign branches (negative coordinates) are rejected,
/// not clamped.
SimplexPoint min_tv_family(int n, double sigma2, Sign sign);

/// The three closed-form TV values at Renyi distance sigma2:
///   max_tv     = sqrt((n-1)(sigma2-1)) / n          (max_tv_family point vs uniform)
///   loosest_tv = (sigma2-1)/sigma2                  (vertex vs vertex_rep)
///   min_tv     = (sigma2-1) sqrt(n-2) / (sqrt(sigma2)(n-1))  (min_tv_family point vs vertex_rep)
/// Each is the TV of its own constructed family pair; none is asserted as a
/// global extremum over the Renyi sphere (the oracle below finds feasible
/// points beyond max_tv).
struct ClosedFormTv {
    double max_tv = 0.0;
    double loosest_tv = 0.0;
    double min_tv = 0.0;
};

ClosedFormTv closed_form_tv(int n, double sigma2);

struct OracleBudget {
    int restarts = 2000;
    int iterations = 200;
};

/// Brute-force extrema of TV(x, rep) over {x in simplex : D2(x||rep) = sigma2}.
///
/// Directions through rep are scanned (exhaustive grid at resolution 1/200
/// for n <= 4, multi-start random directions plus local refinement for any
/// n); along each direction the Renyi constraint is a quadratic with a
/// closed-form root, so every probed point satisfies |D2 - sigma2| to
/// machine precision. Throws if no direction stays inside the simplex.
struct TvExtrema {
    double tv_min = 0.0;
    double tv_max = 0.0;
    SimplexPoint argmin;
    SimplexPoint argmax;
};

TvExtrema tv_extrema_oracle(const SimplexPoint& rep, double sigma2,
                            OracleBudget budget, RngSeed seed);

/// Closed forms, family residuals, and oracle extrema for one (n, sigma2),
/// with the oracle run against both the uniform representative (max_tv
/// side) and vertex_rep (loosest/min side).
struct GeometryCertificate {
    int n = 0;
    double sigma2 = 0.0;
    ClosedFormTv closed_form;
    double family_residual_max = 0.0;    // worst |D2 - sigma2| over constructed points
    std::vector<std::string> family_notes; // skipped infeasible branches
    double oracle_max_uniform = 0.0;
    double oracle_min_uniform = 0.0;
    double oracle_max_vrep = 0.0;
    double oracle_min_vrep = 0.0;
    bool oracle_exceeds_max_tv = false;  // uniform-rep oracle max > closed-form max_tv
    bool oracle_confirms_min_tv = false; // vrep oracle min <= closed-form min_tv + 1e-6
    bool failed = false;
    std::string failure;
};

GeometryCertificate certificate(int n, double sigma2, RngSeed seed,
                                OracleBudget budget = {});

} // namespace polco
