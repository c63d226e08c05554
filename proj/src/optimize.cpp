#include "optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cohmath.hpp"
#include "model.hpp"
#include "protocol.hpp"

namespace dit {

namespace {

constexpr double kInvalid = -1.0;

// Closed-form fidelity at (omega, ratio) with the input amplitudes scaled so
// the mean reflected photon number equals target. Returns kInvalid where no
// branch reflects at all.
class Objective {
public:
    Objective(const SystemPair& tpl, double target) : tpl_(tpl), target_(target) {}

    double eval(double omega, complexd ratio, SystemPair* op_out = nullptr,
                double* eta_out = nullptr) const {
        SystemPair pair = tpl_;
        pair.omega = omega;
        const ScatterSet s = scatter_set(pair);
        return eval_with_scatter(pair, s, ratio, op_out, eta_out);
    }

    double eval_with_scatter(SystemPair pair, const ScatterSet& s, complexd ratio,
                             SystemPair* op_out = nullptr, double* eta_out = nullptr) const {
        const double s1 = 0.5 * (abs2(s.r1g) + abs2(s.r1m));
        const double s2 = 0.5 * (abs2(s.r2g) + abs2(s.r2m));
        max_reflectivity_ = std::max({max_reflectivity_, std::sqrt(2.0 * s1), std::sqrt(2.0 * s2)});

        const double denom = abs2(ratio) * s1 + s2;
        if (denom <= 0.0 || !std::isfinite(denom)) return kInvalid;

        pair.beta = complexd{std::sqrt(target_ / denom), 0.0};
        pair.alpha = ratio * pair.beta;
        try {
            const ProtocolResult res = fidelity_efficiency(pair, s);
            if (op_out) *op_out = pair;
            if (eta_out) *eta_out = res.efficiency;
            return res.fidelity;
        } catch (const ComputeError&) {
            return kInvalid;
        }
    }

    double max_reflectivity() const { return max_reflectivity_; }

private:
    SystemPair tpl_;
    double target_;
    mutable double max_reflectivity_ = 0.0;
};

struct Candidate {
    double omega = 0.0;
    complexd ratio{};
    double fidelity = kInvalid;
};

bool in_ratio_box(const SearchBox& box, complexd q) {
    return q.real() >= box.ratio_re_min && q.real() <= box.ratio_re_max &&
           q.imag() >= box.ratio_im_min && q.imag() <= box.ratio_im_max &&
           std::isfinite(q.real()) && std::isfinite(q.imag());
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(static_cast<size_t>(n));
    if (n == 1) {
        v[0] = 0.5 * (lo + hi);
        return v;
    }
    for (int i = 0; i < n; ++i)
        v[static_cast<size_t>(i)] = lo + (hi - lo) * i / (n - 1);
    return v;
}

// Deterministic Nelder-Mead maximization over the unit cube in dim
// dimensions; points outside the cube are rejected outright.
template <typename F>
void nelder_mead(F&& f, std::vector<double>& x0, double& f0, int dim,
                 const std::vector<double>& init_step) {
    struct Vertex {
        std::vector<double> x;
        double f;
    };

    auto inside = [dim](const std::vector<double>& x) {
        for (int i = 0; i < dim; ++i)
            if (!(x[i] >= 0.0 && x[i] <= 1.0)) return false;
        return true;
    };
    auto safe_eval = [&](const std::vector<double>& x) {
        return inside(x) ? f(x) : -std::numeric_limits<double>::infinity();
    };

    std::vector<Vertex> simplex;
    simplex.push_back({x0, f0});
    for (int i = 0; i < dim; ++i) {
        std::vector<double> x = x0;
        double h = init_step[static_cast<size_t>(i)];
        if (x[i] + h > 1.0) h = -h;
        x[i] = std::min(1.0, std::max(0.0, x[i] + h));
        simplex.push_back({x, safe_eval(x)});
    }

    const int n = dim + 1;
    for (int iter = 0; iter < 500; ++iter) {
        std::sort(simplex.begin(), simplex.end(), [](const Vertex& a, const Vertex& b) {
            if (a.f != b.f) return a.f > b.f;  // best (largest) first
            return a.x < b.x;
        });

        const double spread = simplex.front().f - simplex.back().f;
        double diameter = 0.0;
        for (int i = 1; i < n; ++i)
            for (int d = 0; d < dim; ++d)
                diameter = std::max(diameter, std::abs(simplex[static_cast<size_t>(i)].x[d] -
                                                       simplex[0].x[d]));
        if ((std::isfinite(spread) && spread < 1e-10) || diameter < 1e-8) break;

        std::vector<double> centroid(static_cast<size_t>(dim), 0.0);
        for (int i = 0; i < n - 1; ++i)
            for (int d = 0; d < dim; ++d)
                centroid[static_cast<size_t>(d)] += simplex[static_cast<size_t>(i)].x[d] / (n - 1);

        auto blend = [&](double coeff) {
            std::vector<double> x(static_cast<size_t>(dim));
            for (int d = 0; d < dim; ++d)
                x[static_cast<size_t>(d)] =
                    centroid[static_cast<size_t>(d)] +
                    coeff * (centroid[static_cast<size_t>(d)] - simplex.back().x[static_cast<size_t>(d)]);
            return x;
        };

        const auto xr = blend(1.0);
        const double fr = safe_eval(xr);
        if (fr > simplex.front().f) {
            const auto xe = blend(2.0);
            const double fe = safe_eval(xe);
            if (fe > fr)
                simplex.back() = {xe, fe};
            else
                simplex.back() = {xr, fr};
            continue;
        }
        if (fr > simplex[static_cast<size_t>(n - 2)].f) {
            simplex.back() = {xr, fr};
            continue;
        }
        const auto xc = blend(-0.5);
        const double fc = safe_eval(xc);
        if (fc > simplex.back().f) {
            simplex.back() = {xc, fc};
            continue;
        }
        // Shrink toward the best vertex.
        for (int i = 1; i < n; ++i) {
            for (int d = 0; d < dim; ++d)
                simplex[static_cast<size_t>(i)].x[d] =
                    0.5 * (simplex[static_cast<size_t>(i)].x[d] + simplex[0].x[d]);
            simplex[static_cast<size_t>(i)].f = safe_eval(simplex[static_cast<size_t>(i)].x);
        }
    }

    std::sort(simplex.begin(), simplex.end(), [](const Vertex& a, const Vertex& b) {
        if (a.f != b.f) return a.f > b.f;
        return a.x < b.x;
    });
    x0 = simplex.front().x;
    f0 = simplex.front().f;
}

MatchingRegime classify_regime(const SystemPair& op, const ScatterSet& s) {
    const double tiny = 1e-300;
    const complexd g1 = op.alpha * s.r1g, g2 = op.beta * s.r2g;
    const complexd m1 = op.alpha * s.r1m, m2 = op.beta * s.r2m;
    const double e_first = std::abs(g1 - g2) / (std::abs(g1) + std::abs(g2) + tiny);
    const double e_second = std::abs(m1 - m2) / (std::abs(m1) + std::abs(m2) + tiny);
    constexpr double tol = 0.02;
    if (e_first < tol) return MatchingRegime::First;
    if (e_second < tol) return MatchingRegime::Second;
    return MatchingRegime::Intermediate;
}

} // namespace

void validate(const OptimizationProblem& p, const std::string& key) {
    validate(p.pair, key + ".pair");
    const SearchBox& b = p.box;
    for (double v : {b.omega_min, b.omega_max, b.ratio_re_min, b.ratio_re_max,
                     b.ratio_im_min, b.ratio_im_max})
        if (!std::isfinite(v))
            throw ValidationError(key + ".box: bounds must be finite");
    if (b.omega_min > b.omega_max || b.ratio_re_min > b.ratio_re_max ||
        b.ratio_im_min > b.ratio_im_max)
        throw ValidationError(key + ".box: empty search box");
    if (!(p.target_scale > 0.0) || !std::isfinite(p.target_scale))
        throw ValidationError(key + ".target_scale: must be > 0");
    if (p.grid_omega < 1 || p.grid_re < 1 || p.grid_im < 1)
        throw ValidationError(key + ".grid: grid sizes must be >= 1");
}

SearchBox default_search_box(const SystemPair& pair) {
    SearchBox box;
    const double half_span = 0.5 * std::abs(pair.arm1.cavity.omega_c - pair.arm2.cavity.omega_c);
    const double g_max = std::max({pair.arm1.g_transition.g, pair.arm1.m_transition.g,
                                   pair.arm2.g_transition.g, pair.arm2.m_transition.g});
    const double kappa_max =
        std::max(pair.arm1.cavity.kappa_total(), pair.arm2.cavity.kappa_total());
    const double reach = half_span + 2.0 * g_max + 0.25 * kappa_max;
    const double center = 0.5 * (pair.arm1.cavity.omega_c + pair.arm2.cavity.omega_c);
    box.omega_min = center - reach;
    box.omega_max = center + reach;
    return box;
}

const char* to_string(MatchingRegime r) {
    switch (r) {
        case MatchingRegime::First: return "first";
        case MatchingRegime::Second: return "second";
        default: return "intermediate";
    }
}

OptimizationReport optimize_fidelity(const OptimizationProblem& problem) {
    validate(problem, "optimize");
    const SearchBox& box = problem.box;
    Objective objective(problem.pair, problem.target_scale);

    OptimizationReport report;

    // Refinement starts must cover distinct basins, so candidates within a
    // small normalized distance of a better one are merged instead of
    // crowding the list. Ties break by position, keeping the result
    // independent of evaluation order.
    constexpr size_t kStarts = 4;
    constexpr double kNiche = 0.05;
    const double wo_all = box.omega_max - box.omega_min;
    const double wr_all = box.ratio_re_max - box.ratio_re_min;
    const double wi_all = box.ratio_im_max - box.ratio_im_min;
    std::vector<Candidate> top;
    auto candidate_before = [](const Candidate& a, const Candidate& b) {
        if (a.fidelity != b.fidelity) return a.fidelity > b.fidelity;
        if (a.omega != b.omega) return a.omega < b.omega;
        if (a.ratio.real() != b.ratio.real()) return a.ratio.real() < b.ratio.real();
        return a.ratio.imag() < b.ratio.imag();
    };
    auto same_niche = [&](const Candidate& a, const Candidate& b) {
        auto near = [](double d, double w) { return w > 0.0 ? std::abs(d) <= kNiche * w : true; };
        return near(a.omega - b.omega, wo_all) && near(a.ratio.real() - b.ratio.real(), wr_all) &&
               near(a.ratio.imag() - b.ratio.imag(), wi_all);
    };

    const std::vector<double> omegas =
        problem.optimize_omega ? linspace(box.omega_min, box.omega_max, problem.grid_omega)
                               : std::vector<double>{problem.pair.omega};
    const std::vector<double> res = linspace(box.ratio_re_min, box.ratio_re_max, problem.grid_re);
    const std::vector<double> ims = linspace(box.ratio_im_min, box.ratio_im_max, problem.grid_im);

    auto consider = [&](double omega, complexd q, double f) {
        if (problem.record_trace)
            report.trace.push_back({omega, q, f});
        const Candidate c{omega, q, f};
        for (size_t i = 0; i < top.size(); ++i) {
            if (!same_niche(top[i], c)) continue;
            if (candidate_before(top[i], c)) return;  // a better neighbor already holds the niche
            top.erase(top.begin() + static_cast<long>(i));
            --i;
        }
        auto pos = std::lower_bound(top.begin(), top.end(), c, candidate_before);
        if (pos != top.end() || top.size() < kStarts) {
            top.insert(pos, c);
            if (top.size() > kStarts) top.pop_back();
        }
    };

    for (double omega : omegas) {
        SystemPair pair = problem.pair;
        pair.omega = omega;
        const ScatterSet s = scatter_set(pair);
        auto probe = [&](complexd q) {
            consider(omega, q, objective.eval_with_scatter(pair, s, q));
            // Swapping which arm carries the stronger drive maps the ratio to
            // 1/conj(q); probing the image keeps the candidate set closed
            // under the mirror symmetry of swapped arms.
            if (abs2(q) > 0.0) {
                const complexd inv = 1.0 / std::conj(q);
                if (in_ratio_box(box, inv))
                    consider(omega, inv, objective.eval_with_scatter(pair, s, inv));
            }
        };
        for (double re : res)
            for (double im : ims)
                probe(complexd{re, im});
        // The analytic matching points are the likely optima; seed them
        // directly when they fall inside the box.
        if (std::abs(s.r1g) > 0.0) {
            const complexd q1 = s.r2g / s.r1g;
            if (in_ratio_box(box, q1)) probe(q1);
        }
        if (std::abs(s.r1m) > 0.0) {
            const complexd q2 = s.r2m / s.r1m;
            if (in_ratio_box(box, q2)) probe(q2);
        }
    }

    Candidate best = top.empty() ? Candidate{} : top.front();
    if (best.fidelity <= kInvalid || objective.max_reflectivity() < 1e-12)
        throw ComputeError("no detectable signal: reflections vanish over the search box");

    // Nelder-Mead refinement in normalized box coordinates.
    const bool with_omega = problem.optimize_omega && box.omega_max > box.omega_min;
    const int dim = with_omega ? 3 : 2;
    const double wo = box.omega_max - box.omega_min;
    const double wr = box.ratio_re_max - box.ratio_re_min;
    const double wi = box.ratio_im_max - box.ratio_im_min;

    auto to_unit = [&](const Candidate& c) {
        std::vector<double> x;
        if (with_omega) x.push_back(wo > 0.0 ? (c.omega - box.omega_min) / wo : 0.5);
        x.push_back(wr > 0.0 ? (c.ratio.real() - box.ratio_re_min) / wr : 0.5);
        x.push_back(wi > 0.0 ? (c.ratio.imag() - box.ratio_im_min) / wi : 0.5);
        return x;
    };
    auto from_unit = [&](const std::vector<double>& x) {
        Candidate c;
        size_t i = 0;
        c.omega = with_omega ? box.omega_min + x[i++] * wo : problem.pair.omega;
        c.ratio = complexd{wr > 0.0 ? box.ratio_re_min + x[i] * wr : box.ratio_re_min,
                           wi > 0.0 ? box.ratio_im_min + x[i + 1] * wi : box.ratio_im_min};
        return c;
    };

    auto nm_objective = [&](const std::vector<double>& x) {
        const Candidate c = from_unit(x);
        const double f = objective.eval(c.omega, c.ratio);
        if (problem.record_trace)
            report.trace.push_back({c.omega, c.ratio, f});
        return f;
    };

    std::vector<double> step;
    if (with_omega) step.push_back(problem.grid_omega > 1 ? 0.5 / (problem.grid_omega - 1) : 0.05);
    step.push_back(problem.grid_re > 1 ? 0.5 / (problem.grid_re - 1) : 0.05);
    step.push_back(problem.grid_im > 1 ? 0.5 / (problem.grid_im - 1) : 0.05);

    for (const Candidate& start : top) {
        if (start.fidelity <= kInvalid) continue;
        std::vector<double> x = to_unit(start);
        double fx = start.fidelity;
        nelder_mead(nm_objective, x, fx, dim, step);
        if (fx > best.fidelity) {
            best = from_unit(x);
            best.fidelity = fx;
        }
    }

    report.omega = best.omega;
    report.ratio = best.ratio;
    report.fidelity = best.fidelity;

    SystemPair op = problem.pair;
    double eta = 0.0;
    objective.eval(best.omega, best.ratio, &op, &eta);
    report.efficiency = eta;
    report.operating_point = op;
    report.regime = classify_regime(op, scatter_set(op));
    return report;
}

std::vector<FrequencyPoint> fidelity_vs_frequency(const OptimizationProblem& problem,
                                                  std::span<const double> omegas) {
    std::vector<FrequencyPoint> curve;
    curve.reserve(omegas.size());
    for (double omega : omegas) {
        OptimizationProblem sub = problem;
        sub.pair.omega = omega;
        sub.optimize_omega = false;
        sub.record_trace = false;
        const OptimizationReport rep = optimize_fidelity(sub);
        curve.push_back({omega, rep.ratio, rep.fidelity, rep.efficiency});
    }
    return curve;
}

SystemPair make_detuned_pair(const DetunedPairTemplate& tpl, double delta_omega_s,
                             double delta1, double delta2) {
    SystemPair pair;
    pair.arm1.cavity = tpl.cavity;
    pair.arm1.cavity.omega_c = -0.5 * delta_omega_s;
    pair.arm2.cavity = tpl.cavity;
    pair.arm2.cavity.omega_c = 0.5 * delta_omega_s;

    // Delta1/Delta2 are dipole detunings from the mid-cavity reference, so
    // growing the cavity separation leaves the dipoles untouched.
    pair.arm1.g_transition = tpl.g_transition;
    pair.arm1.g_transition.delta = delta1 + 0.5 * delta_omega_s;
    pair.arm2.g_transition = tpl.g_transition;
    pair.arm2.g_transition.delta = delta2 - 0.5 * delta_omega_s;

    pair.arm1.m_transition = tpl.m_transition;
    pair.arm2.m_transition = tpl.m_transition;

    pair.omega = 0.0;
    pair.alpha = complexd{0.01, 0.0};
    pair.beta = complexd{0.01, 0.0};
    return pair;
}

FidelitySurface fidelity_surface(const DetunedPairTemplate& tpl,
                                 std::span<const double> dws_grid,
                                 std::span<const double> delta1_grid, double delta2,
                                 const OptimizationProblem& defaults) {
    FidelitySurface surf;
    surf.delta_omega_s.assign(dws_grid.begin(), dws_grid.end());
    surf.delta1.assign(delta1_grid.begin(), delta1_grid.end());
    surf.fidelity.reserve(dws_grid.size() * delta1_grid.size());

    for (double dws : dws_grid) {
        for (double d1 : delta1_grid) {
            OptimizationProblem problem = defaults;
            problem.pair = make_detuned_pair(tpl, dws, d1, delta2);
            problem.record_trace = false;
            const SearchBox auto_box = default_search_box(problem.pair);
            problem.box.omega_min = auto_box.omega_min;
            problem.box.omega_max = auto_box.omega_max;
            surf.fidelity.push_back(optimize_fidelity(problem).fidelity);
        }
    }
    return surf;
}

BiexcitonMap biexciton_fidelity_map(const BiexcitonScenario& scenario,
                                    std::span<const double> dxx1_grid,
                                    std::span<const double> dxx2_grid,
                                    const OptimizationProblem& defaults,
                                    MapOperating operating) {
    BiexcitonMap map;
    map.delta_xx1.assign(dxx1_grid.begin(), dxx1_grid.end());
    map.delta_xx2.assign(dxx2_grid.begin(), dxx2_grid.end());
    map.fidelity.reserve(dxx1_grid.size() * dxx2_grid.size());

    for (double d1 : dxx1_grid) {
        for (double d2 : dxx2_grid) {
            BiexcitonScenario cell = scenario;
            cell.delta_XX1 = d1;
            cell.delta_XX2 = d2;

            if (operating == MapOperating::Matched) {
                SystemPair pair = biexciton_pair(cell);
                const ScatterSet s = scatter_set(pair);
                if (std::abs(s.r1g) < 1e-12)
                    throw ComputeError(
                        "biexciton map: r1g vanishes on resonance; use an optimize operating mode");
                pair.alpha =
                    complexd{std::sqrt(defaults.target_scale) / std::abs(s.r1g), 0.0};
                pair.beta = matching_amplitudes(s, pair.alpha);
                map.fidelity.push_back(fidelity_efficiency(pair, s).fidelity);
                continue;
            }

            OptimizationProblem problem = defaults;
            problem.pair = biexciton_pair(cell);
            problem.record_trace = false;
            problem.optimize_omega = operating == MapOperating::OptimizeRatioOmega;
            if (problem.optimize_omega) {
                const SearchBox auto_box = default_search_box(problem.pair);
                problem.box.omega_min = auto_box.omega_min;
                problem.box.omega_max = auto_box.omega_max;
            }
            map.fidelity.push_back(optimize_fidelity(problem).fidelity);
        }
    }
    return map;
}

} // namespace dit
