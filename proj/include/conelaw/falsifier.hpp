#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "conelaw/checkers.hpp"
#include "conelaw/domain.hpp"
#include "conelaw/fields.hpp"
#include "conelaw/parallel.hpp"
#include "conelaw/rng.hpp"

namespace conelaw {

struct SearchBudget {
    std::size_t random_probes = 2000;
    std::size_t refine_iterations = 200;
    double refine_shrink = 0.5;  // step multiplier after a sweep with no improvement
    std::uint64_t seed = 42;
};

inline void validate(const SearchBudget& b) {
    if (b.random_probes == 0 || b.refine_iterations == 0)
        throw std::invalid_argument("budget counts must be positive");
    if (!(b.refine_shrink > 0.0) || !(b.refine_shrink < 1.0))
        throw std::invalid_argument("refine_shrink must lie in (0, 1)");
}

namespace detail {

// A candidate violation configuration: one point for (H), two for (Sp)/(Cc),
// plus a scalar factor (lambda) where the property needs one. The factor is
// clamped to its box during refinement; (Cc) keeps lambda inside
// [0.01, 0.99] so endpoint equality never masquerades as a witness.
struct SearchSpace {
    PropertyId property;
    std::size_t n_points;
    bool has_factor;
    double factor_lo, factor_hi;
};

inline SearchSpace search_space(PropertyId property) {
    switch (property) {
        case PropertyId::H: return {PropertyId::H, 1, true, 0.05, 20.0};
        case PropertyId::Sp: return {PropertyId::Sp, 2, false, 0.0, 0.0};
        case PropertyId::Cc: return {PropertyId::Cc, 2, true, 0.01, 0.99};
        default: throw std::invalid_argument("falsifier handles H, Sp and Cc only");
    }
}

struct Candidate {
    std::vector<Point> points;
    double factor = 1.0;
};

// Violation magnitude; -inf when the configuration leaves the region.
inline double violation_of(const ScalarField& f, const SearchSpace& space, const Candidate& c) {
    constexpr double invalid = -std::numeric_limits<double>::infinity();
    for (const auto& p : c.points)
        if (!f.region.contains(p)) return invalid;
    switch (space.property) {
        case PropertyId::H: {
            const Point lx = scaled(c.points[0], c.factor);
            if (!f.region.contains(lx)) return invalid;
            const auto fx = try_eval(f, c.points[0]);
            const auto flx = try_eval(f, lx);
            if (!fx || !flx) return invalid;
            return std::abs(*flx - c.factor * *fx);
        }
        case PropertyId::Sp: {
            const Point sum = add(c.points[0], c.points[1]);
            if (!f.region.contains(sum)) return invalid;
            const auto v1 = try_eval(f, c.points[0]);
            const auto v2 = try_eval(f, c.points[1]);
            const auto v12 = try_eval(f, sum);
            if (!v1 || !v2 || !v12) return invalid;
            return *v1 + *v2 - *v12;
        }
        case PropertyId::Cc: {
            const Point mid = add(scaled(c.points[0], c.factor),
                                  scaled(c.points[1], 1.0 - c.factor));
            if (!f.region.contains(mid)) return invalid;
            const auto fx = try_eval(f, c.points[0]);
            const auto fy = try_eval(f, c.points[1]);
            const auto fm = try_eval(f, mid);
            if (!fx || !fy || !fm) return invalid;
            return c.factor * *fx + (1.0 - c.factor) * *fy - *fm;
        }
        default: return invalid;
    }
}

inline double violation_scale(const ScalarField& f, const SearchSpace& space, const Candidate& c) {
    double m = 0.0;
    auto absorb = [&m](std::optional<double> v) {
        if (v && std::isfinite(*v)) m = std::max(m, std::abs(*v));
    };
    for (const auto& p : c.points) absorb(try_eval(f, p));
    if (space.property == PropertyId::H)
        absorb(try_eval(f, scaled(c.points[0], c.factor)));
    else if (space.property == PropertyId::Sp)
        absorb(try_eval(f, add(c.points[0], c.points[1])));
    else
        absorb(try_eval(f, add(scaled(c.points[0], c.factor),
                               scaled(c.points[1], 1.0 - c.factor))));
    return 1.0 + m;
}

// Compass pattern search: probe +/- step along every coordinate (and the
// factor), keep strict improvements, shrink all steps when a full sweep
// stalls. Derivative-free; the violation surfaces are kinked at piecewise
// junctions and region boundaries.
inline Candidate refine_candidate(const ScalarField& f, const SearchSpace& space, Candidate best,
                                  double& best_v, const SearchBudget& budget,
                                  std::pair<double, double> coord_clamp) {
    const std::size_t d = static_cast<std::size_t>(f.region.dimension());
    std::vector<double> steps;
    for (const auto& p : best.points)
        for (double c : p) steps.push_back(0.25 * std::max(1.0, std::abs(c)));
    if (space.has_factor) steps.push_back(0.1 * (space.factor_hi - space.factor_lo));

    auto coord_ref = [&](Candidate& cand, std::size_t j) -> double& {
        if (j < space.n_points * d) return cand.points[j / d][j % d];
        return cand.factor;
    };
    const std::size_t n_coords = steps.size();

    for (std::size_t it = 0; it < budget.refine_iterations; ++it) {
        bool improved = false;
        for (std::size_t j = 0; j < n_coords; ++j) {
            for (double sign : {1.0, -1.0}) {
                Candidate trial = best;
                double& c = coord_ref(trial, j);
                c += sign * steps[j];
                if (j < space.n_points * d) {
                    const double mag = std::abs(c);
                    if (mag < coord_clamp.first || mag > coord_clamp.second) continue;
                } else {
                    c = std::clamp(c, space.factor_lo, space.factor_hi);
                }
                const double v = violation_of(f, space, trial);
                if (v > best_v) {
                    best_v = v;
                    best = std::move(trial);
                    improved = true;
                    break;
                }
            }
        }
        if (!improved) {
            for (double& s : steps) s *= budget.refine_shrink;
            if (*std::max_element(steps.begin(), steps.end()) < 1e-12) break;
        }
    }
    return best;
}

}  // namespace detail

// Best-effort witness search: seeded random probing of the violation
// functional followed by pattern-search refinement from the best probe.
// A Satisfied verdict certifies only that no witness was found within the
// budget, never that none exists.
inline Verdict falsify(const ScalarField& f, PropertyId property, const SearchBudget& budget,
                       double tol = kDefaultTol,
                       std::pair<double, double> coord_range = {1e-2, 1e2}, int threads = 1) {
    validate(budget);
    const auto space = detail::search_space(property);
    const std::size_t d = static_cast<std::size_t>(f.region.dimension());
    const auto& signs = f.region.cone().axis_signs();

    auto draw_candidate = [&](std::uint64_t index) {
        SplitMix64 gen(substream_seed(budget.seed, 0xFA15E00000000000ull + index));
        detail::Candidate c;
        c.points.resize(space.n_points);
        for (auto& p : c.points) {
            p.resize(d);
            for (std::size_t i = 0; i < d; ++i)
                p[i] = signs[i] * gen.log_uniform(coord_range.first, coord_range.second);
        }
        if (space.has_factor) {
            c.factor = property == PropertyId::H
                           ? gen.log_uniform(space.factor_lo, space.factor_hi)
                           : gen.uniform(space.factor_lo, space.factor_hi);
        }
        return c;
    };

    std::vector<double> probe_violation(budget.random_probes,
                                        -std::numeric_limits<double>::infinity());
    detail::parallel_for(budget.random_probes, threads, [&](std::size_t i) {
        probe_violation[i] = detail::violation_of(f, space, draw_candidate(i));
    });
    std::size_t best_index = SIZE_MAX;
    double best_v = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < probe_violation.size(); ++i) {
        if (probe_violation[i] > best_v) {
            best_v = probe_violation[i];
            best_index = i;
        }
    }

    Verdict verdict;
    verdict.property = property;
    verdict.samples_checked = budget.random_probes;
    if (best_index == SIZE_MAX || !std::isfinite(best_v)) {
        verdict.status = Status::Inconclusive;
        return verdict;
    }

    detail::Candidate best =
        detail::refine_candidate(f, space, draw_candidate(best_index), best_v, budget,
                                 {coord_range.first * 1e-3, coord_range.second * 1e3});

    const double scale = detail::violation_scale(f, space, best);
    verdict.worst_margin = -best_v;
    verdict.worst_scale = scale;
    if (best_v > tol * scale) {
        verdict.status = Status::Falsified;
        Witness w;
        w.points = best.points;
        if (space.has_factor) w.lambda = best.factor;
        for (const auto& p : best.points) w.values.push_back(f.eval(p));
        w.violation = best_v;
        verdict.witness = std::move(w);
    } else {
        verdict.status = Status::Satisfied;  // up to budget
    }
    return verdict;
}

// Monotone, deterministic improvement of an existing witness. The input
// configuration must lie inside the region; the returned violation is never
// smaller than the input's.
inline Witness refine_witness(const ScalarField& f, PropertyId property, const Witness& w,
                              const SearchBudget& budget) {
    validate(budget);
    const auto space = detail::search_space(property);
    if (w.points.size() != space.n_points)
        throw std::invalid_argument("witness has the wrong number of points");
    if (space.has_factor && !w.lambda)
        throw std::invalid_argument("witness needs a lambda for this property");
    for (const auto& p : w.points)
        if (!f.region.contains(p)) throw std::invalid_argument("witness point outside region");

    detail::Candidate c{w.points, space.has_factor ? *w.lambda : 1.0};
    double v = detail::violation_of(f, space, c);
    if (!std::isfinite(v)) throw std::invalid_argument("witness configuration leaves the region");
    const double v_in = v;
    const detail::Candidate refined =
        detail::refine_candidate(f, space, std::move(c), v, budget, {1e-12, 1e15});

    Witness out;
    out.points = refined.points;
    if (space.has_factor) out.lambda = refined.factor;
    for (const auto& p : refined.points) out.values.push_back(f.eval(p));
    out.violation = std::max(v, v_in);
    return out;
}

}  // namespace conelaw
