#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "conelaw/domain.hpp"
#include "conelaw/fields.hpp"
#include "conelaw/continued_fraction.hpp"
#include "conelaw/parallel.hpp"
#include "conelaw/rng.hpp"

namespace conelaw {

inline constexpr double kDefaultTol = 1e-9;
inline constexpr double kDefaultFdStep = 1e-5;

enum class Status { Satisfied, Falsified, Inconclusive };

inline const char* to_string(Status s) {
    switch (s) {
        case Status::Satisfied: return "satisfied";
        case Status::Falsified: return "falsified";
        case Status::Inconclusive: return "inconclusive";
    }
    return "?";
}

struct Witness {
    std::vector<Point> points;
    std::optional<double> lambda;
    std::vector<double> values;
    double violation = 0.0;
};

struct Verdict {
    PropertyId property = PropertyId::H;
    Status status = Status::Inconclusive;
    std::size_t samples_checked = 0;
    std::size_t samples_skipped = 0;
    double worst_margin = std::numeric_limits<double>::infinity();
    double worst_scale = 1.0;  // 1 + max |value| at the worst sample
    std::optional<Witness> witness;
};

enum class LiminfClass { BoundedBelowByZero, NegativeFinite, DivergesToNegInfinity, Inconclusive };

inline const char* to_string(LiminfClass c) {
    switch (c) {
        case LiminfClass::BoundedBelowByZero: return "bounded_below_by_zero";
        case LiminfClass::NegativeFinite: return "negative_finite";
        case LiminfClass::DivergesToNegInfinity: return "diverges_to_neg_infinity";
        case LiminfClass::Inconclusive: return "inconclusive";
    }
    return "?";
}

struct LiminfEstimate {
    std::vector<double> radii;         // strictly decreasing
    std::vector<double> shell_infima;  // minimum sampled value per shell (NaN if shell empty)
    LiminfClass classification = LiminfClass::Inconclusive;
};

enum class DeductionRule {
    HSp_implies_Cc,
    HCc_implies_Sp,
    SpCc_liminf_implies_H,
    Sp_notH_liminf_implies_notCc,
    Inapplicable
};

inline const char* to_string(DeductionRule r) {
    switch (r) {
        case DeductionRule::HSp_implies_Cc: return "H_and_Sp_imply_Cc";
        case DeductionRule::HCc_implies_Sp: return "H_and_Cc_imply_Sp";
        case DeductionRule::SpCc_liminf_implies_H: return "Sp_and_Cc_and_liminf_imply_H";
        case DeductionRule::Sp_notH_liminf_implies_notCc: return "Sp_and_notH_and_liminf_imply_notCc";
        case DeductionRule::Inapplicable: return "inapplicable";
    }
    return "?";
}

struct TheoremReport {
    Verdict given_a;
    Verdict given_b;
    LiminfEstimate liminf;
    DeductionRule rule = DeductionRule::Inapplicable;
    std::optional<PropertyId> deduced_property;
    bool deduced_expected = false;
    std::string note;
    std::vector<Verdict> chain_evidence;
};

// ---------------------------------------------------------------------------
// Margin helpers. A margin is the raw slack of the defining inequality
// (positive = satisfied with room); every checker compares it against
// tol * scale with scale = 1 + max |field value| at the sample. Field
// magnitudes span many orders of magnitude.

namespace detail {

inline double ineq_margin(double lhs, double rhs) {
    // slack of lhs >= rhs on extended reals; -inf on the right always wins
    if (std::isinf(rhs) && rhs < 0.0) return std::isinf(lhs) && lhs < 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return lhs - rhs;
}

inline double scale_of(std::initializer_list<double> values) {
    double m = 0.0;
    for (double v : values)
        if (std::isfinite(v)) m = std::max(m, std::abs(v));
    return 1.0 + m;
}

inline std::optional<double> try_eval(const ScalarField& f, const Point& p) {
    try {
        return f.eval(p);
    } catch (const std::domain_error&) {
        return std::nullopt;
    }
}

// One sample outcome: normalized slack for ranking, raw margin and scale
// for reporting. ok=false marks a skipped sample.
struct SampleRecord {
    bool ok = false;
    double margin = 0.0;
    double scale = 1.0;
};

struct Reduction {
    std::size_t evaluated = 0;
    std::size_t skipped = 0;
    std::size_t worst_index = SIZE_MAX;
    double worst_ratio = std::numeric_limits<double>::infinity();
};

inline Reduction reduce_records(const std::vector<SampleRecord>& records) {
    Reduction r;
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (!records[i].ok) {
            ++r.skipped;
            continue;
        }
        ++r.evaluated;
        const double ratio = records[i].margin / records[i].scale;
        if (ratio < r.worst_ratio) {
            r.worst_ratio = ratio;
            r.worst_index = i;
        }
    }
    return r;
}

inline bool too_many_skips(const Reduction& r) {
    return r.evaluated == 0 || r.skipped > r.evaluated;
}

}  // namespace detail

inline double sp_margin(const ScalarField& f, const Point& x1, const Point& x2) {
    return detail::ineq_margin(f.eval(add(x1, x2)), f.eval(x1) + f.eval(x2));
}

inline double cc_margin(const ScalarField& f, const Point& x, const Point& y, double lambda) {
    const Point mid = add(scaled(x, lambda), scaled(y, 1.0 - lambda));
    return detail::ineq_margin(f.eval(mid), lambda * f.eval(x) + (1.0 - lambda) * f.eval(y));
}

inline double h_deviation(const ScalarField& f, double lambda, const Point& x) {
    return f.eval(scaled(x, lambda)) - lambda * f.eval(x);
}

// Re-derive a witness's violation from its points and lambda alone; used to
// confirm that reported witnesses are sound independently of the checker
// that produced them.
inline double recompute_violation(const ScalarField& f, PropertyId prop, const Witness& w) {
    switch (prop) {
        case PropertyId::H:
            return std::abs(h_deviation(f, w.lambda.value(), w.points.at(0)));
        case PropertyId::Sp:
        case PropertyId::SpStrict:
            return std::max(0.0, -sp_margin(f, w.points.at(0), w.points.at(1)));
        case PropertyId::Cc:
            return std::max(0.0, -cc_margin(f, w.points.at(0), w.points.at(1), w.lambda.value()));
        case PropertyId::Chain23: {
            const double l = w.lambda.value();
            return std::max(0.0, l * f.eval(w.points.at(0)) - f.eval(scaled(w.points.at(0), l)));
        }
        case PropertyId::Chain27: {
            const double n = w.lambda.value();
            return std::abs(f.eval(w.points.at(0)) - n * f.eval(scaled(w.points.at(0), 1.0 / n)));
        }
        case PropertyId::Chain28: {
            const double t = w.lambda.value();
            return std::abs(f.eval(scaled(w.points.at(0), t)) - t * f.eval(w.points.at(0)));
        }
        case PropertyId::RatioConstant: {
            const double h0 = f.eval(w.points.at(0)) / w.points.at(0).at(0);
            const double h1 = f.eval(w.points.at(1)) / w.points.at(1).at(0);
            return std::abs(h0 - h1);
        }
        default:
            throw std::invalid_argument("no recompute rule for this property");
    }
}

// ---------------------------------------------------------------------------
// (H): f(lambda x) = lambda f(x), tested as an equality within tol * scale.
// Scaled points that leave the region are skipped and counted; a run with
// more skips than evaluations is Inconclusive.
inline Verdict check_homogeneity(const ScalarField& f, const SampleConfig& cfg,
                                 const std::vector<double>& lambdas = {0.5, 1.0, 2.0, 10.0},
                                 double tol = kDefaultTol) {
    for (double l : lambdas)
        if (!(l > 0.0)) throw std::invalid_argument("lambdas must be positive");
    Verdict v;
    v.property = PropertyId::H;
    const auto points = sample_region(f.region, cfg);

    struct Row { bool ok; double dev, scale; const Point* x; double lambda; double fx, flx; };
    std::vector<Row> rows;
    rows.reserve(points.size() * lambdas.size());
    for (const auto& x : points) {
        const auto fx = detail::try_eval(f, x);
        for (double l : lambdas) {
            Row r{false, 0.0, 1.0, &x, l, 0.0, 0.0};
            const Point lx = scaled(x, l);
            if (fx && f.region.contains(lx)) {
                if (const auto flx = detail::try_eval(f, lx)) {
                    r.ok = true;
                    r.fx = *fx;
                    r.flx = *flx;
                    r.dev = *flx - l * *fx;
                    r.scale = detail::scale_of({l * *fx});
                }
            }
            rows.push_back(r);
        }
    }

    double worst = -1.0;  // largest |dev|/scale
    const Row* worst_row = nullptr;
    for (const auto& r : rows) {
        if (!r.ok) {
            ++v.samples_skipped;
            continue;
        }
        ++v.samples_checked;
        const double ratio = std::abs(r.dev) / r.scale;
        if (ratio > worst) {
            worst = ratio;
            worst_row = &r;
        }
    }
    if (v.samples_checked == 0 || v.samples_skipped > v.samples_checked) {
        v.status = Status::Inconclusive;
        return v;
    }
    v.worst_margin = -std::abs(worst_row->dev);
    v.worst_scale = worst_row->scale;
    if (worst > tol) {
        v.status = Status::Falsified;
        Witness w;
        w.points = {*worst_row->x};
        w.lambda = worst_row->lambda;
        w.values = {worst_row->fx, worst_row->flx};
        w.violation = std::abs(worst_row->dev);
        v.witness = std::move(w);
    } else {
        v.status = Status::Satisfied;
    }
    return v;
}

// (Sp) over an explicit pair list. strict additionally requires every margin
// to clear +tol * scale, so equality pairs fail strict mode with a
// zero-violation witness.
inline Verdict check_superadditivity_pairs(const ScalarField& f,
                                           const std::vector<std::pair<Point, Point>>& pairs,
                                           double tol = kDefaultTol, bool strict = false,
                                           int threads = 1) {
    Verdict v;
    v.property = strict ? PropertyId::SpStrict : PropertyId::Sp;
    std::vector<detail::SampleRecord> records(pairs.size());
    detail::parallel_for(pairs.size(), threads, [&](std::size_t i) {
        const auto& [x1, x2] = pairs[i];
        const auto v1 = detail::try_eval(f, x1);
        const auto v2 = detail::try_eval(f, x2);
        const auto v12 = detail::try_eval(f, add(x1, x2));
        if (!v1 || !v2 || !v12) return;
        records[i].ok = true;
        records[i].margin = detail::ineq_margin(*v12, *v1 + *v2);
        records[i].scale = detail::scale_of({*v1, *v2, *v12});
    });
    const auto red = detail::reduce_records(records);
    v.samples_checked = red.evaluated;
    v.samples_skipped = red.skipped;
    if (detail::too_many_skips(red)) {
        v.status = Status::Inconclusive;
        return v;
    }
    v.worst_margin = records[red.worst_index].margin;
    v.worst_scale = records[red.worst_index].scale;
    const bool bad = strict ? red.worst_ratio <= tol : red.worst_ratio < -tol;
    if (bad) {
        v.status = Status::Falsified;
        const auto& [x1, x2] = pairs[red.worst_index];
        Witness w;
        w.points = {x1, x2};
        w.values = {f.eval(x1), f.eval(x2), f.eval(add(x1, x2))};
        w.violation = std::max(0.0, -v.worst_margin);
        v.witness = std::move(w);
    } else {
        v.status = Status::Satisfied;
    }
    return v;
}

inline Verdict check_superadditivity(const ScalarField& f, const SampleConfig& cfg,
                                     double tol = kDefaultTol, bool strict = false,
                                     int threads = 1) {
    auto pairs = sample_pairs_additive(f.region, cfg);
    if (strict) {
        // strictness must also survive the equal-argument family (x, x),
        // which random pairs never hit
        SampleConfig diag = cfg;
        diag.count = std::max<std::size_t>(1, cfg.count / 4);
        for (const auto& x : sample_region(f.region, diag))
            if (f.region.contains(add(x, x))) pairs.emplace_back(x, x);
    }
    return check_superadditivity_pairs(f, pairs, tol, strict, threads);
}

inline const std::vector<double>& default_concavity_lambdas() {
    static const std::vector<double> l{0.1, 0.25, 0.5, 0.75, 0.9};
    return l;
}

// (Cc) on sampled triples (x, y, lambda). Each pair is tested at the fixed
// lambda grid plus one seeded uniform draw; combinations that leave a
// constrained region are skipped and counted.
inline Verdict check_concavity_triples(const ScalarField& f,
                                       const std::vector<std::pair<Point, Point>>& pairs,
                                       const std::vector<double>& lambdas, double tol,
                                       std::uint64_t seed, int threads = 1) {
    for (double l : lambdas)
        if (!(l > 0.0) || !(l < 1.0)) throw std::invalid_argument("lambdas must lie in (0,1)");
    Verdict v;
    v.property = PropertyId::Cc;
    const std::size_t per_pair = lambdas.size() + 1;
    std::vector<detail::SampleRecord> records(pairs.size() * per_pair);
    std::vector<double> used_lambda(pairs.size() * per_pair, 0.0);
    detail::parallel_for(pairs.size(), threads, [&](std::size_t i) {
        const auto& [x, y] = pairs[i];
        const auto fx = detail::try_eval(f, x);
        const auto fy = detail::try_eval(f, y);
        SplitMix64 gen(substream_seed(seed, 0xCC00000000000000ull + i));
        for (std::size_t j = 0; j < per_pair; ++j) {
            const double l = j < lambdas.size() ? lambdas[j] : gen.uniform(0.01, 0.99);
            const std::size_t slot = i * per_pair + j;
            used_lambda[slot] = l;
            if (!fx || !fy) continue;
            const Point mid = add(scaled(x, l), scaled(y, 1.0 - l));
            if (!f.region.contains(mid)) continue;
            const auto fm = detail::try_eval(f, mid);
            if (!fm) continue;
            records[slot].ok = true;
            records[slot].margin = detail::ineq_margin(*fm, l * *fx + (1.0 - l) * *fy);
            records[slot].scale = detail::scale_of({*fx, *fy, *fm});
        }
    });
    const auto red = detail::reduce_records(records);
    v.samples_checked = red.evaluated;
    v.samples_skipped = red.skipped;
    if (detail::too_many_skips(red)) {
        v.status = Status::Inconclusive;
        return v;
    }
    v.worst_margin = records[red.worst_index].margin;
    v.worst_scale = records[red.worst_index].scale;
    if (red.worst_ratio < -tol) {
        v.status = Status::Falsified;
        const auto& [x, y] = pairs[red.worst_index / per_pair];
        const double l = used_lambda[red.worst_index];
        Witness w;
        w.points = {x, y};
        w.lambda = l;
        w.values = {f.eval(x), f.eval(y), f.eval(add(scaled(x, l), scaled(y, 1.0 - l)))};
        w.violation = std::max(0.0, -v.worst_margin);
        v.witness = std::move(w);
    } else {
        v.status = Status::Satisfied;
    }
    return v;
}

inline Verdict check_concavity(const ScalarField& f, const SampleConfig& cfg,
                               const std::vector<double>& lambdas = default_concavity_lambdas(),
                               double tol = kDefaultTol, int threads = 1) {
    SampleConfig doubled = cfg;
    doubled.count = cfg.count * 2;
    const auto pts = sample_region(f.region, doubled);
    std::vector<std::pair<Point, Point>> pairs;
    pairs.reserve(cfg.count);
    for (std::size_t i = 0; i + 1 < pts.size(); i += 2) pairs.emplace_back(pts[i], pts[i + 1]);
    return check_concavity_triples(f, pairs, lambdas, tol, cfg.seed, threads);
}

// ---------------------------------------------------------------------------
// Hessian diagnostics: central second differences along each axis, the mixed
// partial and the 2x2 determinant diagnostic for d = 2. The verdict covers
// the necessary condition for concavity (all diagonal entries <= 0 within
// tolerance). Axes whose stencil leaves the region are recorded as NaN.

struct HessianPointDiag {
    Point point;
    double value = 0.0;
    std::vector<double> second_derivatives;  // NaN per axis without clearance
    std::optional<double> mixed_partial;
    std::optional<double> determinant_diag;  // mixed^2 - d2[0] * d2[1]
};

struct HessianReport {
    Verdict verdict;
    std::vector<HessianPointDiag> rows;
};

inline HessianReport check_concavity_hessian(const ScalarField& f, const std::vector<Point>& points,
                                             double fd_step = kDefaultFdStep, double tol = 1e-4) {
    if (!(fd_step > 0.0)) throw std::invalid_argument("fd_step must be positive");
    HessianReport report;
    Verdict& v = report.verdict;
    v.property = PropertyId::Cc;
    double worst_ratio = std::numeric_limits<double>::infinity();

    for (const auto& x : points) {
        const std::size_t d = x.size();
        HessianPointDiag row;
        row.point = x;
        const auto fx = detail::try_eval(f, x);
        if (!fx) {
            ++v.samples_skipped;
            continue;
        }
        row.value = *fx;
        row.second_derivatives.assign(d, std::numeric_limits<double>::quiet_NaN());
        std::vector<double> h(d);
        std::vector<bool> axis_ok(d, false);
        for (std::size_t i = 0; i < d; ++i) {
            h[i] = fd_step * std::max(1.0, std::abs(x[i]));
            Point lo = x, hi = x;
            lo[i] -= 2.0 * h[i];
            hi[i] += 2.0 * h[i];
            axis_ok[i] = f.region.contains(lo) && f.region.contains(hi);
        }
        bool any_axis = false;
        for (std::size_t i = 0; i < d; ++i) {
            if (!axis_ok[i]) {
                ++v.samples_skipped;
                continue;
            }
            Point lo = x, hi = x;
            lo[i] -= h[i];
            hi[i] += h[i];
            const auto flo = detail::try_eval(f, lo);
            const auto fhi = detail::try_eval(f, hi);
            if (!flo || !fhi) {
                ++v.samples_skipped;
                continue;
            }
            any_axis = true;
            ++v.samples_checked;
            const double d2 = (*fhi - 2.0 * *fx + *flo) / (h[i] * h[i]);
            row.second_derivatives[i] = d2;
            const double scale = detail::scale_of({*fx});
            const double ratio = -d2 / scale;  // want d2 <= 0
            if (ratio < worst_ratio) {
                worst_ratio = ratio;
                v.worst_margin = -d2;
                v.worst_scale = scale;
                Witness w;
                w.points = {x};
                w.values = {*fx, d2};
                w.violation = std::max(0.0, d2);
                v.witness = std::move(w);
            }
        }
        if (d == 2 && axis_ok[0] && axis_ok[1] && any_axis &&
            std::isfinite(row.second_derivatives[0]) && std::isfinite(row.second_derivatives[1])) {
            Point pp = x, pm = x, mp = x, mm = x;
            pp[0] += h[0]; pp[1] += h[1];
            pm[0] += h[0]; pm[1] -= h[1];
            mp[0] -= h[0]; mp[1] += h[1];
            mm[0] -= h[0]; mm[1] -= h[1];
            const auto fpp = detail::try_eval(f, pp), fpm = detail::try_eval(f, pm);
            const auto fmp = detail::try_eval(f, mp), fmm = detail::try_eval(f, mm);
            if (fpp && fpm && fmp && fmm) {
                const double mixed = (*fpp - *fpm - *fmp + *fmm) / (4.0 * h[0] * h[1]);
                row.mixed_partial = mixed;
                row.determinant_diag =
                    mixed * mixed - row.second_derivatives[0] * row.second_derivatives[1];
            }
        }
        report.rows.push_back(std::move(row));
    }
    if (v.samples_checked == 0) {
        v.status = Status::Inconclusive;
        v.witness.reset();
        return report;
    }
    if (worst_ratio < -tol) {
        v.status = Status::Falsified;
    } else {
        v.status = Status::Satisfied;
        v.witness.reset();
    }
    return report;
}

// One-dimensional support-line test: the line through (x0, f(x0)) with the
// central finite-difference slope must dominate f across the sampled range.
// The slope is stored in the witness's lambda slot.
inline Verdict check_support_line_1d(const ScalarField& f, double x0, const SampleConfig& cfg,
                                     double tol = kDefaultTol, double fd_step = kDefaultFdStep) {
    if (f.region.dimension() != 1)
        throw std::invalid_argument("support-line check requires a one-dimensional field");
    const Point p0{x0};
    if (!f.region.contains(p0)) throw std::invalid_argument("x0 must be an interior point");
    Verdict v;
    v.property = PropertyId::Cc;
    const double h = fd_step * std::max(1.0, std::abs(x0));
    const Point lo{x0 - h}, hi{x0 + h};
    if (!f.region.contains(lo) || !f.region.contains(hi)) {
        v.status = Status::Inconclusive;
        return v;
    }
    const double slope = (f.eval(hi) - f.eval(lo)) / (2.0 * h);
    const double f0 = f.eval(p0);
    if (!std::isfinite(slope) || !std::isfinite(f0)) {
        v.status = Status::Inconclusive;
        return v;
    }

    const auto xs = sample_region(f.region, cfg);
    double worst_ratio = std::numeric_limits<double>::infinity();
    const Point* worst_x = nullptr;
    double worst_line = 0.0, worst_fx = 0.0;
    for (const auto& x : xs) {
        const auto fx = detail::try_eval(f, x);
        if (!fx) {
            ++v.samples_skipped;
            continue;
        }
        ++v.samples_checked;
        const double line = f0 + slope * (x[0] - x0);
        const double margin = line - *fx;
        const double scale = detail::scale_of({line, *fx});
        const double ratio = margin / scale;
        if (ratio < worst_ratio) {
            worst_ratio = ratio;
            v.worst_margin = margin;
            v.worst_scale = scale;
            worst_x = &x;
            worst_line = line;
            worst_fx = *fx;
        }
    }
    if (v.samples_checked == 0) {
        v.status = Status::Inconclusive;
        return v;
    }
    if (worst_ratio < -tol) {
        v.status = Status::Falsified;
        Witness w;
        w.points = {p0, *worst_x};
        w.lambda = slope;
        w.values = {f0, worst_fx, worst_line};
        w.violation = -v.worst_margin;
        v.witness = std::move(w);
    } else {
        v.status = Status::Satisfied;
    }
    return v;
}

// ---------------------------------------------------------------------------
// Apex liminf profile. For each radius r the shell {x in region :
// r < |x| <= 2r} is sampled with log-uniform directions (so extreme
// coordinate ratios near constrained boundaries are reachable) and the
// minimum value is recorded. Classification thresholds are fixed constants:
// every infimum >= -tol            -> BoundedBelowByZero
// last infimum <= -1, decrements
//   not shrinking (>= half of the
//   first) and >= 0.1              -> DivergesToNegInfinity
// last decrement <= 5% of level    -> NegativeFinite
// anything else                    -> Inconclusive

namespace detail {

inline constexpr double kDivergenceFloor = -1.0;
inline constexpr double kDivergenceDecrementKeep = 0.5;
inline constexpr double kDivergenceDecrementMin = 0.1;
inline constexpr double kStabilizedFraction = 0.05;

inline std::optional<Point> draw_shell_point(const ScalarField& f, double r_lo, double r_hi,
                                             SplitMix64& gen, int attempts) {
    const auto& signs = f.region.cone().axis_signs();
    const std::size_t d = signs.size();
    for (int a = 0; a < attempts; ++a) {
        Point x(d);
        for (std::size_t i = 0; i < d; ++i)
            x[i] = signs[i] * gen.log_uniform(r_hi * 1e-7, r_hi);
        const double n = norm(x);
        if (!(n > 0.0)) continue;
        const double rho = gen.log_uniform(r_lo, r_hi);
        for (double& c : x) c *= rho / n;
        if (f.region.contains(x)) return x;
    }
    return std::nullopt;
}

}  // namespace detail

inline LiminfEstimate estimate_apex_liminf(const ScalarField& f, const std::vector<double>& radii,
                                           std::size_t samples_per_shell, std::uint64_t seed,
                                           double tol = kDefaultTol) {
    if (radii.empty()) throw std::invalid_argument("need at least one radius");
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (!(radii[i] > 0.0)) throw std::invalid_argument("radii must be positive");
        if (i > 0 && !(radii[i] < radii[i - 1]))
            throw std::invalid_argument("radii must be strictly decreasing");
    }
    if (samples_per_shell == 0) throw std::invalid_argument("samples_per_shell must be positive");

    LiminfEstimate est;
    est.radii = radii;
    bool any_empty = false;
    for (std::size_t s = 0; s < radii.size(); ++s) {
        const double r = radii[s];
        double inf_value = std::numeric_limits<double>::infinity();
        std::size_t accepted = 0;
        for (int pass = 0; pass < 2 && accepted == 0; ++pass) {
            // second pass shrinks the shell toward its inner radius
            const double band_hi = pass == 0 ? 2.0 * r : 1.25 * r;
            for (std::size_t j = 0; j < samples_per_shell; ++j) {
                SplitMix64 gen(substream_seed(seed, (s + 1) * 0x100000ull + pass * 0x80000ull + j));
                const auto x = detail::draw_shell_point(f, r, band_hi, gen, 64);
                if (!x) continue;
                if (const auto val = detail::try_eval(f, *x)) {
                    ++accepted;
                    inf_value = std::min(inf_value, *val);
                }
            }
        }
        if (accepted == 0) {
            any_empty = true;
            est.shell_infima.push_back(std::numeric_limits<double>::quiet_NaN());
        } else {
            est.shell_infima.push_back(inf_value);
        }
    }

    if (any_empty) {
        est.classification = LiminfClass::Inconclusive;
        return est;
    }
    const auto& inf = est.shell_infima;
    if (std::all_of(inf.begin(), inf.end(), [tol](double v) { return v >= -tol; })) {
        est.classification = LiminfClass::BoundedBelowByZero;
        return est;
    }
    if (inf.size() < 2) {
        est.classification = LiminfClass::Inconclusive;
        return est;
    }
    const double last = inf.back();
    const double first_dec = inf.front() - inf[1];
    const double last_dec = inf[inf.size() - 2] - inf.back();
    if (last <= detail::kDivergenceFloor &&
        last_dec >= detail::kDivergenceDecrementKeep * first_dec &&
        last_dec >= detail::kDivergenceDecrementMin) {
        est.classification = LiminfClass::DivergesToNegInfinity;
    } else if (last < -tol &&
               std::abs(last_dec) <= detail::kStabilizedFraction * (1.0 + std::abs(last))) {
        est.classification = LiminfClass::NegativeFinite;
    } else {
        est.classification = LiminfClass::Inconclusive;
    }
    return est;
}

// ---------------------------------------------------------------------------
// The three links of the sufficiency argument, reported separately:
// Chain23: f(lambda x) >= lambda f(x) for lambda in (0, 1]
// Chain27: f(w) = n f(w/n) for integer n
// Chain28: f((m/n) u) = (m/n) f(u) for coprime m, n

struct ChainReport {
    Verdict chain23;
    Verdict chain27;
    Verdict chain28;
};

namespace detail {

struct EqualityTracker {
    double worst_abs_ratio = -1.0;
    double worst_dev = 0.0, worst_scale = 1.0;
    const Point* worst_point = nullptr;
    double worst_factor = 1.0;
    double worst_va = 0.0, worst_vb = 0.0;

    void add(double dev, double scale, const Point& p, double factor, double va, double vb) {
        const double r = std::abs(dev) / scale;
        if (r > worst_abs_ratio) {
            worst_abs_ratio = r;
            worst_dev = dev;
            worst_scale = scale;
            worst_point = &p;
            worst_factor = factor;
            worst_va = va;
            worst_vb = vb;
        }
    }

    void finish(Verdict& v, double tol) {
        if (v.samples_checked == 0 || v.samples_skipped > v.samples_checked) {
            v.status = Status::Inconclusive;
            return;
        }
        v.worst_margin = -std::abs(worst_dev);
        v.worst_scale = worst_scale;
        if (worst_abs_ratio > tol) {
            v.status = Status::Falsified;
            Witness w;
            w.points = {*worst_point};
            w.lambda = worst_factor;
            w.values = {worst_va, worst_vb};
            w.violation = std::abs(worst_dev);
            v.witness = std::move(w);
        } else {
            v.status = Status::Satisfied;
        }
    }
};

}  // namespace detail

inline ChainReport check_homogeneity_chain(const ScalarField& f, const SampleConfig& cfg,
                                           int n_max = 12, double tol = kDefaultTol) {
    if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
    ChainReport rep;
    rep.chain23.property = PropertyId::Chain23;
    rep.chain27.property = PropertyId::Chain27;
    rep.chain28.property = PropertyId::Chain28;
    const auto points = sample_region(f.region, cfg);

    // Chain23: one-sided inequality, lambda in (0, 1]
    {
        Verdict& v = rep.chain23;
        const std::vector<double> fixed{0.1, 0.25, 0.5, 0.75, 1.0};
        double worst_ratio = std::numeric_limits<double>::infinity();
        const Point* wx = nullptr;
        double wl = 1.0, wfx = 0.0, wflx = 0.0;
        for (std::size_t i = 0; i < points.size(); ++i) {
            const auto& x = points[i];
            const auto fx = detail::try_eval(f, x);
            SplitMix64 gen(substream_seed(cfg.seed, 0x2300000000000000ull + i));
            std::vector<double> ls = fixed;
            ls.push_back(gen.uniform(0.01, 1.0));
            for (double l : ls) {
                const Point lx = scaled(x, l);
                if (!fx || !f.region.contains(lx)) {
                    ++v.samples_skipped;
                    continue;
                }
                const auto flx = detail::try_eval(f, lx);
                if (!flx) {
                    ++v.samples_skipped;
                    continue;
                }
                ++v.samples_checked;
                const double margin = detail::ineq_margin(*flx, l * *fx);
                const double scale = detail::scale_of({*fx, *flx});
                const double ratio = margin / scale;
                if (ratio < worst_ratio) {
                    worst_ratio = ratio;
                    v.worst_margin = margin;
                    v.worst_scale = scale;
                    wx = &x;
                    wl = l;
                    wfx = *fx;
                    wflx = *flx;
                }
            }
        }
        if (v.samples_checked == 0 || v.samples_skipped > v.samples_checked) {
            v.status = Status::Inconclusive;
        } else if (worst_ratio < -tol) {
            v.status = Status::Falsified;
            Witness w;
            w.points = {*wx};
            w.lambda = wl;
            w.values = {wfx, wflx};
            w.violation = -v.worst_margin;
            v.witness = std::move(w);
        } else {
            v.status = Status::Satisfied;
        }
    }

    // Chain27: equality f(w) = n f(w/n), n = 1..n_max (n = 1 is the identity)
    {
        Verdict& v = rep.chain27;
        detail::EqualityTracker tracker;
        for (const auto& w : points) {
            const auto fw = detail::try_eval(f, w);
            for (int n = 1; n <= n_max; ++n) {
                const Point wn = scaled(w, 1.0 / n);
                if (!fw || !f.region.contains(wn)) {
                    ++v.samples_skipped;
                    continue;
                }
                const auto fwn = detail::try_eval(f, wn);
                if (!fwn) {
                    ++v.samples_skipped;
                    continue;
                }
                ++v.samples_checked;
                const double dev = *fw - n * *fwn;
                tracker.add(dev, detail::scale_of({*fw, n * *fwn}), w, n, *fw, *fwn);
            }
        }
        tracker.finish(v, tol);
    }

    // Chain28: equality over coprime ratios m/n with m, n <= n_max
    {
        Verdict& v = rep.chain28;
        std::vector<std::pair<int, int>> ratios;
        for (int m = 1; m <= n_max; ++m)
            for (int n = 1; n <= n_max; ++n)
                if (std::gcd(m, n) == 1) ratios.emplace_back(m, n);
        detail::EqualityTracker tracker;
        for (const auto& u : points) {
            const auto fu = detail::try_eval(f, u);
            for (const auto& [m, n] : ratios) {
                const double t = static_cast<double>(m) / n;
                const Point tu = scaled(u, t);
                if (!fu || !f.region.contains(tu)) {
                    ++v.samples_skipped;
                    continue;
                }
                const auto ftu = detail::try_eval(f, tu);
                if (!ftu) {
                    ++v.samples_skipped;
                    continue;
                }
                ++v.samples_checked;
                const double dev = *ftu - t * *fu;
                tracker.add(dev, detail::scale_of({*ftu, t * *fu}), u, t, *fu, *ftu);
            }
        }
        tracker.finish(v, tol);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Rational scaling along the convergents of lambda: the table tracks both
// |f((p/q) u) - (p/q) f(u)| (homogeneity error) and |f((p/q) u) - f(lambda u)|
// (continuity error toward the limit).

struct ScalingRow {
    int k = 0;
    std::int64_t p = 0;
    std::int64_t q = 1;
    double ratio = 0.0;
    double homogeneity_error = 0.0;
    double limit_error = 0.0;
};

struct ScalingTable {
    std::vector<ScalingRow> rows;
    std::size_t skipped = 0;
    bool limit_converged = false;        // limit_error decreasing, final below tol
    bool homogeneity_converged = false;  // final homogeneity_error below tol * scale
};

inline ScalingTable check_irrational_scaling(const ScalarField& f, double lambda, const Point& u,
                                             int k_max = 12, double tol = 1e-3) {
    if (!f.region.contains(u)) throw std::invalid_argument("u must be a region member");
    const Point lu = scaled(u, lambda);
    if (!f.region.contains(lu)) throw std::invalid_argument("lambda * u must be a region member");
    const double fu = f.eval(u);
    const double flu = f.eval(lu);

    ScalingTable table;
    for (const auto& c : cf::convergents(lambda, k_max)) {
        const double t = c.value;
        if (!(t > 0.0)) {
            ++table.skipped;
            continue;
        }
        const Point tu = scaled(u, t);
        if (!f.region.contains(tu)) {
            ++table.skipped;
            continue;
        }
        const auto ftu = detail::try_eval(f, tu);
        if (!ftu) {
            ++table.skipped;
            continue;
        }
        table.rows.push_back(
            {c.k, c.p, c.q, t, std::abs(*ftu - t * fu), std::abs(*ftu - flu)});
    }
    if (!table.rows.empty()) {
        bool decreasing = true;
        for (std::size_t i = 1; i < table.rows.size(); ++i)
            if (table.rows[i].limit_error > table.rows[i - 1].limit_error * (1.0 + 1e-12) + 1e-15)
                decreasing = false;
        const auto& last = table.rows.back();
        table.limit_converged = decreasing && last.limit_error <= tol;
        table.homogeneity_converged =
            last.homogeneity_error <= tol * detail::scale_of({last.ratio * fu});
    }
    return table;
}

// ---------------------------------------------------------------------------
// d = 1 triviality test: h(x) = f(x) / x must be constant for a field with
// (H); the report also carries the fraction of nondecreasing/nonincreasing
// consecutive steps as a direction diagnostic.

struct RatioReport {
    Verdict verdict;
    double nondecreasing_fraction = 0.0;
    double nonincreasing_fraction = 0.0;
};

inline RatioReport check_ratio_constancy_1d(const ScalarField& f, const std::vector<double>& grid,
                                            double tol = kDefaultTol) {
    if (f.region.dimension() != 1)
        throw std::invalid_argument("ratio-constancy check requires a one-dimensional field");
    RatioReport rep;
    Verdict& v = rep.verdict;
    v.property = PropertyId::RatioConstant;
    std::vector<double> xs = grid;
    std::sort(xs.begin(), xs.end());

    std::vector<std::pair<double, double>> ratios;  // (x, f(x)/x)
    for (double x : xs) {
        const Point p{x};
        if (!f.region.contains(p)) {
            ++v.samples_skipped;
            continue;
        }
        const auto fx = detail::try_eval(f, p);
        if (!fx) {
            ++v.samples_skipped;
            continue;
        }
        ++v.samples_checked;
        ratios.emplace_back(x, *fx / x);
    }
    if (ratios.size() < 2) {
        v.status = Status::Inconclusive;
        return rep;
    }
    double mean = 0.0;
    for (const auto& [x, h] : ratios) mean += h;
    mean /= static_cast<double>(ratios.size());
    auto hi = std::max_element(ratios.begin(), ratios.end(),
                               [](const auto& a, const auto& b) { return a.second < b.second; });
    auto lo = std::min_element(ratios.begin(), ratios.end(),
                               [](const auto& a, const auto& b) { return a.second < b.second; });
    const double spread = hi->second - lo->second;
    const double scale = detail::scale_of({mean});

    std::size_t nondec = 0, noninc = 0;
    for (std::size_t i = 1; i < ratios.size(); ++i) {
        const double eps = tol * (1.0 + std::abs(ratios[i - 1].second));
        if (ratios[i].second >= ratios[i - 1].second - eps) ++nondec;
        if (ratios[i].second <= ratios[i - 1].second + eps) ++noninc;
    }
    rep.nondecreasing_fraction = static_cast<double>(nondec) / static_cast<double>(ratios.size() - 1);
    rep.nonincreasing_fraction = static_cast<double>(noninc) / static_cast<double>(ratios.size() - 1);

    v.worst_margin = -spread;
    v.worst_scale = scale;
    if (spread <= tol * scale) {
        v.status = Status::Satisfied;
    } else {
        v.status = Status::Falsified;
        Witness w;
        w.points = {Point{hi->first}, Point{lo->first}};
        w.values = {hi->second, lo->second};
        w.violation = spread;
        v.witness = std::move(w);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Deduction engine. Given verdicts for two distinct properties among
// {H, Sp, Cc} plus a liminf profile, applies the rule table and names the
// third property's expected truth value. The SpCc rule needs the liminf
// hypothesis; when (Sp) and (Cc) hold but the liminf fails, no conclusion
// follows (the catalog field f0 sits exactly in that gap).

namespace detail {

inline const Verdict* find_property(PropertyId id, const Verdict& a, const Verdict& b) {
    if (a.property == id) return &a;
    if (b.property == id) return &b;
    return nullptr;
}

}  // namespace detail

inline TheoremReport deduce_third_property(const Verdict& va, const Verdict& vb,
                                           const LiminfEstimate& liminf) {
    auto core = [](PropertyId p) {
        return p == PropertyId::H || p == PropertyId::Sp || p == PropertyId::Cc;
    };
    if (!core(va.property) || !core(vb.property))
        throw std::invalid_argument("deduction inputs must concern H, Sp or Cc");
    if (va.property == vb.property)
        throw std::invalid_argument("deduction inputs must concern two distinct properties");
    if (va.status == Status::Inconclusive || vb.status == Status::Inconclusive)
        throw std::invalid_argument("deduction inputs must be Satisfied or Falsified");

    TheoremReport rep;
    rep.given_a = va;
    rep.given_b = vb;
    rep.liminf = liminf;

    const Verdict* h = detail::find_property(PropertyId::H, va, vb);
    const Verdict* sp = detail::find_property(PropertyId::Sp, va, vb);
    const Verdict* cc = detail::find_property(PropertyId::Cc, va, vb);
    const bool liminf_ok = liminf.classification == LiminfClass::BoundedBelowByZero;

    auto sat = [](const Verdict* v) { return v && v->status == Status::Satisfied; };
    auto fal = [](const Verdict* v) { return v && v->status == Status::Falsified; };

    if (sat(h) && sat(sp)) {
        rep.rule = DeductionRule::HSp_implies_Cc;
        rep.deduced_property = PropertyId::Cc;
        rep.deduced_expected = true;
    } else if (sat(h) && sat(cc)) {
        rep.rule = DeductionRule::HCc_implies_Sp;
        rep.deduced_property = PropertyId::Sp;
        rep.deduced_expected = true;
    } else if (sat(sp) && sat(cc) && liminf_ok) {
        rep.rule = DeductionRule::SpCc_liminf_implies_H;
        rep.deduced_property = PropertyId::H;
        rep.deduced_expected = true;
    } else if (sat(sp) && fal(h) && liminf_ok) {
        rep.rule = DeductionRule::Sp_notH_liminf_implies_notCc;
        rep.deduced_property = PropertyId::Cc;
        rep.deduced_expected = false;
    } else if (sat(sp) && sat(cc) && !liminf_ok) {
        rep.rule = DeductionRule::Inapplicable;
        rep.note = "liminf condition fails: (Sp) and (Cc) alone do not force (H); "
                   "catalog field f0 satisfies both yet scales inhomogeneously";
    } else {
        rep.rule = DeductionRule::Inapplicable;
        rep.note = "no deduction rule matches the given verdicts";
    }
    return rep;
}

// Overload that can attach the proof-chain evidence: when the SpCc rule
// fires, the three chain sub-checks run on the field and ride along.
inline TheoremReport deduce_third_property(const ScalarField& f, const SampleConfig& cfg,
                                           const Verdict& va, const Verdict& vb,
                                           const LiminfEstimate& liminf, int n_max = 12,
                                           double tol = kDefaultTol) {
    TheoremReport rep = deduce_third_property(va, vb, liminf);
    if (rep.rule == DeductionRule::SpCc_liminf_implies_H) {
        const auto chain = check_homogeneity_chain(f, cfg, n_max, tol);
        rep.chain_evidence = {chain.chain23, chain.chain27, chain.chain28};
    }
    return rep;
}

}  // namespace conelaw
