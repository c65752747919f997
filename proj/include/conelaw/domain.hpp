#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "conelaw/rng.hpp"

namespace conelaw {

using Point = std::vector<double>;

inline bool all_finite(const Point& p) {
    for (double v : p)
        if (!std::isfinite(v)) return false;
    return true;
}

inline Point add(const Point& a, const Point& b) {
    if (a.size() != b.size()) throw std::invalid_argument("point dimensions differ");
    Point out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

inline Point scaled(const Point& p, double lambda) {
    Point out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) out[i] = lambda * p[i];
    return out;
}

inline double norm(const Point& p) {
    double s = 0.0;
    for (double v : p) s += v * v;
    return std::sqrt(s);
}

// Open orthant cone in R^d, one sign per axis. Membership is strict, so
// the apex and every boundary face are excluded.
class OrthantCone {
public:
    explicit OrthantCone(std::vector<int> axis_signs) : signs_(std::move(axis_signs)) {
        if (signs_.empty()) throw std::invalid_argument("cone needs at least one axis");
        for (int s : signs_)
            if (s != 1 && s != -1) throw std::invalid_argument("axis signs must be +1 or -1");
    }

    static OrthantCone positive(int dim) {
        if (dim < 1) throw std::invalid_argument("dimension must be positive");
        return OrthantCone(std::vector<int>(static_cast<std::size_t>(dim), 1));
    }

    int dimension() const { return static_cast<int>(signs_.size()); }
    const std::vector<int>& axis_signs() const { return signs_; }

    bool contains(const Point& p) const {
        if (p.size() != signs_.size())
            throw std::invalid_argument("point dimension does not match cone dimension");
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (!std::isfinite(p[i])) return false;
            if (signs_[i] * p[i] <= 0.0) return false;
        }
        return true;
    }

private:
    std::vector<int> signs_;
};

// A cone intersected with an optional opaque constraint. The constructor
// declares whether the constrained set is still closed under addition;
// that claim is spot-checked by the test suite, not proven here.
class Region {
public:
    explicit Region(OrthantCone cone)
        : cone_(std::move(cone)), additively_closed_(true) {}

    Region(OrthantCone cone, std::string constraint_name,
           std::function<bool(const Point&)> constraint, bool additively_closed)
        : cone_(std::move(cone)),
          constraint_name_(std::move(constraint_name)),
          constraint_(std::move(constraint)),
          additively_closed_(additively_closed) {
        if (!constraint_) throw std::invalid_argument("null constraint predicate");
    }

    int dimension() const { return cone_.dimension(); }
    const OrthantCone& cone() const { return cone_; }
    bool constrained() const { return static_cast<bool>(constraint_); }
    const std::string& constraint_name() const { return constraint_name_; }
    bool additively_closed() const { return additively_closed_; }

    bool contains(const Point& p) const {
        if (!cone_.contains(p)) return false;
        return !constraint_ || constraint_(p);
    }

private:
    OrthantCone cone_;
    std::string constraint_name_;
    std::function<bool(const Point&)> constraint_;
    bool additively_closed_ = true;
};

inline bool membership(const Region& region, const Point& p) { return region.contains(p); }

enum class ScaleDistribution { LogUniform, Uniform };

struct SampleConfig {
    std::uint64_t seed = 42;
    std::size_t count = 1000;
    double range_min = 1e-2;  // coordinate magnitude range, both positive
    double range_max = 1e2;
    ScaleDistribution distribution = ScaleDistribution::LogUniform;
};

inline void validate(const SampleConfig& cfg) {
    if (!(cfg.range_min > 0.0) || !(cfg.range_max > cfg.range_min) ||
        !std::isfinite(cfg.range_max))
        throw std::invalid_argument("coord_range must satisfy 0 < min < max < inf");
}

struct RegionTooThinError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline Point draw_point(const Region& region, const SampleConfig& cfg, SplitMix64& gen) {
    const auto& signs = region.cone().axis_signs();
    Point p(signs.size());
    for (std::size_t i = 0; i < signs.size(); ++i) {
        const double mag = cfg.distribution == ScaleDistribution::LogUniform
                               ? gen.log_uniform(cfg.range_min, cfg.range_max)
                               : gen.uniform(cfg.range_min, cfg.range_max);
        p[i] = signs[i] * mag;
    }
    return p;
}

// Acceptance-rate probe for constrained regions; unconstrained cones
// accept every draw by construction.
inline void probe_acceptance(const Region& region, const SampleConfig& cfg,
                             std::function<bool(const Point&)> accept) {
    if (!region.constrained()) return;
    constexpr int kProbeDraws = 5000;
    SplitMix64 gen(substream_seed(cfg.seed, 0xfeedbeefull));
    int accepted = 0;
    for (int i = 0; i < kProbeDraws; ++i)
        if (accept(draw_point(region, cfg, gen))) ++accepted;
    if (accepted * 1000 < kProbeDraws)  // below 0.1%
        throw RegionTooThinError("region too thin: acceptance rate below 0.1% in probe batch");
}

constexpr int kMaxDrawsPerSample = 65536;

}  // namespace detail

// Deterministic in cfg.seed; each returned point is a region member.
inline std::vector<Point> sample_region(const Region& region, const SampleConfig& cfg) {
    validate(cfg);
    std::vector<Point> out;
    out.reserve(cfg.count);
    if (cfg.count == 0) return out;
    detail::probe_acceptance(region, cfg, [&](const Point& p) { return region.contains(p); });
    for (std::size_t i = 0; i < cfg.count; ++i) {
        SplitMix64 gen(substream_seed(cfg.seed, i));
        bool found = false;
        for (int attempt = 0; attempt < detail::kMaxDrawsPerSample; ++attempt) {
            Point p = detail::draw_point(region, cfg, gen);
            if (region.contains(p)) {
                out.push_back(std::move(p));
                found = true;
                break;
            }
        }
        if (!found)
            throw RegionTooThinError("region too thin: draw budget exhausted for sample " +
                                     std::to_string(i));
    }
    return out;
}

// Pairs (x1, x2) with x1, x2 and x1+x2 all inside the region. For regions
// declared additively closed the sum check is a re-verification; otherwise
// it is the rejection filter.
inline std::vector<std::pair<Point, Point>> sample_pairs_additive(const Region& region,
                                                                  const SampleConfig& cfg) {
    validate(cfg);
    std::vector<std::pair<Point, Point>> out;
    out.reserve(cfg.count);
    if (cfg.count == 0) return out;
    detail::probe_acceptance(region, cfg, [&](const Point& p) { return region.contains(p); });
    for (std::size_t i = 0; i < cfg.count; ++i) {
        SplitMix64 gen(substream_seed(cfg.seed, 0x9000000000000000ull + i));
        bool found = false;
        for (int attempt = 0; attempt < detail::kMaxDrawsPerSample; ++attempt) {
            Point a = detail::draw_point(region, cfg, gen);
            Point b = detail::draw_point(region, cfg, gen);
            if (region.contains(a) && region.contains(b) && region.contains(add(a, b))) {
                out.emplace_back(std::move(a), std::move(b));
                found = true;
                break;
            }
        }
        if (!found)
            throw RegionTooThinError("region too thin: no additive pair found for sample " +
                                     std::to_string(i));
    }
    return out;
}

}  // namespace conelaw
