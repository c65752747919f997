#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "conelaw/domain.hpp"

namespace conelaw {

enum class PropertyId {
    H,            // f(lambda x) = lambda f(x) for all lambda > 0
    Sp,           // f(x1+x2) >= f(x1) + f(x2)
    Cc,           // f(lx + (1-l)y) >= l f(x) + (1-l) f(y)
    SpStrict,
    CcStrict,
    LiminfOK,     // inf of f near the apex stays >= 0
    Chain23,      // f(lx) >= l f(x) for l in (0,1]
    Chain27,      // f(w) = n f(w/n)
    Chain28,      // f((m/n)u) = (m/n) f(u), gcd(m,n) = 1
    RatioConstant // f(x)/x constant on a 1-d grid
};

inline const char* to_string(PropertyId p) {
    switch (p) {
        case PropertyId::H: return "H";
        case PropertyId::Sp: return "Sp";
        case PropertyId::Cc: return "Cc";
        case PropertyId::SpStrict: return "SpStrict";
        case PropertyId::CcStrict: return "CcStrict";
        case PropertyId::LiminfOK: return "LiminfOK";
        case PropertyId::Chain23: return "Chain23";
        case PropertyId::Chain27: return "Chain27";
        case PropertyId::Chain28: return "Chain28";
        case PropertyId::RatioConstant: return "RatioConstant";
    }
    return "?";
}

inline std::optional<PropertyId> property_from_string(std::string_view s) {
    if (s == "H") return PropertyId::H;
    if (s == "Sp") return PropertyId::Sp;
    if (s == "Cc") return PropertyId::Cc;
    if (s == "SpStrict") return PropertyId::SpStrict;
    if (s == "CcStrict") return PropertyId::CcStrict;
    if (s == "liminf" || s == "LiminfOK") return PropertyId::LiminfOK;
    if (s == "Chain23") return PropertyId::Chain23;
    if (s == "Chain27") return PropertyId::Chain27;
    if (s == "Chain28") return PropertyId::Chain28;
    if (s == "ratio" || s == "RatioConstant") return PropertyId::RatioConstant;
    return std::nullopt;
}

// A named real-valued function on a Region. eval returns a finite value or
// -infinity for members and throws std::domain_error elsewhere; it never
// returns NaN or +infinity. declared holds the expected truth value of each
// property this field is known to satisfy or violate.
struct ScalarField {
    std::string name;
    Region region = Region(OrthantCone::positive(1));
    std::function<double(const Point&)> eval;
    std::function<std::vector<double>(const Point&)> grad;  // optional
    std::map<PropertyId, bool> declared;
    bool open_cone_domain = true;

    double operator()(const Point& p) const { return eval(p); }
};

enum class SlopeMode { Tangent, Squared };

// Logarithm with a linear tail glued at x = 2/c. The pieces are split
// half-open (log on (0, 2/c], line on (2/c, inf)) so the value at the
// junction is log 2 from either side. Tangent mode continues with the
// tangent slope c/2 and is C^1 and concave for every c; Squared uses the
// slope (c/2)^2 instead, which kinks the junction whenever c != 2 and
// breaks concavity for c > 2.
inline ScalarField make_f0(double c, SlopeMode mode = SlopeMode::Tangent) {
    if (!(c > 0.0) || !std::isfinite(c)) throw std::invalid_argument("c must satisfy 0 < c < inf");
    const double junction = 2.0 / c;
    const double slope = mode == SlopeMode::Tangent ? c / 2.0 : (c / 2.0) * (c / 2.0);
    ScalarField f;
    f.name = "f0";
    f.region = Region(OrthantCone::positive(1));
    f.eval = [c, junction, slope](const Point& p) {
        if (p.size() != 1) throw std::invalid_argument("f0 is one-dimensional");
        const double x = p[0];
        if (!(x > 0.0)) throw std::domain_error("f0 requires x > 0");
        return x <= junction ? std::log(c * x) : std::log(2.0) + slope * (x - junction);
    };
    f.declared = {{PropertyId::H, false},
                  {PropertyId::LiminfOK, false},
                  {PropertyId::CcStrict, false}};
    if (mode == SlopeMode::Tangent) {
        f.declared[PropertyId::Sp] = true;
        f.declared[PropertyId::SpStrict] = true;
        f.declared[PropertyId::Cc] = true;
    } else {
        // Concave iff the slope does not jump upward at the junction.
        f.declared[PropertyId::Cc] = c <= 2.0;
    }
    return f;
}

// Coordinate-wise sum of f0 on the positive orthant of R^d.
inline ScalarField make_f0_multi(double c, int dim) {
    if (dim < 1) throw std::invalid_argument("dimension must be >= 1");
    ScalarField one = make_f0(c, SlopeMode::Tangent);
    ScalarField f;
    f.name = "f0-multi";
    f.region = Region(OrthantCone::positive(dim));
    f.eval = [one, dim](const Point& p) {
        if (static_cast<int>(p.size()) != dim)
            throw std::invalid_argument("point dimension mismatch");
        double sum = 0.0;
        for (double xi : p) sum += one.eval(Point{xi});
        return sum;
    };
    f.declared = one.declared;
    return f;
}

// Kerr-Newman black-hole entropy S = pi(2M^2 + 2M sqrt(M^2 - (J/M)^2 - Q^2) - Q^2)
// on the physical region M^2 > (J/M)^2 + Q^2, which is closed under addition
// but not under down-scaling.
inline ScalarField make_bh_entropy(double Q = 0.0) {
    if (!(Q >= 0.0) || !std::isfinite(Q)) throw std::invalid_argument("Q must be >= 0");
    auto physical = [Q](const Point& p) {
        const double M = p[0], J = p[1];
        if (!(M > 0.0) || !(J > 0.0)) return false;
        const double M2 = M * M;
        return M2 * M2 > J * J + Q * Q * M2;  // M^2 > (J/M)^2 + Q^2, cleared of divisions
    };
    ScalarField f;
    f.name = "bekenstein";
    f.region = Region(OrthantCone::positive(2), "kerr-newman-physical", physical,
                      /*additively_closed=*/true);
    f.eval = [Q](const Point& p) {
        if (p.size() != 2) throw std::invalid_argument("bekenstein field needs (M, J)");
        const double M = p[0], J = p[1];
        if (!(M > 0.0) || !(J > 0.0)) throw std::domain_error("require M > 0 and J > 0");
        const double a = J / M;
        const double disc = M * M - a * a - Q * Q;
        if (!(disc > 0.0)) throw std::domain_error("outside physical region: M^2 <= (J/M)^2 + Q^2");
        const double pi = 3.14159265358979323846;
        return pi * (2.0 * M * M + 2.0 * M * std::sqrt(disc) - Q * Q);
    };
    f.declared = {{PropertyId::H, false},       {PropertyId::Sp, true},
                  {PropertyId::SpStrict, true}, {PropertyId::Cc, false},
                  {PropertyId::CcStrict, false}, {PropertyId::LiminfOK, true}};
    return f;
}

// Photon-gas entropy s(E, V) = E^(3/4) V^(1/4) on the positive quadrant.
inline ScalarField make_photon_entropy() {
    ScalarField f;
    f.name = "photon";
    f.region = Region(OrthantCone::positive(2));
    f.eval = [](const Point& p) {
        if (p.size() != 2) throw std::invalid_argument("photon field needs (E, V)");
        const double E = p[0], V = p[1];
        if (!(E > 0.0) || !(V > 0.0)) throw std::domain_error("require E > 0 and V > 0");
        return std::pow(E, 0.75) * std::pow(V, 0.25);
    };
    f.grad = [](const Point& p) {
        const double E = p[0], V = p[1];
        return std::vector<double>{0.75 * std::pow(E, -0.25) * std::pow(V, 0.25),
                                   0.25 * std::pow(E, 0.75) * std::pow(V, -0.75)};
    };
    f.declared = {{PropertyId::H, true},         {PropertyId::Sp, true},
                  {PropertyId::SpStrict, false}, {PropertyId::Cc, true},
                  {PropertyId::CcStrict, false}, {PropertyId::LiminfOK, true}};
    return f;
}

// f(x) = sum c_i x_i on the positive orthant; every property holds with
// equality margins.
inline ScalarField make_linear(std::vector<double> coeffs) {
    if (coeffs.empty()) throw std::invalid_argument("need at least one coefficient");
    const int dim = static_cast<int>(coeffs.size());
    ScalarField f;
    f.name = "linear";
    f.region = Region(OrthantCone::positive(dim));
    f.eval = [coeffs, dim](const Point& p) {
        if (static_cast<int>(p.size()) != dim)
            throw std::invalid_argument("point dimension mismatch");
        double s = 0.0;
        for (int i = 0; i < dim; ++i) s += coeffs[static_cast<std::size_t>(i)] * p[static_cast<std::size_t>(i)];
        return s;
    };
    f.grad = [coeffs](const Point&) { return coeffs; };
    f.declared = {{PropertyId::H, true},
                  {PropertyId::Sp, true},
                  {PropertyId::SpStrict, false},
                  {PropertyId::Cc, true},
                  {PropertyId::CcStrict, false}};
    // the apex limit is zero either way, but the shell estimator only
    // certifies it when no coefficient pulls samples below zero
    if (std::all_of(coeffs.begin(), coeffs.end(), [](double v) { return v >= 0.0; }))
        f.declared[PropertyId::LiminfOK] = true;
    if (dim == 1) f.declared[PropertyId::RatioConstant] = true;
    return f;
}

// phi(x) = 0 on [0, 1), phi(1) = 1: convex on the closed interval yet
// discontinuous at 1. A pedagogical fixture that deliberately violates the
// open-cone assumption; it is excluded from theorem deduction. The attached
// region is the open interval (0, 1) for samplers, while eval itself accepts
// the closed endpoints. No checkable declarations: the endpoint pathology is
// invisible to interior sampling.
inline ScalarField make_boundary_phi() {
    ScalarField f;
    f.name = "boundary-phi";
    f.region = Region(OrthantCone::positive(1), "open-unit-interval",
                      [](const Point& p) { return p[0] < 1.0; },
                      /*additively_closed=*/false);
    f.eval = [](const Point& p) {
        if (p.size() != 1) throw std::invalid_argument("boundary-phi is one-dimensional");
        const double x = p[0];
        if (x < 0.0 || x > 1.0) throw std::domain_error("boundary-phi lives on [0, 1]");
        return x == 1.0 ? 1.0 : 0.0;
    };
    f.open_cone_domain = false;
    return f;
}

// Sign-flip: superadditivity checks on -f test subadditivity of f, and
// concavity checks on -f test convexity of f. Homogeneity survives the flip;
// the other declarations do not transfer, so they are dropped.
inline ScalarField negate(const ScalarField& f) {
    ScalarField g;
    g.name = "neg-" + f.name;
    g.region = f.region;
    g.eval = [inner = f.eval](const Point& p) { return -inner(p); };
    if (f.grad)
        g.grad = [inner = f.grad](const Point& p) {
            auto v = inner(p);
            for (double& x : v) x = -x;
            return v;
        };
    if (auto it = f.declared.find(PropertyId::H); it != f.declared.end())
        g.declared[PropertyId::H] = it->second;
    g.open_cone_domain = f.open_cone_domain;
    return g;
}

}  // namespace conelaw
