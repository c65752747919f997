#pragma once

#include <chrono>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "conelaw/checkers.hpp"
#include "conelaw/domain.hpp"
#include "conelaw/falsifier.hpp"
#include "conelaw/fields.hpp"
#include "conelaw/version.hpp"

namespace conelaw {

using nlohmann::json;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FieldSpec {
    std::string name = "photon";
    double c = 1.0;
    SlopeMode slope_mode = SlopeMode::Tangent;
    int dim = 2;
    double Q = 0.0;
    std::vector<double> coeffs = {1.0};
    bool negate_field = false;
};

inline ScalarField resolve_field(const FieldSpec& spec) {
    ScalarField f = [&] {
        if (spec.name == "f0") return make_f0(spec.c, spec.slope_mode);
        if (spec.name == "f0-multi") return make_f0_multi(spec.c, spec.dim);
        if (spec.name == "bekenstein") return make_bh_entropy(spec.Q);
        if (spec.name == "photon") return make_photon_entropy();
        if (spec.name == "linear") return make_linear(spec.coeffs);
        if (spec.name == "boundary-phi") return make_boundary_phi();
        throw UsageError("unknown field '" + spec.name +
                         "'; valid fields: f0, f0-multi, bekenstein, photon, linear, boundary-phi");
    }();
    return spec.negate_field ? negate(f) : f;
}

struct RunConfig {
    FieldSpec field;
    std::vector<std::string> properties = {"H", "Sp", "Cc", "liminf"};
    SampleConfig samples;
    double tol = kDefaultTol;
    double fd_step = kDefaultFdStep;
    std::vector<double> radii = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
    std::size_t shell_samples = 200;
    bool deduce = false;
    std::vector<std::string> falsify_properties;
    std::map<std::string, bool> expect;  // overrides of the field's declared properties
    int threads = 1;
    int chain_nmax = 12;
};

struct Report {
    std::string version = CONELAW_VERSION;
    RunConfig config;
    std::vector<Verdict> verdicts;
    std::optional<LiminfEstimate> liminf;
    std::optional<TheoremReport> theorem;
    std::vector<HessianPointDiag> hessian_rows;
    std::vector<std::string> notes;
    std::vector<std::string> mismatches;  // empty means every expectation was met
    double duration_ms = 0.0;
};

// --- JSON serialization ----------------------------------------------------

inline json to_json(const Point& p) { return json(p); }

inline json to_json(const Witness& w) {
    json j;
    json pts = json::array();
    for (const auto& p : w.points) pts.push_back(p);
    j["points"] = std::move(pts);
    if (w.lambda) j["lambda"] = *w.lambda;
    j["values"] = w.values;
    j["violation"] = w.violation;
    return j;
}

inline json to_json(const Verdict& v) {
    json j;
    j["property"] = to_string(v.property);
    j["status"] = to_string(v.status);
    j["samples"] = v.samples_checked;
    j["skipped"] = v.samples_skipped;
    if (std::isfinite(v.worst_margin)) {
        j["worst_margin"] = v.worst_margin;
        j["worst_scale"] = v.worst_scale;
    }
    if (v.witness) j["witness"] = to_json(*v.witness);
    return j;
}

inline json to_json(const LiminfEstimate& e) {
    json j;
    j["radii"] = e.radii;
    json infima = json::array();
    for (double v : e.shell_infima) {
        if (std::isfinite(v)) infima.push_back(v);
        else infima.push_back(nullptr);
    }
    j["infima"] = std::move(infima);
    j["classification"] = to_string(e.classification);
    return j;
}

inline json to_json(const TheoremReport& t) {
    json j;
    j["rule"] = to_string(t.rule);
    j["given"] = json::array({to_json(t.given_a), to_json(t.given_b)});
    if (t.deduced_property) {
        j["deduced"] = {{"property", to_string(*t.deduced_property)},
                        {"expected", t.deduced_expected}};
    }
    if (!t.note.empty()) j["note"] = t.note;
    json chain = json::array();
    for (const auto& v : t.chain_evidence) chain.push_back(to_json(v));
    j["chain"] = std::move(chain);
    return j;
}

inline json region_description(const Region& r) {
    json j;
    j["dimension"] = r.dimension();
    j["axis_signs"] = r.cone().axis_signs();
    j["constraint"] = r.constrained() ? json(r.constraint_name()) : json(nullptr);
    return j;
}

inline json to_json(const RunConfig& cfg) {
    json j;
    j["field"] = {{"name", cfg.field.name},
                  {"c", cfg.field.c},
                  {"slope_mode", cfg.field.slope_mode == SlopeMode::Tangent ? "tangent" : "squared"},
                  {"dim", cfg.field.dim},
                  {"Q", cfg.field.Q},
                  {"coeffs", cfg.field.coeffs},
                  {"negate", cfg.field.negate_field}};
    j["properties"] = cfg.properties;
    j["samples"] = {{"seed", cfg.samples.seed},
                    {"count", cfg.samples.count},
                    {"range_min", cfg.samples.range_min},
                    {"range_max", cfg.samples.range_max},
                    {"distribution",
                     cfg.samples.distribution == ScaleDistribution::LogUniform ? "log-uniform"
                                                                               : "uniform"}};
    j["tol"] = cfg.tol;
    j["fd_step"] = cfg.fd_step;
    j["radii"] = cfg.radii;
    j["shell_samples"] = cfg.shell_samples;
    j["deduce"] = cfg.deduce;
    j["falsify"] = cfg.falsify_properties;
    j["expect"] = cfg.expect;
    j["threads"] = cfg.threads;
    j["chain_nmax"] = cfg.chain_nmax;
    return j;
}

inline json to_json(const Report& r) {
    json j;
    j["version"] = r.version;
    j["config"] = to_json(r.config);
    try {
        j["config"]["region"] = region_description(resolve_field(r.config.field).region);
    } catch (const std::exception&) {
        // unknown field specs still serialize without a region block
    }
    json verdicts = json::array();
    for (const auto& v : r.verdicts) verdicts.push_back(to_json(v));
    j["verdicts"] = std::move(verdicts);
    if (r.liminf) j["liminf"] = to_json(*r.liminf);
    if (r.theorem) j["theorem"] = to_json(*r.theorem);
    if (!r.hessian_rows.empty()) {
        json rows = json::array();
        for (const auto& h : r.hessian_rows) {
            json row;
            row["point"] = h.point;
            row["value"] = h.value;
            json d2 = json::array();
            for (double v : h.second_derivatives)
                d2.push_back(std::isfinite(v) ? json(v) : json(nullptr));
            row["second_derivatives"] = std::move(d2);
            if (h.mixed_partial) row["mixed_partial"] = *h.mixed_partial;
            if (h.determinant_diag) row["determinant_diag"] = *h.determinant_diag;
            rows.push_back(std::move(row));
        }
        j["hessian"] = std::move(rows);
    }
    j["notes"] = r.notes;
    j["mismatches"] = r.mismatches;
    j["duration_ms"] = r.duration_ms;
    return j;
}

// --- suite orchestration ----------------------------------------------------

namespace detail {

inline std::map<PropertyId, bool> effective_expectations(const ScalarField& f,
                                                         const std::map<std::string, bool>& expect) {
    auto out = f.declared;
    for (const auto& [name, value] : expect) {
        const auto id = property_from_string(name);
        if (!id) throw UsageError("unknown property '" + name + "' in expectation override");
        out[*id] = value;
    }
    return out;
}

inline void compare_expectation(const Verdict& v, const std::map<PropertyId, bool>& expected,
                                std::vector<std::string>& mismatches, const std::string& origin) {
    const auto it = expected.find(v.property);
    if (it == expected.end()) return;
    const Status want = it->second ? Status::Satisfied : Status::Falsified;
    if (v.status != want) {
        mismatches.push_back(std::string(to_string(v.property)) + " " + origin + ": expected " +
                             to_string(want) + ", measured " + to_string(v.status));
    }
}

}  // namespace detail

inline Report run_suite(const RunConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    Report report;
    report.config = cfg;

    const ScalarField field = resolve_field(cfg.field);
    const auto expected = detail::effective_expectations(field, cfg.expect);

    // verdicts produced by direct property checks, used for deduction input
    std::map<PropertyId, Verdict> direct;

    auto need_liminf = [&]() -> const LiminfEstimate& {
        if (!report.liminf)
            report.liminf = estimate_apex_liminf(field, cfg.radii, cfg.shell_samples,
                                                 cfg.samples.seed, cfg.tol);
        return *report.liminf;
    };

    for (const auto& token : cfg.properties) {
        if (token == "H") {
            Verdict v = check_homogeneity(field, cfg.samples, {0.5, 1.0, 2.0, 10.0}, cfg.tol);
            direct[PropertyId::H] = v;
            report.verdicts.push_back(std::move(v));
        } else if (token == "Sp") {
            Verdict v = check_superadditivity(field, cfg.samples, cfg.tol, false, cfg.threads);
            direct[PropertyId::Sp] = v;
            report.verdicts.push_back(std::move(v));
        } else if (token == "SpStrict") {
            report.verdicts.push_back(
                check_superadditivity(field, cfg.samples, cfg.tol, true, cfg.threads));
        } else if (token == "Cc") {
            Verdict v = check_concavity(field, cfg.samples, default_concavity_lambdas(), cfg.tol,
                                        cfg.threads);
            direct[PropertyId::Cc] = v;
            report.verdicts.push_back(std::move(v));
        } else if (token == "CcStrict") {
            const auto points = sample_region(field.region, cfg.samples);
            const auto hess = check_concavity_hessian(field, points, cfg.fd_step);
            report.hessian_rows = hess.rows;
            Verdict v;
            v.property = PropertyId::CcStrict;
            v.samples_checked = hess.verdict.samples_checked;
            v.samples_skipped = hess.verdict.samples_skipped;
            v.worst_margin = hess.verdict.worst_margin;
            v.worst_scale = hess.verdict.worst_scale;
            // strictness fails on any convex direction or degenerate determinant
            bool strict_ok = hess.verdict.status == Status::Satisfied;
            const double eps = 1e-4;
            for (const auto& row : hess.rows) {
                const double level = eps * (1.0 + std::abs(row.value));
                for (double d2 : row.second_derivatives)
                    if (std::isfinite(d2) && d2 > -level) strict_ok = false;
                if (row.determinant_diag && *row.determinant_diag > -level * level)
                    strict_ok = false;
            }
            v.status = hess.verdict.status == Status::Inconclusive
                           ? Status::Inconclusive
                           : (strict_ok ? Status::Satisfied : Status::Falsified);
            report.verdicts.push_back(std::move(v));
        } else if (token == "liminf") {
            need_liminf();
        } else if (token == "chain") {
            const auto chain = check_homogeneity_chain(field, cfg.samples, cfg.chain_nmax, cfg.tol);
            report.verdicts.push_back(chain.chain23);
            report.verdicts.push_back(chain.chain27);
            report.verdicts.push_back(chain.chain28);
        } else if (token == "ratio") {
            std::vector<double> grid;
            for (int i = 0; i <= 48; ++i)
                grid.push_back(cfg.samples.range_min *
                               std::pow(cfg.samples.range_max / cfg.samples.range_min, i / 48.0));
            report.verdicts.push_back(check_ratio_constancy_1d(field, grid, cfg.tol).verdict);
        } else {
            throw UsageError("unknown property '" + token +
                             "'; valid: H, Sp, SpStrict, Cc, CcStrict, liminf, chain, ratio");
        }
    }

    for (const auto& token : cfg.falsify_properties) {
        const auto id = property_from_string(token);
        if (!id || (*id != PropertyId::H && *id != PropertyId::Sp && *id != PropertyId::Cc))
            throw UsageError("--falsify accepts H, Sp or Cc");
        SearchBudget budget;
        budget.seed = cfg.samples.seed;
        report.verdicts.push_back(
            falsify(field, *id, budget, cfg.tol, {cfg.samples.range_min, cfg.samples.range_max},
                    cfg.threads));
    }

    if (cfg.deduce) {
        if (!field.open_cone_domain) {
            report.notes.push_back(
                "field domain is not an open cone; theorem deduction not applicable");
        } else {
            const auto& liminf = need_liminf();
            auto has = [&](PropertyId id, Status s) {
                const auto it = direct.find(id);
                return it != direct.end() && it->second.status == s;
            };
            std::optional<std::pair<PropertyId, PropertyId>> pick;
            if (has(PropertyId::Sp, Status::Satisfied) && has(PropertyId::Cc, Status::Satisfied))
                pick = {PropertyId::Sp, PropertyId::Cc};
            else if (has(PropertyId::Sp, Status::Satisfied) && has(PropertyId::H, Status::Falsified))
                pick = {PropertyId::Sp, PropertyId::H};
            else if (has(PropertyId::H, Status::Satisfied) && has(PropertyId::Sp, Status::Satisfied))
                pick = {PropertyId::H, PropertyId::Sp};
            else if (has(PropertyId::H, Status::Satisfied) && has(PropertyId::Cc, Status::Satisfied))
                pick = {PropertyId::H, PropertyId::Cc};
            else {
                // fall back to any two definite verdicts
                std::vector<PropertyId> definite;
                for (const auto& [id, v] : direct)
                    if (v.status != Status::Inconclusive) definite.push_back(id);
                if (definite.size() >= 2) pick = {definite[0], definite[1]};
            }
            if (!pick) {
                report.notes.push_back(
                    "deduction needs definite verdicts for two of H, Sp, Cc; run more checks");
            } else {
                report.theorem = deduce_third_property(field, cfg.samples, direct[pick->first],
                                                       direct[pick->second], liminf,
                                                       cfg.chain_nmax, cfg.tol);
            }
        }
    }

    // expectation bookkeeping: measured verdicts vs declared (or overridden) truth
    for (const auto& v : report.verdicts)
        detail::compare_expectation(v, expected, report.mismatches, "check");
    if (report.liminf) {
        const auto it = expected.find(PropertyId::LiminfOK);
        if (it != expected.end()) {
            const bool ok = report.liminf->classification == LiminfClass::BoundedBelowByZero;
            const bool fails = report.liminf->classification == LiminfClass::NegativeFinite ||
                               report.liminf->classification == LiminfClass::DivergesToNegInfinity;
            if (it->second ? !ok : !fails)
                report.mismatches.push_back(
                    std::string("LiminfOK: expected ") + (it->second ? "bounded" : "failing") +
                    ", measured " + to_string(report.liminf->classification));
        }
    }
    if (report.theorem && report.theorem->deduced_property) {
        const auto it = direct.find(*report.theorem->deduced_property);
        if (it != direct.end() && it->second.status != Status::Inconclusive) {
            const bool measured = it->second.status == Status::Satisfied;
            if (measured != report.theorem->deduced_expected)
                report.mismatches.push_back(
                    std::string("deduction contradicts direct measurement of ") +
                    to_string(*report.theorem->deduced_property));
        }
    }

    report.duration_ms = std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - t0)
                             .count();
    return report;
}

// --- emitters ----------------------------------------------------------------

enum class ReportFormat { Json, CsvWitnesses, HumanText };

inline std::string format_g17(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string symbolic_rule(DeductionRule r) {
    switch (r) {
        case DeductionRule::HSp_implies_Cc: return "H ∧ Sp ⇒ Cc";
        case DeductionRule::HCc_implies_Sp: return "H ∧ Cc ⇒ Sp";
        case DeductionRule::SpCc_liminf_implies_H: return "Sp ∧ Cc ∧ liminf≥0 ⇒ H";
        case DeductionRule::Sp_notH_liminf_implies_notCc:
            return "Sp ∧ ¬H ∧ liminf≥0 ⇒ ¬Cc";
        case DeductionRule::Inapplicable: return "no rule applies";
    }
    return "?";
}

inline std::string emit_report(const Report& r, ReportFormat format) {
    if (format == ReportFormat::Json) return to_json(r).dump(2) + "\n";

    if (format == ReportFormat::CsvWitnesses) {
        std::ostringstream out;
        out << "property,points,lambda,values,violation\n";
        auto emit_witness = [&out](PropertyId prop, const Witness& w) {
            out << to_string(prop) << ",";
            for (std::size_t i = 0; i < w.points.size(); ++i) {
                if (i) out << "|";
                for (std::size_t k = 0; k < w.points[i].size(); ++k) {
                    if (k) out << ";";
                    out << format_g17(w.points[i][k]);
                }
            }
            out << ",";
            if (w.lambda) out << format_g17(*w.lambda);
            out << ",";
            for (std::size_t i = 0; i < w.values.size(); ++i) {
                if (i) out << ";";
                out << format_g17(w.values[i]);
            }
            out << "," << format_g17(w.violation) << "\n";
        };
        for (const auto& v : r.verdicts)
            if (v.witness) emit_witness(v.property, *v.witness);
        return out.str();
    }

    std::ostringstream out;
    out << "conelaw " << r.version << " — field " << r.config.field.name << "\n";
    for (const auto& v : r.verdicts) {
        out << "  " << to_string(v.property) << ": " << to_string(v.status) << " ("
            << v.samples_checked << " samples, " << v.samples_skipped << " skipped";
        if (std::isfinite(v.worst_margin))
            out << ", worst margin " << format_g17(v.worst_margin);
        out << ")\n";
        if (v.witness) {
            out << "      witness: ";
            for (std::size_t i = 0; i < v.witness->points.size(); ++i) {
                if (i) out << " , ";
                out << "(";
                for (std::size_t k = 0; k < v.witness->points[i].size(); ++k) {
                    if (k) out << ", ";
                    out << format_g17(v.witness->points[i][k]);
                }
                out << ")";
            }
            if (v.witness->lambda) out << " lambda=" << format_g17(*v.witness->lambda);
            out << " violation=" << format_g17(v.witness->violation) << "\n";
        }
    }
    if (r.liminf) {
        out << "  liminf: " << to_string(r.liminf->classification) << " — shell infima:";
        for (double v : r.liminf->shell_infima) out << " " << format_g17(v);
        out << "\n";
    }
    if (r.theorem) {
        out << "  deduction: " << symbolic_rule(r.theorem->rule);
        if (r.theorem->deduced_property) {
            out << " — " << to_string(*r.theorem->deduced_property) << " expected "
                << (r.theorem->deduced_expected ? "to hold" : "to fail");
        }
        if (!r.theorem->note.empty()) out << " (" << r.theorem->note << ")";
        out << "\n";
    }
    for (const auto& n : r.notes) out << "  note: " << n << "\n";
    if (r.mismatches.empty()) {
        out << "  all expectations met\n";
    } else {
        for (const auto& m : r.mismatches) out << "  MISMATCH: " << m << "\n";
    }
    return out.str();
}

}  // namespace conelaw
