// Command-line driver: checks catalog fields for homogeneity,
// superadditivity, concavity and the apex-liminf condition, optionally
// searches for violation witnesses and applies the two-imply-the-third
// deduction. Exit code 0 when all measured verdicts match the field's
// declared (or overridden) expectations, 1 on a mismatch, 2 on usage errors.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "conelaw/conelaw.hpp"

namespace {

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

std::vector<double> parse_radii(const std::string& text) {
    // "1e-1:1e-6" expands geometrically by factor 10; a comma list is literal
    std::vector<double> out;
    if (text.find(':') != std::string::npos) {
        const auto colon = text.find(':');
        const double hi = std::stod(text.substr(0, colon));
        const double lo = std::stod(text.substr(colon + 1));
        if (!(hi > lo) || !(lo > 0.0))
            throw conelaw::UsageError("--radii expects hi:lo with hi > lo > 0");
        for (double r = hi; r >= lo * (1.0 - 1e-12); r /= 10.0) out.push_back(r);
        return out;
    }
    for (const auto& tok : split_commas(text)) out.push_back(std::stod(tok));
    return out;
}

std::map<std::string, bool> parse_expectations(const std::vector<std::string>& items) {
    std::map<std::string, bool> out;
    for (const auto& item : items) {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw conelaw::UsageError("--expect entries look like H=true or Cc=false");
        const std::string key = item.substr(0, eq);
        const std::string val = item.substr(eq + 1);
        if (val == "true" || val == "1") out[key] = true;
        else if (val == "false" || val == "0") out[key] = false;
        else throw conelaw::UsageError("--expect value must be true or false");
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"conelaw — numerical certification of homogeneity, superadditivity and "
                 "concavity on open convex cones"};
    app.set_version_flag("--version", CONELAW_VERSION);

    conelaw::RunConfig cfg;
    std::string properties = "H,Sp,Cc,liminf";
    std::string slope_mode = "tangent";
    std::string coeffs = "1";
    std::string radii = "1e-1:1e-6";
    std::string falsify;
    std::vector<std::string> expect_items;
    std::string out_path;
    std::string format = "human";

    app.add_option("--field", cfg.field.name,
                   "catalog field: f0, f0-multi, bekenstein, photon, linear, boundary-phi")
        ->required();
    app.add_option("--c", cfg.field.c, "f0 parameter c > 0");
    app.add_option("--slope-mode", slope_mode, "f0 tail slope: tangent | squared");
    app.add_option("--dim", cfg.field.dim, "dimension for f0-multi");
    app.add_option("--Q", cfg.field.Q, "charge for the bekenstein field");
    app.add_option("--coeffs", coeffs, "comma-separated coefficients for the linear field");
    app.add_flag("--negate", cfg.field.negate_field,
                 "flip the field's sign (tests subadditivity/convexity duals)");
    app.add_option("--properties", properties,
                   "comma list of H, Sp, SpStrict, Cc, CcStrict, liminf, chain, ratio");
    app.add_option("--samples", cfg.samples.count, "sample count per check");
    app.add_option("--seed", cfg.samples.seed, "RNG seed (CONELAW_SEED env overrides)");
    app.add_option("--range", [&cfg](const std::vector<std::string>& vals) {
        if (vals.size() != 2) return false;
        cfg.samples.range_min = std::stod(vals[0]);
        cfg.samples.range_max = std::stod(vals[1]);
        return true;
    }, "coordinate magnitude range (two values)")->expected(2);
    app.add_option("--tol", cfg.tol, "inequality tolerance (relative-scaled)");
    app.add_option("--fd-step", cfg.fd_step, "finite-difference step factor");
    app.add_option("--radii", radii, "liminf shells, hi:lo geometric or comma list");
    app.add_option("--shell-samples", cfg.shell_samples, "samples per liminf shell");
    app.add_flag("--deduce", cfg.deduce, "apply the two-imply-the-third deduction");
    app.add_option("--falsify", falsify, "comma list of properties to search witnesses for");
    app.add_option("--expect", expect_items,
                   "override declared expectations, e.g. --expect H=false")
        ->delimiter(',');
    app.add_option("--threads", cfg.threads, "worker threads for sample batches");
    app.add_option("--chain-nmax", cfg.chain_nmax, "largest n for the chain identities");
    app.add_option("--out", out_path, "write the report to this path instead of stdout");
    app.add_option("--format", format, "json | csv | human");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (const char* env_seed = std::getenv("CONELAW_SEED"))
            cfg.samples.seed = std::stoull(env_seed);
        cfg.properties = split_commas(properties);
        cfg.field.coeffs.clear();
        for (const auto& tok : split_commas(coeffs)) cfg.field.coeffs.push_back(std::stod(tok));
        if (slope_mode == "tangent") cfg.field.slope_mode = conelaw::SlopeMode::Tangent;
        else if (slope_mode == "squared") cfg.field.slope_mode = conelaw::SlopeMode::Squared;
        else throw conelaw::UsageError("--slope-mode must be tangent or squared");
        cfg.radii = parse_radii(radii);
        cfg.falsify_properties = split_commas(falsify);
        cfg.expect = parse_expectations(expect_items);

        conelaw::ReportFormat fmt;
        if (format == "json") fmt = conelaw::ReportFormat::Json;
        else if (format == "csv") fmt = conelaw::ReportFormat::CsvWitnesses;
        else if (format == "human") fmt = conelaw::ReportFormat::HumanText;
        else throw conelaw::UsageError("--format must be json, csv or human");

        const conelaw::Report report = conelaw::run_suite(cfg);
        const std::string rendered = conelaw::emit_report(report, fmt);

        if (out_path.empty()) {
            std::cout << rendered;
        } else {
            std::ofstream out(out_path, std::ios::binary);
            if (!out) {
                std::cerr << "error: cannot write report to '" << out_path << "'\n";
                return 2;
            }
            out << rendered;
            if (!out.good()) {
                std::cerr << "error: short write to '" << out_path << "'\n";
                return 2;
            }
        }
        return report.mismatches.empty() ? 0 : 1;
    } catch (const conelaw::UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
