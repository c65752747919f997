// Acceptance suite: one criterion per section, one pass/fail line each.
// Exercises the library end to end (counterexample battery, slope-mode
// fidelity, black-hole and photon-gas physics, d = 1 triviality, the proof
// chain, exact convergents) and the CLI contract (deterministic JSON,
// witness re-validation, exit codes).

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "conelaw/conelaw.hpp"

using namespace conelaw;
using nlohmann::json;

namespace {

constexpr double kLn2 = 0.6931471805599453;
constexpr double kPi = 3.14159265358979323846;

int g_failures = 0;

struct Check {
    int failures = 0;
    std::vector<std::string> notes;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            ++failures;
            notes.push_back(what);
        }
    }
    void close(double got, double want, double tol, const std::string& what) {
        std::ostringstream msg;
        msg << what << " (got " << got << ", want " << want << " +- " << tol << ")";
        require(std::abs(got - want) <= tol, msg.str());
    }
};

void criterion(int number, const std::string& title, const std::function<void(Check&)>& body) {
    Check c;
    try {
        body(c);
    } catch (const std::exception& e) {
        ++c.failures;
        c.notes.push_back(std::string("unexpected exception: ") + e.what());
    }
    std::printf("criterion %d [%s] %s\n", number, c.failures == 0 ? "PASS" : "FAIL",
                title.c_str());
    for (const auto& n : c.notes) std::printf("    - %s\n", n.c_str());
    std::fflush(stdout);
    g_failures += c.failures;
}

SampleConfig cfg_of(std::size_t count, double lo, double hi, std::uint64_t seed = 42) {
    SampleConfig cfg;
    cfg.count = count;
    cfg.range_min = lo;
    cfg.range_max = hi;
    cfg.seed = seed;
    return cfg;
}

// 1e5 superadditivity pairs for f0 split across the three regimes of the
// case analysis: both below the junction with a small sum, exactly one
// above, and both above.
std::vector<std::pair<Point, Point>> regime_pairs(double c) {
    const double j = 2.0 / c;
    const Region half_line(OrthantCone::positive(1));
    std::vector<std::pair<Point, Point>> pairs;
    pairs.reserve(100000);
    // both-small: each below j/2, so the sum stays below the junction
    for (auto& p : sample_pairs_additive(half_line, cfg_of(34000, j * 1e-4, j * 0.4999, 11)))
        pairs.push_back(std::move(p));
    // mixed: one on each side of the junction
    {
        const auto lows = sample_region(half_line, cfg_of(33000, j * 1e-4, j * 0.999, 12));
        const auto highs = sample_region(half_line, cfg_of(33000, j * 1.001, j * 100.0, 13));
        for (std::size_t i = 0; i < lows.size(); ++i) pairs.emplace_back(lows[i], highs[i]);
    }
    // both-large
    for (auto& p : sample_pairs_additive(half_line, cfg_of(33000, j * 1.001, j * 100.0, 14)))
        pairs.push_back(std::move(p));
    return pairs;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cli(const std::string& args, const std::string& capture_path = "") {
    std::string cmd = std::string(CONELAW_CLI_PATH) + " " + args;
    if (!capture_path.empty())
        cmd += " > " + capture_path + " 2>&1";
    else
        cmd += " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

Witness witness_from_json(const json& w) {
    Witness out;
    for (const auto& p : w.at("points")) out.points.push_back(p.get<Point>());
    if (w.contains("lambda")) out.lambda = w["lambda"].get<double>();
    if (w.contains("values")) out.values = w["values"].get<std::vector<double>>();
    out.violation = w.at("violation").get<double>();
    return out;
}

}  // namespace

int main() {
    criterion(1, "f0 counterexample battery (Sp, Cc, not-H, diverging liminf)", [](Check& c) {
        for (double cc : {0.5, 1.0, 2.0}) {
            const auto f0 = make_f0(cc);
            const double j = 2.0 / cc;
            const auto pairs = regime_pairs(cc);
            c.require(pairs.size() == 100000, "expected 1e5 pairs");
            std::size_t small = 0, mixed = 0, large = 0;
            for (const auto& [a, b] : pairs) {
                if (a[0] + b[0] <= j) ++small;
                else if (a[0] > j && b[0] > j) ++large;
                else ++mixed;
            }
            c.require(small >= 10000 && mixed >= 10000 && large >= 10000,
                      "each regime needs at least 1e4 pairs");
            const auto sp = check_superadditivity_pairs(f0, pairs, 1e-9);
            c.require(sp.status == Status::Satisfied, "f0 superadditivity must be satisfied");
            c.require(sp.worst_margin > 0.0, "superadditivity must show zero violations");
            c.require(sp.samples_checked == 100000, "all 1e5 pairs must be evaluated");

            const auto conc = check_concavity(f0, cfg_of(16700, 1e-2, 1e2));
            c.require(conc.samples_checked >= 100000, "need at least 1e5 concavity triples");
            c.require(conc.status == Status::Satisfied, "f0 concavity must be satisfied");
        }

        const auto f0 = make_f0(1.0);
        const auto h = check_homogeneity(f0, cfg_of(2000, 1e-2, 1e2));
        c.require(h.status == Status::Falsified, "f0 homogeneity must be falsified");
        c.require(h.witness && h.witness->violation >= kLn2 - 1e-6,
                  "homogeneity violation must reach log 2");

        const std::vector<double> radii{1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
        const auto liminf = estimate_apex_liminf(f0, radii, 200, 42);
        c.require(liminf.classification == LiminfClass::DivergesToNegInfinity,
                  "f0 liminf must diverge to -infinity");
        c.close(liminf.shell_infima[4], -11.512925464970229, 0.5, "1e-5 shell infimum");

        // the d = 2 sum field passes the same battery
        const auto f2 = make_f0_multi(1.0, 2);
        const auto sp2 = check_superadditivity_pairs(
            f2, sample_pairs_additive(f2.region, cfg_of(100000, 1e-2, 1e2)), 1e-9);
        c.require(sp2.status == Status::Satisfied && sp2.samples_checked == 100000,
                  "d=2 superadditivity battery");
        const auto cc2 = check_concavity(f2, cfg_of(16700, 1e-2, 1e2));
        c.require(cc2.status == Status::Satisfied && cc2.samples_checked >= 100000,
                  "d=2 concavity battery");
        const auto h2 = check_homogeneity(f2, cfg_of(2000, 1e-2, 1e2));
        c.require(h2.status == Status::Falsified, "d=2 homogeneity must be falsified");
    });

    criterion(2, "slope-mode fidelity at the junction (c = 3)", [](Check& c) {
        const double j = 2.0 / 3.0;
        const auto squared = make_f0(3.0, SlopeMode::Squared);
        const double h = 1e-6 * std::max(1.0, j);
        const double left = (squared.eval(Point{j}) - squared.eval(Point{j - h})) / h;
        const double right = (squared.eval(Point{j + h}) - squared.eval(Point{j})) / h;
        c.close(std::abs(right - left), 0.75, 1e-3, "one-sided derivative jump |3/2 - 9/4|");

        SearchBudget budget;
        budget.random_probes = 4000;
        const auto bad = falsify(squared, PropertyId::Cc, budget);
        c.require(bad.status == Status::Falsified,
                  "squared mode must yield a concavity witness");
        if (bad.witness) {
            const double re = recompute_violation(squared, PropertyId::Cc, *bad.witness);
            c.require(std::abs(re - bad.witness->violation) <= 1e-12 * (1.0 + re),
                      "witness must re-validate");
        }

        const auto tangent = make_f0(3.0, SlopeMode::Tangent);
        const auto conc = check_concavity(tangent, cfg_of(4000, 1e-2, 1e2));
        c.require(conc.status == Status::Satisfied, "tangent mode at c = 3 must pass Cc");
    });

    criterion(3, "bekenstein-hawking entropy (Q = 0)", [](Check& c) {
        const auto S = make_bh_entropy(0.0);
        // closed-form agreement at (1, 0.5); the exact value of
        // pi (2 + 2 sqrt(0.75)) is 11.724583399882238
        const double formula = kPi * (2.0 + 2.0 * std::sqrt(1.0 - 0.25));
        const double got = S.eval(Point{1.0, 0.5});
        c.require(std::abs(got - formula) <= 1e-12 * std::abs(formula),
                  "evaluation must match the closed form to 1e-12 relative");
        c.close(got, 11.724583399882238, 1e-4, "value at (1, 0.5)");

        const auto strict = check_superadditivity(S, cfg_of(100000, 1e-2, 1e2), 1e-9, true);
        c.require(strict.status == Status::Satisfied, "strict superadditivity on 1e5 pairs");
        c.require(strict.worst_margin > 0.0, "minimum strict margin must be positive");
        c.require(strict.samples_checked >= 100000, "need at least 1e5 pairs");

        // d2S/dM2 >= 4 at 100 sampled points with boundary clearance
        SplitMix64 gen(substream_seed(42, 0xACC));
        std::vector<Point> pts;
        while (pts.size() < 100) {
            const double M = gen.log_uniform(0.1, 10.0);
            const double u = gen.uniform(0.05, 0.5);
            pts.push_back(Point{M, u * M * M});
        }
        const auto hess = check_concavity_hessian(S, pts);
        c.require(hess.rows.size() == 100, "all 100 points must have clearance");
        for (const auto& row : hess.rows)
            if (!(row.second_derivatives[0] >= 4.0 * (1.0 - 1e-3))) {
                c.require(false, "d2S/dM2 fell below 4 at a sampled point");
                break;
            }
        c.require(hess.verdict.status == Status::Falsified,
                  "necessary condition for concavity must fail");

        const auto limit = check_concavity_hessian(S, {Point{1.0, 1e-6}});
        c.close(limit.rows.at(0).second_derivatives.at(0), 8.0 * kPi, 0.01,
                "d2S/dM2 at (1, 1e-6)");

        SearchBudget budget;
        const auto cc = falsify(S, PropertyId::Cc, budget);
        c.require(cc.status == Status::Falsified, "falsifier must find a concavity witness");
        if (cc.witness) {
            const double re = recompute_violation(S, PropertyId::Cc, *cc.witness);
            c.require(std::abs(re - cc.witness->violation) <= 1e-12 * (1.0 + re),
                      "concavity witness must re-validate");
        }

        const auto sp = check_superadditivity(S, cfg_of(20000, 1e-2, 1e2));
        const auto h = check_homogeneity(S, cfg_of(5000, 1e-2, 1e2));
        const std::vector<double> radii{1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
        const auto liminf = estimate_apex_liminf(S, radii, 200, 42);
        c.require(liminf.classification == LiminfClass::BoundedBelowByZero,
                  "bekenstein liminf holds");
        const auto ded = deduce_third_property(sp, h, liminf);
        c.require(ded.rule == DeductionRule::Sp_notH_liminf_implies_notCc,
                  "contrapositive rule must fire");
        c.require(ded.deduced_property && *ded.deduced_property == PropertyId::Cc &&
                      !ded.deduced_expected,
                  "deduction must expect concavity to fail");
    });

    criterion(4, "photon gas (exact H, concave, degenerate determinant)", [](Check& c) {
        const auto s = make_photon_entropy();
        const auto h = check_homogeneity(s, cfg_of(2500, 1e-2, 1e2));
        c.require(h.samples_checked >= 10000, "need 1e4 homogeneity samples");
        c.require(h.status == Status::Satisfied, "homogeneity must be satisfied");
        c.require(std::abs(h.worst_margin) <= 1e-12 * h.worst_scale,
                  "homogeneity must hold to 1e-12 relative");

        const auto conc = check_concavity(s, cfg_of(10000, 1e-2, 1e2));
        c.require(conc.status == Status::Satisfied, "concavity must be satisfied");

        // degenerate hessian determinant at 100 points near unit scale
        const auto pts = sample_region(s.region, cfg_of(100, 0.5, 2.0));
        const auto hess = check_concavity_hessian(s, pts, 3e-4);
        c.require(hess.rows.size() == 100, "all 100 hessian points evaluated");
        for (const auto& row : hess.rows) {
            if (!row.determinant_diag || std::abs(*row.determinant_diag) > 1e-6) {
                c.require(false, "determinant diagnostic must vanish to 1e-6");
                break;
            }
        }

        const std::vector<double> radii{1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
        const auto liminf = estimate_apex_liminf(s, radii, 200, 42);
        const auto ded = deduce_third_property(h, conc, liminf);
        c.require(ded.rule == DeductionRule::HCc_implies_Sp && ded.deduced_expected,
                  "H and Cc must deduce Sp");
        const auto sp = check_superadditivity(s, cfg_of(100000, 1e-2, 1e2));
        c.require(sp.status == Status::Satisfied && sp.samples_checked >= 100000,
                  "direct superadditivity confirms the deduction on 1e5 pairs");

        // strictness dies on the equal-argument family
        std::vector<std::pair<Point, Point>> diag;
        for (const auto& x : sample_region(s.region, cfg_of(100, 1e-2, 1e2)))
            diag.emplace_back(x, x);
        const auto strict = check_superadditivity_pairs(s, diag, 1e-9, true);
        c.require(strict.status == Status::Falsified, "strict Sp must fail on equal arguments");
        c.require(strict.witness && std::abs(strict.witness->violation) <= 1e-12,
                  "the strict failure is an equality, not a reversal");
    });

    criterion(5, "d = 1 triviality (linear passes, sqrt and f0 fail the ratio test)",
              [](Check& c) {
        std::vector<double> grid;
        for (int i = 0; i <= 48; ++i) grid.push_back(1e-2 * std::pow(1e4, i / 48.0));

        for (const auto& coeffs : {std::vector<double>{3.0}, std::vector<double>{0.25}}) {
            const auto lin = make_linear(coeffs);
            const auto h = check_homogeneity(lin, cfg_of(2000, 1e-2, 1e2));
            const auto sp = check_superadditivity(lin, cfg_of(2000, 1e-2, 1e2));
            const auto cc = check_concavity(lin, cfg_of(2000, 1e-2, 1e2));
            c.require(h.status == Status::Satisfied &&
                          std::abs(h.worst_margin) <= 1e-12 * h.worst_scale,
                      "linear H with equality margins");
            c.require(sp.status == Status::Satisfied &&
                          std::abs(sp.worst_margin) <= 1e-12 * sp.worst_scale,
                      "linear Sp with equality margins");
            c.require(cc.status == Status::Satisfied &&
                          std::abs(cc.worst_margin) <= 1e-12 * cc.worst_scale,
                      "linear Cc with equality margins");
            const auto ratio = check_ratio_constancy_1d(lin, grid);
            c.require(ratio.verdict.status == Status::Satisfied, "linear ratio is constant");
        }

        ScalarField root;
        root.name = "sqrt";
        root.region = Region(OrthantCone::positive(1));
        root.eval = [](const Point& p) { return std::sqrt(p[0]); };
        const auto r = check_ratio_constancy_1d(root, grid);
        c.require(r.verdict.status == Status::Falsified, "sqrt ratio is not constant");
        c.require(r.nonincreasing_fraction == 1.0, "sqrt ratio is 100% nonincreasing");

        const auto f = check_ratio_constancy_1d(make_f0(1.0), grid);
        c.require(f.verdict.status == Status::Falsified, "f0 ratio is not constant");
    });

    criterion(6, "proof-chain checks on the photon field", [](Check& c) {
        const auto s = make_photon_entropy();
        const auto chain = check_homogeneity_chain(s, cfg_of(1700, 1e-2, 1e2), 12);
        c.require(chain.chain23.samples_checked >= 10000, "chain23 needs 1e4 samples");
        c.require(chain.chain23.status == Status::Satisfied, "chain23 holds");
        c.require(chain.chain23.worst_margin >= -1e-9 * chain.chain23.worst_scale,
                  "chain23 margins within 1e-9 of zero");
        c.require(chain.chain27.status == Status::Satisfied, "chain27 holds for n <= 12");
        c.require(std::abs(chain.chain27.worst_margin) <= 1e-9 * chain.chain27.worst_scale,
                  "chain27 equality margins");
        c.require(chain.chain28.status == Status::Satisfied,
                  "chain28 holds for coprime m,n <= 12");
        c.require(std::abs(chain.chain28.worst_margin) <= 1e-9 * chain.chain28.worst_scale,
                  "chain28 equality margins");

        const auto table = check_irrational_scaling(s, std::sqrt(2.0), Point{1.0, 1.0}, 12);
        const double expected[] = {0.41421356237309515, 0.08578643762690485,
                                   0.014213562373095234, 0.002453104293571595,
                                   0.00042045892481934466};
        c.require(table.rows.size() >= 5, "need at least five convergent rows");
        for (std::size_t i = 0; i < 5 && i < table.rows.size(); ++i)
            c.close(table.rows[i].limit_error, expected[i], 1e-3, "convergent error");
        bool decreasing = true;
        for (std::size_t i = 1; i < table.rows.size(); ++i)
            if (!(table.rows[i].limit_error < table.rows[i - 1].limit_error)) decreasing = false;
        c.require(decreasing, "convergent errors must decrease strictly");
    });

    criterion(7, "continued-fraction convergents are exact", [](Check& c) {
        const auto cs = cf::convergents(std::sqrt(2.0), 5);
        const std::int64_t want_p[] = {1, 3, 7, 17, 41};
        const std::int64_t want_q[] = {1, 2, 5, 12, 29};
        c.require(cs.size() == 5, "five convergents requested");
        for (std::size_t i = 0; i < cs.size(); ++i)
            c.require(cs[i].p == want_p[i] && cs[i].q == want_q[i],
                      "sqrt(2) convergents must be 1/1, 3/2, 7/5, 17/12, 41/29");

        const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
        for (double lambda : {std::sqrt(2.0), phi, kPi}) {
            const auto all = cf::convergents(lambda, 64);
            std::int64_t deepest = 0;
            for (std::size_t k = 0; k < all.size(); ++k) {
                if (all[k].q > 1'000'000) break;
                deepest = all[k].q;
                if (k == 0) continue;
                const auto det = cf::determinant(all[k], all[k - 1]);
                c.require(det == ((k % 2 == 1) ? 1 : -1), "determinant identity");
                const long double v = static_cast<long double>(all[k].p) / all[k].q;
                const long double prev = static_cast<long double>(all[k - 1].p) / all[k - 1].q;
                const bool below = v < static_cast<long double>(lambda);
                const bool prev_below = prev < static_cast<long double>(lambda);
                c.require(below != prev_below, "alternating enclosure");
            }
            c.require(deepest > 100'000, "convergents reach deep denominators below 1e6");
        }
    });

    criterion(8, "tooling determinism, witness re-validation, exit codes", [](Check& c) {
        const std::string base =
            "--field bekenstein --properties Sp,H,liminf --deduce --falsify Cc "
            "--samples 500 --shell-samples 80 --format json";

        c.require(run_cli(base + " --out acc_run_a.json") == 0, "bekenstein run must exit 0");
        c.require(run_cli(base + " --out acc_run_b.json") == 0, "second run must exit 0");
        json a = json::parse(read_file("acc_run_a.json"));
        json b = json::parse(read_file("acc_run_b.json"));
        a.erase("duration_ms");
        b.erase("duration_ms");
        c.require(a.dump() == b.dump(),
                  "identical configs must produce byte-identical reports (wall clock aside)");

        // worker count must not change any reported number
        c.require(run_cli(base + " --threads 4 --out acc_run_t.json") == 0,
                  "threaded run must exit 0");
        json t = json::parse(read_file("acc_run_t.json"));
        t.erase("duration_ms");
        json a_threads = a;
        a_threads["config"]["threads"] = 4;
        c.require(t.dump() == a_threads.dump(),
                  "reports must be bit-stable regardless of worker count");

        // every falsified witness in the report re-validates independently
        const auto S = make_bh_entropy(0.0);
        std::size_t revalidated = 0;
        for (const auto& v : a["verdicts"]) {
            if (v["status"] != "falsified" || !v.contains("witness")) continue;
            const auto id = property_from_string(v["property"].get<std::string>());
            c.require(id.has_value(), "witness property must parse");
            if (!id) continue;
            const Witness w = witness_from_json(v["witness"]);
            const double re = recompute_violation(S, *id, w);
            c.require(std::abs(re - w.violation) <= 1e-12 * (1.0 + re),
                      "witness violation must reproduce from the report");
            ++revalidated;
        }
        c.require(revalidated >= 2, "expected falsified H and Cc witnesses in the report");

        // exit-code matrix
        c.require(run_cli("--field photon --samples 300 --shell-samples 60") == 0,
                  "photon with declared expectations exits 0");
        c.require(run_cli("--field photon --samples 300 --shell-samples 60 --expect H=false") == 1,
                  "a deliberately wrong expectation exits 1");
        c.require(run_cli("--field photon --no-such-flag") == 2, "a bad flag exits 2");
        c.require(run_cli("--field no-such-field") == 2, "an unknown field exits 2");
        c.require(run_cli("--field photon --properties Nope --samples 10") == 2,
                  "an unknown property exits 2");
        c.require(run_cli("--field photon --properties H --samples 10 "
                          "--out /nonexistent-dir/report.json") == 2,
                  "an unwritable output path exits 2");

        // the CONELAW_SEED environment variable overrides --seed
        const int env_rc = std::system((std::string("CONELAW_SEED=99 ") + CONELAW_CLI_PATH +
                                        " --field photon --properties H --samples 50 "
                                        "--format json --out acc_env.json > /dev/null 2>&1")
                                           .c_str());
        c.require(WIFEXITED(env_rc) && WEXITSTATUS(env_rc) == 0, "env-seeded run exits 0");
        const json env_report = json::parse(read_file("acc_env.json"));
        c.require(env_report["config"]["samples"]["seed"] == 99,
                  "CONELAW_SEED must override the seed");

        std::remove("acc_run_a.json");
        std::remove("acc_run_b.json");
        std::remove("acc_run_t.json");
        std::remove("acc_env.json");
    });

    std::printf("%s: %d failure(s)\n", g_failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL",
                g_failures);
    return g_failures == 0 ? 0 : 1;
}
