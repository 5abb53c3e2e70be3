// maxprod — construct the jointly-maximal product pair for a doubling weight,
// evaluate it, and run the verification suites.
//
// Exit codes: 0 pass, 1 property failure, 2 usage error, 3 numeric-range
// shortfall.

#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "maxprod/analysis.hpp"

using namespace maxprod;
using ordered_json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitPropertyFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitRangeShortfall = 3;

std::string sanitize(const std::string& s) {
    std::string out;
    for (char c : s) out += (std::isalnum((unsigned char)c) || c == '.' || c == '-') ? c : '_';
    return out;
}

struct CommonOpts {
    std::string weight;
    double gamma = 0.0;
    std::size_t K = 24;
    double tol = 1e-9;
    std::string out_dir = "out";
    std::string construction_file;
};

struct BuildResult {
    Weight w;
    DoublingCertificate cert;
    Construction c;
};

BuildResult make_construction(const CommonOpts& opt) {
    BuildResult br{Weight::parse(opt.weight), {}, {}};
    if (!opt.construction_file.empty() && fs::exists(opt.construction_file)) {
        br.c = load_construction_file(opt.construction_file);
        br.w = Weight::parse(br.c.weight_spec);
        br.cert = certify_doubling(br.w);
        return br;
    }
    br.cert = certify_doubling(br.w);
    dd gamma = opt.gamma > 0.0 ? dd(opt.gamma) : select_gamma(br.cert);
    if (!gamma_admissible(br.cert, gamma))
        throw std::runtime_error("gamma = " + std::to_string(gamma.to_double()) +
                                 " violates the admissibility inequalities (needs "
                                 "2^{g-a}/C > 1 and the tau margin)");
    br.c = build_sequence(br.w, br.cert, gamma, opt.K);
    return br;
}

void write_validation_csv(const ValidationReport& rep, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open '" + path + "'");
    os << "k,a_k,lambda_ok,mu_ok,chain2_ok,gap_ok,marginal,chain2_lhs,chain2_rhs\n";
    char buf[256];
    for (const auto& r : rep.rows) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%d,%d,%d,%d,%d,%.17g,%.17g\n", r.k, r.a_k,
                      int(r.lambda_ok), int(r.mu_ok), int(!r.chain2_checked || r.chain2_ok),
                      int(!r.gap_checked || r.gap_ok), int(r.marginal), r.chain2_lhs,
                      r.chain2_rhs);
        os << buf;
    }
}

ordered_json ratio_report_json(const RatioReport& r) {
    ordered_json j;
    j["inf"] = r.inf;
    j["sup"] = r.sup;
    ordered_json pd;
    for (const auto& [d, iv] : r.per_decade) {
        pd[std::to_string(d)] = {{"inf", iv.first}, {"sup", iv.second}};
    }
    j["per_decade"] = pd;
    if (r.checked) {
        j["drift_inf"] = r.drift_inf;
        j["drift_sup"] = r.drift_sup;
        j["verdict"] = r.pass() ? "pass" : "fail";
    } else {
        j["verdict"] = "skipped";
        j["note"] = r.note;
    }
    return j;
}

int cmd_construct(const CommonOpts& opt) {
    auto br = make_construction(opt);
    fs::create_directories(opt.out_dir);
    std::string base = opt.out_dir + "/construction_" + sanitize(br.w.name());
    save_construction_file(br.c, base + ".txt");
    auto rep = validate_sequence(br.c);
    write_validation_csv(rep, base + "_validation.csv");
    std::printf("weight        %s\n", br.w.name().c_str());
    std::printf("certificate   B=%.12g alpha=%.12g C=%.12g (probes %zu)\n", br.cert.B,
                br.cert.alpha, br.cert.C, br.cert.probe_count);
    std::printf("gamma         %.12g\n", br.c.gamma.to_double());
    std::printf("K             %zu%s (requested %zu)\n", br.c.K(),
                br.c.truncated ? " [truncated at trusted depth]" : "", br.c.requested_K);
    std::printf("lambda,mu     %.12g, %.12g\n", br.c.lambda(), br.c.mu());
    std::printf("d,tau         %.12g, %.12g\n", br.c.d_const.to_double(), br.c.tau.to_double());
    std::printf("delta_bound   %.12g\n", delta_bound(br.c));
    std::printf("validation    %s\n", rep.pass ? "pass" : "FAIL");
    if (!rep.pass)
        std::printf("first failing k: %zu\n", rep.first_failing_k);
    std::printf("wrote %s.txt, %s_validation.csv\n", base.c_str(), base.c_str());
    return rep.pass ? kExitPass : kExitPropertyFail;
}

int cmd_verify(const CommonOpts& opt, int decades, std::int64_t angles, double delta,
               const std::string& a_probes) {
    auto br = make_construction(opt);
    fs::create_directories(opt.out_dir);
    std::string base = opt.out_dir + "/" + sanitize(br.w.name());
    save_construction_file(br.c, base + "_construction.txt");

    ordered_json summary;
    summary["weight"] = br.w.name();
    summary["gamma"] = br.c.gamma.to_double();
    summary["K"] = br.c.K();
    summary["B"] = br.cert.B;
    summary["alpha"] = br.cert.alpha;
    summary["C"] = br.cert.C;

    bool all_pass = true;

    auto vrep = validate_sequence(br.c);
    write_validation_csv(vrep, base + "_validation.csv");
    summary["verdicts"]["validation"] = vrep.pass ? "pass" : "fail";
    all_pass = all_pass && vrep.pass;

    double db = delta_bound(br.c);
    double delta_used = delta > 0.0 ? delta : db;
    if (delta > db)
        throw CLI::ValidationError("--delta", "delta exceeds delta_bound = " + std::to_string(db));
    summary["delta"] = delta_used;

    std::size_t m0 = max_interval_index(br.c, 0);
    std::size_t M = std::min(m0 > 0 ? m0 - 1 : 0, max_interval_index(br.c, 1));
    if (M >= 1) {
        auto cover = covering_check(br.c, delta_used, M);
        write_cover_csv(cover, base + "_cover.csv");
        summary["verdicts"]["covering"] = cover.pass ? "pass" : "fail";
        all_pass = all_pass && cover.pass;
    } else {
        summary["verdicts"]["covering"] = "skipped: construction too short for a covering row";
    }

    Product f0 = Product::from_construction(br.c, 0);
    Product f1 = Product::from_construction(br.c, 1);

    GridSpec gs;
    gs.decades = decades;
    gs.angles = angles;
    gs.trunc_tol = opt.tol;
    gs.delta = delta_used;
    auto rep = verify_theorem(br.c, f0, f1, br.w, gs);
    write_samples_csv(rep.r1_samples, base + "_r1_samples.csv");
    summary["reports"]["R1"] = ratio_report_json(rep.r1);
    for (const auto& [k, v] : rep.r2) summary["reports"]["R2"][k] = ratio_report_json(v);
    for (const auto& [k, v] : rep.r3) summary["reports"]["R3"][k] = ratio_report_json(v);
    summary["reports"]["chain_ok"] = rep.chain_ok;
    summary["reports"]["sup_log_ratio"] = rep.sup_log_ratio;
    summary["reports"]["ej_inf"] = {rep.ej_inf[0], rep.ej_inf[1]};
    summary["verdicts"]["theorem"] = rep.pass ? "pass" : "fail";
    if (!rep.pass) summary["fail_reason"] = rep.fail_reason;
    all_pass = all_pass && rep.pass;

    for (int j = 0; j < 2; ++j) {
        auto cb = counting_bound_check(br.c, j == 0 ? f0 : f1);
        summary["reports"]["counting_bound"][std::to_string(j)] = {
            {"min", cb.min_nns}, {"max", cb.max_nns},
            {"verdict", (cb.bounded_ok && cb.single_ok) ? "pass" : "fail"}};
        all_pass = all_pass && cb.bounded_ok && cb.single_ok;

        auto dp = density_profile(interval_system(br.c, j, delta_used));
        summary["reports"]["lower_density"][std::to_string(j)] = {
            {"positive", dp.positive}, {"tail_stable", dp.tail_stable}};
        all_pass = all_pass && dp.positive;

        auto jr = jensen_identity_check(j == 0 ? f0 : f1, 20, 1e-5, opt.tol);
        summary["reports"]["jensen"][std::to_string(j)] = {
            {"max_err", jr.max_err}, {"verdict", jr.pass ? "pass" : "fail"}};
        all_pass = all_pass && jr.pass;
    }

    // N(r, f_j, a) for the requested probes, reported per decade
    {
        ordered_json aj;
        std::vector<std::complex<double>> probes;
        std::string tok;
        std::istringstream ss(a_probes);
        while (std::getline(ss, tok, ',')) {
            if (tok.empty()) continue;
            double re = 0, im = 0;
            if (tok.back() == 'i' || tok.back() == 'I') {
                std::string body = tok.substr(0, tok.size() - 1);
                im = body.empty() || body == "+" ? 1.0 : body == "-" ? -1.0 : std::stod(body);
            } else {
                re = std::stod(tok);
            }
            probes.push_back({re, im});
        }
        for (const auto& a : probes) {
            char key[48];
            std::snprintf(key, sizeof key, "%g%+gi", a.real(), a.imag());
            ordered_json rows = ordered_json::array();
            for (int d = std::min(3, decades); d <= decades; ++d) {
                Radius r = Radius::from_ell(dd_exp(dd_ln10 * double(-d)));
                double W = br.w.log_eval_x(-dd_log(dd(r.eps))).to_double();
                for (int j = 0; j < 2; ++j) {
                    double N = integrated_counting(j == 0 ? f0 : f1, r, a, opt.tol);
                    rows.push_back({{"decade", d}, {"j", j}, {"N", N}, {"N_over_logw", N / W}});
                }
            }
            aj[key] = rows;
        }
        summary["reports"]["N_a_probes"] = aj;
    }

    summary["verdict"] = all_pass ? "pass" : "fail";
    std::ofstream js(base + "_summary.json");
    js << summary.dump(2) << "\n";
    std::printf("%s\n", summary.dump(2).c_str());
    return all_pass ? kExitPass : kExitPropertyFail;
}

int cmd_eval(const CommonOpts& opt, double eps, std::int64_t theta_num, std::int64_t theta_den) {
    if (theta_den == 0) throw CLI::ValidationError("--theta-den", "must be nonzero");
    auto br = make_construction(opt);
    Product f0 = Product::from_construction(br.c, 0);
    Product f1 = Product::from_construction(br.c, 1);
    DiscPoint z(Radius::from_eps(eps), theta_num, theta_den);
    double W = br.w.eval_log_weight(eps);
    std::printf("point         eps=%.17g theta=2pi*%lld/%lld\n", eps, (long long)z.num,
                (long long)z.den);
    for (int j = 0; j < 2; ++j) {
        const Product& p = j == 0 ? f0 : f1;
        double L = p.log_modulus(z, opt.tol);
        std::complex<double> v = p.eval(z, opt.tol);
        std::printf("f%d            %.17g %+.17gi\n", j, v.real(), v.imag());
        std::printf("log|f%d|       %.17g\n", j, L);
    }
    std::printf("log omega     %.17g\n", W);
    return kExitPass;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"jointly maximal analytic products for doubling weights"};
    app.require_subcommand(1);

    CommonOpts opt;
    int decades = 8;
    std::int64_t angles = 4096;
    double delta = 0.0;
    double eps = 1.0;
    std::int64_t theta_num = 0, theta_den = 1;
    std::string a_probes = "0,-1,2i";

    auto add_common = [&](CLI::App* sub, bool need_weight) {
        auto* w = sub->add_option("--weight", opt.weight,
                                  "weight spec: pow:beta=B | log | exploglog | prod:...");
        if (need_weight) w->required();
        sub->add_option("--gamma", opt.gamma, "growth exponent override (default: auto)");
        sub->add_option("--K", opt.K, "requested construction length")->check(CLI::Range(5, 2000));
        sub->add_option("--tol", opt.tol, "truncation tolerance")
            ->check(CLI::Range(1e-15, 0.499999));
        sub->add_option("--out", opt.out_dir, "output directory");
        sub->add_option("--construction", opt.construction_file,
                        "load a cached construction file instead of rebuilding (takes precedence over --weight)");
    };

    auto* construct = app.add_subcommand("construct", "build, validate and cache a construction");
    add_common(construct, true);

    auto* verify = app.add_subcommand("verify", "run the full verification suite");
    add_common(verify, true);
    verify->add_option("--decades", decades, "probe radii down to ell = 10^-decades")
        ->check(CLI::Range(3, 300));
    verify->add_option("--angles", angles, "base angle count per circle")
        ->check(CLI::Range(16, 1 << 22));
    verify->add_option("--delta", delta, "covering parameter (default: delta_bound)");
    verify->add_option("--a-probes", a_probes, "comma-separated a probes for N(r,f,a): real (-1) or imaginary (2i) literals");

    auto* evalc = app.add_subcommand("eval", "evaluate f0, f1 at one point");
    add_common(evalc, true);
    evalc->add_option("--eps", eps, "complement radius 1-r")->required();
    evalc->add_option("--theta-num", theta_num, "angle numerator");
    evalc->add_option("--theta-den", theta_den, "angle denominator");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (construct->parsed()) return cmd_construct(opt);
        if (verify->parsed()) return cmd_verify(opt, decades, angles, delta, a_probes);
        if (evalc->parsed()) return cmd_eval(opt, eps, theta_num, theta_den);
    } catch (const CLI::ValidationError& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return kExitUsage;
    } catch (const TruncationError& e) {
        std::fprintf(stderr, "numeric-range shortfall: %s\n", e.what());
        return kExitRangeShortfall;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitPropertyFail;
    }
    return kExitUsage;
}
