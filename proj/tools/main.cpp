#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"
#include "cbnorm/channels.hpp"
#include "cbnorm/diagnostics.hpp"
#include "cbnorm/io.hpp"
#include "cbnorm/linalg.hpp"
#include "cbnorm/oracles.hpp"
#include "cbnorm/programs.hpp"
#include "cbnorm/sdp.hpp"
#include "json.hpp"

namespace {

struct CommonOpts {
    std::string input;
    double tol = 1e-8;
    int max_iter = 200;
    bool trace = false;
    bool as_json = false;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--input", o.input, "input JSON file")->required();
    cmd->add_option("--tol", o.tol, "solver tolerance")->check(CLI::PositiveNumber);
    cmd->add_option("--max-iter", o.max_iter, "iteration cap")->check(CLI::PositiveNumber);
    cmd->add_flag("--trace", o.trace, "per-iteration progress on stderr");
    cmd->add_flag("--json", o.as_json, "machine-readable output");
}

cbnorm::SolveOptions solve_options(const CommonOpts& o) {
    cbnorm::SolveOptions opt;
    opt.tol = o.tol;
    opt.max_iter = o.max_iter;
    if (o.trace)
        opt.trace = [](const std::string& s) { std::fprintf(stderr, "%s\n", s.c_str()); };
    return opt;
}

const char* status_name(cbnorm::SdpStatus s) {
    switch (s) {
        case cbnorm::SdpStatus::optimal: return "optimal";
        case cbnorm::SdpStatus::max_iterations: return "max-iterations";
        case cbnorm::SdpStatus::infeasible_suspected: return "infeasible-suspected";
    }
    return "unknown";
}

const char* program_name(cbnorm::ProgramKind k) {
    switch (k) {
        case cbnorm::ProgramKind::fidelity: return "fidelity";
        case cbnorm::ProgramKind::maxfid_stinespring: return "maxfid-stinespring";
        case cbnorm::ProgramKind::choi: return "choi";
    }
    return "unknown";
}

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

nlohmann::json certificate_json(const cbnorm::Certificate& c) {
    return {{"primal_residual", c.primal_residual}, {"dual_min_eig", c.dual_min_eig},
            {"duality_gap", c.duality_gap},         {"weak_duality_ok", c.weak_duality_ok},
            {"alpha_lower", c.alpha_lower},         {"beta_upper", c.beta_upper}};
}

int report_result(const cbnorm::NormResult& r, const CommonOpts& o,
                  const nlohmann::json* oracles) {
    if (o.as_json) {
        nlohmann::json out = {{"program", program_name(r.program)},
                              {"value", r.value},
                              {"alpha", r.solution.alpha},
                              {"beta", r.solution.beta},
                              {"gap", r.solution.gap},
                              {"status", status_name(r.solution.status)},
                              {"iterations", r.solution.iterations},
                              {"certificate", certificate_json(r.certificate)}};
        if (oracles) out["oracles"] = *oracles;
        std::printf("%s\n", out.dump().c_str());
    } else {
        std::printf("program %s\n", program_name(r.program));
        std::printf("value %s\n", num(r.value).c_str());
        std::printf("alpha %s\n", num(r.solution.alpha).c_str());
        std::printf("beta %s\n", num(r.solution.beta).c_str());
        std::printf("gap %s\n", num(r.solution.gap).c_str());
        std::printf("status %s\n", status_name(r.solution.status));
        std::printf("iterations %d\n", r.solution.iterations);
        if (oracles) {
            for (auto it = oracles->begin(); it != oracles->end(); ++it) {
                if (it.value().is_number())
                    std::printf("oracle %s %s\n", it.key().c_str(),
                                num(it.value().template get<double>()).c_str());
                else
                    std::printf("oracle %s %s\n", it.key().c_str(), it.value().dump().c_str());
            }
        }
    }
    return r.solution.status == cbnorm::SdpStatus::optimal ? 0 : 2;
}

cbnorm::HermitianMatrix as_psd_input(const cbnorm::ComplexMatrix& m, const char* label) {
    const double scale = 1.0 + cbnorm::max_abs(m);
    cbnorm::HermitianMatrix h = [&] {
        try {
            return cbnorm::HermitianMatrix(m, 1e-9 * scale);
        } catch (const cbnorm::Error&) {
            throw cbnorm::Error(std::string(label) + " must be Hermitian");
        }
    }();
    if (cbnorm::herm_eigenvalues(h).front() < -1e-9 * scale)
        throw cbnorm::Error(std::string(label) + " must be positive semidefinite");
    return h;
}

int run_fidelity(const CommonOpts& o) {
    cbnorm::InputDocument doc = cbnorm::load_input(o.input);
    if (doc.kind != "density-pair")
        throw cbnorm::Error(o.input + ": fidelity expects kind \"density-pair\"");
    const cbnorm::HermitianMatrix p = as_psd_input(doc.matrices[0], "P");
    const cbnorm::HermitianMatrix q = as_psd_input(doc.matrices[1], "Q");
    cbnorm::NormResult r = cbnorm::fidelity_sdp(p, q, solve_options(o));
    return report_result(r, o, nullptr);
}

int run_diamond(const CommonOpts& o, bool with_oracle, unsigned long long seed) {
    cbnorm::InputDocument doc = cbnorm::load_input(o.input);
    cbnorm::ChannelRep rep = doc.to_channel();
    cbnorm::NormResult r = cbnorm::diamond_norm(rep, solve_options(o));
    nlohmann::json oracles;
    if (with_oracle) {
        const cbnorm::ChoiMatrix choi =
            rep.is_choi() ? rep.choi() : cbnorm::choi_from_stinespring(rep.stinespring());
        cbnorm::AscentConfig cfg;
        cfg.seed = seed;
        cbnorm::AscentResult ascent = cbnorm::rank_one_ascent(choi, cfg);
        oracles["ascent"] = ascent.value;
        oracles["ascent_restart"] = ascent.best_restart;
        try {
            oracles["cp"] = cbnorm::cp_diamond_oracle(choi);
        } catch (const cbnorm::WrongRegimeError&) {
            oracles["cp"] = nullptr;
        }
    }
    return report_result(r, o, with_oracle ? &oracles : nullptr);
}

int run_cb_spectral(const CommonOpts& o) {
    cbnorm::InputDocument doc = cbnorm::load_input(o.input);
    cbnorm::NormResult r = cbnorm::cb_spectral_norm(doc.to_channel(), solve_options(o));
    return report_result(r, o, nullptr);
}

int run_diagnose(const CommonOpts& o) {
    cbnorm::InputDocument doc = cbnorm::load_input(o.input);
    cbnorm::ChannelRep rep = doc.to_channel();
    cbnorm::SolvabilityReport rep_out;
    cbnorm::SdpProblem prob;
    std::vector<double> dual_y;
    if (rep.is_stinespring()) {
        rep_out = cbnorm::solvability_report(rep.stinespring());
        prob = cbnorm::build_maxfid_sdp(rep.stinespring());
        dual_y = cbnorm::strict_feasible_points(rep.stinespring()).dual_y;
    } else {
        rep_out = cbnorm::solvability_report(rep.choi());
        prob = cbnorm::build_choi_sdp(rep.choi());
        dual_y = cbnorm::strict_feasible_points(rep.choi()).dual_y;
    }
    const bool interior = cbnorm::verify_interior_point(prob, dual_y, rep_out.epsilon);
    if (o.as_json) {
        nlohmann::json out = {{"program", program_name(rep_out.program)},
                              {"epsilon", rep_out.epsilon},
                              {"r_bound", rep_out.r_bound},
                              {"inputs_digest", rep_out.inputs_digest},
                              {"degenerate_zero_map", rep_out.degenerate_zero_map},
                              {"interior_point_check", interior}};
        std::printf("%s\n", out.dump().c_str());
    } else {
        std::printf("program %s\n", program_name(rep_out.program));
        std::printf("epsilon %s\n", num(rep_out.epsilon).c_str());
        std::printf("r-bound %s\n", num(rep_out.r_bound).c_str());
        std::printf("digest %s\n", rep_out.inputs_digest.c_str());
        std::printf("degenerate-zero-map %s\n", rep_out.degenerate_zero_map ? "true" : "false");
        std::printf("interior-point-check %s\n", interior ? "pass" : "fail");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"completely bounded norms via semidefinite programming"};
    app.require_subcommand(1);

    CommonOpts fid_opts, dia_opts, spec_opts, diag_opts;
    bool with_oracle = false;
    unsigned long long seed = 0;

    CLI::App* fid = app.add_subcommand("fidelity", "fidelity of a pair of PSD operators");
    add_common(fid, fid_opts);
    CLI::App* dia = app.add_subcommand("diamond", "completely bounded trace norm");
    add_common(dia, dia_opts);
    dia->add_flag("--oracle", with_oracle, "cross-check with independent estimators");
    dia->add_option("--seed", seed, "seed for the ascent oracle");
    CLI::App* spec = app.add_subcommand("cb-spectral", "completely bounded spectral norm");
    add_common(spec, spec_opts);
    CLI::App* diag = app.add_subcommand("diagnose", "solvability diagnostics for a channel");
    diag->add_option("--input", diag_opts.input, "input JSON file")->required();
    diag->add_flag("--json", diag_opts.as_json, "machine-readable output");

    try {
        app.parse(argc, argv);
        if (fid->parsed()) return run_fidelity(fid_opts);
        if (dia->parsed()) return run_diamond(dia_opts, with_oracle, seed);
        if (spec->parsed()) return run_cb_spectral(spec_opts);
        if (diag->parsed()) return run_diagnose(diag_opts);
        return 1;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;  // bad flags are input errors
    } catch (const cbnorm::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
