#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "fracground/report_io.hpp"
#include "fracground/solvers.hpp"
#include "fracground/spectral.hpp"
#include "fracground/verify.hpp"

namespace fg = fracground;
namespace fs = std::filesystem;

namespace {

// 0: success, 1: unusable input or a regime with no state, 2: ran but did not converge.
constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kNotConverged = 2;

std::string default_outdir() {
    const char* env = std::getenv("FRACGROUND_OUT");
    return env && *env ? env : ".";
}

void write_document(const fs::path& dir, const std::string& name, const fg::Json& doc,
                    const char* schema_name) {
    const std::string text = doc.dump();
    if (schema_name) {
        const fg::ValidationResult vr = fg::validate_against_schema(text, fg::embedded_schema(schema_name));
        if (!vr.ok)
            throw fg::InputError("internal: emitted " + name + " violates its schema at " + vr.path + ": " +
                                 vr.message);
    }
    fg::write_text_file((dir / name).string(), text);
}

std::string resolve_method(const fg::SolveConfigFile& cfg) {
    if (cfg.method != "auto") return cfg.method;
    switch (cfg.problem.variant) {
        case fg::Variant::sp3: return "pohozaev";
        case fg::Variant::sp4:
            throw fg::TrivialityError(
                "the all-defocusing shape admits only the zero state; run 'audit --sp4' for the "
                "coercivity and collapse evidence");
        default: return "nehari";
    }
}

fg::GroundStateReport wrap_profile_as_report(const fg::ProblemSpec& spec, fg::Field phi, int iterations) {
    fg::GroundStateReport rep;
    rep.spec = spec;
    const fg::Moments m = fg::moments(spec, phi);
    rep.action = fg::action_from(spec, m);
    rep.nehari_value = fg::nehari_from(spec, m);
    rep.pohozaev = fg::pohozaev_residual_from(spec, m);
    rep.el_residual = fg::l2_norm(fg::action_gradient(spec, phi)) / fg::l2_norm(phi);
    rep.d_estimate = rep.action;
    rep.iterations = iterations;
    rep.converged = true;
    rep.halvings = 0;
    rep.profile = std::move(phi);
    return rep;
}

fg::GroundStateReport run_one(const fg::SolveConfigFile& cfg, const std::string& method) {
    if (method == "nehari") return fg::minimize_nehari(cfg.problem, cfg.grid, cfg.solver);
    if (method == "pohozaev") return fg::minimize_pohozaev(cfg.problem, cfg.grid, cfg.solver);
    if (method == "petviashvili") {
        int iters = 0;
        fg::Field phi = fg::petviashvili(cfg.problem, cfg.grid, cfg.solver, &iters);
        return wrap_profile_as_report(cfg.problem, std::move(phi), iters);
    }
    throw fg::InputError("unknown method '" + method + "'");
}

// Usage-shaped failures (bad input, unsupported combination, empty regime) map to 1;
// numerical failures discovered mid-run map to 2.
int classify_failure(const std::exception& e) {
    if (dynamic_cast<const fg::ConvergenceError*>(&e) || dynamic_cast<const fg::DivergenceError*>(&e) ||
        dynamic_cast<const fg::NoRootError*>(&e) || dynamic_cast<const fg::StationarityError*>(&e))
        return kNotConverged;
    return kUsage;
}

struct SolverCliOptions {
    fg::SolverConfig config;
    std::string initial_profile = "lorentzian";
};

void add_solver_options(CLI::App* cmd, SolverCliOptions& opts) {
    cmd->add_option("--max-iter", opts.config.max_iter, "iteration budget");
    cmd->add_option("--grad-tol", opts.config.grad_tol, "relative Euler-Lagrange residual target");
    cmd->add_option("--step", opts.config.step, "requested descent step");
    cmd->add_option("--recenter-every", opts.config.recenter_every,
                    "rearrangement cadence in iterations (0 disables)");
    cmd->add_option("--init", opts.initial_profile, "starting profile: gaussian|lorentzian|sech2|file");
    cmd->add_option("--init-amplitude", opts.config.init_amplitude, "starting profile amplitude");
    cmd->add_option("--init-width", opts.config.init_width, "starting profile width");
    cmd->add_option("--init-file", opts.config.init_file, "profile CSV for --init file");
    cmd->add_option("--seed", opts.config.seed, "seed for seeded starting profiles");
}

fg::SolverConfig finish_solver_options(const SolverCliOptions& opts) {
    fg::SolverConfig config = opts.config;
    config.initial_profile = fg::initial_profile_from_string(opts.initial_profile);
    config.validate();
    return config;
}

int cmd_solve(const std::string& config_path, const std::string& method_flag, const std::string& outdir) {
    fg::SolveConfigFile cfg = fg::parse_solve_config_text(fg::read_text_file(config_path));
    if (!method_flag.empty()) cfg.method = method_flag;
    if (cfg.problem.variant == fg::Variant::sp3) {
        const fg::ThresholdConstants th = fg::c_zero(cfg.problem.p, cfg.problem.q);
        if (cfg.problem.c >= th.c0)
            throw fg::ThresholdError("no ground state: speed " + fg::format_double(cfg.problem.c) +
                                     " is at or above the threshold c0 = " + fg::format_double(th.c0));
    }
    const std::string method = resolve_method(cfg);
    const fg::GroundStateReport rep = run_one(cfg, method);

    const fs::path dir(outdir);
    fs::create_directories(dir);
    fg::write_field_csv((dir / "profile.csv").string(), rep.profile);
    write_document(dir, "report.json",
                   fg::ground_state_report_to_json(rep, cfg.grid, cfg.solver, method, "profile.csv"),
                   "ground_state_report");
    std::cout << (rep.converged ? "converged" : "not converged") << ": action = "
              << fg::format_double(rep.action) << ", el_residual = " << fg::format_double(rep.el_residual)
              << "\n";
    return rep.converged ? kOk : kNotConverged;
}

int cmd_classify(int p, int q, double c, const fg::GridSpec& grid, const fg::SolverConfig& config,
                 const std::string& outdir) {
    const fg::ClassificationReport rep = fg::classify(p, q, c, grid, config);

    const fs::path dir(outdir);
    fs::create_directories(dir);
    if (rep.positive_solution) fg::write_field_csv((dir / "positive.csv").string(), rep.positive_solution->profile);
    if (rep.negative_solution) fg::write_field_csv((dir / "negative.csv").string(), rep.negative_solution->profile);
    write_document(dir, "classification.json",
                   fg::classification_report_to_json(rep, grid, "positive.csv", "negative.csv"),
                   "classification_report");

    bool any_failed = false;
    for (const fg::Verdict& v : rep.verdicts) {
        std::cout << v.name << ": " << fg::to_string(v.status) << "\n";
        any_failed = any_failed || v.status == fg::VerdictStatus::failed;
    }
    const bool pos_ok = rep.positive_solution && rep.positive_solution->converged;
    return (!any_failed && pos_ok) ? kOk : kNotConverged;
}

int cmd_kernel(double sigma, double nu, const fg::GridSpec& grid, const std::string& outdir) {
    const fg::Field k = fg::kernel(sigma, nu, grid);

    const fs::path dir(outdir);
    fs::create_directories(dir);
    fg::write_field_csv((dir / "kernel.csv").string(), k);

    fg::Json meta = fg::Json::object();
    meta.set("kind", fg::Json::string("kernel"));
    meta.set("sigma", fg::Json::number(sigma));
    meta.set("nu", fg::Json::number(nu));
    meta.set("grid", fg::grid_spec_to_json(grid));
    meta.set("quadrature", fg::Json::number(fg::quadrature(k)));
    meta.set("center_value", fg::Json::number(k.values[static_cast<size_t>(grid.center())]));
    meta.set("min_value", fg::Json::number(*std::min_element(k.values.begin(), k.values.end())));
    write_document(dir, "kernel.json", meta, nullptr);
    std::cout << "kernel quadrature = " << fg::format_double(fg::quadrature(k)) << " (1/nu = "
              << fg::format_double(1.0 / nu) << ")\n";
    return kOk;
}

int cmd_sweep(const std::string& config_path, const std::string& param, double from, double to, int count,
              int jobs, const std::string& outdir) {
    if (param != "c") throw fg::InputError("sweep supports only --param c");
    if (count < 1) throw fg::InputError("sweep needs --count of at least 1");
    if (jobs < 1) throw fg::InputError("sweep needs --jobs of at least 1");
    const fg::SolveConfigFile base = fg::parse_solve_config_text(fg::read_text_file(config_path));

    const fs::path dir(outdir);
    fs::create_directories(dir);

    struct Row {
        double c = 0.0;
        bool converged = false;
        std::optional<fg::GroundStateReport> report;
        std::string note;
    };
    std::vector<Row> rows(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i)
        rows[static_cast<size_t>(i)].c = count == 1 ? from : from + (to - from) * i / (count - 1);

    std::atomic<int> next{0};
    auto worker = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= count) return;
            Row& row = rows[static_cast<size_t>(i)];
            char name[32];
            std::snprintf(name, sizeof(name), "row_%03d", i);
            const fs::path row_dir = dir / name;
            try {
                fg::SolveConfigFile cfg = base;
                cfg.problem.c = row.c;
                cfg.problem.validate();
                if (cfg.problem.variant == fg::Variant::sp3 &&
                    row.c >= fg::c_zero(cfg.problem.p, cfg.problem.q).c0)
                    throw fg::ThresholdError("speed at or above the existence threshold");
                const std::string method = resolve_method(cfg);
                fg::GroundStateReport rep = run_one(cfg, method);
                fs::create_directories(row_dir);
                fg::write_field_csv((row_dir / "profile.csv").string(), rep.profile);
                write_document(row_dir, "report.json",
                               fg::ground_state_report_to_json(rep, cfg.grid, cfg.solver, method, "profile.csv"),
                               "ground_state_report");
                row.converged = rep.converged;
                if (!rep.converged) row.note = "iteration budget exhausted";
                row.report = std::move(rep);
            } catch (const std::exception& e) {
                row.note = e.what();
            }
        }
    };
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int j = 0; j < std::min(jobs, count); ++j) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    std::string summary = "c,converged,action,nehari,pohozaev,el_residual,note\n";
    int converged_rows = 0;
    for (const Row& row : rows) {
        summary += fg::format_double(row.c);
        summary += row.converged ? ",true" : ",false";
        if (row.report) {
            summary += ',' + fg::format_double(row.report->action);
            summary += ',' + fg::format_double(row.report->nehari_value);
            summary += ',' + fg::format_double(row.report->pohozaev);
            summary += ',' + fg::format_double(row.report->el_residual);
        } else {
            summary += ",,,,";
        }
        std::string quoted = row.note;
        for (size_t pos = 0; (pos = quoted.find('"', pos)) != std::string::npos; pos += 2)
            quoted.replace(pos, 1, "\"\"");
        summary += ",\"" + quoted + "\"\n";
        if (row.converged) ++converged_rows;
    }
    fg::write_text_file((dir / "summary.csv").string(), summary);
    std::cout << converged_rows << "/" << count << " rows converged\n";
    return converged_rows > 0 ? kOk : kNotConverged;
}

int cmd_audit_report(const std::string& report_path, int trials, double tol, const std::string& outdir) {
    const fg::GroundStateReport rep = fg::read_ground_state_report(report_path);

    fg::Json doc = fg::Json::object();
    doc.set("kind", fg::Json::string("ground_state_audit"));
    doc.set("problem", fg::problem_spec_to_json(rep.spec));
    doc.set("grid", fg::grid_spec_to_json(rep.profile.grid));

    bool passed = true;
    const bool nehari_shape = rep.spec.variant == fg::Variant::sp1 || rep.spec.variant == fg::Variant::sp2 ||
                              rep.spec.variant == fg::Variant::single_power;
    if (nehari_shape) {
        const fg::LevelAuditReport level = fg::ground_state_level_audit(rep, trials);
        doc.set("level", fg::level_audit_to_json(level));
        passed = passed && level.passed;
    }
    const fg::PositivityCheckReport pos = fg::positivity_representation_check(rep.profile, rep.spec, tol);
    doc.set("positivity", fg::positivity_check_to_json(pos));
    passed = passed && pos.passed;
    doc.set("passed", fg::Json::boolean(passed));

    const fs::path dir(outdir);
    fs::create_directories(dir);
    write_document(dir, "audit.json", doc, "audit_report");
    std::cout << "audit " << (passed ? "passed" : "failed") << "\n";
    return passed ? kOk : kNotConverged;
}

int cmd_audit_sp4(const fg::ProblemSpec& spec, const fg::GridSpec& grid, int trials,
                  const std::string& outdir) {
    const fg::Sp4AuditReport audit = fg::sp4_triviality_audit(spec, grid, trials);

    const fs::path dir(outdir);
    fs::create_directories(dir);
    write_document(dir, "audit.json", fg::sp4_audit_to_json(spec, grid, audit), "audit_report");
    std::cout << "audit " << (audit.passed ? "passed" : "failed") << ": min coercivity ratio "
              << fg::format_double(audit.min_ratio) << ", " << audit.collapse_runs << "/3 flows collapsed\n";
    return audit.passed ? kOk : kNotConverged;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ground states of fractional double-power equations"};
    app.require_subcommand(1);

    // solve
    auto* solve = app.add_subcommand("solve", "compute one ground state from a JSON config");
    std::string solve_config, solve_method, solve_out = default_outdir();
    solve->add_option("--config", solve_config, "solve configuration JSON")->required();
    solve->add_option("--method", solve_method, "override: nehari|pohozaev|petviashvili");
    solve->add_option("-o,--out", solve_out, "output directory");

    // classify
    auto* cls = app.add_subcommand("classify", "map the signed solution branches for integer powers");
    int cls_p = 2, cls_q = 3, cls_n = 4096;
    double cls_c = 1.0, cls_l = 60.0;
    std::string cls_out = default_outdir();
    SolverCliOptions cls_solver;
    cls->add_option("--p", cls_p, "lower integer power")->required();
    cls->add_option("--q", cls_q, "upper integer power")->required();
    cls->add_option("--c", cls_c, "wave speed")->required();
    cls->add_option("--L", cls_l, "half-length of the periodic cell");
    cls->add_option("--N", cls_n, "node count");
    cls->add_option("-o,--out", cls_out, "output directory");
    add_solver_options(cls, cls_solver);

    // kernel
    auto* ker = app.add_subcommand("kernel", "tabulate the resolvent kernel");
    double ker_sigma = 1.0, ker_nu = 1.0, ker_l = 40.0;
    int ker_n = 4096;
    std::string ker_out = default_outdir();
    ker->add_option("--sigma", ker_sigma, "symbol order, in (0, 2)")->required();
    ker->add_option("--nu", ker_nu, "resolvent shift, positive")->required();
    ker->add_option("--L", ker_l, "half-length of the periodic cell");
    ker->add_option("--N", ker_n, "node count");
    ker->add_option("-o,--out", ker_out, "output directory");

    // sweep
    auto* swp = app.add_subcommand("sweep", "solve across a range of wave speeds");
    std::string swp_config, swp_param = "c", swp_out = default_outdir();
    double swp_from = 0.0, swp_to = 0.0;
    int swp_count = 0, swp_jobs = 1;
    swp->add_option("--config", swp_config, "base solve configuration JSON")->required();
    swp->add_option("--param", swp_param, "swept parameter (only c)");
    swp->add_option("--from", swp_from, "first value")->required();
    swp->add_option("--to", swp_to, "last value")->required();
    swp->add_option("--count", swp_count, "number of rows")->required();
    swp->add_option("--jobs", swp_jobs, "worker threads");
    swp->add_option("-o,--out", swp_out, "output directory");

    // audit
    auto* aud = app.add_subcommand("audit", "check a computed state, or the empty all-defocusing regime");
    std::string aud_report, aud_out = default_outdir();
    bool aud_sp4 = false;
    int aud_trials = 32, aud_n = 4096;
    double aud_tol = 1e-6, aud_sigma = 1.0, aud_c = 1.0, aud_p = 2.0, aud_q = 3.0, aud_l = 40.0;
    auto* aud_report_opt = aud->add_option("--report", aud_report, "report.json of a solve run");
    auto* aud_sp4_flag = aud->add_flag("--sp4", aud_sp4, "audit the all-defocusing shape instead");
    aud_report_opt->excludes(aud_sp4_flag);
    aud->add_option("--trials", aud_trials, "random trial count");
    aud->add_option("--tol", aud_tol, "positivity reconstruction tolerance");
    aud->add_option("--sigma", aud_sigma, "symbol order (with --sp4)");
    aud->add_option("--c", aud_c, "wave speed (with --sp4)");
    aud->add_option("--p", aud_p, "lower power (with --sp4)");
    aud->add_option("--q", aud_q, "upper power (with --sp4)");
    aud->add_option("--L", aud_l, "half-length (with --sp4)");
    aud->add_option("--N", aud_n, "node count (with --sp4)");
    aud->add_option("-o,--out", aud_out, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*solve) return cmd_solve(solve_config, solve_method, solve_out);
        if (*cls)
            return cmd_classify(cls_p, cls_q, cls_c, fg::GridSpec(cls_l, cls_n),
                                finish_solver_options(cls_solver), cls_out);
        if (*ker) return cmd_kernel(ker_sigma, ker_nu, fg::GridSpec(ker_l, ker_n), ker_out);
        if (*swp) return cmd_sweep(swp_config, swp_param, swp_from, swp_to, swp_count, swp_jobs, swp_out);
        if (*aud) {
            if (aud_sp4)
                return cmd_audit_sp4(fg::ProblemSpec(aud_sigma, aud_c, aud_p, aud_q, fg::Variant::sp4),
                                     fg::GridSpec(aud_l, aud_n), aud_trials, aud_out);
            if (aud_report.empty())
                throw fg::InputError("audit needs either --report or --sp4");
            return cmd_audit_report(aud_report, aud_trials, aud_tol, aud_out);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return classify_failure(e);
    }
    return kUsage;
}
