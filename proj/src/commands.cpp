#include "bll/commands.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include "bll/errors.hpp"
#include "bll/experiments.hpp"
#include "bll/io.hpp"

namespace bll {

namespace {

namespace fs = std::filesystem;

struct Options {
    std::string config;
    std::string out = ".";
    std::optional<std::uint64_t> seed;
    std::string epsilons;
    std::optional<double> t_end;
};

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double x = 0.0;
        try {
            x = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
        if (item.empty() || used != item.size()) throw ValidationError("--epsilons: cannot parse '" + item + "'");
        out.push_back(x);
    }
    return out;
}

class Session {
public:
    Session(const Options& o, std::ostream& out) : opt_(o), out_(out) {
        cfg_ = load_config(o.config);
        if (o.seed) {
            if (cfg_.init.kind != InitKind::Manufactured) throw ValidationError("--seed needs manufactured init data");
            cfg_.init.seed = *o.seed;
        }
        fs::create_directories(o.out);
    }

    std::string path(const std::string& name) const { return (fs::path(opt_.out) / name).string(); }

    int simulate() {
        State s0 = make_initial_state(cfg_);
        ReportWriter writer(path(cfg_.outputs.csv_path), path(cfg_.outputs.jsonl_path), cfg_.grid.dim);
        RunOptions o;
        o.gn = cfg_.gn;
        o.compute_reports = false;
        EnergyReport last;
        Observer ob = [&](const State& s, long k) {
            last = norm_report(s, cfg_.params, cfg_.gn);
            last.time = s.time;
            writer.write(last);
            if (cfg_.outputs.checkpoint_every > 0 && k > 0 && k % cfg_.outputs.checkpoint_every == 0)
                save_checkpoint(s, cfg_, path(cfg_.outputs.checkpoint_path));
        };
        Trajectory t = run(s0, cfg_.params, cfg_.stepper, {ob}, o);
        out_ << "simulate: " << t.steps << " steps of dt = " << t.dt << " to t = " << last.time
             << ", min density " << last.min_density << "\n";
        return kExitOk;
    }

    int sweep() {
        std::vector<double> eps = opt_.epsilons.empty() ? cfg_.sweep.epsilons : parse_list(opt_.epsilons);
        State s0 = make_initial_state(cfg_);
        SweepResult r = diffusion_limit_sweep(s0, cfg_.params, eps, cfg_.sweep.t_probe, cfg_.stepper);
        write_text_file(path("sweep.json"), sweep_json(r));
        write_text_file(path("sweep.csv"), sweep_csv(r));
        out_ << "sweep: slope_h1 " << r.slope_h1 << ", slope_lap " << r.slope_lap << " over " << r.fitted_points
             << " points\n";
        return kExitOk;
    }

    int decay() {
        State s0 = make_initial_state(cfg_);
        DecayResult r = decay_experiment(s0, cfg_.params, cfg_.stepper, opt_.t_end.value_or(cfg_.stepper.t_end), cfg_.gn);
        write_text_file(path("decay.json"), decay_json(r));
        write_text_file(path("decay.csv"), decay_csv(r));
        out_ << "decay: final/initial gradient energy " << r.ratio_final
             << (smoothed_nonincreasing(r.times, r.grad_norm_sq) ? ", non-increasing" : ", not monotone") << "\n";
        return kExitOk;
    }

    int scaling() {
        ScalingTable t = appendix_scaling_experiment(cfg_.scaling.family, cfg_.scaling.n_list, cfg_.params,
                                                     cfg_.scaling.policy);
        write_text_file(path("scaling.json"), scaling_json(t));
        write_text_file(path("scaling.csv"), scaling_csv(t));
        for (const auto& [k, f] : t.exponents) out_ << "scaling: " << k << " ~ n^" << f.slope << "\n";
        for (const auto& e : t.errors) out_ << "scaling: skipped: " << e << "\n";
        return kExitOk;
    }

    int verify() {
        State s0 = make_initial_state(cfg_);
        auto checks = verify_suite(s0, cfg_.params, cfg_.stepper, cfg_.gn);
        write_text_file(path("verify.json"), checks_json(checks));
        bool ok = true;
        for (const auto& c : checks) {
            out_ << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
            ok = ok && c.passed;
        }
        return ok ? kExitOk : kExitVerify;
    }

private:
    Options opt_;
    std::ostream& out_;
    RunConfig cfg_;
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Pseudo-spectral simulator for the hyperbolic-parabolic balance laws", "bll"};
    app.require_subcommand(1);
    Options opt;
    std::uint64_t seed = 0;
    double t_end = 0.0;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opt.config, "JSON run configuration")->required();
        sub->add_option("--out", opt.out, "output directory");
        sub->add_option("--seed", seed, "override the manufactured-data seed");
    };
    CLI::App* sim = app.add_subcommand("simulate", "run and stream energy reports");
    CLI::App* swp = app.add_subcommand("sweep", "diffusion-limit sweep against the epsilon = 0 run");
    CLI::App* dec = app.add_subcommand("decay", "gradient decay experiment");
    CLI::App* scl = app.add_subcommand("scaling", "appendix family scaling table");
    CLI::App* ver = app.add_subcommand("verify", "manufactured-solution orders and invariant checks");
    for (CLI::App* s : {sim, swp, dec, scl, ver}) add_common(s);
    swp->add_option("--epsilons", opt.epsilons, "comma-separated positive epsilons");
    dec->add_option("--t-end", t_end, "integration span");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "bll: " << e.what() << "\n" << app.help();
        return kExitUsage;
    }
    if (app.get_subcommands().front()->count("--seed")) opt.seed = seed;
    if (dec->parsed() && dec->count("--t-end")) opt.t_end = t_end;

    try {
        Session s(opt, out);
        if (sim->parsed()) return s.simulate();
        if (swp->parsed()) return s.sweep();
        if (dec->parsed()) return s.decay();
        if (scl->parsed()) return s.scaling();
        return s.verify();
    } catch (const ParseError& e) {
        err << "bll: config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ValidationError& e) {
        err << "bll: config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const Error& e) {
        bool config = dynamic_cast<const DomainTooSmall*>(&e) || dynamic_cast<const OverflowGuard*>(&e) ||
                      dynamic_cast<const VersionMismatch*>(&e) || dynamic_cast<const ChecksumMismatch*>(&e) ||
                      dynamic_cast<const NonPositiveConcentration*>(&e);
        err << "bll: " << (config ? "config error: " : "solver error: ") << e.what() << "\n";
        return config ? kExitConfig : kExitSolver;
    } catch (const fs::filesystem_error& e) {
        err << "bll: config error: " << e.what() << "\n";
        return kExitConfig;
    }
}

}  // namespace bll
