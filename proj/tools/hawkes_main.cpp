// Command-line front end: tail probabilities of a linear Hawkes process by
// importance sampling, naive Monte Carlo, saddle-point style expansions, and
// Gaussian/moderate-deviation approximations; benchmark tables; diagnostics dumps.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "hawkes/cgf.hpp"
#include "hawkes/deviations.hpp"
#include "hawkes/errors.hpp"
#include "hawkes/expansion.hpp"
#include "hawkes/importance.hpp"
#include "hawkes/simulate.hpp"

using nlohmann::json;

namespace {

struct KernelOpts {
    std::string preset = "exp";
    double alpha = 1.0, beta = 2.0;
    double c = 1.0, p = 3.0;
    std::string kernel_json;
};

hawkes::Kernel parse_kernel_json(const std::string& spec) {
    json j;
    if (!spec.empty() && spec.front() == '{') {
        j = json::parse(spec);
    } else {
        std::ifstream in(spec);
        if (!in) throw std::runtime_error("cannot open kernel spec file: " + spec);
        in >> j;
    }
    const std::string type = j.at("type").get<std::string>();
    if (type == "exp") return hawkes::Kernel::exponential(j.at("alpha"), j.at("beta"));
    if (type == "powerlaw") return hawkes::Kernel::power_law(j.at("c"), j.at("p"));
    if (type == "tabulated") {
        std::vector<double> t = j.at("t"), h = j.at("h");
        std::vector<double> tail;
        if (j.contains("tail")) tail = j.at("tail").get<std::vector<double>>();
        return hawkes::Kernel::tabulated(std::move(t), std::move(h), j.at("l1"), std::move(tail));
    }
    throw std::runtime_error("unknown kernel type: " + type);
}

hawkes::Kernel make_kernel(const KernelOpts& k) {
    if (!k.kernel_json.empty()) return parse_kernel_json(k.kernel_json);
    if (k.preset == "exp") return hawkes::Kernel::exponential(k.alpha, k.beta);
    if (k.preset == "powerlaw") return hawkes::Kernel::power_law(k.c, k.p);
    throw CLI::ValidationError("--kernel", "expected 'exp' or 'powerlaw'");
}

void add_kernel_options(CLI::App* cmd, KernelOpts& k) {
    cmd->add_option("--kernel", k.preset, "Kernel preset: exp | powerlaw")->capture_default_str();
    cmd->add_option("--alpha", k.alpha, "Exponential kernel amplitude")->capture_default_str();
    cmd->add_option("--beta", k.beta, "Exponential kernel decay rate")->capture_default_str();
    cmd->add_option("--c", k.c, "Power-law kernel amplitude")->capture_default_str();
    cmd->add_option("--p", k.p, "Power-law kernel exponent (> 2)")->capture_default_str();
    cmd->add_option("--kernel-json", k.kernel_json,
                    "Kernel as inline JSON or a path to a JSON file, e.g. "
                    "{\"type\":\"exp\",\"alpha\":1.0,\"beta\":2.0}");
}

std::string sci3(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2E", v);
    return buf;
}

std::string full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::unique_ptr<std::ofstream> open_out(const std::string& path) {
    if (path.empty()) return nullptr;
    auto f = std::make_unique<std::ofstream>(path);
    if (!*f) throw std::runtime_error("cannot open output file: " + path);
    return f;
}

struct TableRow {
    double t;
    hawkes::TiltedEstimate is4, is5;
    double o1_4, o2_4, o1_5, o2_5;
};

int cmd_table(const KernelOpts& kopts, double nu, std::uint64_t n_paths, std::uint64_t seed,
              double dt, double tmax, unsigned threads, const std::string& out_path) {
    const hawkes::HawkesModel model(nu, make_kernel(kopts));
    hawkes::GridSpec spec;
    spec.step = dt;
    spec.horizon = tmax;

    const auto ctx4 = hawkes::ExpansionContext::build(model, 4.0, 2, spec);
    const auto ctx5 = hawkes::ExpansionContext::build(model, 5.0, 2, spec);

    auto sink = open_out(out_path);
    std::ostream& os = sink ? *sink : std::cout;
    os << "# tail probabilities P(N_t >= x t), nu=" << nu << ", n_paths=" << n_paths
       << ", seed=" << seed << "\n";
    os << "# x=4: c0=" << full(ctx4.c0()) << " c1=" << full(ctx4.c1()) << "\n";
    os << "# x=5: c0=" << full(ctx5.c0()) << " c1=" << full(ctx5.c1()) << "\n";
    os << "t,is_x4,is_se_x4,order1_x4,order2_x4,relerr1_x4,relerr2_x4,"
          "is_x5,is_se_x5,order1_x5,order2_x5,relerr1_x5,relerr2_x5\n";

    hawkes::IsOptions iopt;
    iopt.threads = threads;
    int cell = 0;
    for (double t : {5.0, 10.0, 25.0, 40.0, 50.0}) {
        TableRow row;
        row.t = t;
        row.is4 = hawkes::is_tail(model, t, 4.0, n_paths, seed + 17 * cell, iopt);
        ++cell;
        row.is5 = hawkes::is_tail(model, t, 5.0, n_paths, seed + 17 * cell, iopt);
        ++cell;
        row.o1_4 = hawkes::ldp_tail(ctx4, t, 1);
        row.o2_4 = hawkes::ldp_tail(ctx4, t, 2);
        row.o1_5 = hawkes::ldp_tail(ctx5, t, 1);
        row.o2_5 = hawkes::ldp_tail(ctx5, t, 2);
        for (double v : {row.o2_4, row.o2_5})
            if (v < 0.0)
                std::cerr << "warning: order-2 approximation negative at t=" << t
                          << " (1/t correction dominates below the asymptotic regime)\n";
        // relative differences recomputed from the printed 3-digit strings so that
        // re-reading the CSV reproduces them exactly
        auto rel = [](const std::string& approx, const std::string& ref) {
            double a = std::stod(approx), r = std::stod(ref);
            return (a - r) / r;
        };
        std::string is4 = sci3(row.is4.estimate), o14 = sci3(row.o1_4), o24 = sci3(row.o2_4);
        std::string is5 = sci3(row.is5.estimate), o15 = sci3(row.o1_5), o25 = sci3(row.o2_5);
        os << row.t << ',' << is4 << ',' << sci3(row.is4.std_error) << ',' << o14 << ',' << o24
           << ',' << full(rel(o14, is4)) << ',' << full(rel(o24, is4)) << ',' << is5 << ','
           << sci3(row.is5.std_error) << ',' << o15 << ',' << o25 << ',' << full(rel(o15, is5))
           << ',' << full(rel(o25, is5)) << '\n';
    }
    return 0;
}

int cmd_tail(const KernelOpts& kopts, const std::string& method, double nu, double t, double x,
             double y, int m, std::uint64_t n_paths, std::uint64_t seed, double dt, double tmax,
             unsigned threads, const std::string& out_path) {
    const hawkes::HawkesModel model(nu, make_kernel(kopts));
    hawkes::GridSpec spec;
    spec.step = dt;
    spec.horizon = tmax;

    double estimate = 0.0;
    std::optional<double> se;
    if (method == "is") {
        hawkes::IsOptions iopt;
        iopt.threads = threads;
        auto e = hawkes::is_tail(model, t, x, n_paths, seed, iopt);
        estimate = e.estimate;
        se = e.std_error;
    } else if (method == "naive") {
        auto e = hawkes::mc_tail(model, t, x, n_paths, seed, hawkes::Generator::thinning, threads);
        estimate = e.estimate;
        se = e.std_error;
    } else if (method == "order1") {
        estimate = hawkes::ldp_tail(model, t, x, 1, spec);
    } else if (method == "order2") {
        estimate = hawkes::ldp_tail(model, t, x, 2, spec);
        if (estimate < 0.0)
            std::cerr << "warning: order-2 approximation negative (below asymptotic regime)\n";
    } else if (method == "clt") {
        estimate = hawkes::clt_tail(model, t, y);
    } else if (method == "mdp") {
        estimate = hawkes::mdp_tail(model, t, y, m);
    } else {
        throw CLI::ValidationError("--method",
                                   "expected one of is|naive|order1|order2|clt|mdp");
    }

    auto sink = open_out(out_path);
    std::ostream& os = sink ? *sink : std::cout;
    os << "method,t,x,estimate,std_error\n";
    os << method << ',' << t << ',' << ((method == "clt" || method == "mdp") ? y : x) << ','
       << full(estimate) << ',' << (se ? full(*se) : std::string()) << '\n';
    return 0;
}

int cmd_diag(const KernelOpts& kopts, double nu, double x, int order, double dt, double tmax,
             const std::string& out_path, const std::string& grid_path) {
    const hawkes::HawkesModel model(nu, make_kernel(kopts));
    hawkes::GridSpec spec;
    spec.step = dt;
    spec.horizon = tmax;
    const auto sd = hawkes::saddle(model, x);
    json j;
    j["nu"] = nu;
    j["l1_norm"] = model.kernel.l1_norm();
    j["x"] = x;
    j["mean_rate"] = hawkes::mean_rate(model);
    j["asymptotic_var"] = hawkes::asymptotic_var(model);
    j["theta_star"] = sd.theta_star;
    j["rate"] = sd.rate;
    j["rate_d2"] = sd.rate_d2;
    j["theta_critical"] = hawkes::theta_critical(model.kernel.l1_norm());

    if (x != sd.mean) {
        const auto ctx = hawkes::ExpansionContext::build(model, x, order, spec);
        j["x_star"] = ctx.x_star;
        j["psi_star"] = ctx.psi();
        j["grid"] = {{"step", ctx.grid.step},
                     {"horizon", ctx.grid.horizon_for(model.kernel)},
                     {"refine", ctx.grid.refine}};
        j["x_derivs"] = ctx.x_derivs;
        j["eta_derivs"] = ctx.eta_derivs;
        j["phi_ladder"] = ctx.phi_ladder;
        j["psi_derivs"] = ctx.psi_derivs;
        j["f_limits"] = ctx.f_limits;
        j["a"] = ctx.a;
        j["b"] = ctx.b;
        if (!ctx.b.empty()) {
            j["c0"] = ctx.c0();
            j["c1"] = ctx.c1();
        }
        if (!grid_path.empty()) {
            const auto F = hawkes::solve_F(ctx.theta_star, model.kernel, spec.step,
                                           spec.horizon_for(model.kernel));
            std::ofstream g(grid_path);
            if (!g) throw std::runtime_error("cannot open grid dump file: " + grid_path);
            g << "t,F\n";
            for (std::size_t i = 0; i < F.size(); ++i) g << F.time(i) << ',' << full(F.values[i]) << '\n';
        }
    }

    auto sink = open_out(out_path);
    (sink ? *sink : std::cout) << j.dump(2) << '\n';
    return 0;
}

int cmd_simulate(const KernelOpts& kopts, double nu, double t, std::uint64_t n_paths,
                 std::uint64_t seed, const std::string& generator, const std::string& out_path) {
    const hawkes::HawkesModel model(nu, make_kernel(kopts));
    const auto gen = generator == "cluster" ? hawkes::Generator::cluster : hawkes::Generator::thinning;
    std::vector<hawkes::EventPath> paths;
    paths.reserve(n_paths);
    for (std::uint64_t p = 0; p < n_paths; ++p) {
        if (gen == hawkes::Generator::cluster)
            paths.push_back(hawkes::simulate_cluster(model, t, seed + p));
        else
            paths.push_back(hawkes::simulate_thinning(model, t, seed + p));
    }
    auto sink = open_out(out_path);
    hawkes::dump_paths_csv(sink ? *sink : std::cout, paths);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tail probabilities of linear Hawkes processes: exact simulation, "
                 "importance sampling, and precise tail expansions"};
    app.set_config("--config", "", "Read options from an INI/TOML config file; flags win");
    app.require_subcommand(1);

    KernelOpts kopts;
    double nu = 1.0, t = 25.0, x = 4.0, y = 1.0, dt = 0.01, tmax = 0.0;
    int m = 0, order = 2;
    std::uint64_t n_paths = 100000, seed = 20240801;
    unsigned threads = 0;
    std::string method = "order2", out_path, grid_path, generator = "cluster";

    auto* tail = app.add_subcommand("tail", "One tail probability P(N_t >= x t) by any method");
    add_kernel_options(tail, kopts);
    tail->add_option("--method", method, "is | naive | order1 | order2 | clt | mdp")
        ->capture_default_str();
    tail->add_option("--nu", nu, "Baseline intensity")->capture_default_str();
    tail->add_option("--t", t, "Horizon")->capture_default_str();
    tail->add_option("--x", x, "Level (events per unit time)")->capture_default_str();
    tail->add_option("--y", y, "Gaussian-scale level for clt/mdp")->capture_default_str();
    tail->add_option("--m", m, "mdp expansion order (0: cubic form; >=3: rate form)")
        ->capture_default_str();
    tail->add_option("--n-paths", n_paths, "Monte Carlo paths")->capture_default_str();
    tail->add_option("--seed", seed, "RNG seed")->capture_default_str();
    tail->add_option("--dt", dt, "Grid step for the expansions")->capture_default_str();
    tail->add_option("--tmax", tmax, "Grid horizon (0: kernel default)")->capture_default_str();
    tail->add_option("--threads", threads, "Worker threads (0: HAWKES_THREADS or hardware)")
        ->capture_default_str();
    tail->add_option("--out", out_path, "Write CSV here instead of stdout");

    auto* table = app.add_subcommand("table", "Benchmark table: IS vs order-1/2 expansions, "
                                              "t in {5,10,25,40,50}, x in {4,5}");
    add_kernel_options(table, kopts);
    table->add_option("--nu", nu, "Baseline intensity")->capture_default_str();
    table->add_option("--n-paths", n_paths, "IS paths per cell")->capture_default_str();
    table->add_option("--seed", seed, "RNG seed")->capture_default_str();
    table->add_option("--dt", dt, "Grid step")->capture_default_str();
    table->add_option("--tmax", tmax, "Grid horizon (0: kernel default)")->capture_default_str();
    table->add_option("--threads", threads, "Worker threads")->capture_default_str();
    table->add_option("--out", out_path, "Write CSV here instead of stdout");

    auto* diag = app.add_subcommand("diag", "JSON dump of saddle data, derivative ladders and "
                                            "expansion coefficients");
    add_kernel_options(diag, kopts);
    diag->add_option("--nu", nu, "Baseline intensity")->capture_default_str();
    diag->add_option("--x", x, "Level")->capture_default_str();
    diag->add_option("--order", order, "Highest psi/F derivative order (even)")
        ->capture_default_str();
    diag->add_option("--dt", dt, "Grid step")->capture_default_str();
    diag->add_option("--tmax", tmax, "Grid horizon (0: kernel default)")->capture_default_str();
    diag->add_option("--out", out_path, "Write JSON here instead of stdout");
    diag->add_option("--dump-grid", grid_path, "Also write (t, F(t;theta*)) CSV here");

    auto* sim = app.add_subcommand("simulate", "Dump simulated event paths as CSV");
    add_kernel_options(sim, kopts);
    sim->add_option("--nu", nu, "Baseline intensity")->capture_default_str();
    sim->add_option("--t", t, "Horizon")->capture_default_str();
    sim->add_option("--n-paths", n_paths, "Number of paths")->capture_default_str();
    sim->add_option("--seed", seed, "RNG seed")->capture_default_str();
    sim->add_option("--generator", generator, "thinning | cluster")->capture_default_str();
    sim->add_option("--out", out_path, "Write CSV here instead of stdout");

    CLI11_PARSE(app, argc, argv);

    try {
        if (tail->parsed())
            return cmd_tail(kopts, method, nu, t, x, y, m, n_paths, seed, dt, tmax, threads,
                            out_path);
        if (table->parsed())
            return cmd_table(kopts, nu, n_paths, seed, dt, tmax, threads, out_path);
        if (diag->parsed()) return cmd_diag(kopts, nu, x, order, dt, tmax, out_path, grid_path);
        if (sim->parsed()) return cmd_simulate(kopts, nu, t, n_paths, seed, generator, out_path);
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 2;
    }
    return 0;
}
