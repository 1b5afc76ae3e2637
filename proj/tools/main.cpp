// lvsmile: series pricing, implied-volatility expansion, transition densities
// and Monte Carlo checks for the local-volatility model
// dX = (a^2 + eps X^beta)^{1/2} X dW.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "lvsmile/black_scholes.hpp"
#include "lvsmile/errors.hpp"
#include "lvsmile/mc.hpp"
#include "lvsmile/model.hpp"
#include "lvsmile/pricer.hpp"
#include "lvsmile/smile.hpp"
#include "lvsmile/transforms.hpp"
#include "lvsmile/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct RunConfig {
    std::string command;
    std::optional<double> a, eps, sqrt_eps, beta, y, t;
    std::optional<int> order;
    std::vector<double> ks;
    std::optional<double> lmmr_min, lmmr_max;
    std::optional<int> lmmr_count;
    std::optional<double> contour_offset, rel_tol, half_width;
    std::optional<long> max_nodes;
    std::optional<long> paths;
    std::optional<double> mc_dt;
    std::optional<unsigned long long> seed;
    bool antithetic = false;
    bool reference = false;
    std::optional<double> y_min, y_max, y_step;
    std::optional<double> norm_y0;
    std::string out;
    std::string config_path;
};

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// ---- flat key=value config files -------------------------------------------

std::map<std::string, std::string> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto pos = line.find('=');
        if (pos == std::string::npos)
            throw std::invalid_argument("config: expected key=value, got: " + line);
        kv[line.substr(0, pos)] = line.substr(pos + 1);
    }
    return kv;
}

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(std::stod(item));
    }
    return out;
}

// Config file fills anything the command line left unset: flags > file > defaults.
void apply_config(RunConfig& cfg, const std::map<std::string, std::string>& kv) {
    auto setd = [&](const char* key, std::optional<double>& slot) {
        auto it = kv.find(key);
        if (it != kv.end() && !slot) slot = std::stod(it->second);
    };
    auto seti = [&](const char* key, std::optional<int>& slot) {
        auto it = kv.find(key);
        if (it != kv.end() && !slot) slot = std::stoi(it->second);
    };
    auto setl = [&](const char* key, std::optional<long>& slot) {
        auto it = kv.find(key);
        if (it != kv.end() && !slot) slot = std::stol(it->second);
    };
    setd("a", cfg.a);
    setd("eps", cfg.eps);
    setd("sqrt-eps", cfg.sqrt_eps);
    setd("beta", cfg.beta);
    setd("y", cfg.y);
    setd("t", cfg.t);
    seti("order", cfg.order);
    if (kv.count("k") && cfg.ks.empty()) cfg.ks = parse_double_list(kv.at("k"));
    setd("lmmr-min", cfg.lmmr_min);
    setd("lmmr-max", cfg.lmmr_max);
    seti("lmmr-count", cfg.lmmr_count);
    setd("contour-offset", cfg.contour_offset);
    setd("rel-tol", cfg.rel_tol);
    setd("half-width", cfg.half_width);
    setl("max-nodes", cfg.max_nodes);
    setl("paths", cfg.paths);
    setd("dt", cfg.mc_dt);
    if (kv.count("seed") && !cfg.seed) cfg.seed = std::stoull(kv.at("seed"));
    if (kv.count("antithetic") && !cfg.antithetic) cfg.antithetic = kv.at("antithetic") == "1";
    if (kv.count("reference") && !cfg.reference) cfg.reference = kv.at("reference") == "1";
    setd("y-min", cfg.y_min);
    setd("y-max", cfg.y_max);
    setd("y-step", cfg.y_step);
    setd("norm-y0", cfg.norm_y0);
    if (kv.count("out") && cfg.out.empty()) cfg.out = kv.at("out");
}

// ---- resolved settings ------------------------------------------------------

struct Resolved {
    lvsmile::ModelParams params;
    double t;
    int order;
    std::vector<double> strikes;
    lvsmile::ContourSpec contour;
    lvsmile::McConfig mc;
    double norm_y0;
    std::string out;
};

Resolved resolve(const RunConfig& cfg, bool need_strikes) {
    if (!cfg.a) throw std::invalid_argument("--a is required");
    if (!cfg.beta) throw std::invalid_argument("--beta is required");
    if (!cfg.t) throw std::invalid_argument("--t is required");
    if (cfg.eps.has_value() == cfg.sqrt_eps.has_value())
        throw std::invalid_argument("exactly one of --eps / --sqrt-eps is required");
    const double eps = cfg.eps ? *cfg.eps : (*cfg.sqrt_eps) * (*cfg.sqrt_eps);
    const double y = cfg.y.value_or(0.0);

    lvsmile::ModelParams params(*cfg.a, eps, *cfg.beta, y);
    const double t = *cfg.t;
    if (!(t > 0.0)) throw std::invalid_argument("--t must be positive");
    const int order = cfg.order.value_or(10);

    std::vector<double> strikes = cfg.ks;
    if (strikes.empty() && cfg.lmmr_count) {
        if (!cfg.lmmr_min || !cfg.lmmr_max)
            throw std::invalid_argument("--lmmr-min/--lmmr-max/--lmmr-count must come together");
        const int n = *cfg.lmmr_count;
        if (n < 1) throw std::invalid_argument("--lmmr-count must be >= 1");
        for (int i = 0; i < n; ++i) {
            const double lmmr =
                (n == 1) ? *cfg.lmmr_min
                         : *cfg.lmmr_min + (*cfg.lmmr_max - *cfg.lmmr_min) * i / (n - 1);
            strikes.push_back(y + t * lmmr);  // k = y + t * LMMR
        }
    }
    if (need_strikes && strikes.empty())
        throw std::invalid_argument("no strikes: give --k or an --lmmr range");

    lvsmile::ContourSpec contour;
    contour.offset = cfg.contour_offset.value_or(-1.5);
    if (cfg.half_width) contour.half_width = *cfg.half_width;
    if (cfg.rel_tol) contour.rel_tol = *cfg.rel_tol;
    if (cfg.max_nodes) contour.max_nodes = *cfg.max_nodes;

    lvsmile::McConfig mc;
    mc.n_paths = cfg.paths.value_or(200000);
    mc.dt = cfg.mc_dt.value_or(1e-3);
    mc.seed = cfg.seed.value_or(1);
    mc.antithetic = cfg.antithetic;

    return Resolved{params,  t,  order, strikes,
                    contour, mc, cfg.norm_y0.value_or(y - lvsmile::kDefaultNormOffset),
                    cfg.out};
}

// ---- manifest -----------------------------------------------------------------
// Written next to every output file; feeding it back through --config
// reproduces the run byte for byte.

void write_manifest(const RunConfig& cfg, const Resolved& r, const std::string& path) {
    std::ofstream out(path);
    out << "command=" << cfg.command << "\n";
    out << "version=" << lvsmile::kVersion << "\n";
    out << "a=" << fmt17(r.params.a) << "\n";
    out << "eps=" << fmt17(r.params.eps) << "\n";
    out << "beta=" << fmt17(r.params.beta) << "\n";
    out << "y=" << fmt17(r.params.y) << "\n";
    out << "t=" << fmt17(r.t) << "\n";
    out << "order=" << r.order << "\n";
    if (!r.strikes.empty()) {
        out << "k=";
        for (size_t i = 0; i < r.strikes.size(); ++i)
            out << (i ? "," : "") << fmt17(r.strikes[i]);
        out << "\n";
    }
    out << "contour-offset=" << fmt17(r.contour.offset) << "\n";
    if (r.contour.half_width) out << "half-width=" << fmt17(*r.contour.half_width) << "\n";
    out << "rel-tol=" << fmt17(r.contour.rel_tol) << "\n";
    out << "max-nodes=" << r.contour.max_nodes << "\n";
    if (cfg.command == "mc") {
        out << "paths=" << r.mc.n_paths << "\n";
        out << "dt=" << fmt17(r.mc.dt) << "\n";
        out << "seed=" << r.mc.seed << "\n";
        out << "antithetic=" << (r.mc.antithetic ? 1 : 0) << "\n";
    }
    if (cfg.command == "smile") out << "reference=" << (cfg.reference ? 1 : 0) << "\n";
    if (cfg.command == "density") {
        out << "y-min=" << fmt17(*cfg.y_min) << "\n";
        out << "y-max=" << fmt17(*cfg.y_max) << "\n";
        out << "y-step=" << fmt17(*cfg.y_step) << "\n";
    }
    if (cfg.command == "check") out << "norm-y0=" << fmt17(r.norm_y0) << "\n";
    out << "out=" << r.out << "\n";
}

void emit(const std::string& out_path, const std::string& content, const RunConfig& cfg,
          const Resolved& r) {
    if (out_path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream f(out_path);
    if (!f) throw std::invalid_argument("cannot write " + out_path);
    f << content;
    write_manifest(cfg, r, out_path + ".manifest");
}

void bound_warnings(const Resolved& r) {
    using namespace lvsmile;
    if (!check_series_bound(r.params, r.norm_y0)) {
        std::cerr << "warning: series-convergence bound violated at norm point y0="
                  << r.norm_y0 << "\n";
    }
    if (r.params.eps > 0.0 && r.params.beta < 0.0) {
        const double ystar = validity_threshold(r.params);
        if (r.params.y < ystar) {
            std::cerr << "warning: pricing point y=" << r.params.y
                      << " below the validity threshold y*=" << ystar << "\n";
        }
    }
}

// ---- subcommands ----------------------------------------------------------------

int cmd_price(const RunConfig& cfg) {
    const Resolved r = resolve(cfg, true);
    bound_warnings(r);
    std::string csv = "k,lmmr,order,term,cumulative_price\n";
    for (double k : r.strikes) {
        const auto series =
            lvsmile::price(r.params, lvsmile::PayoffSpec::call_at(k), r.t, r.order, r.contour);
        double cum = 0.0;
        for (int n = 0; n <= r.order; ++n) {
            cum += series.terms[n];
            csv += fmt17(k) + "," + fmt17((k - r.params.y) / r.t) + "," + std::to_string(n) +
                   "," + fmt17(series.terms[n]) + "," + fmt17(cum) + "\n";
        }
    }
    emit(r.out, csv, cfg, r);
    return kExitOk;
}

int cmd_smile(const RunConfig& cfg) {
    const Resolved r = resolve(cfg, true);
    bound_warnings(r);
    const int order = std::min(r.order, lvsmile::kMaxSmileOrder);
    const auto curve =
        lvsmile::smile_curve(r.params, r.t, r.strikes, order, r.contour, cfg.reference);
    std::string csv = "k,lmmr,order,sigma_n,sigma_reference\n";
    for (const auto& pt : curve.points) {
        if (!pt.error.empty()) {
            std::cerr << "warning: strike k=" << pt.k << " failed: " << pt.error << "\n";
            for (int n = 0; n <= order; ++n) {
                csv += fmt17(pt.k) + "," + fmt17(pt.lmmr) + "," + std::to_string(n) +
                       ",nan," + std::string(cfg.reference ? "nan" : "") + "\n";
            }
            continue;
        }
        for (int n = 0; n <= order; ++n) {
            csv += fmt17(pt.k) + "," + fmt17(pt.lmmr) + "," + std::to_string(n) + "," +
                   fmt17(pt.sigmas[n]) + ",";
            if (pt.reference) csv += fmt17(*pt.reference);
            csv += "\n";
        }
    }
    emit(r.out, csv, cfg, r);
    return kExitOk;
}

int cmd_density(const RunConfig& cfg) {
    const Resolved r = resolve(cfg, false);
    if (!cfg.y_min || !cfg.y_max || !cfg.y_step)
        throw std::invalid_argument("density needs --y-min --y-max --y-step");
    bound_warnings(r);
    std::vector<double> grid;
    for (double y = *cfg.y_min; y <= *cfg.y_max + 0.5 * *cfg.y_step; y += *cfg.y_step)
        grid.push_back(y);
    lvsmile::ContourSpec contour = r.contour;
    if (!cfg.contour_offset) contour.offset = 0.0;  // real contour for densities
    const auto dg = lvsmile::density(r.params, r.t, r.params.y, r.order, grid, contour);
    std::string csv = "y,order,p_n\n";
    for (size_t j = 0; j < dg.y_values.size(); ++j) {
        for (int n = 0; n <= r.order; ++n) {
            csv += fmt17(dg.y_values[j]) + "," + std::to_string(n) + "," +
                   fmt17(dg.p_orders[n][j]) + "\n";
        }
    }
    emit(r.out, csv, cfg, r);
    return kExitOk;
}

int cmd_mc(const RunConfig& cfg) {
    const Resolved r = resolve(cfg, true);
    bound_warnings(r);
    const auto estimates = lvsmile::simulate_calls(r.params, r.t, r.strikes, r.mc);
    std::string csv = "k,lmmr,mc_price,std_err,spectral_price,implied_mc,implied_spectral\n";
    for (size_t i = 0; i < r.strikes.size(); ++i) {
        const double k = r.strikes[i];
        const auto series =
            lvsmile::price(r.params, lvsmile::PayoffSpec::call_at(k), r.t, r.order, r.contour);
        auto safe_iv = [&](double p) -> std::string {
            try {
                return fmt17(lvsmile::implied_vol(p, r.t, r.params.y, k));
            } catch (const std::exception&) {
                return "nan";  // wing estimates can land outside the arbitrage interval
            }
        };
        csv += fmt17(k) + "," + fmt17((k - r.params.y) / r.t) + "," +
               fmt17(estimates[i].price) + "," + fmt17(estimates[i].std_error) + "," +
               fmt17(series.total) + "," + safe_iv(estimates[i].price) + "," +
               safe_iv(series.total) + "\n";
    }
    emit(r.out, csv, cfg, r);
    return kExitOk;
}

int cmd_check(const RunConfig& cfg) {
    const Resolved r = resolve(cfg, false);
    std::ostringstream rep;
    rep << "lvsmile " << lvsmile::kVersion << " model check\n";
    rep << "model: a=" << r.params.a << " eps=" << r.params.eps << " beta=" << r.params.beta
        << " y=" << r.params.y << " t=" << r.t << " order=" << r.order << "\n";

    if (r.params.eps == 0.0) {
        rep << "series bound: trivially satisfied (eps = 0)\n";
        rep << "validity threshold: -inf (eps = 0)\n";
    } else if (r.params.beta == 0.0) {
        rep << "series bound: not applicable at beta = 0 (perturbation norm is infinite);\n";
        rep << "  the series still sums to the flat-volatility price at sqrt(a^2 + eps)\n";
    } else {
        const bool ok = lvsmile::check_series_bound(r.params, r.norm_y0);
        rep << "series bound at norm point y0=" << r.norm_y0 << ": eps=" << r.params.eps
            << " vs a^2/||eta|| = "
            << r.params.a * r.params.a / lvsmile::eta_norm(r.params.beta, r.norm_y0) << " -> "
            << (ok ? "satisfied" : "violated") << "\n";
        const double ystar = lvsmile::validity_threshold(r.params);
        rep << "validity threshold y* = " << ystar << "; pricing point y=" << r.params.y
            << (r.params.y < ystar ? " is below y* (series may converge slowly)"
                                   : " is inside the guaranteed region")
            << "\n";
    }

    const auto bad = lvsmile::bad_offsets(r.order, r.params.beta);
    rep << "contour offsets to avoid (order " << r.order << "):";
    for (double b : bad) rep << " " << b;
    rep << "\n";
    const double resolved = lvsmile::resolve_offset(r.contour.offset, r.order, r.params.beta,
                                                    lvsmile::PayoffKind::call);
    rep << "call contour offset: requested " << r.contour.offset << ", using " << resolved
        << (resolved == r.contour.offset ? "" : " (nudged)") << "\n";
    rep << "auto half-width at these settings: "
        << lvsmile::auto_half_width(r.t, r.params.a, r.order, r.params.beta, r.contour.rel_tol)
        << "\n";

    const std::string report = rep.str();
    if (!r.out.empty()) {
        emit(r.out, report, cfg, r);
    }
    std::cout << report;
    return kExitOk;
}

void add_common(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--a", cfg.a, "base volatility a");
    sub->add_option("--eps", cfg.eps, "perturbation size eps");
    sub->add_option("--sqrt-eps", cfg.sqrt_eps, "sqrt(eps); alternative to --eps");
    sub->add_option("--beta", cfg.beta, "elasticity exponent beta (<= 0)");
    sub->add_option("--y", cfg.y, "log spot (default 0)");
    sub->add_option("--t", cfg.t, "maturity in years");
    sub->add_option("--order", cfg.order, "series truncation order N (default 10)");
    sub->add_option("--k", cfg.ks, "log strikes (repeatable)");
    sub->add_option("--lmmr-min", cfg.lmmr_min, "lowest log-moneyness-to-maturity ratio");
    sub->add_option("--lmmr-max", cfg.lmmr_max, "highest log-moneyness-to-maturity ratio");
    sub->add_option("--lmmr-count", cfg.lmmr_count, "number of strikes in the LMMR range");
    sub->add_option("--contour-offset", cfg.contour_offset, "Im(lambda) of the contour");
    sub->add_option("--rel-tol", cfg.rel_tol, "quadrature relative tolerance");
    sub->add_option("--half-width", cfg.half_width, "contour truncation half-width");
    sub->add_option("--max-nodes", cfg.max_nodes, "quadrature node budget");
    sub->add_option("--out", cfg.out, "output file (stdout when omitted)");
    sub->add_option("--config", cfg.config_path, "flat key=value config file");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"series pricing and the exact smile expansion for the local-vol model "
                 "dX = sqrt(a^2 + eps X^beta) X dW"};
    app.require_subcommand(1);
    RunConfig cfg;

    CLI::App* price_cmd = app.add_subcommand("price", "per-order series prices as CSV");
    CLI::App* smile_cmd = app.add_subcommand("smile", "implied-vol expansion curves as CSV");
    CLI::App* density_cmd = app.add_subcommand("density", "transition-density orders as CSV");
    CLI::App* mc_cmd = app.add_subcommand("mc", "Monte Carlo vs series comparison as CSV");
    CLI::App* check_cmd = app.add_subcommand("check", "convergence and contour diagnostics");
    for (CLI::App* sub : {price_cmd, smile_cmd, density_cmd, mc_cmd, check_cmd})
        add_common(sub, cfg);
    smile_cmd->add_flag("--reference", cfg.reference,
                        "also invert the order-10 price to a reference vol");
    mc_cmd->add_option("--paths", cfg.paths, "Monte Carlo path count");
    mc_cmd->add_option("--dt", cfg.mc_dt, "Euler step in years");
    mc_cmd->add_option("--seed", cfg.seed, "RNG seed");
    mc_cmd->add_flag("--antithetic", cfg.antithetic, "antithetic pairs");
    density_cmd->add_option("--y-min", cfg.y_min, "density grid start");
    density_cmd->add_option("--y-max", cfg.y_max, "density grid end");
    density_cmd->add_option("--y-step", cfg.y_step, "density grid step");
    check_cmd->add_option("--norm-y0", cfg.norm_y0,
                          "truncation point of the perturbation norm (default y - 5)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (!cfg.config_path.empty()) apply_config(cfg, read_config_file(cfg.config_path));
        if (price_cmd->parsed()) { cfg.command = "price"; return cmd_price(cfg); }
        if (smile_cmd->parsed()) { cfg.command = "smile"; return cmd_smile(cfg); }
        if (density_cmd->parsed()) { cfg.command = "density"; return cmd_density(cfg); }
        if (mc_cmd->parsed()) { cfg.command = "mc"; return cmd_mc(cfg); }
        if (check_cmd->parsed()) { cfg.command = "check"; return cmd_check(cfg); }
        return kExitConfig;
    } catch (const lvsmile::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
}
