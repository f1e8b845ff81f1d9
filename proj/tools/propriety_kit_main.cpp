#include "propriety/engine.hpp"
#include "propriety/errors.hpp"
#include "propriety/glm.hpp"
#include "propriety/io.hpp"
#include "propriety/jeffreys.hpp"
#include "propriety/oracle.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

namespace {

using namespace propriety;

constexpr int kExitProper = 0;
constexpr int kExitImproper = 1;
constexpr int kExitIndeterminate = 2;
constexpr int kExitInputError = 3;
constexpr int kExitModelError = 4;
constexpr int kExitInternalError = 5;

struct ModelOptions {
    std::string model_path;
    std::string x_path, z_path, y_path, m_path;
    std::string family = "bernoulli";
    std::string link = "logit";
    double link_moment_order = -1.0;
    std::vector<std::string> block_specs;
};

void add_model_options(CLI::App* cmd, ModelOptions& opts) {
    cmd->add_option("--model", opts.model_path, "model document (JSON)");
    cmd->add_option("--x", opts.x_path, "fixed-effect design matrix (CSV)");
    cmd->add_option("--z", opts.z_path, "random-effect design matrix (CSV)");
    cmd->add_option("--y", opts.y_path, "responses (CSV)");
    cmd->add_option("--m", opts.m_path, "binomial trial counts (CSV)");
    cmd->add_option("--family", opts.family, "binomial | bernoulli | poisson");
    cmd->add_option("--link", opts.link, "logit | probit | log | user_cdf");
    cmd->add_option("--link-moment-order", opts.link_moment_order,
                    "declared finite moment order for user_cdf links");
    cmd->add_option("--block", opts.block_specs,
                    "random-effect block as q:a:b (repeatable)");
}

PriorBlock parse_block_spec(const std::string& spec) {
    const auto c1 = spec.find(':');
    const auto c2 = spec.find(':', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
        throw ParseError("block spec must be q:a:b, got " + spec);
    PriorBlock blk;
    blk.q = std::stoi(spec.substr(0, c1));
    blk.a = rational_from_decimal(spec.substr(c1 + 1, c2 - c1 - 1));
    blk.b = rational_from_decimal(spec.substr(c2 + 1));
    return blk;
}

ValidatedModel load_model(const ModelOptions& opts) {
    GlmmModel model;
    if (!opts.model_path.empty()) {
        model = model_from_json_file(opts.model_path);
    } else {
        if (opts.x_path.empty() || opts.z_path.empty() || opts.y_path.empty())
            throw ParseError("provide --model or all of --x/--z/--y");
        FamilyKind family;
        if (opts.family == "binomial") family = FamilyKind::Binomial;
        else if (opts.family == "bernoulli" || opts.family == "binary")
            family = FamilyKind::Bernoulli;
        else if (opts.family == "poisson") family = FamilyKind::Poisson;
        else throw ParseError("unknown family: " + opts.family);

        Link link;
        if (opts.link == "logit") link.kind = LinkKind::Logit;
        else if (opts.link == "probit") link.kind = LinkKind::Probit;
        else if (opts.link == "log") link.kind = LinkKind::Log;
        else if (opts.link == "user_cdf") {
            link.kind = LinkKind::UserCdf;
            if (opts.link_moment_order >= 0.0)
                link.declared_moment_order = opts.link_moment_order;
        } else {
            throw ParseError("unknown link: " + opts.link);
        }

        std::vector<PriorBlock> blocks;
        for (const auto& spec : opts.block_specs)
            blocks.push_back(parse_block_spec(spec));
        model = model_from_csv(opts.x_path, opts.z_path, opts.y_path, opts.m_path,
                               family, link, blocks);
    }
    return validate(model);
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::string token;
    for (char c : text + ",") {
        if (c == ',') {
            if (!token.empty()) out.push_back(std::stod(token));
            token.clear();
        } else {
            token.push_back(c);
        }
    }
    return out;
}

// "lo:hi:count" -> log-spaced grid
std::vector<double> parse_tau_grid(const std::string& text) {
    const auto c1 = text.find(':');
    const auto c2 = text.find(':', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
        throw ParseError("tau grid must be lo:hi:count, got " + text);
    const double lo = std::stod(text.substr(0, c1));
    const double hi = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
    const int count = std::stoi(text.substr(c2 + 1));
    if (!(lo > 0.0) || !(hi > lo) || count < 2)
        throw ParseError("tau grid needs 0 < lo < hi and count >= 2");
    std::vector<double> grid(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
        grid[static_cast<std::size_t>(i)] =
            lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1));
    return grid;
}

int run_check(const ModelOptions& opts, bool assert_proper_psi, const std::string& format) {
    const ValidatedModel model = load_model(opts);
    const Verdict v = verdict(model, assert_proper_psi);
    if (format == "json")
        std::cout << verdict_to_json(v).dump(2) << "\n";
    else
        std::cout << verdict_to_text(v);
    switch (v.outcome) {
        case Outcome::Proper: return kExitProper;
        case Outcome::Improper: return kExitImproper;
        case Outcome::Indeterminate: return kExitIndeterminate;
    }
    return kExitInternalError;
}

int run_jeffreys(const ModelOptions& opts, const std::string& tau_grid) {
    const ValidatedModel model = load_model(opts);
    const JeffreysPrior prior = build_jeffreys(model);
    for (int j = 0; j < prior.block_count(); ++j) {
        std::printf("# block %d c =", j + 1);
        for (double c : prior.c_constants(j)) std::printf(" %.12g", c);
        std::printf("\n");
    }
    std::printf("block,tau,density,envelope\n");
    const std::vector<double> grid = parse_tau_grid(tau_grid);
    for (int j = 0; j < prior.block_count(); ++j)
        for (double tau : grid)
            std::printf("%d,%.12g,%.12g,%.12g\n", j + 1, tau,
                        prior.density(j, tau), prior.envelope(j, tau));
    return 0;
}

int run_crossover(const std::string& family, int n, double beta_hat, double tol) {
    FamilyKind kind;
    if (family == "bernoulli" || family == "binary")
        kind = FamilyKind::Bernoulli;
    else if (family == "poisson")
        kind = FamilyKind::Poisson;
    else
        throw OutOfScope("crossover families: bernoulli (binary) or poisson");
    std::printf("%.10g\n", crossover_tau0(kind, n, beta_hat, tol));
    return 0;
}

int run_oracle(const ModelOptions& opts, const std::string& boxes) {
    const ValidatedModel model = load_model(opts);
    const std::vector<double> widths = parse_double_list(boxes);
    if (widths.empty()) throw ParseError("--boxes needs at least one half-width");
    const auto estimates = truncated_cy(model, widths);
    std::printf("B,value,ratio\n");
    for (std::size_t i = 0; i < estimates.size(); ++i) {
        const double ratio = i == 0 ? std::numeric_limits<double>::quiet_NaN()
                                    : estimates[i].value / estimates[i - 1].value;
        std::printf("%.12g,%.12g,%.12g\n", estimates[i].box, estimates[i].value, ratio);
    }
    return 0;
}

int run_fit_glm(const ModelOptions& opts, const std::string& format) {
    const ValidatedModel model = load_model(opts);
    const GlmFit fit = fit_glm(model);
    if (format == "json") {
        std::cout << fit_to_json(fit).dump(2) << "\n";
    } else {
        std::printf("beta_hat =");
        for (Eigen::Index i = 0; i < fit.beta_hat.size(); ++i)
            std::printf(" %.12g", fit.beta_hat(i));
        std::printf("\nconverged = %s after %d iterations\n",
                    fit.converged ? "yes" : "no", fit.iterations);
        std::printf("separation = %s\n", fit.separation_flag ? "yes" : "no");
        std::printf("deviance = %.12g\n", fit.deviance);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"posterior propriety toolkit for binomial and poisson GLMMs"};
    app.require_subcommand(1);

    ModelOptions check_opts;
    bool assert_proper_psi = false;
    std::string check_format = "text";
    auto* check = app.add_subcommand("check", "decide posterior propriety");
    add_model_options(check, check_opts);
    check->add_flag("--assert-proper-psi", assert_proper_psi,
                    "enable the exponential-family rank necessity, which "
                    "assumes a proper covariance prior");
    check->add_option("--format", check_format)->check(CLI::IsMember({"text", "json"}));

    ModelOptions jeffreys_opts;
    std::string tau_grid = "1e-4:1e6:100";
    auto* jeffreys = app.add_subcommand("jeffreys",
                                        "emit the approximate Jeffreys density table");
    add_model_options(jeffreys, jeffreys_opts);
    jeffreys->add_option("--tau-grid", tau_grid, "log grid lo:hi:count");

    std::string cross_family = "poisson";
    int cross_n = 30;
    double cross_beta = 0.0, tol_root = 1e-10;
    auto* crossover = app.add_subcommand("crossover",
                                         "tau where the Jeffreys and comparator "
                                         "priors intersect (one-intercept case)");
    crossover->add_option("--family", cross_family, "bernoulli (binary) | poisson");
    crossover->add_option("--n", cross_n, "number of observations");
    crossover->add_option("--beta-hat", cross_beta, "fixed-effects fit value");
    crossover->add_option("--tol-root", tol_root, "relative root tolerance");

    ModelOptions oracle_opts;
    std::string boxes = "10,20,35,50";
    auto* oracle = app.add_subcommand("oracle",
                                      "truncated normalizing-integral sequence");
    add_model_options(oracle, oracle_opts);
    oracle->add_option("--boxes", boxes, "comma-separated beta half-widths");

    ModelOptions fit_opts;
    std::string fit_format = "text";
    auto* fit = app.add_subcommand("fit-glm", "fixed-effects-only fit");
    add_model_options(fit, fit_opts);
    fit->add_option("--format", fit_format)->check(CLI::IsMember({"text", "json"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (check->parsed()) return run_check(check_opts, assert_proper_psi, check_format);
        if (jeffreys->parsed()) return run_jeffreys(jeffreys_opts, tau_grid);
        if (crossover->parsed())
            return run_crossover(cross_family, cross_n, cross_beta, tol_root);
        if (oracle->parsed()) return run_oracle(oracle_opts, boxes);
        if (fit->parsed()) return run_fit_glm(fit_opts, fit_format);
    } catch (const FileNotFound& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitModelError;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternalError;
    }
    return kExitInternalError;
}
