#include "mvc/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "mvc/deletion.hpp"
#include "mvc/dmc.hpp"
#include "mvc/errors.hpp"
#include "mvc/fbl.hpp"
#include "mvc/largedev.hpp"
#include "mvc/multiview.hpp"
#include "mvc/prob.hpp"
#include "mvc/special.hpp"

namespace mvc::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

struct Common {
    std::string format = "csv";
    std::string unit = "nats";
    std::uint64_t seed = 12345;
    int threads = 0;
    std::size_t budget_types = 10'000'000;
    std::string input = "uniform";
};

void add_format_options(CLI::App* sub, Common& c) {
    sub->add_option("--format", c.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--seed", c.seed, "seed for randomized sweeps");
    sub->add_option("--threads", c.threads, "worker threads for sweeps (0 = cores)");
}

void add_unit_option(CLI::App* sub, Common& c) {
    sub->add_option("--unit", c.unit, "nats or bits")->check(CLI::IsMember({"nats", "bits"}));
}

void add_budget_option(CLI::App* sub, Common& c) {
    sub->add_option("--budget-types", c.budget_types, "type-class enumeration budget");
}

std::string fmt12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

// report = ordered rows plus column names; serialized once at the end
struct Report {
    std::string command;
    std::vector<std::string> columns;
    std::vector<ordered_json> rows;
    bool print_seed = false;  // randomized sweeps record their seed

    void add_row(ordered_json row) { rows.push_back(std::move(row)); }
};

void write_report(const Report& rep, const Common& c, std::ostream& out) {
    if (c.format == "json") {
        ordered_json doc;
        doc["schema_version"] = 1;
        doc["command"] = rep.command;
        doc["unit"] = c.unit;
        doc["seed"] = c.seed;
        doc["rows"] = ordered_json::array();
        for (const auto& r : rep.rows) doc["rows"].push_back(r);
        out << doc.dump(2) << '\n';
        return;
    }
    if (rep.print_seed) out << "# seed=" << c.seed << '\n';
    for (std::size_t i = 0; i < rep.columns.size(); ++i)
        out << (i ? "," : "") << rep.columns[i];
    out << '\n';
    for (const auto& r : rep.rows) {
        for (std::size_t i = 0; i < rep.columns.size(); ++i) {
            const auto& v = r.at(rep.columns[i]);
            out << (i ? "," : "");
            if (v.is_null())
                ;  // empty cell
            else if (v.is_number_float())
                out << fmt12(v.get<double>());
            else if (v.is_number_integer())
                out << v.get<long long>();
            else
                out << v.get<std::string>();
        }
        out << '\n';
    }
}

// unit helpers: conversion happens exactly once, here
double u1(const Common& c, double nats) {
    return c.unit == "bits" ? nats / M_LN2 : nats;
}
double u2(const Common& c, double nats2) {
    return c.unit == "bits" ? nats2 / (M_LN2 * M_LN2) : nats2;
}
std::string n1(const Common& c, const std::string& stem) {
    return stem + (c.unit == "bits" ? "_bits" : "_nats");
}
std::string n2(const Common& c, const std::string& stem) {
    return stem + (c.unit == "bits" ? "_bits2" : "_nats2");
}

FiniteDistribution parse_input_dist(const std::string& text, int alphabet) {
    if (text == "uniform") return FiniteDistribution::uniform(alphabet);
    std::vector<double> p;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) p.push_back(std::stod(tok));
    if (static_cast<int>(p.size()) != alphabet)
        throw InvalidInput("input distribution has " + std::to_string(p.size()) +
                           " entries, channel expects " + std::to_string(alphabet));
    return FiniteDistribution::from_probs(std::move(p));
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stoi(tok));
    if (out.empty()) throw InvalidInput("empty integer list");
    return out;
}

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> out;
    if (text.find(':') != std::string::npos) {
        double lo = 0.0, hi = 0.0, step = 0.0;
        if (std::sscanf(text.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) != 3 || step <= 0.0)
            throw InvalidInput("grid: expected lo:hi:step with positive step");
        const int count = static_cast<int>(std::floor((hi - lo) / step + 1e-9)) + 1;
        for (int i = 0; i < count; ++i) out.push_back(lo + i * step);
        return out;
    }
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    if (out.empty()) throw InvalidInput("empty grid");
    return out;
}

void parallel_map(std::size_t count, int threads, const std::function<void(std::size_t)>& fn) {
    const int hw = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    const int t = std::min<std::size_t>(count, static_cast<std::size_t>(threads > 0 ? threads : hw));
    if (t <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (count + t - 1) / static_cast<std::size_t>(t);
    for (int w = 0; w < t; ++w) {
        const std::size_t begin = std::min(count, static_cast<std::size_t>(w) * chunk);
        const std::size_t end = std::min(count, begin + chunk);
        if (begin < end)
            pool.emplace_back([begin, end, &fn] {
                for (std::size_t i = begin; i < end; ++i) fn(i);
            });
    }
    for (auto& th : pool) th.join();
}

// ---- subcommand bodies ------------------------------------------------

void cmd_chernoff(const Common& c, const std::string& channel_spec, std::ostream& out) {
    const Dmc ch = parse_channel_spec(channel_spec);
    Report rep;
    rep.command = "chernoff";
    rep.columns = {"x", "x_tilde", n1(c, "chernoff")};
    for (int x = 0; x < ch.input_size(); ++x)
        for (int xt = x + 1; xt < ch.input_size(); ++xt) {
            ordered_json row;
            row["x"] = x;
            row["x_tilde"] = xt;
            row[n1(c, "chernoff")] = u1(c, chernoff_information(ch.row(x), ch.row(xt)));
            rep.add_row(std::move(row));
        }
    write_report(rep, c, out);
}

void cmd_mvinfo(const Common& c, const std::string& channel_spec, int d, std::ostream& out) {
    const Dmc ch = parse_channel_spec(channel_spec);
    const FiniteDistribution in = parse_input_dist(c.input, ch.input_size());
    MultiViewOptions opt;
    opt.max_type_classes = c.budget_types;
    const MultiViewReport r = multi_view_report(ch, in, d, opt);
    Report rep;
    rep.command = "mvinfo";
    rep.columns = {"d", n1(c, "cond_entropy"), n1(c, "mutual_info"), n2(c, "dispersion"),
                   n2(c, "cross_term")};
    ordered_json row;
    row["d"] = r.d;
    row[n1(c, "cond_entropy")] = u1(c, r.cond_entropy);
    row[n1(c, "mutual_info")] = u1(c, r.mutual_info);
    row[n2(c, "dispersion")] = u2(c, r.dispersion);
    row[n2(c, "cross_term")] = u2(c, r.cross_term);
    rep.add_row(std::move(row));
    write_report(rep, c, out);
}

void cmd_dispersion(const Common& c, const std::string& channel_spec, int d_min, int d_max,
                    std::ostream& out) {
    if (d_min < 0 || d_max < d_min) throw InvalidInput("dispersion: bad d range");
    const Dmc ch = parse_channel_spec(channel_spec);
    const FiniteDistribution in = parse_input_dist(c.input, ch.input_size());
    MultiViewOptions opt;
    opt.max_type_classes = c.budget_types;
    const double vx = varentropy(in);
    Report rep;
    rep.command = "dispersion";
    rep.columns = {"d", n1(c, "mutual_info"), n2(c, "dispersion"), n1(c, "entropy_gap"),
                   n2(c, "dispersion_gap")};
    std::vector<MultiViewReport> rows(static_cast<std::size_t>(d_max - d_min) + 1);
    parallel_map(rows.size(), c.threads, [&](std::size_t i) {
        rows[i] = multi_view_report(ch, in, d_min + static_cast<int>(i), opt);
    });
    for (const auto& r : rows) {
        ordered_json row;
        row["d"] = r.d;
        row[n1(c, "mutual_info")] = u1(c, r.mutual_info);
        row[n2(c, "dispersion")] = u2(c, r.dispersion);
        row[n1(c, "entropy_gap")] = u1(c, r.cond_entropy);
        row[n2(c, "dispersion_gap")] = u2(c, std::abs(vx - r.dispersion));
        rep.add_row(std::move(row));
    }
    write_report(rep, c, out);
}

void cmd_rate_fit(const Common& c, const std::string& channel_spec, const std::string& target,
                  int d_min, int d_max, std::ostream& out) {
    const Dmc ch = parse_channel_spec(channel_spec);
    const FiniteDistribution in = parse_input_dist(c.input, ch.input_size());
    MultiViewOptions opt;
    opt.max_type_classes = c.budget_types;
    const RateTarget t =
        target == "dispersion_gap" ? RateTarget::DispersionGap : RateTarget::EntropyGap;
    if (d_min < 0 || d_max < 0) {
        const auto window = default_rate_window(ch, in, t, opt);
        d_min = window.first;
        d_max = window.second;
    }
    const ExponentReport r = fit_convergence_rate(ch, in, d_min, d_max, t, opt);
    Report rep;
    rep.command = "rate-fit";
    rep.columns = {"target", "d_min", "d_max", n1(c, "fitted_rate"), n1(c, "predicted_rate"),
                   "relative_gap"};
    ordered_json row;
    row["target"] = target;
    row["d_min"] = r.d_min;
    row["d_max"] = r.d_max;
    row[n1(c, "fitted_rate")] = u1(c, r.fitted_rate);
    row[n1(c, "predicted_rate")] = u1(c, r.predicted_rate);
    row["relative_gap"] = r.relative_gap;
    rep.add_row(std::move(row));
    write_report(rep, c, out);
}

void cmd_bin_cap(const Common& c, std::int64_t d, double p, std::ostream& out) {
    Report rep;
    rep.command = "bin-cap";
    rep.columns = {"d", "p", n1(c, "c_bin")};
    ordered_json row;
    row["d"] = d;
    row["p"] = p;
    row[n1(c, "c_bin")] = u1(c, binomial_capacity({d, p}));
    rep.add_row(std::move(row));
    write_report(rep, c, out);
}

void cmd_poi_cap(const Common& c, double d, double p, double tail_tol, std::ostream& out) {
    const PoissonCapacityResult r = poisson_capacity_detail({d, p, tail_tol});
    Report rep;
    rep.command = "poi-cap";
    rep.columns = {"d", "p", n1(c, "c_poi"), n1(c, "truncation_bound")};
    ordered_json row;
    row["d"] = d;
    row["p"] = p;
    row[n1(c, "c_poi")] = u1(c, r.value);
    row[n1(c, "truncation_bound")] = u1(c, r.truncation_bound);
    rep.add_row(std::move(row));
    write_report(rep, c, out);
}

void cmd_poi_sandwich(const Common& c, const std::string& d_list, const std::string& p_grid,
                      std::ostream& out) {
    const std::vector<int> ds = parse_int_list(d_list);
    const std::vector<double> ps = parse_grid(p_grid);
    const std::vector<SweepRow> rows = figure1_sweep(ds, ps, c.threads);
    if (c.format == "json") {
        Report rep;
        rep.command = "poi-sandwich";
        rep.columns = {"d", "p", "c_bin_nats", "c_poi_nats", "gap", "thm3_bound"};
        for (const auto& r : rows) {
            ordered_json row;
            row["d"] = r.d;
            row["p"] = r.p;
            row["c_bin_nats"] = r.c_bin;
            row["c_poi_nats"] = r.c_poi;
            row["gap"] = r.gap;
            row["thm3_bound"] = r.thm3_bound;
            rep.add_row(std::move(row));
        }
        write_report(rep, c, out);
        return;
    }
    write_figure1_csv(out, rows);  // pinned byte format, always nats
}

void cmd_del_rho(const Common& c, int n, double delta, int max_n, const std::string& trace_file,
                 std::ostream& out, std::ostream& err) {
    RhoOptions opt;
    opt.threads = c.threads;
    if (max_n > opt.max_n) {
        opt.max_n = max_n;
        if (n > 8) {
            const double pairs = std::ldexp(1.0, 2 * n - 1);  // ~4^n / 2 before pruning
            err << "# pair search over ~" << fmt12(pairs / 4.0)
                << " canonical pairs; cost grows as 4^n\n";
        }
    }
    std::vector<PairTrace> trace;
    const RhoBoundReport r = rho_n_exact(n, delta, opt, trace_file.empty() ? nullptr : &trace);
    if (!trace_file.empty()) {
        std::ofstream tf(trace_file);
        if (!tf) throw InvalidInput("cannot open trace file '" + trace_file + "'");
        tf << "x,x_tilde,rho_pair_nats\n";
        for (const auto& t : trace)
            tf << t.x << ',' << t.x_tilde << ',' << fmt12(t.rho) << '\n';
    }
    Report rep;
    rep.command = "del-rho";
    rep.columns = {"n", "delta", n1(c, "rho_exact"), n1(c, "bound_naive"),
                   n1(c, "bound_alternating"), n1(c, "bound_fractional"), "argmin_x",
                   "argmin_x_tilde"};
    ordered_json row;
    row["n"] = r.n;
    row["delta"] = r.delta;
    row[n1(c, "rho_exact")] = u1(c, *r.rho_exact);
    row[n1(c, "bound_naive")] = u1(c, r.bound_naive);
    row[n1(c, "bound_alternating")] = u1(c, r.bound_alternating);
    row[n1(c, "bound_fractional")] = u1(c, r.bound_fractional);
    row["argmin_x"] = r.argmin_pair->first;
    row["argmin_x_tilde"] = r.argmin_pair->second;
    rep.add_row(std::move(row));
    write_report(rep, c, out);
}

void cmd_del_bounds(const Common& c, int n, double delta, std::ostream& out) {
    if (n < 1) throw InvalidInput("del-bounds: n must be positive");
    Report rep;
    rep.command = "del-bounds";
    rep.columns = {"n", "delta", n1(c, "bound_naive"), n1(c, "bound_alternating"),
                   n1(c, "bound_fractional")};
    ordered_json row;
    row["n"] = n;
    row["delta"] = delta;
    row[n1(c, "bound_naive")] = u1(c, -n * std::log(delta));
    // the alternating pair needs exact count tables (64-bit packed strings,
    // size bounded by the distinct-subsequence budget); left empty beyond that
    row[n1(c, "bound_alternating")] = nullptr;
    if (n <= 64) {
        try {
            const BinaryString alt = BinaryString::alternating(n);
            row[n1(c, "bound_alternating")] =
                u1(c, rho_pair(DeletionInstance::make(alt, alt.complemented(), delta)));
        } catch (const BudgetExceeded&) {
        }
    }
    row[n1(c, "bound_fractional")] = u1(c, bound_fractional(n, delta));
    rep.add_row(std::move(row));
    write_report(rep, c, out);
}

void cmd_sanov(const Common& c, const std::string& base_text, const std::string& alt_text,
               int random_profiles, int alphabet, const std::string& v_text, int v_count,
               int resolution, std::ostream& out) {
    struct Case {
        int profile;
        LlrProfile p;
        double v;
    };
    std::vector<Case> cases;
    if (random_profiles > 0) {
        std::mt19937_64 rng(c.seed);
        auto sample_simplex = [&](int k) {
            std::vector<double> p(static_cast<std::size_t>(k));
            double total = 0.0;
            for (double& v : p) {
                std::uniform_real_distribution<double> unif(1e-3, 1.0);
                v = -std::log(unif(rng));
                total += v;
            }
            for (double& v : p) v /= total;
            return FiniteDistribution::from_probs(p);
        };
        for (int i = 0; i < random_profiles; ++i) {
            LlrProfile prof = LlrProfile::make(sample_simplex(alphabet), sample_simplex(alphabet));
            const double vmin = prof.min_llr();
            const double mean = prof.mean_llr();
            for (int j = 0; j < v_count; ++j) {
                std::uniform_real_distribution<double> unif(0.05, 0.95);
                const double v = vmin + unif(rng) * (mean - vmin);
                cases.push_back({i, prof, v});
            }
        }
    } else {
        if (base_text.empty() || alt_text.empty())
            throw InvalidInput("sanov: give --base and --alt, or --random-profiles");
        std::vector<double> bp, ap;
        for (double x : parse_grid(base_text)) bp.push_back(x);
        for (double x : parse_grid(alt_text)) ap.push_back(x);
        LlrProfile prof = LlrProfile::make(FiniteDistribution::from_probs(bp),
                                           FiniteDistribution::from_probs(ap));
        for (double v : parse_grid(v_text)) cases.push_back({0, prof, v});
    }

    struct Row {
        int profile;
        double v, dual, primal;
    };
    std::vector<Row> rows(cases.size());
    parallel_map(cases.size(), c.threads, [&](std::size_t i) {
        rows[i] = {cases[i].profile, cases[i].v, exponent(cases[i].p, cases[i].v),
                   primal_sanov_oracle(cases[i].p, cases[i].v, resolution)};
    });

    Report rep;
    rep.command = "sanov";
    rep.print_seed = random_profiles > 0;
    rep.columns = {"profile", "v", n1(c, "e_dual"), n1(c, "e_primal"), n1(c, "gap")};
    for (const auto& r : rows) {
        ordered_json row;
        row["profile"] = r.profile;
        row["v"] = r.v;
        row[n1(c, "e_dual")] = u1(c, r.dual);
        row[n1(c, "e_primal")] = u1(c, r.primal);
        row[n1(c, "gap")] = u1(c, r.dual - r.primal);
        rep.add_row(std::move(row));
    }
    write_report(rep, c, out);
}

void cmd_fbl(const Common& c, const std::string& channel_spec, int d,
             const std::string& n_list, const std::string& eps_list, std::ostream& out) {
    const Dmc ch = parse_channel_spec(channel_spec);
    const FiniteDistribution in = parse_input_dist(c.input, ch.input_size());
    MultiViewOptions opt;
    opt.max_type_classes = c.budget_types;
    Report rep;
    rep.command = "fbl";
    rep.columns = {"n", "epsilon", "d", n1(c, "rate"), n1(c, "gap_to_entropy")};
    for (int n : parse_int_list(n_list)) {
        for (double eps : parse_grid(eps_list)) {
            const FblResult r = normal_approx_rate(ch, in, {n, eps, d}, opt);
            ordered_json row;
            row["n"] = n;
            row["epsilon"] = eps;
            row["d"] = d;
            row[n1(c, "rate")] = u1(c, r.rate);
            row[n1(c, "gap_to_entropy")] = u1(c, r.gap_to_entropy);
            rep.add_row(std::move(row));
        }
    }
    write_report(rep, c, out);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"multi-view channel rate toolkit"};
    app.require_subcommand(1);

    Common c;
    std::string channel_spec, target = "entropy_gap", d_list = "3,6,12,24",
                p_grid = "0:1:0.01";
    std::string base_text, alt_text, v_text = "0", trace_file;
    int d = 1, d_min = 2, d_max = 12, n = 1, max_n = 8;
    std::int64_t bin_d = 1;
    double p = 0.1, delta = 0.5, tail_tol = 1e-10, poi_d = 1.0;
    int random_profiles = 0, alphabet = 2, v_count = 5, resolution = 2000;
    std::string n_list = "1000", eps_list = "0.001";

    auto* chernoff = app.add_subcommand("chernoff", "Chernoff information between channel rows");
    chernoff->add_option("--channel", channel_spec, "bsc:p | bec:e | zchan:d | file:path")
        ->required();
    add_format_options(chernoff, c);
    add_unit_option(chernoff, c);

    auto* mvinfo = app.add_subcommand("mvinfo", "exact multi-view report at one d");
    mvinfo->add_option("--channel", channel_spec)->required();
    mvinfo->add_option("--d", d, "number of views")->required();
    mvinfo->add_option("--input", c.input, "input distribution (uniform or comma list)");
    add_format_options(mvinfo, c);
    add_unit_option(mvinfo, c);
    add_budget_option(mvinfo, c);

    auto* disp = app.add_subcommand("dispersion", "multi-view sweep over d");
    disp->add_option("--channel", channel_spec)->required();
    disp->add_option("--d-min", d_min)->required();
    disp->add_option("--d-max", d_max)->required();
    disp->add_option("--input", c.input);
    add_format_options(disp, c);
    add_unit_option(disp, c);
    add_budget_option(disp, c);

    int fit_d_min = -1, fit_d_max = -1;
    auto* fit = app.add_subcommand("rate-fit", "fit the convergence exponent over a d window");
    fit->add_option("--channel", channel_spec)->required();
    fit->add_option("--target", target)->check(CLI::IsMember({"entropy_gap", "dispersion_gap"}));
    fit->add_option("--d-min", fit_d_min, "window start (omit both for the automatic window)");
    fit->add_option("--d-max", fit_d_max, "window end");
    fit->add_option("--input", c.input);
    add_format_options(fit, c);
    add_unit_option(fit, c);
    add_budget_option(fit, c);

    auto* bincap = app.add_subcommand("bin-cap", "binomial channel capacity");
    bincap->add_option("--d", bin_d)->required();
    bincap->add_option("--p", p)->required();
    add_format_options(bincap, c);
    add_unit_option(bincap, c);

    auto* poicap = app.add_subcommand("poi-cap", "Poisson approximation channel capacity");
    poicap->add_option("--d", poi_d)->required();
    poicap->add_option("--p", p)->required();
    poicap->add_option("--tail-tol", tail_tol);
    add_format_options(poicap, c);
    add_unit_option(poicap, c);

    auto* sandwich = app.add_subcommand("poi-sandwich", "binomial/Poisson capacity sweep");
    sandwich->add_option("--d", d_list, "comma list of view counts");
    sandwich->add_option("--p-grid", p_grid, "lo:hi:step or comma list");
    add_format_options(sandwich, c);

    auto* delrho = app.add_subcommand("del-rho", "exact deletion-channel rate for small n");
    delrho->add_option("--n", n)->required();
    delrho->add_option("--delta", delta)->required();
    delrho->add_option("--max-n", max_n, "raise the pair-search gate (cost ~ 4^n)");
    delrho->add_option("--trace-file", trace_file, "write per-pair CSV trace here");
    add_format_options(delrho, c);
    add_unit_option(delrho, c);

    auto* delbounds = app.add_subcommand("del-bounds", "deletion-channel rate upper bounds");
    delbounds->add_option("--n", n)->required();
    delbounds->add_option("--delta", delta)->required();
    add_format_options(delbounds, c);
    add_unit_option(delbounds, c);

    auto* sanov = app.add_subcommand("sanov", "dual exponent vs primal Sanov oracle");
    sanov->add_option("--base", base_text, "comma list of probabilities");
    sanov->add_option("--alt", alt_text, "comma list of probabilities");
    sanov->add_option("--v", v_text, "threshold list or lo:hi:step grid");
    sanov->add_option("--random-profiles", random_profiles, "sample this many seeded profiles");
    sanov->add_option("--alphabet", alphabet)->check(CLI::Range(2, 4));
    sanov->add_option("--v-count", v_count, "thresholds per random profile");
    sanov->add_option("--grid-resolution", resolution);
    add_format_options(sanov, c);
    add_unit_option(sanov, c);

    auto* fbl = app.add_subcommand("fbl", "normal-approximation rates");
    fbl->add_option("--channel", channel_spec)->required();
    fbl->add_option("--d", d)->required();
    fbl->add_option("--n-list", n_list, "blocklengths");
    fbl->add_option("--eps-list", eps_list, "target error probabilities");
    fbl->add_option("--input", c.input);
    add_format_options(fbl, c);
    add_unit_option(fbl, c);
    add_budget_option(fbl, c);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (chernoff->parsed()) cmd_chernoff(c, channel_spec, out);
        else if (mvinfo->parsed()) cmd_mvinfo(c, channel_spec, d, out);
        else if (disp->parsed()) cmd_dispersion(c, channel_spec, d_min, d_max, out);
        else if (fit->parsed()) cmd_rate_fit(c, channel_spec, target, fit_d_min, fit_d_max, out);
        else if (bincap->parsed()) cmd_bin_cap(c, bin_d, p, out);
        else if (poicap->parsed()) cmd_poi_cap(c, poi_d, p, tail_tol, out);
        else if (sandwich->parsed()) cmd_poi_sandwich(c, d_list, p_grid, out);
        else if (delrho->parsed()) cmd_del_rho(c, n, delta, max_n, trace_file, out, err);
        else if (delbounds->parsed()) cmd_del_bounds(c, n, delta, out);
        else if (sanov->parsed())
            cmd_sanov(c, base_text, alt_text, random_profiles, alphabet, v_text, v_count,
                      resolution, out);
        else if (fbl->parsed()) cmd_fbl(c, channel_spec, d, n_list, eps_list, out);
    } catch (const BudgetExceeded& e) {
        err << "error (budget): " << e.what() << '\n';
        return 3;
    } catch (const InvariantViolation& e) {
        err << "error (invariant): " << e.what() << '\n';
        return 4;
    } catch (const InvalidInput& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}

}  // namespace mvc::cli
