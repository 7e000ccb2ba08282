// compsize: component size distributions of configuration-model networks.
//
// Subcommands:
//   compute      w(n) series from a degree distribution
//   closed-form  exact series for the exponential / geometric / binomial families
//   asymptote    large-n decay law: classification, constants, evaluated series
//   classify     classification and constants only
//   compare      computed series against a reference (closed form, asymptote,
//                Monte Carlo, or a previously saved series file)
//   sample       Monte Carlo ensemble estimate on finite networks
//   giant        giant-component fraction
//
// Exit codes: 0 ok, 2 input error, 3 distribution outside the finite-component
// regime (a density report is emitted instead of the normal output). Errors
// are mirrored as one-line JSON on stderr. All numeric output goes through a
// shortest round-trip formatter, so identical invocations produce
// byte-identical files.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "compsize/asymptotics.hpp"
#include "compsize/conv_engine.hpp"
#include "compsize/degree_model.hpp"
#include "compsize/errors.hpp"
#include "compsize/io.hpp"
#include "compsize/mc_oracle.hpp"
#include "compsize/size_dist.hpp"

namespace {

using namespace compsize;
using nlohmann::json;

constexpr double unset = std::numeric_limits<double>::quiet_NaN();

struct InputOpts {
    std::string family;
    std::string pmf_file;
    double lambda = unset;
    double p = unset;
    double c = unset;
    std::size_t kmax = 0;
    double beta = unset;
    double s = unset;
    double s1 = unset;
    std::size_t ktrunc = 0;  // 0 keeps the family default
    std::size_t cutoff = 0;  // 0 means no cutoff
    bool no_normalize = false;
};

struct OutputOpts {
    std::string format = "json";
    std::string out;
    bool quiet = false;
};

void add_input_options(CLI::App* cmd, InputOpts& in) {
    auto* fam = cmd->add_option("--family", in.family,
                                "Built-in family: exponential | geometric | binomial | powerlaw")
                    ->check(CLI::IsMember({"exponential", "geometric", "binomial", "powerlaw"}));
    auto* file =
        cmd->add_option("--pmf-file", in.pmf_file, "Degree distribution file (text or JSON)");
    fam->excludes(file);
    file->excludes(fam);
    cmd->add_option("--lambda", in.lambda, "Decay rate (exponential family)");
    cmd->add_option("--p", in.p, "Success probability (geometric family)");
    cmd->add_option("--c", in.c, "Per-slot probability (binomial family)");
    cmd->add_option("--kmax", in.kmax, "Maximum degree (binomial family)");
    cmd->add_option("--beta", in.beta, "Degree-tail exponent (power-law family)");
    auto* so = cmd->add_option("--s", in.s, "Degree-tail scale: u(k) ~ s k^-beta");
    auto* s1o = cmd->add_option("--s1", in.s1,
                                "Excess-tail scale: u1(k) ~ s1 k^-(beta-1); alternative to --s");
    so->excludes(s1o);
    s1o->excludes(so);
    cmd->add_option("--ktrunc", in.ktrunc,
                    "Materialization cutoff for infinite-support families (0 = family default)");
    cmd->add_option("--cutoff", in.cutoff, "Drop all mass above this degree and renormalize");
    cmd->add_flag("--no-normalize", in.no_normalize,
                  "Reject input files whose probabilities do not already sum to 1");
}

void add_output_options(CLI::App* cmd, OutputOpts& o) {
    cmd->add_option("--format", o.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--out", o.out, "Write output to this file instead of stdout");
    cmd->add_flag("--quiet,-q", o.quiet, "Suppress status notes; data only");
}

double need(double v, const char* flag, const char* family) {
    if (std::isnan(v))
        raise(errc::missing_parameter,
              std::string(flag) + " is required for the " + family + " family");
    return v;
}

DegreeDistribution read_pmf_file(const std::string& path, bool no_normalize) {
    std::ifstream f(path);
    if (!f) raise(errc::invalid_parameter, "cannot open pmf file: " + path);
    if (!no_normalize) {
        f.close();
        return read_degree_file(path);
    }
    std::stringstream buf;
    buf << f.rdbuf();
    std::string text = buf.str();
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        json j = json::parse(text);
        j["normalize"] = false;
        return parse_degree_json(j);
    }
    std::istringstream is(text);
    return parse_degree_text(is, false);
}

DegreeDistribution build_input(const InputOpts& in) {
    DegreeDistribution u = [&]() {
        if (!in.pmf_file.empty()) return read_pmf_file(in.pmf_file, in.no_normalize);
        if (in.family == "exponential")
            return exponential_family(need(in.lambda, "--lambda", "exponential"),
                                      in.ktrunc ? in.ktrunc : 200);
        if (in.family == "geometric")
            return geometric_family(need(in.p, "--p", "geometric"), in.ktrunc ? in.ktrunc : 600);
        if (in.family == "binomial") {
            if (in.kmax == 0)
                raise(errc::missing_parameter, "--kmax is required for the binomial family");
            return binomial_family(in.kmax, need(in.c, "--c", "binomial"));
        }
        if (in.family == "powerlaw") {
            const double beta = need(in.beta, "--beta", "powerlaw");
            const std::size_t kt = in.ktrunc ? in.ktrunc : 100000;
            if (!std::isnan(in.s1)) return powerlaw_family_excess_scale(beta, in.s1, kt);
            return powerlaw_family(beta, need(in.s, "--s", "powerlaw"), kt);
        }
        raise(errc::missing_parameter, "provide an input: --family or --pmf-file");
    }();
    if (in.cutoff > 0) {
        double removed = 0.0;
        u = apply_cutoff(u, in.cutoff, &removed);
    }
    return u;
}

// Data goes to --out or stdout; notes go to stderr so piped output stays clean.
void emit(const OutputOpts& o, const std::function<void(std::ostream&)>& writer) {
    if (o.out.empty()) {
        writer(std::cout);
        return;
    }
    std::ofstream f(o.out);
    if (!f) raise(errc::invalid_parameter, "cannot open output file: " + o.out);
    writer(f);
    if (!o.quiet) std::cerr << "wrote " << o.out << "\n";
}

void emit_json(const OutputOpts& o, const json& j) {
    emit(o, [&](std::ostream& os) { os << j.dump(2) << "\n"; });
}

void error_json(errc code, const std::string& message) {
    std::cerr << json{{"error", to_string(code)}, {"message", message}}.dump() << "\n";
}

// Emitted in place of classification output when the degree tail is too heavy
// for the finite-component analysis (beta <= 2): the expected edge count and
// the density class it implies for an N-node network.
int density_exit(double beta, double nodes, const OutputOpts& o) {
    const EdgeDensityReport rep = edge_density_class(beta, nodes);
    if (o.format == "csv") {
        emit(o, [&](std::ostream& os) {
            os << "# compsize-density-v1\n";
            os << "key,value\n";
            os << "beta," << format_double(beta) << "\n";
            os << "nodes," << format_double(nodes) << "\n";
            os << "density," << to_string(rep.density) << "\n";
            os << "expected_edges," << format_double(rep.expected_edges) << "\n";
        });
    } else {
        emit_json(o, json{{"beta", beta},
                          {"nodes", nodes},
                          {"density", to_string(rep.density)},
                          {"expected_edges", rep.expected_edges},
                          {"note", rep.note}});
    }
    error_json(errc::unclassifiable, rep.note);
    return 3;
}

// Classification with the beta <= 2 escape hatch: on unclassifiable input the
// density report becomes the output and the process exits 3.
std::optional<AsymptoteModel> classify_or_report(const DegreeDistribution& u, double nodes,
                                                 const OutputOpts& o, int& rc) {
    try {
        return classify(u);
    } catch (const Error& e) {
        if (e.code() == errc::unclassifiable && u.tail()) {
            rc = density_exit(u.tail()->beta, nodes, o);
            return std::nullopt;
        }
        throw;
    }
}

double finite_or(double v, double fallback) { return std::isfinite(v) ? v : fallback; }

int run_compute(const InputOpts& in, const OutputOpts& o, std::size_t horizon) {
    const DegreeDistribution u = build_input(in);
    const ComponentSizeResult r = component_sizes(u, horizon);
    if (o.format == "csv")
        emit(o, [&](std::ostream& os) { write_size_series_csv(os, r); });
    else
        emit_json(o, size_series_json(r));
    return 0;
}

int run_closed_form(const InputOpts& in, const OutputOpts& o, std::size_t horizon,
                    bool as_printed) {
    if (in.family != "exponential" && in.family != "geometric" && in.family != "binomial")
        raise(errc::missing_parameter,
              "closed-form needs --family exponential | geometric | binomial");
    const DegreeDistribution u = build_input(in);

    ComponentSizeResult r;
    if (in.family == "exponential") {
        r.w = closed_form_exponential(in.lambda, horizon);
    } else if (in.family == "geometric") {
        r.w = closed_form_geometric(in.p, horizon);
    } else {
        r.w = closed_form_binomial(in.kmax, in.c, horizon,
                                   as_printed ? BinomialForm::as_printed : BinomialForm::derived);
    }
    r.log_w.assign(r.w.size(), neg_inf);
    for (std::size_t n = 1; n < r.w.size(); ++n) {
        if (r.w[n] > 0.0) r.log_w[n] = std::log(r.w[n]);
        r.finite_mass += r.w[n];
    }
    r.moments = u.moments();
    r.theta = r.moments.theta;
    try {
        r.tail_correction = estimate_tail(classify(u), double(horizon));
    } catch (const Error&) {
        r.tail_correction = 0.0;
    }
    r.giant_fraction_estimate =
        std::min(1.0, std::max(0.0, 1.0 - r.finite_mass - r.tail_correction));

    if (o.format == "csv")
        emit(o, [&](std::ostream& os) { write_size_series_csv(os, r); });
    else
        emit_json(o, size_series_json(r));
    return 0;
}

// Transient power-law fields for the infinite-excess-mean cases (the final
// regime there is sub-exponential but a slower transient dominates first).
void attach_intermediate(json& j, const AsymptoteModel& m) {
    if (m.case_id != CaseId::E && m.case_id != CaseId::F) return;
    const double expo = m.alpha < 1.0 ? -(m.alpha + 1.0) : -2.0;
    j["intermediate"] = json{
        {"exponent", expo},
        {"switch_point", intermediate_switch_point(m.alpha, m.s, m.moments.mu1)},
    };
}

int run_asymptote(const InputOpts& in, const OutputOpts& o, std::size_t horizon) {
    if (in.family == "powerlaw" && !std::isnan(in.beta) && in.beta <= 2.0)
        return density_exit(in.beta, double(horizon), o);
    const DegreeDistribution u = build_input(in);
    int rc = 0;
    const auto model = classify_or_report(u, double(horizon), o, rc);
    if (!model) return rc;

    if (o.format == "csv") {
        emit(o, [&](std::ostream& os) {
            write_asymptote_csv(os, *model, horizon);
            if (model->case_id == CaseId::E || model->case_id == CaseId::F) {
                const double expo = model->alpha < 1.0 ? -(model->alpha + 1.0) : -2.0;
                os << "# intermediate_exponent=" << format_double(expo)
                   << " switch_point="
                   << format_double(
                          intermediate_switch_point(model->alpha, model->s, model->moments.mu1))
                   << "\n";
            }
        });
    } else {
        json j = asymptote_json(*model, horizon);
        attach_intermediate(j, *model);
        emit_json(o, j);
    }
    return 0;
}

int run_classify(const InputOpts& in, const OutputOpts& o, std::size_t nodes) {
    if (in.family == "powerlaw" && !std::isnan(in.beta) && in.beta <= 2.0)
        return density_exit(in.beta, double(nodes), o);
    const DegreeDistribution u = build_input(in);
    int rc = 0;
    const auto model = classify_or_report(u, double(nodes), o, rc);
    if (!model) return rc;

    json j = asymptote_json(*model, 0);
    if (u.tail()) {
        const auto eta = eta_exponent(u.tail()->beta, model->branch);
        j["eta"] = eta ? json(*eta) : json();
    }
    attach_intermediate(j, *model);
    if (o.format == "csv")
        emit(o, [&](std::ostream& os) { write_asymptote_csv(os, *model, 0); });
    else
        emit_json(o, j);
    return 0;
}

struct CompareOpts {
    std::string against = "closed-form";
    std::string series_file;
    std::vector<std::size_t> window;  // empty = default
    std::size_t nodes = 100000;       // Monte Carlo network size
    std::size_t replicas = 20;
    std::uint64_t seed = 1;
};

int run_compare(const InputOpts& in, const OutputOpts& o, std::size_t horizon,
                const CompareOpts& co) {
    const DegreeDistribution u = build_input(in);
    const ComponentSizeResult r = component_sizes(u, horizon);

    std::vector<double> ref(horizon + 1, 0.0);
    std::vector<double> se;  // only for monte-carlo
    std::size_t ref_max = horizon;
    if (co.against == "closed-form") {
        if (in.family == "exponential")
            ref = closed_form_exponential(in.lambda, horizon);
        else if (in.family == "geometric")
            ref = closed_form_geometric(in.p, horizon);
        else if (in.family == "binomial")
            ref = closed_form_binomial(in.kmax, in.c, horizon);
        else
            raise(errc::missing_parameter,
                  "--against closed-form needs --family exponential | geometric | binomial");
    } else if (co.against == "asymptote") {
        const AsymptoteModel model = classify(u);
        for (std::size_t n = 2; n <= horizon; ++n) ref[n] = model.eval(double(n));
    } else if (co.against == "monte-carlo") {
        const EnsembleEstimate est =
            ensemble_estimate(u, co.nodes, co.replicas, co.seed, horizon);
        ref_max = std::min(horizon, est.w_hat.size() - 1);
        se.assign(horizon + 1, 0.0);
        for (std::size_t n = 1; n <= ref_max; ++n) {
            ref[n] = est.w_hat[n];
            se[n] = est.w_se[n];
        }
    } else {  // series-file
        if (co.series_file.empty())
            raise(errc::missing_parameter, "--against series-file needs --series-file");
        const ComponentSizeResult saved = read_size_series(co.series_file);
        ref_max = std::min(horizon, saved.w.empty() ? 0 : saved.w.size() - 1);
        for (std::size_t n = 1; n <= ref_max; ++n) ref[n] = saved.w[n];
    }

    std::size_t win_lo = 1, win_hi = ref_max;
    if (co.window.size() == 2) {
        win_lo = co.window[0];
        win_hi = co.window[1];
    } else if (co.against == "asymptote") {
        win_lo = std::max<std::size_t>(2, ref_max / 10);  // skip the pre-asymptotic head
    }
    if (win_lo < 1 || win_hi > horizon || win_lo > win_hi)
        raise(errc::invalid_parameter, "slope window must satisfy 1 <= lo <= hi <= N");

    // Ratio rows cover every computed n; the deviation summary covers the
    // window only (the asymptote reference is not meant to match small n).
    double max_rel = 0.0;
    double max_se_units = 0.0;
    std::vector<double> ratio(ref_max + 1, std::numeric_limits<double>::quiet_NaN());
    for (std::size_t n = 1; n <= ref_max; ++n)
        if (ref[n] > 0.0) ratio[n] = r.w[n] / ref[n];
    for (std::size_t n = win_lo; n <= std::min(win_hi, ref_max); ++n) {
        max_rel = std::max(max_rel, relative_diff(r.w[n], ref[n]));
        if (!se.empty() && se[n] > 0.0)
            max_se_units = std::max(max_se_units, std::fabs(r.w[n] - ref[n]) / se[n]);
    }

    LinearFit fit;
    bool have_fit = false;
    try {
        fit = fit_window_slope(r.log_w, win_lo, win_hi);
        have_fit = fit.points >= 2;
    } catch (const Error&) {
    }

    if (o.format == "csv") {
        emit(o, [&](std::ostream& os) {
            os << "# compsize-compare-v1\n";
            os << "# against=" << co.against << " window=[" << win_lo << "," << win_hi << "]\n";
            os << "# max_relative_deviation=" << format_double(max_rel);
            if (!se.empty()) os << " max_se_units=" << format_double(max_se_units);
            os << "\n";
            if (have_fit)
                os << "# slope=" << format_double(fit.slope)
                   << " slope_se=" << format_double(fit.slope_se) << "\n";
            os << "n,w,reference,ratio\n";
            for (std::size_t n = 1; n <= ref_max; ++n)
                os << n << "," << format_double(r.w[n]) << "," << format_double(ref[n]) << ","
                   << format_double(ratio[n]) << "\n";
        });
    } else {
        json jn = json::array(), jw = json::array(), jr = json::array(), jq = json::array();
        for (std::size_t n = 1; n <= ref_max; ++n) {
            jn.push_back(n);
            jw.push_back(finite_or(r.w[n], 0.0));
            jr.push_back(finite_or(ref[n], 0.0));
            jq.push_back(std::isnan(ratio[n]) ? json() : json(ratio[n]));
        }
        json j{{"against", co.against},
               {"window", {win_lo, win_hi}},
               {"n", jn},
               {"w", jw},
               {"reference", jr},
               {"ratio", jq},
               {"max_relative_deviation", max_rel}};
        if (!se.empty()) j["max_se_units"] = max_se_units;
        if (have_fit) {
            j["slope"] = fit.slope;
            j["slope_se"] = fit.slope_se;
            j["slope_ci"] = {fit.slope - 1.96 * fit.slope_se, fit.slope + 1.96 * fit.slope_se};
        } else {
            j["slope"] = json();
            j["slope_se"] = json();
            j["slope_ci"] = json();
        }
        emit_json(o, j);
    }
    return 0;
}

int run_sample(const InputOpts& in, const OutputOpts& o, std::size_t nodes, std::size_t replicas,
               std::uint64_t seed, std::size_t max_size) {
    const DegreeDistribution u = build_input(in);
    const EnsembleEstimate est = ensemble_estimate(u, nodes, replicas, seed, max_size);
    if (o.format == "csv") {
        emit(o, [&](std::ostream& os) {
            os << "# compsize-ensemble-v1\n";
            os << "# N=" << est.nodes << " R=" << est.replicas << " seed=" << est.seed
               << " giant_threshold=" << est.giant_threshold << " odd_fixups=" << est.odd_fixups
               << "\n";
            os << "# giant_hat=" << format_double(est.giant_hat)
               << " giant_se=" << format_double(est.giant_se) << "\n";
            os << "n,w_hat,se\n";
            for (std::size_t n = 1; n < est.w_hat.size(); ++n)
                os << n << "," << format_double(est.w_hat[n]) << ","
                   << format_double(est.w_se[n]) << "\n";
        });
    } else {
        emit_json(o, ensemble_json(est));
    }
    return 0;
}

int run_giant(const InputOpts& in, const OutputOpts& o, std::size_t horizon) {
    if (in.family == "powerlaw" && !std::isnan(in.beta) && in.beta <= 2.0)
        return density_exit(in.beta, double(horizon), o);
    const DegreeDistribution u = build_input(in);
    const ComponentSizeResult r = component_sizes(u, horizon);

    double fraction = r.giant_fraction_estimate;
    double tail = r.tail_correction;
    std::string method = "estimate";
    try {
        const AsymptoteModel model = classify(u);
        fraction = giant_fraction(r, model);
        tail = estimate_tail(model, double(horizon));
        method = "asymptote_tail";
    } catch (const Error& e) {
        if (e.code() == errc::unclassifiable && u.tail())
            return density_exit(u.tail()->beta, double(horizon), o);
        // Degenerate or otherwise unfit for tail integration: keep the
        // horizon-sum estimate.
    }

    if (o.format == "csv") {
        emit(o, [&](std::ostream& os) {
            os << "# compsize-giant-v1\n";
            os << "key,value\n";
            os << "giant_fraction," << format_double(fraction) << "\n";
            os << "finite_mass," << format_double(r.finite_mass) << "\n";
            os << "tail_correction," << format_double(tail) << "\n";
            os << "theta," << format_double(r.theta) << "\n";
            os << "horizon," << horizon << "\n";
            os << "method," << method << "\n";
        });
    } else {
        emit_json(o, json{{"giant_fraction", fraction},
                          {"finite_mass", r.finite_mass},
                          {"tail_correction", tail},
                          {"theta", r.theta},
                          {"horizon", horizon},
                          {"method", method}});
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"component size distributions of configuration-model networks"};
    app.require_subcommand(1);

    InputOpts in;
    OutputOpts out;
    std::size_t horizon = 100;
    std::size_t nodes = 10000;
    std::size_t replicas = 10;
    std::uint64_t seed = 1;
    std::size_t max_size = 100;
    bool as_printed = false;
    CompareOpts co;

    auto* compute = app.add_subcommand("compute", "w(n) series from a degree distribution");
    add_input_options(compute, in);
    add_output_options(compute, out);
    compute->add_option("-N,--horizon", horizon, "Largest component size to compute");

    auto* closed = app.add_subcommand("closed-form", "Exact series for a built-in family");
    add_input_options(closed, in);
    add_output_options(closed, out);
    closed->add_option("-N,--horizon", horizon, "Largest component size to compute");
    closed->add_flag("--as-printed", as_printed,
                     "Use the circulating (incorrect) binomial variant");

    auto* asym = app.add_subcommand("asymptote", "Large-n decay law and evaluated series");
    add_input_options(asym, in);
    add_output_options(asym, out);
    asym->add_option("-N,--horizon", horizon, "Evaluate the asymptote for n = 3..N");

    auto* cls = app.add_subcommand("classify", "Decay-law classification and constants");
    add_input_options(cls, in);
    add_output_options(cls, out);
    cls->add_option("-N,--horizon", horizon,
                    "Reference network size for the density report on heavy tails");

    auto* cmp = app.add_subcommand("compare", "Computed series against a reference");
    add_input_options(cmp, in);
    add_output_options(cmp, out);
    cmp->add_option("-N,--horizon", horizon, "Largest component size to compare");
    cmp->add_option("--against", co.against, "Reference series")
        ->check(CLI::IsMember({"closed-form", "asymptote", "monte-carlo", "series-file"}));
    cmp->add_option("--series-file", co.series_file, "Saved series (csv or json) to compare to");
    cmp->add_option("--window", co.window, "Slope-fit window [lo hi]")->expected(2);
    cmp->add_option("--nodes", co.nodes, "Monte Carlo network size");
    cmp->add_option("-R,--replicas", co.replicas, "Monte Carlo replica count");
    cmp->add_option("--seed", co.seed, "Monte Carlo master seed");

    auto* sample = app.add_subcommand("sample", "Monte Carlo ensemble estimate");
    add_input_options(sample, in);
    add_output_options(sample, out);
    sample->add_option("-N,--nodes", nodes, "Nodes per replica");
    sample->add_option("-R,--replicas", replicas, "Replica count");
    sample->add_option("--seed", seed, "Master seed");
    sample->add_option("--max-size", max_size, "Largest component size to tally");

    auto* giant = app.add_subcommand("giant", "Giant-component fraction");
    add_input_options(giant, in);
    add_output_options(giant, out);
    giant->add_option("-N,--horizon", horizon, "Finite-component sum horizon");

    try {
        app.parse(argc, argv);
        if (compute->parsed()) return run_compute(in, out, horizon);
        if (closed->parsed()) return run_closed_form(in, out, horizon, as_printed);
        if (asym->parsed()) return run_asymptote(in, out, horizon);
        if (cls->parsed()) return run_classify(in, out, horizon);
        if (cmp->parsed()) return run_compare(in, out, horizon, co);
        if (sample->parsed()) return run_sample(in, out, nodes, replicas, seed, max_size);
        if (giant->parsed()) return run_giant(in, out, horizon);
        return 0;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        error_json(errc::invalid_parameter, e.what());
        return 2;
    } catch (const compsize::Error& e) {
        std::cerr << nlohmann::json{{"error", compsize::to_string(e.code())},
                                    {"message", e.what()}}
                         .dump()
                  << "\n";
        return e.code() == compsize::errc::unclassifiable ? 3 : 2;
    } catch (const std::exception& e) {
        error_json(errc::invalid_parameter, e.what());
        return 2;
    }
}
