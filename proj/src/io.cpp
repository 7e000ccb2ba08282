#include "compsize/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "compsize/errors.hpp"

namespace compsize {

namespace {

constexpr const char* kSeriesVersion = "compsize-series-v1";
constexpr const char* kAsymptoteVersion = "compsize-asymptote-v1";

double parse_number(const std::string& tok, const char* what) {
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str()) raise(errc::invalid_parameter, std::string("bad ") + what + ": " + tok);
    return v;
}

// Finite values as JSON numbers; the log companion of an underflowed w is
// -inf, which JSON cannot carry, so it travels as null.
nlohmann::json number_or_null(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

double null_as_neg_inf(const nlohmann::json& v) {
    if (v.is_null()) return neg_inf;
    return v.get<double>();
}

} // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

DegreeDistribution parse_degree_text(std::istream& in, bool auto_normalize) {
    std::vector<double> pmf;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream row(line);
        long long k;
        double value;
        if (!(row >> k)) continue;  // blank
        if (!(row >> value) || k < 0)
            raise(errc::invalid_parameter,
                  "line " + std::to_string(lineno) + ": expected \"k value\"");
        if (std::size_t(k) >= pmf.size()) pmf.resize(k + 1, 0.0);
        pmf[k] = value;
    }
    return DegreeDistribution::from_pmf(std::move(pmf), std::nullopt, auto_normalize);
}

DegreeDistribution parse_degree_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("pmf") || !j["pmf"].is_array())
        raise(errc::invalid_parameter, "degree JSON needs a \"pmf\" array");
    std::vector<double> pmf;
    pmf.reserve(j["pmf"].size());
    for (const auto& v : j["pmf"]) {
        if (!v.is_number()) raise(errc::invalid_parameter, "pmf entries must be numbers");
        pmf.push_back(v.get<double>());
    }
    std::optional<TailSpec> tail;
    if (j.contains("tail") && !j["tail"].is_null()) {
        const auto& t = j["tail"];
        if (!t.is_object() || !t.contains("s") || !t.contains("beta"))
            raise(errc::invalid_parameter, "tail needs \"s\" and \"beta\"");
        tail = TailSpec{t["s"].get<double>(), t["beta"].get<double>()};
    }
    const bool normalize = j.value("normalize", true);
    std::string label = j.value("label", std::string());
    return DegreeDistribution::from_pmf(std::move(pmf), tail, normalize, std::move(label));
}

DegreeDistribution read_degree_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(errc::invalid_parameter, "cannot open " + path);
    char first = 0;
    in >> std::ws;
    first = char(in.peek());
    if (first == '{') {
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            raise(errc::invalid_parameter, path + ": " + e.what());
        }
        return parse_degree_json(j);
    }
    return parse_degree_text(in);
}

void write_degree_text(std::ostream& out, const DegreeDistribution& u) {
    out << "# degree pmf, one \"k value\" pair per line\n";
    const std::vector<double>& pmf = u.pmf();
    for (std::size_t k = 0; k < pmf.size(); ++k)
        out << k << ' ' << format_double(pmf[k]) << '\n';
}

nlohmann::json degree_json(const DegreeDistribution& u) {
    nlohmann::json j;
    j["label"] = u.label();
    j["pmf"] = u.pmf();
    if (u.tail()) j["tail"] = {{"s", u.tail()->s}, {"beta", u.tail()->beta}};
    return j;
}

void write_size_series_csv(std::ostream& out, const ComponentSizeResult& r) {
    out << "# " << kSeriesVersion << '\n';
    out << "# theta=" << format_double(r.theta) << " mu1=" << format_double(r.moments.mu1)
        << " mu2=" << format_double(r.moments.mu2) << " mu3=" << format_double(r.moments.mu3)
        << '\n';
    out << "# finite_mass=" << format_double(r.finite_mass)
        << " tail_correction=" << format_double(r.tail_correction)
        << " giant_fraction=" << format_double(r.giant_fraction_estimate) << '\n';
    out << "n,w,log_w\n";
    for (std::size_t n = 1; n < r.w.size(); ++n)
        out << n << ',' << format_double(r.w[n]) << ',' << format_double(r.log_w[n]) << '\n';
}

nlohmann::json size_series_json(const ComponentSizeResult& r) {
    nlohmann::json n = nlohmann::json::array();
    nlohmann::json w = nlohmann::json::array();
    nlohmann::json log_w = nlohmann::json::array();
    for (std::size_t i = 1; i < r.w.size(); ++i) {
        n.push_back(i);
        w.push_back(r.w[i]);
        log_w.push_back(number_or_null(r.log_w[i]));
    }
    return nlohmann::json{{"n", std::move(n)},
                          {"w", std::move(w)},
                          {"log_w", std::move(log_w)},
                          {"theta", r.theta},
                          {"mu1", r.moments.mu1},
                          {"mu2", r.moments.mu2},
                          {"mu3", r.moments.mu3},
                          {"finite_mass", r.finite_mass},
                          {"tail_correction", r.tail_correction},
                          {"giant_fraction", r.giant_fraction_estimate}};
}

namespace {

ComponentSizeResult size_series_from_json(const nlohmann::json& j) {
    ComponentSizeResult r;
    const auto& n = j.at("n");
    const auto& w = j.at("w");
    const auto& log_w = j.at("log_w");
    if (n.size() != w.size() || n.size() != log_w.size())
        raise(errc::invalid_parameter, "n, w, log_w lengths differ");
    std::size_t top = 0;
    for (const auto& v : n) top = std::max(top, v.get<std::size_t>());
    r.w.assign(top + 1, 0.0);
    r.log_w.assign(top + 1, neg_inf);
    for (std::size_t i = 0; i < n.size(); ++i) {
        const std::size_t idx = n[i].get<std::size_t>();
        r.w[idx] = w[i].get<double>();
        r.log_w[idx] = null_as_neg_inf(log_w[i]);
    }
    r.theta = j.value("theta", 0.0);
    r.moments.mu1 = j.value("mu1", 0.0);
    r.moments.mu2 = j.value("mu2", 0.0);
    r.moments.mu3 = j.value("mu3", 0.0);
    r.finite_mass = j.value("finite_mass", 0.0);
    r.tail_correction = j.value("tail_correction", 0.0);
    r.giant_fraction_estimate = j.value("giant_fraction", 0.0);
    return r;
}

ComponentSizeResult size_series_from_csv(std::istream& in) {
    ComponentSizeResult r;
    std::vector<std::size_t> ns;
    std::vector<double> ws, logs;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        if (line.rfind("n,", 0) == 0) continue;  // column header
        std::istringstream row(line);
        std::string tok;
        std::size_t col = 0;
        std::size_t n = 0;
        double w = 0.0, lw = 0.0;
        while (std::getline(row, tok, ',')) {
            switch (col) {
                case 0: n = std::size_t(parse_number(tok, "n")); break;
                case 1: w = parse_number(tok, "w"); break;
                case 2: lw = parse_number(tok, "log_w"); break;
                default: raise(errc::invalid_parameter, "too many columns at line " + std::to_string(lineno));
            }
            ++col;
        }
        if (col != 3) raise(errc::invalid_parameter, "expected n,w,log_w at line " + std::to_string(lineno));
        ns.push_back(n);
        ws.push_back(w);
        logs.push_back(lw);
    }
    if (ns.empty()) raise(errc::empty_distribution, "no rows in series file");
    std::size_t top = 0;
    for (std::size_t n : ns) top = std::max(top, n);
    r.w.assign(top + 1, 0.0);
    r.log_w.assign(top + 1, neg_inf);
    double mass = 0.0;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        r.w[ns[i]] = ws[i];
        r.log_w[ns[i]] = logs[i];
        mass += ws[i];
    }
    r.finite_mass = mass;
    return r;
}

} // namespace

ComponentSizeResult read_size_series(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(errc::invalid_parameter, "cannot open " + path);
    in >> std::ws;
    if (in.peek() == '{') {
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            raise(errc::invalid_parameter, path + ": " + e.what());
        }
        return size_series_from_json(j);
    }
    return size_series_from_csv(in);
}

nlohmann::json ensemble_json(const EnsembleEstimate& e) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t n = 1; n < e.w_hat.size(); ++n)
        rows.push_back({n, e.w_hat[n], e.w_se[n]});
    return nlohmann::json{{"N", e.nodes},
                          {"R", e.replicas},
                          {"seed", e.seed},
                          {"w_hat", std::move(rows)},
                          {"giant_hat", e.giant_hat},
                          {"giant_se", e.giant_se},
                          {"giant_threshold", e.giant_threshold},
                          {"odd_fixups", e.odd_fixups}};
}

nlohmann::json asymptote_json(const AsymptoteModel& m, std::size_t horizon) {
    nlohmann::json j;
    j["case"] = to_string(m.case_id);
    j["branch"] = to_string(m.branch);
    j["constants"] = m.constants;
    j["theta"] = m.moments.theta;
    if (m.alpha > 0.0) {
        j["alpha"] = m.alpha;
        j["s"] = m.s;
    }
    if (horizon >= 3) {
        nlohmann::json n = nlohmann::json::array();
        nlohmann::json val = nlohmann::json::array();
        nlohmann::json logval = nlohmann::json::array();
        for (std::size_t i = 3; i <= horizon; ++i) {
            const double lv = m.log_eval(double(i));
            n.push_back(i);
            val.push_back(std::exp(lv));
            logval.push_back(number_or_null(lv));
        }
        j["n"] = std::move(n);
        j["asymptote"] = std::move(val);
        j["log_asymptote"] = std::move(logval);
    }
    return j;
}

void write_asymptote_csv(std::ostream& out, const AsymptoteModel& m, std::size_t horizon) {
    out << "# " << kAsymptoteVersion << '\n';
    out << "# case=" << to_string(m.case_id) << " branch=" << to_string(m.branch);
    if (m.alpha > 0.0)
        out << " alpha=" << format_double(m.alpha) << " s=" << format_double(m.s);
    out << '\n';
    out << "#";
    for (const auto& [name, value] : m.constants) out << ' ' << name << '=' << format_double(value);
    out << '\n';
    out << "n,asymptote,log_asymptote\n";
    for (std::size_t n = 3; n <= horizon; ++n) {
        const double lv = m.log_eval(double(n));
        out << n << ',' << format_double(std::exp(lv)) << ',' << format_double(lv) << '\n';
    }
}

} // namespace compsize
