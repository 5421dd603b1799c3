#include "kras/cli/commands.hpp"

#include "kras/algebra/univariate.hpp"
#include "kras/gersten/scenario.hpp"
#include "kras/kr/family.hpp"
#include "kras/kr/hensel.hpp"
#include "kras/lnd/derivation.hpp"
#include "kras/lnd/examples.hpp"
#include "kras/mw/symbol.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <future>
#include <ostream>
#include <sstream>

#ifndef KRAS_VERSION
#define KRAS_VERSION "0.0.0"
#endif
#ifndef KRAS_SCENARIO_DIR
#define KRAS_SCENARIO_DIR "scenarios"
#endif

namespace kras::cli {

namespace {

const char* const kGrammarHelp =
    "Polynomials: sums of terms c*x^e*y^f..., rationals as 3/4, Laurent exponents may be negative.\n"
    "Symbols: products of <unit>, [u1,u2,...], n_eps, eps, e (eta), h, joined by + and -;\n"
    "  units are products of names with integer powers, a twist suffix reads @[a,b].\n"
    "Arguments starting with @ are read from the named file.\n";

std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot read '" + path + "'");
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string at_file(std::string value)
{
    if (value.size() > 1 && value[0] == '@') {
        try {
            value = read_file(value.substr(1));
        } catch (const std::invalid_argument& e) {
            throw CLI::ValidationError(e.what());
        }
        while (!value.empty() && std::isspace(static_cast<unsigned char>(value.back())))
            value.pop_back();
    }
    return value;
}

DensePoly parse_q(const std::string& text)
{
    static const RingPtr ring = make_ring({"x"});
    return to_dense(parse_polynomial(text, ring), "x");
}

std::vector<std::string> split_names(const std::string& s)
{
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
            if (!cur.empty())
                out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty())
        out.push_back(cur);
    return out;
}

struct Params {
    int m = 2, r = 2, s = 3;
    std::string q = "1", q1 = "1", q2 = "1", coords;
};

ReportDocument stable_iso(const Params& p)
{
    ReportDocument doc;
    kr::KRDatum d{p.m, p.r, p.s, parse_q(p.q)};
    kr::validate(d);
    if (d.q.coeff(0) != 1) {
        kr::UnitNormalization n = kr::normalize_unit_constant(d);
        doc.data["rescaled_by"] = n.lambda.get_str();
        d = n.datum;
    }
    kr::StableIsoCertificate c = kr::build_stable_iso(d);
    doc.report = kr::verify_stable_iso(c, d);
    auto& cert = doc.data["certificate"];
    cert["q"] = d.q.to_string();
    for (auto [name, poly] : {std::pair{"f", &c.f}, {"g1", &c.g1}, {"g2", &c.g2}, {"h1", &c.h1}, {"h2", &c.h2},
                              {"h3", &c.h3}})
        cert[name] = poly->to_string();
    cert["matrix"] = nlohmann::ordered_json::array();
    for (const auto& row : c.matrix) {
        auto jr = nlohmann::ordered_json::array();
        for (const auto& e : row)
            jr.push_back(e.to_string());
        cert["matrix"].push_back(jr);
    }
    cert["det"] = c.det.get_str();
    cert["g2_shift"] = c.g2_shift;
    return doc;
}

ReportDocument classify(const Params& p)
{
    ReportDocument doc;
    kr::KRDatum a{p.m, p.r, p.s, parse_q(p.q1)}, b{p.m, p.r, p.s, parse_q(p.q2)};
    kr::validate(a);
    kr::validate(b);
    std::optional<kr::IsoWitness> w = kr::decide_isomorphic(a, b);
    if (w) {
        DensePoly diff = (a.q.scale_argument(w->lambda) * DensePoly(w->epsilon) - b.q).truncate(p.m - 1);
        doc.report.add("witness: q2 = eps*q1(lambda*x) mod x^(m-1)", diff.is_zero(), diff.to_string(),
                       "isomorphism criterion on q modulo x^(m-1)");
        doc.data["verdict"] = "isomorphic over the rationals";
        doc.data["lambda"] = w->lambda.get_str();
        doc.data["epsilon"] = w->epsilon.get_str();
    } else {
        doc.report.add("coefficient equations", true, "no rational solution",
                       "isomorphism criterion on q modulo x^(m-1)");
        doc.data["verdict"] = "not isomorphic over the rationals";
    }
    return doc;
}

ReportDocument moduli(const Params& p)
{
    ReportDocument doc;
    kr::KRDatum d;
    if (!p.coords.empty()) {
        kr::ModuliPoint pt;
        for (const auto& c : split_names(p.coords))
            pt.coords.emplace_back(c);
        for (auto& c : pt.coords)
            c.canonicalize();
        d = kr::moduli_embed(pt, p.m, p.r, p.s);
    } else {
        d = kr::KRDatum{p.m, p.r, p.s, parse_q(p.q)};
    }
    kr::validate(d);
    std::optional<kr::ModuliPoint> pt = kr::moduli_extract(d);
    doc.data["q"] = d.q.to_string();
    if (!pt) {
        doc.report.add("extract", false, "q has no linear term", "moduli coordinates a_2..a_(m-1)");
        return doc;
    }
    auto coords = nlohmann::ordered_json::array();
    for (const auto& c : pt->coords)
        coords.push_back(c.get_str());
    doc.data["coords"] = coords;
    kr::KRDatum back = kr::moduli_embed(*pt, p.m, p.r, p.s);
    doc.data["embedded_q"] = back.q.to_string();
    bool iso = kr::decide_isomorphic(d, back).has_value();
    doc.report.add("round trip is isomorphic", iso, iso ? "0" : "embedded point not isomorphic to input",
                   "moduli coordinates a_2..a_(m-1)");
    return doc;
}

ReportDocument hensel(const Params& p)
{
    ReportDocument doc;
    kr::HenselSplit h = kr::hensel_split(p.r, p.s, p.m);
    doc.report = h.checks;
    doc.report.append(kr::transition_cocycle_check(h), "transition ");
    doc.data["field"] = "Q(zeta_" + std::to_string(2 * p.r) + ")";
    auto roots = nlohmann::ordered_json::array();
    for (const auto& root : h.roots)
        roots.push_back(to_string(root));
    doc.data["roots"] = roots;
    doc.data["remainder"] = to_string(h.remainder);
    if (h.descended)
        doc.data["descended_remainder"] = to_string(*h.descended);
    return doc;
}

ReportDocument lnd_verify(const Params& p, bool example)
{
    ReportDocument doc;
    kr::validate(kr::KRDatum{p.m, p.r, p.s, DensePoly(Rational(1))});
    lnd::AmbientRing A = lnd::koras_russell_ambient(p.m, p.r, p.s);
    lnd::Derivation D = lnd::koras_russell_derivation(p.m, p.r, +1);
    const int bound = lnd::default_nilpotency_bound();
    doc.data["nilpotency_bound"] = bound;
    doc.report.append(lnd::tangency_check(D, A), "corrected: ");
    const char* anchor = "sign-corrected derivation x^m d/dy + r y^(r-1) d/dz";
    for (auto [var, want] : {std::pair<const char*, int>{"y", 2}, {"z", p.r + 1}}) {
        auto deg = lnd::nilpotency_degree(D, Poly::variable(A.ring, var), A, bound);
        doc.report.add(std::string("corrected: nilpotency degree on ") + var + " = " + std::to_string(want),
                       deg && *deg == want, deg ? std::to_string(*deg) : "not nilpotent within bound", anchor);
    }
    doc.report.append(lnd::flow_checks(D, A, bound), "corrected: ");
    doc.report.append(lnd::fixed_locus_check(D, A, lnd::koras_russell_line_ideal(),
                                             lnd::koras_russell_fixed_locus_certificates(p.m, p.r, p.s)),
                      "corrected: ");
    lnd::Derivation P = lnd::koras_russell_derivation(p.m, p.r, -1);
    Poly residual = A.reduce(lnd::apply(P, *A.relation));
    Poly expected = parse_polynomial("-2*" + std::to_string(p.r) + "*x^" + std::to_string(p.m) + "*y^" +
                                         std::to_string(p.r - 1),
                                     A.ring);
    doc.report.add("printed sign: residual = -2r x^m y^(r-1)", residual == A.reduce(expected), to_string(residual),
                   "printed sign variant x^m d/dy - r y^(r-1) d/dz is not tangent");
    if (example)
        doc.report.append(lnd::example_verify(), "example: ");
    return doc;
}

ReportDocument mw_normalize(const std::string& text, const std::string& order, const std::string& equal, bool audit)
{
    ReportDocument doc;
    mw::SymbolContext ctx;
    ctx.order = split_names(order);
    mw::TwistedSymbol s = mw::parse_symbol(text);
    mw::Audit trail;
    mw::MWSymbol nf = mw::normalize(s.symbol, ctx, &trail);
    mw::TwistedSymbol out{nf, s.twist};
    doc.data["input"] = text;
    doc.data["degree"] = nf.is_zero() ? s.symbol.degree : nf.degree;
    doc.data["normal_form"] = nf.is_zero() ? std::string("0") : mw::to_string(out);
    mw::MWSymbol again = mw::normalize(nf, ctx);
    bool idem = mw::eq(again, nf, ctx) == mw::Equality::equal && mw::to_string(again) == mw::to_string(nf);
    doc.report.add("normal form is idempotent", idem, idem ? "0" : mw::to_string(again),
                   "Milnor-Witt normal form");
    if (audit) {
        auto counts = nlohmann::ordered_json::object();
        for (const auto& [rule, n] : trail.counts())
            counts[mw::rule_name(rule)] = n;
        doc.data["audit"] = counts;
    }
    if (!equal.empty()) {
        mw::TwistedSymbol other = mw::parse_symbol(equal);
        mw::MWSymbol diff = mw::normalize(s.symbol - other.symbol, ctx);
        bool same = other.twist == s.twist && diff.is_zero();
        doc.report.add("equal to " + equal, same, diff.is_zero() ? "0" : mw::to_string(diff),
                       "normal-form equality");
    }
    return doc;
}

struct ScenarioJob {
    std::string file;
    std::map<std::string, long> params;
};

ReportDocument scenario_run(std::vector<std::string> files, bool all, bool grid, const std::map<std::string, long>& fixed,
                            const std::vector<std::string>& disabled, const std::string& twist_order)
{
    ReportDocument doc;
    if (all) {
        std::vector<std::string> found;
        for (const auto& entry : std::filesystem::directory_iterator(KRAS_SCENARIO_DIR))
            if (entry.path().extension() == ".scn")
                found.push_back(entry.path().string());
        std::sort(found.begin(), found.end());
        files.insert(files.end(), found.begin(), found.end());
    }
    if (files.empty())
        throw CLI::ValidationError("scenario-run needs a scenario file or --all");

    std::vector<ScenarioJob> jobs;
    std::map<std::string, std::string> texts;
    for (auto& f : files) {
        if (f.size() > 1 && f[0] == '@')
            f = f.substr(1);
        if (!std::filesystem::exists(f) && std::filesystem::exists(std::filesystem::path(KRAS_SCENARIO_DIR) / f))
            f = (std::filesystem::path(KRAS_SCENARIO_DIR) / f).string();
        texts[f] = read_file(f);
        gersten::ScenarioInfo info = gersten::describe_scenario(texts[f]);
        auto declared = [&](const std::string& n) {
            return std::any_of(info.params.begin(), info.params.end(), [&](const auto& p) { return p.first == n; });
        };
        std::map<std::string, long> base;
        for (const auto& [k, v] : fixed)
            if (declared(k) || !grid)
                base[k] = v;
        if (grid && declared("m") && declared("r") && declared("s")) {
            for (long m : {2, 3, 4})
                for (auto [r, s] : {std::pair{2L, 3L}, {2L, 5L}, {3L, 4L}}) {
                    auto params = base;
                    params["m"] = m;
                    params["r"] = r;
                    params["s"] = s;
                    jobs.push_back({f, params});
                }
        } else {
            jobs.push_back({f, base});
        }
    }

    gersten::ScenarioOptions base_options;
    base_options.disabled_certificates = {disabled.begin(), disabled.end()};
    if (!twist_order.empty())
        base_options.twist_order = split_names(twist_order);

    std::vector<std::future<gersten::ScenarioResult>> futures;
    for (const auto& job : jobs) {
        gersten::ScenarioOptions o = base_options;
        o.params = job.params;
        futures.push_back(std::async(std::launch::async, [text = texts[job.file], o] {
            return gersten::run_scenario(text, o);
        }));
    }
    std::vector<gersten::ScenarioResult> results;
    std::optional<gersten::ScenarioParseError> parse_error;
    for (std::size_t i = 0; i < futures.size(); ++i) {
        try {
            results.push_back(futures[i].get());
        } catch (const gersten::ScenarioParseError& e) {
            if (!parse_error)
                parse_error.emplace(e.line(), jobs[i].file + ": " + e.what());
            results.emplace_back();
        }
    }
    if (parse_error)
        throw *parse_error;

    auto runs = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        const auto& res = results[i];
        std::string label = std::filesystem::path(jobs[i].file).filename().string();
        if (!res.params.empty()) {
            std::string ps;
            for (const auto& [k, v] : res.params)
                ps += (ps.empty() ? "" : ",") + k + "=" + std::to_string(v);
            label += " (" + ps + ")";
        }
        std::string prefix = jobs.size() > 1 ? label + ": " : "";
        doc.report.append(res.report, prefix);
        if (res.errored) {
            doc.report.add(prefix + "error", false, res.error, "scenario run");
            doc.errored = true;
        }
        nlohmann::ordered_json run;
        run["file"] = jobs[i].file;
        run["params"] = res.params;
        run["passed"] = res.passed();
        if (res.errored)
            run["error"] = res.error;
        runs.push_back(run);
    }
    doc.data["runs"] = runs;
    return doc;
}

std::string join(const std::vector<std::string>& args)
{
    std::string s = "kras";
    for (const auto& a : args)
        s += " " + a;
    return s;
}

}  // namespace

nlohmann::ordered_json to_json(const ReportDocument& doc)
{
    nlohmann::ordered_json j;
    j["tool_version"] = KRAS_VERSION;
    j["command"] = doc.command;
    auto checks = nlohmann::ordered_json::array();
    for (const auto& c : doc.report.checks)
        checks.push_back({{"name", c.name},
                          {"status", status_name(c.status)},
                          {"pass", c.status != Status::fail},
                          {"residual", c.residual},
                          {"anchor", c.anchor}});
    j["checks"] = checks;
    j["result"] = !doc.errored && doc.report.ok() ? "pass" : "fail";
    j["data"] = doc.data;
    return j;
}

std::string to_text(const ReportDocument& doc)
{
    std::ostringstream out;
    out << "kras " << KRAS_VERSION << ": " << doc.command << "\n";
    for (const auto& c : doc.report.checks)
        out << "[" << status_name(c.status) << "] " << c.name << " | residual: " << c.residual
            << " | anchor: " << c.anchor << "\n";
    for (const auto& [key, value] : doc.data.items())
        out << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump()) << "\n";
    out << "result: " << (!doc.errored && doc.report.ok() ? "pass" : "fail") << "\n";
    return out.str();
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Exact verification tools for Koras-Russell threefolds", "kras"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", KRAS_VERSION);
    std::string format = "text";
    app.add_option("--format", format, "Report format")->check(CLI::IsMember({"text", "json"}));

    Params p;
    auto mrs = [&](CLI::App* sub, bool with_q) {
        sub->add_option("--m", p.m, "Exponent of x")->check(CLI::Range(2, 64));
        sub->add_option("--r", p.r, "Exponent of y")->check(CLI::Range(2, 64));
        sub->add_option("--s", p.s, "Exponent of t")->check(CLI::Range(2, 64));
        if (with_q)
            sub->add_option("--q", p.q, "Polynomial q(x)")->transform(at_file);
    };
    auto* s_iso = app.add_subcommand("stable-iso", "Build and verify the stable isomorphism certificate");
    mrs(s_iso, true);
    auto* s_cls = app.add_subcommand("classify", "Decide isomorphism of two members of the family");
    mrs(s_cls, false);
    s_cls->add_option("--q1", p.q1, "First q(x)")->required()->transform(at_file);
    s_cls->add_option("--q2", p.q2, "Second q(x)")->required()->transform(at_file);
    auto* s_mod = app.add_subcommand("moduli", "Moduli coordinates of q, or the q of given coordinates");
    mrs(s_mod, true);
    s_mod->add_option("--coords", p.coords, "Comma-separated a_2,...,a_(m-1)")->transform(at_file);
    auto* s_hen = app.add_subcommand("hensel", "Hensel splitting of y^r + t^s + x");
    mrs(s_hen, false);
    auto* s_lnd = app.add_subcommand("lnd-verify", "Locally nilpotent derivation checks");
    mrs(s_lnd, false);
    bool example = false;
    s_lnd->add_flag("--example", example, "Also run the Russell cubic reporter");
    auto* s_mw = app.add_subcommand("mw-normalize", "Milnor-Witt normal form of a symbol");
    std::string symbol, order, equal;
    bool audit = false;
    s_mw->add_option("symbol", symbol, "Symbol")->required()->transform(at_file);
    s_mw->add_option("--order", order, "Generator order, comma separated");
    s_mw->add_option("--equal", equal, "Compare with another symbol")->transform(at_file);
    s_mw->add_flag("--audit", audit, "Report rule counts");
    auto* s_scn = app.add_subcommand("scenario-run", "Run scenario files");
    std::vector<std::string> files, disabled;
    std::optional<int> sm, sr, ss;
    bool all = false, grid = false;
    std::string twist_order;
    s_scn->add_option("files", files, "Scenario files (path or @path)");
    s_scn->add_option("--m", sm, "Parameter m")->check(CLI::Range(2, 64));
    s_scn->add_option("--r", sr, "Parameter r")->check(CLI::Range(2, 64));
    s_scn->add_option("--s", ss, "Parameter s")->check(CLI::Range(2, 64));
    s_scn->add_flag("--all", all, "Run every shipped scenario");
    s_scn->add_flag("--grid", grid, "Run the (m, r, s) acceptance grid");
    s_scn->add_option("--disable", disabled, "Skip a certificate");
    s_scn->add_option("--twist-order", twist_order, "Canonical twist order, comma separated");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help() << "\n" << kGrammarHelp;
        return exit_pass;
    } catch (const CLI::CallForVersion&) {
        out << KRAS_VERSION << "\n";
        return exit_pass;
    } catch (const CLI::ParseError& e) {
        err << "kras: " << e.what() << "\n" << app.help() << "\n" << kGrammarHelp;
        return exit_usage;
    }

    ReportDocument doc;
    try {
        if (s_iso->parsed())
            doc = stable_iso(p);
        else if (s_cls->parsed())
            doc = classify(p);
        else if (s_mod->parsed())
            doc = moduli(p);
        else if (s_hen->parsed())
            doc = hensel(p);
        else if (s_lnd->parsed())
            doc = lnd_verify(p, example);
        else if (s_mw->parsed())
            doc = mw_normalize(symbol, order, equal, audit);
        else {
            std::map<std::string, long> fixed;
            for (auto [name, v] : {std::pair{"m", sm}, {"r", sr}, {"s", ss}})
                if (v)
                    fixed[name] = *v;
            doc = scenario_run(files, all, grid, fixed, disabled, twist_order);
        }
    } catch (const CLI::Error& e) {
        err << "kras: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::invalid_argument& e) {
        err << "kras: " << e.what() << "\n" << kGrammarHelp;
        return exit_usage;
    } catch (const std::exception& e) {
        doc.report.add("error", false, e.what(), "command execution");
        doc.errored = true;
    }
    doc.command = join(args);
    if (format == "json")
        out << to_json(doc).dump(2) << "\n";
    else
        out << to_text(doc);
    return !doc.errored && doc.report.ok() ? exit_pass : exit_fail;
}

}  // namespace kras::cli
