#include "critlen/cli.hpp"

#include "critlen/bessel.hpp"
#include "critlen/critical_length.hpp"
#include "critlen/determinants.hpp"
#include "critlen/errors.hpp"
#include "critlen/identities.hpp"
#include "critlen/json_output.hpp"
#include "critlen/parallel.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <functional>
#include <memory>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <regex>

namespace critlen {

double parse_decimal(const std::string& text, const std::string& what)
{
    static const std::regex decimal(R"([+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?)");
    if (!std::regex_match(text, decimal))
        throw UsageError(what + ": '" + text + "' is not a decimal literal");
    const double v = std::strtod(text.c_str(), nullptr);
    if (!std::isfinite(v))
        throw UsageError(what + ": '" + text + "' is out of range");
    return v;
}

int parse_integer(const std::string& text, const std::string& what)
{
    static const std::regex integer(R"([+-]?\d{1,9})");
    if (!std::regex_match(text, integer))
        throw UsageError(what + ": '" + text + "' is not an integer");
    return std::stoi(text);
}

std::pair<double, double> parse_range(const std::string& text)
{
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        throw UsageError("range must look like a:b");
    const double a = parse_decimal(text.substr(0, colon), "range start");
    const double b = parse_decimal(text.substr(colon + 1), "range end");
    if (!(a <= b))
        throw UsageError("range start must not exceed its end");
    return {a, b};
}

namespace {

constexpr double kScanEpsilon = 1e-3;

struct Options {
    std::string threads;
    // fn
    std::string fn_n = "0";
    std::string fn_x;
    std::string fn_deriv = "0";
    // zeros
    std::string zeros_nu;
    std::string zeros_count = "1";
    bool zeros_deriv = false;
    // scan
    std::string scan_what;
    std::string scan_n;
    std::string scan_j;
    std::string scan_range = "0:10";
    std::string scan_points = "200";
    std::string scan_format = "csv";
    // verify
    std::string verify_identity = "all";
    std::string verify_model;
    std::string verify_range = "0.01:30";
    std::string verify_points = "500";
    std::string verify_tol;
    std::string verify_format = "json";
    // critlen
    std::string cl_n;
    std::string cl_cap;
    std::string cl_tol = "1e-12";
    std::string cl_format = "json";
};

int resolve_threads(const Options& o)
{
    if (o.threads.empty())
        return default_thread_count();
    const int t = parse_integer(o.threads, "--threads");
    if (t < 1)
        throw UsageError("--threads must be >= 1");
    return t;
}

void print(std::ostream& out, const nlohmann::json& config, nlohmann::json data)
{
    write_json(out, envelope(config, std::move(data)));
    out << '\n';
}

int run_fn_show(const Options& o, std::ostream& out, int threads)
{
    const int n = parse_integer(o.fn_n, "--n");
    const TrigPoly f = spherical_fn(n);
    const nlohmann::json config = {{"command", "fn show"}, {"n", n}, {"threads", threads}};
    print(out, config, {{"n", n}, {"text", to_string(f)}, {"trigpoly", to_json(f)}});
    return kExitOk;
}

int run_fn_eval(const Options& o, std::ostream& out, int threads)
{
    const int n = parse_integer(o.fn_n, "--n");
    const double x = parse_decimal(o.fn_x, "--x");
    const int d = parse_integer(o.fn_deriv, "--deriv");
    if (d < 0 || d > 64)
        throw UsageError("--deriv must be in 0..64");
    TrigPoly f = spherical_fn(n);
    for (int i = 0; i < d; ++i)
        f = derivative(f);
    const nlohmann::json config = {{"command", "fn eval"}, {"n", n}, {"x", x}, {"deriv", d}, {"threads", threads}};
    print(out, config, {{"n", n}, {"x", x}, {"deriv", d}, {"value", evaluate(f, x)}});
    return kExitOk;
}

int run_zeros(const Options& o, std::ostream& out, int threads)
{
    const double nu = parse_decimal(o.zeros_nu, "--nu");
    const int count = parse_integer(o.zeros_count, "--count");
    if (count < 1)
        throw UsageError("--count must be >= 1");
    const BesselOrder order(nu);
    auto rows = parallel_map(static_cast<std::size_t>(count), threads, [&](std::size_t i) {
        const int k = static_cast<int>(i) + 1;
        const ZeroResult z = o.zeros_deriv ? bessel_deriv_zero(order, k) : bessel_zero(order, k);
        return nlohmann::json{{"index", k}, {"value", z.value}, {"residual", z.residual}};
    });
    const nlohmann::json config = {
        {"command", "zeros"}, {"nu", nu}, {"count", count}, {"deriv", o.zeros_deriv}, {"threads", threads}};
    print(out, config, nlohmann::json(rows));
    return kExitOk;
}

int run_scan(const Options& o, std::ostream& out, int threads)
{
    const int n = parse_integer(o.scan_n, "--n");
    auto [lo, hi] = parse_range(o.scan_range);
    const int points = parse_integer(o.scan_points, "--points");
    if (points < 1)
        throw UsageError("--points must be >= 1");
    if (hi <= 0.0)
        throw UsageError("scan range must reach x > 0");
    lo = std::max(lo, kScanEpsilon);
    if (lo > hi)
        throw UsageError("scan range lies inside the excluded zone (0, 1e-3)");

    std::function<double(double)> g;
    int j = 0;
    if (o.scan_what == "v" || o.scan_what == "w") {
        if (!o.scan_j.empty())
            throw UsageError("--j only applies to --what minor");
        auto f = std::make_shared<TrigPoly>(o.scan_what == "v" ? symbolic_v(spherical_fn(n))
                                                               : symbolic_w(spherical_fn(n)));
        g = [f](double x) { return evaluate(*f, x); };
    } else {
        if (o.scan_j.empty())
            throw UsageError("--what minor needs --j");
        j = parse_integer(o.scan_j, "--j");
        auto minor = std::make_shared<MinorEvaluator>(n, j);
        g = [minor](double x) { return (*minor)(x); };
    }
    const GridSpec grid{lo, hi, points, false};
    const auto xs = grid.nodes();
    const auto values = parallel_map(xs.size(), threads, [&](std::size_t i) { return g(xs[i]); });
    auto sign = [](double v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); };

    if (o.scan_format == "csv") {
        out << "x,value,sign\n";
        for (std::size_t i = 0; i < xs.size(); ++i)
            out << format_double(xs[i]) << ',' << format_double(values[i]) << ',' << sign(values[i]) << '\n';
        return kExitOk;
    }
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < xs.size(); ++i)
        rows.push_back({{"x", xs[i]}, {"value", values[i]}, {"sign", sign(values[i])}});
    nlohmann::json config = {{"command", "scan"}, {"what", o.scan_what}, {"n", n},     {"lo", lo},
                             {"hi", hi},          {"points", points},    {"format", o.scan_format}, {"threads", threads}};
    if (o.scan_what == "minor")
        config["j"] = j;
    print(out, config, std::move(rows));
    return kExitOk;
}

int run_verify(const Options& o, std::ostream& out, int threads)
{
    const CoeffModel model = parse_model(o.verify_model);
    const auto [lo, hi] = parse_range(o.verify_range);
    const int points = parse_integer(o.verify_points, "--points");
    if (points < 1)
        throw UsageError("--points must be >= 1");
    std::optional<double> tol;
    if (!o.verify_tol.empty()) {
        tol = parse_decimal(o.verify_tol, "--tol");
        if (!(*tol > 0.0))
            throw UsageError("--tol must be positive");
    }
    std::vector<IdentityId> ids;
    if (o.verify_identity == "all") {
        ids = all_identities();
    } else {
        const IdentityId id = parse_identity(o.verify_identity);
        if (auto why = not_applicable(id, model))
            throw UsageError(o.verify_identity + " does not apply to " + model.descriptor + ": " + *why);
        ids.push_back(id);
    }
    const Subject subject = default_subject(model);
    const GridSpec grid{lo, hi, points, true};

    nlohmann::json reports = nlohmann::json::array();
    bool all_pass = true;
    for (IdentityId id : ids) {
        const auto report = verify_identity(id, model, subject, grid, tol, threads);
        all_pass = all_pass && report.pass;
        reports.push_back(to_json(report));
    }
    nlohmann::json config = {{"command", "verify"}, {"identity", o.verify_identity},
                             {"model", model.descriptor}, {"lo", lo},
                             {"hi", hi},                  {"points", points},
                             {"spacing", "log"},          {"format", o.verify_format},
                             {"threads", threads}};
    config["tol"] = tol ? nlohmann::json(*tol) : nlohmann::json("default");
    print(out, config, std::move(reports));
    return all_pass ? kExitOk : kExitCheckFailed;
}

void print_table(std::ostream& out, const CritLenReport& r)
{
    char line[160];
    std::snprintf(line, sizeof line, "n = %d   reference j_{n+1/2,1} = %.17g\n", r.n, r.reference);
    out << line;
    out << "   j  first_zero                indeterminate\n";
    for (const auto& s : r.per_j) {
        const std::string zero = s.first_zero ? format_double(*s.first_zero) : "none (cap " + format_double(s.search_cap) + ")";
        std::snprintf(line, sizeof line, "%4d  %-24s  %s\n", s.j, zero.c_str(), s.indeterminate ? "yes" : "no");
        out << line;
    }
    out << "estimate  " << format_double(r.estimate) << '\n';
    out << "gap       " << format_double(r.gap) << '\n';
    out << "consistent " << (r.conjecture_consistent ? "yes" : "no") << (r.n >= 3 ? " (exploratory)" : "") << '\n';
}

int run_critlen(const Options& o, std::ostream& out, int threads)
{
    const int n = parse_integer(o.cl_n, "--n");
    std::optional<double> cap;
    if (!o.cl_cap.empty())
        cap = parse_decimal(o.cl_cap, "--cap");
    const double tol = parse_decimal(o.cl_tol, "--tol");
    const CritLenReport r = estimate_critical_length(n, cap, tol, threads);
    if (o.cl_format == "table") {
        print_table(out, r);
        return kExitOk;
    }
    const nlohmann::json config = {{"command", "critlen"},
                                   {"n", n},
                                   {"cap", r.cap},
                                   {"tol", tol},
                                   {"format", o.cl_format},
                                   {"threads", threads}};
    print(out, config, to_json(r));
    return kExitOk;
}

} // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Spherical Bessel determinants, identity checks and critical lengths", "critlen"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(version()));
    Options o;
    app.add_option("--threads", o.threads, "Worker threads (default: CRITLEN_THREADS or 1)");

    auto* fn = app.add_subcommand("fn", "Show or evaluate the spherical function f_n");
    fn->require_subcommand(1);
    auto* fn_show = fn->add_subcommand("show", "Print f_n as an exact ring element");
    fn_show->add_option("--n", o.fn_n, "Order n")->required();
    auto* fn_eval = fn->add_subcommand("eval", "Evaluate f_n or a derivative at x");
    fn_eval->add_option("--n", o.fn_n, "Order n")->required();
    fn_eval->add_option("--x", o.fn_x, "Point x")->required();
    fn_eval->add_option("--deriv", o.fn_deriv, "Derivative order")->capture_default_str();

    auto* zeros = app.add_subcommand("zeros", "Positive zeros of J_nu or J_nu'");
    zeros->add_option("--nu", o.zeros_nu, "Order nu >= 0")->required();
    zeros->add_option("--count", o.zeros_count, "Number of zeros")->capture_default_str();
    zeros->add_flag("--deriv", o.zeros_deriv, "Zeros of the derivative");

    auto* scan = app.add_subcommand("scan", "Tabulate v(f_n), w(f_n) or a Wronskian minor");
    scan->add_option("--what", o.scan_what, "v, w or minor")->required()->check(CLI::IsMember({"v", "w", "minor"}));
    scan->add_option("--n", o.scan_n, "Order n")->required();
    scan->add_option("--j", o.scan_j, "Minor index j");
    scan->add_option("--range", o.scan_range, "Range a:b")->capture_default_str();
    scan->add_option("--points", o.scan_points, "Number of points")->capture_default_str();
    scan->add_option("--format", o.scan_format, "csv or json")->capture_default_str()->check(CLI::IsMember({"csv", "json"}));

    auto* verify = app.add_subcommand("verify", "Check identities on a grid");
    verify->add_option("--identity", o.verify_identity, "Identity tag or 'all'")->capture_default_str();
    verify->add_option("--model", o.verify_model, "spherical:<n> or bessel:<nu>")->required();
    verify->add_option("--range", o.verify_range, "Range a:b")->capture_default_str();
    verify->add_option("--points", o.verify_points, "Number of log-spaced points")->capture_default_str();
    verify->add_option("--tol", o.verify_tol, "Tolerance override");
    verify->add_option("--format", o.verify_format, "json")->capture_default_str()->check(CLI::IsMember({"json"}));

    auto* critlen = app.add_subcommand("critlen", "Estimate the critical length for order n");
    critlen->add_option("--n", o.cl_n, "Order n")->required();
    critlen->add_option("--cap", o.cl_cap, "Search cap (default 1.5 j_{n+1/2,1})");
    critlen->add_option("--tol", o.cl_tol, "Bisection tolerance")->capture_default_str();
    critlen->add_option("--format", o.cl_format, "json or table")->capture_default_str()->check(CLI::IsMember({"json", "table"}));

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(std::move(reversed));
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << version() << '\n';
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    try {
        const int threads = resolve_threads(o);
        if (fn_show->parsed())
            return run_fn_show(o, out, threads);
        if (fn_eval->parsed())
            return run_fn_eval(o, out, threads);
        if (zeros->parsed())
            return run_zeros(o, out, threads);
        if (scan->parsed())
            return run_scan(o, out, threads);
        if (verify->parsed())
            return run_verify(o, out, threads);
        if (critlen->parsed())
            return run_critlen(o, out, threads);
        err << app.help();
        return kExitUsage;
    } catch (const SingularPoint& e) {
        err << "error: singular point at x=" << format_double(e.x) << ": " << e.what() << '\n';
        return kExitUsage;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const NumericalFailure& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
}

} // namespace critlen
