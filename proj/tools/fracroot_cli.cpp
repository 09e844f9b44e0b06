// fracroot command line: load a problem file, sweep the derivative order,
// and report the deduplicated roots as a table, CSV, or JSON.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fracroot.h"
#include "json.hpp"

using nlohmann::json;

namespace {

struct Problem {
    std::string name;
    int n = 0;
    std::vector<std::string> equations;
    std::vector<double> x0;
    json defaults;  // optional config overrides
};

std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string format_fixed(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.8f", v);
    return buf;
}

std::string format_complex(double re, double im) {
    if (im == 0.0) return format_fixed(re);
    std::string s = format_fixed(re);
    s += im < 0.0 ? " - " : " + ";
    s += format_fixed(std::abs(im));
    s += "i";
    return s;
}

Problem load_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open problem file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw std::runtime_error("problem file is not valid JSON: " + std::string(e.what()));
    }
    Problem p;
    try {
        p.name = j.value("name", path);
        p.n = j.at("n").get<int>();
        p.equations = j.at("equations").get<std::vector<std::string>>();
        p.x0 = j.at("x0").get<std::vector<double>>();
        if (j.contains("defaults")) p.defaults = j["defaults"];
    } catch (const json::exception& e) {
        throw std::runtime_error("problem file is missing fields: " + std::string(e.what()));
    }
    if (static_cast<int>(p.equations.size()) != p.n)
        throw std::runtime_error("problem file: need exactly n equations");
    if (static_cast<int>(p.x0.size()) != p.n)
        throw std::runtime_error("problem file: x0 needs exactly n entries");
    return p;
}

std::optional<fr_method> parse_method(const std::string& name) {
    if (name == "newton") return FR_METHOD_NEWTON;
    if (name == "frac-newton-raphson") return FR_METHOD_FRAC_NEWTON_RAPHSON;
    if (name == "frac-newton") return FR_METHOD_FRAC_NEWTON;
    if (name == "quasi") return FR_METHOD_QUASI;
    if (name == "pseudo") return FR_METHOD_PSEUDO;
    if (name == "chord") return FR_METHOD_CHORD;
    return std::nullopt;
}

// defaults block of the problem file; CLI flags that were typed win later
void apply_defaults(const json& d, fr_config& cfg, std::string& method_name) {
    if (d.is_null()) return;
    if (d.contains("tol")) cfg.tol = d["tol"].get<double>();
    if (d.contains("max_iter")) cfg.max_iter = d["max_iter"].get<int>();
    if (d.contains("delta")) cfg.delta = d["delta"].get<double>();
    if (d.contains("div_bound")) cfg.div_bound = d["div_bound"].get<double>();
    if (d.contains("eps_shift")) cfg.eps_shift = d["eps_shift"].get<double>();
    if (d.contains("chord_slope")) cfg.chord_slope = d["chord_slope"].get<double>();
    if (d.contains("n_trunc")) cfg.n_trunc = d["n_trunc"].get<int>();
    if (d.contains("alpha_step")) cfg.alpha_step = d["alpha_step"].get<double>();
    if (d.contains("alpha_excl")) cfg.alpha_excl = d["alpha_excl"].get<double>();
    if (d.contains("alpha")) cfg.alpha = d["alpha"].get<double>();
    if (d.contains("eps_dedup")) cfg.eps_dedup = d["eps_dedup"].get<double>();
    if (d.contains("deriv")) {
        const std::string k = d["deriv"].get<std::string>();
        if (k == "caputo") cfg.deriv = FR_DERIV_CAPUTO;
        else if (k == "rl") cfg.deriv = FR_DERIV_RIEMANN_LIOUVILLE;
        else throw std::runtime_error("problem file: deriv must be rl or caputo");
    }
    if (d.contains("method")) method_name = d["method"].get<std::string>();
}

struct RootRow {
    double alpha;
    std::vector<double> re, im;
    double last_step;
    double residual;  // recomputed at print time
    int iterations;
};

std::vector<RootRow> collect_roots(const fr_system* sys, const fr_result* res, int n) {
    std::vector<RootRow> rows;
    const int count = fr_result_root_count(res);
    for (int i = 0; i < count; ++i) {
        RootRow r;
        r.re.resize(n);
        r.im.resize(n);
        double stored_residual = 0.0;
        fr_result_root(res, i, &r.alpha, r.re.data(), r.im.data(), &stored_residual,
                       &r.iterations, &r.last_step);
        std::vector<double> fre(n), fim(n);
        if (fr_system_eval(sys, r.re.data(), r.im.data(), fre.data(), fim.data()) == FR_OK) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) s += fre[k] * fre[k] + fim[k] * fim[k];
            r.residual = std::sqrt(s);
        } else {
            r.residual = stored_residual;
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

void write_table(std::ostream& os, const std::vector<RootRow>& rows, int n) {
    os << "  m  alpha_m      ";
    for (int k = 0; k < n; ++k) os << "xi_" << (k + 1) << std::string(24, ' ');
    os << "||xR-xR-1||     ||f(xi)||       R_m\n";
    int m = 1;
    for (const RootRow& r : rows) {
        char head[32];
        std::snprintf(head, sizeof(head), "%3d  %-11.5f  ", m++, r.alpha);
        os << head;
        for (int k = 0; k < n; ++k) {
            std::string c = format_complex(r.re[k], r.im[k]);
            if (c.size() < 28) c.resize(28, ' ');
            else c += "  ";
            os << c;
        }
        char tail[64];
        std::snprintf(tail, sizeof(tail), "%-14.5e  %-14.5e  %d", r.last_step, r.residual,
                      r.iterations);
        os << tail << "\n";
    }
}

void write_csv(std::ostream& os, const std::vector<RootRow>& rows, int n) {
    os << "m,alpha";
    for (int k = 0; k < n; ++k) os << ",x" << (k + 1) << "_re,x" << (k + 1) << "_im";
    os << ",step,residual,iterations\n";
    int m = 1;
    for (const RootRow& r : rows) {
        os << m++ << "," << format_full(r.alpha);
        for (int k = 0; k < n; ++k)
            os << "," << format_full(r.re[k]) << "," << format_full(r.im[k]);
        os << "," << format_full(r.last_step) << "," << format_full(r.residual) << ","
           << r.iterations << "\n";
    }
}

void write_json(std::ostream& os, const Problem& p, const std::string& method,
                const std::vector<RootRow>& rows, const fr_result* res) {
    json out;
    out["name"] = p.name;
    out["method"] = method;
    out["n"] = p.n;
    json roots = json::array();
    for (const RootRow& r : rows) {
        json e;
        e["alpha"] = r.alpha;
        json comps = json::array();
        for (int k = 0; k < p.n; ++k) comps.push_back({{"re", r.re[k]}, {"im", r.im[k]}});
        e["root"] = comps;
        e["step"] = r.last_step;
        e["residual"] = r.residual;
        e["iterations"] = r.iterations;
        roots.push_back(e);
    }
    out["roots"] = roots;
    int conv = 0, div = 0, exh = 0;
    const int records = fr_result_record_count(res);
    for (int i = 0; i < records; ++i) {
        fr_outcome o;
        fr_result_record(res, i, nullptr, &o, nullptr, nullptr, nullptr, nullptr, nullptr);
        if (o == FR_OUTCOME_CONVERGED) ++conv;
        else if (o == FR_OUTCOME_DIVERGED) ++div;
        else ++exh;
    }
    out["runs"] = {{"total", records}, {"converged", conv}, {"diverged", div},
                   {"exhausted", exh}};
    os << out.dump(2) << "\n";
}

int write_trace(const std::string& path, const fr_result* res, int n) {
    std::ofstream os(path);
    if (!os) {
        std::cerr << "cannot open trace file: " << path << "\n";
        return 1;
    }
    os << "alpha,iteration,alpha_eff";
    for (int k = 0; k < n; ++k) os << ",x" << (k + 1) << "_re,x" << (k + 1) << "_im";
    os << ",residual\n";
    const int records = fr_result_record_count(res);
    std::vector<double> re(n), im(n);
    for (int i = 0; i < records; ++i) {
        double alpha = 0.0;
        fr_result_record(res, i, &alpha, nullptr, nullptr, nullptr, nullptr, nullptr, nullptr);
        const int len = fr_result_trace_len(res, i);
        for (int row = 0; row < len; ++row) {
            int iter = 0;
            double aeff = 0.0, residual = 0.0;
            fr_result_trace_row(res, i, row, &iter, &aeff, re.data(), im.data(), &residual);
            os << format_full(alpha) << "," << iter << "," << format_full(aeff);
            for (int k = 0; k < n; ++k)
                os << "," << format_full(re[k]) << "," << format_full(im[k]);
            os << "," << format_full(residual) << "\n";
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fracroot — real and complex zeros from real starts, by order sweeping"};
    app.require_subcommand(1);

    auto* solve = app.add_subcommand("solve", "run an order sweep on a problem file");
    std::string problem_path, method_name = "frac-newton", deriv_name, out_format = "table";
    std::string trace_path;
    double tol = 0, delta = 0, div_bound = 0, eps_shift = 0, eps_dedup = 0;
    double alpha_step = 0, alpha_excl = 0, alpha = 0, chord_slope = 0;
    int max_iter = 0, n_trunc = 0, jobs = 1;

    solve->add_option("--problem", problem_path, "problem JSON file")->required();
    auto* opt_method = solve->add_option(
        "--method", method_name, "newton|frac-newton|frac-newton-raphson|quasi|pseudo|chord");
    auto* opt_deriv = solve->add_option("--deriv", deriv_name, "rl|caputo");
    auto* opt_tol = solve->add_option("--tol", tol, "convergence tolerance");
    auto* opt_maxit = solve->add_option("--max-iter", max_iter, "iteration limit per order");
    auto* opt_delta = solve->add_option("--delta", delta, "order-switch threshold");
    auto* opt_div = solve->add_option("--div-bound", div_bound, "divergence bound M");
    auto* opt_shift = solve->add_option("--eps-shift", eps_shift, "pseudo-Newton shift");
    auto* opt_dedup = solve->add_option("--eps-dedup", eps_dedup, "registry dedup threshold");
    auto* opt_step = solve->add_option("--alpha-step", alpha_step, "grid spacing");
    auto* opt_excl = solve->add_option("--alpha-excl", alpha_excl, "radius around -1,0,1");
    auto* opt_alpha = solve->add_option("--alpha", alpha, "single order instead of a grid");
    auto* opt_slope = solve->add_option("--chord-slope", chord_slope, "parallel chord slope");
    auto* opt_trunc = solve->add_option("--n-trunc", n_trunc, "Taylor terms per call");
    solve->add_option("--out", out_format, "table|csv|json")
        ->check(CLI::IsMember({"table", "csv", "json"}));
    solve->add_option("--trace", trace_path, "write per-iteration traces to a CSV file");
    solve->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;  // usage error
    }

    Problem problem;
    try {
        problem = load_problem(problem_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    const std::string method_flag = method_name;  // file defaults must not beat a typed flag
    fr_config cfg;
    fr_config_default(&cfg);
    try {
        apply_defaults(problem.defaults, cfg, method_name);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    if (opt_method->count()) method_name = method_flag;
    if (opt_tol->count()) cfg.tol = tol;
    if (opt_maxit->count()) cfg.max_iter = max_iter;
    if (opt_delta->count()) cfg.delta = delta;
    if (opt_div->count()) cfg.div_bound = div_bound;
    if (opt_shift->count()) cfg.eps_shift = eps_shift;
    if (opt_dedup->count()) cfg.eps_dedup = eps_dedup;
    if (opt_step->count()) cfg.alpha_step = alpha_step;
    if (opt_excl->count()) cfg.alpha_excl = alpha_excl;
    if (opt_alpha->count()) cfg.alpha = alpha;
    if (opt_slope->count()) cfg.chord_slope = chord_slope;
    if (opt_trunc->count()) cfg.n_trunc = n_trunc;
    if (opt_deriv->count()) {
        if (deriv_name == "rl") cfg.deriv = FR_DERIV_RIEMANN_LIOUVILLE;
        else if (deriv_name == "caputo") cfg.deriv = FR_DERIV_CAPUTO;
        else {
            std::cerr << "error: --deriv must be rl or caputo\n";
            return 1;
        }
    }
    cfg.jobs = jobs;
    cfg.record_trace = trace_path.empty() ? 0 : 1;

    const std::optional<fr_method> method = parse_method(method_name);
    if (!method) {
        std::cerr << "error: unknown method '" << method_name << "'\n";
        return 1;
    }

    std::vector<const char*> eqs;
    eqs.reserve(problem.equations.size());
    for (const std::string& s : problem.equations) eqs.push_back(s.c_str());

    fr_system* sys = nullptr;
    if (fr_system_parse(eqs.data(), problem.n, &sys) != FR_OK) {
        std::cerr << "error: " << fr_last_error() << "\n";
        return 2;
    }

    fr_result* res = nullptr;
    const fr_status st = fr_sweep(sys, *method, &cfg, problem.x0.data(), &res);
    if (st != FR_OK) {
        std::cerr << "error: " << fr_last_error() << "\n";
        fr_system_free(sys);
        return 2;
    }

    const std::vector<RootRow> rows = collect_roots(sys, res, problem.n);

    if (fr_system_has_transcendental(sys)) {
        for (const RootRow& r : rows) {
            double big = 0.0;
            for (int k = 0; k < problem.n; ++k)
                big = std::max(big, std::hypot(r.re[k], r.im[k]));
            if (big > 10.0) {
                std::cerr << "note: roots with |x| > 10 rely on truncated series; "
                             "accuracy degrades there (raise --n-trunc if needed)\n";
                break;
            }
        }
    }

    if (out_format == "table") write_table(std::cout, rows, problem.n);
    else if (out_format == "csv") write_csv(std::cout, rows, problem.n);
    else write_json(std::cout, problem, method_name, rows, res);

    int rc = rows.empty() ? 3 : 0;
    if (!trace_path.empty() && write_trace(trace_path, res, problem.n) != 0) rc = rc ? rc : 1;

    fr_result_free(res);
    fr_system_free(sys);
    return rc;
}
