// Command-line front end for the Kontorovich-Lebedev gamma library: point
// evaluation (gamma pair, Bessel functions, renormalized kernel), identity
// verification sweeps, Fourier-transform tables, and Fokker-Planck solves.
//
// Exit codes: 0 on success, 1 if a verify sweep exceeds its tolerance,
// 2 on argument or precondition errors (one-line diagnostic on stderr).
//
// All numeric output uses 17-significant-digit formatting and fixed field
// order, so identical invocations produce byte-identical files.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "klgamma/fokker_planck.hpp"
#include "klgamma/identities.hpp"

namespace {

using klg::cplx;

// ---------------------------------------------------------------------------
// Deterministic serialization helpers
// ---------------------------------------------------------------------------

std::string fmt(double v) {
    if (std::isnan(v)) return "null";
    if (std::isinf(v)) return v > 0 ? "1e999" : "-1e999";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_csv(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string json_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') {
            out += '\\';
            out += c;
        } else if (c == '\n') {
            out += "\\n";
        } else {
            out += c;
        }
    }
    return out;
}

// Ordered key/value JSON object writer (nested arrays/objects passed raw).
class JsonObject {
  public:
    JsonObject& field(const std::string& key, double v) { return raw(key, fmt(v)); }
    JsonObject& field(const std::string& key, const std::string& v) {
        return raw(key, "\"" + json_escape(v) + "\"");
    }
    JsonObject& field(const std::string& key, bool v) { return raw(key, v ? "true" : "false"); }
    JsonObject& field(const std::string& key, long v) { return raw(key, std::to_string(v)); }
    JsonObject& field(const std::string& key, int v) { return raw(key, std::to_string(v)); }
    JsonObject& raw(const std::string& key, const std::string& v) {
        parts_.push_back("\"" + key + "\": " + v);
        return *this;
    }
    std::string str() const {
        std::string out = "{";
        for (std::size_t i = 0; i < parts_.size(); ++i) {
            if (i) out += ", ";
            out += parts_[i];
        }
        return out + "}";
    }

  private:
    std::vector<std::string> parts_;
};

std::string report_json(const klg::IdentityReport& r) {
    JsonObject params;
    for (const auto& [k, v] : r.params) params.field(k, v);
    JsonObject o;
    o.field("name", r.name)
        .raw("params", params.str())
        .raw("lhs", "[" + fmt(r.lhs.real()) + ", " + fmt(r.lhs.imag()) + "]")
        .raw("rhs", "[" + fmt(r.rhs.real()) + ", " + fmt(r.rhs.imag()) + "]")
        .field("abs_residual", r.abs_residual)
        .field("rel_residual", r.rel_residual)
        .field("evaluations", r.evaluations)
        .field("converged", r.converged);
    if (!r.error.empty()) o.field("error", r.error);
    return o.str();
}

void report_human(std::ostream& os, const klg::IdentityReport& r) {
    os << r.name << " (";
    for (std::size_t i = 0; i < r.params.size(); ++i) {
        if (i) os << ", ";
        os << r.params[i].first << "=" << fmt(r.params[i].second);
    }
    os << "): rel_residual=" << fmt(r.rel_residual)
       << (r.converged ? "" : "  NOT CONVERGED");
    if (!r.error.empty()) os << "  error: " << r.error;
    os << "\n";
}

// ---------------------------------------------------------------------------
// Argument helpers
// ---------------------------------------------------------------------------

cplx parse_complex(const std::string& s) {
    std::istringstream in(s);
    double re = 0.0, im = 0.0;
    char comma = 0;
    if (!(in >> re)) throw klg::domain_error("malformed complex number '" + s + "'");
    if (in >> comma) {
        if (comma != ',' || !(in >> im))
            throw klg::domain_error("malformed complex number '" + s +
                                    "' (expected RE or RE,IM)");
    }
    std::string rest;
    if (in >> rest) throw klg::domain_error("malformed complex number '" + s + "'");
    return {re, im};
}

std::vector<double> parse_range(const std::string& s) {
    double lo = 0.0, hi = 0.0, step = 0.0;
    char c1 = 0, c2 = 0;
    std::istringstream in(s);
    if (!(in >> lo >> c1 >> hi >> c2 >> step) || c1 != ':' || c2 != ':' || !(step > 0.0))
        throw klg::domain_error("malformed grid '" + s + "' (expected LO:HI:STEP, STEP > 0)");
    std::string rest;
    if (in >> rest) throw klg::domain_error("malformed grid '" + s + "'");
    if (hi < lo) throw klg::domain_error("malformed grid '" + s + "' (HI below LO)");
    std::vector<double> out;
    for (int i = 0;; ++i) {
        const double v = lo + i * step;
        if (v > hi + 1e-12 * step) break;
        out.push_back(v);
    }
    return out;
}

klg::VerifyGrid load_grid(const std::string& where) {
    if (where == "builtin")
        throw klg::domain_error("internal: builtin grid resolved before load_grid");
    std::ifstream in(where);
    if (!in) throw klg::domain_error("cannot open grid file '" + where + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw klg::domain_error("malformed grid file '" + where + "': " + e.what());
    }
    auto as_cplx = [](const nlohmann::json& v) -> cplx {
        if (v.is_number()) return {v.get<double>(), 0.0};
        if (v.is_array() && v.size() == 2) return {v[0].get<double>(), v[1].get<double>()};
        throw klg::domain_error("grid file: complex values must be RE or [RE, IM]");
    };
    klg::VerifyGrid g;
    for (const char* key : {"classic", "extended", "mixed"}) {
        auto& dst = key == std::string("classic") ? g.classic
                    : key == std::string("extended") ? g.extended
                                                     : g.mixed;
        for (const auto& e : j.value(key, nlohmann::json::array()))
            dst.push_back({as_cplx(e.at("z")), e.value("s", 0.0), e.value("n", 0)});
    }
    for (const auto& e : j.value("mellin", nlohmann::json::array()))
        g.mellin.push_back({as_cplx(e.at("z")), e.value("k", 0), e.value("s", 0.0)});
    for (const auto& e : j.value("ramanujan", nlohmann::json::array()))
        g.ramanujan.push_back({e.at("a").get<double>(), e.value("xi", 0.0), 0});
    for (const auto& e : j.value("fourier", nlohmann::json::array()))
        g.fourier.push_back({e.at("a").get<double>(), e.value("xi", 0.0), e.value("n", 0)});
    return g;
}

struct Output {
    std::string path;  // empty = stdout

    void write(const std::string& text) const {
        if (path.empty()) {
            std::cout << text;
            return;
        }
        std::ofstream out(path);
        if (!out) throw klg::domain_error("cannot open output file '" + path + "'");
        out << text;
    }
};

void check_format(const std::string& format, std::initializer_list<const char*> allowed) {
    for (const char* a : allowed)
        if (format == a) return;
    throw klg::domain_error("format '" + format + "' not supported for this command");
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

int run_gamma(const std::string& z_arg, double s, const std::string& format,
              const Output& out) {
    check_format(format, {"json", "human"});
    const cplx z = parse_complex(z_arg);
    const cplx v = klg::gamma_pair(z, s);
    if (format == "human") {
        std::ostringstream os;
        os << "Gamma(z+is) Gamma(z-is) at z = " << fmt(z.real()) << " + " << fmt(z.imag())
           << "i, s = " << fmt(s) << ":\n  " << fmt(v.real()) << " + " << fmt(v.imag()) << "i\n";
        out.write(os.str());
        return 0;
    }
    JsonObject o;
    o.field("command", std::string("gamma"))
        .raw("z", "[" + fmt(z.real()) + ", " + fmt(z.imag()) + "]")
        .field("s", s)
        .raw("value", "[" + fmt(v.real()) + ", " + fmt(v.imag()) + "]");
    out.write(o.str() + "\n");
    return 0;
}

int run_bessel(const std::string& kind, const std::string& order_arg, double x,
               const std::string& format, const Output& out) {
    check_format(format, {"json", "human"});
    if (kind != "i" && kind != "k")
        throw klg::domain_error("bessel kind must be 'i' or 'k'");
    const cplx order = parse_complex(order_arg);
    bool warn = false;
    const cplx v = kind == "i" ? klg::bessel_i(order, x) : klg::bessel_k(order, x, &warn);
    if (format == "human") {
        std::ostringstream os;
        os << (kind == "i" ? "I" : "K") << "_(" << fmt(order.real()) << " + "
           << fmt(order.imag()) << "i)(" << fmt(x) << ") = " << fmt(v.real()) << " + "
           << fmt(v.imag()) << "i" << (warn ? "  (accuracy degraded)" : "") << "\n";
        out.write(os.str());
        return 0;
    }
    JsonObject o;
    o.field("command", std::string("bessel"))
        .field("kind", kind)
        .raw("order", "[" + fmt(order.real()) + ", " + fmt(order.imag()) + "]")
        .field("x", x)
        .raw("value", "[" + fmt(v.real()) + ", " + fmt(v.imag()) + "]")
        .field("accuracy_warning", warn);
    out.write(o.str() + "\n");
    return 0;
}

int run_psi(const std::string& z_arg, int n, double x, const std::string& format,
            const Output& out) {
    check_format(format, {"json", "human"});
    klg::KernelParams params;
    params.z = parse_complex(z_arg);
    params.n = n;
    const klg::KernelValue v = klg::psi(x, params);
    if (format == "human") {
        std::ostringstream os;
        os << "Psi_" << n << "(z = " << fmt(params.z.real()) << " + " << fmt(params.z.imag())
           << "i, x = " << fmt(x) << ") = " << fmt(v.psi.real()) << " + " << fmt(v.psi.imag())
           << "i  [" << to_string(v.regime) << ", est_error " << fmt(v.est_error) << "]\n";
        out.write(os.str());
        return 0;
    }
    JsonObject o;
    o.field("command", std::string("psi"))
        .raw("z", "[" + fmt(params.z.real()) + ", " + fmt(params.z.imag()) + "]")
        .field("n", n)
        .field("x", x)
        .raw("value", "[" + fmt(v.psi.real()) + ", " + fmt(v.psi.imag()) + "]")
        .field("regime", std::string(to_string(v.regime)))
        .field("est_error", v.est_error);
    out.write(o.str() + "\n");
    return 0;
}

int run_verify(const std::string& suite, const std::string& grid_arg, double tol,
               const std::string& format, const Output& out) {
    check_format(format, {"json", "human"});
    const klg::VerifyGrid grid =
        grid_arg == "builtin" ? klg::VerifyGrid::builtin(suite) : load_grid(grid_arg);
    const auto reports = klg::verify_all(grid);

    bool ok = true;
    for (const auto& r : reports)
        if (!r.converged || !(r.rel_residual <= tol)) ok = false;

    std::ostringstream os;
    if (format == "human") {
        for (const auto& r : reports) report_human(os, r);
        os << (ok ? "PASS" : "FAIL") << " (" << reports.size() << " checks, tol " << fmt(tol)
           << ")\n";
    } else {
        os << "[";
        for (std::size_t i = 0; i < reports.size(); ++i) {
            if (i) os << ",";
            os << "\n  " << report_json(reports[i]);
        }
        os << "\n]\n";
    }
    out.write(os.str());
    return ok ? 0 : 1;
}

int run_fourier(double a, const std::string& xi_grid, int n, double trunc,
                const std::string& format, const Output& out) {
    check_format(format, {"csv", "human"});
    if (a == 0.0 || (a < 0.0 && klg::dist_to_integer(a) < 1e-9))
        throw klg::domain_error(
            "fourier: a at a nonpositive integer is a pole of the gamma pair");
    const std::vector<double> xis = parse_range(xi_grid);
    const klg::QuadratureSpec spec;

    std::ostringstream os;
    os << "a,xi,n,direct,repr,rel_residual,closed,closed_residual\n";
    for (double xi : xis) {
        const auto direct = klg::fourier_gamma_direct(a, xi, spec, trunc);
        std::string repr_s, resid_s, closed_s, closed_resid_s;
        if (a < 0.0) {
            const auto repr = klg::fourier_gamma_repr(a, xi, n, spec);
            repr_s = fmt_csv(repr.value);
            resid_s = fmt_csv(std::abs(direct.value - repr.value) /
                              std::max(std::abs(direct.value), 1e-300));
        }
        if (a == -0.5 || a > 0.0) {
            const double closed =
                a > 0.0 ? klg::ramanujan_closed(a, xi) : klg::fourier_half_closed(xi);
            closed_s = fmt_csv(closed);
            closed_resid_s = fmt_csv(std::abs(direct.value - closed) /
                                     std::max(std::abs(closed), 1e-300));
        }
        os << fmt_csv(a) << "," << fmt_csv(xi) << "," << n << "," << fmt_csv(direct.value)
           << "," << repr_s << "," << resid_s << "," << closed_s << "," << closed_resid_s
           << "\n";
    }
    out.write(os.str());
    return 0;
}

int run_fp(double p, double t, double y, int n, const std::string& method,
           const std::string& format, const Output& out) {
    check_format(format, {"json", "human"});
    klg::FPQuery q;
    q.p = p;
    q.t = t;
    q.y = y;
    q.n = n >= 0 ? n : (p < 0.0 ? static_cast<int>(std::floor(-0.5 * p)) : 0);
    if (method == "single")
        q.method = klg::FPMethod::spectral_single;
    else if (method == "double")
        q.method = klg::FPMethod::spectral_double;
    else if (method == "fd")
        q.method = klg::FPMethod::finite_difference;
    else
        throw klg::domain_error("fp method must be one of single, double, fd");

    const klg::FPResult r = klg::fokker_planck(q);
    if (format == "human") {
        std::ostringstream os;
        os << "U_p(t, y) at p = " << fmt(p) << ", t = " << fmt(t) << ", y = " << fmt(y) << " ["
           << to_string(q.method) << "]:\n  value = " << fmt(r.value)
           << "  (est_error " << fmt(r.est_error) << ")\n";
        for (std::size_t k = 0; k < r.correction_terms.size(); ++k)
            os << "  correction " << k << " = " << fmt(r.correction_terms[k]) << "\n";
        out.write(os.str());
        return 0;
    }
    std::string corr = "[";
    for (std::size_t k = 0; k < r.correction_terms.size(); ++k) {
        if (k) corr += ", ";
        corr += fmt(r.correction_terms[k]);
    }
    corr += "]";
    JsonObject o;
    o.field("command", std::string("fp"))
        .field("p", p)
        .field("t", t)
        .field("y", y)
        .field("n", q.n)
        .field("method", std::string(to_string(q.method)))
        .field("value", r.value)
        .raw("correction_terms", corr)
        .field("u_truncation", r.u_truncation)
        .field("est_error", r.est_error);
    out.write(o.str() + "\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Renormalized Kontorovich-Lebedev representations of the gamma pair "
        "Gamma(z+is)Gamma(z-is): point evaluation, certified identity sweeps, "
        "Fourier tables, and the associated Fokker-Planck heat flow."};
    app.require_subcommand(1);

    std::string format, output_path;

    auto* c_gamma = app.add_subcommand("gamma", "Evaluate the gamma pair");
    std::string g_z = "1";
    double g_s = 0.0;
    c_gamma->add_option("--z", g_z, "z as RE or RE,IM")->required();
    c_gamma->add_option("--s", g_s, "shift s")->required();

    auto* c_bessel = app.add_subcommand("bessel", "Evaluate a modified Bessel function");
    std::string b_kind = "k", b_order = "0";
    double b_x = 1.0;
    c_bessel->add_option("--kind", b_kind, "i or k")->required();
    c_bessel->add_option("--order", b_order, "order as RE or RE,IM")->required();
    c_bessel->add_option("--x", b_x, "argument x > 0")->required();

    auto* c_psi = app.add_subcommand("psi", "Evaluate the renormalized kernel Psi_n");
    std::string p_z = "-0.5";
    int p_n = 0;
    double p_x = 1.0;
    c_psi->add_option("--z", p_z, "z as RE or RE,IM (strip -n-1 < Re z < -n)")->required();
    c_psi->add_option("--n", p_n, "subtraction depth n >= 0")->required();
    c_psi->add_option("--x", p_x, "argument x > 0")->required();

    auto* c_verify = app.add_subcommand("verify", "Run an identity-verification sweep");
    std::string v_suite = "all", v_grid = "builtin";
    double v_tol = 1e-6;
    c_verify->add_option("--suite", v_suite, "kl, mellin, fourier, or all");
    c_verify->add_option("--grid", v_grid, "'builtin' or a JSON grid file");
    c_verify->add_option("--tol", v_tol, "relative-residual gate (default 1e-6)");

    auto* c_fourier = app.add_subcommand("fourier", "Tabulate the gamma-pair Fourier transform");
    double f_a = -0.5, f_trunc = 40.0;
    std::string f_grid = "0:4:0.5";
    int f_n = 0;
    c_fourier->add_option("--a", f_a, "gamma-pair parameter a")->required();
    c_fourier->add_option("--xi-grid", f_grid, "frequency grid LO:HI:STEP");
    c_fourier->add_option("--n", f_n, "strip index for the a < 0 representation");
    c_fourier->add_option("--truncation", f_trunc, "integration radius S (default 40)");

    auto* c_fp = app.add_subcommand("fp", "Solve the Fokker-Planck initial-value problem");
    double fp_p = 1.0, fp_t = 0.1, fp_y = 1.0;
    int fp_n = -1;
    std::string fp_method = "single";
    c_fp->add_option("--p", fp_p, "initial-condition exponent")->required();
    c_fp->add_option("--t", fp_t, "time t > 0")->required();
    c_fp->add_option("--y", fp_y, "state y > 0")->required();
    c_fp->add_option("--n", fp_n, "correction count (default: derived from p)");
    c_fp->add_option("--method", fp_method, "single, double, or fd");

    for (auto* sub : {c_gamma, c_bessel, c_psi, c_verify, c_fourier, c_fp}) {
        sub->add_option("--format", format, "json, csv, or human (default per command)");
        sub->add_option("--output", output_path, "write to file instead of stdout");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    Output out{output_path};
    try {
        if (*c_gamma)
            return run_gamma(g_z, g_s, format.empty() ? "json" : format, out);
        if (*c_bessel)
            return run_bessel(b_kind, b_order, b_x, format.empty() ? "json" : format, out);
        if (*c_psi) return run_psi(p_z, p_n, p_x, format.empty() ? "json" : format, out);
        if (*c_verify)
            return run_verify(v_suite, v_grid, v_tol, format.empty() ? "json" : format, out);
        if (*c_fourier)
            return run_fourier(f_a, f_grid, f_n, f_trunc, format.empty() ? "csv" : format, out);
        if (*c_fp)
            return run_fp(fp_p, fp_t, fp_y, fp_n, fp_method, format.empty() ? "json" : format,
                          out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    std::cerr << "error: no subcommand selected\n";
    return 2;
}
