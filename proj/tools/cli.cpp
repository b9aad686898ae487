#include "cli.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "curvedwave/errors.hpp"
#include "curvedwave/report_io.hpp"
#include "curvedwave/suite.hpp"

namespace curvedwave::cli {

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string sci(double x) {
    if (!std::isfinite(x)) return format_number(x);
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::scientific, 3);
    return std::string(buf, r.ptr);
}

int sign_of(const std::string& s) { return s == "-" || s == "minus" ? -1 : 1; }
Branch branch_of(const std::string& s) { return sign_of(s) < 0 ? Branch::minus : Branch::plus; }

ChartId chart_arg(const std::string& name) {
    const auto c = parse_chart(name);
    if (!c) throw UsageError("unknown chart '" + name + "'");
    return *c;
}

/// Full family names, or the short forms plane / cyl-plane / complex-plane /
/// horo-plane / sov resolved against a chart or space.
Family family_arg(const std::string& name, std::optional<ChartId> chart, std::optional<Space> space) {
    if (const auto f = parse_family(name)) return *f;
    if (chart) space = space_of(*chart);
    const bool h3 = space == Space::hyperbolic;
    if (name == "plane" && chart) {
        switch (*chart) {
            case ChartId::h3_cylindrical: return Family::h3_cyl_plane;
            case ChartId::s3_cylindrical: return Family::s3_cyl_plane;
            case ChartId::h3_horospherical: return Family::h3_horo_plane;
            case ChartId::s3_complex_horospherical: return Family::s3_complex_plane;
        }
    }
    if (space) {
        if (name == "cyl-plane") return h3 ? Family::h3_cyl_plane : Family::s3_cyl_plane;
        if (name == "horo-plane" && h3) return Family::h3_horo_plane;
        if (name == "complex-plane" && !h3) return Family::s3_complex_plane;
        if (name == "sov" && (!chart || *chart == ChartId::h3_cylindrical ||
                              *chart == ChartId::s3_cylindrical)) {
            return h3 ? Family::h3_sov : Family::s3_sov;
        }
    }
    throw UsageError("unknown or ambiguous family '" + name + "'");
}

Space space_arg(const std::string& s) {
    if (s == "h3" || s == "hyperbolic") return Space::hyperbolic;
    if (s == "s3" || s == "spherical") return Space::spherical;
    throw UsageError("unknown space '" + s + "'");
}

struct WaveOptions {
    std::string family;
    double epsilon{1.0};
    std::string branch{"+"};
    std::string orientation{"+"};
    int m{0};
    double alpha{0.0};
    double alpha_im{0.0};
};

void add_wave_options(CLI::App* app, WaveOptions& w) {
    const auto signs = CLI::IsMember({"+", "-", "plus", "minus"});
    app->add_option("--family", w.family, "Family name or short form (plane, cyl-plane, sov, ...)")
        ->required();
    app->add_option("--epsilon", w.epsilon, "Energy eigenvalue")->required();
    app->add_option("--branch", w.branch, "Root of the dispersion relation")->check(signs);
    app->add_option("--orientation", w.orientation, "Plane-wave direction n = (0, 0, +-1)")
        ->check(signs);
    app->add_option("--m", w.m, "Azimuthal number (separated solutions)");
    app->add_option("--alpha", w.alpha, "z-wavenumber (separated solutions)");
    app->add_option("--alpha-im", w.alpha_im, "Imaginary part of alpha (H3 separated solutions)");
}

struct BuiltWave {
    WaveFunction wave;
    std::optional<SpectralSolution> sov;
};

BuiltWave build_wave(Family f, const WaveOptions& o) {
    if (is_plane(f)) {
        return {make_plane_wave(f, sign_of(o.orientation), o.epsilon, branch_of(o.branch)), {}};
    }
    const SpectralSolution s =
        make_sov_solution(space_of(f), o.m, complex(o.alpha, o.alpha_im), o.epsilon, 1, 1);
    if (s.ode_verified_only) {
        throw DomainError("the hypergeometric series does not terminate and diverges on this chart");
    }
    return {sov_wave(s), s};
}

AxisRange parse_axis(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw UsageError("grid axis '" + text + "' is not min:max:count");
    try {
        AxisRange a{std::stod(parts[0]), std::stod(parts[1]), std::stoi(parts[2])};
        if (a.count < 1 || a.count > 100000) throw UsageError("grid count out of range in '" + text + "'");
        return a;
    } catch (const std::logic_error&) {
        throw UsageError("grid axis '" + text + "' is not min:max:count");
    }
}

void emit_reports(std::ostream& out, const std::vector<ResidualReport>& reports,
                  const std::string& format) {
    if (format == "json") {
        out << reports_to_json(reports) << '\n';
    } else if (format == "csv") {
        write_reports_csv(out, reports);
    } else {
        for (const ResidualReport& r : reports) {
            out << (r.pass ? "PASS  " : "FAIL  ") << r.name << "  rel=" << sci(r.relative_residual)
                << "  tol=" << sci(r.tolerance);
            if (r.fitted_eigenvalue) {
                out << "  fitted=" << sci(r.fitted_eigenvalue->real()) << (r.fitted_eigenvalue->imag() < 0 ? "" : "+")
                    << sci(r.fitted_eigenvalue->imag()) << "i";
            }
            if (const auto it = r.params.find("error"); it != r.params.end()) {
                out << "  error: " << std::get<std::string>(it->second);
            }
            out << '\n';
        }
        const SuiteSummary s = summarize(reports);
        out << s.passed << "/" << s.total << " checks passed\n";
    }
}

bool all_pass(const std::vector<ResidualReport>& reports) {
    for (const ResidualReport& r : reports) {
        if (!r.pass) return false;
    }
    return true;
}

// ---- subcommands -------------------------------------------------------

int cmd_charts(std::ostream& out, const std::string& format) {
    if (format == "json") {
        out << atlas_to_json() << '\n';
        return exit_ok;
    }
    for (ChartId c : all_charts) {
        const ChartInfo& info = chart_info(c);
        out << to_string(c) << " (" << to_string(info.space) << ")\n";
        for (const AxisInfo& a : info.axes) {
            out << "  " << a.name << " in [" << format_number(a.min) << ", " << format_number(a.max)
                << (a.max_inclusive ? "]" : ")") << (a.periodic ? " periodic" : "") << '\n';
        }
        out << "  singular: " << info.singular_loci << '\n';
    }
    return exit_ok;
}

struct VerifyOptions {
    std::string chart;
    WaveOptions wave;
    int grid_count{20};
    double step{default_hamiltonian_step};
    std::string format{"table"};
};

int cmd_verify(std::ostream& out, const VerifyOptions& o) {
    const ChartId chart = chart_arg(o.chart);
    const Family f = family_arg(o.wave.family, chart, std::nullopt);
    if (chart_of(f) != chart) {
        throw UsageError("family " + std::string(to_string(f)) + " lives on chart " +
                         std::string(to_string(chart_of(f))));
    }
    const BuiltWave built = build_wave(f, o.wave);
    const GridSpec grid = default_grid(chart, o.grid_count);
    const Tolerances tol;
    std::vector<ResidualReport> reports;
    const std::string label = std::string(to_string(f));

    {
        ResidualReport r = schrodinger_residual(chart, built.wave, o.wave.epsilon, grid, o.step,
                                                tol.residual);
        r.name = "schrodinger/" + label;
        reports.push_back(r);
    }
    if (is_plane(f)) {
        ResidualReport d;
        d.name = "dispersion/" + label;
        d.tolerance = tol.exact;
        d.relative_residual = d.max_abs_residual = dispersion_residual(f, built.wave.alpha, o.wave.epsilon);
        d.params["alpha_re"] = built.wave.alpha.real();
        d.params["alpha_im"] = built.wave.alpha.imag();
        d.finalize();
        reports.push_back(d);
        if (chart != ChartId::s3_cylindrical) {
            OperatorSpec op;
            op.kind = OperatorKind::p3;
            op.chart = chart;
            const complex expected = -complex(0.0, 1.0) * static_cast<double>(built.wave.orientation) *
                                     built.wave.alpha;
            ResidualReport p = eigen_residual(chart, op, built.wave, expected, grid, op.step, tol.eigen);
            p.name = "p3/" + label;
            reports.push_back(p);
        }
    }
    if (space_of(f) == Space::spherical) {
        const Classification c = built.sov ? classify_physical(*built.sov) : classify_physical(built.wave);
        if (o.format == "table") {
            out << "classification: " << to_string(c.verdict) << " (" << to_string(c.reason) << ")"
                << (c.note.empty() ? "" : " " + c.note) << '\n';
        }
    }
    emit_reports(out, reports, o.format);
    return all_pass(reports) ? exit_ok : exit_check_failed;
}

struct SpectrumOptions {
    std::string space{"s3"};
    std::string family;
    int n_max{10};
    std::string format{"table"};
    bool catalog{false};
};

int cmd_spectrum(std::ostream& out, const SpectrumOptions& o) {
    const Space space = space_arg(o.space);
    if (space != Space::spherical) throw UsageError("only S3 has a discrete spectrum");
    const Family f = family_arg(o.family, std::nullopt, space);
    if (o.catalog) {
        out << catalog_to_json(solution_catalog(f, o.n_max)) << '\n';
        return exit_ok;
    }
    const std::vector<QuantizedLevel> levels = quantize_s3(f, o.n_max);
    if (o.format == "json") {
        out << levels_to_json(levels) << '\n';
        return exit_ok;
    }
    const bool sov = f == Family::s3_sov;
    const char sep = o.format == "csv" ? ',' : '\t';
    if (sov) {
        out << "m" << sep << "alpha_abs" << sep << "n" << sep << "N" << sep << "epsilon\n";
    } else {
        out << "n" << sep << "epsilon" << sep << "alpha_plus" << sep << "alpha_minus\n";
    }
    for (const QuantizedLevel& q : levels) {
        // epsilon = twice_epsilon / 2 exactly
        const std::string eps = std::to_string(q.twice_epsilon / 2) + (q.twice_epsilon % 2 ? ".5" : "");
        if (sov) {
            out << q.m << sep << q.alpha_abs << sep << q.n << sep << q.big_n << sep << eps << '\n';
        } else {
            out << q.n << sep << eps << sep << q.alpha_plus << sep << q.alpha_minus << '\n';
        }
    }
    return exit_ok;
}

struct WaveEvalOptions {
    std::string chart;
    WaveOptions wave;
    std::vector<std::string> grid;
    std::string output;
};

int cmd_wave_eval(std::ostream& out, const WaveEvalOptions& o) {
    const std::optional<ChartId> chart =
        o.chart.empty() ? std::nullopt : std::optional<ChartId>(chart_arg(o.chart));
    const Family f = family_arg(o.wave.family, chart, std::nullopt);
    if (chart && chart_of(f) != *chart) throw UsageError("family does not live on the given chart");
    const BuiltWave built = build_wave(f, o.wave);
    GridSpec grid = default_grid(chart_of(f), 20);
    if (!o.grid.empty()) {
        if (o.grid.size() != 3) throw UsageError("--grid takes three axes min:max:count");
        for (std::size_t i = 0; i < 3; ++i) grid.axes[i] = parse_axis(o.grid[i]);
    }
    std::ofstream file;
    if (!o.output.empty()) {
        file.open(o.output);
        if (!file) throw UsageError("cannot write '" + o.output + "'");
    }
    std::ostream& sink = o.output.empty() ? out : file;
    const ChartInfo& info = chart_info(chart_of(f));
    sink << info.axes[0].name << ',' << info.axes[1].name << ',' << info.axes[2].name
         << ",re_psi,im_psi,abs_psi\n";
    for (const ChartPoint& p : grid.points()) {
        const complex v = built.wave(p);
        sink << format_number(p.coords[0]) << ',' << format_number(p.coords[1]) << ','
             << format_number(p.coords[2]) << ',' << format_number(v.real()) << ','
             << format_number(v.imag()) << ',' << format_number(std::abs(v)) << '\n';
    }
    return exit_ok;
}

struct SuiteOptions {
    std::string config;
    std::string json;
    std::string csv;
    std::string format{"table"};
    int threads{-1};
};

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    if (!f) throw UsageError("cannot write '" + path + "'");
    f << text;
}

int cmd_suite(std::ostream& out, SuiteOptions o) {
    if (o.config.empty()) {
        if (const char* env = std::getenv("CURVEDWAVE_CONFIG")) o.config = env;
    }
    SuiteConfig cfg = o.config.empty() ? SuiteConfig{} : load_config(o.config);
    if (!o.json.empty()) cfg.json_output = o.json;
    if (!o.csv.empty()) cfg.csv_output = o.csv;
    if (o.threads >= 0) cfg.threads = static_cast<unsigned>(o.threads);
    const std::vector<ResidualReport> reports = run_suite(cfg);
    if (!cfg.json_output.empty()) write_file(cfg.json_output, reports_to_json(reports) + "\n");
    if (!cfg.csv_output.empty()) {
        std::ostringstream csv;
        write_reports_csv(csv, reports);
        write_file(cfg.csv_output, csv.str());
    }
    emit_reports(out, reports, o.format);
    return all_pass(reports) ? exit_ok : exit_check_failed;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Plane waves and separated solutions on H3 and S3", "curvedwave"};
    app.require_subcommand(1);
    const auto formats = CLI::IsMember({"table", "json", "csv"});

    std::string charts_format = "table";
    CLI::App* charts = app.add_subcommand("charts", "List the chart atlas");
    charts->add_option("--format", charts_format, "table or json")->check(CLI::IsMember({"table", "json"}));

    VerifyOptions verify;
    CLI::App* verify_cmd = app.add_subcommand("verify", "Residual checks for one solution");
    verify_cmd->add_option("--chart", verify.chart, "Chart name")->required();
    add_wave_options(verify_cmd, verify.wave);
    verify_cmd->add_option("--grid-count", verify.grid_count, "Points per axis")
        ->check(CLI::Range(2, 200));
    verify_cmd->add_option("--step", verify.step, "Finite-difference step")
        ->check(CLI::PositiveNumber);
    verify_cmd->add_option("--format", verify.format, "table, json or csv")->check(formats);

    SpectrumOptions spectrum;
    CLI::App* spectrum_cmd = app.add_subcommand("spectrum", "Quantized S3 levels");
    spectrum_cmd->add_option("--space", spectrum.space, "s3")->required();
    spectrum_cmd->add_option("--family", spectrum.family, "cyl-plane, complex-plane or sov")
        ->required();
    spectrum_cmd->add_option("--n-max", spectrum.n_max, "Largest n")->check(CLI::Range(0, 10000));
    spectrum_cmd->add_option("--format", spectrum.format, "table, json or csv")->check(formats);
    spectrum_cmd->add_flag("--catalog", spectrum.catalog, "Classified solutions as JSON");

    WaveEvalOptions wave_eval;
    CLI::App* wave_cmd = app.add_subcommand("wave-eval", "Evaluate a solution on a grid (CSV)");
    wave_cmd->add_option("--chart", wave_eval.chart, "Chart, needed for short family names");
    add_wave_options(wave_cmd, wave_eval.wave);
    wave_cmd->add_option("--grid", wave_eval.grid, "Three axes as min:max:count")->expected(3);
    wave_cmd->add_option("--output", wave_eval.output, "CSV file (default stdout)");

    SuiteOptions suite;
    CLI::App* suite_cmd = app.add_subcommand("suite", "Run the full verification suite");
    suite_cmd->add_option("--config", suite.config, "JSON config (default $CURVEDWAVE_CONFIG)");
    suite_cmd->add_option("--json", suite.json, "Write the JSON report here");
    suite_cmd->add_option("--csv", suite.csv, "Write the CSV report here");
    suite_cmd->add_option("--threads", suite.threads, "Worker threads (0 = all cores)")
        ->check(CLI::Range(0, 1024));
    suite_cmd->add_option("--format", suite.format, "table, json or csv")->check(formats);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (*charts) return cmd_charts(out, charts_format);
        if (*verify_cmd) return cmd_verify(out, verify);
        if (*spectrum_cmd) return cmd_spectrum(out, spectrum);
        if (*wave_cmd) return cmd_wave_eval(out, wave_eval);
        if (*suite_cmd) return cmd_suite(out, suite);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return exit_usage;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return exit_usage;
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << '\n';
        return exit_usage;
    }
    return exit_usage;
}

}  // namespace curvedwave::cli
