#include <algorithm>
#include <set>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "curvedwave/errors.hpp"
#include "curvedwave/report_io.hpp"
#include "curvedwave/suite.hpp"

using namespace curvedwave;

namespace {

bool starts_with(const std::string& s, const std::string& prefix) { return s.rfind(prefix, 0) == 0; }

SuiteConfig small_config() {
    SuiteConfig c;
    c.grid_count = 6;
    return c;
}

const std::vector<ResidualReport>& small_run() {
    static const std::vector<ResidualReport> reports = run_suite(small_config());
    return reports;
}

std::string config_error_field(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.field();
    }
    return "<none>";
}

}  // namespace

TEST(Registry, CoversEveryPlaneWaveKey) {
    std::set<std::string> names;
    for (const CheckEntry& e : check_registry()) {
        EXPECT_TRUE(names.insert(e.name).second) << "duplicate " << e.name;
    }
    for (const PlaneWaveKey& k : plane_wave_registry()) {
        const std::string stem = std::string(to_string(k.family)) + "/o" + (k.orientation > 0 ? "+" : "-") +
                                 "/b" + std::string(to_string(k.branch)) + "/";
        for (const std::string kind : {"schrodinger/", "p3/"}) {
            // the S3 cylindrical chart has no P3
            if (kind == "p3/" && k.family == Family::s3_cyl_plane) continue;
            const bool found = std::any_of(names.begin(), names.end(),
                                           [&](const std::string& n) { return starts_with(n, kind + stem); });
            EXPECT_TRUE(found) << kind << stem;
        }
    }
    for (const std::string prefix : {"metric/pullback/", "geometry/complex_constraint", "sov/reduction/",
                                      "representation/", "hamiltonian_forms/", "quantization/", "classification/",
                                      "flat_limit/", "specfun/", "sov/radial_ode", "lie/", "generator/",
                                      "convergence/richardson/"}) {
        EXPECT_TRUE(std::any_of(names.begin(), names.end(), [&](const std::string& n) { return starts_with(n, prefix); }))
            << prefix;
    }
}

TEST(Suite, DefaultsPassOnSmallGrid) {
    const auto& reports = small_run();
    ASSERT_EQ(reports.size(), check_registry().size());
    for (std::size_t i = 0; i < reports.size(); ++i) {
        EXPECT_EQ(reports[i].name, check_registry()[i].name);
        EXPECT_TRUE(reports[i].pass) << reports[i].name << " " << reports[i].relative_residual << " / "
                                     << reports[i].tolerance;
    }
    const SuiteSummary s = summarize(reports);
    EXPECT_EQ(s.total, reports.size());
    EXPECT_EQ(s.failed, 0u);
}

TEST(Suite, ChartFilter) {
    SuiteConfig c = small_config();
    c.charts = {ChartId::h3_horospherical};
    const auto selected = selected_checks(c);
    ASSERT_FALSE(selected.empty());
    for (const CheckEntry* e : selected) {
        ASSERT_TRUE(e->chart.has_value()) << e->name;
        EXPECT_EQ(*e->chart, ChartId::h3_horospherical);
    }
    c.charts.clear();
    c.families = {Family::s3_sov};
    for (const CheckEntry* e : selected_checks(c)) EXPECT_EQ(e->family, Family::s3_sov);
}

TEST(Suite, TinyToleranceFails) {
    SuiteConfig c = small_config();
    c.families = {Family::h3_cyl_plane};
    c.tol.residual = 1e-15;
    c.tol.eigen = 1e-15;
    std::size_t failed = 0;
    for (const ResidualReport& r : run_suite(c)) {
        if (starts_with(r.name, "schrodinger/")) {
            EXPECT_FALSE(r.pass) << r.name;
            ++failed;
        }
    }
    EXPECT_GT(failed, 0u);
}

TEST(Suite, Deterministic) {
    SuiteConfig c = small_config();
    c.families = {Family::s3_complex_plane, Family::s3_sov};
    c.threads = 3;
    const std::string a = reports_to_json(run_suite(c));
    c.threads = 1;
    const std::string b = reports_to_json(run_suite(c));
    EXPECT_EQ(a, b);
}

TEST(Suite, FaultInjectionFailsEveryCheck) {
    SuiteConfig c = small_config();
    c.perturbation = 0.01;
    const auto reports = run_suite(c);
    ASSERT_EQ(reports.size(), check_registry().size());
    for (const ResidualReport& r : reports) EXPECT_FALSE(r.pass) << r.name;
}

TEST(Suite, HalvingStepsDoesNotIncreaseResiduals) {
    // Residuals already ten times below tolerance are at the rounding floor.
    SuiteConfig fine = small_config();
    fine.hamiltonian_step /= 2.0;
    fine.first_order_step /= 2.0;
    fine.commutator_step /= 2.0;
    const auto halved = run_suite(fine);
    const auto& base = small_run();
    ASSERT_EQ(base.size(), halved.size());
    std::size_t compared = 0;
    for (std::size_t i = 0; i < base.size(); ++i) {
        const std::string& n = base[i].name;
        if (!(starts_with(n, "schrodinger/") || starts_with(n, "p3/") || starts_with(n, "generator/") ||
              starts_with(n, "sov/hamiltonian/") || starts_with(n, "hamiltonian_forms/"))) {
            continue;
        }
        ++compared;
        if (halved[i].relative_residual <= halved[i].tolerance / 10.0) continue;
        EXPECT_LE(halved[i].relative_residual, base[i].relative_residual) << n;
    }
    EXPECT_GT(compared, 100u);
}

TEST(Config, ParsesEveryKey) {
    const SuiteConfig c = parse_config(R"({
        "charts": ["h3_cylindrical", "s3_complex_horospherical"],
        "families": ["h3_cyl_plane"],
        "tolerances": {"residual": 1e-5, "flat_limit": 0.2},
        "grid": {"count": 7, "charts": {"h3_cylindrical": {"axes": [[0.2, 1, 3], [0, 6, 4], [-1, 1, 5]], "margin": 0.1}}},
        "seed": 9,
        "steps": {"hamiltonian": 0.004, "first_order": 0.002, "commutator": 0.02},
        "perturbation": 0,
        "threads": 2,
        "output": {"json": "a.json", "csv": "a.csv"}
    })");
    EXPECT_EQ(c.charts.size(), 2u);
    EXPECT_EQ(c.tol.residual, 1e-5);
    EXPECT_EQ(c.tol.flat_limit, 0.2);
    EXPECT_EQ(c.tol.eigen, Tolerances{}.eigen);
    EXPECT_EQ(c.grid_count, 7);
    EXPECT_EQ(c.grid(ChartId::h3_cylindrical).axes[2].count, 5);
    EXPECT_EQ(c.grid(ChartId::h3_cylindrical).margin, 0.1);
    EXPECT_EQ(c.grid(ChartId::s3_cylindrical).axes[0].count, 7);
    EXPECT_EQ(c.seed, 9u);
    EXPECT_EQ(c.hamiltonian_step, 0.004);
    EXPECT_EQ(c.threads, 2u);
    EXPECT_EQ(c.json_output, "a.json");
}

TEST(Config, ErrorsCarryTheField) {
    EXPECT_EQ(config_error_field("{"), "/");
    EXPECT_EQ(config_error_field("[]"), "/");
    EXPECT_EQ(config_error_field(R"({"bogus": 1})"), "/bogus");
    EXPECT_EQ(config_error_field(R"({"charts": ["h4"]})"), "/charts/0");
    EXPECT_EQ(config_error_field(R"({"families": ["x"]})"), "/families/0");
    EXPECT_EQ(config_error_field(R"({"tolerances": {"residual": "small"}})"), "/tolerances/residual");
    EXPECT_EQ(config_error_field(R"({"tolerances": {"eigen": -1}})"), "/tolerances/eigen");
    EXPECT_EQ(config_error_field(R"({"grid": {"count": 1}})"), "/grid/count");
    EXPECT_EQ(config_error_field(R"({"grid": {"charts": {"h3_cylindrical": {"axes": [[0, 1, 3]]}}}})"),
              "/grid/charts/h3_cylindrical/axes");
    EXPECT_EQ(config_error_field(R"({"grid": {"charts": {"h3_cyl": {}}}})"), "/grid/charts/h3_cyl");
    EXPECT_EQ(config_error_field(R"({"seed": -3})"), "/seed");
    EXPECT_EQ(config_error_field(R"({"steps": {"hamiltonian": 0}})"), "/steps/hamiltonian");
    EXPECT_EQ(config_error_field(R"({"perturbation": 2})"), "/perturbation");
    EXPECT_EQ(config_error_field(R"({"threads": 1.5})"), "/threads");
    EXPECT_EQ(config_error_field(R"({"output": {"xml": "a"}})"), "/output/xml");
    EXPECT_THROW(load_config("/nonexistent/config.json"), ConfigError);
}

TEST(ReportIo, JsonShape) {
    const auto& reports = small_run();
    const nlohmann::json j = nlohmann::json::parse(reports_to_json(reports));
    EXPECT_EQ(j["summary"]["total"], reports.size());
    EXPECT_EQ(j["summary"]["failed"], 0);
    ASSERT_EQ(j["reports"].size(), reports.size());
    const auto& first = j["reports"][0];
    for (const char* key : {"name", "pass", "relative_residual", "max_abs_residual", "tolerance", "params"}) {
        EXPECT_TRUE(first.contains(key)) << key;
    }
    const nlohmann::json one = nlohmann::json::parse(report_to_json(reports.front()));
    EXPECT_EQ(one["name"], reports.front().name);
    EXPECT_TRUE(nlohmann::json::parse(atlas_to_json()).is_array() ||
                nlohmann::json::parse(atlas_to_json()).is_object());
}

TEST(ReportIo, Csv) {
    std::ostringstream out;
    write_reports_csv(out, small_run());
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "name,pass,relative_residual,max_abs_residual,tolerance,fitted_re,fitted_im,params");
    std::size_t rows = 0;
    while (std::getline(in, line)) ++rows;
    EXPECT_EQ(rows, small_run().size());
}

TEST(ReportIo, FormatNumber) {
    EXPECT_EQ(format_number(0.1), "0.1");
    EXPECT_EQ(format_number(1e-15), "1e-15");
    EXPECT_EQ(format_number(std::nan("")), "nan");
    EXPECT_EQ(format_number(-1.0 / 0.0), "-inf");
}

TEST(ReportIo, CatalogJson) {
    const nlohmann::json j = nlohmann::json::parse(catalog_to_json(solution_catalog(Family::s3_complex_plane, 2)));
    ASSERT_EQ(j["solutions"].size(), 8u);
    const auto& first = j["solutions"][0];
    for (const char* key : {"family", "orientation", "branch", "alpha", "epsilon", "quantum_numbers", "verdict", "reason"}) {
        EXPECT_TRUE(first.contains(key)) << key;
    }
    EXPECT_EQ(first["quantum_numbers"]["n"], 1);
}
