#include "curvedwave/report_io.hpp"

#include <charconv>
#include <cmath>

#include <nlohmann/json.hpp>

namespace curvedwave {

namespace {

using nlohmann::json;

json number(double x) {
    if (std::isfinite(x)) return x;
    return format_number(x);  // JSON has no inf / nan
}

json to_json(const ParamValue& v) {
    return std::visit(
        [](const auto& x) -> json {
            if constexpr (std::is_same_v<std::decay_t<decltype(x)>, double>) {
                return number(x);
            } else {
                return x;
            }
        },
        v);
}

json grid_json(const GridSpec& g) {
    json axes = json::array();
    for (const AxisRange& a : g.axes) axes.push_back({number(a.min), number(a.max), a.count});
    return {{"chart", std::string(to_string(g.chart))}, {"axes", axes}, {"margin", g.margin}};
}

json report_json(const ResidualReport& r) {
    json j{{"name", r.name},
           {"pass", r.pass},
           {"relative_residual", number(r.relative_residual)},
           {"max_abs_residual", number(r.max_abs_residual)},
           {"tolerance", number(r.tolerance)}};
    json params = json::object();
    for (const auto& [k, v] : r.params) params[k] = to_json(v);
    j["params"] = params;
    if (r.grid) j["grid"] = grid_json(*r.grid);
    if (r.fitted_eigenvalue) {
        j["fitted_eigenvalue"] = {number(r.fitted_eigenvalue->real()),
                                  number(r.fitted_eigenvalue->imag())};
    }
    return j;
}

std::string csv_field(std::string s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

std::string report_to_json(const ResidualReport& report, int indent) {
    return report_json(report).dump(indent);
}

std::string reports_to_json(const std::vector<ResidualReport>& reports, int indent) {
    const SuiteSummary s = summarize(reports);
    json list = json::array();
    for (const ResidualReport& r : reports) list.push_back(report_json(r));
    json root{{"summary",
               {{"total", s.total}, {"passed", s.passed}, {"failed", s.failed},
                {"failures", s.failures}}},
              {"reports", list}};
    return root.dump(indent);
}

void write_reports_csv(std::ostream& out, const std::vector<ResidualReport>& reports) {
    out << "name,pass,relative_residual,max_abs_residual,tolerance,fitted_re,fitted_im,params\n";
    for (const ResidualReport& r : reports) {
        json params = json::object();
        for (const auto& [k, v] : r.params) params[k] = to_json(v);
        out << csv_field(r.name) << ',' << (r.pass ? "true" : "false") << ','
            << format_number(r.relative_residual) << ',' << format_number(r.max_abs_residual) << ','
            << format_number(r.tolerance) << ',';
        if (r.fitted_eigenvalue) {
            out << format_number(r.fitted_eigenvalue->real()) << ','
                << format_number(r.fitted_eigenvalue->imag());
        } else {
            out << ',';
        }
        out << ',' << csv_field(params.dump()) << '\n';
    }
}

std::string atlas_to_json(int indent) {
    json charts = json::array();
    for (ChartId c : all_charts) {
        const ChartInfo& info = chart_info(c);
        json axes = json::array();
        for (const AxisInfo& a : info.axes) {
            axes.push_back({{"name", std::string(a.name)},
                            {"min", number(a.min)},
                            {"max", number(a.max)},
                            {"periodic", a.periodic},
                            {"max_inclusive", a.max_inclusive}});
        }
        charts.push_back({{"id", std::string(to_string(c))},
                          {"space", std::string(to_string(info.space))},
                          {"axes", axes},
                          {"singular_loci", std::string(info.singular_loci)}});
    }
    return json{{"charts", charts}}.dump(indent);
}

static json level_json(const QuantizedLevel& q) {
    json j{{"family", std::string(to_string(q.family))},
           {"n", q.n},
           {"N", q.big_n},
           {"twice_epsilon", q.twice_epsilon},
           {"epsilon", q.epsilon},
           {"alpha_plus", q.alpha_plus},
           {"alpha_minus", q.alpha_minus}};
    if (q.family == Family::s3_sov) {
        j["m"] = q.m;
        j["alpha_abs"] = q.alpha_abs;
    }
    return j;
}

std::string levels_to_json(const std::vector<QuantizedLevel>& levels, int indent) {
    json list = json::array();
    for (const QuantizedLevel& q : levels) list.push_back(level_json(q));
    return json{{"levels", list}}.dump(indent);
}

std::string catalog_to_json(const std::vector<CatalogEntry>& entries, int indent) {
    json list = json::array();
    for (const CatalogEntry& e : entries) {
        json quantum = level_json(e.level);
        quantum.erase("family");
        json j{{"family", std::string(to_string(e.family))},
               {"orientation", e.orientation},
               {"alpha", {number(e.alpha.real()), number(e.alpha.imag())}},
               {"epsilon", number(e.epsilon)},
               {"quantum_numbers", quantum},
               {"verdict", std::string(to_string(e.classification.verdict))},
               {"reason", std::string(to_string(e.classification.reason))}};
        if (e.branch) j["branch"] = std::string(to_string(*e.branch));
        if (!e.classification.note.empty()) j["note"] = e.classification.note;
        list.push_back(j);
    }
    return json{{"solutions", list}}.dump(indent);
}

}  // namespace curvedwave
