#include <cmath>
#include <numbers>
#include <string>

#include "curvedwave/errors.hpp"
#include "curvedwave/verify.hpp"

namespace curvedwave {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

double coordinate(const AxisRange& ax, bool periodic, int i) {
    const double span = ax.max - ax.min;
    const int divisions = periodic ? ax.count : ax.count - 1;
    return ax.min + span * static_cast<double>(i) / static_cast<double>(divisions);
}

}  // namespace

std::size_t GridSpec::size() const {
    std::size_t n = 1;
    for (const AxisRange& ax : axes) n *= static_cast<std::size_t>(std::max(ax.count, 0));
    return n;
}

std::vector<ChartPoint> GridSpec::points() const {
    const ChartInfo& info = chart_info(chart);
    std::vector<ChartPoint> out;
    out.reserve(size());
    for (int i = 0; i < axes[0].count; ++i) {
        const double x0 = coordinate(axes[0], info.axes[0].periodic, i);
        for (int j = 0; j < axes[1].count; ++j) {
            const double x1 = coordinate(axes[1], info.axes[1].periodic, j);
            for (int k = 0; k < axes[2].count; ++k) {
                out.push_back({chart, {x0, x1, coordinate(axes[2], info.axes[2].periodic, k)}});
            }
        }
    }
    return out;
}

GridSpec default_grid(ChartId chart, int count) {
    const double pi = std::numbers::pi;
    GridSpec g;
    g.chart = chart;
    g.margin = 0.05;
    switch (chart) {
        case ChartId::h3_cylindrical:
        case ChartId::h3_horospherical:
            g.axes = {{{0.1, 3.0, count}, {0.0, two_pi, count}, {-2.0, 2.0, count}}};
            break;
        case ChartId::s3_cylindrical:
            g.axes = {{{0.05, pi / 2.0 - 0.05, count}, {0.0, two_pi, count}, {-pi, pi, count}}};
            break;
        case ChartId::s3_complex_horospherical:
            g.axes = {{{0.05, 3.0, count}, {0.0, two_pi, count}, {0.0, two_pi, count}}};
            break;
    }
    return g;
}

void validate(const GridSpec& grid, double step) {
    const ChartInfo& info = chart_info(grid.chart);
    for (std::size_t i = 0; i < 3; ++i) {
        const AxisRange& ax = grid.axes[i];
        const std::string name(info.axes[i].name);
        if (ax.count < 2) throw DomainError("grid axis " + name + ": count must be >= 2");
        if (!(ax.min + grid.margin < ax.max - grid.margin)) {
            throw DomainError("grid axis " + name + ": range is empty after the margin");
        }
    }
    if (!(grid.margin >= 10.0 * step)) {
        throw DomainError("grid margin " + std::to_string(grid.margin) +
                          " is below 10 * step = " + std::to_string(10.0 * step));
    }
    for (const ChartPoint& p : grid.points()) {
        validate(p);
        if (distance_to_singular_locus(p) < grid.margin - 1e-12) {
            throw DomainError("grid touches the singular locus " +
                              std::string(info.singular_loci) + " of " +
                              std::string(to_string(grid.chart)));
        }
    }
}

}  // namespace curvedwave
