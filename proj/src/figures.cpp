#include "stanceplan/figures.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "stanceplan/errors.hpp"

namespace stanceplan {

namespace {

struct Bounds {
    double min_x = std::numeric_limits<double>::infinity();
    double min_y = std::numeric_limits<double>::infinity();
    double max_x = -std::numeric_limits<double>::infinity();
    double max_y = -std::numeric_limits<double>::infinity();

    void add(const Point2& p) {
        min_x = std::min(min_x, p.x);
        min_y = std::min(min_y, p.y);
        max_x = std::max(max_x, p.x);
        max_y = std::max(max_y, p.y);
    }
};

// Map world coordinates into a y-down SVG viewport.
struct Mapper {
    Bounds b;
    double scale = 1.0;
    double width = 0.0, height = 0.0;
    static constexpr double kMargin = 20.0;

    explicit Mapper(const Bounds& bounds) : b(bounds) {
        const double span_x = std::max(1e-6, b.max_x - b.min_x);
        const double span_y = std::max(1e-6, b.max_y - b.min_y);
        scale = 760.0 / std::max(span_x, span_y);
        width = span_x * scale + 2 * kMargin;
        height = span_y * scale + 2 * kMargin;
    }
    double x(double wx) const { return (wx - b.min_x) * scale + kMargin; }
    double y(double wy) const { return (b.max_y - wy) * scale + kMargin; }
    double len(double w) const { return w * scale; }
};

std::string ring_path(const Ring& ring, const Mapper& m) {
    std::ostringstream d;
    d.precision(3);
    d << std::fixed;
    for (std::size_t i = 0; i < ring.size(); ++i) {
        d << (i == 0 ? "M" : "L") << m.x(ring[i].x) << ' ' << m.y(ring[i].y) << ' ';
    }
    d << "Z";
    return d.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << content;
    if (!out) throw IoError("write failed: " + path);
}

std::string overlay_svg(const PipelineOutput& run) {
    Bounds b;
    b.add(run.plan.start);
    b.add(run.plan.end);
    for (const FeasibleRegion& r : run.regions) {
        for (const Point2& p : r.polygon.exterior) b.add(p);
    }
    for (const StanceCandidate& c : run.candidates) {
        b.add({c.circle.center.x - c.circle.radius, c.circle.center.y - c.circle.radius});
        b.add({c.circle.center.x + c.circle.radius, c.circle.center.y + c.circle.radius});
    }
    const Mapper m(b);

    std::ostringstream svg;
    svg.precision(3);
    svg << std::fixed;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << m.width << "\" height=\""
        << m.height << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    for (const FeasibleRegion& r : run.regions) {
        svg << "<path d=\"" << ring_path(r.polygon.exterior, m);
        for (const Ring& h : r.polygon.holes) svg << ' ' << ring_path(h, m);
        svg << "\" fill=\"#9ecae1\" fill-opacity=\"0.25\" fill-rule=\"evenodd\" "
               "stroke=\"#3182bd\" stroke-width=\"0.8\"/>\n";
    }
    // Unselected candidates in grey, selected stances in red.
    for (const StanceCandidate& c : run.candidates) {
        const bool selected =
            c.index < static_cast<int>(run.plan.z.size()) && run.plan.z[c.index] == 1;
        svg << "<circle cx=\"" << m.x(c.circle.center.x) << "\" cy=\"" << m.y(c.circle.center.y)
            << "\" r=\"" << m.len(c.circle.radius) << "\" fill=\"none\" stroke=\""
            << (selected ? "#de2d26" : "#969696") << "\" stroke-width=\""
            << (selected ? 2.0 : 0.8) << "\"/>\n";
    }
    // Planned path: start -> stances -> end.
    svg << "<path d=\"M" << m.x(run.plan.start.x) << ' ' << m.y(run.plan.start.y) << ' ';
    for (const StanceCandidate& s : run.plan.ordered_stances) {
        svg << 'L' << m.x(s.circle.center.x) << ' ' << m.y(s.circle.center.y) << ' ';
    }
    svg << 'L' << m.x(run.plan.end.x) << ' ' << m.y(run.plan.end.y)
        << "\" fill=\"none\" stroke=\"#de2d26\" stroke-width=\"1.5\" "
           "stroke-dasharray=\"6 3\"/>\n";
    // Executed trace.
    if (!run.trace.samples.empty()) {
        svg << "<path d=\"";
        for (std::size_t i = 0; i < run.trace.samples.size(); ++i) {
            const Point2& p = run.trace.samples[i].second.position;
            svg << (i == 0 ? 'M' : 'L') << m.x(p.x) << ' ' << m.y(p.y) << ' ';
        }
        svg << "\" fill=\"none\" stroke=\"#31a354\" stroke-width=\"1.0\"/>\n";
    }
    svg << "<circle cx=\"" << m.x(run.plan.start.x) << "\" cy=\"" << m.y(run.plan.start.y)
        << "\" r=\"4\" fill=\"#31a354\"/>\n";
    svg << "<circle cx=\"" << m.x(run.plan.end.x) << "\" cy=\"" << m.y(run.plan.end.y)
        << "\" r=\"4\" fill=\"#756bb1\"/>\n";
    svg << "</svg>\n";
    return svg.str();
}

std::string errors_svg(const SimTrace& trace) {
    std::vector<double> errors;
    for (const StanceArrival& a : trace.stance_arrivals) errors.push_back(a.terminal_error);
    std::vector<double> sorted = errors;
    std::sort(sorted.begin(), sorted.end());
    const double max_err = std::max(sorted.back(), 1e-6);
    auto quantile = [&](double q) {
        const double idx = q * (sorted.size() - 1);
        const std::size_t lo = static_cast<std::size_t>(idx);
        const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
        return sorted[lo] + (sorted[hi] - sorted[lo]) * (idx - lo);
    };

    const double w = 600, h = 300, margin = 40;
    auto ex = [&](std::size_t i) {
        return margin + (w - 2 * margin) * (errors.size() > 1
                                                ? static_cast<double>(i) / (errors.size() - 1)
                                                : 0.5);
    };
    auto ey = [&](double e) { return h - margin - (h - 2 * margin) * (e / max_err); };

    std::ostringstream svg;
    svg.precision(3);
    svg << std::fixed;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w + 160 << "\" height=\"" << h
        << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<line x1=\"" << margin << "\" y1=\"" << h - margin << "\" x2=\"" << w - margin
        << "\" y2=\"" << h - margin << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\""
        << h - margin << "\" stroke=\"black\"/>\n";
    for (std::size_t i = 0; i < errors.size(); ++i) {
        svg << "<circle cx=\"" << ex(i) << "\" cy=\"" << ey(errors[i])
            << "\" r=\"3\" fill=\"#3182bd\"/>\n";
    }
    // Box summary to the right: q1-q3 box, median line, min-max whiskers.
    const double bx = w + 40, bw = 60;
    const double q1 = quantile(0.25), q2 = quantile(0.5), q3 = quantile(0.75);
    svg << "<line x1=\"" << bx + bw / 2 << "\" y1=\"" << ey(sorted.front()) << "\" x2=\""
        << bx + bw / 2 << "\" y2=\"" << ey(sorted.back()) << "\" stroke=\"black\"/>\n";
    svg << "<rect x=\"" << bx << "\" y=\"" << ey(q3) << "\" width=\"" << bw << "\" height=\""
        << std::max(1.0, ey(q1) - ey(q3)) << "\" fill=\"#9ecae1\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << bx << "\" y1=\"" << ey(q2) << "\" x2=\"" << bx + bw << "\" y2=\""
        << ey(q2) << "\" stroke=\"#de2d26\" stroke-width=\"2\"/>\n";
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace

std::vector<std::string> emit_figures(const PipelineOutput& output, const std::string& out_dir) {
    std::vector<std::string> files;
    const std::string overlay_path = out_dir + "/overlay.svg";
    write_file(overlay_path, overlay_svg(output));
    files.push_back(overlay_path);

    const bool have_errors = !output.trace.stance_arrivals.empty();
    if (have_errors) {
        const std::string errors_path = out_dir + "/errors.svg";
        write_file(errors_path, errors_svg(output.trace));
        files.push_back(errors_path);
    }

    std::string metrics = report_to_text(output.report);
    if (!have_errors) metrics += "note error_figure_omitted_empty_trace\n";
    const std::string metrics_path = out_dir + "/metrics.txt";
    write_file(metrics_path, metrics);
    files.push_back(metrics_path);
    return files;
}

}  // namespace stanceplan
