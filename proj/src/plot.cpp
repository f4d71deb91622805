#include "gibbsinf/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "gibbsinf/errors.hpp"

namespace gibbsinf {

namespace {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int col(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return static_cast<int>(i);
        throw InputError("plot: no column named \"" + name + "\"");
    }
};

Table read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("plot: cannot open " + path);
    Table t;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (first) {
            t.header = cells;
            first = false;
        } else if (!cells.empty()) {
            t.rows.push_back(cells);
        }
    }
    if (t.header.empty()) throw InputError("plot: empty CSV " + path);
    return t;
}

double to_double(const std::string& s) {
    try {
        return std::stod(s);
    } catch (...) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

const char* series_color(std::size_t i) {
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
    return palette[i % 10];
}

void render_lines(const PlotRequest& req, const Table& t, std::ofstream& out) {
    const int xc = t.col(req.x_column);
    const int yc = t.col(req.y_column);
    const int gc = req.group_column.empty() ? -1 : t.col(req.group_column);

    std::map<std::string, std::vector<std::pair<double, double>>> series;
    for (const auto& row : t.rows) {
        double x = to_double(row[static_cast<std::size_t>(xc)]);
        double y = to_double(row[static_cast<std::size_t>(yc)]);
        if (req.log_y) y = (y > 0) ? std::log10(y) : std::numeric_limits<double>::quiet_NaN();
        if (!std::isfinite(x) || !std::isfinite(y)) continue;
        series[gc >= 0 ? row[static_cast<std::size_t>(gc)] : ""].push_back({x, y});
    }
    if (series.empty()) throw InputError("plot: no finite points to draw");
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (auto& [k, pts] : series) {
        std::sort(pts.begin(), pts.end());
        for (auto& [x, y] : pts) {
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    }
    if (xmax == xmin) xmax = xmin + 1;
    if (ymax == ymin) ymax = ymin + 1;
    const double ml = 60, mr = 15, mt = 15, mb = 45;
    const double pw = req.width - ml - mr, ph = req.height - mt - mb;
    auto X = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * pw; };
    auto Y = [&](double y) { return mt + (1.0 - (y - ymin) / (ymax - ymin)) * ph; };

    out << "<rect x='" << ml << "' y='" << mt << "' width='" << pw << "' height='" << ph
        << "' fill='none' stroke='#444'/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double xv = xmin + (xmax - xmin) * i / 4.0;
        const double yv = ymin + (ymax - ymin) * i / 4.0;
        out << "<text x='" << X(xv) << "' y='" << (mt + ph + 18) << "' font-size='11' text-anchor='middle'>"
            << fmt(xv) << "</text>\n";
        out << "<text x='" << (ml - 6) << "' y='" << (Y(yv) + 4) << "' font-size='11' text-anchor='end'>"
            << fmt(yv) << "</text>\n";
    }
    out << "<text x='" << (ml + pw / 2) << "' y='" << (req.height - 8) << "' font-size='12' text-anchor='middle'>"
        << req.x_column << "</text>\n";
    out << "<text x='14' y='" << (mt + ph / 2) << "' font-size='12' text-anchor='middle' transform='rotate(-90 14 "
        << (mt + ph / 2) << ")'>" << (req.log_y ? "log10 " + req.y_column : req.y_column) << "</text>\n";

    std::size_t si = 0;
    for (const auto& [key, pts] : series) {
        out << "<polyline fill='none' stroke='" << series_color(si) << "' stroke-width='1.2' points='";
        for (const auto& [x, y] : pts) out << fmt(X(x)) << "," << fmt(Y(y)) << " ";
        out << "'/>\n";
        if (!key.empty() && series.size() <= 12)
            out << "<text x='" << (ml + pw - 4) << "' y='" << (mt + 14 + 13 * static_cast<double>(si))
                << "' font-size='11' text-anchor='end' fill='" << series_color(si) << "'>" << key << "</text>\n";
        ++si;
    }
}

void render_heatmap(const PlotRequest& req, const Table& t, std::ofstream& out) {
    const int xc = t.col(req.x_column);
    const int yc = t.col(req.y_column);
    const int vc = t.col(req.value_column);
    std::vector<double> xs, ys;
    std::map<std::pair<double, double>, double> cells;
    double vmin = 1e300, vmax = -1e300;
    for (const auto& row : t.rows) {
        const double x = to_double(row[static_cast<std::size_t>(xc)]);
        const double y = to_double(row[static_cast<std::size_t>(yc)]);
        const double v = to_double(row[static_cast<std::size_t>(vc)]);
        if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(v)) continue;
        xs.push_back(x);
        ys.push_back(y);
        cells[{x, y}] = v;
        vmin = std::min(vmin, v);
        vmax = std::max(vmax, v);
    }
    if (cells.empty()) throw InputError("plot: no finite cells to draw");
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::sort(ys.begin(), ys.end());
    ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
    if (vmax == vmin) vmax = vmin + 1;

    const double ml = 60, mr = 70, mt = 15, mb = 45;
    const double pw = req.width - ml - mr, ph = req.height - mt - mb;
    const double cw = pw / static_cast<double>(xs.size()), ch = ph / static_cast<double>(ys.size());
    auto shade = [&](double v) {
        const double u = (v - vmin) / (vmax - vmin);
        // dark blue -> yellow ramp
        const int r = static_cast<int>(30 + 225 * u);
        const int g = static_cast<int>(30 + 200 * u);
        const int b = static_cast<int>(120 - 90 * u);
        char buf[16];
        std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
        return std::string(buf);
    };
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = 0; j < ys.size(); ++j) {
            const auto it = cells.find({xs[i], ys[j]});
            if (it == cells.end()) continue;
            out << "<rect x='" << fmt(ml + cw * static_cast<double>(i)) << "' y='"
                << fmt(mt + ph - ch * static_cast<double>(j + 1)) << "' width='" << fmt(cw) << "' height='"
                << fmt(ch) << "' fill='" << shade(it->second) << "'/>\n";
        }
    out << "<rect x='" << ml << "' y='" << mt << "' width='" << pw << "' height='" << ph
        << "' fill='none' stroke='#444'/>\n";
    out << "<text x='" << (ml + pw / 2) << "' y='" << (req.height - 8) << "' font-size='12' text-anchor='middle'>"
        << req.x_column << "</text>\n";
    out << "<text x='14' y='" << (mt + ph / 2) << "' font-size='12' text-anchor='middle' transform='rotate(-90 14 "
        << (mt + ph / 2) << ")'>" << req.y_column << "</text>\n";
    // simple legend: min and max swatches
    out << "<rect x='" << (ml + pw + 12) << "' y='" << mt << "' width='14' height='14' fill='" << shade(vmax)
        << "'/><text x='" << (ml + pw + 30) << "' y='" << (mt + 11) << "' font-size='11'>" << fmt(vmax)
        << "</text>\n";
    out << "<rect x='" << (ml + pw + 12) << "' y='" << (mt + 20) << "' width='14' height='14' fill='" << shade(vmin)
        << "'/><text x='" << (ml + pw + 30) << "' y='" << (mt + 31) << "' font-size='11'>" << fmt(vmin)
        << "</text>\n";
}

}  // namespace

void render_plot(const PlotRequest& req) {
    const Table t = read_csv(req.input_csv);
    std::ofstream out(req.output_svg, std::ios::binary);
    if (!out) throw InputError("plot: cannot open output " + req.output_svg);
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << req.width << "' height='" << req.height
        << "' viewBox='0 0 " << req.width << " " << req.height << "'>\n";
    out << "<rect width='100%' height='100%' fill='white'/>\n";
    if (req.mode == "lines")
        render_lines(req, t, out);
    else if (req.mode == "heatmap")
        render_heatmap(req, t, out);
    else
        throw InputError("plot: mode must be lines or heatmap");
    out << "</svg>\n";
}

}  // namespace gibbsinf
