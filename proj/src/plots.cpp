// Copyright 2026 The hqfilter Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// SVG line plots for the figure CSVs. Presentational only: the values drawn
// are exactly the CSV contents.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "csv.hpp"
#include "hqf/experiment.hpp"

namespace hqf {

namespace {

constexpr double kWidth = 640, kHeight = 400;
constexpr double kLeft = 60, kRight = 20, kTop = 36, kBottom = 44;

struct Series {
    std::string label;
    std::string column;
    std::string colour;
    std::string dash;  // empty: solid
};

struct Frame {
    double x0, x1, y0, y1;
    double px(double x) const { return kLeft + (x - x0) / (x1 - x0) * (kWidth - kLeft - kRight); }
    double py(double y) const { return kHeight - kBottom - (y - y0) / (y1 - y0) * (kHeight - kTop - kBottom); }
};

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(4);
    s << v;
    return s.str();
}

std::string polyline(const csv::Table& t, std::size_t xc, std::size_t yc, const Frame& f, const Series& s) {
    std::ostringstream out;
    out << "<polyline fill=\"none\" stroke=\"" << s.colour << "\" stroke-width=\"1.5\"";
    if (!s.dash.empty()) out << " stroke-dasharray=\"" << s.dash << "\"";
    out << " points=\"";
    for (const auto& row : t.rows) {
        if (!std::isfinite(row[yc])) continue;
        out << fmt(f.px(row[xc])) << ',' << fmt(f.py(row[yc])) << ' ';
    }
    out << "\"/>\n";
    return out.str();
}

std::string render(const csv::Table& t, const std::string& title, const std::string& xcol, const std::string& xlabel,
                   const std::vector<Series>& series) {
    const std::size_t xc = t.column(xcol);
    std::vector<std::size_t> ycols;
    for (const auto& s : series) ycols.push_back(t.column(s.column));
    if (t.rows.empty()) throw Error(ErrorKind::parse, "figure CSV has no rows");

    Frame f{t.rows.front()[xc], t.rows.back()[xc], INFINITY, -INFINITY};
    for (const auto& row : t.rows) {
        for (auto c : ycols) {
            if (!std::isfinite(row[c])) continue;
            f.y0 = std::min(f.y0, row[c]);
            f.y1 = std::max(f.y1, row[c]);
        }
    }
    if (!(f.x1 > f.x0)) f.x1 = f.x0 + 1.0;
    if (!std::isfinite(f.y0)) f.y0 = 0.0, f.y1 = 1.0;
    const double pad = std::max(1e-9, 0.05 * (f.y1 - f.y0));
    f.y0 -= pad;
    f.y1 += pad;

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << title << "</text>\n";
    svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << kWidth - kLeft - kRight << "\" height=\""
        << kHeight - kTop - kBottom << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double xv = f.x0 + (f.x1 - f.x0) * i / 4.0;
        const double yv = f.y0 + (f.y1 - f.y0) * i / 4.0;
        svg << "<text x=\"" << fmt(f.px(xv)) << "\" y=\"" << kHeight - kBottom + 16
            << "\" text-anchor=\"middle\" font-size=\"11\">" << fmt(xv) << "</text>\n";
        svg << "<text x=\"" << kLeft - 6 << "\" y=\"" << fmt(f.py(yv) + 4)
            << "\" text-anchor=\"end\" font-size=\"11\">" << fmt(yv) << "</text>\n";
    }
    svg << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 8 << "\" text-anchor=\"middle\" font-size=\"12\">"
        << xlabel << "</text>\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        svg << polyline(t, xc, ycols[i], f, series[i]);
        const double ly = kTop + 14 + 16 * double(i);
        svg << "<line x1=\"" << kWidth - 150 << "\" y1=\"" << ly << "\" x2=\"" << kWidth - 120 << "\" y2=\"" << ly
            << "\" stroke=\"" << series[i].colour << "\" stroke-width=\"1.5\"";
        if (!series[i].dash.empty()) svg << " stroke-dasharray=\"" << series[i].dash << "\"";
        svg << "/>\n<text x=\"" << kWidth - 114 << "\" y=\"" << ly + 4 << "\" font-size=\"11\">" << series[i].label
            << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

// truth solid, SME dash-dot, QEKF dashed
const std::vector<Series> kEstimateSeries = {
    {"truth", "truth_mean", "black", ""},
    {"SME", "sme_mean", "#1f77b4", "8,3,2,3"},
    {"QEKF", "qekf_mean", "#d62728", "6,4"},
};

const std::vector<Series> kTimingSeries = {
    {"SME", "sme_seconds", "#1f77b4", "8,3,2,3"},
    {"QEKF", "qekf_seconds", "#d62728", "6,4"},
};

csv::Table parse_table(const std::string& text) {
    std::istringstream in(text);
    return csv::read(in);
}

}  // namespace

std::string render_figure_svg(const std::string& csv_text, const std::string& title) {
    const csv::Table t = parse_table(csv_text);
    const bool timing = std::find(t.header.begin(), t.header.end(), "n_prime") != t.header.end();
    if (timing) return render(t, title, "n_prime", "cavity levels n'", kTimingSeries);
    return render(t, title, "t", "t", kEstimateSeries);
}

std::vector<std::string> emit_plots(const std::string& dir) {
    static const std::vector<std::pair<std::string, std::string>> figures = {
        {"fig4_sigma_x", "sigma_x estimate"}, {"fig5_sigma_y", "sigma_y estimate"},
        {"fig6_sigma_z", "sigma_z estimate"}, {"fig7_q", "disturbance q estimate"},
        {"fig8_timing", "wall-clock per trajectory"},
    };
    const std::filesystem::path d(dir);
    std::vector<std::string> written;
    for (const auto& [stem, title] : figures) {
        const auto csv_path = d / (stem + ".csv");
        if (!std::filesystem::exists(csv_path)) continue;
        std::ifstream in(csv_path);
        std::stringstream buf;
        buf << in.rdbuf();
        std::string svg;
        try {
            svg = render_figure_svg(buf.str(), title);
        } catch (const Error& e) {
            throw Error(e.kind(), csv_path.string() + ": " + e.what());
        }
        const auto svg_path = d / (stem + ".svg");
        std::ofstream out(svg_path);
        if (!out) throw Error(ErrorKind::io, "cannot write " + svg_path.string());
        out << svg;
        written.push_back(svg_path.string());
    }
    if (written.empty()) throw Error(ErrorKind::io, "no figure CSVs found in " + dir);
    return written;
}

}  // namespace hqf
