// Copyright 2026 The beacon Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "beacon/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>

namespace beacon {

namespace {

std::string fmt(double v, const char* format = "%.10g") {
    char buf[64];
    std::snprintf(buf, sizeof(buf), format, v);
    return buf;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

AggregateReport aggregate(const std::vector<RunTrace>& traces) {
    if (traces.empty()) throw std::invalid_argument("aggregate: no traces");
    const RunTrace& first = traces.front();
    for (const auto& t : traces) {
        if (!t.error.empty()) {
            throw std::invalid_argument("aggregate: trace for '" + t.algorithm +
                                        "' seed " + std::to_string(t.seed) +
                                        " carries an error: " + t.error);
        }
        if (t.config_hash != first.config_hash) {
            throw std::invalid_argument("aggregate: traces have differing config hashes");
        }
        if (t.n_init != first.n_init || t.T != first.T || t.problem != first.problem) {
            throw std::invalid_argument("aggregate: traces mix run shapes");
        }
        if (static_cast<int>(t.rows.size()) != t.n_init + t.T) {
            throw std::invalid_argument("aggregate: trace rows not dense in iteration");
        }
    }

    const int total = first.n_init + first.T;
    std::map<std::string, std::vector<const RunTrace*>> groups;
    for (const auto& t : traces) groups[t.algorithm].push_back(&t);

    AggregateReport report;
    report.n_init = first.n_init;
    report.T = first.T;
    report.config_hash = first.config_hash;
    for (const auto& [name, group] : groups) {
        AggregateReport::Series series;
        series.algorithm = name;
        series.replicates = static_cast<int>(group.size());
        series.mean_reach.resize(total);
        series.std_reach.resize(total);
        for (int i = 0; i < total; ++i) {
            double mean = 0.0;
            for (const auto* t : group) mean += t->rows[i].reachability;
            mean /= group.size();
            double ss = 0.0;
            for (const auto* t : group) {
                const double d = t->rows[i].reachability - mean;
                ss += d * d;
            }
            series.mean_reach[i] = mean;
            series.std_reach[i] = group.size() > 1
                                      ? std::sqrt(ss / static_cast<double>(group.size() - 1))
                                      : 0.0;
        }
        report.series.push_back(std::move(series));
    }
    return report;
}

void write_report_csv(const std::string& path, const AggregateReport& report) {
    if (report.series.empty()) throw std::invalid_argument("write_report_csv: empty report");
    std::ofstream file(path);
    if (!file) throw std::runtime_error("write_report_csv: cannot open " + path);
    file << "algorithm,iteration,mean_reach,std_reach\n";
    for (const auto& series : report.series) {
        for (std::size_t i = 0; i < series.mean_reach.size(); ++i) {
            file << series.algorithm << "," << (i + 1) << "," << fmt(series.mean_reach[i]) << ","
                 << fmt(series.std_reach[i]) << "\n";
        }
    }
    if (!file.good()) throw std::runtime_error("write_report_csv: write failed for " + path);
}

void write_report_svg(const std::string& path, const AggregateReport& report) {
    if (report.series.empty()) throw std::invalid_argument("write_report_svg: empty report");
    static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                     "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};
    const int width = 960, height = 600;
    const double left = 70, right = 30, top = 40, bottom = 60;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;
    const int total = report.n_init + report.T;

    const auto sx = [&](double iter) { return left + plot_w * (iter - 1) / std::max(total - 1, 1); };
    const auto sy = [&](double reach) {
        const double clamped = std::clamp(reach, 0.0, 1.0);
        return top + plot_h * (1.0 - clamped);
    };

    std::ofstream file(path);
    if (!file) throw std::runtime_error("write_report_svg: cannot open " + path);
    file << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    file << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
         << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    file << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";

    // Axes and ticks.
    file << "<g stroke=\"#333\" stroke-width=\"1\">\n";
    file << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << left + plot_w
         << "\" y2=\"" << top + plot_h << "\"/>\n";
    file << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
         << top + plot_h << "\"/>\n";
    file << "</g>\n";
    for (int tick = 0; tick <= 5; ++tick) {
        const double reach = tick / 5.0;
        file << "<text x=\"" << left - 10 << "\" y=\"" << sy(reach) + 4
             << "\" font-size=\"12\" text-anchor=\"end\" fill=\"#333\">" << fmt(reach, "%.1f")
             << "</text>\n";
        file << "<line x1=\"" << left - 5 << "\" y1=\"" << sy(reach) << "\" x2=\"" << left
             << "\" y2=\"" << sy(reach) << "\" stroke=\"#333\"/>\n";
    }
    for (int tick = 0; tick <= 4; ++tick) {
        const double iter = 1 + tick * (total - 1) / 4.0;
        file << "<text x=\"" << sx(iter) << "\" y=\"" << top + plot_h + 20
             << "\" font-size=\"12\" text-anchor=\"middle\" fill=\"#333\">"
             << static_cast<int>(std::lround(iter)) << "</text>\n";
        file << "<line x1=\"" << sx(iter) << "\" y1=\"" << top + plot_h << "\" x2=\"" << sx(iter)
             << "\" y2=\"" << top + plot_h + 5 << "\" stroke=\"#333\"/>\n";
    }
    file << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 15
         << "\" font-size=\"14\" text-anchor=\"middle\" fill=\"#333\">iterations</text>\n";
    file << "<text x=\"18\" y=\"" << top + plot_h / 2
         << "\" font-size=\"14\" text-anchor=\"middle\" fill=\"#333\" transform=\"rotate(-90 18 "
         << top + plot_h / 2 << ")\">reachability</text>\n";

    // One shaded band plus line per algorithm.
    for (std::size_t s = 0; s < report.series.size(); ++s) {
        const auto& series = report.series[s];
        const char* color = kPalette[s % (sizeof(kPalette) / sizeof(kPalette[0]))];
        file << "<polygon fill=\"" << color << "\" fill-opacity=\"0.15\" stroke=\"none\" points=\"";
        for (int i = 0; i < total; ++i) {
            file << fmt(sx(i + 1), "%.2f") << ","
                 << fmt(sy(series.mean_reach[i] + series.std_reach[i]), "%.2f") << " ";
        }
        for (int i = total - 1; i >= 0; --i) {
            file << fmt(sx(i + 1), "%.2f") << ","
                 << fmt(sy(series.mean_reach[i] - series.std_reach[i]), "%.2f") << " ";
        }
        file << "\"/>\n";
        file << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
        for (int i = 0; i < total; ++i) {
            file << fmt(sx(i + 1), "%.2f") << "," << fmt(sy(series.mean_reach[i]), "%.2f") << " ";
        }
        file << "\"/>\n";
        const double ly = top + 18 + 18 * static_cast<double>(s);
        file << "<line x1=\"" << left + 12 << "\" y1=\"" << ly - 4 << "\" x2=\"" << left + 36
             << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        file << "<text x=\"" << left + 42 << "\" y=\"" << ly << "\" font-size=\"12\" fill=\"#333\">"
             << xml_escape(series.algorithm) << " (R=" << series.replicates << ")</text>\n";
    }
    file << "</svg>\n";
    if (!file.good()) throw std::runtime_error("write_report_svg: write failed for " + path);
}

}  // namespace beacon
