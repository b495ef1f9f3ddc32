/*
 * Copyright 2026 The radarseg Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *       http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"
#include "radarseg/evalbench.hpp"

namespace radarseg {

namespace {

using nlohmann::json;

std::string fmt(double v, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
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

// White to dark blue.
std::string heat_color(double frac) {
    frac = std::clamp(frac, 0.0, 1.0);
    const int r = static_cast<int>(std::lround(255 - frac * (255 - 8)));
    const int g = static_cast<int>(std::lround(255 - frac * (255 - 48)));
    const int b = static_cast<int>(std::lround(255 - frac * (255 - 107)));
    char buf[16];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
    return buf;
}

constexpr const char* kPalette[] = {"#e41a1c", "#377eb8", "#4daf4a", "#984ea3", "#ff7f00",
                                    "#a65628", "#f781bf", "#999999", "#17becf"};

}  // namespace

std::string metrics_json(const MetricsReport& r, int indent) {
    json j;
    j["task"] = eval_task_name(r.task);
    j["samples"] = r.samples;
    j["macro_precision"] = r.macro_precision;
    j["macro_recall"] = r.macro_recall;
    j["macro_f1"] = r.macro_f1;
    j["micro_accuracy"] = r.micro_accuracy;
    json classes = json::array();
    for (const auto& c : r.classes)
        classes.push_back({{"name", c.name},
                           {"support", c.support},
                           {"predicted", c.predicted},
                           {"precision", c.precision},
                           {"recall", c.recall},
                           {"f1", c.f1},
                           {"present", c.present}});
    j["classes"] = classes;
    j["confusion"] = {{"rows", r.confusion.row_names},
                      {"cols", r.confusion.col_names},
                      {"counts", r.confusion.counts},
                      {"row_percent", r.confusion.row_percent()}};
    return j.dump(indent);
}

std::string latency_json(const LatencyReport& r, int indent) {
    json j;
    j["baseline"] = r.baseline;
    j["threads"] = r.threads;
    json rows = json::array();
    for (const auto& s : r.rows)
        rows.push_back({{"variant", s.variant},
                        {"mean_ms", s.mean_ms},
                        {"median_ms", s.median_ms},
                        {"p99_ms", s.p99_ms},
                        {"runs", s.runs},
                        {"ratio", s.ratio}});
    j["rows"] = rows;
    return j.dump(indent);
}

std::string metrics_csv(const MetricsReport& r) {
    std::ostringstream os;
    os << "class,support,predicted,precision,recall,f1\n";
    for (const auto& c : r.classes)
        os << c.name << ',' << c.support << ',' << c.predicted << ',' << fmt(100 * c.precision, 2) << ','
           << fmt(100 * c.recall, 2) << ',' << fmt(100 * c.f1, 2) << '\n';
    os << "macro,," << r.samples << ',' << fmt(100 * r.macro_precision, 2) << ',' << fmt(100 * r.macro_recall, 2)
       << ',' << fmt(100 * r.macro_f1, 2) << '\n';
    return os.str();
}

std::string confusion_csv(const ConfusionMatrix& cm) {
    std::ostringstream os;
    os << "truth\\pred";
    for (const auto& n : cm.col_names) os << ',' << n;
    os << '\n';
    const auto pct = cm.row_percent();
    for (std::size_t r = 0; r < cm.rows(); ++r) {
        os << cm.row_names[r];
        for (std::size_t c = 0; c < cm.cols(); ++c) os << ',' << fmt(pct[r * cm.cols() + c], 2);
        os << '\n';
    }
    return os.str();
}

std::string summary_csv(std::span<const std::pair<std::string, MetricsReport>> rows) {
    std::ostringstream os;
    os << "variant,task,macro_precision,macro_recall,macro_f1\n";
    for (const auto& [name, r] : rows)
        os << name << ',' << eval_task_name(r.task) << ',' << fmt(100 * r.macro_precision, 2) << ','
           << fmt(100 * r.macro_recall, 2) << ',' << fmt(100 * r.macro_f1, 2) << '\n';
    return os.str();
}

std::string latency_csv(const LatencyReport& r) {
    std::ostringstream os;
    os << "variant,mean_ms,median_ms,p99_ms,runs,ratio\n";
    for (const auto& s : r.rows)
        os << s.variant << ',' << fmt(s.mean_ms, 4) << ',' << fmt(s.median_ms, 4) << ',' << fmt(s.p99_ms, 4) << ','
           << s.runs << ',' << fmt(s.ratio, 4) << '\n';
    return os.str();
}

std::string confusion_svg(const ConfusionMatrix& cm, const std::string& title) {
    const int cell = 56, left = 190, top = 150;
    const int w = left + static_cast<int>(cm.cols()) * cell + 20;
    const int h = top + static_cast<int>(cm.rows()) * cell + 40;
    const auto pct = cm.row_percent();
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
       << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"10\" y=\"22\" font-size=\"15\">" << xml_escape(title) << "</text>\n";
    for (std::size_t c = 0; c < cm.cols(); ++c) {
        const int x = left + static_cast<int>(c) * cell + cell / 2;
        os << "<text transform=\"translate(" << x << ',' << top - 8 << ") rotate(-50)\">"
           << xml_escape(cm.col_names[c]) << "</text>\n";
    }
    for (std::size_t r = 0; r < cm.rows(); ++r) {
        const int y = top + static_cast<int>(r) * cell;
        os << "<text x=\"" << left - 8 << "\" y=\"" << y + cell / 2 + 4 << "\" text-anchor=\"end\">"
           << xml_escape(cm.row_names[r]) << "</text>\n";
        for (std::size_t c = 0; c < cm.cols(); ++c) {
            const double p = pct[r * cm.cols() + c];
            const int x = left + static_cast<int>(c) * cell;
            os << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell << "\" height=\"" << cell
               << "\" fill=\"" << heat_color(p / 100.0) << "\" stroke=\"#cccccc\"/>\n";
            os << "<text x=\"" << x + cell / 2 << "\" y=\"" << y + cell / 2 + 4 << "\" text-anchor=\"middle\" fill=\""
               << (p > 55.0 ? "white" : "black") << "\">" << fmt(p, 1) << "</text>\n";
        }
    }
    os << "<text x=\"" << left << "\" y=\"" << h - 12 << "\">rows: truth, columns: prediction, row %</text>\n";
    os << "</svg>\n";
    return os.str();
}

std::string grid_svg(const GridMap& grid, std::span<const int> cell_classes, std::span<const std::string> class_names,
                     const std::string& title) {
    if (cell_classes.size() != static_cast<std::size_t>(grid.config.cells()))
        throw ShapeError("grid_svg: class count does not match the grid");
    const int px = std::max(1, 768 / std::max(grid.rows(), grid.cols()));
    const int legend = 170;
    const int w = grid.cols() * px + legend, h = grid.rows() * px + 40;
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
       << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"#111111\"/>\n";
    os << "<text x=\"8\" y=\"20\" fill=\"white\">" << xml_escape(title) << "</text>\n";
    // x grows upward (forward), y grows to the left, as seen from above.
    for (int r = 0; r < grid.rows(); ++r) {
        for (int c = 0; c < grid.cols(); ++c) {
            const int cell = r * grid.cols() + c;
            if (!grid.occupied(cell)) continue;
            const int k = cell_classes[cell];
            const char* color = k < 0 ? "#555555" : kPalette[k % std::size(kPalette)];
            os << "<rect x=\"" << (grid.cols() - 1 - c) * px << "\" y=\"" << 30 + (grid.rows() - 1 - r) * px
               << "\" width=\"" << px << "\" height=\"" << px << "\" fill=\"" << color << "\"/>\n";
        }
    }
    for (std::size_t k = 0; k < class_names.size(); ++k) {
        const int y = 40 + static_cast<int>(k) * 18;
        os << "<rect x=\"" << grid.cols() * px + 12 << "\" y=\"" << y << "\" width=\"12\" height=\"12\" fill=\""
           << kPalette[k % std::size(kPalette)] << "\"/>\n";
        os << "<text x=\"" << grid.cols() * px + 30 << "\" y=\"" << y + 11 << "\" fill=\"white\">"
           << xml_escape(class_names[k]) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace radarseg
