#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "regsim/csv.hpp"

namespace regsim {

/// Dependency-free polyline plot writer. Plots are a convenience output; the
/// CSV files are the data contract.
class LinePlot {
public:
    LinePlot(std::string title, std::string x_label, std::string y_label)
        : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)) {}

    void add_series(std::string name, const std::vector<double>& x,
                    const std::vector<double>& y) {
        if (x.size() != y.size()) throw std::invalid_argument("LinePlot: size mismatch");
        series_.push_back({std::move(name), x, y});
    }

    void write(const std::string& path) const {
        const double w = 860, h = 520;
        const double ml = 70, mr = 160, mt = 40, mb = 55;

        double x0 = std::numeric_limits<double>::infinity(), x1 = -x0;
        double y0 = x0, y1 = -x0;
        for (const auto& s : series_)
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
                x0 = std::min(x0, s.x[i]); x1 = std::max(x1, s.x[i]);
                y0 = std::min(y0, s.y[i]); y1 = std::max(y1, s.y[i]);
            }
        if (!(x0 < x1)) { x0 -= 1.0; x1 += 1.0; }
        if (!(y0 < y1)) { y0 -= 1.0; y1 += 1.0; }
        const double ypad = 0.05 * (y1 - y0);
        y0 -= ypad; y1 += ypad;

        auto px = [&](double x) { return ml + (x - x0) / (x1 - x0) * (w - ml - mr); };
        auto py = [&](double y) { return h - mb - (y - y0) / (y1 - y0) * (h - mt - mb); };

        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot open for writing: " + path);
        out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << w << "' height='" << h
            << "' viewBox='0 0 " << w << " " << h << "'>\n"
            << "<rect width='100%' height='100%' fill='white'/>\n"
            << "<text x='" << w / 2 << "' y='24' font-size='16' text-anchor='middle'>"
            << title_ << "</text>\n";

        // axes
        out << "<line x1='" << ml << "' y1='" << h - mb << "' x2='" << w - mr << "' y2='"
            << h - mb << "' stroke='black'/>\n"
            << "<line x1='" << ml << "' y1='" << mt << "' x2='" << ml << "' y2='" << h - mb
            << "' stroke='black'/>\n";

        for (double tx : ticks(x0, x1)) {
            const double X = px(tx);
            out << "<line x1='" << X << "' y1='" << h - mb << "' x2='" << X << "' y2='"
                << h - mb + 5 << "' stroke='black'/>\n"
                << "<text x='" << X << "' y='" << h - mb + 20
                << "' font-size='11' text-anchor='middle'>" << format_number(tx) << "</text>\n";
        }
        for (double ty : ticks(y0, y1)) {
            const double Y = py(ty);
            out << "<line x1='" << ml - 5 << "' y1='" << Y << "' x2='" << ml << "' y2='" << Y
                << "' stroke='black'/>\n"
                << "<text x='" << ml - 8 << "' y='" << Y + 4
                << "' font-size='11' text-anchor='end'>" << format_number(ty) << "</text>\n";
        }
        out << "<text x='" << (ml + w - mr) / 2 << "' y='" << h - 12
            << "' font-size='13' text-anchor='middle'>" << x_label_ << "</text>\n"
            << "<text x='16' y='" << (mt + h - mb) / 2
            << "' font-size='13' text-anchor='middle' transform='rotate(-90 16 "
            << (mt + h - mb) / 2 << ")'>" << y_label_ << "</text>\n";

        static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                        "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};
        for (std::size_t si = 0; si < series_.size(); ++si) {
            const auto& s = series_[si];
            const char* color = palette[si % 8];
            out << "<polyline fill='none' stroke='" << color << "' stroke-width='1.4' points='";
            const std::size_t stride = std::max<std::size_t>(1, s.x.size() / 4000);
            for (std::size_t i = 0; i < s.x.size(); i += stride)
                out << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
            if (!s.x.empty()) out << px(s.x.back()) << ',' << py(s.y.back());
            out << "'/>\n";
            const double ly = mt + 18.0 * static_cast<double>(si);
            out << "<line x1='" << w - mr + 10 << "' y1='" << ly << "' x2='" << w - mr + 34
                << "' y2='" << ly << "' stroke='" << color << "' stroke-width='2'/>\n"
                << "<text x='" << w - mr + 40 << "' y='" << ly + 4 << "' font-size='12'>"
                << s.name << "</text>\n";
        }
        out << "</svg>\n";
        if (!out) throw std::runtime_error("write failed: " + path);
    }

private:
    struct Series {
        std::string name;
        std::vector<double> x, y;
    };

    // round tick spacing on the 1-2-5 ladder
    static std::vector<double> ticks(double lo, double hi) {
        const double span = hi - lo;
        double step = std::pow(10.0, std::floor(std::log10(span / 5.0)));
        if (span / step > 10.0) step *= 2.0;
        if (span / step > 10.0) step *= 2.5;
        if (span / step > 10.0) step *= 2.0;
        std::vector<double> out;
        double t = std::ceil(lo / step) * step;
        for (; t <= hi + 1e-12 * span; t += step) out.push_back(std::abs(t) < 1e-12 * span ? 0.0 : t);
        return out;
    }

    std::string title_, x_label_, y_label_;
    std::vector<Series> series_;
};

}  // namespace regsim
