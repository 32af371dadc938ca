#pragma once

// Deterministic SVG emission, no plotting dependency. Fixed 800x800 canvas
// with a 70px margin; world coordinates map linearly onto the inner square
// and every number is rendered through fmt_fixed, so equal inputs give
// byte-identical files.

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "sqfree/numeric.hpp"
#include "sqfree/roots.hpp"
#include "sqfree/thermo.hpp"

namespace sqfree {

class SvgCanvas {
public:
    static constexpr int kSize = 800;
    static constexpr int kMargin = 70;

    SvgCanvas(double x_lo, double x_hi, double y_lo, double y_hi)
        : x_lo_(x_lo), x_hi_(x_hi), y_lo_(y_lo), y_hi_(y_hi) {}

    double px(double x) const {
        return kMargin + (x - x_lo_) / (x_hi_ - x_lo_) * inner();
    }
    double py(double y) const {
        return kSize - kMargin - (y - y_lo_) / (y_hi_ - y_lo_) * inner();
    }
    static double inner() { return kSize - 2.0 * kMargin; }

    void line(double x1, double y1, double x2, double y2,
              const std::string& stroke, double width = 1.0,
              const std::string& dash = "") {
        body_ << "<line x1=\"" << fmt_fixed(px(x1), 2) << "\" y1=\""
              << fmt_fixed(py(y1), 2) << "\" x2=\"" << fmt_fixed(px(x2), 2)
              << "\" y2=\"" << fmt_fixed(py(y2), 2) << "\" stroke=\"" << stroke
              << "\" stroke-width=\"" << fmt_fixed(width, 2) << "\"";
        if (!dash.empty()) body_ << " stroke-dasharray=\"" << dash << "\"";
        body_ << "/>\n";
    }

    void polyline(const std::vector<std::pair<double, double>>& pts,
                  const std::string& stroke, double width = 1.5,
                  const std::string& dash = "") {
        if (pts.size() < 2) return;
        body_ << "<polyline fill=\"none\" stroke=\"" << stroke
              << "\" stroke-width=\"" << fmt_fixed(width, 2) << "\"";
        if (!dash.empty()) body_ << " stroke-dasharray=\"" << dash << "\"";
        body_ << " points=\"";
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (i) body_ << " ";
            body_ << fmt_fixed(px(pts[i].first), 2) << ","
                  << fmt_fixed(py(pts[i].second), 2);
        }
        body_ << "\"/>\n";
    }

    void circle(double x, double y, double radius_px, const std::string& stroke,
                const std::string& fill) {
        body_ << "<circle cx=\"" << fmt_fixed(px(x), 2) << "\" cy=\""
              << fmt_fixed(py(y), 2) << "\" r=\"" << fmt_fixed(radius_px, 2)
              << "\" stroke=\"" << stroke << "\" fill=\"" << fill << "\"/>\n";
    }

    void cross(double x, double y, double arm_px, const std::string& stroke) {
        double cx = px(x), cy = py(y);
        body_ << "<path d=\"M" << fmt_fixed(cx - arm_px, 2) << " "
              << fmt_fixed(cy - arm_px, 2) << " L" << fmt_fixed(cx + arm_px, 2)
              << " " << fmt_fixed(cy + arm_px, 2) << " M"
              << fmt_fixed(cx - arm_px, 2) << " " << fmt_fixed(cy + arm_px, 2)
              << " L" << fmt_fixed(cx + arm_px, 2) << " "
              << fmt_fixed(cy - arm_px, 2) << "\" stroke=\"" << stroke
              << "\" stroke-width=\"1.6\"/>\n";
    }

    /// Error bar: vertical segment with serifs, in world coordinates.
    void error_bar(double x, double y_lo, double y_hi,
                   const std::string& stroke) {
        line(x, y_lo, x, y_hi, stroke, 1.2);
        double cx = px(x);
        for (double y : {y_lo, y_hi})
            body_ << "<line x1=\"" << fmt_fixed(cx - 4, 2) << "\" y1=\""
                  << fmt_fixed(py(y), 2) << "\" x2=\"" << fmt_fixed(cx + 4, 2)
                  << "\" y2=\"" << fmt_fixed(py(y), 2) << "\" stroke=\""
                  << stroke << "\" stroke-width=\"1.2\"/>\n";
    }

    /// Text anchored at a pixel position ("start", "middle" or "end").
    void text_px(double cx, double cy, const std::string& s,
                 const std::string& anchor = "start", int size = 14,
                 const std::string& fill = "#222") {
        body_ << "<text x=\"" << fmt_fixed(cx, 2) << "\" y=\""
              << fmt_fixed(cy, 2) << "\" font-size=\"" << size
              << "\" text-anchor=\"" << anchor << "\" fill=\"" << fill
              << "\">" << escape(s) << "</text>\n";
    }

    void frame() {
        body_ << "<rect x=\"" << kMargin << "\" y=\"" << kMargin
              << "\" width=\"" << fmt_fixed(inner(), 2) << "\" height=\""
              << fmt_fixed(inner(), 2)
              << "\" fill=\"none\" stroke=\"#444\" stroke-width=\"1\"/>\n";
    }

    std::string finish(const std::string& title) const {
        std::ostringstream out;
        out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize
            << "\" height=\"" << kSize << "\" viewBox=\"0 0 " << kSize << " "
            << kSize << "\" font-family=\"monospace\">\n"
            << "<rect width=\"" << kSize << "\" height=\"" << kSize
            << "\" fill=\"white\"/>\n"
            << "<text x=\"" << kSize / 2 << "\" y=\"40\" font-size=\"20\" "
               "text-anchor=\"middle\" fill=\"#111\">"
            << escape(title) << "</text>\n"
            << body_.str() << "</svg>\n";
        return out.str();
    }

    static std::string escape(const std::string& s) {
        std::string out;
        for (char c : s) {
            if (c == '&')
                out += "&amp;";
            else if (c == '<')
                out += "&lt;";
            else if (c == '>')
                out += "&gt;";
            else
                out += c;
        }
        return out;
    }

private:
    double x_lo_, x_hi_, y_lo_, y_hi_;
    std::ostringstream body_;
};

/// Complex-plane chart of a pole/zero set: unit circle for reference,
/// zeros as hollow circles, poles as crosses, the certified dominant
/// real pole highlighted and annotated.
inline std::string pole_chart_svg(const PoleSet& set,
                                  const RootResult& dominant) {
    SvgCanvas c(-1.45, 1.45, -1.45, 1.45);
    c.frame();
    // Axes through the origin.
    c.line(-1.45, 0, 1.45, 0, "#bbb");
    c.line(0, -1.45, 0, 1.45, "#bbb");
    // Unit circle: the window is square, so one pixel radius serves both axes.
    double r_px = SvgCanvas::inner() / 2.9;
    c.circle(0, 0, r_px, "#888", "none");
    for (double t : {-1.0, 1.0}) {
        c.text_px(c.px(t), c.py(0) + 18, fmt_fixed(t, 0), "middle", 12, "#666");
        c.text_px(c.px(0) - 8, c.py(t) + 4, fmt_fixed(t, 0), "end", 12, "#666");
    }
    for (const RootPoint& z : set.zeros)
        c.circle(to_double(z.z.real()), to_double(z.z.imag()), 5.0, "#1a6fb5",
                 "none");
    double xc = to_double(dominant.x_c);
    for (const RootPoint& p : set.poles) {
        double re = to_double(p.z.real()), im = to_double(p.z.imag());
        bool is_dominant = im == 0.0 && std::fabs(re - xc) < 1e-9;
        if (is_dominant)
            c.circle(re, im, 6.5, "#c0392b", "#c0392b");
        else
            c.cross(re, im, 5.0, "#c0392b");
    }
    c.text_px(c.px(xc), c.py(0) - 14, "x_c = " + fmt_bigfloat_fixed(dominant.x_c, 9),
              "middle", 14, "#c0392b");
    c.text_px(SvgCanvas::kMargin + 10, SvgCanvas::kMargin + 22,
              "o zeros   x poles", "start", 13, "#333");
    c.text_px(SvgCanvas::kMargin + 10, SvgCanvas::kMargin + 40,
              "pole mass near |z|=1: " + set.near_unit_fraction.str(), "start",
              13, "#333");
    c.text_px(SvgCanvas::kSize / 2, SvgCanvas::kSize - 28, "Re", "middle", 14);
    c.text_px(28, SvgCanvas::kSize / 2, "Im", "middle", 14);
    return c.finish("Poles and zeros of the weight-" + std::to_string(set.ell) +
                    " truncated counting series");
}

/// Critical-curve chart: estimated points with error bars between the
/// rigorous envelopes, against the reference curve x_c q^(-1/3).
/// Horizontal axis is log10 q on [-2, 2]; vertical axis is the radius.
inline std::string phase_diagram_svg(const CriticalCurve& curve) {
    SvgCanvas c(-2.0, 2.0, 0.0, 2.0);
    c.frame();
    auto clampy = [](double y) { return std::min(y, 2.0); };
    std::vector<std::pair<double, double>> lower, upper, reference;
    for (int i = 0; i <= 160; ++i) {
        double t = -2.0 + 4.0 * i / 160.0;
        double q = std::pow(10.0, t);
        double lo = kCriticalPoint *
                    std::min(std::pow(q, -kEpsMinusNum / kEpsMinusDen),
                             std::pow(q, -kEpsPlusNum / kEpsPlusDen));
        double up = std::min(std::pow(q, -64.0 / 233.0),
                             std::pow(q, -13.0 / 36.0));
        lower.emplace_back(t, clampy(lo));
        upper.emplace_back(t, clampy(up));
        reference.emplace_back(t, clampy(kCriticalPoint * std::pow(q, -1.0 / 3.0)));
    }
    c.polyline(upper, "#1a6fb5", 1.8);
    c.polyline(lower, "#2e8b57", 1.8);
    c.polyline(reference, "#999", 1.2, "6,4");
    for (const CriticalPoint& pt : curve.points) {
        double t = std::log10(to_double(pt.q));
        if (pt.defective) {
            c.circle(t, 0.05, 4.0, "#c0392b", "none");
            continue;
        }
        c.error_bar(t, clampy(pt.x_c - pt.uncertainty),
                    clampy(pt.x_c + pt.uncertainty), "#c0392b");
        c.circle(t, clampy(pt.x_c), 4.0, "#c0392b", "#c0392b");
    }
    for (int d = -2; d <= 2; ++d) {
        c.text_px(c.px(d), c.py(0) + 20, "1e" + std::to_string(d), "middle", 12,
                  "#666");
        c.line(d, 0, d, 0.02, "#444");
    }
    for (double y : {0.5, 1.0, 1.5, 2.0}) {
        c.text_px(SvgCanvas::kMargin - 8, c.py(y) + 4, fmt_fixed(y, 1), "end",
                  12, "#666");
        c.line(-2.0, y, -1.98, y, "#444");
    }
    c.text_px(SvgCanvas::kMargin + 10, SvgCanvas::kMargin + 22,
              "upper envelope min(q^-64/233, q^-13/36)", "start", 13, "#1a6fb5");
    c.text_px(SvgCanvas::kMargin + 10, SvgCanvas::kMargin + 40,
              "lower envelope x_c min(q^-1780/6481, q^-469/1201)", "start", 13,
              "#2e8b57");
    c.text_px(SvgCanvas::kMargin + 10, SvgCanvas::kMargin + 58,
              "reference x_c q^-1/3 (dashed), estimates with spreads", "start",
              13, "#555");
    c.text_px(SvgCanvas::kSize / 2, SvgCanvas::kSize - 28, "q (log scale)",
              "middle", 14);
    c.text_px(30, SvgCanvas::kSize / 2, "x_c(q)", "middle", 14);
    return c.finish("Critical curve of the letter-weighted ensemble");
}

}  // namespace sqfree
