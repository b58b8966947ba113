#include "subriem/jsonio.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace subriem {

namespace {

std::string format_double(double v) {
    if (!std::isfinite(v)) throw std::invalid_argument("refusing to serialize a non-finite value");
    char buf[40];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) return buf;
    }
    return buf;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    return out;
}

}  // namespace

void write_json_file(const std::string& path, const OrderedJson& j) {
    auto out = open_out(path);
    out << j.dump(2) << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

OrderedJson read_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    return OrderedJson::parse(in);
}

void write_csv_file(const std::string& path, const Csv& csv) {
    auto out = open_out(path);
    for (std::size_t i = 0; i < csv.header.size(); ++i)
        out << (i ? "," : "") << csv.header[i];
    out << '\n';
    for (const auto& row : csv.rows) {
        if (row.size() != csv.header.size())
            throw std::invalid_argument("csv row width does not match the header");
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << format_double(row[i]);
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

Csv read_csv_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    Csv csv;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string tok;
        if (first) {
            while (std::getline(ss, tok, ',')) csv.header.push_back(tok);
            first = false;
            continue;
        }
        std::vector<double> row;
        while (std::getline(ss, tok, ',')) {
            char* end = nullptr;
            const double v = std::strtod(tok.c_str(), &end);
            if (end == tok.c_str()) throw std::runtime_error("non-numeric csv cell: " + tok);
            row.push_back(v);
        }
        if (row.size() != csv.header.size())
            throw std::runtime_error("csv row width does not match the header: " + path);
        csv.rows.push_back(std::move(row));
    }
    return csv;
}

void write_svg_plot(const std::string& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<PlotSeries>& series) {
    constexpr double kW = 640, kH = 420, kL = 62, kR = 18, kT = 30, kB = 46;
    double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
    double y_min = x_min, y_max = -x_min;
    for (const auto& s : series) {
        if (s.x.size() != s.y.size())
            throw std::invalid_argument("plot series has mismatched x/y lengths");
        for (double v : s.x) { x_min = std::min(x_min, v); x_max = std::max(x_max, v); }
        for (double v : s.y) { y_min = std::min(y_min, v); y_max = std::max(y_max, v); }
    }
    if (!std::isfinite(x_min)) { x_min = 0; x_max = 1; y_min = 0; y_max = 1; }
    if (x_max <= x_min) { x_min -= 0.5; x_max += 0.5; }
    if (y_max <= y_min) { y_min -= 0.5; y_max += 0.5; }
    const double x_pad = 0.04 * (x_max - x_min), y_pad = 0.06 * (y_max - y_min);
    x_min -= x_pad; x_max += x_pad; y_min -= y_pad; y_max += y_pad;
    auto px = [&](double v) { return kL + (v - x_min) / (x_max - x_min) * (kW - kL - kR); };
    auto py = [&](double v) { return kH - kB - (v - y_min) / (y_max - y_min) * (kH - kT - kB); };

    auto fmt = [](double v) {
        char b[32];
        std::snprintf(b, sizeof(b), "%.4g", v);
        return std::string(b);
    };
    auto coord = [](double v) {
        char b[32];
        std::snprintf(b, sizeof(b), "%.2f", v);
        return std::string(b);
    };

    static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                     "#ff7f0e", "#8c564b"};
    auto out = open_out(path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
        << "\" viewBox=\"0 0 " << kW << " " << kH << "\">\n";
    out << "<rect width=\"" << kW << "\" height=\"" << kH << "\" fill=\"white\"/>\n";
    out << "<text x=\"" << kW / 2 << "\" y=\"20\" text-anchor=\"middle\" font-family=\"sans-serif\""
        << " font-size=\"14\">" << xml_escape(title) << "</text>\n";
    // axes
    out << "<line x1=\"" << kL << "\" y1=\"" << kH - kB << "\" x2=\"" << kW - kR << "\" y2=\""
        << kH - kB << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << kL << "\" y1=\"" << kT << "\" x2=\"" << kL << "\" y2=\"" << kH - kB
        << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double fx = x_min + (x_max - x_min) * i / 4.0;
        const double fy = y_min + (y_max - y_min) * i / 4.0;
        out << "<line x1=\"" << coord(px(fx)) << "\" y1=\"" << kH - kB << "\" x2=\""
            << coord(px(fx)) << "\" y2=\"" << kH - kB + 4 << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << coord(px(fx)) << "\" y=\"" << kH - kB + 17
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" << fmt(fx)
            << "</text>\n";
        out << "<line x1=\"" << kL - 4 << "\" y1=\"" << coord(py(fy)) << "\" x2=\"" << kL
            << "\" y2=\"" << coord(py(fy)) << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << kL - 7 << "\" y=\"" << coord(py(fy) + 3)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" << fmt(fy)
            << "</text>\n";
    }
    out << "<text x=\"" << (kL + kW - kR) / 2 << "\" y=\"" << kH - 10
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
        << xml_escape(x_label) << "</text>\n";
    out << "<text x=\"14\" y=\"" << (kT + kH - kB) / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 14 "
        << (kT + kH - kB) / 2 << ")\">" << xml_escape(y_label) << "</text>\n";
    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        const char* color = kPalette[si % 6];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i)
            out << (i ? " " : "") << coord(px(s.x[i])) << "," << coord(py(s.y[i]));
        out << "\"/>\n";
        for (std::size_t i = 0; i < s.x.size(); ++i)
            out << "<circle cx=\"" << coord(px(s.x[i])) << "\" cy=\"" << coord(py(s.y[i]))
                << "\" r=\"2.2\" fill=\"" << color << "\"/>\n";
        const double ly = kT + 14 + 14 * static_cast<double>(si);
        out << "<line x1=\"" << kW - kR - 130 << "\" y1=\"" << ly - 4 << "\" x2=\"" << kW - kR - 110
            << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color << "\" stroke-width=\"1.5\"/>\n";
        out << "<text x=\"" << kW - kR - 105 << "\" y=\"" << ly
            << "\" font-family=\"sans-serif\" font-size=\"11\">" << xml_escape(s.name)
            << "</text>\n";
    }
    out << "</svg>\n";
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace subriem
