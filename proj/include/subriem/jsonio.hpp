#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace subriem {

using OrderedJson = nlohmann::ordered_json;

/// Writes the document with two-space indentation and a trailing newline.
/// Field order and float formatting are deterministic, so identical inputs
/// produce byte-identical files.
void write_json_file(const std::string& path, const OrderedJson& j);

OrderedJson read_json_file(const std::string& path);

struct Csv {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

/// Numeric CSV with a header line; values are written round-trip exact
/// (shortest representation that parses back to the same double).
void write_csv_file(const std::string& path, const Csv& csv);

Csv read_csv_file(const std::string& path);

struct PlotSeries {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

/// Minimal deterministic line plot (no timestamps, no external assets).
void write_svg_plot(const std::string& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<PlotSeries>& series);

}  // namespace subriem
