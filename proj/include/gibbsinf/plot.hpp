#pragma once

#include <string>

namespace gibbsinf {

/// CSV-to-SVG conversion, no analysis logic. `lines` draws one polyline per
/// value of the group column; `heatmap` shades cells on the (x, y) grid.
struct PlotRequest {
    std::string input_csv;
    std::string output_svg;
    std::string mode = "lines";  // "lines" | "heatmap"
    std::string x_column;
    std::string y_column;
    std::string value_column;  // heatmap cell value
    std::string group_column;  // optional series split for lines
    bool log_y = false;
    int width = 720;
    int height = 480;
};

void render_plot(const PlotRequest& req);

}  // namespace gibbsinf
