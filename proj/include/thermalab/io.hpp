#pragma once

#include <string>
#include <vector>

namespace thermalab::io {

/// Shortest 17-significant-digit decimal; round-trips doubles exactly and is
/// locale-free, so equal runs emit equal bytes.
std::string fmt_double(double v);

/// CSV with a header row, '.' decimals, '\n' line endings.
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header);
    void add_row(const std::vector<double>& row);
    std::string str() const { return out_; }

private:
    std::size_t width_;
    std::string out_;
};

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    std::size_t col(const std::string& name) const; // throws IoError if absent
};

CsvTable read_csv(const std::string& path);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);
bool file_exists(const std::string& path);
void ensure_dir(const std::string& path);

/// Minimal deterministic SVG canvas: fixed float formatting, explicit draw
/// order.
class SvgCanvas {
public:
    SvgCanvas(double width, double height);
    void rect(double x, double y, double w, double h, const std::string& fill,
              const std::string& stroke = "none");
    void line(double x1, double y1, double x2, double y2, const std::string& stroke,
              double stroke_width = 1.0);
    void polyline(const std::vector<double>& xs, const std::vector<double>& ys,
                  const std::string& stroke, double stroke_width = 1.0);
    void circle(double cx, double cy, double r, const std::string& fill);
    void text(double x, double y, const std::string& s, int font_size = 12,
              const std::string& anchor = "start");
    std::string finish();

private:
    std::string body_;
    double width_, height_;
};

/// One panel with axes, tick labels and a title; data in user coordinates.
struct Panel {
    double x0, y0, w, h; // canvas placement
    double lo_x, hi_x, lo_y, hi_y;
    std::string title;

    double px(double x) const;
    double py(double y) const;
    void frame(SvgCanvas& svg) const;
};

} // namespace thermalab::io
