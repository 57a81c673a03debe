#include "thermalab/io.hpp"

#include "thermalab/errors.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace thermalab::io {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : width_(header.size()) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out_ += ',';
        out_ += header[i];
    }
    out_ += '\n';
}

void CsvWriter::add_row(const std::vector<double>& row) {
    if (row.size() != width_) throw IoError("CsvWriter: row width mismatch");
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out_ += ',';
        out_ += fmt_double(row[i]);
    }
    out_ += '\n';
}

std::size_t CsvTable::col(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw IoError("csv: missing column " + name);
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MissingArtifacts("missing artifact: " + path);
    CsvTable t;
    std::string line;
    if (!std::getline(in, line)) throw IoError("csv: empty file " + path);
    std::stringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) t.header.push_back(cell);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream rs(line);
        while (std::getline(rs, cell, ',')) row.push_back(std::stod(cell));
        if (row.size() != t.header.size()) throw IoError("csv: ragged row in " + path);
        t.rows.push_back(std::move(row));
    }
    return t;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << content;
    if (!out) throw IoError("short write to " + path);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MissingArtifacts("missing artifact: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

bool file_exists(const std::string& path) {
    return std::filesystem::exists(path);
}

void ensure_dir(const std::string& path) {
    std::error_code ec;
    std::filesystem::create_directories(path, ec);
    if (ec) throw IoError("cannot create directory " + path + ": " + ec.message());
}

namespace {
std::string fmt_px(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}
} // namespace

SvgCanvas::SvgCanvas(double width, double height) : width_(width), height_(height) {}

void SvgCanvas::rect(double x, double y, double w, double h, const std::string& fill,
                     const std::string& stroke) {
    body_ += "<rect x=\"" + fmt_px(x) + "\" y=\"" + fmt_px(y) + "\" width=\"" + fmt_px(w) +
             "\" height=\"" + fmt_px(h) + "\" fill=\"" + fill + "\" stroke=\"" + stroke +
             "\"/>\n";
}

void SvgCanvas::line(double x1, double y1, double x2, double y2, const std::string& stroke,
                     double stroke_width) {
    body_ += "<line x1=\"" + fmt_px(x1) + "\" y1=\"" + fmt_px(y1) + "\" x2=\"" + fmt_px(x2) +
             "\" y2=\"" + fmt_px(y2) + "\" stroke=\"" + stroke + "\" stroke-width=\"" +
             fmt_px(stroke_width) + "\"/>\n";
}

void SvgCanvas::polyline(const std::vector<double>& xs, const std::vector<double>& ys,
                         const std::string& stroke, double stroke_width) {
    if (xs.size() != ys.size() || xs.empty()) return;
    body_ += "<polyline fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"" +
             fmt_px(stroke_width) + "\" points=\"";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) body_ += ' ';
        body_ += fmt_px(xs[i]) + "," + fmt_px(ys[i]);
    }
    body_ += "\"/>\n";
}

void SvgCanvas::circle(double cx, double cy, double r, const std::string& fill) {
    body_ += "<circle cx=\"" + fmt_px(cx) + "\" cy=\"" + fmt_px(cy) + "\" r=\"" + fmt_px(r) +
             "\" fill=\"" + fill + "\"/>\n";
}

void SvgCanvas::text(double x, double y, const std::string& s, int font_size,
                     const std::string& anchor) {
    body_ += "<text x=\"" + fmt_px(x) + "\" y=\"" + fmt_px(y) + "\" font-size=\"" +
             std::to_string(font_size) + "\" font-family=\"sans-serif\" text-anchor=\"" +
             anchor + "\">" + s + "</text>\n";
}

std::string SvgCanvas::finish() {
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt_px(width_) +
           "\" height=\"" + fmt_px(height_) + "\" viewBox=\"0 0 " + fmt_px(width_) + " " +
           fmt_px(height_) + "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n" +
           body_ + "</svg>\n";
}

double Panel::px(double x) const {
    if (hi_x == lo_x) return x0;
    return x0 + (x - lo_x) / (hi_x - lo_x) * w;
}

double Panel::py(double y) const {
    if (hi_y == lo_y) return y0 + h;
    return y0 + h - (y - lo_y) / (hi_y - lo_y) * h;
}

void Panel::frame(SvgCanvas& svg) const {
    svg.rect(x0, y0, w, h, "none", "black");
    svg.text(x0 + 0.5 * w, y0 - 6.0, title, 13, "middle");
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3g", lo_x);
    svg.text(x0, y0 + h + 14.0, buf, 10, "start");
    std::snprintf(buf, sizeof(buf), "%.3g", hi_x);
    svg.text(x0 + w, y0 + h + 14.0, buf, 10, "end");
    std::snprintf(buf, sizeof(buf), "%.3g", lo_y);
    svg.text(x0 - 4.0, y0 + h, buf, 10, "end");
    std::snprintf(buf, sizeof(buf), "%.3g", hi_y);
    svg.text(x0 - 4.0, y0 + 10.0, buf, 10, "end");
}

} // namespace thermalab::io
