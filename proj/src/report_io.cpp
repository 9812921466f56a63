#include "qrgg/report_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "qrgg/errors.hpp"
#include "qrgg/experiment.hpp"

namespace qrgg {

double round_sig6(double value) {
  if (!std::isfinite(value) || value == 0.0) return value;
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.6g", value);
  return std::strtod(buffer, nullptr);
}

std::string format_sig6(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.6g", value);
  return buffer;
}

void write_file_atomic(const std::filesystem::path& path,
                       std::string_view contents) {
  std::filesystem::path temp = path;
  temp += ".tmp";
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot open " + temp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + temp.string());
  }
  std::error_code ec;
  std::filesystem::rename(temp, path, ec);
  if (ec) {
    std::filesystem::remove(temp);
    throw Error(ErrorCode::kIo, "cannot rename onto " + path.string() + ": " +
                                    ec.message());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string dump_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

std::string trials_csv(std::span<const Capacity> capacities) {
  std::string out = "trial,capacity\n";
  for (std::size_t i = 0; i < capacities.size(); ++i) {
    out += std::to_string(i) + "," + std::to_string(capacities[i]) + "\n";
  }
  return out;
}

std::string histogram_csv(const Histogram& histogram) {
  std::string out = "bin_lo,bin_hi,count\n";
  for (std::size_t i = 0; i < histogram.counts.size(); ++i) {
    out += format_sig6(histogram.edges[i]) + "," +
           format_sig6(histogram.edges[i + 1]) + "," +
           std::to_string(histogram.counts[i]) + "\n";
  }
  return out;
}

std::string histogram_svg(const Histogram& histogram, std::string_view title) {
  constexpr double kWidth = 640, kHeight = 400;
  constexpr double kLeft = 60, kRight = 20, kTop = 40, kBottom = 60;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  const std::size_t bins = histogram.counts.size();
  std::size_t peak = 1;
  for (std::size_t c : histogram.counts) peak = std::max(peak, c);

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' '
      << kHeight << "\">\n";
  svg << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"16\">"
      << title << "</text>\n";
  // axes
  svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"1\" height=\""
      << plot_h << "\" fill=\"black\"/>\n";
  svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop + plot_h << "\" width=\""
      << plot_w << "\" height=\"1\" fill=\"black\"/>\n";
  const double bar_w = bins > 0 ? plot_w / static_cast<double>(bins) : plot_w;
  for (std::size_t i = 0; i < bins; ++i) {
    const double h = plot_h * static_cast<double>(histogram.counts[i]) /
                     static_cast<double>(peak);
    const double x = kLeft + bar_w * static_cast<double>(i);
    svg << "<rect x=\"" << format_sig6(x) << "\" y=\""
        << format_sig6(kTop + plot_h - h) << "\" width=\""
        << format_sig6(bar_w * 0.9) << "\" height=\"" << format_sig6(h)
        << "\" fill=\"steelblue\"/>\n";
    svg << "<text x=\"" << format_sig6(x + bar_w * 0.45) << "\" y=\""
        << kTop + plot_h + 16
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"10\">"
        << format_sig6(histogram.edges[i]) << "</text>\n";
  }
  svg << "<text x=\"" << kLeft - 8 << "\" y=\"" << kTop + 4
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">"
      << peak << "</text>\n";
  svg << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 16
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\">min-cut capacity</text>\n";
  svg << "<text x=\"16\" y=\"" << kTop + plot_h / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
         "transform=\"rotate(-90 16 "
      << kTop + plot_h / 2 << ")\">frequency</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace qrgg
