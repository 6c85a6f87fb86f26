// Copyright 2026 The propaganda-lens Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PLENS_SVG_HPP_
#define PLENS_SVG_HPP_

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "plens/stats.hpp"

namespace plens {

namespace detail {
inline std::string Fixed(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

inline std::string XmlEscape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}
}  // namespace detail

struct HistogramSeries {
  std::string name;
  std::string color;
  Histogram histogram;
};

// Overlaid, density-normalized bars for series sharing one binning, with
// axis labels and a legend. Output is a standalone SVG document.
inline void WriteHistogramSvg(std::ostream &out, const std::string &title,
                              const std::string &x_label,
                              const std::vector<HistogramSeries> &series) {
  constexpr double kWidth = 640, kHeight = 400;
  constexpr double kLeft = 60, kRight = 20, kTop = 40, kBottom = 50;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;

  // Fraction of each series per bin, so groups of different size compare.
  std::vector<std::vector<double>> fractions;
  double y_max = 0.0;
  for (const auto &s : series) {
    const double total = static_cast<double>(std::max<std::uint64_t>(1, s.histogram.Total()));
    std::vector<double> f;
    for (auto c : s.histogram.counts) {
      f.push_back(static_cast<double>(c) / total);
      y_max = std::max(y_max, f.back());
    }
    fractions.push_back(std::move(f));
  }
  if (y_max <= 0) y_max = 1;

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"16\">"
      << detail::XmlEscape(title) << "</text>\n";

  if (!series.empty()) {
    const auto &h0 = series.front().histogram;
    const std::size_t bins = h0.bin_count();
    const double bar_w = plot_w / static_cast<double>(bins);
    for (std::size_t s = 0; s < series.size(); ++s) {
      out << "<g fill=\"" << series[s].color << "\" fill-opacity=\"0.5\" stroke=\""
          << series[s].color << "\">\n";
      for (std::size_t i = 0; i < bins && i < fractions[s].size(); ++i) {
        const double h = fractions[s][i] / y_max * plot_h;
        out << "<rect x=\"" << detail::Fixed(kLeft + bar_w * static_cast<double>(i))
            << "\" y=\"" << detail::Fixed(kTop + plot_h - h) << "\" width=\""
            << detail::Fixed(bar_w) << "\" height=\"" << detail::Fixed(h) << "\"/>\n";
      }
      out << "</g>\n";
    }
    // Axes with five ticks each.
    out << "<g stroke=\"black\" font-family=\"sans-serif\" font-size=\"11\">\n";
    out << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + plot_h << "\" x2=\"" << kLeft + plot_w
        << "\" y2=\"" << kTop + plot_h << "\"/>\n";
    out << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
        << kTop + plot_h << "\"/>\n";
    for (int t = 0; t <= 4; ++t) {
      const double fx = t / 4.0;
      const double x = kLeft + fx * plot_w;
      const double y = kTop + plot_h - fx * plot_h;
      out << "<text stroke=\"none\" x=\"" << detail::Fixed(x) << "\" y=\""
          << detail::Fixed(kTop + plot_h + 16) << "\" text-anchor=\"middle\">"
          << detail::Fixed(h0.lo + fx * (h0.hi - h0.lo)) << "</text>\n";
      out << "<text stroke=\"none\" x=\"" << detail::Fixed(kLeft - 6) << "\" y=\""
          << detail::Fixed(y + 4) << "\" text-anchor=\"end\">" << detail::Fixed(fx * y_max, 3)
          << "</text>\n";
    }
    out << "</g>\n";
  }
  out << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 10
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
      << detail::XmlEscape(x_label) << "</text>\n";
  out << "<text transform=\"translate(14," << kTop + plot_h / 2
      << ") rotate(-90)\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"12\">fraction of accounts</text>\n";
  for (std::size_t s = 0; s < series.size(); ++s) {
    const double y = kTop + 8 + 18.0 * static_cast<double>(s);
    out << "<rect x=\"" << kWidth - kRight - 150 << "\" y=\"" << y << "\" width=\"12\" "
        << "height=\"12\" fill=\"" << series[s].color << "\" fill-opacity=\"0.5\"/>\n";
    out << "<text x=\"" << kWidth - kRight - 132 << "\" y=\"" << y + 10
        << "\" font-family=\"sans-serif\" font-size=\"12\">"
        << detail::XmlEscape(series[s].name) << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace plens

#endif  // PLENS_SVG_HPP_
