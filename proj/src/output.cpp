#include "morph/output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace morph {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
  return out;
}

std::string fmt(double v, const char* format) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, v);
  return buf;
}

}  // namespace

std::string format_number(double v) { return fmt(v, "%.17g"); }

void write_profile_csv(const std::string& path, const Grid& g,
                       const std::array<Field, 5>& u) {
  std::ofstream out = open_out(path);
  out << "x,u1,u2,u3,u4,u5\n";
  for (int j = 0; j < g.num_nodes(); ++j) {
    out << format_number(g.nodes[j]);
    for (int i = 0; i < 5; ++i) out << ',' << format_number(u[i][j]);
    out << '\n';
  }
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  std::ofstream out = open_out(path);
  out << "t,sup3to5,l1_1,l1_2,l1_4,l1_5,bound6a,bound6b,dist_to_steady\n";
  for (const Snapshot& s : traj.snapshots) {
    out << format_number(s.t) << ',' << format_number(s.sup_345);
    for (double v : s.l1_1245) out << ',' << format_number(v);
    out << ',' << format_number(s.bound_sup) << ',' << format_number(s.bound_l1);
    out << ',' << format_number(s.has_ref ? s.dist_to_ref : std::nan(""));
    out << '\n';
  }
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

void write_profiles_svg(const std::string& path, const Grid& g,
                        const std::array<Field, 5>& u) {
  constexpr int kWidth = 800;
  constexpr int kHeight = 400;
  constexpr double kLeft = 50.0, kRight = 780.0, kTop = 40.0, kBottom = 370.0;
  static const char* kColors[5] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                   "#9467bd"};

  std::ofstream out = open_out(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << 5 * kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << 5 * kHeight << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  for (int i = 0; i < 5; ++i) {
    const double y0 = i * kHeight;
    const double peak = sup_norm(u[i]);
    out << "<g>\n";
    out << "<rect x=\"" << kLeft << "\" y=\"" << fmt(y0 + kTop, "%.6g") << "\" width=\""
        << fmt(kRight - kLeft, "%.6g") << "\" height=\"" << fmt(kBottom - kTop, "%.6g")
        << "\" fill=\"none\" stroke=\"#999\"/>\n";
    out << "<text x=\"" << kLeft << "\" y=\"" << fmt(y0 + 25.0, "%.6g")
        << "\" font-family=\"sans-serif\" font-size=\"16\">u" << (i + 1)
        << " / max|u" << (i + 1) << "|, max = " << fmt(peak, "%.6g") << "</text>\n";
    out << "<polyline fill=\"none\" stroke=\"" << kColors[i]
        << "\" stroke-width=\"1.5\" points=\"";
    for (int j = 0; j < g.num_nodes(); ++j) {
      const double xs = kLeft + (g.nodes[j] + 1.0) * 0.5 * (kRight - kLeft);
      const double val = peak > 0.0 ? u[i][j] / peak : 0.0;
      const double ys = y0 + kBottom - val * (kBottom - kTop);
      out << fmt(xs, "%.6g") << ',' << fmt(ys, "%.6g") << ' ';
    }
    out << "\"/>\n";
    // center line marks the source position
    out << "<line x1=\"" << fmt((kLeft + kRight) / 2.0, "%.6g") << "\" y1=\""
        << fmt(y0 + kTop, "%.6g") << "\" x2=\"" << fmt((kLeft + kRight) / 2.0, "%.6g")
        << "\" y2=\"" << fmt(y0 + kBottom, "%.6g")
        << "\" stroke=\"#ccc\" stroke-dasharray=\"4 4\"/>\n";
    out << "</g>\n";
  }
  out << "</svg>\n";
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace morph
