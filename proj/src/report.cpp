#include "ganloc/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <string>

namespace ganloc {

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Fractions are config values like 0.05 or 1.0; %g prints them the way they
// were written.
std::string frac(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

}  // namespace

void write_runs_csv(const std::filesystem::path& path,
                    const std::vector<RunRecord>& records) {
  std::ofstream out = open_out(path);
  out << "experiment,variant,real_fraction,synthetic_count,interpretation,"
         "rep,run_seed,accuracy,log_loss,wall_ms\n";
  for (const RunRecord& r : records) {
    out << r.experiment << ',' << r.variant << ',' << frac(r.real_fraction)
        << ',' << r.synthetic_count << ',' << r.interpretation << ',' << r.rep
        << ',' << r.run_seed << ',' << num(r.accuracy) << ','
        << num(r.log_loss) << ',' << r.wall_ms << '\n';
  }
  if (!out.good()) throw DataError("failed writing " + path.string());
}

void write_cells_csv(const std::filesystem::path& path,
                     const std::vector<CellStats>& cells) {
  std::ofstream out = open_out(path);
  out << "experiment,variant,real_fraction,synthetic_count,runs,"
         "mean_accuracy,std_accuracy,min_accuracy,max_accuracy,"
         "mean_log_loss,std_log_loss,min_log_loss,max_log_loss\n";
  for (const CellStats& c : cells) {
    out << c.experiment << ',' << c.variant << ',' << frac(c.real_fraction)
        << ',' << c.synthetic_count << ',' << c.runs << ','
        << num(c.mean_accuracy) << ',' << num(c.std_accuracy) << ','
        << num(c.min_accuracy) << ',' << num(c.max_accuracy) << ','
        << num(c.mean_log_loss) << ',' << num(c.std_log_loss) << ','
        << num(c.min_log_loss) << ',' << num(c.max_log_loss) << '\n';
  }
  if (!out.good()) throw DataError("failed writing " + path.string());
}

void write_table_markdown(const std::filesystem::path& path,
                          const std::vector<CellStats>& cells) {
  std::set<double> fractions;
  std::set<long> counts;
  std::map<std::pair<double, long>, const CellStats*> grid;
  for (const CellStats& c : cells) {
    fractions.insert(c.real_fraction);
    counts.insert(c.synthetic_count);
    grid[{c.real_fraction, c.synthetic_count}] = &c;
  }

  std::ofstream out = open_out(path);
  out << "| Synthetic |";
  for (double f : fractions) {
    out << " " << frac(f * 100) << "% real acc | " << frac(f * 100)
        << "% real log loss |";
  }
  out << "\n|---|";
  for (std::size_t i = 0; i < fractions.size(); ++i) out << "---|---|";
  out << "\n";
  for (long s : counts) {
    out << "| " << s << " |";
    for (double f : fractions) {
      auto it = grid.find({f, s});
      if (it == grid.end()) {
        out << " - | - |";
      } else {
        out << " " << fixed2(it->second->mean_accuracy) << " ± "
            << fixed2(it->second->std_accuracy) << " | "
            << fixed2(it->second->mean_log_loss) << " ± "
            << fixed2(it->second->std_log_loss) << " |";
      }
    }
    out << "\n";
  }
  if (!out.good()) throw DataError("failed writing " + path.string());
}

void write_sweep_svg(const std::filesystem::path& path,
                     const std::vector<CellStats>& cells) {
  struct Point {
    double x, y;
  };
  std::map<std::string, std::vector<Point>> series;
  for (const CellStats& c : cells) {
    series[c.variant].push_back({c.real_fraction, c.mean_accuracy});
  }
  for (auto& [name, pts] : series) {
    std::sort(pts.begin(), pts.end(),
              [](const Point& a, const Point& b) { return a.x < b.x; });
  }

  const double w = 720, h = 480;
  const double ml = 64, mr = 24, mt = 32, mb = 56;
  const double px = w - ml - mr, py = h - mt - mb;
  auto sx = [&](double f) { return ml + f * px; };
  auto sy = [&](double acc) { return mt + (100.0 - acc) / 100.0 * py; };

  std::ofstream out = open_out(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
      << "\" height=\"" << h << "\" viewBox=\"0 0 " << w << " " << h
      << "\">\n";
  out << "<rect width=\"" << w << "\" height=\"" << h
      << "\" fill=\"white\"/>\n";
  // axes
  out << "<line x1=\"" << ml << "\" y1=\"" << mt + py << "\" x2=\"" << ml + px
      << "\" y2=\"" << mt + py << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml
      << "\" y2=\"" << mt + py << "\" stroke=\"black\"/>\n";
  for (int pct = 0; pct <= 100; pct += 20) {
    out << "<text x=\"" << ml - 8 << "\" y=\"" << sy(pct) + 4
        << "\" text-anchor=\"end\" font-size=\"12\">" << pct << "</text>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << sy(pct) << "\" x2=\""
        << ml + px << "\" y2=\"" << sy(pct)
        << "\" stroke=\"#dddddd\" stroke-width=\"0.5\"/>\n";
  }
  for (int pct = 0; pct <= 100; pct += 10) {
    out << "<text x=\"" << sx(pct / 100.0) << "\" y=\"" << mt + py + 20
        << "\" text-anchor=\"middle\" font-size=\"12\">" << pct
        << "</text>\n";
  }
  out << "<text x=\"" << ml + px / 2 << "\" y=\"" << h - 12
      << "\" text-anchor=\"middle\" font-size=\"14\">real training data "
         "(%)</text>\n";
  out << "<text x=\"16\" y=\"" << mt + py / 2
      << "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 "
         "16 "
      << mt + py / 2 << ")\">test accuracy (%)</text>\n";

  const std::map<std::string, std::string> colors = {
      {"real_only", "#1f77b4"}, {"augmented", "#d62728"}};
  double legend_y = mt + 16;
  for (const auto& [name, pts] : series) {
    auto color_it = colors.find(name);
    const std::string color =
        color_it == colors.end() ? "#2ca02c" : color_it->second;
    out << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"2\" points=\"";
    for (const Point& p : pts) {
      out << sx(p.x) << ',' << sy(p.y) << ' ';
    }
    out << "\"/>\n";
    for (const Point& p : pts) {
      out << "<circle cx=\"" << sx(p.x) << "\" cy=\"" << sy(p.y)
          << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    }
    out << "<rect x=\"" << ml + 16 << "\" y=\"" << legend_y - 9
        << "\" width=\"18\" height=\"4\" fill=\"" << color << "\"/>\n";
    out << "<text x=\"" << ml + 40 << "\" y=\"" << legend_y
        << "\" font-size=\"12\">" << name << "</text>\n";
    legend_y += 18;
  }
  out << "</svg>\n";
  if (!out.good()) throw DataError("failed writing " + path.string());
}

}  // namespace ganloc
