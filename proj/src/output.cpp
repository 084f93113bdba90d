#include "rabi/output.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string_view>

namespace rabi {

using nlohmann::json;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ec == std::errc() ? end : buf);
}

std::string to_csv(const CsvTable& table) {
  std::string out;
  for (std::size_t j = 0; j < table.header.size(); ++j) {
    out += (j ? "," : "") + table.header[j];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out += ',';
      out += format_double(row[j]);
    }
    out += '\n';
  }
  return out;
}

CsvTable csv_table(const ProbabilitySeries& series) {
  CsvTable table{{"t_coord", "p_predicted"}, {}};
  for (std::size_t j = 0; j < series.size(); ++j) table.rows.push_back({series.t[j], series.p[j]});
  return table;
}

CsvTable csv_table(const ExperimentResult& result) {
  struct Visitor {
    CsvTable operator()(const FigureResult& r) const {
      CsvTable table{{"t_coord", "p_predicted", "p_fit"}, {}};
      for (std::size_t j = 0; j < r.series.size(); ++j) {
        table.rows.push_back({r.series.t[j], r.series.p[j], r.fitted[j]});
      }
      return table;
    }
    CsvTable operator()(const GammaRatioResult& r) const {
      CsvTable table{{"n", "omega_n", "gamma_n", "ratio"}, {}};
      for (const auto& row : r.rows) {
        table.rows.push_back({static_cast<double>(row.n), row.omega_n, row.gamma_n, row.ratio});
      }
      return table;
    }
    CsvTable operator()(const OracleResult& r) const {
      CsvTable table{{"t_coord", "p_predicted", "p_montecarlo", "std_error"}, {}};
      for (std::size_t j = 0; j < r.predicted.size(); ++j) {
        table.rows.push_back(
            {r.predicted.t[j], r.predicted.p[j], r.montecarlo.p[j], r.std_error[j]});
      }
      return table;
    }
  };
  return std::visit(Visitor{}, result);
}

namespace {

bool parse_field(std::string_view field, double& out) {
  while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
  while (!field.empty() && field.back() == ' ') field.remove_suffix(1);
  const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), out);
  return ec == std::errc() && end == field.data() + field.size();
}

}  // namespace

ProbabilitySeries read_series_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read series file '" + path.string() + "'");
  ProbabilitySeries s;
  s.source = path.filename().string();
  std::string line;
  if (!std::getline(in, line)) throw IoError("series file '" + path.string() + "' is empty");
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string a, b;
    if (!std::getline(fields, a, ',') || !std::getline(fields, b, ',')) {
      throw IoError(path.string() + ":" + std::to_string(line_no) + ": expected two columns");
    }
    double tv = 0.0, pv = 0.0;
    if (!parse_field(a, tv) || !parse_field(b, pv)) {
      throw IoError(path.string() + ":" + std::to_string(line_no) + ": not a number");
    }
    s.t.push_back(tv);
    s.p.push_back(pv);
  }
  return s;
}

json config_json(const ExperimentConfig& cfg) {
  json free = json::array();
  for (auto p : cfg.fit.free) free.push_back(std::string(to_string(p)));
  json formats = json::array();
  for (auto f : cfg.output.formats) formats.push_back(std::string(to_string(f)));
  return {
      {"experiment", std::string(to_string(cfg.experiment))},
      {"system",
       {{"omega", cfg.system.omega},
        {"initial_state", std::string(to_string(cfg.system.initial_state))}}},
      {"distinguishable", {{"dt", cfg.distinguishable.dt}, {"eta", cfg.distinguishable.eta}}},
      {"indistinguishable",
       {{"dt", cfg.indistinguishable.dt},
        {"beta", cfg.indistinguishable.beta},
        {"max_events", cfg.indistinguishable.max_events}}},
      {"master_equation", {{"gamma_se", cfg.master_equation.gamma_se}}},
      {"grid", {{"t_max", cfg.grid.t_max}, {"n_points", cfg.grid.n_points}}},
      {"fit", {{"free", free}}},
      {"ladder",
       {{"n_max", cfg.ladder.n_max},
        {"lamb_dicke", cfg.ladder.lamb_dicke},
        {"omega0_dt", cfg.ladder.omega0_dt},
        {"window", cfg.ladder.window},
        {"n_points", cfg.ladder.n_points},
        {"baseline", std::string(to_string(cfg.ladder.baseline))}}},
      {"oracle",
       {{"n_systems", cfg.oracle.n_systems},
        {"chain_n", cfg.oracle.chain_n},
        {"chain_samples", cfg.oracle.chain_samples},
        {"z_limit", cfg.oracle.z_limit}}},
      {"seed", cfg.seed},
      {"output", {{"dir", cfg.output.dir}, {"prefix", cfg.output.prefix}, {"formats", formats}}},
  };
}

json fit_json(const DampedSinusoidFit& fit) {
  json free = json::array();
  for (auto p : fit.free_params) free.push_back(std::string(to_string(p)));
  return {{"gamma", fit.gamma},         {"omega_fit", fit.omega_fit},
          {"amplitude", fit.amplitude}, {"offset", fit.offset},
          {"phase", fit.phase},         {"residual_rms", fit.residual_rms},
          {"free_params", free},        {"iterations", fit.iterations},
          {"degenerate", fit.degenerate}};
}

namespace {

// Non-finite doubles have no JSON representation.
json number(double v) { return std::isfinite(v) ? json(v) : json(format_double(v)); }

json targets_json(const std::vector<AcceptanceTarget>& targets) {
  json out = json::array();
  for (const auto& t : targets) {
    out.push_back({{"name", t.name},
                   {"value", number(t.value)},
                   {"target", t.target},
                   {"tolerance", t.tolerance},
                   {"pass", t.pass()}});
  }
  return out;
}

}  // namespace

json summary_json(const ExperimentResult& result, const ExperimentConfig& cfg) {
  json j;
  j["parameters"] = config_json(cfg);
  j["all_pass"] = all_targets_pass(result);
  std::visit(
      [&j](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        j["targets"] = targets_json(r.targets);
        if constexpr (std::is_same_v<T, FigureResult>) {
          j["source"] = r.series.source;
          j["n_points"] = r.series.size();
          j["fit"] = fit_json(r.fit);
          j["gamma_over_omega"] = r.fit.gamma / r.omega;
        } else if constexpr (std::is_same_v<T, GammaRatioResult>) {
          j["baseline"] = std::string(to_string(r.baseline));
          j["dt"] = r.dt;
          json rows = json::array();
          for (std::size_t k = 0; k < r.rows.size(); ++k) {
            const auto& row = r.rows[k];
            rows.push_back({{"n", row.n},
                            {"omega_n", row.omega_n},
                            {"gamma_n", row.gamma_n},
                            {"ratio", row.ratio},
                            {"fit", fit_json(r.fits[k])}});
          }
          j["levels"] = rows;
          j["power_law"] = {{"exponent", r.power_law.exponent},
                            {"residual_rms", r.power_law.residual_rms},
                            {"degenerate", r.power_law.degenerate}};
        } else {
          j["n_points"] = r.predicted.size();
          j["max_abs_z"] = number(r.max_abs_z);
          json chains = json::array();
          for (const auto& c : r.chains) {
            chains.push_back({{"n", c.n},
                              {"table_value", c.table_value},
                              {"estimate", c.estimate},
                              {"std_error", c.std_error},
                              {"z", number(c.z)}});
          }
          j["chains"] = chains;
        }
      },
      result);
  return j;
}

namespace {

struct Frame {
  double x0, x1, y0, y1;
  double width = 720, height = 420, margin = 50;

  double px(double x) const {
    return margin + (x - x0) / (x1 - x0 == 0 ? 1 : x1 - x0) * (width - 2 * margin);
  }
  double py(double y) const {
    return height - margin - (y - y0) / (y1 - y0 == 0 ? 1 : y1 - y0) * (height - 2 * margin);
  }
};

std::string fmt(double v) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(2);
  os << v;
  return os.str();
}

void axes(std::ostringstream& os, const Frame& f, const std::string& xlabel,
          const std::string& ylabel, const std::string& title) {
  os << "<rect x=\"0\" y=\"0\" width=\"" << f.width << "\" height=\"" << f.height
     << "\" fill=\"white\"/>\n";
  os << "<line x1=\"" << f.margin << "\" y1=\"" << f.height - f.margin << "\" x2=\""
     << f.width - f.margin << "\" y2=\"" << f.height - f.margin << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << f.margin << "\" y1=\"" << f.margin << "\" x2=\"" << f.margin
     << "\" y2=\"" << f.height - f.margin << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << f.width / 2 << "\" y=\"" << f.height - 12
     << "\" text-anchor=\"middle\" font-size=\"13\">" << xlabel << "</text>\n";
  os << "<text x=\"14\" y=\"" << f.height / 2 << "\" text-anchor=\"middle\" font-size=\"13\" "
     << "transform=\"rotate(-90 14 " << f.height / 2 << ")\">" << ylabel << "</text>\n";
  os << "<text x=\"" << f.width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">"
     << title << "</text>\n";
  for (int k = 0; k <= 4; ++k) {
    const double x = f.x0 + (f.x1 - f.x0) * k / 4.0;
    const double y = f.y0 + (f.y1 - f.y0) * k / 4.0;
    os << "<text x=\"" << fmt(f.px(x)) << "\" y=\"" << f.height - f.margin + 16
       << "\" text-anchor=\"middle\" font-size=\"11\">" << fmt(x) << "</text>\n";
    os << "<text x=\"" << f.margin - 6 << "\" y=\"" << fmt(f.py(y) + 4)
       << "\" text-anchor=\"end\" font-size=\"11\">" << fmt(y) << "</text>\n";
  }
}

void dots(std::ostringstream& os, const Frame& f, const std::vector<double>& x,
          const std::vector<double>& y, const char* color) {
  for (std::size_t j = 0; j < x.size(); ++j) {
    os << "<circle cx=\"" << fmt(f.px(x[j])) << "\" cy=\"" << fmt(f.py(y[j]))
       << "\" r=\"2\" fill=\"" << color << "\"/>\n";
  }
}

void line(std::ostringstream& os, const Frame& f, const std::vector<double>& x,
          const std::vector<double>& y, const char* color) {
  os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
  for (std::size_t j = 0; j < x.size(); ++j) {
    os << (j ? " " : "") << fmt(f.px(x[j])) << ',' << fmt(f.py(y[j]));
  }
  os << "\"/>\n";
}

}  // namespace

std::string svg_plot(const ExperimentResult& result, const ExperimentConfig& cfg) {
  std::ostringstream os;
  const std::string title(to_string(cfg.experiment));
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\"420\">\n";
  std::visit(
      [&](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, FigureResult>) {
          std::vector<double> x;
          for (double t : r.series.t) x.push_back(t * r.omega);
          Frame f{0.0, x.empty() ? 1.0 : x.back(), 0.0, 1.0};
          axes(os, f, "omega t", "P_g", title);
          line(os, f, x, r.fitted, "#d62728");
          dots(os, f, x, r.series.p, "#1f77b4");
        } else if constexpr (std::is_same_v<T, GammaRatioResult>) {
          std::vector<double> n, ratio, law;
          double top = 1.0;
          for (const auto& row : r.rows) {
            n.push_back(row.n);
            ratio.push_back(row.ratio);
            law.push_back(std::pow(1.0 + row.n, 0.7));
            top = std::max({top, row.ratio, law.back()});
          }
          Frame f{0.0, std::max(1.0, n.empty() ? 1.0 : n.back()), 0.0, top * 1.05};
          axes(os, f, "n", "gamma_n / gamma_0", title);
          line(os, f, n, law, "#d62728");
          dots(os, f, n, ratio, "#1f77b4");
        } else {
          std::vector<double> x;
          for (double t : r.predicted.t) x.push_back(t * cfg.system.omega);
          Frame f{0.0, x.empty() ? 1.0 : x.back(), 0.0, 1.0};
          axes(os, f, "omega t", "P_g", title);
          line(os, f, x, r.predicted.p, "#d62728");
          dots(os, f, x, r.montecarlo.p, "#1f77b4");
        }
      },
      result);
  os << "</svg>\n";
  return os.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << content;
  out.close();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::vector<std::filesystem::path> emit_outputs(const ExperimentResult& result,
                                                const ExperimentConfig& cfg) {
  std::vector<std::filesystem::path> written;
  const std::filesystem::path base = std::filesystem::path(cfg.output.dir) / cfg.file_prefix();
  for (auto format : cfg.output.formats) {
    std::filesystem::path path = base;
    path += "." + std::string(to_string(format));
    switch (format) {
      case OutputFormat::Csv: write_text_file(path, to_csv(csv_table(result))); break;
      case OutputFormat::Json: write_text_file(path, summary_json(result, cfg).dump(2) + "\n"); break;
      case OutputFormat::Svg: write_text_file(path, svg_plot(result, cfg)); break;
    }
    written.push_back(path);
  }
  return written;
}

}  // namespace rabi
