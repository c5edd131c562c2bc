// fractline: command-line driver for the fractal polyline analysis library.
//
// Exit codes: 0 success, 2 parse/io error, 3 insufficient data,
// 4 invalid arguments.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fractline/fractline.hpp"

namespace {

using namespace fractline;

GeometryFormat format_from_extension(const std::string& path) {
  const auto dot = path.rfind('.');
  const std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
  if (ext == "geojson" || ext == "json") return GeometryFormat::GeoJson;
  if (ext == "wkt") return GeometryFormat::Wkt;
  return GeometryFormat::CsvXy;
}

/// Input format: the --format flag overrides extension-based detection.
GeometryFormat resolve_format(const std::string& format, const std::string& path) {
  if (format == "csv") return GeometryFormat::CsvXy;
  if (format == "geojson") return GeometryFormat::GeoJson;
  if (format == "wkt") return GeometryFormat::Wkt;
  if (format != "auto") throw std::invalid_argument("unknown format '" + format + "'");
  return format_from_extension(path);
}

std::string file_stem(const std::string& path) {
  const auto slash = path.find_last_of("/\\");
  std::string name = slash == std::string::npos ? path : path.substr(slash + 1);
  const auto dot = name.rfind('.');
  if (dot != std::string::npos && dot > 0) name = name.substr(0, dot);
  return name;
}

void write_output(const std::string& path, const std::string& content) {
  if (path == "-") {
    std::fwrite(content.data(), 1, content.size(), stdout);
    return;
  }
  write_file(path, content);
}

void print_head_tail(const HeadTailResult& ht) {
  std::printf("ht_index      %d\n", ht.ht_index);
  std::printf("recurrences   %d\n", ht.recurrence_count());
  std::printf("breaks       ");
  for (double b : ht.breaks) std::printf(" %.6g", b);
  std::printf("\nclass_counts ");
  for (std::size_t c : ht.class_counts) std::printf(" %zu", c);
  std::printf("\n");
}

void print_fit(const PowerLawFit& fit) {
  std::printf("xmin    %.6g\n", fit.xmin);
  std::printf("alpha   %.4f\n", fit.alpha);
  std::printf("ks      %.4f\n", fit.ks);
  std::printf("p       %.3f%s\n", fit.p, fit.p_unstable ? "  (unstable: replicates < 100)" : "");
  std::printf("n_tail  %zu\n", fit.n_tail);
  std::printf("bootstrap  %d replicates at seed %llu\n", fit.replicates,
              static_cast<unsigned long long>(fit.seed));
}

int run(int argc, char** argv) {
  CLI::App app{"fractal analysis of polylines: bends, head/tail breaks, power laws, box counting"};
  app.require_subcommand(1);

  std::uint64_t seed = 42;
  double head_limit = 0.4;
  int replicates = 1000;
  bool as_json = false;
  std::string format = "auto";
  app.add_option("--seed", seed, "RNG seed for bootstrap replicates")->capture_default_str();
  app.add_option("--head-limit", head_limit, "head share limit for head/tail breaks")
      ->capture_default_str();
  app.add_option("--replicates", replicates, "bootstrap replicates for the power-law p value")
      ->capture_default_str();
  app.add_flag("--json", as_json, "emit machine-readable JSON");
  app.add_option("--format", format,
                 "input geometry format: auto, csv, geojson, wkt (outputs follow "
                 "their file extension)")
      ->capture_default_str();
  app.fallthrough();

  // gen
  auto* gen = app.add_subcommand("gen", "generate a curve (or the Zipf series)");
  std::string gen_curve;
  std::size_t gen_n = 1000;
  double gen_radius = 1.0;
  double gen_a = 2.0, gen_b = 1.0;
  bool gen_lower = false;
  double gen_growth = 0.1759;
  double gen_theta_max = 6.0 * std::numbers::pi;
  int gen_iterations = 4;
  std::string gen_out = "-";
  gen->add_option("--curve", gen_curve, "half-circle, half-ellipse, log-spiral, koch, zipf")
      ->required();
  gen->add_option("-n,--n", gen_n, "vertex count (or series length for zipf)")
      ->capture_default_str();
  gen->add_option("--radius", gen_radius, "half-circle radius / spiral initial radius")
      ->capture_default_str();
  gen->add_option("--a", gen_a, "ellipse semi-axis a")->capture_default_str();
  gen->add_option("--b", gen_b, "ellipse semi-axis b")->capture_default_str();
  gen->add_flag("--lower", gen_lower, "lower half-ellipse instead of upper");
  gen->add_option("--growth", gen_growth, "spiral growth rate b")->capture_default_str();
  gen->add_option("--theta-max", gen_theta_max, "spiral total angle")->capture_default_str();
  gen->add_option("--iterations", gen_iterations, "koch iterations")->capture_default_str();
  gen->add_option("-o,--output", gen_out, "output path ('-' = stdout)")->capture_default_str();

  // smooth
  auto* smooth = app.add_subcommand("smooth", "densify with an interpolating Bezier spline");
  std::string smooth_in, smooth_out = "-";
  std::size_t smooth_samples = 6;
  smooth->add_option("input", smooth_in, "geometry file")->required();
  smooth->add_option("--samples", smooth_samples, "samples per input segment")
      ->capture_default_str();
  smooth->add_option("-o,--output", smooth_out, "output path")->capture_default_str();

  // bends
  auto* bendsc = app.add_subcommand("bends", "decompose into the recursive bend hierarchy");
  std::string bends_in, bends_out = "-";
  bendsc->add_option("input", bends_in, "geometry file")->required();
  bendsc->add_option("-o,--output", bends_out, "output path")->capture_default_str();

  // ht
  auto* htc = app.add_subcommand("ht", "head/tail breaks of a number list");
  std::string ht_in;
  htc->add_option("input", ht_in, "file of numbers")->required();

  // fit-powerlaw
  auto* fitc = app.add_subcommand("fit-powerlaw", "power-law MLE fit of a number list");
  std::string fit_in;
  fitc->add_option("input", fit_in, "file of numbers")->required();

  // boxdim
  auto* boxc = app.add_subcommand("boxdim", "box-counting dimension of a curve");
  std::string box_in;
  int box_levels = 10;
  boxc->add_option("input", box_in, "geometry file")->required();
  boxc->add_option("--levels", box_levels, "number of dyadic levels")->capture_default_str();

  // generalize
  auto* genlz = app.add_subcommand("generalize", "keep only bends at or above a class level");
  std::string genlz_in, genlz_out = "-";
  int genlz_level = 2;
  genlz->add_option("input", genlz_in, "geometry file")->required();
  genlz->add_option("--level", genlz_level, "head/tail class level to keep")->required();
  genlz->add_option("-o,--output", genlz_out, "output path")->capture_default_str();

  // analyze
  auto* analyzec = app.add_subcommand("analyze", "full pipeline: Table-1 style report");
  std::string analyze_in, analyze_id, analyze_metric = "distance";
  int analyze_box_levels = 10;
  analyzec->add_option("input", analyze_in, "geometry file")->required();
  analyzec->add_option("--curve-id", analyze_id, "label for the report (default: file stem)");
  analyzec->add_option("--metric", analyze_metric, "bend size metric: distance or area")
      ->capture_default_str();
  analyzec->add_option("--box-levels", analyze_box_levels, "box-counting levels")
      ->capture_default_str();

  // plot-data
  auto* plot = app.add_subcommand("plot-data", "emit CSV for external plotting");
  std::string plot_in, plot_kind, plot_out;
  bool plot_values = false;
  plot->add_option("input", plot_in, "geometry file (or number list with --values)")->required();
  plot->add_option("--kind", plot_kind, "rank-size, ccdf-loglog, boxcount-loglog, classed-bends")
      ->required();
  plot->add_flag("--values", plot_values, "input is a number list, not geometry");
  plot->add_option("-o,--output", plot_out, "output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 4;
  }

  if (*gen) {
    if (gen_curve == "zipf") {
      std::string out;
      for (double v : gen_zipf_series(gen_n)) out += detail::format_double(v) + "\n";
      write_output(gen_out, out);
      return 0;
    }
    Polyline curve;
    if (gen_curve == "half-circle") {
      curve = gen_half_circle(gen_n, gen_radius);
    } else if (gen_curve == "half-ellipse") {
      curve = gen_half_ellipse(gen_n, gen_a, gen_b, !gen_lower);
    } else if (gen_curve == "log-spiral") {
      curve = gen_log_spiral(gen_n, gen_radius, gen_growth, gen_theta_max);
    } else if (gen_curve == "koch") {
      curve = gen_koch(gen_iterations);
    } else {
      throw std::invalid_argument("unknown curve '" + gen_curve + "'");
    }
    write_output(gen_out, to_text(curve, format_from_extension(gen_out)));
    return 0;
  }

  if (*smooth) {
    const Polyline curve = parse_geometry(smooth_in, resolve_format(format, smooth_in));
    const Polyline smoothed = smooth_bezier(curve, smooth_samples);
    write_output(smooth_out, to_text(smoothed, format_from_extension(smooth_out)));
    return 0;
  }

  if (*bendsc) {
    const Polyline curve = parse_geometry(bends_in, resolve_format(format, bends_in));
    BendDecomposition d = decompose(curve);
    const std::vector<double> sizes = bend_sizes(d);
    if (!sizes.empty()) d = assign_classes(d, head_tail_breaks(sizes, head_limit));
    std::string out = "chain,start,apex,end,depth,size,class\n";
    for (const Bend& b : d.bends) {
      out += std::to_string(b.chain) + "," + std::to_string(b.start) + "," +
             std::to_string(b.apex) + "," + std::to_string(b.end) + "," +
             std::to_string(b.depth) + "," + detail::format_double(b.size) + "," +
             std::to_string(b.cls) + "\n";
    }
    write_output(bends_out, out);
    return 0;
  }

  if (*htc) {
    const std::vector<double> values = parse_values(ht_in);
    const HeadTailResult ht = head_tail_breaks(values, head_limit);
    if (as_json) {
      nlohmann::ordered_json j = {{"ht_index", ht.ht_index},
                                  {"recurrence_count", ht.recurrence_count()},
                                  {"is_fractal_def3", ht.ht_index >= 3},
                                  {"breaks", ht.breaks},
                                  {"class_counts", ht.class_counts},
                                  {"head_limit", ht.head_limit}};
      std::printf("%s\n", j.dump(2).c_str());
    } else {
      print_head_tail(ht);
    }
    return 0;
  }

  if (*fitc) {
    const std::vector<double> values = parse_values(fit_in);
    const PowerLawFit result = fit(values, replicates, seed);
    if (as_json) {
      nlohmann::ordered_json j = {{"xmin", result.xmin},     {"alpha", result.alpha},
                                  {"ks", result.ks},         {"p", result.p},
                                  {"n_tail", result.n_tail}, {"replicates", result.replicates},
                                  {"seed", result.seed},     {"p_unstable", result.p_unstable}};
      std::printf("%s\n", j.dump(2).c_str());
    } else {
      print_fit(result);
    }
    return 0;
  }

  if (*boxc) {
    const Polyline curve = parse_geometry(box_in, resolve_format(format, box_in));
    const BoxCountEstimate est = box_dimension(curve, box_levels);
    if (as_json) {
      nlohmann::ordered_json levels = nlohmann::ordered_json::array();
      for (const auto& level : est.levels)
        levels.push_back({{"box_size", level.box_size}, {"count", level.count}});
      nlohmann::ordered_json j = {
          {"dimension", est.dimension}, {"r2", est.r2}, {"levels", levels}};
      std::printf("%s\n", j.dump(2).c_str());
    } else {
      for (const auto& level : est.levels)
        std::printf("s = %-12.6g boxes = %zu\n", level.box_size, level.count);
      std::printf("dimension = %.4f  (r2 = %.4f)\n", est.dimension, est.r2);
    }
    return 0;
  }

  if (*genlz) {
    const Polyline curve = parse_geometry(genlz_in, resolve_format(format, genlz_in));
    BendDecomposition d = decompose(curve);
    const std::vector<double> sizes = bend_sizes(d);
    if (sizes.empty()) throw insufficient_data_error("curve has no positive bends to rank");
    d = assign_classes(d, head_tail_breaks(sizes, head_limit));
    const Polyline coarse = generalize(curve, d, genlz_level);
    write_output(genlz_out, to_text(coarse, format_from_extension(genlz_out)));
    return 0;
  }

  if (*analyzec) {
    const Polyline curve = parse_geometry(analyze_in, resolve_format(format, analyze_in));
    AnalyzeOptions opts;
    opts.curve_id = analyze_id.empty() ? file_stem(analyze_in) : analyze_id;
    opts.head_limit = head_limit;
    opts.replicates = replicates;
    opts.box_levels = analyze_box_levels;
    if (analyze_metric == "area") {
      opts.metric = BendMetric::TriangleArea;
    } else if (analyze_metric != "distance") {
      throw std::invalid_argument("unknown metric '" + analyze_metric + "'");
    }
    const AnalysisReport report = analyze(curve, seed, opts);
    if (as_json) {
      std::fputs(report_json_text(report).c_str(), stdout);
    } else {
      std::printf("curve        %s\n", report.curve_id.c_str());
      std::printf("vertices     %zu\n", report.n_vertices);
      std::printf("bends        %zu\n", report.n_bends);
      print_head_tail(report.head_tail);
      std::printf("fractal(3rd) %s\n", report.is_fractal_def3 ? "yes" : "no");
      if (std::isfinite(report.alpha)) {
        print_fit(report.power_law);
      } else {
        std::printf("power law    skipped\n");
      }
      std::printf("box dim      %.4f  (r2 = %.4f)\n", report.box_dimension, report.r2);
      for (const std::string& flag : report.flags)
        std::printf("flag         %s\n", flag.c_str());
    }
    return 0;
  }

  if (*plot) {
    const std::string out_path = plot_out;
    if (plot_kind == "boxcount-loglog") {
      const Polyline curve = parse_geometry(plot_in, resolve_format(format, plot_in));
      write_output(out_path, plot_boxcount(box_dimension(curve)));
      return 0;
    }
    if (plot_kind == "classed-bends") {
      const Polyline curve = parse_geometry(plot_in, resolve_format(format, plot_in));
      BendDecomposition d = decompose(curve);
      const std::vector<double> sizes = bend_sizes(d);
      if (!sizes.empty()) d = assign_classes(d, head_tail_breaks(sizes, head_limit));
      write_output(out_path, plot_classed_bends(curve, d));
      return 0;
    }
    std::vector<double> values;
    if (plot_values) {
      values = parse_values(plot_in);
    } else {
      const Polyline curve = parse_geometry(plot_in, resolve_format(format, plot_in));
      values = bend_sizes(decompose(curve));
    }
    if (plot_kind == "rank-size") {
      write_output(out_path, plot_rank_size(values));
    } else if (plot_kind == "ccdf-loglog") {
      write_output(out_path, plot_ccdf(values));
    } else {
      throw std::invalid_argument("unknown plot kind '" + plot_kind + "'");
    }
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const fractline::parse_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const fractline::io_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const fractline::insufficient_data_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const fractline::size_limit_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 1;
  }
}
