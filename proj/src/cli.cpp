#include "owf/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "owf/csv.hpp"
#include "owf/harness.hpp"
#include "owf/imaging.hpp"
#include "owf/solver.hpp"

namespace owf::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  return f;
}

// Non-finite doubles are written as strings; JSON has no literal for them.
ordered_json num(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

struct SolverFlags {
  int iters = 2000;
  std::string step_rule = "mean-normalized";
  double step_scale = 0.0;  // 0: rule default
  bool grad_averaging = false;
  double stop_tol = 0.0;
  std::string init_scale = "conventional";
  std::string spectral_form = "quadratic";

  void attach(CLI::App* app) {
    app->add_option("--iters", iters, "Gradient iterations")->check(CLI::PositiveNumber);
    app->add_option("--step-rule", step_rule, "paper | mean-normalized")
        ->check(CLI::IsMember({"paper", "mean-normalized"}));
    app->add_option("--step-scale", step_scale, "Step scale mu (default depends on the rule)")
        ->check(CLI::NonNegativeNumber);
    app->add_flag("--grad-averaging", grad_averaging, "Divide the gradient by m");
    app->add_option("--stop-tol", stop_tol, "Early stop when a step changes the objective by this fraction of its start value (0 = off)")
        ->check(CLI::NonNegativeNumber);
    app->add_option("--init-scale", init_scale, "paper | conventional")
        ->check(CLI::IsMember({"paper", "conventional"}));
    app->add_option("--spectral-form", spectral_form, "octonion | quadratic")
        ->check(CLI::IsMember({"octonion", "quadratic"}));
  }

  OwfConfig config() const {
    OwfConfig c;
    c.max_iters = iters;
    c.step_rule = parse_step_rule(step_rule);
    c.step_scale = step_scale > 0.0 ? step_scale : default_step_scale(c.step_rule);
    c.grad_averaging = grad_averaging;
    c.stop_tol = stop_tol;
    c.init_scale = init_scale == "paper" ? InitScale::kPaper : InitScale::kConventional;
    c.spectral_form = spectral_form == "octonion" ? SpectralForm::kOctonion : SpectralForm::kQuadratic;
    return c;
  }
};

struct SweepFlags {
  std::size_t n = 30;
  std::string ratios = "2..25";
  int trials = 50;
  std::uint64_t seed = 0;
  std::string snr;
  std::string out;
  std::string agg_out;
  int jobs = 1;
  double success_tol = 1e-5;
  bool timing = false;
  SolverFlags solver;

  void attach(CLI::App* app, bool noisy) {
    app->add_option("--n", n, "Signal length (octonion entries)")->check(CLI::PositiveNumber);
    app->add_option("--ratios", ratios, "Sampling ratios m/n: list '2,5,10' or range '2..25[:step]'");
    app->add_option("--trials", trials, "Trials per cell")->check(CLI::PositiveNumber);
    app->add_option("--seed", seed, "Master seed");
    if (noisy) {
      snr = "0..30:5";
      app->add_option("--snr", snr, "SNR values in dB (list or range)");
    }
    app->add_option("--out", out, "Per-trial CSV");
    app->add_option("--agg-out", agg_out, "Aggregate CSV (default: <out>_agg.csv)");
    app->add_option("--jobs", jobs, "Worker threads; output is identical for any value")->check(CLI::PositiveNumber);
    app->add_option("--success-tol", success_tol, "Success threshold on the distance")->check(CLI::PositiveNumber);
    app->add_flag("--timing", timing, "Record wall-clock times (makes output run-dependent)");
    solver.attach(app);
  }
};

int do_sweep(const SweepFlags& f, std::ostream& out) {
  harness::ExperimentConfig cfg;
  cfg.n = f.n;
  cfg.ratios = harness::parse_number_list(f.ratios);
  cfg.trials = f.trials;
  cfg.seed = f.seed;
  if (!f.snr.empty()) cfg.snr_db = harness::parse_number_list(f.snr);
  cfg.solver = f.solver.config();
  cfg.success_tol = f.success_tol;
  cfg.jobs = f.jobs;
  cfg.timing = f.timing;

  const harness::SweepResult res = harness::success_sweep(cfg);
  if (!f.out.empty()) {
    auto file = open_out(f.out);
    harness::write_trials_csv(file, res.trials);
    std::string agg = f.agg_out;
    if (agg.empty()) {
      fs::path p(f.out);
      agg = (p.parent_path() / (p.stem().string() + "_agg" + p.extension().string())).string();
    }
    auto agg_file = open_out(agg);
    harness::write_cells_csv(agg_file, res.cells);
  }
  for (const auto& c : res.cells) {
    out << "m/n=" << format_double(c.ratio) << " snr=" << format_double(c.snr_db)
        << " success=" << format_double(c.success_rate) << " median_d=" << format_double(c.median_distance) << '\n';
  }
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Octonion phase retrieval: Wirtinger flow solver and experiments", "owf"};
  app.require_subcommand(1, 1);

  // algebra-check
  int alg_pairs = 100000;
  std::uint64_t alg_seed = 0;
  std::string alg_out;
  std::size_t probe_n = 30;
  double probe_ratio = 20.0;
  int probe_pairs = 20;
  auto* alg = app.add_subcommand("algebra-check", "Check the algebra identities and probe the right-phase ambiguity");
  alg->add_option("--pairs", alg_pairs, "Random pairs")->check(CLI::PositiveNumber);
  alg->add_option("--seed", alg_seed, "Seed");
  alg->add_option("--out", alg_out, "JSON report");
  alg->add_option("--probe-n", probe_n, "Signal length for the ambiguity probe")->check(CLI::PositiveNumber);
  alg->add_option("--probe-ratio", probe_ratio, "m/n for the ambiguity probe")->check(CLI::PositiveNumber);
  alg->add_option("--probe-pairs", probe_pairs, "(x, z) pairs for the ambiguity probe")->check(CLI::PositiveNumber);

  SweepFlags sweep_flags;
  auto* sweep = app.add_subcommand("sweep", "Noiseless success-rate sweep over m/n");
  sweep_flags.attach(sweep, false);

  SweepFlags noisy_flags;
  noisy_flags.ratios = "20";
  auto* noisy = app.add_subcommand("noisy-sweep", "Success-rate and distance sweep over m/n and SNR");
  noisy_flags.attach(noisy, true);

  std::size_t conv_n = 30;
  double conv_ratio = 20.0;
  std::uint64_t conv_seed = 0;
  std::string conv_out;
  SolverFlags conv_solver;
  auto* conv = app.add_subcommand("converge", "Per-iteration objective and distance for one instance");
  conv->add_option("--n", conv_n, "Signal length")->check(CLI::PositiveNumber);
  conv->add_option("--ratio", conv_ratio, "m/n")->check(CLI::PositiveNumber);
  conv->add_option("--seed", conv_seed, "Seed");
  conv->add_option("--out", conv_out, "Trace CSV");
  conv_solver.attach(conv);

  std::string img_in;
  std::string img_out;
  std::string img_report;
  std::string img_signatures;
  std::string img_pixels = "15:15,10:10";
  std::string img_method = "owf";
  double img_ratio = 20.0;
  std::uint64_t img_seed = 0;
  double gd_step = 0.1;
  int lanczos_iters = 100;
  SolverFlags img_solver;
  auto* image = app.add_subcommand("image", "Recover an 8-band image from phaseless measurements");
  image->add_option("--in", img_in, "Input OCT8 image")->required()->check(CLI::ExistingFile);
  image->add_option("--ratio", img_ratio, "m/n")->check(CLI::PositiveNumber);
  image->add_option("--method", img_method, "owf | gd")->check(CLI::IsMember({"owf", "gd"}));
  image->add_option("--seed", img_seed, "Seed");
  image->add_option("--out", img_out, "Reconstructed OCT8 image");
  image->add_option("--report", img_report, "JSON report");
  image->add_option("--signatures", img_signatures, "Spectral signature CSV (reference and reconstruction)");
  image->add_option("--pixels", img_pixels, "Signature pixels as x:y,x:y");
  image->add_option("--gd-step-scale", gd_step, "Step scale for the gd method")->check(CLI::PositiveNumber);
  image->add_option("--lanczos-iters", lanczos_iters, "Lanczos steps for the gd initializer")
      ->check(CLI::PositiveNumber);
  img_solver.attach(image);

  std::uint32_t fx_w = 16;
  std::uint32_t fx_h = 16;
  std::uint64_t fx_seed = 0;
  std::string fx_out;
  auto* fixture = app.add_subcommand("make-fixture", "Write a synthetic 8-band OCT8 image");
  fixture->add_option("--width", fx_w, "Width")->check(CLI::PositiveNumber);
  fixture->add_option("--height", fx_h, "Height")->check(CLI::PositiveNumber);
  fixture->add_option("--seed", fx_seed, "Seed");
  fixture->add_option("--out", fx_out, "Output OCT8 path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (*alg) {
      const auto rep = harness::algebra_report(alg_pairs, alg_seed);
      const auto probe = harness::ambiguity_probe(probe_n, probe_ratio, probe_pairs, alg_seed);
      ordered_json j;
      j["pairs"] = rep.pairs;
      j["norm_mult_rel"] = rep.norm_mult_rel;
      j["left_alternative"] = rep.left_alternative;
      j["right_alternative"] = rep.right_alternative;
      j["representation"] = rep.representation;
      j["gimel_transpose"] = rep.gimel_transpose;
      j["gimel_orthogonality"] = rep.gimel_orthogonality;
      j["non_associative_triple"] = rep.non_associative_triple;
      j["anticommuting_units"] = rep.anticommuting_units;
      ordered_json p = ordered_json::array();
      double worst = 0.0;
      for (const auto& row : probe) {
        p.push_back({{"pair", row.pair},
                     {"max_abs_deviation", num(row.max_abs_deviation)},
                     {"max_rel_deviation", num(row.max_rel_deviation)}});
        worst = std::max(worst, row.max_rel_deviation);
      }
      j["ambiguity_probe"] = {{"n", probe_n}, {"ratio", probe_ratio}, {"pairs", p}};
      if (!alg_out.empty()) open_out(alg_out) << j.dump(2) << '\n';
      out << "algebra: norm_mult_rel=" << format_double(rep.norm_mult_rel)
          << " representation=" << format_double(rep.representation)
          << " non_associative=" << (rep.non_associative_triple ? "yes" : "no")
          << " probe_max_rel_dev=" << format_double(worst) << '\n';
      return 0;
    }
    if (*sweep) return do_sweep(sweep_flags, out);
    if (*noisy) return do_sweep(noisy_flags, out);
    if (*conv) {
      const auto res = harness::convergence_trace(conv_n, conv_ratio, conv_seed, conv_solver.config());
      if (!conv_out.empty()) {
        auto f = open_out(conv_out);
        harness::write_trace_csv(f, res.report);
      }
      out << "converge: n=" << res.n << " m=" << res.m << " iters=" << res.report.iterations
          << " final_d=" << format_double(res.report.distance.back()) << '\n';
      return 0;
    }
    if (*image) {
      const SpectralImage img = normalize_unit_range(load(img_in));
      harness::ImageExperimentConfig cfg;
      cfg.ratio = img_ratio;
      cfg.method = harness::parse_image_method(img_method);
      cfg.seed = img_seed;
      cfg.owf = img_solver.config();
      cfg.gd.iters = img_solver.iters;
      cfg.gd.step_scale = gd_step;
      cfg.gd.lanczos_iters = lanczos_iters;
      const auto res = harness::run_image_experiment(img, cfg);
      if (!img_out.empty()) save(res.reconstruction, img_out);
      if (!img_signatures.empty()) {
        std::vector<SignatureRow> rows;
        std::stringstream ss(img_pixels);
        std::string item;
        while (std::getline(ss, item, ',')) {
          const auto colon = item.find(':');
          if (colon == std::string::npos) throw std::invalid_argument("pixel must be x:y, got '" + item + "'");
          const auto px = static_cast<std::uint32_t>(std::stoul(item.substr(0, colon)));
          const auto py = static_cast<std::uint32_t>(std::stoul(item.substr(colon + 1)));
          rows.push_back({px, py, "ref", &img});
          rows.push_back({px, py, img_method, &res.reconstruction});
        }
        auto f = open_out(img_signatures);
        write_signatures_csv(f, rows);
      }
      if (!img_report.empty()) {
        ordered_json j;
        j["method"] = img_method;
        j["n"] = res.n;
        j["m"] = res.m;
        j["ratio"] = img_ratio;
        j["seed"] = img_seed;
        j["iterations"] = res.iterations;
        j["final_objective"] = num(res.final_objective);
        j["psnr_db"] = num(res.psnr_db);
        open_out(img_report) << j.dump(2) << '\n';
      }
      out << "image: method=" << img_method << " n=" << res.n << " m=" << res.m
          << " psnr_db=" << format_double(res.psnr_db) << '\n';
      return 0;
    }
    if (*fixture) {
      save(harness::synthetic_image(fx_w, fx_h, fx_seed), fx_out);
      out << "make-fixture: " << fx_w << "x" << fx_h << "x8 -> " << fx_out << '\n';
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

int run(int argc, char** argv) { return run(argc, argv, std::cout, std::cerr); }

}  // namespace owf::cli
