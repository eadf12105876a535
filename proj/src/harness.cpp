#include "owf/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "owf/csv.hpp"

namespace owf::harness {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 == 1 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

// Runs task(i) for i in [0, count) on `jobs` threads. Each index writes its
// own slot, so the result never depends on scheduling.
template <typename Task>
void parallel_for(std::size_t count, int jobs, Task&& task) {
  const auto workers = static_cast<std::size_t>(std::max(1, jobs));
  if (workers == 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < std::min(workers, count); ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count && !failed; i = next++) {
        try {
          task(i);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      }
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
  return splitmix64(splitmix64(splitmix64(master) ^ a) ^ (b * 0xd6e8feb86659fd93ULL));
}

OctVector gen_signal(std::size_t n, Rng& rng) {
  if (n == 0) throw std::invalid_argument("signal length must be >= 1");
  std::normal_distribution<double> normal(0.0, 1.0);
  OctVector x(n);
  for (auto& v : x)
    for (std::size_t i = 0; i < 8; ++i) v[i] = normal(rng);
  const double s = 1.0 / norm(x);
  for (auto& v : x) v *= s;
  return x;
}

OctMatrix gen_sensing(std::size_t m, std::size_t n, Rng& rng, double component_std) {
  if (m == 0 || n == 0) throw std::invalid_argument("sensing matrix must be non-empty");
  std::normal_distribution<double> normal(0.0, component_std);
  OctMatrix a(m, n);
  for (std::size_t l = 0; l < m; ++l)
    for (auto& v : a.row(l))
      for (std::size_t i = 0; i < 8; ++i) v[i] = normal(rng);
  return a;
}

std::vector<double> measure(const OctMatrix& a, std::span<const Octonion> x) {
  if (a.cols() != x.size()) throw std::invalid_argument("dimension mismatch: measure");
  std::vector<double> y(a.rows());
  for (std::size_t l = 0; l < a.rows(); ++l) y[l] = herm_inner(a.row(l), x).norm_sq();
  return y;
}

std::vector<double> add_noise(std::span<const double> y, double snr_db, Rng& rng) {
  if (std::isnan(snr_db) || snr_db == -kNoiseless) throw std::invalid_argument("SNR must be finite or +inf");
  std::vector<double> out(y.begin(), y.end());
  if (std::isinf(snr_db) || y.empty()) return out;
  double energy = 0.0;
  for (double v : y) energy += v * v;
  const double variance = energy * std::pow(10.0, -snr_db / 10.0) / static_cast<double>(y.size());
  std::normal_distribution<double> normal(0.0, std::sqrt(variance));
  for (double& v : out) v = std::max(0.0, v + normal(rng));
  return out;
}

double psnr(const SpectralImage& ref, const SpectralImage& rec, double peak) {
  if (ref.width() != rec.width() || ref.height() != rec.height() || ref.samples().size() != rec.samples().size())
    throw std::invalid_argument("psnr: image shapes differ");
  if (ref.samples().empty()) throw std::invalid_argument("psnr: empty image");
  double se = 0.0;
  for (std::size_t i = 0; i < ref.samples().size(); ++i) {
    const double d = ref.samples()[i] - rec.samples()[i];
    se += d * d;
  }
  if (se == 0.0) return std::numeric_limits<double>::infinity();
  const double mse = se / static_cast<double>(ref.samples().size());
  return 10.0 * std::log10(peak * peak / mse);
}

std::size_t measurements_for(double ratio, std::size_t n) {
  if (!(ratio > 0.0)) throw std::invalid_argument("sampling ratio must be positive");
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(ratio * static_cast<double>(n))));
}

void ExperimentConfig::validate() const {
  if (n == 0) throw std::invalid_argument("n must be >= 1");
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (ratios.empty()) throw std::invalid_argument("at least one ratio is required");
  for (double r : ratios)
    if (!(r > 0.0)) throw std::invalid_argument("ratios must be positive");
  for (double s : snr_db)
    if (std::isnan(s)) throw std::invalid_argument("SNR values must be numbers");
  if (!(success_tol > 0.0)) throw std::invalid_argument("success_tol must be positive");
  solver.validate();
}

TrialRecord run_trial(const ExperimentConfig& cfg, std::size_t ratio_index, std::size_t snr_index, int trial) {
  TrialRecord rec;
  rec.ratio_index = ratio_index;
  rec.snr_index = snr_index;
  rec.trial = trial;
  rec.n = cfg.n;
  rec.ratio = cfg.ratios.at(ratio_index);
  rec.m = measurements_for(rec.ratio, cfg.n);
  rec.snr_db = cfg.snr_db.empty() ? kNoiseless : cfg.snr_db.at(snr_index);
  rec.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(trial), ratio_index);

  const auto start = std::chrono::steady_clock::now();
  Rng rng(rec.seed);
  const OctVector x = gen_signal(cfg.n, rng);
  const OctMatrix a = gen_sensing(rec.m, cfg.n, rng);
  std::vector<double> y = measure(a, x);
  if (!std::isinf(rec.snr_db)) {
    Rng noise_rng(derive_seed(rec.seed, 0x6e6f697365ULL, snr_index + 1));
    y = add_noise(y, rec.snr_db, noise_rng);
  }

  try {
    const SolveReport report = owf_solve(a, y, cfg.solver);
    rec.iters = report.iterations;
    rec.final_distance = distance(x, report.estimate);
  } catch (const std::runtime_error&) {
    rec.diverged = true;
    rec.iters = 0;
    rec.final_distance = std::numeric_limits<double>::infinity();
  } catch (const std::domain_error&) {
    // Degenerate measurements (all zero after clamping).
    rec.diverged = true;
    rec.final_distance = std::numeric_limits<double>::infinity();
  }
  rec.success = rec.final_distance <= cfg.success_tol;
  if (cfg.timing)
    rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

SweepResult success_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::size_t n_snr = std::max<std::size_t>(1, cfg.snr_db.size());
  const std::size_t n_cells = cfg.ratios.size() * n_snr;
  const auto trials = static_cast<std::size_t>(cfg.trials);

  SweepResult out;
  out.trials.resize(n_cells * trials);
  parallel_for(out.trials.size(), cfg.jobs, [&](std::size_t idx) {
    const std::size_t cell = idx / trials;
    out.trials[idx] = run_trial(cfg, cell / n_snr, cell % n_snr, static_cast<int>(idx % trials));
  });

  for (std::size_t cell = 0; cell < n_cells; ++cell) {
    SweepCell c;
    const TrialRecord& first = out.trials[cell * trials];
    c.ratio = first.ratio;
    c.snr_db = first.snr_db;
    c.m = first.m;
    c.trials = cfg.trials;
    std::vector<double> dists;
    int successes = 0;
    double iters = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
      const TrialRecord& r = out.trials[cell * trials + t];
      successes += r.success ? 1 : 0;
      dists.push_back(r.final_distance);
      iters += r.iters;
      c.runtime_ms += r.wall_ms;
    }
    c.success_rate = static_cast<double>(successes) / static_cast<double>(trials);
    c.mean_distance = std::accumulate(dists.begin(), dists.end(), 0.0) / static_cast<double>(trials);
    c.median_distance = median(dists);
    c.mean_iters = iters / static_cast<double>(trials);
    out.cells.push_back(c);
  }
  return out;
}

void write_trials_csv(std::ostream& out, std::span<const TrialRecord> rows) {
  out << "seed,n,m,snr_db,iters,final_distance,success,wall_ms\n";
  for (const auto& r : rows) {
    out << r.seed << ',' << r.n << ',' << r.m << ',' << format_double(r.snr_db) << ',' << r.iters << ','
        << format_double(r.final_distance) << ',' << (r.success ? 1 : 0) << ',' << format_double(r.wall_ms) << '\n';
  }
}

void write_cells_csv(std::ostream& out, std::span<const SweepCell> cells) {
  out << "ratio,m,snr_db,trials,success_rate,mean_distance,median_distance,mean_iters,runtime_ms\n";
  for (const auto& c : cells) {
    out << format_double(c.ratio) << ',' << c.m << ',' << format_double(c.snr_db) << ',' << c.trials << ','
        << format_double(c.success_rate) << ',' << format_double(c.mean_distance) << ','
        << format_double(c.median_distance) << ',' << format_double(c.mean_iters) << ','
        << format_double(c.runtime_ms) << '\n';
  }
}

ConvergenceResult convergence_trace(std::size_t n, double ratio, std::uint64_t seed, const OwfConfig& solver) {
  ConvergenceResult out;
  out.n = n;
  out.m = measurements_for(ratio, n);
  out.seed = derive_seed(seed, 0, 0);
  Rng rng(out.seed);
  const OctVector x = gen_signal(n, rng);
  const OctMatrix a = gen_sensing(out.m, n, rng);
  const std::vector<double> y = measure(a, x);
  out.report = owf_solve(a, y, solver, x);
  return out;
}

void write_trace_csv(std::ostream& out, const SolveReport& report) {
  out << "iter,objective,distance\n";
  for (std::size_t i = 0; i < report.objective.size(); ++i) {
    out << i << ',' << format_double(report.objective[i]) << ','
        << (i < report.distance.size() ? format_double(report.distance[i]) : std::string()) << '\n';
  }
}

std::vector<AmbiguityProbe> ambiguity_probe(std::size_t n, double ratio, int pairs, std::uint64_t seed) {
  if (pairs < 1) throw std::invalid_argument("pairs must be >= 1");
  const std::size_t m = measurements_for(ratio, n);
  Rng sensing_rng(derive_seed(seed, 0xa11ce, 0));
  const OctMatrix a = gen_sensing(m, n, sensing_rng);

  std::vector<AmbiguityProbe> out;
  for (int p = 0; p < pairs; ++p) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(p), 1));
    const OctVector x = gen_signal(n, rng);
    const Octonion z = gen_signal(1, rng)[0];
    const std::vector<double> y = measure(a, x);
    const std::vector<double> yz = measure(a, right_multiply(x, z));
    AmbiguityProbe probe;
    probe.pair = p;
    double scale = 0.0;
    for (std::size_t l = 0; l < m; ++l) {
      probe.max_abs_deviation = std::max(probe.max_abs_deviation, std::abs(yz[l] - y[l]));
      scale = std::max(scale, y[l]);
    }
    probe.max_rel_deviation = scale > 0.0 ? probe.max_abs_deviation / scale : 0.0;
    out.push_back(probe);
  }
  return out;
}

ImageMethod parse_image_method(const std::string& s) {
  if (s == "owf") return ImageMethod::kOwf;
  if (s == "gd") return ImageMethod::kGd;
  throw std::invalid_argument("unknown method: " + s);
}

ImageExperimentResult run_image_experiment(const SpectralImage& img, const ImageExperimentConfig& cfg) {
  img.validate();
  const auto start = std::chrono::steady_clock::now();
  ImageExperimentResult out;
  out.n = img.pixels();
  out.m = measurements_for(cfg.ratio, out.n);
  Rng rng(derive_seed(cfg.seed, 0x1a9e, 0));

  if (cfg.method == ImageMethod::kOwf) {
    const OctVector x = pack(img);
    const OctMatrix a = gen_sensing(out.m, out.n, rng);
    const std::vector<double> y = measure(a, x);
    const SolveReport report = owf_solve(a, y, cfg.owf);
    out.iterations = report.iterations;
    out.final_objective = report.objective.back();
    OctVector aligned = report.estimate;
    if (herm_inner(report.estimate, x).norm_sq() > 0.0)
      aligned = right_multiply(report.estimate, phase_align(report.estimate, x));
    out.reconstruction = unpack(aligned, img.width(), img.height(), img.wavelengths());
  } else {
    baseline::RealPrInstance inst;
    inst.x = Eigen::Map<const Eigen::VectorXd>(img.samples().data(), static_cast<Eigen::Index>(img.samples().size()));
    inst.a.resize(static_cast<Eigen::Index>(out.m), inst.x.size());
    std::normal_distribution<double> normal(0.0, 1.0);
    for (Eigen::Index r = 0; r < inst.a.rows(); ++r)
      for (Eigen::Index c = 0; c < inst.a.cols(); ++c) inst.a(r, c) = normal(rng);
    inst.y = (inst.a * inst.x).array().square().matrix();
    const Eigen::VectorXd est = baseline::gd_solve(inst, cfg.gd);
    out.iterations = cfg.gd.iters;
    out.final_objective = baseline::objective(est, inst.a, inst.y);
    const Eigen::VectorXd aligned = baseline::sign_align(est, inst.x);
    out.reconstruction = SpectralImage(img.width(), img.height());
    out.reconstruction.wavelengths() = img.wavelengths();
    std::copy(aligned.data(), aligned.data() + aligned.size(), out.reconstruction.samples().begin());
  }
  out.psnr_db = psnr(img, out.reconstruction, 1.0);
  out.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return out;
}

SpectralImage synthetic_image(std::uint32_t width, std::uint32_t height, std::uint64_t seed) {
  if (width == 0 || height == 0) throw std::invalid_argument("image must be non-empty");
  Rng rng(derive_seed(seed, 0x5ce9e, 0));
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  SpectralImage img(width, height);
  for (std::size_t b = 0; b < kBands; ++b) img.wavelengths()[b] = static_cast<float>(400.0 + 300.0 * b / 7.0);

  struct Blob {
    double cx, cy, radius;
    std::array<double, kBands> spectrum;
  };
  std::vector<Blob> blobs(4);
  for (auto& blob : blobs) {
    blob.cx = unit(rng) * width;
    blob.cy = unit(rng) * height;
    blob.radius = (0.15 + 0.25 * unit(rng)) * std::max(width, height);
    const double centre = unit(rng) * 7.0;
    const double spread = 1.0 + 3.0 * unit(rng);
    for (std::size_t b = 0; b < kBands; ++b) {
      const double d = (static_cast<double>(b) - centre) / spread;
      blob.spectrum[b] = 0.2 + 0.8 * std::exp(-0.5 * d * d);
    }
  }
  const double tilt = unit(rng);

  double peak = 0.0;
  for (std::uint32_t yy = 0; yy < height; ++yy)
    for (std::uint32_t xx = 0; xx < width; ++xx)
      for (std::size_t b = 0; b < kBands; ++b) {
        double v = 0.05 + 0.1 * (tilt * xx / width + (1.0 - tilt) * yy / height) * (1.0 + 0.1 * b);
        for (const auto& blob : blobs) {
          const double dx = (xx - blob.cx) / blob.radius;
          const double dy = (yy - blob.cy) / blob.radius;
          v += blob.spectrum[b] * std::exp(-(dx * dx + dy * dy));
        }
        img.at(b, xx, yy) = v;
        peak = std::max(peak, v);
      }
  for (double& v : img.samples()) v /= peak;
  return img;
}

std::vector<double> parse_number_list(const std::string& spec) {
  std::vector<double> out;
  std::stringstream ss(spec);
  std::string item;
  auto to_num = [](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("not a number: '" + s + "'");
    }
    if (used != s.size()) throw std::invalid_argument("not a number: '" + s + "'");
    return v;
  };
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      out.push_back(to_num(item));
      continue;
    }
    const double lo = to_num(item.substr(0, dots));
    std::string rest = item.substr(dots + 2);
    double step = 1.0;
    if (const auto colon = rest.find(':'); colon != std::string::npos) {
      step = to_num(rest.substr(colon + 1));
      rest = rest.substr(0, colon);
    }
    const double hi = to_num(rest);
    if (!(step > 0.0) || hi < lo) throw std::invalid_argument("bad range: '" + item + "'");
    const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
    for (long i = 0; i <= count; ++i) out.push_back(lo + static_cast<double>(i) * step);
  }
  if (out.empty()) throw std::invalid_argument("empty number list");
  return out;
}

}  // namespace owf::harness

namespace owf::harness {

AlgebraReport algebra_report(int pairs, std::uint64_t seed) {
  if (pairs < 1) throw std::invalid_argument("pairs must be >= 1");
  Rng rng(derive_seed(seed, 0xa1, 0));
  std::normal_distribution<double> normal(0.0, 1.0);
  auto draw = [&] {
    Octonion o;
    for (std::size_t i = 0; i < 8; ++i) o[i] = normal(rng);
    return o;
  };
  auto max_abs = [](const Octonion& d) {
    double worst = 0.0;
    for (std::size_t i = 0; i < 8; ++i) worst = std::max(worst, std::abs(d[i]));
    return worst;
  };

  AlgebraReport rep;
  rep.pairs = pairs;
  for (int p = 0; p < pairs; ++p) {
    const Octonion a = draw();
    const Octonion b = draw();
    const double na = a.norm();
    const double nb = b.norm();
    const Octonion ab = a * b;
    rep.norm_mult_rel = std::max(rep.norm_mult_rel, std::abs(ab.norm() - na * nb) / (na * nb));
    rep.left_alternative = std::max(rep.left_alternative, max_abs(a * ab - (a * a) * b));
    rep.right_alternative = std::max(rep.right_alternative, max_abs((b * a) * a - b * (a * a)));
    rep.representation = std::max(rep.representation, max_abs(ab - mul_reference(a, b)));
    const RealMat8 g = gimel(a);
    const RealMat8 gt = g.transposed();
    const RealMat8 gc = gimel(conjugate(a));
    const RealMat8 gtg = gt * g;
    const double n2 = a.norm_sq();
    for (std::size_t r = 0; r < 8; ++r)
      for (std::size_t c = 0; c < 8; ++c) {
        rep.gimel_transpose = std::max(rep.gimel_transpose, std::abs(gt(r, c) - gc(r, c)));
        const double want = r == c ? n2 : 0.0;
        rep.gimel_orthogonality = std::max(rep.gimel_orthogonality, std::abs(gtg(r, c) - want) / n2);
      }
  }

  const UnitTable t = unit_table();
  auto unit_mul = [&](const UnitProduct& u, std::size_t k) {
    const UnitProduct v = t[static_cast<std::size_t>(u.index)][k];
    return UnitProduct{u.sign * v.sign, v.index};
  };
  for (std::size_t i = 1; i < 8 && !rep.non_associative_triple; ++i)
    for (std::size_t j = 1; j < 8 && !rep.non_associative_triple; ++j)
      for (std::size_t k = 1; k < 8; ++k) {
        const UnitProduct left = unit_mul(t[i][j], k);   // (e_i e_j) e_k
        const UnitProduct jk = t[j][k];
        const UnitProduct right_raw = t[i][static_cast<std::size_t>(jk.index)];
        const UnitProduct right{jk.sign * right_raw.sign, right_raw.index};  // e_i (e_j e_k)
        if (left.index == right.index && left.sign == -right.sign) {
          rep.non_associative_triple = true;
          break;
        }
      }
  rep.anticommuting_units = true;
  for (std::size_t i = 1; i < 8; ++i)
    for (std::size_t j = 1; j < 8; ++j)
      if (i != j && !(t[i][j].index == t[j][i].index && t[i][j].sign == -t[j][i].sign))
        rep.anticommuting_units = false;
  return rep;
}

}  // namespace owf::harness
