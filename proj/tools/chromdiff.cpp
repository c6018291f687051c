// chromdiff: noise injection, denoising and benchmarking of color images.
//
// Exit codes: 0 success, 1 usage error, 2 I/O or format error, 3 divergence.

#include <CLI11.hpp>

#include <chromdiff/chromdiff.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

namespace {

using namespace chromdiff;

enum ExitCode { kOk = 0, kUsage = 1, kIo = 2, kDiverged = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const std::map<std::string, SchemeKind> kSchemes{
    {"proposed", SchemeKind::Proposed}, {"td", SchemeKind::TD}, {"pm", SchemeKind::PeronaMalik}};

struct DiffusionFlags {
  std::string scheme = "proposed";
  DiffusionConfig cfg;
};

void add_diffusion_flags(CLI::App* cmd, DiffusionFlags& f) {
  cmd->add_option("--sigma", f.cfg.sigma, "multigradient smoothing scale (pixels)")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--rho", f.cfg.tv.rho, "weight smoothing scale (pixels)")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--dt", f.cfg.dt, "explicit time step")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--iters", f.cfg.iterations, "diffusion iterations")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--tv-iters", f.cfg.tv.iterations, "TV flow steps for the weights")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--tv-dt", f.cfg.tv.dt, "TV flow step size")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--coupling-gain", f.cfg.coupling_gain, "gain on the chromatic coupling term")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--pm-kappa", f.cfg.pm_kappa, "Perona-Malik contrast parameter")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
}

std::string psnr_text(double db) { return format_number(db, 2); }

int cmd_noise(const std::string& input, const std::string& output, double sigma_n,
              std::uint64_t seed) {
  const PlanarImage clean = load(input);
  const PlanarImage noisy = add_gaussian_noise(clean, sigma_n, seed);
  save(noisy, output);
  std::cout << "psnr_db=" << psnr_text(psnr(noisy, clean)) << '\n';
  return kOk;
}

struct DenoiseArgs {
  std::string input, output, clean;
  std::string dump_weights, dump_coupling, dump_ssim;
  double noise = 0.0;
  std::uint64_t seed = 0;
  bool report_best = false;
};

int cmd_denoise(const DenoiseArgs& a, const DiffusionFlags& f) {
  const SchemeKind kind = kSchemes.at(f.scheme);
  f.cfg.validate();
  if (a.report_best && a.clean.empty()) throw UsageError("--report-best needs --clean");
  if (!a.dump_ssim.empty() && a.clean.empty()) throw UsageError("--dump-ssim needs --clean");

  PlanarImage u0 = load(a.input);
  if (a.noise > 0.0) u0 = add_gaussian_noise(u0, a.noise, a.seed);
  std::optional<PlanarImage> clean;
  if (!a.clean.empty()) {
    clean = load(a.clean);
    if (!clean->same_shape(u0)) throw UsageError("--clean image size differs from input");
  }

  int best_it = 0;
  double best_psnr = clean ? psnr(u0, *clean) : 0.0;
  IterationObserver observer;
  if (a.report_best)
    observer = [&](int it, const PlanarImage& u) {
      const double p = psnr(u, *clean);
      if (p > best_psnr) {
        best_psnr = p;
        best_it = it;
      }
    };
  const PlanarImage out = denoise(u0, f.cfg, kind, observer);
  save(out, a.output);

  if (!a.dump_weights.empty() || !a.dump_coupling.empty()) {
    const WeightField w = weights_from_input(u0, f.cfg.tv);
    if (!a.dump_weights.empty()) save(PlanarImage({w[0], w[1], w[2]}), a.dump_weights);
    if (!a.dump_coupling.empty()) {
      // Chromatic edge map: max_i |f_C(U_i)| on the input, min-max rescaled.
      ScalarField edges(u0.width(), u0.height());
      for (int c = 0; c < 3; ++c) {
        const auto fc = coupling_term(u0, w, c);
        auto e = edges.values();
        auto v = fc.values();
        for (std::size_t k = 0; k < e.size(); ++k) e[k] = std::max(e[k], std::abs(v[k]));
      }
      save(PlanarImage({rescale_unit(edges)}), a.dump_coupling);
    }
  }

  if (clean) {
    const QualityReport q = evaluate(out, *clean, !a.dump_ssim.empty());
    std::cout << "scheme=" << scheme_name(kind) << " iters=" << f.cfg.iterations
              << " psnr_db=" << psnr_text(q.psnr_db) << " mssim=" << format_number(q.mssim, 4)
              << '\n';
    if (a.report_best)
      std::cout << "best_iter=" << best_it << " best_psnr_db=" << psnr_text(best_psnr) << '\n';
    if (q.ssim_map) save(PlanarImage({rescale_unit(*q.ssim_map)}), a.dump_ssim);
  }
  return kOk;
}

int cmd_bench(const std::string& corpus, const std::string& out_csv, BenchOptions opt,
              const std::vector<std::string>& schemes) {
  opt.diffusion.validate();
  opt.schemes.clear();
  for (const auto& s : schemes) opt.schemes.push_back(kSchemes.at(s));
  const auto files = list_corpus(corpus);
  if (files.empty()) throw UsageError("no PNG or PPM images in '" + corpus + "'");

  const auto rows = run_bench(files, opt);
  std::ofstream os(out_csv);
  if (!os) throw IoError("cannot write '" + out_csv + "'");
  write_csv(os, rows);
  if (!os) throw IoError("write to '" + out_csv + "' failed");
  for (const auto& s : summarize(rows))
    std::cout << scheme_name(s.scheme) << ": mean psnr_db=" << format_number(s.mean_psnr_db, 3)
              << " mean mssim=" << format_number(s.mean_mssim, 4) << " (" << s.count
              << " images)\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chromatic-edge coupled vector diffusion for color image denoising"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "",
                 "TOML file with option defaults, one [noise]/[denoise]/[bench] table per subcommand");

  auto* noise = app.add_subcommand("noise", "add seeded Gaussian noise to an image");
  std::string n_in, n_out;
  double n_sigma = 20.0;
  std::uint64_t n_seed = 0;
  noise->add_option("input", n_in, "clean PNG or PPM")->required();
  noise->add_option("output", n_out, "noisy PNG")->required();
  noise->add_option("--sigma-n", n_sigma, "noise std on the 0-255 scale")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  noise->add_option("--seed", n_seed, "noise seed")->capture_default_str();

  auto* den = app.add_subcommand("denoise", "denoise one image");
  DenoiseArgs d;
  DiffusionFlags d_flags;
  den->add_option("input", d.input, "noisy PNG or PPM")->required();
  den->add_option("output", d.output, "denoised PNG")->required();
  den->add_option("--scheme", d_flags.scheme, "proposed | td | pm")
      ->capture_default_str()
      ->check(CLI::IsMember({"proposed", "td", "pm"}));
  add_diffusion_flags(den, d_flags);
  den->add_option("--noise", d.noise, "add noise of this std (0-255 scale) before denoising")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  den->add_option("--seed", d.seed, "seed for --noise")->capture_default_str();
  den->add_option("--clean", d.clean, "ground truth for PSNR/MSSIM");
  den->add_flag("--report-best", d.report_best, "also report the max-PSNR iteration");
  den->add_option("--dump-weights", d.dump_weights, "write the channel weight map (RGB)");
  den->add_option("--dump-coupling", d.dump_coupling, "write the chromatic edge map");
  den->add_option("--dump-ssim", d.dump_ssim, "write the combined SSIM map");

  auto* bench = app.add_subcommand("bench", "benchmark a corpus of clean images");
  std::string b_dir, b_csv;
  BenchOptions b_opt;
  DiffusionFlags b_flags;
  std::vector<std::string> b_schemes{"proposed", "td", "pm"};
  bench->add_option("corpus", b_dir, "directory of clean PNG/PPM images")->required();
  bench->add_option("csv", b_csv, "output CSV path")->required();
  add_diffusion_flags(bench, b_flags);
  bench->add_option("--sigma-n", b_opt.sigma_n, "noise std on the 0-255 scale")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  bench->add_option("--seed", b_opt.base_seed, "base seed, xor-ed with the image name hash")
      ->capture_default_str();
  bench->add_option("--schemes", b_schemes, "schemes to run")
      ->capture_default_str()
      ->check(CLI::IsMember({"proposed", "td", "pm"}));
  bench->add_flag("--report-best", b_opt.report_best, "score the max-PSNR iterate");
  bench->add_option("--jobs", b_opt.jobs, "images processed concurrently")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::FileError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*noise) return cmd_noise(n_in, n_out, n_sigma, n_seed);
    if (*den) return cmd_denoise(d, d_flags);
    b_opt.diffusion = b_flags.cfg;
    return cmd_bench(b_dir, b_csv, b_opt, b_schemes);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DivergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDiverged;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  }
}
