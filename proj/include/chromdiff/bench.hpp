#pragma once

// Benchmark harness: noise a clean corpus, denoise with each scheme, score
// against the clean image and report CSV rows.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <cctype>
#include <cmath>
#include <exception>
#include <ostream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "diffusion.hpp"
#include "image_io.hpp"
#include "metrics.hpp"
#include "noise.hpp"

namespace chromdiff {

struct BenchRow {
  std::string image_name;
  SchemeKind scheme = SchemeKind::Proposed;
  double sigma_n = 20.0;
  std::uint64_t seed = 0;
  int iterations_used = 0;
  double psnr_db = 0.0;
  double mssim = 0.0;
  double wall_ms = 0.0;
};

struct BenchOptions {
  DiffusionConfig diffusion{};
  std::vector<SchemeKind> schemes{SchemeKind::Proposed, SchemeKind::TD, SchemeKind::PeronaMalik};
  double sigma_n = 20.0;
  std::uint64_t base_seed = 0;
  bool report_best = false;  // score the max-PSNR iterate instead of the last one
  unsigned jobs = 1;
};

inline constexpr std::string_view kCsvHeader = "image,scheme,sigma_n,seed,iters,psnr_db,mssim,wall_ms";

/// FNV-1a over the file name; gives each image a seed independent of corpus order.
constexpr std::uint64_t name_hash(std::string_view name) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : name) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::uint64_t image_seed(std::string_view name, std::uint64_t base_seed) noexcept {
  return name_hash(name) ^ base_seed;
}

/// PNG and PPM files directly inside `dir`, sorted by file name.
inline std::vector<std::filesystem::path> list_corpus(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw IoError("'" + dir.string() + "' is not a directory");
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    auto ext = e.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".png" || ext == ".ppm") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end(),
            [](const auto& a, const auto& b) { return a.filename() < b.filename(); });
  return files;
}

/// Run every configured scheme on one clean image.
inline std::vector<BenchRow> bench_image(const std::string& name, const PlanarImage& clean,
                                         const BenchOptions& opt) {
  const std::uint64_t seed = image_seed(name, opt.base_seed);
  const PlanarImage noisy = add_gaussian_noise(clean, opt.sigma_n, seed);
  std::vector<BenchRow> rows;
  for (SchemeKind kind : opt.schemes) {
    BenchRow row{name, kind, opt.sigma_n, seed, opt.diffusion.iterations, 0.0, 0.0, 0.0};
    const auto start = std::chrono::steady_clock::now();
    if (opt.report_best) {
      int best_it = 0;
      double best_psnr = psnr(noisy, clean);
      PlanarImage best = noisy;
      denoise(noisy, opt.diffusion, kind, [&](int it, const PlanarImage& u) {
        const double p = psnr(u, clean);
        if (p > best_psnr) {
          best_psnr = p;
          best_it = it;
          best = u;
        }
      });
      row.iterations_used = best_it;
      row.psnr_db = best_psnr;
      row.mssim = mssim(best, clean);
    } else {
      const PlanarImage out = denoise(noisy, opt.diffusion, kind);
      row.psnr_db = psnr(out, clean);
      row.mssim = mssim(out, clean);
    }
    row.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    rows.push_back(row);
  }
  return rows;
}

/// Bench a whole corpus. Images may run concurrently; rows come back in
/// corpus-name order, schemes in option order.
inline std::vector<BenchRow> run_bench(const std::vector<std::filesystem::path>& files,
                                       const BenchOptions& opt) {
  std::vector<std::vector<BenchRow>> per_image(files.size());
  std::vector<std::exception_ptr> errors(files.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < files.size(); i = next++) {
      try {
        per_image[i] = bench_image(files[i].filename().string(), load(files[i]), opt);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned jobs = std::clamp<unsigned>(opt.jobs, 1, std::max<std::size_t>(files.size(), 1));
  {
    std::vector<std::jthread> pool;
    for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<BenchRow> rows;
  for (auto& r : per_image) rows.insert(rows.end(), r.begin(), r.end());
  return rows;
}

inline std::string format_number(double v, int precision) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

struct SchemeSummary {
  SchemeKind scheme;
  int count = 0;
  double mean_psnr_db = 0.0;
  double mean_mssim = 0.0;
};

inline std::vector<SchemeSummary> summarize(const std::vector<BenchRow>& rows) {
  std::vector<SchemeSummary> out;
  for (const auto& r : rows) {
    auto it = std::find_if(out.begin(), out.end(), [&](const auto& s) { return s.scheme == r.scheme; });
    if (it == out.end()) it = out.insert(out.end(), SchemeSummary{r.scheme});
    ++it->count;
    it->mean_psnr_db += r.psnr_db;
    it->mean_mssim += r.mssim;
  }
  for (auto& s : out) {
    s.mean_psnr_db /= s.count;
    s.mean_mssim /= s.count;
  }
  return out;
}

/// Header, one line per row, then '#'-prefixed per-scheme means and metadata.
inline void write_csv(std::ostream& os, const std::vector<BenchRow>& rows) {
  os << kCsvHeader << '\n';
  for (const auto& r : rows)
    os << r.image_name << ',' << scheme_name(r.scheme) << ',' << format_number(r.sigma_n, 2) << ','
       << r.seed << ',' << r.iterations_used << ',' << format_number(r.psnr_db, 6) << ','
       << format_number(r.mssim, 6) << ',' << format_number(r.wall_ms, 1) << '\n';
  for (const auto& s : summarize(rows))
    os << "# mean," << scheme_name(s.scheme) << ",images=" << s.count
       << ",psnr_db=" << format_number(s.mean_psnr_db, 6)
       << ",mssim=" << format_number(s.mean_mssim, 6) << '\n';
  os << "# noise=" << kNoiseAlgorithm << '\n';
  os << "# mssim=mean of per-channel SSIM maps (gaussian window sigma 1.5, L=1, K1=0.01, K2=0.03)\n";
  os << "# psnr=10*log10(3/mse), mse summed over channels per pixel\n";
}

}  // namespace chromdiff
