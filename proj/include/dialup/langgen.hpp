#pragma once

// Corpus synthesis orchestration. Shell runs noise every source line with one
// language at a fixed radius; cloud runs partition the corpus into K
// contiguous chunks and noise chunk i with a fresh language at radius i.
// Per-line work parallelizes freely because all sampling decisions derive
// from named seeds, never from execution order.

#include <algorithm>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "dialup/errors.hpp"
#include "dialup/noisers.hpp"
#include "dialup/text.hpp"

namespace dialup {

// ---------------------------------------------------------------------------
// Bitext
// ---------------------------------------------------------------------------

struct Bitext {
  std::vector<std::string> src;
  std::vector<std::string> tgt;

  std::size_t size() const { return src.size(); }
  bool empty() const { return src.empty(); }
  void validate() const {
    if (src.size() != tgt.size()) throw LengthMismatch(src.size(), tgt.size());
  }
};

inline std::vector<std::string> load_lines(std::istream& in) {
  std::vector<std::string> lines;
  std::string raw;
  while (std::getline(in, raw)) lines.emplace_back(strip_cr(raw));
  return lines;
}

inline void save_lines(const std::vector<std::string>& lines, std::ostream& out) {
  for (const auto& line : lines) out << line << '\n';
}

inline Bitext load_bitext_tsv(std::istream& in) {
  Bitext bitext;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = strip_cr(raw);
    auto cols = split_tabs(line);
    if (cols.size() != 2) throw MalformedLine(line_no, "expected 'src<TAB>tgt'");
    bitext.src.emplace_back(cols[0]);
    bitext.tgt.emplace_back(cols[1]);
  }
  return bitext;
}

inline Bitext load_bitext_pair(std::istream& src_in, std::istream& tgt_in) {
  Bitext bitext;
  bitext.src = load_lines(src_in);
  bitext.tgt = load_lines(tgt_in);
  bitext.validate();
  return bitext;
}

inline void save_bitext_tsv(const Bitext& bitext, std::ostream& out) {
  bitext.validate();
  for (std::size_t i = 0; i < bitext.size(); ++i)
    out << bitext.src[i] << '\t' << bitext.tgt[i] << '\n';
}

// ---------------------------------------------------------------------------
// Radius schedules
// ---------------------------------------------------------------------------

struct RadiusSchedule {
  enum class Mode { shell, cloud };
  Mode mode = Mode::shell;
  NoiseDials shell = kShellDials;
  int hyperspheres = kCloudHyperspheres;  // K
  NoiseDials theta_max = kCloudThetaMax;

  static RadiusSchedule make_shell(NoiseDials dials = kShellDials) {
    RadiusSchedule s;
    s.mode = Mode::shell;
    s.shell = dials;
    return s;
  }
  static RadiusSchedule make_cloud(int K = kCloudHyperspheres,
                                   NoiseDials max = kCloudThetaMax) {
    RadiusSchedule s;
    s.mode = Mode::cloud;
    s.hyperspheres = K;
    s.theta_max = max;
    return s;
  }

  void validate() const {
    if (mode == Mode::shell) {
      shell.validate();
    } else {
      if (hyperspheres < 1) throw ValidationError("cloud needs K >= 1");
      theta_max.validate();
    }
  }
};

// Shell: the single configured radius. Cloud: theta_i = theta_max * i/K.
inline std::vector<NoiseDials> schedule_radii(const RadiusSchedule& sched) {
  sched.validate();
  if (sched.mode == RadiusSchedule::Mode::shell) return {sched.shell};
  std::vector<NoiseDials> out;
  out.reserve(static_cast<std::size_t>(sched.hyperspheres));
  for (int i = 1; i <= sched.hyperspheres; ++i) {
    double scale = static_cast<double>(i) / static_cast<double>(sched.hyperspheres);
    out.push_back({sched.theta_max.theta_p * scale, sched.theta_max.theta_m * scale,
                   sched.theta_max.theta_f * scale, sched.theta_max.theta_c * scale});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Run metadata sidecar
// ---------------------------------------------------------------------------

struct ChunkInfo {
  int radius = 1;       // 1-based hypersphere index
  int lang_index = 0;   // within-radius language index
  std::size_t line_begin = 0;
  std::size_t line_end = 0;  // exclusive
  std::vector<double> dials;  // 4 values for language runs, 2 for randaug
  std::string language_file;  // relative path; "-" when not applicable
};

struct RunMetadata {
  std::string mode;  // shell | cloud | randaug-shell | randaug-cloud
  std::uint64_t seed = 0;
  int hyperspheres = 1;
  int langs_per_radius = 1;
  std::vector<ChunkInfo> chunks;

  void save(std::ostream& out) const {
    out << "#dialup-run v1\n";
    out << "mode\t" << mode << '\n';
    out << "seed\t" << seed << '\n';
    out << "K\t" << hyperspheres << '\n';
    out << "langs_per_radius\t" << langs_per_radius << '\n';
    for (const ChunkInfo& c : chunks) {
      out << "chunk\t" << c.radius << '\t' << c.lang_index << '\t' << c.line_begin << '\t'
          << c.line_end << '\t';
      for (std::size_t i = 0; i < c.dials.size(); ++i) {
        if (i) out << ' ';
        out << format_double(c.dials[i]);
      }
      out << '\t' << (c.language_file.empty() ? "-" : c.language_file) << '\n';
    }
  }

  static RunMetadata load(std::istream& in) {
    RunMetadata meta;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
      ++line_no;
      std::string_view line = strip_cr(raw);
      if (line.empty() || line.front() == '#') continue;
      auto cols = split_tabs(line);
      try {
      if (cols[0] == "mode" && cols.size() == 2) {
        meta.mode = std::string(cols[1]);
      } else if (cols[0] == "seed" && cols.size() == 2) {
        meta.seed = std::stoull(std::string(cols[1]));
      } else if (cols[0] == "K" && cols.size() == 2) {
        meta.hyperspheres = std::stoi(std::string(cols[1]));
      } else if (cols[0] == "langs_per_radius" && cols.size() == 2) {
        meta.langs_per_radius = std::stoi(std::string(cols[1]));
      } else if (cols[0] == "chunk" && cols.size() == 7) {
        ChunkInfo c;
        c.radius = std::stoi(std::string(cols[1]));
        c.lang_index = std::stoi(std::string(cols[2]));
        c.line_begin = std::stoull(std::string(cols[3]));
        c.line_end = std::stoull(std::string(cols[4]));
        std::string dials(cols[5]);
        std::size_t pos = 0;
        while (pos < dials.size()) {
          std::size_t next = dials.find(' ', pos);
          if (next == std::string::npos) next = dials.size();
          c.dials.push_back(std::stod(dials.substr(pos, next - pos)));
          pos = next + 1;
        }
        if (cols[6] != "-") c.language_file = std::string(cols[6]);
        meta.chunks.push_back(std::move(c));
      } else {
        throw MalformedLine(line_no, "unrecognized metadata row");
      }
      } catch (const MalformedLine&) {
        throw;
      } catch (const std::exception&) {
        throw MalformedLine(line_no, "bad numeric field");
      }
    }
    if (meta.mode.empty()) throw DataError("metadata file has no mode row");
    return meta;
  }
};

// ---------------------------------------------------------------------------
// Parallel per-line application
// ---------------------------------------------------------------------------

namespace detail {
template <typename Fn>
void parallel_for_lines(std::size_t begin, std::size_t end, int threads, Fn&& fn) {
  if (end <= begin) return;
  std::size_t n = end - begin;
  if (threads <= 1 || n < 2) {
    for (std::size_t i = begin; i < end; ++i) fn(i);
    return;
  }
  std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::size_t per = n / workers, extra = n % workers;
  std::size_t at = begin;
  for (std::size_t w = 0; w < workers; ++w) {
    std::size_t take = per + (w < extra ? 1 : 0);
    std::size_t lo = at, hi = at + take;
    at = hi;
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}
}  // namespace detail

// ---------------------------------------------------------------------------
// Shell / cloud / sweep
// ---------------------------------------------------------------------------

struct ShellRun {
  Bitext noised;
  ArtificialLanguage language;
  RunMetadata metadata;
};

inline ShellRun make_shell_corpus(const Bitext& bitext, const NoiseDials& dials,
                                  const NoiserResources& res, std::uint64_t seed,
                                  int threads = 1) {
  bitext.validate();
  if (bitext.empty()) throw EmptyBitext();
  ShellRun run;
  run.language = sample_language(dials, res, seed);
  run.noised.src.resize(bitext.size());
  run.noised.tgt = bitext.tgt;
  detail::parallel_for_lines(0, bitext.size(), threads, [&](std::size_t i) {
    run.noised.src[i] = apply_language(bitext.src[i], run.language, res);
  });
  run.metadata.mode = "shell";
  run.metadata.seed = seed;
  run.metadata.hyperspheres = 1;
  ChunkInfo chunk;
  chunk.radius = 1;
  chunk.line_begin = 0;
  chunk.line_end = bitext.size();
  chunk.dials = {dials.theta_p, dials.theta_m, dials.theta_f, dials.theta_c};
  run.metadata.chunks.push_back(std::move(chunk));
  return run;
}

struct CloudRun {
  Bitext noised;
  std::vector<int> line_radius;              // per line, 1..K
  std::vector<ArtificialLanguage> languages; // chunk-major, then lang index
  RunMetadata metadata;
};

// Contiguous chunks of size floor(N/K) or ceil(N/K); chunk i gets a fresh
// language at radius i seeded by hash(seed, i).
inline CloudRun make_cloud_corpus(const Bitext& bitext, const RadiusSchedule& sched,
                                  const NoiserResources& res, std::uint64_t seed,
                                  int threads = 1, int langs_per_radius = 1) {
  bitext.validate();
  if (bitext.empty()) throw EmptyBitext();
  if (sched.mode != RadiusSchedule::Mode::cloud)
    throw ValidationError("cloud synthesis needs a cloud schedule");
  if (langs_per_radius < 1) throw ValidationError("langs_per_radius must be >= 1");
  std::vector<NoiseDials> radii = schedule_radii(sched);
  std::size_t n = bitext.size();
  std::size_t k = radii.size();
  if (n < k) throw TooFewLines(n, k);

  CloudRun run;
  run.noised.src.resize(n);
  run.noised.tgt = bitext.tgt;
  run.line_radius.resize(n);
  run.metadata.mode = "cloud";
  run.metadata.seed = seed;
  run.metadata.hyperspheres = static_cast<int>(k);
  run.metadata.langs_per_radius = langs_per_radius;

  std::size_t base = n / k, extra = n % k, at = 0;
  std::size_t langs = static_cast<std::size_t>(langs_per_radius);
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t take = base + (i < extra ? 1 : 0);
    std::size_t lo = at, hi = at + take;
    at = hi;
    const NoiseDials& dials = radii[i];
    std::size_t lang_base = run.languages.size();
    for (std::size_t l = 0; l < langs; ++l) {
      run.languages.push_back(sample_language(
          dials, res, derive_seed(seed, "cloud", static_cast<std::uint64_t>(i + 1),
                                  static_cast<std::uint64_t>(l))));
      ChunkInfo chunk;
      chunk.radius = static_cast<int>(i + 1);
      chunk.lang_index = static_cast<int>(l);
      chunk.line_begin = lo;
      chunk.line_end = hi;
      chunk.dials = {dials.theta_p, dials.theta_m, dials.theta_f, dials.theta_c};
      run.metadata.chunks.push_back(std::move(chunk));
    }
    detail::parallel_for_lines(lo, hi, threads, [&, lo, lang_base](std::size_t j) {
      const ArtificialLanguage& lang = run.languages[lang_base + (j - lo) % langs];
      run.noised.src[j] = apply_language(bitext.src[j], lang, res);
    });
    for (std::size_t j = lo; j < hi; ++j) run.line_radius[j] = static_cast<int>(i + 1);
  }
  return run;
}

struct SweepPoint {
  double theta = 0.0;
  Bitext noised;
  ArtificialLanguage language;
};

// One shell corpus per grid value along a single dimension, all other dials
// zero. The language seed is shared across grid points, so the affected unit
// sets are nested as theta grows.
inline std::vector<SweepPoint> run_theta_sweep(const Bitext& bitext, char dimension,
                                               const std::vector<double>& grid,
                                               const NoiserResources& res, std::uint64_t seed,
                                               int threads = 1) {
  if (dimension != 'p' && dimension != 'm' && dimension != 'f')
    throw ValidationError("sweep dimension must be one of p, m, f");
  std::vector<SweepPoint> points;
  points.reserve(grid.size());
  for (double theta : grid) {
    NoiseDials dials;
    if (dimension == 'p') dials.theta_p = theta;
    else if (dimension == 'm') dials.theta_m = theta;
    else dials.theta_f = theta;
    ShellRun run = make_shell_corpus(bitext, dials, res, seed, threads);
    SweepPoint point;
    point.theta = theta;
    point.noised = std::move(run.noised);
    point.language = std::move(run.language);
    points.push_back(std::move(point));
  }
  return points;
}

}  // namespace dialup
