// dialup: dialect-continuum data machinery.
//
// Subcommands wrap the library end to end: resource building, artificial
// language sampling, shell/cloud/randaug corpus synthesis, lexicon handling,
// D->M word swapping, and diagnostics. Every run is reproducible from the
// explicit --seed; nothing is time-derived.

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dialup/dialup.hpp"

namespace fs = std::filesystem;
using namespace dialup;

namespace {

constexpr std::uint64_t kDefaultSeed = 8191;

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open input file '" + path + "'");
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open output file '" + path + "'");
  return out;
}

NoiseDials parse_dials(const std::string& text) {
  NoiseDials d;
  double* slots[4] = {&d.theta_p, &d.theta_m, &d.theta_f, &d.theta_c};
  std::size_t pos = 0;
  for (int i = 0; i < 4; ++i) {
    std::size_t next = text.find(',', pos);
    bool last = i == 3;
    if (last != (next == std::string::npos))
      throw ValidationError("dials must be four comma-separated values p,m,f,c");
    if (next == std::string::npos) next = text.size();
    try {
      *slots[i] = std::stod(text.substr(pos, next - pos));
    } catch (const std::exception&) {
      throw ValidationError("bad dial value in '" + text + "'");
    }
    pos = next + 1;
  }
  d.validate();
  return d;
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t next = text.find(',', pos);
    if (next == std::string::npos) next = text.size();
    std::string item = text.substr(pos, next - pos);
    if (!item.empty()) {
      try {
        grid.push_back(std::stod(item));
      } catch (const std::exception&) {
        throw ValidationError("bad grid value '" + item + "'");
      }
    }
    pos = next + 1;
  }
  return grid;
}

GraphemePhonemeTable load_g2p(const std::string& path) {
  auto in = open_input(path);
  return GraphemePhonemeTable::load(in, fs::path(path).stem().string());
}

// The four files written by `resources build`, plus the G2P table.
struct LoadedResources {
  GraphemePhonemeTable g2p;
  PhonemeInventory inventory;
  SuffixInventory suffixes;
  FunctionWordList function_words;
  CharNgramModel charlm;
  Vocabulary vocab;

  static LoadedResources load(const std::string& g2p_path, const std::string& dir) {
    LoadedResources r{.g2p = load_g2p(g2p_path),
                      .inventory = {},
                      .suffixes = {},
                      .function_words = {},
                      .charlm = {},
                      .vocab = {}};
    r.inventory = r.g2p.inventory();
    {
      auto in = open_input(dir + "/function_words.txt");
      r.function_words = load_function_words(in);
    }
    {
      auto in = open_input(dir + "/suffixes.tsv");
      r.suffixes = load_suffixes(in);
    }
    {
      auto in = open_input(dir + "/charlm.tsv");
      r.charlm = CharNgramModel::load(in);
    }
    {
      auto in = open_input(dir + "/vocab.tsv");
      r.vocab = load_vocabulary(in);
    }
    return r;
  }

  NoiserResources view() const {
    NoiserResources res;
    res.inventory = &inventory;
    res.g2p = &g2p;
    res.suffixes = &suffixes;
    res.function_words = &function_words;
    res.charlm = &charlm;
    res.vocab = &vocab;
    return res;
  }
};

struct BitextOpts {
  std::string bitext;  // single TSV
  std::string src, tgt;
};

void add_bitext_options(CLI::App* cmd, BitextOpts& opts) {
  cmd->add_option("--bitext", opts.bitext, "line-aligned TSV: src<TAB>tgt");
  cmd->add_option("--src", opts.src, "source-side line file");
  cmd->add_option("--tgt", opts.tgt, "target-side line file");
}

Bitext load_bitext_opts(const BitextOpts& opts) {
  if (!opts.bitext.empty()) {
    if (!opts.src.empty() || !opts.tgt.empty())
      throw ValidationError("give either --bitext or --src/--tgt, not both");
    auto in = open_input(opts.bitext);
    return load_bitext_tsv(in);
  }
  if (opts.src.empty() || opts.tgt.empty())
    throw ValidationError("need --bitext or both --src and --tgt");
  auto src = open_input(opts.src);
  auto tgt = open_input(opts.tgt);
  return load_bitext_pair(src, tgt);
}

std::string language_filename(int radius, int lang_index) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "lang_r%02d_l%d.tsv", radius, lang_index);
  return buf;
}

void write_lines(const std::vector<std::string>& lines, const std::string& path) {
  auto out = open_output(path);
  save_lines(lines, out);
}

std::vector<std::string> slice(const std::vector<std::string>& lines, std::size_t lo,
                               std::size_t hi) {
  return std::vector<std::string>(lines.begin() + static_cast<std::ptrdiff_t>(lo),
                                  lines.begin() + static_cast<std::ptrdiff_t>(hi));
}

// ---------------------------------------------------------------------------
// Command bodies
// ---------------------------------------------------------------------------

struct ResourcesBuildOpts {
  std::string conllu, corpus, out_dir;
  bool lenient = false;
  std::size_t max_suffix_len = 4;
  std::uint64_t min_type_freq = 5;
  std::size_t top_k = 100;
  int ngram_order = 3;
  double smoothing = 0.01;
};

void cmd_resources_build(const ResourcesBuildOpts& o) {
  TaggedCorpus tagged;
  ConlluStats stats;
  {
    auto in = open_input(o.conllu);
    tagged = parse_conllu(in, !o.lenient, &stats);
  }
  FunctionWordList funcs = extract_function_words(tagged);
  Vocabulary vocab;
  {
    auto in = open_input(o.corpus);
    vocab = build_vocabulary(in);
  }
  if (vocab.empty()) throw EmptyVocabulary();
  SuffixInventory suffixes = extract_suffixes(vocab, o.max_suffix_len, o.min_type_freq, o.top_k);
  CharNgramModel charlm = CharNgramModel::train(vocab, o.ngram_order, o.smoothing);

  fs::create_directories(o.out_dir);
  {
    auto out = open_output(o.out_dir + "/function_words.txt");
    save_function_words(funcs, out);
  }
  {
    auto out = open_output(o.out_dir + "/vocab.tsv");
    save_vocabulary(vocab, out);
  }
  {
    auto out = open_output(o.out_dir + "/suffixes.tsv");
    save_suffixes(suffixes, out);
  }
  {
    auto out = open_output(o.out_dir + "/charlm.tsv");
    charlm.save(out);
  }
  std::cout << "sentences\t" << stats.sentences << '\n'
            << "tokens\t" << stats.tokens << '\n'
            << "skipped_lines\t" << stats.skipped_lines << '\n'
            << "function_words\t" << funcs.words.size() << '\n'
            << "vocabulary_types\t" << vocab.size() << '\n'
            << "suffixes\t" << suffixes.suffixes.size() << '\n'
            << "charlm_alphabet\t" << charlm.alphabet().size() << '\n';
}

struct LangSampleOpts {
  std::string g2p, resources, out;
  std::string dials = "0.05,0.3,0.5,0.001";
  std::uint64_t seed = kDefaultSeed;
};

void cmd_lang_sample(const LangSampleOpts& o) {
  LoadedResources R = LoadedResources::load(o.g2p, o.resources);
  ArtificialLanguage lang = sample_language(parse_dials(o.dials), R.view(), o.seed);
  auto out = open_output(o.out);
  lang.save(out);
  std::cout << "phonemes\t" << lang.phoneme_map.size() << '\n'
            << "suffixes\t" << lang.suffix_map.size() << '\n'
            << "function_words\t" << lang.function_word_map.size() << '\n';
}

struct NoiseOpts {
  BitextOpts io;
  std::string g2p, resources, out_dir;
  std::string dials = "0.05,0.3,0.5,0.001";     // shell
  std::string theta_max = "0.07,0.5,0.8,0.001"; // cloud
  int hyperspheres = kCloudHyperspheres;
  int langs_per_radius = 1;
  double rc = kRandaugShellDials.theta_rc;  // randaug
  double rw = kRandaugShellDials.theta_rw;
  double rc_max = kRandaugCloudMax.theta_rc;
  double rw_max = kRandaugCloudMax.theta_rw;
  std::uint64_t seed = kDefaultSeed;
  int threads = 1;
};

void emit_language_run(const Bitext& original, Bitext&& noised, RunMetadata&& metadata,
                       std::vector<ArtificialLanguage>&& languages,
                       const LoadedResources& R, const std::string& out_dir) {
  fs::create_directories(out_dir);
  write_lines(noised.src, out_dir + "/noised.src");
  write_lines(noised.tgt, out_dir + "/noised.tgt");
  std::vector<std::pair<int, NoiseRateReport>> reports;
  for (std::size_t i = 0; i < metadata.chunks.size(); ++i) {
    ChunkInfo& chunk = metadata.chunks[i];
    const ArtificialLanguage& lang = languages[i];
    chunk.language_file = language_filename(chunk.radius, chunk.lang_index);
    // The noise report consults content decisions; do it before serializing
    // so the recorded language file carries every decision the run made.
    if (metadata.langs_per_radius == 1) {
      NoiseRateReport report = noise_rate_report(
          slice(original.src, chunk.line_begin, chunk.line_end),
          slice(noised.src, chunk.line_begin, chunk.line_end), lang, R.view());
      reports.emplace_back(chunk.radius, std::move(report));
    }
    auto out = open_output(out_dir + "/" + chunk.language_file);
    lang.save(out);
  }
  {
    auto out = open_output(out_dir + "/metadata.tsv");
    metadata.save(out);
  }
  if (!reports.empty()) {
    auto out = open_output(out_dir + "/noise_report.tsv");
    save_noise_report(reports, out);
  }
  std::cout << "lines\t" << noised.size() << '\n'
            << "languages\t" << languages.size() << '\n';
}

void cmd_noise_shell(const NoiseOpts& o) {
  LoadedResources R = LoadedResources::load(o.g2p, o.resources);
  Bitext bitext = load_bitext_opts(o.io);
  ShellRun run = make_shell_corpus(bitext, parse_dials(o.dials), R.view(), o.seed, o.threads);
  std::vector<ArtificialLanguage> langs;
  langs.push_back(std::move(run.language));
  emit_language_run(bitext, std::move(run.noised), std::move(run.metadata), std::move(langs), R,
                    o.out_dir);
}

void cmd_noise_cloud(const NoiseOpts& o) {
  LoadedResources R = LoadedResources::load(o.g2p, o.resources);
  Bitext bitext = load_bitext_opts(o.io);
  RadiusSchedule sched = RadiusSchedule::make_cloud(o.hyperspheres, parse_dials(o.theta_max));
  CloudRun run = make_cloud_corpus(bitext, sched, R.view(), o.seed, o.threads,
                                   o.langs_per_radius);
  emit_language_run(bitext, std::move(run.noised), std::move(run.metadata),
                    std::move(run.languages), R, o.out_dir);
}

void cmd_noise_randaug(const NoiseOpts& o, bool cloud) {
  Vocabulary vocab;
  {
    auto in = open_input(o.resources + "/vocab.tsv");
    vocab = load_vocabulary(in);
  }
  RandaugResources rres = make_randaug_resources(vocab);
  Bitext bitext = load_bitext_opts(o.io);
  if (bitext.empty()) throw EmptyBitext();
  std::size_t n = bitext.size();

  RunMetadata metadata;
  metadata.seed = o.seed;
  std::vector<std::pair<std::size_t, std::size_t>> ranges;
  std::vector<RandaugDials> dials;
  if (cloud) {
    std::size_t k = static_cast<std::size_t>(o.hyperspheres);
    if (o.hyperspheres < 1) throw ValidationError("cloud needs K >= 1");
    if (n < k) throw TooFewLines(n, k);
    metadata.mode = "randaug-cloud";
    metadata.hyperspheres = o.hyperspheres;
    std::size_t base = n / k, extra = n % k, at = 0;
    for (std::size_t i = 0; i < k; ++i) {
      std::size_t take = base + (i < extra ? 1 : 0);
      ranges.emplace_back(at, at + take);
      double scale = static_cast<double>(i + 1) / static_cast<double>(k);
      dials.push_back({o.rc_max * scale, o.rw_max * scale});
      at += take;
    }
  } else {
    metadata.mode = "randaug-shell";
    metadata.hyperspheres = 1;
    ranges.emplace_back(0, n);
    dials.push_back({o.rc, o.rw});
  }

  Bitext noised;
  noised.src.resize(n);
  noised.tgt = bitext.tgt;
  for (std::size_t i = 0; i < ranges.size(); ++i) {
    RandaugDials rd = dials[i];
    rd.validate();
    for (std::size_t j = ranges[i].first; j < ranges[i].second; ++j) {
      Rng rng(derive_seed(o.seed, "randaug", static_cast<std::uint64_t>(j)));
      noised.src[j] = apply_randaug(bitext.src[j], rd, rres, rng);
    }
    ChunkInfo chunk;
    chunk.radius = static_cast<int>(i + 1);
    chunk.line_begin = ranges[i].first;
    chunk.line_end = ranges[i].second;
    chunk.dials = {rd.theta_rc, rd.theta_rw};
    metadata.chunks.push_back(std::move(chunk));
  }

  fs::create_directories(o.out_dir);
  write_lines(noised.src, o.out_dir + "/noised.src");
  write_lines(noised.tgt, o.out_dir + "/noised.tgt");
  {
    auto out = open_output(o.out_dir + "/metadata.tsv");
    metadata.save(out);
  }
  std::cout << "lines\t" << n << '\n';
}

struct SweepOpts {
  BitextOpts io;
  std::string g2p, resources, out_dir;
  std::string dim;
  std::string grid;
  std::uint64_t seed = kDefaultSeed;
  int threads = 1;
};

void cmd_sweep(const SweepOpts& o) {
  if (o.dim.size() != 1) throw ValidationError("--dim must be one of p, m, f");
  LoadedResources R = LoadedResources::load(o.g2p, o.resources);
  Bitext bitext = load_bitext_opts(o.io);
  std::vector<double> grid = parse_grid(o.grid);
  std::vector<SweepPoint> points =
      run_theta_sweep(bitext, o.dim[0], grid, R.view(), o.seed, o.threads);
  fs::create_directories(o.out_dir);
  auto summary = open_output(o.out_dir + "/summary.tsv");
  summary << "index\ttheta\tdimension\tuniverse\tchanged\trate\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    char dirname[32];
    std::snprintf(dirname, sizeof dirname, "point_%02zu", i);
    std::string dir = o.out_dir + "/" + dirname;
    fs::create_directories(dir);
    write_lines(points[i].noised.src, dir + "/noised.src");
    write_lines(points[i].noised.tgt, dir + "/noised.tgt");
    NoiseRateReport report =
        noise_rate_report(bitext.src, points[i].noised.src, points[i].language, R.view());
    {
      auto out = open_output(dir + "/language.tsv");
      points[i].language.save(out);
    }
    for (const DimensionRate& row : report.rows) {
      char rate[32];
      std::snprintf(rate, sizeof rate, "%.6f", row.rate);
      summary << i << '\t' << format_double(points[i].theta) << '\t' << row.dimension << '\t'
              << row.universe << '\t' << row.changed << '\t' << rate << '\n';
    }
  }
  std::cout << "points\t" << points.size() << '\n';
}

struct LexiconLoadOpts {
  std::string in, source, out;
};

void cmd_lexicon_load(const LexiconLoadOpts& o) {
  auto in = open_input(o.in);
  BilingualLexicon lex = load_lexicon(in, o.source);
  auto out = open_output(o.out);
  save_lexicon(lex, out);
  std::cout << "entries\t" << lex.size() << '\n';
}

struct LexiconMergeOpts {
  std::vector<std::string> inputs;
  std::string out;
};

void cmd_lexicon_merge(const LexiconMergeOpts& o) {
  std::vector<BilingualLexicon> lexicons;
  for (const std::string& path : o.inputs) {
    auto in = open_input(path);
    lexicons.push_back(load_lexicon_tsv(in));
  }
  BilingualLexicon merged = merge_lexicons(lexicons);
  auto out = open_output(o.out);
  save_lexicon(merged, out);
  std::cout << "entries\t" << merged.size() << '\n';
}

struct LexiconInduceOpts {
  BitextOpts io;
  int iterations = 10;
  double threshold = 0.1;
  std::string out;
};

void cmd_lexicon_induce(const LexiconInduceOpts& o) {
  Bitext bitext = load_bitext_opts(o.io);
  std::vector<double> trace;
  BilingualLexicon lex = induce_lexicon_ibm1(bitext, o.iterations, o.threshold, &trace);
  auto out = open_output(o.out);
  save_lexicon(lex, out);
  for (std::size_t i = 0; i < trace.size(); ++i) {
    char ll[48];
    std::snprintf(ll, sizeof ll, "%.6f", trace[i]);
    std::cout << "iteration\t" << i + 1 << '\t' << ll << '\n';
  }
  std::cout << "entries\t" << lex.size() << '\n';
}

struct LexiconProjectOpts {
  std::string lexicon, hrl_functions, out;
};

void cmd_lexicon_project(const LexiconProjectOpts& o) {
  BilingualLexicon lex;
  {
    auto in = open_input(o.lexicon);
    lex = load_lexicon_tsv(in);
  }
  FunctionWordList funcs;
  {
    auto in = open_input(o.hrl_functions);
    funcs = load_function_words(in);
  }
  CrlFunctionWordSet projected = project_function_words(lex, funcs);
  auto out = open_output(o.out);
  save_crl_function_words(projected, out);
  std::cout << "crl_function_words\t" << projected.words.size() << '\n';
}

struct DtmSwapOpts {
  std::string mode = "func";
  std::string in, lexicon, crl_functions, out;
  std::string report, trace;
};

void cmd_dtm_swap(const DtmSwapOpts& o) {
  SwapMode mode = parse_swap_mode(o.mode);
  std::vector<std::string> lines;
  {
    auto in = open_input(o.in);
    lines = load_lines(in);
  }
  BilingualLexicon lex;
  {
    auto in = open_input(o.lexicon);
    lex = load_lexicon_tsv(in);
  }
  CrlFunctionWordSet funcs;
  {
    auto in = open_input(o.crl_functions);
    funcs = load_crl_function_words(in);
  }
  auto [swapped, report] = swap_corpus(lines, lex, funcs, mode);
  write_lines(swapped, o.out);
  if (!o.report.empty()) {
    auto out = open_output(o.report);
    save_swap_report(report, mode, out);
  } else {
    save_swap_report(report, mode, std::cout);
  }
  if (!o.trace.empty()) {
    auto out = open_output(o.trace);
    save_swap_trace(report, out);
  }
}

struct ChrfOpts {
  std::string hyp, ref;
  int max_n = 6;
  double beta = 2.0;
};

void cmd_metrics_chrf(const ChrfOpts& o) {
  std::vector<std::string> hyp, ref;
  {
    auto in = open_input(o.hyp);
    hyp = load_lines(in);
  }
  {
    auto in = open_input(o.ref);
    ref = load_lines(in);
  }
  double score = corpus_chrf(hyp, ref, {o.max_n, o.beta});
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", score);
  std::cout << buf << '\n';
}

struct NoiseReportOpts {
  std::string original, noised, g2p, resources;
  std::string language;  // single-language mode
  std::string metadata;  // per-chunk mode
  std::string out;
};

void cmd_metrics_noise_report(const NoiseReportOpts& o) {
  if (o.language.empty() == o.metadata.empty())
    throw ValidationError("give exactly one of --language or --metadata");
  LoadedResources R = LoadedResources::load(o.g2p, o.resources);
  std::vector<std::string> original, noised;
  {
    auto in = open_input(o.original);
    original = load_lines(in);
  }
  {
    auto in = open_input(o.noised);
    noised = load_lines(in);
  }
  std::vector<std::pair<int, NoiseRateReport>> reports;
  if (!o.language.empty()) {
    auto in = open_input(o.language);
    ArtificialLanguage lang = ArtificialLanguage::load(in);
    reports.emplace_back(1, noise_rate_report(original, noised, lang, R.view()));
  } else {
    RunMetadata meta;
    {
      auto in = open_input(o.metadata);
      meta = RunMetadata::load(in);
    }
    if (meta.mode != "shell" && meta.mode != "cloud")
      throw ValidationError("noise report needs an artificial-language run, got mode '" +
                            meta.mode + "'");
    if (meta.langs_per_radius != 1)
      throw ValidationError("noise report supports langs_per_radius=1 only");
    fs::path base = fs::path(o.metadata).parent_path();
    for (const ChunkInfo& chunk : meta.chunks) {
      if (chunk.language_file.empty())
        throw DataError("metadata chunk has no language file");
      if (chunk.line_end > original.size() || chunk.line_end > noised.size())
        throw LengthMismatch(original.size(), chunk.line_end);
      auto in = open_input((base / chunk.language_file).string());
      ArtificialLanguage lang = ArtificialLanguage::load(in);
      reports.emplace_back(chunk.radius,
                           noise_rate_report(slice(original, chunk.line_begin, chunk.line_end),
                                             slice(noised, chunk.line_begin, chunk.line_end),
                                             lang, R.view()));
    }
  }
  if (!o.out.empty()) {
    auto out = open_output(o.out);
    save_noise_report(reports, out);
  } else {
    save_noise_report(reports, std::cout);
  }
}

struct FuncShareOpts {
  std::string corpus, functions;
};

void cmd_metrics_func_share(const FuncShareOpts& o) {
  std::vector<std::string> lines;
  {
    auto in = open_input(o.corpus);
    lines = load_lines(in);
  }
  FunctionWordList funcs;
  {
    auto in = open_input(o.functions);
    funcs = load_function_words(in);
  }
  double share = function_word_share(lines, funcs);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", share);
  std::cout << buf << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dialup: synthetic dialect-continuum data machinery"};
  app.set_config("--config", "", "read options from an INI file");
  app.require_subcommand(1);

  // resources
  auto* resources = app.add_subcommand("resources", "build HRL-side resources");
  resources->require_subcommand(1);
  ResourcesBuildOpts rb;
  auto* rbuild = resources->add_subcommand("build", "build all resource files");
  rbuild->add_option("--conllu", rb.conllu, "tagged corpus (CoNLL-U)")->required();
  rbuild->add_option("--corpus", rb.corpus, "raw HRL corpus, one sentence per line")->required();
  rbuild->add_option("--out-dir", rb.out_dir, "output directory")->required();
  rbuild->add_flag("--lenient", rb.lenient, "skip malformed CoNLL-U lines instead of failing");
  rbuild->add_option("--max-suffix-len", rb.max_suffix_len, "longest mined suffix");
  rbuild->add_option("--min-type-freq", rb.min_type_freq, "minimum suffix type frequency");
  rbuild->add_option("--top-k", rb.top_k, "suffix inventory size");
  rbuild->add_option("--ngram-order", rb.ngram_order, "character n-gram order");
  rbuild->add_option("--smoothing", rb.smoothing, "add-k smoothing constant");
  rbuild->callback([&] { cmd_resources_build(rb); });

  // lang
  auto* lang = app.add_subcommand("lang", "artificial languages");
  lang->require_subcommand(1);
  LangSampleOpts ls;
  auto* lsample = lang->add_subcommand("sample", "sample a language and write it");
  lsample->add_option("--g2p", ls.g2p, "grapheme/phoneme table")->required();
  lsample->add_option("--resources", ls.resources, "resource directory")->required();
  lsample->add_option("--dials", ls.dials, "theta p,m,f,c");
  lsample->add_option("--seed", ls.seed, "random seed");
  lsample->add_option("--out", ls.out, "language file to write")->required();
  lsample->callback([&] { cmd_lang_sample(ls); });

  // noise
  auto* noise = app.add_subcommand("noise", "synthesize noised bitext");
  noise->require_subcommand(1);
  NoiseOpts no_shell, no_cloud, no_rshell, no_rcloud;
  auto add_noise_common = [](CLI::App* cmd, NoiseOpts& o, bool needs_g2p) {
    add_bitext_options(cmd, o.io);
    if (needs_g2p) cmd->add_option("--g2p", o.g2p, "grapheme/phoneme table")->required();
    cmd->add_option("--resources", o.resources, "resource directory")->required();
    cmd->add_option("--out-dir", o.out_dir, "output directory")->required();
    cmd->add_option("--seed", o.seed, "random seed");
    cmd->add_option("--threads", o.threads, "worker threads");
  };
  auto* nshell = noise->add_subcommand("shell", "single fixed radius");
  add_noise_common(nshell, no_shell, true);
  nshell->add_option("--dials", no_shell.dials, "theta p,m,f,c");
  nshell->callback([&] { cmd_noise_shell(no_shell); });

  auto* ncloud = noise->add_subcommand("cloud", "K hyperspheres at uniform intervals");
  add_noise_common(ncloud, no_cloud, true);
  ncloud->add_option("--theta-max", no_cloud.theta_max, "outermost radius p,m,f,c");
  ncloud->add_option("--hyperspheres", no_cloud.hyperspheres, "number of radii K");
  ncloud->add_option("--langs-per-radius", no_cloud.langs_per_radius,
                     "languages sampled per radius");
  ncloud->callback([&] { cmd_noise_cloud(no_cloud); });

  auto* nrshell = noise->add_subcommand("randaug-shell", "random char/word noise, fixed dials");
  add_noise_common(nrshell, no_rshell, false);
  nrshell->add_option("--rc", no_rshell.rc, "per-character replacement probability");
  nrshell->add_option("--rw", no_rshell.rw, "per-word replacement probability");
  nrshell->callback([&] { cmd_noise_randaug(no_rshell, false); });

  auto* nrcloud = noise->add_subcommand("randaug-cloud", "random noise over K radii");
  add_noise_common(nrcloud, no_rcloud, false);
  nrcloud->add_option("--rc-max", no_rcloud.rc_max, "outermost per-character probability");
  nrcloud->add_option("--rw-max", no_rcloud.rw_max, "outermost per-word probability");
  nrcloud->add_option("--hyperspheres", no_rcloud.hyperspheres, "number of radii K");
  nrcloud->callback([&] { cmd_noise_randaug(no_rcloud, true); });

  // sweep
  SweepOpts sw;
  auto* sweep = app.add_subcommand("sweep", "1-D theta sweep over shell corpora");
  add_bitext_options(sweep, sw.io);
  sweep->add_option("--dim", sw.dim, "dimension: p, m or f")->required();
  sweep->add_option("--grid", sw.grid, "comma-separated theta values")->required();
  sweep->add_option("--g2p", sw.g2p, "grapheme/phoneme table")->required();
  sweep->add_option("--resources", sw.resources, "resource directory")->required();
  sweep->add_option("--out-dir", sw.out_dir, "output directory")->required();
  sweep->add_option("--seed", sw.seed, "random seed");
  sweep->add_option("--threads", sw.threads, "worker threads");
  sweep->callback([&] { cmd_sweep(sw); });

  // lexicon
  auto* lexicon = app.add_subcommand("lexicon", "bilingual lexicons");
  lexicon->require_subcommand(1);
  LexiconLoadOpts ll;
  auto* lload = lexicon->add_subcommand("load", "normalize a 2/3-column TSV");
  lload->add_option("--in", ll.in, "input TSV: crl<TAB>hrl[<TAB>weight]")->required();
  lload->add_option("--source", ll.source, "source tag")->required();
  lload->add_option("--out", ll.out, "output 4-column TSV")->required();
  lload->callback([&] { cmd_lexicon_load(ll); });

  LexiconMergeOpts lm;
  auto* lmerge = lexicon->add_subcommand("merge", "merge 4-column lexicons by priority");
  lmerge->add_option("--in", lm.inputs, "input lexicons, highest priority first")
      ->required()
      ->expected(-1);
  lmerge->add_option("--out", lm.out, "output 4-column TSV")->required();
  lmerge->callback([&] { cmd_lexicon_merge(lm); });

  LexiconInduceOpts li;
  auto* linduce = lexicon->add_subcommand("induce", "IBM Model 1 induction from bitext");
  add_bitext_options(linduce, li.io);
  linduce->add_option("--iterations", li.iterations, "EM iterations");
  linduce->add_option("--threshold", li.threshold, "keep t(hrl|crl) >= threshold");
  linduce->add_option("--out", li.out, "output 4-column TSV")->required();
  linduce->callback([&] { cmd_lexicon_induce(li); });

  LexiconProjectOpts lp;
  auto* lproject = lexicon->add_subcommand("project", "project HRL function words onto CRL");
  lproject->add_option("--lexicon", lp.lexicon, "4-column lexicon")->required();
  lproject->add_option("--hrl-functions", lp.hrl_functions, "HRL function-word list")->required();
  lproject->add_option("--out", lp.out, "CRL function-word list to write")->required();
  lproject->callback([&] { cmd_lexicon_project(lp); });

  // dtm
  auto* dtm = app.add_subcommand("dtm", "D->M inference-time adaptation");
  dtm->require_subcommand(1);
  DtmSwapOpts ds;
  auto* dswap = dtm->add_subcommand("swap", "swap CRL words for HRL equivalents");
  dswap->add_option("--mode", ds.mode, "func, cont or all")->required();
  dswap->add_option("--in", ds.in, "CRL text, one sentence per line")->required();
  dswap->add_option("--lexicon", ds.lexicon, "4-column lexicon")->required();
  dswap->add_option("--crl-functions", ds.crl_functions, "projected CRL function words")
      ->required();
  dswap->add_option("--out", ds.out, "swapped text output")->required();
  dswap->add_option("--report", ds.report, "summary TSV (stdout when omitted)");
  dswap->add_option("--trace", ds.trace, "per-token trace TSV");
  dswap->callback([&] { cmd_dtm_swap(ds); });

  // metrics
  auto* metrics = app.add_subcommand("metrics", "diagnostics");
  metrics->require_subcommand(1);
  ChrfOpts ch;
  auto* mchrf = metrics->add_subcommand("chrf", "corpus character F-score");
  mchrf->add_option("--hyp", ch.hyp, "hypothesis lines")->required();
  mchrf->add_option("--ref", ch.ref, "reference lines")->required();
  mchrf->add_option("--max-n", ch.max_n, "maximum n-gram order");
  mchrf->add_option("--beta", ch.beta, "recall weight");
  mchrf->callback([&] { cmd_metrics_chrf(ch); });

  NoiseReportOpts nr;
  auto* mreport = metrics->add_subcommand("noise-report", "empirical noise rates vs dials");
  mreport->add_option("--original", nr.original, "original source lines")->required();
  mreport->add_option("--noised", nr.noised, "noised source lines")->required();
  mreport->add_option("--g2p", nr.g2p, "grapheme/phoneme table")->required();
  mreport->add_option("--resources", nr.resources, "resource directory")->required();
  mreport->add_option("--language", nr.language, "language file (single-language mode)");
  mreport->add_option("--metadata", nr.metadata, "run metadata (per-chunk mode)");
  mreport->add_option("--out", nr.out, "report TSV (stdout when omitted)");
  mreport->callback([&] { cmd_metrics_noise_report(nr); });

  FuncShareOpts fsh;
  auto* mshare = metrics->add_subcommand("func-share", "share of function-word tokens");
  mshare->add_option("--corpus", fsh.corpus, "text, one sentence per line")->required();
  mshare->add_option("--functions", fsh.functions, "function-word list")->required();
  mshare->callback([&] { cmd_metrics_func_share(fsh); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
