// Copyright 2026 The sbss Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: simulation, counting, separation, the synthetic
// model, statistical validation and Monte-Carlo benchmarks.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "sbss/convex_geometry.hpp"
#include "sbss/error.hpp"
#include "sbss/harness/config.hpp"
#include "sbss/harness/experiment.hpp"
#include "sbss/harness/metrics.hpp"
#include "sbss/harness/report.hpp"
#include "sbss/harness/room.hpp"
#include "sbss/harness/speech_proxy.hpp"
#include "sbss/harness/validate.hpp"
#include "sbss/harness/wav_io.hpp"
#include "sbss/separation.hpp"
#include "sbss/synth_mixture.hpp"

namespace fs = std::filesystem;
using namespace sbss;
using namespace sbss::harness;

namespace {

std::string path_in(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

std::vector<std::string> numbered(const std::string& prefix, Index count) {
  std::vector<std::string> out;
  for (Index j = 0; j < count; ++j) out.push_back(prefix + std::to_string(j));
  return out;
}

ExperimentConfig config_from(const std::string& path) {
  return path.empty() ? ExperimentConfig{} : load_config(path);
}

SampleFormat parse_format(const std::string& s) {
  if (s == "pcm16") return SampleFormat::kPcm16;
  if (s == "pcm24") return SampleFormat::kPcm24;
  if (s == "float32") return SampleFormat::kFloat32;
  throw Error(ErrorCode::kInvalidArgument, "unknown sample format " + s);
}

struct SimulateArgs {
  ExperimentConfig cfg;
  int sources = 2;
  std::vector<std::string> clean_inputs;
  std::string out_dir = "sim";
  std::string format = "float32";
};

int cmd_simulate(const SimulateArgs& a) {
  ExperimentConfig cfg = a.cfg;
  fs::create_directories(a.out_dir);
  std::vector<Signal> clean;
  if (!a.clean_inputs.empty()) {
    for (const auto& p : a.clean_inputs) {
      WavData w = read_wav(p);
      clean.push_back(std::move(w.channels.front()));
      cfg.sample_rate = w.sample_rate;
    }
    const std::size_t n = std::min_element(clean.begin(), clean.end(), [](const Signal& x, const Signal& y) {
                            return x.size() < y.size();
                          })->size();
    for (auto& c : clean) c.resize(n);
  }
  const int sources = clean.empty() ? a.sources : static_cast<int>(clean.size());
  cfg.sources = {sources};
  cfg.validate();

  Scenario sc;
  if (clean.empty()) {
    sc = make_scenario(cfg, 0);
  } else {
    RoomGeometry g;
    g.mics = cfg.mics;
    g.mic_spacing_m = cfg.mic_spacing_m;
    g.sample_rate = cfg.sample_rate;
    g.decay_s = cfg.decay_s;
    g.drr_db = cfg.drr_db;
    draw_positions(sources, derive_seed(cfg.seed, 1), g.angles_deg, g.distances_m, cfg.min_separation_deg);
    sc.sources = sources;
    sc.room = make_room(g, derive_seed(cfg.seed, 2));
    sc.clean = clean;
    sc.mix = simulate_mixture(sc.room, clean);
  }
  const SampleFormat fmt = parse_format(a.format);
  write_wav(path_in(a.out_dir, "mixture.wav"), sc.mix.mixture, cfg.sample_rate, fmt);
  for (int j = 0; j < sources; ++j) {
    write_wav(path_in(a.out_dir, "image_" + std::to_string(j) + ".wav"), sc.mix.images[static_cast<std::size_t>(j)],
              cfg.sample_rate, fmt);
    write_wav(path_in(a.out_dir, "clean_" + std::to_string(j) + ".wav"), {sc.clean[static_cast<std::size_t>(j)]},
              cfg.sample_rate, fmt);
  }
  nlohmann::json room{{"schema_version", kSchemaVersion},
                      {"kind", "room"},
                      {"angles_deg", sc.room.angles_deg},
                      {"distances_m", sc.room.distances_m},
                      {"decay_s", sc.room.decay_s},
                      {"direct_delay_samples", sc.room.direct_delay},
                      {"config", to_text(cfg)}};
  write_text(path_in(a.out_dir, "room.json"), room.dump(2) + "\n");
  std::vector<Signal> refs;
  for (const auto& img : sc.mix.images) refs.push_back(img[static_cast<std::size_t>(cfg.ref_mic)]);
  std::printf("wrote %d-speaker mixture (%d mics) to %s\n", sources, cfg.mics, a.out_dir.c_str());
  for (int j = 0; j < sources; ++j) {
    std::printf("  speaker %d: angle %+.0f deg, distance %.0f m, input SIR %.2f dB\n", j,
                sc.room.angles_deg[static_cast<std::size_t>(j)], sc.room.distances_m[static_cast<std::size_t>(j)],
                input_sir_db(refs)[static_cast<std::size_t>(j)]);
  }
  return 0;
}

PipelineConfig pipeline_for(const ExperimentConfig& cfg, double sample_rate) {
  ExperimentConfig c = cfg;
  c.sample_rate = sample_rate;
  return c.pipeline();
}

int cmd_count(const std::string& input, const ExperimentConfig& cfg, const std::string& spectrum_out) {
  const WavData w = read_wav(input);
  const PipelineConfig pipe = pipeline_for(cfg, w.sample_rate);
  const Spectrogram s = stft(w.channels, pipe.stft);
  const auto feats = extract_features(s, pipe.counting);
  const auto corr = build_correlation(feats.features);
  const auto count = count_sources(corr, pipe.alpha);
  std::printf("%ld\n", static_cast<long>(count.count));
  if (count.saturated) std::fprintf(stderr, "warning: no eigenvalue ratio fell below alpha\n");
  if (!spectrum_out.empty()) write_text(spectrum_out, spectrum_csv(corr.eigenvalues()));
  return 0;
}

int cmd_separate(const std::string& input, const ExperimentConfig& cfg, int sources, const std::string& out_dir,
                 const std::string& format) {
  const WavData w = read_wav(input);
  PipelineConfig pipe = pipeline_for(cfg, w.sample_rate);
  if (sources > 0) pipe.fixed_sources = sources;
  const SeparationResult r = run_pipeline(w.channels, pipe);
  fs::create_directories(out_dir);
  for (std::size_t j = 0; j < r.separated.size(); ++j) {
    write_wav(path_in(out_dir, "source_" + std::to_string(j) + ".wav"), {r.separated[j]}, w.sample_rate,
              parse_format(format));
  }
  write_text(path_in(out_dir, "report.json"), pipeline_json(r).dump(2) + "\n");
  write_text(path_in(out_dir, "embedding.csv"), matrix_csv(r.embedding.nu, numbered("nu", r.estimated_count)));
  write_text(path_in(out_dir, "probabilities.csv"),
             matrix_csv(r.probabilities.phat, numbered("p", r.estimated_count)));
  write_text(path_in(out_dir, "spectrum.csv"), spectrum_csv(r.separation_spectrum));
  if (r.counting_spectrum.size() > 0) {
    write_text(path_in(out_dir, "counting_spectrum.csv"), spectrum_csv(r.counting_spectrum));
  }
  for (const auto& line : r.log) std::fprintf(stderr, "%s\n", line.c_str());
  std::printf("separated %ld sources into %s\n", static_cast<long>(r.estimated_count), out_dir.c_str());
  return 0;
}

struct ToyArgs {
  int sources = 3;
  int dim = 1000;
  int frames = 500;
  std::uint64_t seed = 1;
  std::string out_dir = "toy";
};

int cmd_toy(const ToyArgs& a) {
  const auto p = generate_probabilities(a.frames, a.sources, derive_seed(a.seed, 0));
  const auto h = generate_hidden_sources(a.sources, a.dim, derive_seed(a.seed, 1));
  const auto obs = generate_observations(h, p, derive_seed(a.seed, 2)).first;
  const auto corr = build_correlation(obs);
  const auto oracle = oracle_correlation(p);
  fs::create_directories(a.out_dir);
  write_text(path_in(a.out_dir, "eigenvalues.csv"), spectrum_csv(corr.eigenvalues()));
  write_text(path_in(a.out_dir, "oracle_eigenvalues.csv"), spectrum_csv(oracle.eigenvalues()));

  const Index shown = std::max<Index>(a.sources, 2);
  const auto e = embed(corr, shown);
  Eigen::MatrixXd table(a.frames, shown + a.sources);
  table << e.nu, p.values();
  auto names = numbered("nu", shown);
  for (auto& n : numbered("p", a.sources)) names.push_back(n);
  write_text(path_in(a.out_dir, "embedding.csv"), matrix_csv(table, names));

  const auto count = count_sources(corr, 0.12);
  std::printf("estimated %ld of %d sources; lambda ratios:", static_cast<long>(count.count), a.sources);
  for (Index k = 0; k < std::min<Index>(a.sources + 2, corr.size()); ++k) {
    std::printf(" %.4f", corr.eigenvalues()(k) / corr.eigenvalues()(0));
  }
  std::printf("\n");
  if (count.count == a.sources) {
    const auto emb = embed(corr, a.sources);
    const auto v = find_vertices(emb);
    const auto r = recover_probabilities(emb, v);
    write_text(path_in(a.out_dir, "recovered.csv"), matrix_csv(r.phat, numbered("p", a.sources)));
  }
  return 0;
}

int cmd_validate(const ValidationOptions& opt, const std::string& json_out) {
  const ValidationReport r = run_validation(opt);
  for (const auto& c : r.checks) {
    std::printf("%s %-34s value=%.6g threshold=%.6g  %s\n", c.passed ? "PASS" : "FAIL", c.name.c_str(),
                c.value, c.threshold, c.detail.c_str());
  }
  if (!json_out.empty()) write_text(json_out, validation_json(r).dump(2) + "\n");
  return r.all_passed() ? 0 : 1;
}

void print_summary(const char* label, const Summary& sir, const Summary& sdr) {
  std::printf("  %-11s SIR %7.2f +/- %.2f dB   SDR %7.2f +/- %.2f dB\n", label, sir.mean, sir.std_error,
              sdr.mean, sdr.std_error);
}

int cmd_bench(const ExperimentConfig& cfg, const std::string& mode, const std::string& out_dir) {
  fs::create_directories(out_dir);
  const auto start = std::chrono::steady_clock::now();
  if (mode == "counting" || mode == "both") {
    const CountingReport r = run_counting(cfg);
    write_text(path_in(out_dir, "counting.json"), counting_json(r, cfg).dump(2) + "\n");
    write_text(path_in(out_dir, "counting.csv"), counting_csv(r));
    std::printf("counting accuracy over %d trials (%d failed):\n", r.trials, r.failures);
    for (std::size_t a = 0; a < r.alphas.size(); ++a) {
      std::printf("  alpha=%.3f  %.3f\n", r.alphas[a], r.accuracy[a]);
    }
  }
  if (mode == "separation" || mode == "both") {
    const SeparationReport r = run_separation(cfg);
    write_text(path_in(out_dir, "separation.json"), separation_json(r, cfg).dump(2) + "\n");
    write_text(path_in(out_dir, "separation.csv"), separation_csv(r));
    std::printf("separation over %d trials (%d incomplete), input SIR %.2f dB:\n", r.trials, r.failures,
                r.input_sir.mean);
    if (r.baselines) print_summary("ideal", r.ideal_sir, r.ideal_sdr);
    if (r.baselines) print_summary("semi-ideal", r.semi_ideal_sir, r.semi_ideal_sdr);
    print_summary("proposed", r.proposed_sir, r.proposed_sdr);
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::fprintf(stderr, "elapsed %.1f s\n", secs);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Blind speaker counting and separation from multichannel recordings"};
  app.require_subcommand(1);

  std::string config_path;
  auto add_config = [&](CLI::App* sub) {
    sub->add_option("-c,--config", config_path, "key = value configuration file");
  };

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Simulate a reverberant multichannel mixture");
  add_config(simulate);
  simulate->add_option("-J,--sources", sim.sources, "Number of speakers (ignored with --clean)");
  simulate->add_option("--clean", sim.clean_inputs, "Mono WAV files to use as clean speakers");
  simulate->add_option("-o,--out-dir", sim.out_dir, "Output directory");
  simulate->add_option("--format", sim.format, "pcm16, pcm24 or float32");
  std::optional<std::uint64_t> sim_seed;
  simulate->add_option_function<std::uint64_t>("--seed", [&](const std::uint64_t& s) { sim_seed = s; },
                                               "Overrides the config seed");

  std::string input;
  std::string spectrum_out;
  double alpha = 0.0;
  auto* count = app.add_subcommand("count", "Estimate the number of speakers in a recording");
  add_config(count);
  count->add_option("input", input, "Multichannel WAV")->required();
  count->add_option("--alpha", alpha, "Eigenvalue ratio threshold (overrides config)");
  count->add_option("--spectrum", spectrum_out, "Write the eigenvalue spectrum CSV here");

  int fixed_sources = 0;
  std::string sep_out = "separated";
  std::string sep_format = "float32";
  auto* separate_cmd = app.add_subcommand("separate", "Count and separate the speakers in a recording");
  add_config(separate_cmd);
  separate_cmd->add_option("input", input, "Multichannel WAV")->required();
  separate_cmd->add_option("-J,--sources", fixed_sources, "Skip counting and assume this many speakers");
  separate_cmd->add_option("--alpha", alpha, "Eigenvalue ratio threshold (overrides config)");
  separate_cmd->add_option("-o,--out-dir", sep_out, "Output directory");
  separate_cmd->add_option("--format", sep_format, "pcm16, pcm24 or float32");

  ToyArgs toy;
  auto* toy_cmd = app.add_subcommand("toy", "Sample the synthetic mixture model and dump its spectrum and embedding");
  toy_cmd->add_option("-J,--sources", toy.sources, "Number of hidden sources");
  toy_cmd->add_option("-D,--dim", toy.dim, "Observation dimension");
  toy_cmd->add_option("-L,--frames", toy.frames, "Number of observations");
  toy_cmd->add_option("--seed", toy.seed, "Random seed");
  toy_cmd->add_option("-o,--out-dir", toy.out_dir, "Output directory");

  ValidationOptions vopt;
  std::string validate_json;
  auto* validate = app.add_subcommand("validate", "Check the statistical properties of the synthetic model");
  validate->add_option("--seed", vopt.seed, "Random seed");
  validate->add_option("--redraws", vopt.redraws, "Redraws per dimension");
  validate->add_option("--json", validate_json, "Write the JSON report here");

  std::string bench_mode = "both";
  std::string bench_out = "bench";
  int bench_trials = 0;
  int bench_threads = 0;
  std::optional<std::uint64_t> bench_seed;
  auto* bench = app.add_subcommand("bench", "Monte-Carlo counting and separation experiments");
  add_config(bench);
  bench->add_option("--mode", bench_mode, "counting, separation or both")
      ->check(CLI::IsMember({"counting", "separation", "both"}));
  bench->add_option("-o,--out-dir", bench_out, "Output directory");
  bench->add_option("--trials", bench_trials, "Overrides the config trial count");
  bench->add_option("--threads", bench_threads, "Overrides the config thread count");
  bench->add_option_function<std::uint64_t>("--seed", [&](const std::uint64_t& s) { bench_seed = s; },
                                            "Overrides the config seed");

  auto* dump = app.add_subcommand("config", "Print the default configuration");

  CLI11_PARSE(app, argc, argv);

  try {
    ExperimentConfig cfg = config_from(config_path);
    if (alpha > 0.0) cfg.alpha = alpha;
    if (*simulate) {
      sim.cfg = cfg;
      if (sim_seed) sim.cfg.seed = *sim_seed;
      return cmd_simulate(sim);
    }
    if (*count) return cmd_count(input, cfg, spectrum_out);
    if (*separate_cmd) return cmd_separate(input, cfg, fixed_sources, sep_out, sep_format);
    if (*toy_cmd) return cmd_toy(toy);
    if (*validate) return cmd_validate(vopt, validate_json);
    if (*bench) {
      if (bench_trials > 0) cfg.trials = bench_trials;
      if (bench_threads > 0) cfg.threads = bench_threads;
      if (bench_seed) cfg.seed = *bench_seed;
      cfg.validate();
      return cmd_bench(cfg, bench_mode, bench_out);
    }
    if (*dump) {
      std::cout << to_text(cfg);
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
