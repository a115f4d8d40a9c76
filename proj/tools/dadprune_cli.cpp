// dadprune: command-line front end for scoring, dynamics, pruning, reports
// and the trajectory simulator.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dadprune/ddt1.hpp"
#include "dadprune/dynamics.hpp"
#include "dadprune/error.hpp"
#include "dadprune/manifest_io.hpp"
#include "dadprune/metrics.hpp"
#include "dadprune/pruning.hpp"
#include "dadprune/report.hpp"
#include "dadprune/score_stream.hpp"
#include "dadprune/sim.hpp"

namespace fs = std::filesystem;
using namespace dadprune;

namespace {

struct StoreOptions {
  std::string scores;
  int window = DadWindow::kDefault;
  std::optional<int> epoch;
  bool at_stop = false;
  std::optional<int> cadence;
};

void add_store_options(CLI::App* cmd, StoreOptions& o, bool needs_epoch) {
  cmd->add_option("--scores", o.scores, "Score stream (JSONL)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--window", o.window, "DAD window length in epochs")->check(CLI::PositiveNumber);
  if (needs_epoch) {
    auto* epoch = cmd->add_option("--epoch", o.epoch, "Scoring epoch (window end)");
    auto* stop = cmd->add_flag("--at-stop", o.at_stop, "Score at the epoch where the stop rule fires");
    cmd->add_option("--cadence", o.cadence, "Snapshot cadence for --at-stop (default: window)");
    epoch->excludes(stop);
  }
}

TrajectoryStore load_store(const std::string& path) {
  IngestResult r = ingest_scores(fs::path(path));
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
  return std::move(r.store);
}

int resolve_epoch(const TrajectoryStore& store, const StoreOptions& o) {
  if (o.epoch) return *o.epoch;
  if (o.at_stop) {
    const LCurve curve = moving_distance_curve(store, DadWindow(o.window), o.cadence);
    if (!curve.stop_epoch) {
      throw Error(Errc::insufficient_data, "the stop rule never fires on this stream; pass --epoch");
    }
    std::cerr << "stop rule fired at epoch " << *curve.stop_epoch << "\n";
    return *curve.stop_epoch;
  }
  if (store.epochs().empty()) throw Error(Errc::empty_input, "score stream has no complete epochs");
  return store.epochs().back();
}

Ranking rank_store(const TrajectoryStore& store, const std::string& metric, int epoch, DadWindow window) {
  if (metric == "dad") return rank(snapshot(store, epoch, window));
  std::vector<RankEntry> scores;
  for (const auto& id : store.sample_ids()) {
    auto v = store.metric(id, epoch, metric);
    if (!v) {
      throw Error(Errc::not_found, "no '" + metric + "' value for sample '" + id + "' at epoch " +
                                       std::to_string(epoch));
    }
    scores.push_back({id, *v});
  }
  return rank(std::move(scores), epoch, metric);
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io_failure, "cannot open '" + out_path + "' for writing");
  out << text;
}

Dims parse_dims(const std::string& s) {
  Dims d;
  unsigned w = 0, h = 0, z = 0;
  char tail = 0;
  const int got = std::sscanf(s.c_str(), "%ux%ux%u%c", &w, &h, &z, &tail);
  if (got == 3 && w && h && z) return Dims{w, h, z, 3};
  if (std::sscanf(s.c_str(), "%ux%u%c", &w, &h, &tail) == 2 && w && h) return Dims{w, h, 1, 2};
  throw Error(Errc::invalid_value, "dims must look like 16x16x8 or 64x64, got '" + s + "'");
}

std::string epoch_dir_name(int epoch) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "epoch_%04d", epoch);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dadprune: dataset pruning for segmentation by Dynamic Average Dice"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kEngineVersion));

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Generate synthetic score streams (and optional volumes)");
  std::size_t sim_samples = 100;
  int sim_epochs = 200;
  std::uint64_t sim_seed = 1;
  SimParams sim_params;
  std::string sim_out = "-";
  std::string sim_specs_out;
  std::string sim_volumes;
  std::string sim_dims = "16x16x8";
  int sim_volume_every = 1;
  simulate->add_option("--samples", sim_samples, "Number of samples")->check(CLI::PositiveNumber);
  simulate->add_option("--epochs", sim_epochs, "Epochs to simulate (1..T)")->check(CLI::PositiveNumber);
  simulate->add_option("--seed", sim_seed, "Generator seed");
  simulate->add_option("--tau0", sim_params.tau0, "Base learning time constant");
  simulate->add_option("--plateau-gap", sim_params.plateau_gap, "Plateau dice is 1 - gap * difficulty");
  simulate->add_option("--noise", sim_params.noise, "Post-onset noise amplitude");
  simulate->add_option("--onset", sim_params.onset, "Learning onset epoch");
  simulate->add_option("--onset-jitter", sim_params.onset_jitter, "Per-sample onset jitter (epochs)");
  simulate->add_option("--pre-onset-level", sim_params.pre_onset_level, "Mean dice before onset");
  simulate->add_option("--pre-onset-noise", sim_params.pre_onset_noise, "Noise amplitude before onset");
  simulate->add_option("--out", sim_out, "Score stream output ('-' for stdout)");
  simulate->add_option("--specs-out", sim_specs_out, "Write planted difficulties as CSV");
  simulate->add_option("--volumes", sim_volumes, "Also write DDT1 labels and per-epoch predictions here");
  simulate->add_option("--dims", sim_dims, "Volume dims for --volumes, e.g. 16x16x8");
  simulate->add_option("--volume-every", sim_volume_every, "Write predictions every N epochs")
      ->check(CLI::PositiveNumber);

  // score
  auto* score = app.add_subcommand("score", "Score a directory of predictions against labels");
  std::string score_pred, score_truth, score_out = "-";
  int score_epoch = 0;
  score->add_option("--pred-dir", score_pred, "Prediction volumes")->required()->check(CLI::ExistingDirectory);
  score->add_option("--truth-dir", score_truth, "Label volumes")->required()->check(CLI::ExistingDirectory);
  score->add_option("--epoch", score_epoch, "Epoch to stamp on the records")->required();
  score->add_option("--out", score_out, "Stream to append to ('-' for stdout)");

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Validate a score stream and summarize it");
  std::string ingest_path;
  ingest->add_option("scores", ingest_path, "Score stream")->required()->check(CLI::ExistingFile);

  // snapshot
  auto* snap_cmd = app.add_subcommand("snapshot", "Per-sample DAD and variability at one epoch (CSV)");
  StoreOptions snap_opts;
  std::string snap_out = "-";
  add_store_options(snap_cmd, snap_opts, true);
  snap_cmd->add_option("--out", snap_out, "CSV output ('-' for stdout)");

  // lcurve
  auto* lcurve = app.add_subcommand("lcurve", "Moving-distance curve and stop epoch");
  StoreOptions lc_opts;
  std::string lc_prefix;
  bool lc_signed = false;
  add_store_options(lcurve, lc_opts, false);
  lcurve->add_option("--cadence", lc_opts.cadence, "Epochs between snapshots (default: window)");
  lcurve->add_flag("--signed", lc_signed, "Sum signed differences instead of absolute ones");
  lcurve->add_option("--prefix", lc_prefix, "Write <prefix>.csv and <prefix>.svg");

  // rank
  auto* rank_cmd = app.add_subcommand("rank", "Easiest/hardest listing");
  StoreOptions rank_opts;
  std::string rank_metric = "dad";
  std::size_t rank_k = 9;
  add_store_options(rank_cmd, rank_opts, true);
  rank_cmd->add_option("--metric", rank_metric, "dad, dice, or an extra metric in the stream");
  rank_cmd->add_option("-k", rank_k, "Samples per section");

  // prune
  auto* prune_cmd = app.add_subcommand("prune", "Rank and prune; writes a manifest");
  StoreOptions prune_opts;
  std::string prune_strategy = "ambiguous", prune_metric = "dad", prune_out = "-";
  double prune_fraction = 0.4;
  std::optional<std::uint64_t> prune_seed;
  add_store_options(prune_cmd, prune_opts, true);
  prune_cmd->add_option("--strategy", prune_strategy, "ambiguous | easy | hard | random")
      ->check(CLI::IsMember({"ambiguous", "easy", "hard", "random"}));
  prune_cmd->add_option("--fraction", prune_fraction, "Fraction of samples to drop, in [0, 1)");
  prune_cmd->add_option("--metric", prune_metric, "dad, dice, or an extra metric in the stream");
  prune_cmd->add_option("--seed", prune_seed, "Seed for the random strategy");
  prune_cmd->add_option("--out", prune_out, "Manifest output ('-' for stdout)");

  // datamap
  auto* datamap = app.add_subcommand("datamap", "Data map CSV + SVG");
  StoreOptions dm_opts;
  double dm_fraction = 0.4;
  std::string dm_prefix;
  add_store_options(datamap, dm_opts, true);
  datamap->add_option("--fraction", dm_fraction, "Pruning fraction defining the bands");
  datamap->add_option("--prefix", dm_prefix, "Write <prefix>.csv and <prefix>.svg")->required();

  // overlap
  auto* overlap = app.add_subcommand("overlap", "Kept-set overlap of manifests against a reference");
  std::string ov_reference, ov_prefix;
  std::vector<std::string> ov_others;
  overlap->add_option("--reference", ov_reference, "Reference manifest")->required()->check(CLI::ExistingFile);
  overlap->add_option("manifests", ov_others, "Manifests to compare")->required()->check(CLI::ExistingFile);
  overlap->add_option("--prefix", ov_prefix, "Write <prefix>.csv and <prefix>.svg bar chart");

  // metrics
  auto* metrics = app.add_subcommand("metrics", "Per-sample metrics for one prediction/label pair");
  std::string m_pred, m_truth;
  std::vector<std::string> m_saliency;
  metrics->add_option("--pred", m_pred, "Prediction volume")->check(CLI::ExistingFile);
  metrics->add_option("--truth", m_truth, "Label volume")->check(CLI::ExistingFile);
  metrics->add_option("--saliency", m_saliency, "Per-epoch saliency volumes, in epoch order (VoG)")
      ->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*simulate) {
      const auto specs = planted_ensemble(sim_samples, sim_params, sim_seed);
      const auto records = simulate_trajectories(specs, sim_epochs, sim_seed);
      std::ostringstream stream;
      write_score_lines(stream, records);
      emit(sim_out, stream.str());
      if (!sim_specs_out.empty()) {
        std::string csv = "sample_id,difficulty,plateau,tau,onset\n";
        for (const auto& s : specs) {
          csv += s.sample_id + "," + format_fixed4(s.difficulty) + "," + format_fixed4(s.plateau) + "," +
                 format_fixed4(s.tau) + "," + std::to_string(s.onset) + "\n";
        }
        emit(sim_specs_out, csv);
      }
      if (!sim_volumes.empty()) {
        const Dims dims = parse_dims(sim_dims);
        const fs::path root(sim_volumes);
        fs::create_directories(root / "truth");
        const MaskVolume truth = ellipsoid_mask(dims);
        for (const auto& spec : specs) {
          write_volume(root / "truth" / (spec.sample_id + ".ddt1"), truth);
          const auto seq = simulate_mask_sequence(truth, spec, sim_epochs, sim_seed);
          for (int e = sim_volume_every; e <= sim_epochs; e += sim_volume_every) {
            const fs::path dir = root / epoch_dir_name(e);
            fs::create_directories(dir);
            write_volume(dir / (spec.sample_id + ".ddt1"), seq.volumes[static_cast<std::size_t>(e - 1)]);
          }
        }
      }
    } else if (*score) {
      const auto result = score_volumes(score_pred, score_truth, score_epoch);
      for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
      if (score_out == "-") {
        write_score_lines(std::cout, result.records);
      } else {
        append_score_lines(score_out, result.records);
      }
    } else if (*ingest) {
      const IngestResult r = ingest_scores(fs::path(ingest_path));
      for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
      const auto& s = r.store;
      std::cout << "records: " << r.records << "\n";
      std::cout << "samples: " << s.sample_count() << "\n";
      std::cout << "complete epochs: " << s.epoch_count();
      if (!s.epochs().empty()) std::cout << " [" << s.epochs().front() << ".." << s.epochs().back() << "]";
      std::cout << "\npartial epochs: " << s.partial_epochs().size() << "\n";
      const auto names = s.metric_names();
      std::cout << "extra metrics:";
      for (const auto& n : names) std::cout << ' ' << n;
      std::cout << "\n";
    } else if (*snap_cmd) {
      const auto store = load_store(snap_opts.scores);
      const int epoch = resolve_epoch(store, snap_opts);
      emit(snap_out, snapshot_csv(snapshot(store, epoch, DadWindow(snap_opts.window))));
    } else if (*lcurve) {
      const auto store = load_store(lc_opts.scores);
      const LCurve curve = moving_distance_curve(store, DadWindow(lc_opts.window), lc_opts.cadence,
                                                 lc_signed ? DistanceMode::signed_sum : DistanceMode::absolute);
      if (curve.points.empty()) throw Error(Errc::insufficient_data, "stream is too short for two snapshots");
      const Chart chart = render_l_curve(curve.points);
      if (lc_prefix.empty()) {
        std::cout << chart.csv;
      } else {
        write_chart(lc_prefix, chart);
      }
      if (curve.stop_epoch) {
        std::cerr << "stop epoch: " << *curve.stop_epoch << "\n";
      } else {
        std::cerr << "stop rule did not fire\n";
      }
    } else if (*rank_cmd) {
      const auto store = load_store(rank_opts.scores);
      const int epoch = resolve_epoch(store, rank_opts);
      std::cout << rank_listing(rank_store(store, rank_metric, epoch, DadWindow(rank_opts.window)), rank_k);
    } else if (*prune_cmd) {
      const auto store = load_store(prune_opts.scores);
      const int epoch = resolve_epoch(store, prune_opts);
      const Ranking ranking = rank_store(store, prune_metric, epoch, DadWindow(prune_opts.window));
      const PruneManifest m = prune(ranking, parse_strategy(prune_strategy), prune_fraction, prune_seed);
      emit(prune_out, format_manifest(m));
      std::cerr << "kept " << m.kept.size() << " of " << ranking.size() << " samples\n";
    } else if (*datamap) {
      const auto store = load_store(dm_opts.scores);
      const int epoch = resolve_epoch(store, dm_opts);
      write_chart(dm_prefix, render_datamap(snapshot(store, epoch, DadWindow(dm_opts.window)), dm_fraction));
    } else if (*overlap) {
      const PruneManifest ref = read_manifest(ov_reference);
      std::vector<OverlapBar> bars;
      for (const auto& path : ov_others) {
        const PruneManifest m = read_manifest(path);
        const double v = subset_overlap(m.kept, ref.kept);
        std::cout << path << "\tepoch " << m.scoring_epoch << "\t" << format_fixed4(v) << "\n";
        bars.push_back({"epoch " + std::to_string(m.scoring_epoch), v});
      }
      if (!ov_prefix.empty()) write_chart(ov_prefix, render_overlap_bars(bars));
    } else if (*metrics) {
      if (!m_pred.empty() || !m_truth.empty()) {
        if (m_pred.empty() || m_truth.empty()) throw Error(Errc::invalid_value, "--pred and --truth go together");
        const AnyVolume truth_any = read_volume(m_truth);
        const auto* truth = std::get_if<MaskVolume>(&truth_any);
        if (!truth) throw Error(Errc::bad_dtype, "--truth must be a mask volume");
        const AnyVolume pred_any = read_volume(m_pred);
        if (const auto* mask = std::get_if<MaskVolume>(&pred_any)) {
          std::cout << "dice\t" << format_fixed4(dice(*mask, *truth)) << "\n";
        } else {
          const auto& probs = std::get<ProbabilityVolume>(pred_any);
          std::cout << "dice\t" << format_fixed4(dice(probs, *truth)) << "\n";
          std::cout << "naive_l2\t" << format_fixed4(naive_l2_score(probs, *truth)) << "\n";
          std::cout << "el2n\t" << format_fixed4(el2n(probs, *truth)) << "\n";
          if (truth->foreground_count() > 0) {
            std::cout << "el2nx\t" << format_fixed4(el2nx(probs, *truth)) << "\n";
          }
        }
      }
      if (!m_saliency.empty()) {
        std::vector<int> epochs;
        std::vector<RealVolume> volumes;
        for (std::size_t i = 0; i < m_saliency.size(); ++i) {
          epochs.push_back(static_cast<int>(i));
          volumes.push_back(read_real_volume(m_saliency[i]));
        }
        std::cout << "vog\t" << format_fixed4(vog(SaliencyStack(std::move(epochs), std::move(volumes)))) << "\n";
      }
      if (m_pred.empty() && m_saliency.empty()) {
        throw Error(Errc::invalid_value, "nothing to compute; pass --pred/--truth and/or --saliency");
      }
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
