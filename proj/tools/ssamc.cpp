#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ssamc/config.hpp"
#include "ssamc/eval.hpp"
#include "ssamc/ppm.hpp"
#include "ssamc/synth.hpp"
#include "ssamc/tracker.hpp"

namespace fs = std::filesystem;
using namespace ssamc;

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (const char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

CsvTable read_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  CsvTable t;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto cells = split_csv(line);
    if (t.header.empty())
      t.header = std::move(cells);
    else
      t.rows.push_back(std::move(cells));
  }
  if (t.header.empty())
    throw std::runtime_error(path.string() + ": empty CSV");
  return t;
}

// ---------------------------------------------------------------- generate

struct GenerateArgs {
  SynthSpec spec;
  std::vector<int> teleport_list;
  int teleport_every = 0;
  bool no_shot_change = false;
  std::string target_color = "0.85,0.10,0.10";
  std::string speed = "2,1";
  std::string out;
};

Vec3 parse_triplet(const std::string& s) {
  Vec3 v;
  if (std::sscanf(s.c_str(), "%lf,%lf,%lf", &v[0], &v[1], &v[2]) != 3)
    throw std::runtime_error("expected r,g,b triplet: " + s);
  return v;
}

int cmd_generate(GenerateArgs& a) {
  a.spec.target_color = parse_triplet(a.target_color);
  if (std::sscanf(a.speed.c_str(), "%lf,%lf", &a.spec.motion.vx,
                  &a.spec.motion.vy) != 2)
    throw std::runtime_error("expected vx,vy for --speed: " + a.speed);
  a.spec.motion.teleport_frames = a.teleport_list;
  if (a.teleport_every > 0)
    for (int f = 1 + a.teleport_every; f <= a.spec.frames;
         f += a.teleport_every)
      a.spec.motion.teleport_frames.push_back(f);
  a.spec.motion.shot_change = !a.no_shot_change;

  const SynthSequence seq(a.spec);
  write_sequence(seq, a.out);
  std::cout << "wrote " << a.spec.frames << " frames + groundtruth.csv to "
            << a.out << "\n";
  return 0;
}

// ------------------------------------------------------------------- track

int cmd_track(const std::string& config_path) {
  RunConfig cfg = load_config(config_path);
  validate_config(cfg);
  if (cfg.frames_dir.empty())
    throw std::invalid_argument("config: key 'frames_dir' is required");
  if (cfg.out_dir.empty())
    throw std::invalid_argument("config: key 'out_dir' is required");
  if (!(cfg.init_w > 0) || !(cfg.init_h > 0))
    throw std::invalid_argument(
        "config: keys 'init_x/init_y/init_w/init_h' must describe a box");

  const auto files = list_frame_files(cfg.frames_dir);
  if (files.size() < 2)
    throw std::runtime_error("frames_dir has fewer than two .ppm frames");
  FrameSource src;
  src.count = int(files.size());
  src.get = [&files](int i) { return load_ppm(files[size_t(i)]); };

  fs::create_directories(cfg.out_dir);
  const fs::path out(cfg.out_dir);

  FieldObserver observer;
  if (cfg.dump_annf) {
    observer = [&out](int frame, const PatchField& fwd, const PatchField& bwd) {
      char name[64];
      std::snprintf(name, sizeof name, "annf_fwd_%04d.csv", frame);
      std::ofstream ff(out / name);
      write_field_csv(fwd, ff);
      std::snprintf(name, sizeof name, "annf_bwd_%04d.csv", frame);
      std::ofstream fb(out / name);
      write_field_csv(bwd, fb);
    };
  }

  const TrackerRun run = track_sequence(src, cfg.init_box(), cfg.tracker,
                                        observer);

  const std::string seed_line = "# seed=" + std::to_string(cfg.tracker.seed);
  std::ostringstream results;
  results << seed_line << "\nframe,x,y,s,abrupt,g,l,log_posterior\n";
  std::ostringstream abrupt;
  abrupt << seed_line << "\nframe,g,l,a,abrupt\n";
  std::ostringstream diag;
  diag << seed_line << "\nframe,iteration,accepts,log_posterior,dos_entropy\n";
  for (const auto& fr : run.frames) {
    results << fr.frame << "," << fmt(fr.state.x) << "," << fmt(fr.state.y)
            << "," << fmt(fr.state.s) << "," << (fr.report.abrupt ? 1 : 0)
            << "," << fmt(fr.report.g) << "," << fmt(fr.report.l) << ","
            << fmt(fr.log_posterior) << "\n";
    abrupt << fr.frame << "," << fmt(fr.report.g) << "," << fmt(fr.report.l)
           << "," << fmt(fr.report.a) << "," << (fr.report.abrupt ? 1 : 0)
           << "\n";
    for (size_t k = 0; k < fr.diags.size(); ++k) {
      const auto& d = fr.diags[k];
      diag << fr.frame << "," << (k + 1) << "," << d.accepts << ","
           << fmt(d.log_posterior) << "," << fmt(d.dos_entropy) << "\n";
    }
  }
  write_file(out / "results.csv", results.str());
  write_file(out / "abruptness.csv", abrupt.str());
  write_file(out / "diagnostics.csv", diag.str());
  write_file(out / "config_effective.cfg", serialize_config(cfg));

  std::cout << "tracked " << run.frames.size() << " frames; results in "
            << cfg.out_dir << "\n";
  return 0;
}

// -------------------------------------------------------------------- eval

int cmd_eval(const std::string& results_path, const std::string& truth_path,
             const std::string& out_dir) {
  const CsvTable truth_csv = read_csv(truth_path);
  if (truth_csv.header.size() < 5)
    throw std::runtime_error("truth CSV must have frame,x,y,w,h columns");
  std::map<int, Rect> truth;
  std::optional<Rect> first_truth;
  for (const auto& row : truth_csv.rows) {
    const int frame = std::stoi(row.at(0));
    const Rect r{std::stod(row.at(1)), std::stod(row.at(2)),
                 std::stod(row.at(3)), std::stod(row.at(4))};
    truth[frame] = r;
    if (!first_truth) first_truth = r;
  }
  if (truth.empty()) throw std::runtime_error("truth CSV has no rows");

  const CsvTable res_csv = read_csv(results_path);
  if (res_csv.header.size() < 4 || res_csv.header[0] != "frame" ||
      res_csv.header[1] != "x" || res_csv.header[2] != "y" ||
      res_csv.header[3] != "s")
    throw std::runtime_error("results CSV must start with frame,x,y,s");
  if (res_csv.rows.empty()) throw std::runtime_error("results CSV is empty");

  // Reference box dimensions: the tracker states are centers + scale, so the
  // evaluated box reuses the first ground-truth box's size.
  const double ref_w = first_truth->w;
  const double ref_h = first_truth->h;

  std::vector<double> cle, vor;
  std::vector<int> missing;
  for (const auto& row : res_csv.rows) {
    const int frame = std::stoi(row.at(0));
    const auto it = truth.find(frame);
    if (it == truth.end()) {
      missing.push_back(frame);
      continue;
    }
    const TargetState st{std::stod(row.at(1)), std::stod(row.at(2)),
                         std::stod(row.at(3))};
    const Rect box = state_box(st, ref_w, ref_h);
    cle.push_back(center_location_error(box, it->second));
    vor.push_back(voc_overlap(box, it->second));
  }
  if (!missing.empty()) {
    std::ostringstream msg;
    msg << "ground truth is missing frames:";
    for (const int f : missing) msg << " " << f;
    throw std::runtime_error(msg.str());
  }

  double avg_cle = 0, avg_vor = 0;
  for (const double v : cle) avg_cle += v;
  for (const double v : vor) avg_vor += v;
  avg_cle /= double(cle.size());
  avg_vor /= double(vor.size());
  const double p20 = precision_at(cle, 20.0);
  const auto st = default_success_thresholds();
  const auto sc = success_curve(vor, st);
  const double auc = auc_trapezoid(st, sc);

  fs::create_directories(out_dir);
  const fs::path out(out_dir);

  std::ostringstream summary;
  summary << "frames=" << cle.size() << "\n"
          << "avg_cle=" << fmt(avg_cle) << "\n"
          << "avg_vor=" << fmt(avg_vor) << "\n"
          << "precision_at_20=" << fmt(p20) << "\n"
          << "success_auc=" << fmt(auc) << "\n";
  write_file(out / "summary.txt", summary.str());

  const auto pt = default_precision_thresholds();
  const auto pc = precision_curve(cle, pt);
  std::ostringstream pcsv;
  pcsv << "threshold,value\n";
  for (size_t i = 0; i < pt.size(); ++i)
    pcsv << pt[i] << "," << fmt(pc[i]) << "\n";
  write_file(out / "precision_curve.csv", pcsv.str());

  std::ostringstream scsv;
  scsv << "threshold,value\n";
  for (size_t i = 0; i < st.size(); ++i)
    scsv << fmt(st[i]) << "," << fmt(sc[i]) << "\n";
  write_file(out / "success_curve.csv", scsv.str());

  std::cout << summary.str();
  return 0;
}

// --------------------------------------------------------------- selfcheck

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int cmd_selfcheck(const std::string& keep_dir) {
  const fs::path root = keep_dir.empty()
                            ? fs::temp_directory_path() /
                                  ("ssamc-selfcheck-" +
                                   std::to_string(::getpid()))
                            : fs::path(keep_dir);
  fs::create_directories(root);
  int failures = 0;
  auto report = [&](const char* name, bool ok) {
    std::cout << (ok ? "PASS " : "FAIL ") << name << "\n";
    if (!ok) ++failures;
  };

  SynthSpec spec;
  spec.width = 120;
  spec.height = 90;
  spec.frames = 10;
  spec.target_w = 20;
  spec.target_h = 16;
  spec.clutter = 2;
  spec.flicker = 2;
  spec.motion.teleport_frames = {6};
  spec.seed = 7;
  const SynthSequence seq(spec);
  write_sequence(seq, root / "frames");
  report("generate: frames + ground truth written",
         fs::exists(root / "frames" / "frame_000010.ppm") &&
             fs::exists(root / "frames" / "groundtruth.csv"));

  RunConfig cfg;
  cfg.tracker.sampler.k_iters = 60;
  cfg.tracker.seed = 7;
  cfg.frames_dir = (root / "frames").string();
  cfg.init_x = seq.ground_truth()[0].x;
  cfg.init_y = seq.ground_truth()[0].y;
  cfg.init_w = seq.ground_truth()[0].w;
  cfg.init_h = seq.ground_truth()[0].h;

  cfg.out_dir = (root / "run1").string();
  write_file(root / "run1.cfg", serialize_config(cfg));
  cmd_track((root / "run1.cfg").string());
  cfg.out_dir = (root / "run2").string();
  write_file(root / "run2.cfg", serialize_config(cfg));
  cmd_track((root / "run2.cfg").string());

  report("track: deterministic results for a fixed seed",
         slurp(root / "run1" / "results.csv") ==
             slurp(root / "run2" / "results.csv"));

  cmd_eval((root / "run1" / "results.csv").string(),
           (root / "frames" / "groundtruth.csv").string(),
           (root / "eval").string());
  const std::string summary = slurp(root / "eval" / "summary.txt");
  report("eval: summary written", summary.find("avg_cle=") != std::string::npos);

  if (keep_dir.empty()) fs::remove_all(root);
  std::cout << (failures == 0 ? "self-check OK" : "self-check FAILED") << "\n";
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nearest-neighbor-field driven stochastic sampling tracker"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate = app.add_subcommand(
      "generate", "write a synthetic teleport sequence plus ground truth");
  generate->add_option("--out", gen.out, "output directory")->required();
  generate->add_option("--width", gen.spec.width);
  generate->add_option("--height", gen.spec.height);
  generate->add_option("--frames", gen.spec.frames);
  generate->add_option("--target-color", gen.target_color, "r,g,b in [0,1]");
  generate->add_option("--target-w", gen.spec.target_w);
  generate->add_option("--target-h", gen.spec.target_h);
  generate->add_option("--speed", gen.speed, "vx,vy pixels per frame");
  generate->add_option("--teleport", gen.teleport_list,
                       "frame numbers at which the target jumps");
  generate->add_option("--teleport-every", gen.teleport_every,
                       "teleport every k frames");
  generate->add_flag("--no-shot-change", gen.no_shot_change,
                     "keep the scene fixed across teleports");
  generate->add_option("--clutter", gen.spec.clutter);
  generate->add_option("--flicker", gen.spec.flicker);
  generate->add_option("--flicker-amp", gen.spec.flicker_amp);
  generate->add_option("--noise", gen.spec.noise_sigma);
  generate->add_option("--seed", gen.spec.seed);

  std::string config_path;
  auto* track = app.add_subcommand("track", "run the tracker from a config");
  track->add_option("--config", config_path, "key=value config file")
      ->required();

  std::string results_path, truth_path, eval_out;
  auto* eval = app.add_subcommand("eval", "score results against ground truth");
  eval->add_option("--results", results_path)->required();
  eval->add_option("--truth", truth_path)->required();
  eval->add_option("--out", eval_out)->required();

  std::string keep_dir;
  auto* selfcheck =
      app.add_subcommand("selfcheck", "quick end-to-end pipeline check");
  selfcheck->add_option("--keep", keep_dir,
                        "keep artifacts in this directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (generate->parsed()) return cmd_generate(gen);
    if (track->parsed()) return cmd_track(config_path);
    if (eval->parsed()) return cmd_eval(results_path, truth_path, eval_out);
    if (selfcheck->parsed()) return cmd_selfcheck(keep_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
