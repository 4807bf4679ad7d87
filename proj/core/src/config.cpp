#include "ssamc/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace ssamc {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value) {
  throw std::invalid_argument("config: bad value '" + value + "' for key '" +
                              key + "'");
}

double to_double(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) bad_value(key, v);
    return d;
  } catch (const std::invalid_argument&) {
    bad_value(key, v);
  } catch (const std::out_of_range&) {
    bad_value(key, v);
  }
}

long long to_int(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const long long i = std::stoll(v, &pos);
    if (pos != v.size()) bad_value(key, v);
    return i;
  } catch (const std::invalid_argument&) {
    bad_value(key, v);
  } catch (const std::out_of_range&) {
    bad_value(key, v);
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "0" || v == "false") return false;
  if (v == "1" || v == "true") return true;
  bad_value(key, v);
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  using Setter = std::function<void(RunConfig&, const std::string&,
                                    const std::string&)>;
  static const std::map<std::string, Setter> setters = {
      {"theta", [](RunConfig& c, auto& k, auto& v) { c.tracker.sampler.theta = to_double(k, v); }},
      {"beta", [](RunConfig& c, auto& k, auto& v) { c.tracker.sampler.beta = to_double(k, v); }},
      {"sigma_x", [](RunConfig& c, auto& k, auto& v) { c.tracker.sampler.sigma_x = to_double(k, v); }},
      {"sigma_y", [](RunConfig& c, auto& k, auto& v) { c.tracker.sampler.sigma_y = to_double(k, v); }},
      {"sigma_s", [](RunConfig& c, auto& k, auto& v) { c.tracker.sampler.sigma_s = to_double(k, v); }},
      {"k_iters", [](RunConfig& c, auto& k, auto& v) { c.tracker.sampler.k_iters = int(to_int(k, v)); }},
      {"n_per_iter", [](RunConfig& c, auto& k, auto& v) { c.tracker.sampler.n_per_iter = int(to_int(k, v)); }},
      {"k0", [](RunConfig& c, auto& k, auto& v) { c.tracker.sampler.k0 = int(to_int(k, v)); }},
      {"tau", [](RunConfig& c, auto& k, auto& v) { c.tracker.sampler.tau = to_double(k, v); }},
      {"smooth_c", [](RunConfig& c, auto& k, auto& v) { c.tracker.sampler.smooth_c = to_double(k, v); }},
      {"epsilon_lambda", [](RunConfig& c, auto& k, auto& v) { c.tracker.sampler.epsilon_lambda = to_double(k, v); }},
      {"dos_mode", [](RunConfig& c, auto& k, auto& v) {
         if (v == "log") c.tracker.sampler.dos_mode = DosUpdateMode::kLogGain;
         else if (v == "additive") c.tracker.sampler.dos_mode = DosUpdateMode::kAdditiveExp;
         else bad_value(k, v);
       }},
      {"update_scale", [](RunConfig& c, auto& k, auto& v) { c.tracker.sampler.update_scale = to_bool(k, v); }},
      {"t_abrupt", [](RunConfig& c, auto& k, auto& v) { c.tracker.t_abrupt = to_double(k, v); }},
      {"grid_rows", [](RunConfig& c, auto& k, auto& v) { c.tracker.grid_rows = int(to_int(k, v)); }},
      {"grid_cols", [](RunConfig& c, auto& k, auto& v) { c.tracker.grid_cols = int(to_int(k, v)); }},
      {"patch_size", [](RunConfig& c, auto& k, auto& v) { c.tracker.patch_size = int(to_int(k, v)); }},
      {"annf_iters", [](RunConfig& c, auto& k, auto& v) { c.tracker.annf_iters = int(to_int(k, v)); }},
      {"gmm_k", [](RunConfig& c, auto& k, auto& v) { c.tracker.gmm_k = int(to_int(k, v)); }},
      {"edge_threshold", [](RunConfig& c, auto& k, auto& v) { c.tracker.edge_threshold = to_double(k, v); }},
      {"seed", [](RunConfig& c, auto& k, auto& v) { c.tracker.seed = uint64_t(to_int(k, v)); }},
      {"dump_annf", [](RunConfig& c, auto& k, auto& v) { c.dump_annf = to_bool(k, v); }},
      {"frames_dir", [](RunConfig& c, auto&, auto& v) { c.frames_dir = v; }},
      {"out_dir", [](RunConfig& c, auto&, auto& v) { c.out_dir = v; }},
      {"init_x", [](RunConfig& c, auto& k, auto& v) { c.init_x = to_double(k, v); }},
      {"init_y", [](RunConfig& c, auto& k, auto& v) { c.init_y = to_double(k, v); }},
      {"init_w", [](RunConfig& c, auto& k, auto& v) { c.init_w = to_double(k, v); }},
      {"init_h", [](RunConfig& c, auto& k, auto& v) { c.init_h = to_double(k, v); }},
  };

  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: line " + std::to_string(line_no) +
                                  " is not key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end())
      throw std::invalid_argument("config: unknown key '" + key + "'");
    it->second(cfg, key, value);
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

void validate_config(const RunConfig& cfg) {
  const auto& s = cfg.tracker.sampler;
  auto require = [](bool ok, const char* key, const char* what) {
    if (!ok)
      throw std::invalid_argument(std::string("config: key '") + key + "' " +
                                  what);
  };
  require(s.theta > 0.0 && s.theta < 1.0, "theta", "must be in (0,1)");
  require(s.beta >= 0.0 && s.beta <= 1.0, "beta", "must be in [0,1]");
  require(s.sigma_x > 0.0, "sigma_x", "must be > 0");
  require(s.sigma_y > 0.0, "sigma_y", "must be > 0");
  require(s.sigma_s > 0.0, "sigma_s", "must be > 0");
  require(s.k_iters >= 1, "k_iters", "must be >= 1");
  require(s.n_per_iter >= 1, "n_per_iter", "must be >= 1");
  require(s.k0 >= 0, "k0", "must be >= 0 (0 = auto)");
  require(s.tau >= 0.0, "tau", "must be >= 0");
  require(s.smooth_c > 0.0, "smooth_c", "must be > 0");
  require(s.epsilon_lambda > 0.0, "epsilon_lambda", "must be > 0");
  require(cfg.tracker.t_abrupt > 0.0 && cfg.tracker.t_abrupt < 1.0, "t_abrupt",
          "must be in (0,1)");
  require(cfg.tracker.grid_rows >= 1, "grid_rows", "must be >= 1");
  require(cfg.tracker.grid_cols >= 1, "grid_cols", "must be >= 1");
  require(cfg.tracker.patch_size >= 1, "patch_size", "must be >= 1");
  require(cfg.tracker.annf_iters >= 1, "annf_iters", "must be >= 1");
  require(cfg.tracker.gmm_k >= 1, "gmm_k", "must be >= 1");
  require(cfg.tracker.edge_threshold > 0.0 && cfg.tracker.edge_threshold < 1.0,
          "edge_threshold", "must be in (0,1)");
}

std::string serialize_config(const RunConfig& cfg) {
  const auto& s = cfg.tracker.sampler;
  std::ostringstream out;
  out << "theta=" << format_double(s.theta) << "\n";
  out << "beta=" << format_double(s.beta) << "\n";
  out << "sigma_x=" << format_double(s.sigma_x) << "\n";
  out << "sigma_y=" << format_double(s.sigma_y) << "\n";
  out << "sigma_s=" << format_double(s.sigma_s) << "\n";
  out << "k_iters=" << s.k_iters << "\n";
  out << "n_per_iter=" << s.n_per_iter << "\n";
  out << "k0=" << s.k0 << "\n";
  out << "tau=" << format_double(s.tau) << "\n";
  out << "smooth_c=" << format_double(s.smooth_c) << "\n";
  out << "epsilon_lambda=" << format_double(s.epsilon_lambda) << "\n";
  out << "dos_mode="
      << (s.dos_mode == DosUpdateMode::kLogGain ? "log" : "additive") << "\n";
  out << "update_scale=" << (s.update_scale ? 1 : 0) << "\n";
  out << "t_abrupt=" << format_double(cfg.tracker.t_abrupt) << "\n";
  out << "grid_rows=" << cfg.tracker.grid_rows << "\n";
  out << "grid_cols=" << cfg.tracker.grid_cols << "\n";
  out << "patch_size=" << cfg.tracker.patch_size << "\n";
  out << "annf_iters=" << cfg.tracker.annf_iters << "\n";
  out << "gmm_k=" << cfg.tracker.gmm_k << "\n";
  out << "edge_threshold=" << format_double(cfg.tracker.edge_threshold) << "\n";
  out << "seed=" << cfg.tracker.seed << "\n";
  out << "dump_annf=" << (cfg.dump_annf ? 1 : 0) << "\n";
  out << "frames_dir=" << cfg.frames_dir << "\n";
  out << "out_dir=" << cfg.out_dir << "\n";
  out << "init_x=" << format_double(cfg.init_x) << "\n";
  out << "init_y=" << format_double(cfg.init_y) << "\n";
  out << "init_w=" << format_double(cfg.init_w) << "\n";
  out << "init_h=" << format_double(cfg.init_h) << "\n";
  return out.str();
}

}  // namespace ssamc
