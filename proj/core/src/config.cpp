#include "resgld/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <vector>

#include "resgld/errors.hpp"

namespace resgld {

const char* to_string(SamplerKind kind) {
  switch (kind) {
    case SamplerKind::sgld: return "sgld";
    case SamplerKind::cyc_sgld: return "cyc_sgld";
    case SamplerKind::re_sgld: return "re_sgld";
    case SamplerKind::vr_re_sgld: return "vr_re_sgld";
    case SamplerKind::avr_re_sgld: return "avr_re_sgld";
  }
  return "?";
}

SamplerKind sampler_from_string(const std::string& name) {
  if (name == "sgld") return SamplerKind::sgld;
  if (name == "cyc_sgld") return SamplerKind::cyc_sgld;
  if (name == "re_sgld") return SamplerKind::re_sgld;
  if (name == "vr_re_sgld") return SamplerKind::vr_re_sgld;
  if (name == "avr_re_sgld") return SamplerKind::avr_re_sgld;
  throw config_error("unknown sampler: " + name);
}

static const char* to_string(ScheduleKind kind) {
  switch (kind) {
    case ScheduleKind::constant: return "constant";
    case ScheduleKind::geometric_decay: return "geometric";
    case ScheduleKind::cosine_cyclic: return "cosine";
  }
  return "?";
}

static ScheduleKind schedule_from_string(const std::string& name) {
  if (name == "constant") return ScheduleKind::constant;
  if (name == "geometric") return ScheduleKind::geometric_decay;
  if (name == "cosine") return ScheduleKind::cosine_cyclic;
  throw config_error("unknown schedule kind: " + name);
}

void RunConfig::validate() const {
  model.validate();
  if (!(eta1 > 0.0) || !(eta2 > 0.0)) throw config_error("eta1 and eta2 must be > 0");
  if (!(tau1 > 0.0) || !(tau2 > 0.0)) throw config_error("tau1 and tau2 must be > 0");
  if (tau1 > tau2) throw config_error("constraint violated: tau1 must be <= tau2");
  if (batch_size < 1 || batch_size > model.n_data)
    throw config_error("constraint violated: batch_size must be in [1, n_data]");
  if (cv_period < 0) throw config_error("cv_period must be >= 0 (0 disables refreshes)");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw config_error("gamma must be in (0, 1]");
  if (!(f0 > 0.0)) throw config_error("f0 must be > 0");
  if (!(f_growth > 0.0)) throw config_error("f_growth must be > 0");
  if (swap_period < 0) throw config_error("swap_period must be >= 0");
  if (steps < 0) throw config_error("steps must be >= 0");
  if (thinning < 1) throw config_error("thinning must be >= 1");
  if (!(burn_in_frac >= 0.0 && burn_in_frac < 1.0))
    throw config_error("burn_in_frac must be in [0, 1)");
  if (probe_count < 0) throw config_error("probe_count must be >= 0 (0 disables probes)");
  if (!(collect_threshold >= 0.0 && collect_threshold < 1.0))
    throw config_error("collect_threshold must be in [0, 1)");
  if (!(grid_lo < grid_hi)) throw config_error("grid_lo must be < grid_hi");
  if (grid_n < 100) throw config_error("grid_n must be >= 100");
  if (lr_kind == ScheduleKind::geometric_decay && !(lr_decay > 0.0 && lr_decay <= 1.0))
    throw config_error("lr_decay must be in (0, 1]");
  if (lr_kind == ScheduleKind::cosine_cyclic && (lr_cycles < 1 || lr_cycles > steps))
    throw config_error("lr_cycles must be in [1, steps]");
}

namespace {

struct Field {
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, const std::string&)> set;
};

template <typename T>
T parse_number(const std::string& value) {
  std::istringstream in(value);
  T out{};
  in >> out;
  if (in.fail() || !(in >> std::ws).eof()) throw config_error("bad numeric value '" + value + "'");
  return out;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const std::vector<std::pair<std::string, Field>>& fields() {
  using S = const std::string&;
  static const std::vector<std::pair<std::string, Field>> table = {
      {"sampler",
       {[](const RunConfig& c) { return std::string(to_string(c.sampler)); },
        [](RunConfig& c, S v) { c.sampler = sampler_from_string(v); }}},
      {"n_data",
       {[](const RunConfig& c) { return std::to_string(c.model.n_data); },
        [](RunConfig& c, S v) { c.model.n_data = parse_number<std::size_t>(v); }}},
      {"sep",
       {[](const RunConfig& c) { return format_double(c.model.sep); },
        [](RunConfig& c, S v) { c.model.sep = parse_number<double>(v); }}},
      {"noise_sd",
       {[](const RunConfig& c) { return format_double(c.model.noise_sd); },
        [](RunConfig& c, S v) { c.model.noise_sd = parse_number<double>(v); }}},
      {"prior_var",
       {[](const RunConfig& c) { return format_double(c.model.prior_var); },
        [](RunConfig& c, S v) { c.model.prior_var = parse_number<double>(v); }}},
      {"gen_theta",
       {[](const RunConfig& c) { return format_double(c.model.gen_theta); },
        [](RunConfig& c, S v) { c.model.gen_theta = parse_number<double>(v); }}},
      {"gen_seed",
       {[](const RunConfig& c) { return std::to_string(c.model.gen_seed); },
        [](RunConfig& c, S v) { c.model.gen_seed = parse_number<std::uint64_t>(v); }}},
      {"eta1",
       {[](const RunConfig& c) { return format_double(c.eta1); },
        [](RunConfig& c, S v) { c.eta1 = parse_number<double>(v); }}},
      {"eta2",
       {[](const RunConfig& c) { return format_double(c.eta2); },
        [](RunConfig& c, S v) { c.eta2 = parse_number<double>(v); }}},
      {"tau1",
       {[](const RunConfig& c) { return format_double(c.tau1); },
        [](RunConfig& c, S v) { c.tau1 = parse_number<double>(v); }}},
      {"tau2",
       {[](const RunConfig& c) { return format_double(c.tau2); },
        [](RunConfig& c, S v) { c.tau2 = parse_number<double>(v); }}},
      {"lr_kind",
       {[](const RunConfig& c) { return std::string(to_string(c.lr_kind)); },
        [](RunConfig& c, S v) { c.lr_kind = schedule_from_string(v); }}},
      {"lr_decay",
       {[](const RunConfig& c) { return format_double(c.lr_decay); },
        [](RunConfig& c, S v) { c.lr_decay = parse_number<double>(v); }}},
      {"lr_cycles",
       {[](const RunConfig& c) { return std::to_string(c.lr_cycles); },
        [](RunConfig& c, S v) { c.lr_cycles = parse_number<long>(v); }}},
      {"lr_start_step",
       {[](const RunConfig& c) { return std::to_string(c.lr_start_step); },
        [](RunConfig& c, S v) { c.lr_start_step = parse_number<long>(v); }}},
      {"batch_size",
       {[](const RunConfig& c) { return std::to_string(c.batch_size); },
        [](RunConfig& c, S v) { c.batch_size = parse_number<std::size_t>(v); }}},
      {"cv_period",
       {[](const RunConfig& c) { return std::to_string(c.cv_period); },
        [](RunConfig& c, S v) { c.cv_period = parse_number<long>(v); }}},
      {"gamma",
       {[](const RunConfig& c) { return format_double(c.gamma); },
        [](RunConfig& c, S v) { c.gamma = parse_number<double>(v); }}},
      {"f0",
       {[](const RunConfig& c) { return format_double(c.f0); },
        [](RunConfig& c, S v) { c.f0 = parse_number<double>(v); }}},
      {"f_growth",
       {[](const RunConfig& c) { return format_double(c.f_growth); },
        [](RunConfig& c, S v) { c.f_growth = parse_number<double>(v); }}},
      {"intensity_r",
       {[](const RunConfig& c) { return format_double(c.intensity_r); },
        [](RunConfig& c, S v) { c.intensity_r = parse_number<double>(v); }}},
      {"swap_period",
       {[](const RunConfig& c) { return std::to_string(c.swap_period); },
        [](RunConfig& c, S v) { c.swap_period = parse_number<long>(v); }}},
      {"steps",
       {[](const RunConfig& c) { return std::to_string(c.steps); },
        [](RunConfig& c, S v) { c.steps = parse_number<long>(v); }}},
      {"thinning",
       {[](const RunConfig& c) { return std::to_string(c.thinning); },
        [](RunConfig& c, S v) { c.thinning = parse_number<long>(v); }}},
      {"burn_in_frac",
       {[](const RunConfig& c) { return format_double(c.burn_in_frac); },
        [](RunConfig& c, S v) { c.burn_in_frac = parse_number<double>(v); }}},
      {"probe_count",
       {[](const RunConfig& c) { return std::to_string(c.probe_count); },
        [](RunConfig& c, S v) { c.probe_count = parse_number<int>(v); }}},
      {"coeff_c",
       {[](const RunConfig& c) { return format_double(c.coeff_c); },
        [](RunConfig& c, S v) { c.coeff_c = parse_number<double>(v); }}},
      {"master_seed",
       {[](const RunConfig& c) { return std::to_string(c.master_seed); },
        [](RunConfig& c, S v) { c.master_seed = parse_number<std::uint64_t>(v); }}},
      {"theta0_low",
       {[](const RunConfig& c) { return format_double(c.theta0_low); },
        [](RunConfig& c, S v) { c.theta0_low = parse_number<double>(v); }}},
      {"theta0_high",
       {[](const RunConfig& c) { return format_double(c.theta0_high); },
        [](RunConfig& c, S v) { c.theta0_high = parse_number<double>(v); }}},
      {"collect_threshold",
       {[](const RunConfig& c) { return format_double(c.collect_threshold); },
        [](RunConfig& c, S v) { c.collect_threshold = parse_number<double>(v); }}},
      {"grid_lo",
       {[](const RunConfig& c) { return format_double(c.grid_lo); },
        [](RunConfig& c, S v) { c.grid_lo = parse_number<double>(v); }}},
      {"grid_hi",
       {[](const RunConfig& c) { return format_double(c.grid_hi); },
        [](RunConfig& c, S v) { c.grid_hi = parse_number<double>(v); }}},
      {"grid_n",
       {[](const RunConfig& c) { return std::to_string(c.grid_n); },
        [](RunConfig& c, S v) { c.grid_n = parse_number<std::size_t>(v); }}},
      {"trace_path",
       {[](const RunConfig& c) { return c.trace_path; },
        [](RunConfig& c, S v) { c.trace_path = v; }}},
  };
  return table;
}

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

}  // namespace

void set_config_key(RunConfig& cfg, const std::string& key, const std::string& value) {
  for (const auto& [name, field] : fields()) {
    if (name == key) {
      field.set(cfg, value);
      return;
    }
  }
  throw config_error("unknown key '" + key + "'");
}

RunConfig parse_config(std::istream& in) {
  RunConfig cfg;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw config_error("line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    try {
      set_config_key(cfg, key, value);
    } catch (const config_error& e) {
      throw config_error("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  cfg.validate();
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open config file: " + path);
  return parse_config(in);
}

std::string serialize_config(const RunConfig& cfg) {
  std::string out;
  for (const auto& [name, field] : fields()) {
    out += name;
    out += " = ";
    out += field.get(cfg);
    out += '\n';
  }
  return out;
}

void apply_env_overrides(RunConfig& cfg, const std::string& prefix) {
  for (const auto& [name, field] : fields()) {
    std::string env_name = prefix;
    for (const char ch : name) env_name += static_cast<char>(std::toupper(ch));
    if (const char* value = std::getenv(env_name.c_str())) field.set(cfg, value);
  }
}

RunConfig preset(const std::string& name) {
  RunConfig cfg;
  if (name == "sec51") {
    // Bimodal mixture benchmark, tuned so the tempered chain actually
    // traverses the energy barrier at n_data = 5000 within the step budget:
    // tau2 scales with the barrier height (proportional to n_data) and the
    // swap energies are evaluated on the full dataset so their noise cannot
    // drown the acceptance test.
    cfg.sampler = SamplerKind::vr_re_sgld;
    cfg.model.n_data = 5000;
    cfg.model.sep = 20.0;
    cfg.model.noise_sd = 5.0;
    cfg.model.prior_var = 1e4;
    cfg.model.gen_theta = -5.0;
    cfg.model.gen_seed = 42;
    cfg.eta1 = cfg.eta2 = 1e-4;
    cfg.tau1 = 1.0;
    cfg.tau2 = 12000.0;
    cfg.batch_size = 5000;
    cfg.cv_period = 50;
    cfg.f0 = 2.0;
    cfg.steps = 200000;
    cfg.thinning = 50;
    cfg.burn_in_frac = 0.2;
    cfg.theta0_low = cfg.theta0_high = 30.0;
    return cfg;
  }
  if (name == "sec51-paper") {
    // Literature parameter values for the same experiment. At this scale the
    // tempered barrier is ~19 units, so neither chain leaves the mode it
    // starts in within any desk-size budget; kept for completeness and for
    // full-size (n_data = 1e5) runs.
    cfg.sampler = SamplerKind::vr_re_sgld;
    cfg.model.n_data = 5000;
    cfg.model.sep = 20.0;
    cfg.model.noise_sd = 5.0;
    cfg.model.prior_var = 100.0;
    cfg.model.gen_theta = -5.0;
    cfg.model.gen_seed = 42;
    cfg.eta1 = cfg.eta2 = 1e-4;
    cfg.tau1 = 1.0;
    cfg.tau2 = 1000.0;
    cfg.batch_size = 128;
    cfg.cv_period = 50;
    cfg.f0 = 2.0;
    cfg.steps = 200000;
    cfg.thinning = 50;
    cfg.burn_in_frac = 0.2;
    cfg.theta0_low = cfg.theta0_high = 30.0;
    return cfg;
  }
  if (name == "cyc51") {
    cfg.sampler = SamplerKind::cyc_sgld;
    cfg.model.n_data = 5000;
    cfg.model.prior_var = 1e4;
    cfg.eta1 = cfg.eta2 = 1e-3;
    cfg.lr_kind = ScheduleKind::cosine_cyclic;
    cfg.lr_cycles = 30;
    cfg.collect_threshold = 0.25;
    cfg.steps = 200000;
    cfg.thinning = 10;
    cfg.burn_in_frac = 0.0;
    cfg.theta0_low = cfg.theta0_high = 0.0;
    return cfg;
  }
  throw config_error("unknown preset: " + name);
}

}  // namespace resgld
