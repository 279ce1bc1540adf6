#include "leray/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "leray/checkpoint.hpp"
#include "leray/errors.hpp"
#include "leray/spectral.hpp"

namespace leray {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    const auto start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

struct Entry {
  std::string value;
  int line = 0;
};

std::string where(const std::string& key, int line) {
  return "line " + std::to_string(line) + ": " + key;
}

double to_double(std::string_view text, const std::string& key, int line) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  auto [p, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || p != end)
    throw SyntaxError(where(key, line) + ": expected a number, got '" + std::string(text) + "'");
  return v;
}

long long to_int(std::string_view text, const std::string& key, int line) {
  long long v = 0;
  const auto* end = text.data() + text.size();
  auto [p, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || p != end)
    throw SyntaxError(where(key, line) + ": expected an integer, got '" + std::string(text) + "'");
  return v;
}

bool to_bool(std::string_view text, const std::string& key, int line) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw SyntaxError(where(key, line) + ": expected true or false");
}

const std::map<std::string, std::vector<std::string>>& known_keys() {
  static const std::map<std::string, std::vector<std::string>> keys = {
      {"grid", {"dim", "n", "length", "dealias"}},
      {"model", {"kind", "nu", "nu2", "alpha", "theta", "order", "unsafe_subcritical"}},
      {"forcing", {}},
      {"stepper", {"dt", "t_end", "scheme", "sample_every", "cfl_limit"}},
      {"initial",
       {"preset", "seed", "slope", "cutoff", "amplitude", "magnetic_seed", "magnetic_amplitude",
        "path"}},
      {"output", {"directory", "checkpoint_every"}},
      {"sweep", {"s_norm", "target", "tolerance"}},
  };
  return keys;
}

bool is_forcing_key(std::string_view key) {
  if (key.size() <= 4 || key.substr(0, 4) != "mode") return false;
  for (char c : key.substr(4))
    if (c < '0' || c > '9') return false;
  return true;
}

ForcingTerm parse_forcing(std::string_view text, int dim, const std::string& key, int line) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto bar = text.find('|', start);
    parts.push_back(trim(text.substr(start, bar == std::string_view::npos ? text.npos : bar - start)));
    if (bar == std::string_view::npos) break;
    start = bar + 1;
  }
  if (parts.size() < 2 || parts.size() > 3)
    throw SyntaxError(where(key, line) + ": expected 'wavenumber | amplitude [| decay]'");
  ForcingTerm term;
  const auto wave = split_ws(parts[0]);
  const auto amp = split_ws(parts[1]);
  if (static_cast<int>(wave.size()) != dim)
    throw SyntaxError(where(key, line) + ": wavenumber needs " + std::to_string(dim) + " integers");
  if (static_cast<int>(amp.size()) != 2 * dim)
    throw SyntaxError(where(key, line) + ": amplitude needs " + std::to_string(2 * dim) +
                      " numbers (re im per component)");
  for (int d = 0; d < dim; ++d) {
    term.wavenumber[d] = static_cast<int>(to_int(wave[d], key, line));
    term.amplitude[d] = Complex(to_double(amp[2 * d], key, line), to_double(amp[2 * d + 1], key, line));
  }
  if (parts.size() == 3) term.decay = to_double(parts[2], key, line);
  return term;
}

}  // namespace

GridPtr RunConfig::make_grid() const { return WaveGrid::create(dim, n, length, dealias); }

RunConfig parse_config(std::string_view text) {
  std::map<std::string, Entry> entries;  // "section.key"
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    auto line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw SyntaxError("line " + std::to_string(line_no) + ": unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (!known_keys().count(section))
        throw UnknownKey("line " + std::to_string(line_no) + ": unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw SyntaxError("line " + std::to_string(line_no) + ": expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw SyntaxError("line " + std::to_string(line_no) + ": missing key");
    if (section.empty())
      throw SyntaxError(where(key, line_no) + ": key outside of any [section]");
    const auto& allowed = known_keys().at(section);
    const bool ok = section == "forcing" ? is_forcing_key(key)
                                         : std::find(allowed.begin(), allowed.end(), key) != allowed.end();
    if (!ok) throw UnknownKey(where(section + "." + key, line_no) + ": unknown key");
    if (value.empty()) throw SyntaxError(where(section + "." + key, line_no) + ": empty value");
    const std::string full = section + "." + key;
    if (auto it = entries.find(full); it != entries.end())
      throw SyntaxError("duplicate key " + full + " on lines " + std::to_string(it->second.line) +
                        " and " + std::to_string(line_no));
    entries.emplace(full, Entry{value, line_no});
  }

  RunConfig cfg;
  auto get = [&](const std::string& full) -> const Entry* {
    auto it = entries.find(full);
    return it == entries.end() ? nullptr : &it->second;
  };
  auto num = [&](const std::string& full, double& out) {
    if (const auto* e = get(full)) out = to_double(e->value, full, e->line);
  };
  auto integer = [&](const std::string& full, auto& out) {
    if (const auto* e = get(full)) {
      const auto v = to_int(e->value, full, e->line);
      using T = std::remove_reference_t<decltype(out)>;
      if (v < 0 && std::is_unsigned_v<T>)
        throw InvariantViolation(where(full, e->line) + ": must be >= 0");
      out = static_cast<T>(v);
    }
  };
  auto fail = [&](const std::string& full, const std::string& msg) -> void {
    const auto* e = get(full);
    throw InvariantViolation((e ? where(full, e->line) : full) + ": " + msg);
  };

  integer("grid.dim", cfg.dim);
  integer("grid.n", cfg.n);
  if (const auto* e = get("grid.length"))
    cfg.length = (e->value == "2pi") ? WaveGrid::kDefaultLength : to_double(e->value, "grid.length", e->line);
  num("grid.dealias", cfg.dealias);

  if (const auto* e = get("model.kind")) {
    const auto kind = parse_model_kind(e->value);
    if (!kind) throw SyntaxError(where("model.kind", e->line) + ": unknown model '" + e->value + "'");
    cfg.model.kind = *kind;
  }
  num("model.nu", cfg.model.nu);
  num("model.nu2", cfg.model.nu2);
  num("model.alpha", cfg.model.filter.alpha);
  num("model.theta", cfg.model.filter.theta);
  integer("model.order", cfg.model.filter.n_deconv);
  if (const auto* e = get("model.unsafe_subcritical"))
    cfg.model.unsafe_subcritical = to_bool(e->value, "model.unsafe_subcritical", e->line);

  for (const auto& [full, e] : entries)
    if (full.rfind("forcing.", 0) == 0)
      cfg.model.forcing.terms.push_back(parse_forcing(e.value, cfg.dim, full, e.line));

  num("stepper.dt", cfg.stepper.dt);
  num("stepper.t_end", cfg.stepper.t_end);
  if (const auto* e = get("stepper.scheme")) {
    if (e->value == "ifrk4") cfg.stepper.scheme = Scheme::IFRK4;
    else if (e->value == "ifeuler") cfg.stepper.scheme = Scheme::IFEuler;
    else throw SyntaxError(where("stepper.scheme", e->line) + ": expected ifrk4 or ifeuler");
  }
  integer("stepper.sample_every", cfg.stepper.sample_every);
  num("stepper.cfl_limit", cfg.stepper.cfl_limit);

  if (const auto* e = get("initial.preset")) {
    if (e->value == "taylor-green") cfg.initial.preset = InitialPreset::TaylorGreen;
    else if (e->value == "random") cfg.initial.preset = InitialPreset::Random;
    else if (e->value == "checkpoint") cfg.initial.preset = InitialPreset::Checkpoint;
    else throw SyntaxError(where("initial.preset", e->line) + ": expected taylor-green, random or checkpoint");
  }
  integer("initial.seed", cfg.initial.seed);
  num("initial.slope", cfg.initial.slope);
  integer("initial.cutoff", cfg.initial.cutoff);
  num("initial.amplitude", cfg.initial.amplitude);
  if (get("initial.magnetic_seed")) {
    std::uint64_t s = 0;
    integer("initial.magnetic_seed", s);
    cfg.initial.magnetic_seed = s;
  }
  num("initial.magnetic_amplitude", cfg.initial.magnetic_amplitude);
  if (const auto* e = get("initial.path")) cfg.initial.path = e->value;

  if (const auto* e = get("output.directory")) cfg.output_dir = e->value;
  integer("output.checkpoint_every", cfg.checkpoint_every);

  num("sweep.s_norm", cfg.sweep.s_norm);
  if (get("sweep.target")) {
    double v = 0.0;
    num("sweep.target", v);
    cfg.sweep.target = v;
  }
  if (get("sweep.tolerance")) {
    double v = 0.0;
    num("sweep.tolerance", v);
    if (!(v >= 0.0)) fail("sweep.tolerance", "must be >= 0");
    cfg.sweep.tolerance = v;
  }

  // Validation, reported against the key that carries the bad value.
  if (cfg.dim != 2 && cfg.dim != 3) fail("grid.dim", "must be 2 or 3");
  if (cfg.n < 8 || cfg.n % 2 != 0) fail("grid.n", "must be even and >= 8");
  if (!(cfg.length > 0.0)) fail("grid.length", "must be > 0");
  if (!(cfg.dealias > 0.0 && cfg.dealias <= 1.0)) fail("grid.dealias", "must lie in (0, 1]");
  if (!(cfg.model.nu > 0.0)) fail("model.nu", "must be > 0");
  if (cfg.model.kind == ModelKind::MHDDeconv && !(cfg.model.nu2 > 0.0))
    fail("model.nu2", "must be > 0 for mhd-deconv");
  if (!(cfg.model.filter.alpha >= 0.0)) fail("model.alpha", "must be >= 0");
  if (!(cfg.model.filter.theta >= 0.0 && cfg.model.filter.theta <= 1.0))
    fail("model.theta", "must lie in [0, 1]");
  if (cfg.model.kind != ModelKind::NSE && !cfg.model.unsafe_subcritical &&
      cfg.model.filter.theta < kCriticalTheta)
    fail("model.theta", "below the critical value 1/4; set unsafe_subcritical = true to override");
  if (cfg.model.filter.n_deconv < 0) fail("model.order", "must be >= 0");
  if (cfg.model.kind == ModelKind::LerayAlpha && cfg.model.filter.n_deconv != 0)
    fail("model.order", "leray-alpha is the order 0 model; use leray-deconv");
  if (!(cfg.stepper.dt > 0.0)) fail("stepper.dt", "must be > 0");
  if (!(cfg.stepper.t_end >= cfg.stepper.dt)) fail("stepper.t_end", "must be >= dt");
  if (cfg.stepper.sample_every < 1) fail("stepper.sample_every", "must be >= 1");
  if (!(cfg.stepper.cfl_limit > 0.0)) fail("stepper.cfl_limit", "must be > 0");
  if (cfg.initial.preset == InitialPreset::Checkpoint && cfg.initial.path.empty())
    fail("initial.path", "required by the checkpoint preset");
  if (cfg.initial.preset == InitialPreset::TaylorGreen &&
      std::abs(cfg.length - WaveGrid::kDefaultLength) > 1e-12)
    fail("grid.length", "taylor-green needs length = 2pi");

  const auto grid = cfg.make_grid();
  if (cfg.initial.preset == InitialPreset::Random &&
      (cfg.initial.cutoff < 1 || cfg.initial.cutoff > grid->dealias_cutoff()))
    fail("initial.cutoff", "must lie in [1, " + std::to_string(grid->dealias_cutoff()) + "]");
  cfg.model.validate(*grid);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

SimState initial_state(const RunConfig& cfg, const GridPtr& grid) {
  const auto& ic = cfg.initial;
  if (ic.preset == InitialPreset::Checkpoint) {
    auto state = load_checkpoint(ic.path).to_state(grid);
    if (cfg.model.kind == ModelKind::MHDDeconv && !state.b)
      throw MissingMagneticField("checkpoint " + ic.path + " carries no magnetic field");
    if (cfg.model.kind != ModelKind::MHDDeconv) state.b.reset();
    return state;
  }
  SimState s{0.0, 0,
             ic.preset == InitialPreset::TaylorGreen
                 ? taylor_green(grid, ic.amplitude)
                 : random_solenoidal(grid, ic.seed, ic.slope, ic.cutoff),
             std::nullopt};
  if (ic.preset == InitialPreset::Random) s.u *= ic.amplitude;
  if (cfg.model.kind == ModelKind::MHDDeconv) {
    const int cutoff = std::min(ic.cutoff, grid->dealias_cutoff());
    auto b = random_solenoidal(grid, ic.magnetic_seed.value_or(ic.seed + 1), ic.slope, std::max(cutoff, 1));
    b *= ic.magnetic_amplitude;
    s.b = std::move(b);
  }
  return s;
}

}  // namespace leray
