#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "leray/checkpoint.hpp"
#include "leray/commands.hpp"
#include "leray/config.hpp"
#include "leray/errors.hpp"
#include "leray/output.hpp"
#include "leray/spectral.hpp"
#include "oracles.hpp"

using namespace leray;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    std::string tmpl = (fs::temp_directory_path() / "leray-test-XXXXXX").string();
    path = mkdtemp(tmpl.data());
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& s) { std::ofstream(p, std::ios::binary) << s; }

template <class E>
std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const E& e) {
    return e.what();
  }
  return "<no error>";
}

const char* kMinimal = R"(
[grid]
dim = 2
n = 16
[model]
kind = nse
nu = 0.05
)";

}  // namespace

TEST_CASE("minimal config uses the documented defaults") {
  const auto c = parse_config(kMinimal);
  CHECK(c.dim == 2);
  CHECK(c.n == 16);
  CHECK(c.length == WaveGrid::kDefaultLength);
  CHECK(c.model.kind == ModelKind::NSE);
  CHECK(c.model.nu == 0.05);
  CHECK(c.stepper.scheme == Scheme::IFRK4);
  CHECK(c.initial.preset == InitialPreset::TaylorGreen);
  CHECK(c.checkpoint_every == 0);
}

TEST_CASE("full config") {
  const auto c = parse_config(R"(# comment
[grid]
dim = 3
n = 16
length = 2pi   # trailing comment
[model]
kind = leray-deconv
nu = 0.02
alpha = 0.1
theta = 0.5
order = 3
[forcing]
mode1 = 1 0 0 | 0 0 0.5 0 0 0
mode2 = 0 1 1 | 0.5 0 0 0.3 0 -0.3 | 2
[stepper]
dt = 0.002
t_end = 0.1
scheme = ifeuler
sample_every = 5
[initial]
preset = random
seed = 9
slope = -1
cutoff = 4
[output]
directory = somewhere
checkpoint_every = 10
[sweep]
s_norm = 0.5
target = 1
tolerance = 0.05
)");
  CHECK(c.model.kind == ModelKind::LerayDeconv);
  CHECK(c.model.filter.n_deconv == 3);
  REQUIRE(c.model.forcing.terms.size() == 2);
  CHECK(c.model.forcing.terms[0].amplitude[1] == Complex(0.5, 0.0));
  CHECK(c.model.forcing.terms[1].amplitude[2] == Complex(0.0, -0.3));
  CHECK(c.model.forcing.terms[1].decay == 2.0);
  CHECK(c.stepper.scheme == Scheme::IFEuler);
  CHECK(c.stepper.sample_every == 5);
  CHECK(c.initial.preset == InitialPreset::Random);
  CHECK(c.output_dir == "somewhere");
  CHECK(c.checkpoint_every == 10);
  CHECK(c.sweep.target == 1.0);
  CHECK(c.sweep.tolerance == 0.05);
}

TEST_CASE("config errors name the line and key") {
  const std::string base = "[grid]\ndim = 3\nn = 16\n[model]\nkind = leray-alpha\nnu = 0.01\nalpha = 0.1\n";
  const auto theta = error_of<InvariantViolation>(base + "theta = 0.2\n");
  CHECK(theta.find("model.theta") != std::string::npos);
  CHECK(theta.find("line 8") != std::string::npos);
  CHECK_NOTHROW(parse_config(base + "theta = 0.2\nunsafe_subcritical = true\n"));

  const auto dup = error_of<SyntaxError>(base + "nu = 0.02\n");
  CHECK(dup.find("model.nu") != std::string::npos);
  CHECK(dup.find("6") != std::string::npos);
  CHECK(dup.find("8") != std::string::npos);

  CHECK(error_of<UnknownKey>(base + "viscosity = 1\n").find("model.viscosity") != std::string::npos);
  CHECK(error_of<UnknownKey>("[mesh]\n").find("line 1") != std::string::npos);
  CHECK(error_of<SyntaxError>(base + "order = two\n").find("model.order") != std::string::npos);
  CHECK(error_of<SyntaxError>("[grid]\nn 16\n").find("line 2") != std::string::npos);
  CHECK(error_of<InvariantViolation>("[grid]\nn = 12\ndim = 4\n").find("grid.dim") != std::string::npos);
  CHECK(error_of<InvariantViolation>("[grid]\nn = 6\n").find("grid.n") != std::string::npos);
  CHECK(error_of<InvariantViolation>("[grid]\nlength = 3\n").find("grid.length") != std::string::npos);
  CHECK(error_of<SyntaxError>("[forcing]\nmode1 = 1 0 0 | 0 1\n").find("forcing.mode1") != std::string::npos);
  CHECK(error_of<InvariantViolation>("[forcing]\nmode1 = 1 0 0 | 1 0 0 0 0 0\n").find("forcing") !=
        std::string::npos);
}

TEST_CASE("checkpoint encoding") {
  const auto g = WaveGrid::create(3, 8, 3.0);
  ModelConfig m;
  m.kind = ModelKind::MHDDeconv;
  m.nu = 0.01;
  m.nu2 = 0.02;
  m.filter = {0.1, 0.5, 2};
  SimState s{0.25, 17, random_solenoidal(g, 1, -1.0, 2), random_solenoidal(g, 2, -1.0, 2)};
  const auto bytes = encode_checkpoint(Checkpoint::from_state(s, m));

  SUBCASE("layout") {
    const std::size_t modes = g->size();
    CHECK(bytes.size() == 112 + 2 * 3 * modes * 16 + 8);
    CHECK(std::string(bytes.begin(), bytes.begin() + 8) == "LERAYCK1");
    auto u32 = [&](std::size_t o) {
      std::uint32_t v;
      std::memcpy(&v, bytes.data() + o, 4);
      return v;
    };
    auto f64 = [&](std::size_t o) {
      double v;
      std::memcpy(&v, bytes.data() + o, 8);
      return v;
    };
    CHECK(u32(8) == 1);
    CHECK(u32(12) == 3);
    CHECK(u32(16) == 8);
    CHECK(u32(20) == 1);
    CHECK(f64(24) == 3.0);
    CHECK(u32(44) == 3);
    CHECK(f64(56) == 0.02);
    CHECK(u32(80) == 2);
    CHECK(f64(96) == 0.25);
    CHECK(f64(112) == s.u(0, 0).real());
    std::uint64_t sum;
    std::memcpy(&sum, bytes.data() + bytes.size() - 8, 8);
    CHECK(sum == fnv1a64(bytes.data(), bytes.size() - 8));
  }

  SUBCASE("round trip") {
    const auto back = decode_checkpoint(bytes).to_state(g);
    CHECK(back.step == 17);
    CHECK(back.t == 0.25);
    CHECK(back.u.identical(s.u));
    REQUIRE(back.b.has_value());
    CHECK(back.b->identical(*s.b));
    CHECK(encode_checkpoint(decode_checkpoint(bytes)) == bytes);
  }

  SUBCASE("corruption and mismatch") {
    auto bad = bytes;
    bad[200] ^= 1;
    CHECK_THROWS_AS(decode_checkpoint(bad), CheckpointError);
    bad = bytes;
    bad[0] = 'X';
    CHECK_THROWS_AS(decode_checkpoint(bad), CheckpointError);
    bad.assign(bytes.begin(), bytes.begin() + 50);
    CHECK_THROWS_AS(decode_checkpoint(bad), CheckpointError);
    CHECK_THROWS_AS(decode_checkpoint(bytes).to_state(WaveGrid::create(3, 8)), CheckpointError);
    CHECK_THROWS_AS(load_checkpoint("/nonexistent/ck.bin"), Error);
  }
}

TEST_CASE("run command") {
  TempDir tmp;
  const auto out = tmp.path / "out";
  const double nu = 0.05;
  const std::string cfg = std::string(kMinimal) + "[stepper]\ndt = 0.001\nt_end = 0.01\n[output]\ndirectory = " +
                          out.string() + "\ncheckpoint_every = 5\n";
  spit(tmp.path / "tg.cfg", cfg);
  std::ostringstream log;
  REQUIRE(cmd_run((tmp.path / "tg.cfg").string(), log) == 0);

  std::istringstream csv(slurp(out / "energy.csv"));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "t,e_kin,e_mag,grad_u,grad_b,inject,h_half,div_residual");
  int rows = 0;
  double worst = 0.0;
  while (std::getline(csv, line)) {
    const double t = std::stod(line.substr(0, line.find(',')));
    const auto rest = line.substr(line.find(',') + 1);
    const double e = std::stod(rest.substr(0, rest.find(',')));
    worst = std::max(worst, std::abs(e - 0.25 * std::exp(-4.0 * nu * t)));
    ++rows;
  }
  CHECK(rows == 11);
  CHECK(worst < 1e-10);
  CHECK(fs::exists(out / "checkpoint_00000005.bin"));
  CHECK(fs::exists(out / "checkpoint_00000010.bin"));
  CHECK(fs::exists(out / "final.bin"));
  CHECK(slurp(out / "summary.txt").find("budget_residual = ") != std::string::npos);

  const auto first_csv = slurp(out / "energy.csv");
  const auto first_final = slurp(out / "final.bin");
  REQUIRE(cmd_run((tmp.path / "tg.cfg").string(), log) == 0);
  CHECK(slurp(out / "energy.csv") == first_csv);
  CHECK(slurp(out / "final.bin") == first_final);

  const auto out2 = tmp.path / "resumed";
  spit(tmp.path / "resume.cfg", std::string(kMinimal) +
                                    "[stepper]\ndt = 0.001\nt_end = 0.01\n[initial]\npreset = checkpoint\npath = " +
                                    (out / "checkpoint_00000005.bin").string() + "\n[output]\ndirectory = " +
                                    out2.string() + "\n");
  REQUIRE(cmd_run((tmp.path / "resume.cfg").string(), log) == 0);
  CHECK(slurp(out2 / "final.bin") == first_final);

  CHECK_THROWS_AS(cmd_run((tmp.path / "missing.cfg").string(), log), IoError);
}

TEST_CASE("sweep commands report failure through the exit status") {
  TempDir tmp;
  const std::string head = "[grid]\ndim = 3\nn = 16\n[model]\nkind = leray-deconv\nnu = 0.01\ntheta = 0.5\n";
  const std::string tail = "[initial]\npreset = random\nseed = 3\nslope = -1\ncutoff = 4\n[output]\ndirectory = " +
                           (tmp.path / "o").string() + "\n";
  std::ostringstream log;

  spit(tmp.path / "a.cfg", head + tail);
  const std::vector<double> alphas = {1e-4, 5e-5, 2.5e-5};
  CHECK(cmd_sweep_alpha((tmp.path / "a.cfg").string(), alphas, log) == 0);
  const auto csv = slurp(tmp.path / "o" / "sweep.csv");
  CHECK(csv.rfind("parameter,error\n", 0) == 0);
  CHECK(csv.find("pass,1") != std::string::npos);

  spit(tmp.path / "b.cfg", head + tail + "[sweep]\ntarget = 2\n");
  CHECK(cmd_sweep_alpha((tmp.path / "b.cfg").string(), alphas, log) == kSweepFailedExit);
  CHECK(slurp(tmp.path / "o" / "sweep.csv").find("pass,0") != std::string::npos);

  spit(tmp.path / "c.cfg", head + "alpha = 0\n" + tail);
  CHECK(cmd_sweep_n((tmp.path / "c.cfg").string(), {0, 1, 2}, log) == 0);
  CHECK(slurp(tmp.path / "o" / "sweep.csv").find("fit,exact") != std::string::npos);

  spit(tmp.path / "d.cfg", head + "alpha = 0.5\n" + tail);
  CHECK(cmd_sweep_n((tmp.path / "d.cfg").string(), {16, 20, 24, 28, 32}, log) == 0);
}

TEST_CASE("multiplier table") {
  const auto g = WaveGrid::create(2, 8);
  const FilterParams p{0.5, 0.5, 1};
  std::istringstream in(multiplier_table_csv(*g, p));
  std::string line;
  std::getline(in, line);
  CHECK(line == "k,G,H_N");
  std::vector<double> ks;
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::string k, gv, h;
    std::getline(row, k, ',');
    std::getline(row, gv, ',');
    std::getline(row, h, ',');
    ks.push_back(std::stod(k));
    const double x = oracle::strength(0.5, 0.5, ks.back());
    CHECK(std::stod(gv) == doctest::Approx(1.0 + x).epsilon(1e-15));
    CHECK(std::stod(h) == doctest::Approx(1.0 - std::pow(x / (1.0 + x), 2)).epsilon(1e-15));
  }
  // cutoff 2 on n = 8: |a|^2 in {1, 2, 4, 5, 8}
  REQUIRE(ks.size() == 5);
  CHECK(std::is_sorted(ks.begin(), ks.end()));
  CHECK(ks.back() == doctest::Approx(std::sqrt(8.0)));
}

TEST_CASE("format_double round trips") {
  for (double v : {0.0, 1.0, -2.5, 0.1, 1.0 / 3.0, 6.02214076e23, 5e-324, 1.7976931348623157e308})
    CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(-3.0) == "-3");
}
