#include "leray/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>

#include "leray/errors.hpp"

namespace leray {

namespace {

constexpr char kMagic[8] = {'L', 'E', 'R', 'A', 'Y', 'C', 'K', '1'};
constexpr std::uint32_t kVersion = 1;
constexpr std::size_t kHeaderSize = 112;

class Writer {
 public:
  void bytes(const void* p, std::size_t n) {
    const auto* c = static_cast<const unsigned char*>(p);
    out_.insert(out_.end(), c, c + n);
  }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<unsigned char>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out_.push_back(static_cast<unsigned char>(v >> (8 * i)));
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  std::vector<unsigned char>& data() { return out_; }

 private:
  std::vector<unsigned char> out_;
};

class Reader {
 public:
  explicit Reader(const std::vector<unsigned char>& in) : in_(in) {}
  void need(std::size_t n) const {
    if (pos_ + n > in_.size()) throw CheckpointError("checkpoint: truncated file");
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(in_[pos_ + i]) << (8 * i);
    pos_ += 4;
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(in_[pos_ + i]) << (8 * i);
    pos_ += 8;
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  std::size_t pos() const { return pos_; }
  void skip(std::size_t n) {
    need(n);
    pos_ += n;
  }

 private:
  const std::vector<unsigned char>& in_;
  std::size_t pos_ = 0;
};

std::vector<std::vector<Complex>> copy_components(const SpectralVectorField& s) {
  std::vector<std::vector<Complex>> out;
  for (int c = 0; c < s.components(); ++c) out.emplace_back(s.component(c).begin(), s.component(c).end());
  return out;
}

}  // namespace

std::uint64_t fnv1a64(const unsigned char* data, std::size_t size) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::size_t i = 0; i < size; ++i) {
    h ^= data[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

Checkpoint Checkpoint::from_state(const SimState& state, const ModelConfig& cfg) {
  const auto& g = state.u.grid();
  Checkpoint ck;
  ck.dim = g.dim();
  ck.n = g.n();
  ck.length = g.length();
  ck.dealias_fraction = g.dealias_fraction();
  ck.dealias_cutoff = g.dealias_cutoff();
  ck.kind = cfg.kind;
  ck.nu = cfg.nu;
  ck.nu2 = cfg.nu2;
  ck.filter = cfg.filter;
  ck.step = state.step;
  ck.t = state.t;
  ck.u = copy_components(state.u);
  if (state.b) ck.b = copy_components(*state.b);
  return ck;
}

SimState Checkpoint::to_state(const GridPtr& grid) const {
  if (grid->dim() != dim || grid->n() != n || grid->length() != length ||
      grid->dealias_cutoff() != dealias_cutoff)
    throw CheckpointError("checkpoint: grid descriptor does not match the configured grid");
  auto fill = [&](const std::vector<std::vector<Complex>>& src) {
    SpectralVectorField f(grid);
    for (int c = 0; c < dim; ++c) std::copy(src[c].begin(), src[c].end(), f.component(c).begin());
    f.set_solenoidal(true);
    return f;
  };
  SimState s{t, step, fill(u), std::nullopt};
  if (!b.empty()) s.b = fill(b);
  return s;
}

std::vector<unsigned char> encode_checkpoint(const Checkpoint& ck) {
  Writer w;
  w.bytes(kMagic, sizeof kMagic);
  w.u32(kVersion);
  w.u32(static_cast<std::uint32_t>(ck.dim));
  w.u32(static_cast<std::uint32_t>(ck.n));
  w.u32(ck.b.empty() ? 0 : 1);
  w.f64(ck.length);
  w.f64(ck.dealias_fraction);
  w.u32(static_cast<std::uint32_t>(ck.dealias_cutoff));
  w.u32(static_cast<std::uint32_t>(ck.kind));
  w.f64(ck.nu);
  w.f64(ck.nu2);
  w.f64(ck.filter.alpha);
  w.f64(ck.filter.theta);
  w.u32(static_cast<std::uint32_t>(ck.filter.n_deconv));
  w.u32(0);
  w.u64(ck.step);
  w.f64(ck.t);
  const std::size_t modes = ck.u.empty() ? 0 : ck.u[0].size();
  w.u64(modes);
  for (const auto* field : {&ck.u, &ck.b})
    for (const auto& comp : *field)
      for (const auto& v : comp) {
        w.f64(v.real());
        w.f64(v.imag());
      }
  const auto h = fnv1a64(w.data().data(), w.data().size());
  w.u64(h);
  return std::move(w.data());
}

Checkpoint decode_checkpoint(const std::vector<unsigned char>& bytes) {
  if (bytes.size() < kHeaderSize + 8 || std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0)
    throw CheckpointError("checkpoint: not a checkpoint file (bad magic)");
  const std::size_t body = bytes.size() - 8;
  Reader tail(bytes);
  tail.skip(body);
  if (tail.u64() != fnv1a64(bytes.data(), body))
    throw CheckpointError("checkpoint: checksum mismatch");

  Reader r(bytes);
  r.skip(sizeof kMagic);
  if (r.u32() != kVersion) throw CheckpointError("checkpoint: unsupported format version");
  Checkpoint ck;
  ck.dim = static_cast<int>(r.u32());
  ck.n = static_cast<int>(r.u32());
  const bool has_b = r.u32() != 0;
  ck.length = r.f64();
  ck.dealias_fraction = r.f64();
  ck.dealias_cutoff = static_cast<int>(r.u32());
  const auto kind = r.u32();
  if (kind > 3) throw CheckpointError("checkpoint: unknown model kind");
  ck.kind = static_cast<ModelKind>(kind);
  ck.nu = r.f64();
  ck.nu2 = r.f64();
  ck.filter.alpha = r.f64();
  ck.filter.theta = r.f64();
  ck.filter.n_deconv = static_cast<int>(r.u32());
  r.u32();
  ck.step = r.u64();
  ck.t = r.f64();
  const std::uint64_t modes = r.u64();
  if (ck.dim != 2 && ck.dim != 3) throw CheckpointError("checkpoint: bad dimension");
  std::uint64_t expect = 1;
  for (int d = 0; d < ck.dim; ++d) expect *= static_cast<std::uint64_t>(ck.n);
  const std::uint64_t fields = has_b ? 2 : 1;
  if (modes != expect || body != kHeaderSize + fields * ck.dim * modes * 16)
    throw CheckpointError("checkpoint: payload size does not match header");
  auto read_field = [&] {
    std::vector<std::vector<Complex>> f(ck.dim, std::vector<Complex>(modes));
    for (auto& comp : f)
      for (auto& v : comp) {
        const double re = r.f64();
        v = Complex(re, r.f64());
      }
    return f;
  };
  ck.u = read_field();
  if (has_b) ck.b = read_field();
  return ck;
}

void write_file_atomic(const std::string& path, const std::vector<unsigned char>& contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp + " for writing");
    out.write(reinterpret_cast<const char*>(contents.data()), static_cast<std::streamsize>(contents.size()));
    if (!out) throw IoError("write failed: " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename " + tmp + " to " + path + ": " + ec.message());
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  write_file_atomic(path, std::vector<unsigned char>(contents.begin(), contents.end()));
}

void save_checkpoint(const std::string& path, const Checkpoint& ck) {
  write_file_atomic(path, encode_checkpoint(ck));
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint " + path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_checkpoint(bytes);
}

}  // namespace leray
