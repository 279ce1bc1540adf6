#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "leray/dynamics.hpp"

namespace leray {

/// Binary checkpoint, all values little-endian:
///
///   offset  type      field
///   0       char[8]   magic "LERAYCK1"
///   8       u32       format version (1)
///   12      u32       dim
///   16      u32       n
///   20      u32       has_b (0 | 1)
///   24      f64       length L
///   32      f64       dealias fraction
///   40      u32       dealias cutoff
///   44      u32       model kind (0 nse, 1 leray-alpha, 2 leray-deconv, 3 mhd-deconv)
///   48      f64       nu
///   56      f64       nu2
///   64      f64       alpha
///   72      f64       theta
///   80      u32       order N
///   84      u32       reserved (0)
///   88      u64       step
///   96      f64       t
///   104     u64       modes per component (n^d)
///   112     payload   u then b (if present); per component, per storage index
///                     (row-major, first axis slowest): re f64, im f64
///   end-8   u64       FNV-1a 64 of every preceding byte
struct Checkpoint {
  int dim = 3;
  int n = 0;
  double length = 0.0;
  double dealias_fraction = 0.0;
  int dealias_cutoff = 0;
  ModelKind kind = ModelKind::NSE;
  double nu = 0.0;
  double nu2 = 0.0;
  FilterParams filter{};
  std::uint64_t step = 0;
  double t = 0.0;
  std::vector<std::vector<Complex>> u;
  std::vector<std::vector<Complex>> b;  // empty without magnetic field

  static Checkpoint from_state(const SimState& state, const ModelConfig& cfg);
  /// Throws CheckpointError when the grid descriptor disagrees with `grid`.
  SimState to_state(const GridPtr& grid) const;
};

std::vector<unsigned char> encode_checkpoint(const Checkpoint& ck);
/// Throws CheckpointError on bad magic, version, size or checksum.
Checkpoint decode_checkpoint(const std::vector<unsigned char>& bytes);

void save_checkpoint(const std::string& path, const Checkpoint& ck);
Checkpoint load_checkpoint(const std::string& path);

/// FNV-1a 64-bit hash.
std::uint64_t fnv1a64(const unsigned char* data, std::size_t size);

/// Writes `contents` to `path` through a temporary file and a rename.
void write_file_atomic(const std::string& path, const std::string& contents);
void write_file_atomic(const std::string& path, const std::vector<unsigned char>& contents);

}  // namespace leray
