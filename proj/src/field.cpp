#include "leray/field.hpp"

#include <algorithm>
#include <cstring>
#include <string>

#include "leray/errors.hpp"

namespace leray {

RealVectorField::RealVectorField(GridPtr grid, int components) : grid_(std::move(grid)) {
  data_.assign(components, std::vector<double>(grid_->size(), 0.0));
}

SpectralVectorField::SpectralVectorField(GridPtr grid) : SpectralVectorField(grid, grid->dim()) {}

SpectralVectorField::SpectralVectorField(GridPtr grid, int components) : grid_(std::move(grid)) {
  data_.assign(components, std::vector<Complex>(grid_->size(), Complex{}));
}

void SpectralVectorField::set_zero() {
  for (auto& c : data_) std::fill(c.begin(), c.end(), Complex{});
}

SpectralVectorField& SpectralVectorField::operator+=(const SpectralVectorField& other) {
  require_same_grid(*grid_, other.grid(), "operator+=");
  for (int c = 0; c < components(); ++c)
    for (std::size_t i = 0; i < data_[c].size(); ++i) data_[c][i] += other.data_[c][i];
  solenoidal_ = solenoidal_ && other.solenoidal_;
  return *this;
}

SpectralVectorField& SpectralVectorField::operator-=(const SpectralVectorField& other) {
  require_same_grid(*grid_, other.grid(), "operator-=");
  for (int c = 0; c < components(); ++c)
    for (std::size_t i = 0; i < data_[c].size(); ++i) data_[c][i] -= other.data_[c][i];
  solenoidal_ = solenoidal_ && other.solenoidal_;
  return *this;
}

SpectralVectorField& SpectralVectorField::operator*=(double s) {
  for (auto& c : data_)
    for (auto& v : c) v *= s;
  return *this;
}

void SpectralVectorField::axpy(double s, const SpectralVectorField& other) {
  require_same_grid(*grid_, other.grid(), "axpy");
  for (int c = 0; c < components(); ++c)
    for (std::size_t i = 0; i < data_[c].size(); ++i) data_[c][i] += s * other.data_[c][i];
  solenoidal_ = solenoidal_ && other.solenoidal_;
}

bool SpectralVectorField::identical(const SpectralVectorField& other) const {
  if (!grid_->same_as(other.grid()) || components() != other.components()) return false;
  for (int c = 0; c < components(); ++c)
    if (std::memcmp(data_[c].data(), other.data_[c].data(), data_[c].size() * sizeof(Complex)) != 0)
      return false;
  return true;
}

SpectralScalarField::SpectralScalarField(GridPtr grid)
    : grid_(std::move(grid)), data_(grid_->size(), Complex{}) {}

void require_same_grid(const WaveGrid& a, const WaveGrid& b, const char* where) {
  if (!a.same_as(b)) throw GridMismatch(std::string(where) + ": fields live on different grids");
}

}  // namespace leray
