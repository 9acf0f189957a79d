// Radial space-time samples V(r_i, t_n) on a rectangular grid.
#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace dwave {

/// Samples on r_i = i*dr (i = 0..nr) and t_n = n*dt (n = 0..nt), row-major in
/// time. Values vanish outside the cone r <= t + k.
class SpaceTimeField {
 public:
  SpaceTimeField() = default;
  SpaceTimeField(std::size_t nr, std::size_t nt, double dr, double dt, double k);

  /// Field sampled from fn(r, t) inside the cone and zero outside.
  static SpaceTimeField sample(std::size_t nr, std::size_t nt, double dr, double dt, double k,
                               const std::function<double(double, double)>& fn);

  std::size_t nr() const { return nr_; }
  std::size_t nt() const { return nt_; }
  double dr() const { return dr_; }
  double dt() const { return dt_; }
  double k() const { return k_; }
  double r(std::size_t i) const { return static_cast<double>(i) * dr_; }
  double t(std::size_t n) const { return static_cast<double>(n) * dt_; }
  double t_end() const { return t(nt_); }
  double support_radius(std::size_t n) const { return t(n) + k_; }
  bool empty() const { return data_.empty(); }

  double& at(std::size_t i, std::size_t n) { return data_[n * (nr_ + 1) + i]; }
  double at(std::size_t i, std::size_t n) const { return data_[n * (nr_ + 1) + i]; }
  std::span<double> row(std::size_t n) { return {data_.data() + n * (nr_ + 1), nr_ + 1}; }
  std::span<const double> row(std::size_t n) const { return {data_.data() + n * (nr_ + 1), nr_ + 1}; }
  const std::vector<double>& samples() const { return data_; }

  /// Piecewise-cubic interpolation in r and t; zero outside the cone and
  /// beyond the radial grid.
  double interpolate(double r, double t) const;

  /// True when every sample with r_i > t_n + k is zero.
  bool respects_support(double slack = 0.0) const;

  /// Pointwise map (same grid).
  SpaceTimeField map(const std::function<double(double, double, double)>& fn) const;

  /// CSV layout: header line "nr,nt,dr,dt,k", then one row of nr+1 samples per
  /// time level.
  void write_csv(std::ostream& os) const;
  static SpaceTimeField read_csv(std::istream& is);
  /// Binary layout: uint64 nr, uint64 nt, double dr, dt, k, then samples.
  void write_binary(std::ostream& os) const;
  static SpaceTimeField read_binary(std::istream& is);

 private:
  std::size_t nr_ = 0;
  std::size_t nt_ = 0;
  double dr_ = 0.0;
  double dt_ = 0.0;
  double k_ = 1.0;
  std::vector<double> data_;
};

}  // namespace dwave
