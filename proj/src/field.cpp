#include "dwave/field.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace dwave {

SpaceTimeField::SpaceTimeField(std::size_t nr, std::size_t nt, double dr, double dt, double k)
    : nr_(nr), nt_(nt), dr_(dr), dt_(dt), k_(k), data_((nr + 1) * (nt + 1), 0.0) {
  if (!(dr > 0.0) || !(dt > 0.0)) throw std::invalid_argument("SpaceTimeField: spacings must be positive");
  if (nr == 0) throw std::invalid_argument("SpaceTimeField: need at least one radial interval");
}

SpaceTimeField SpaceTimeField::sample(std::size_t nr, std::size_t nt, double dr, double dt, double k,
                                      const std::function<double(double, double)>& fn) {
  SpaceTimeField f(nr, nt, dr, dt, k);
  for (std::size_t n = 0; n <= nt; ++n)
    for (std::size_t i = 0; i <= nr; ++i)
      if (f.r(i) <= f.support_radius(n)) f.at(i, n) = fn(f.r(i), f.t(n));
  return f;
}

namespace {

// Cubic Lagrange weights for x in [1, 2] on nodes 0..3, shifted stencils at
// the ends.
void cubic_weights(double x, double w[4]) {
  const double a = x, b = x - 1.0, c = x - 2.0, d = x - 3.0;
  w[0] = -b * c * d / 6.0;
  w[1] = a * c * d / 2.0;
  w[2] = -a * b * d / 2.0;
  w[3] = a * b * c / 6.0;
}

// Stencil start and local coordinate for position s (in grid units) on
// nodes 0..n.
void stencil(double s, std::size_t n, std::ptrdiff_t& start, double& local) {
  if (n < 3) {
    start = 0;
    local = s;
    return;
  }
  auto base = static_cast<std::ptrdiff_t>(std::floor(s)) - 1;
  base = std::clamp<std::ptrdiff_t>(base, 0, static_cast<std::ptrdiff_t>(n) - 3);
  start = base;
  local = s - static_cast<double>(base);
}

}  // namespace

double SpaceTimeField::interpolate(double r, double t) const {
  if (data_.empty()) throw std::logic_error("SpaceTimeField::interpolate: empty field");
  if (r < 0.0) r = -r;
  if (t < 0.0 || t > t_end() * (1.0 + 1e-12) + 1e-14) throw std::out_of_range("SpaceTimeField: t outside grid");
  if (r > t + k_ || r > this->r(nr_)) return 0.0;
  const double sr = r / dr_;
  const double st = std::min(t / dt_, static_cast<double>(nt_));

  if (nr_ < 3 || nt_ < 3) {
    // Bilinear fallback on tiny grids.
    const auto i = std::min<std::size_t>(static_cast<std::size_t>(sr), nr_ - 1);
    const auto n = std::min<std::size_t>(static_cast<std::size_t>(st), nt_ > 0 ? nt_ - 1 : 0);
    const double ar = sr - i;
    if (nt_ == 0) return (1 - ar) * at(i, 0) + ar * at(i + 1, 0);
    const double at_ = st - n;
    return (1 - ar) * (1 - at_) * at(i, n) + ar * (1 - at_) * at(i + 1, n) + (1 - ar) * at_ * at(i, n + 1) +
           ar * at_ * at(i + 1, n + 1);
  }

  std::ptrdiff_t i0, n0;
  double xr, xt;
  stencil(sr, nr_, i0, xr);
  stencil(st, nt_, n0, xt);
  double wr[4], wt[4];
  cubic_weights(xr, wr);
  cubic_weights(xt, wt);
  double v = 0.0;
  for (int b = 0; b < 4; ++b) {
    const double* rowp = data_.data() + static_cast<std::size_t>(n0 + b) * (nr_ + 1) + i0;
    v += wt[b] * (wr[0] * rowp[0] + wr[1] * rowp[1] + wr[2] * rowp[2] + wr[3] * rowp[3]);
  }
  return v;
}

bool SpaceTimeField::respects_support(double slack) const {
  for (std::size_t n = 0; n <= nt_; ++n)
    for (std::size_t i = 0; i <= nr_; ++i)
      if (r(i) > support_radius(n) + slack && at(i, n) != 0.0) return false;
  return true;
}

SpaceTimeField SpaceTimeField::map(const std::function<double(double, double, double)>& fn) const {
  SpaceTimeField out = *this;
  for (std::size_t n = 0; n <= nt_; ++n)
    for (std::size_t i = 0; i <= nr_; ++i) out.at(i, n) = fn(r(i), t(n), at(i, n));
  return out;
}

void SpaceTimeField::write_csv(std::ostream& os) const {
  os << std::setprecision(17);
  os << "nr,nt,dr,dt,k\n" << nr_ << ',' << nt_ << ',' << dr_ << ',' << dt_ << ',' << k_ << '\n';
  for (std::size_t n = 0; n <= nt_; ++n) {
    for (std::size_t i = 0; i <= nr_; ++i) {
      if (i) os << ',';
      os << at(i, n);
    }
    os << '\n';
  }
}

SpaceTimeField SpaceTimeField::read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("nr,nt,dr,dt,k", 0) != 0)
    throw std::runtime_error("SpaceTimeField::read_csv: missing header");
  if (!std::getline(is, line)) throw std::runtime_error("SpaceTimeField::read_csv: missing dimensions");
  std::replace(line.begin(), line.end(), ',', ' ');
  std::istringstream hs(line);
  std::size_t nr = 0, nt = 0;
  double dr = 0, dt = 0, k = 0;
  if (!(hs >> nr >> nt >> dr >> dt >> k)) throw std::runtime_error("SpaceTimeField::read_csv: bad dimensions");
  SpaceTimeField f(nr, nt, dr, dt, k);
  for (std::size_t n = 0; n <= nt; ++n) {
    if (!std::getline(is, line)) throw std::runtime_error("SpaceTimeField::read_csv: truncated");
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream rs(line);
    for (std::size_t i = 0; i <= nr; ++i)
      if (!(rs >> f.at(i, n))) throw std::runtime_error("SpaceTimeField::read_csv: short row");
  }
  return f;
}

void SpaceTimeField::write_binary(std::ostream& os) const {
  const std::uint64_t dims[2] = {nr_, nt_};
  const double sp[3] = {dr_, dt_, k_};
  os.write(reinterpret_cast<const char*>(dims), sizeof dims);
  os.write(reinterpret_cast<const char*>(sp), sizeof sp);
  os.write(reinterpret_cast<const char*>(data_.data()), static_cast<std::streamsize>(data_.size() * sizeof(double)));
}

SpaceTimeField SpaceTimeField::read_binary(std::istream& is) {
  std::uint64_t dims[2];
  double sp[3];
  if (!is.read(reinterpret_cast<char*>(dims), sizeof dims) || !is.read(reinterpret_cast<char*>(sp), sizeof sp))
    throw std::runtime_error("SpaceTimeField::read_binary: truncated header");
  SpaceTimeField f(dims[0], dims[1], sp[0], sp[1], sp[2]);
  if (!is.read(reinterpret_cast<char*>(f.data_.data()), static_cast<std::streamsize>(f.data_.size() * sizeof(double))))
    throw std::runtime_error("SpaceTimeField::read_binary: truncated samples");
  return f;
}

}  // namespace dwave
