#include "dwave/initial_data.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "dwave/quadrature.hpp"

namespace dwave {

double bump(double s) {
  const double q = 1.0 - s * s;
  if (q <= 0.0) return 0.0;
  return std::exp(-1.0 / q);
}

double bump_d1(double s) {
  const double q = 1.0 - s * s;
  if (q <= 0.0) return 0.0;
  return bump(s) * (-2.0 * s / (q * q));
}

double bump_d2(double s) {
  const double q = 1.0 - s * s;
  if (q <= 0.0) return 0.0;
  const double l1 = -2.0 * s / (q * q);
  const double l2 = -2.0 / (q * q) - 8.0 * s * s / (q * q * q);
  return bump(s) * (l2 + l1 * l1);
}

BumpSum::BumpSum(std::vector<BumpTerm> terms) : terms_(std::move(terms)) {
  for (const auto& t : terms_)
    if (!(t.width > 0.0) || !std::isfinite(t.coeff) || !std::isfinite(t.center))
      throw std::invalid_argument("BumpSum: invalid term");
}

double BumpSum::value(double r) const {
  double v = 0.0;
  for (const auto& t : terms_) v += t.coeff * bump((r - t.center) / t.width);
  return v;
}

double BumpSum::d1(double r) const {
  double v = 0.0;
  for (const auto& t : terms_) v += t.coeff * bump_d1((r - t.center) / t.width) / t.width;
  return v;
}

double BumpSum::d2(double r) const {
  double v = 0.0;
  for (const auto& t : terms_) v += t.coeff * bump_d2((r - t.center) / t.width) / (t.width * t.width);
  return v;
}

double BumpSum::laplacian(double r) const {
  if (r <= 0.0) return 2.0 * d2(0.0);
  return d2(r) + d1(r) / r;
}

double BumpSum::support_radius() const {
  double R = 0.0;
  for (const auto& t : terms_) R = std::max(R, t.center + t.width);
  return R;
}

BumpSum BumpSum::scaled(double alpha) const {
  std::vector<BumpTerm> out = terms_;
  for (auto& t : out) t.coeff *= alpha;
  return BumpSum(std::move(out));
}

double Point2::norm() const { return std::hypot(x, y); }

DataProfile::DataProfile(ProfileKind kind, double k, BumpSum f, BumpSum g, bool g_is_minus_f,
                         std::vector<std::pair<std::string, double>> constants)
    : kind_(kind), k_(k), f_(std::move(f)), g_(std::move(g)), g_is_minus_f_(g_is_minus_f),
      constants_(std::move(constants)) {
  if (!(k_ >= 1.0)) throw std::invalid_argument("DataProfile: k must be >= 1");
  if (f_.support_radius() > k_ * (1.0 + 1e-12) || g_.support_radius() > k_ * (1.0 + 1e-12))
    throw std::invalid_argument("DataProfile: data not supported in |x| <= k");
  for (const auto* part : {&f_, &g_})
    for (const auto& t : part->terms())
      if (t.center != 0.0 && t.center - t.width < 0.0)
        throw std::invalid_argument("DataProfile: off-centre term must not reach the origin");
}

namespace {

std::array<double, 2> radial_gradient(const BumpSum& phi, Point2 x) {
  const double r = x.norm();
  if (r == 0.0) return {0.0, 0.0};
  const double d = phi.d1(r) / r;
  return {d * x.x, d * x.y};
}

// \int_0^1 bump(s) s ds and \int_{-1}^{1} bump(s) ds.
double bump_first_moment() {
  static const double m = quad::tanh_sinh([](double s) { return bump(s) * s; }, 0.0, 1.0, 1e-15);
  return m;
}

double bump_mass() {
  static const double m = quad::tanh_sinh([](double s) { return bump(s); }, -1.0, 1.0, 1e-15);
  return m;
}

// Integral over R^2 of bump(|x|/w) (centred term).
double centred_bump_integral(double w) { return 2.0 * std::numbers::pi * w * w * bump_first_moment(); }

// Integral over R^2 of bump((|x| - c)/w) for c >= w (ring term).
double ring_bump_integral(double c, double w) { return 2.0 * std::numbers::pi * w * c * bump_mass(); }

}  // namespace

std::array<double, 2> DataProfile::grad_f(Point2 x) const { return radial_gradient(f_, x); }
std::array<double, 2> DataProfile::grad_g(Point2 x) const { return radial_gradient(g_, x); }

DataProfile DataProfile::scaled(double alpha) const {
  return DataProfile(kind_, k_, f_.scaled(alpha), g_.scaled(alpha), g_is_minus_f_, constants_);
}

namespace {

std::string encode_terms(const BumpSum& b) {
  std::ostringstream os;
  os << std::setprecision(17);
  bool first = true;
  for (const auto& t : b.terms()) {
    if (!first) os << ',';
    first = false;
    os << t.coeff << ':' << t.center << ':' << t.width;
  }
  return os.str();
}

BumpSum decode_terms(const std::string& s) {
  std::vector<BumpTerm> terms;
  std::istringstream is(s);
  std::string item;
  while (std::getline(is, item, ',')) {
    if (item.empty()) continue;
    BumpTerm t;
    char c1 = 0, c2 = 0;
    std::istringstream ts(item);
    if (!(ts >> t.coeff >> c1 >> t.center >> c2 >> t.width) || c1 != ':' || c2 != ':')
      throw std::invalid_argument("DataProfile::parse: malformed term '" + item + "'");
    terms.push_back(t);
  }
  return BumpSum(std::move(terms));
}

}  // namespace

std::string DataProfile::describe() const {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "kind=" << to_string(kind_) << " k=" << k_ << " g_is_minus_f=" << (g_is_minus_f_ ? 1 : 0)
     << " f=" << encode_terms(f_) << " g=" << encode_terms(g_);
  for (const auto& [name, value] : constants_) os << " " << name << "=" << value;
  return os.str();
}

DataProfile DataProfile::parse(const std::string& record) {
  std::istringstream is(record);
  std::string tok;
  ProfileKind kind = ProfileKind::Custom;
  double k = 1.0;
  bool minus = false;
  BumpSum f, g;
  std::vector<std::pair<std::string, double>> constants;
  bool have_kind = false, have_k = false;
  while (is >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("DataProfile::parse: bad token '" + tok + "'");
    const std::string key = tok.substr(0, eq);
    const std::string val = tok.substr(eq + 1);
    if (key == "kind") {
      kind = profile_kind_from_string(val);
      have_kind = true;
    } else if (key == "k") {
      k = std::stod(val);
      have_k = true;
    } else if (key == "g_is_minus_f") {
      minus = val == "1";
    } else if (key == "f") {
      f = decode_terms(val);
    } else if (key == "g") {
      g = decode_terms(val);
    } else {
      constants.emplace_back(key, std::stod(val));
    }
  }
  if (!have_kind || !have_k) throw std::invalid_argument("DataProfile::parse: missing kind or k");
  return DataProfile(kind, k, std::move(f), std::move(g), minus, std::move(constants));
}

DataProfile make_case_A(double k) {
  if (!(k >= 1.0)) throw std::invalid_argument("make_case_A: k must be >= 1");
  const double amp = 1.0 / centred_bump_integral(k);
  BumpSum g({BumpTerm{amp, 0.0, k}});
  return DataProfile(ProfileKind::CaseA_fZero_gBump, k, BumpSum{}, std::move(g), false, {{"g_amp", amp}});
}

DataProfile make_case_B(double k, CaseBSign sign) {
  if (!(k >= 1.0)) throw std::invalid_argument("make_case_B: k must be >= 1");
  if (sign == CaseBSign::PosF) {
    const double amp = 1.0 / centred_bump_integral(k);
    BumpSum f({BumpTerm{amp, 0.0, k}});
    BumpSum g = f.negated();
    return DataProfile(ProfileKind::CaseB_fBump_gMinusF, k, std::move(f), std::move(g), true, {{"f_amp", amp}});
  }
  // f = bump(2r/k) - c * bump((r - 3k/4)/(k/4)) with \int f = -1.
  const double inner = centred_bump_integral(0.5 * k);
  const double ring = ring_bump_integral(0.75 * k, 0.25 * k);
  const double c = (inner + 1.0) / ring;
  BumpSum f({BumpTerm{1.0, 0.0, 0.5 * k}, BumpTerm{-c, 0.75 * k, 0.25 * k}});
  BumpSum g = f.negated();
  return DataProfile(ProfileKind::CaseB_fNegIntegral, k, std::move(f), std::move(g), true, {{"ring_c", c}});
}

DataProfile make_zero_profile(double k) {
  return DataProfile(ProfileKind::Custom, k, BumpSum{}, BumpSum{}, true);
}

double radial_integral(const std::function<double(double)>& phi, double radius, int resolution, double* error) {
  if (resolution <= 0) throw std::invalid_argument("radial_integral: resolution must be > 0");
  auto trap = [&](int n) {
    const double h = radius / n;
    double s = 0.5 * phi(radius) * radius;
    for (int i = 1; i < n; ++i) {
      const double r = i * h;
      const double v = phi(r);
      if (!std::isfinite(v)) throw std::runtime_error("radial_integral: non-finite integrand (corrupt profile)");
      s += v * r;
    }
    return 2.0 * std::numbers::pi * h * s;
  };
  const double coarse = trap(resolution);
  const double fine = trap(2 * resolution);
  const double extrap = fine + (fine - coarse) / 3.0;
  if (error) *error = std::abs(extrap - fine);
  return extrap;
}

DataIntegrals integrals(const DataProfile& profile, int resolution) {
  const double R = profile.k();
  DataIntegrals out;
  double e1 = 0.0, e2 = 0.0, e3 = 0.0;
  out.int_f = radial_integral([&](double r) { return profile.f_at(r); }, R, resolution, &e1);
  out.int_g = radial_integral([&](double r) { return profile.g_at(r); }, R, resolution, &e2);
  out.int_f_plus_g =
      radial_integral([&](double r) { return profile.f_at(r) + profile.g_at(r); }, R, resolution, &e3);
  out.error_estimate = std::max({e1, e2, e3});
  out.data_class = profile.g_is_minus_f() ? DataClass::ZeroIntegral : DataClass::NonzeroIntegral;
  return out;
}

std::string to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::CaseA_fZero_gBump: return "CaseA_fZero_gBump";
    case ProfileKind::CaseB_fBump_gMinusF: return "CaseB_fBump_gMinusF";
    case ProfileKind::CaseB_fNegIntegral: return "CaseB_fNegIntegral";
    case ProfileKind::Custom: return "Custom";
  }
  return "Custom";
}

ProfileKind profile_kind_from_string(const std::string& s) {
  for (auto k : {ProfileKind::CaseA_fZero_gBump, ProfileKind::CaseB_fBump_gMinusF,
                 ProfileKind::CaseB_fNegIntegral, ProfileKind::Custom})
    if (to_string(k) == s) return k;
  throw std::invalid_argument("unknown profile kind '" + s + "'");
}

}  // namespace dwave
