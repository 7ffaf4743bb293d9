#include "dce/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <string>

#include "dce/errors.hpp"

namespace dce {

namespace {

// Newton iteration on P_n starting from the Chebyshev-like initial guess.
// Standard Golub–Welsch alternatives exist, but Newton on the three-term
// recurrence is compact and accurate to machine precision for the orders
// used here.
void compute_gauss_legendre(int n, std::vector<Real>& nodes,
                            std::vector<Real>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    Real x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    Real pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      // Evaluate P_n(x) and P_{n-1}(x) by recurrence.
      Real p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        Real p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      Real dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = x;
    weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
  }
  // Newton starting points sweep from +1 to -1; store ascending instead.
  std::reverse(nodes.begin(), nodes.end());
  std::reverse(weights.begin(), weights.end());
}

struct GlCache {
  std::mutex mutex;
  std::map<int, std::pair<std::vector<Real>, std::vector<Real>>> rules;
};

GlCache& gl_cache() {
  static GlCache cache;
  return cache;
}

const std::pair<std::vector<Real>, std::vector<Real>>& gl_rule(int n) {
  if (n < 1 || n > 512) {
    throw validation_error("Gauss-Legendre order out of range: " + std::to_string(n));
  }
  auto& cache = gl_cache();
  std::lock_guard<std::mutex> lock(cache.mutex);
  auto it = cache.rules.find(n);
  if (it == cache.rules.end()) {
    std::pair<std::vector<Real>, std::vector<Real>> rule;
    compute_gauss_legendre(n, rule.first, rule.second);
    it = cache.rules.emplace(n, std::move(rule)).first;
  }
  return it->second;
}

// Gauss–Kronrod 7/15 rule on [-1, 1].  Abscissae/weights are the classical
// values; the embedded 7-point Gauss rule reuses the odd-index abscissae.
constexpr Real kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.000000000000000};
constexpr Real kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
constexpr Real kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

struct PanelResult {
  Complex kronrod{0.0, 0.0};
  Real error = 0.0;
};

PanelResult gk15_panel(const std::function<Complex(Real)>& f, Real a, Real b) {
  const Real center = 0.5 * (a + b);
  const Real half = 0.5 * (b - a);
  Complex fc = f(center);
  Complex resk = kWgk[7] * fc;
  Complex resg = kWg[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const Real dx = half * kXgk[j];
    Complex f1 = f(center - dx);
    Complex f2 = f(center + dx);
    resk += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) {
      resg += kWg[j / 2] * (f1 + f2);
    }
  }
  PanelResult out;
  out.kronrod = resk * half;
  out.error = std::abs((resk - resg) * half);
  return out;
}

struct Segment {
  Real a = 0.0;
  Real b = 0.0;
  Complex value{0.0, 0.0};
  Real error = 0.0;
};

}  // namespace

const std::vector<Real>& gauss_legendre_nodes(int n) { return gl_rule(n).first; }

const std::vector<Real>& gauss_legendre_weights(int n) { return gl_rule(n).second; }

Complex integrate_gl(const std::function<Complex(Real)>& f, Real a, Real b,
                     int panels, int nodes_per_panel) {
  if (panels < 1) throw validation_error("integrate_gl: panels must be >= 1");
  const auto& nodes = gauss_legendre_nodes(nodes_per_panel);
  const auto& weights = gauss_legendre_weights(nodes_per_panel);
  const Real h = (b - a) / panels;
  Complex total{0.0, 0.0};
  for (int p = 0; p < panels; ++p) {
    const Real lo = a + p * h;
    const Real center = lo + 0.5 * h;
    const Real half = 0.5 * h;
    Complex acc{0.0, 0.0};
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      acc += weights[i] * f(center + half * nodes[i]);
    }
    total += acc * half;
  }
  return total;
}

QuadratureResult integrate_gk(const std::function<Complex(Real)>& f, Real a,
                              Real b, const QuadratureSettings& settings,
                              Real oscillation_hint) {
  QuadratureResult out;
  if (a == b) return out;

  // Seed the subdivision with about two periods of the fastest expected
  // oscillation per panel, so the first error estimates are meaningful.
  int initial = 1;
  if (oscillation_hint > 0.0) {
    const Real periods = std::abs(b - a) * oscillation_hint / (2.0 * kPi);
    initial = std::max(1, static_cast<int>(std::ceil(periods / 2.0)));
    initial = std::min(initial, settings.max_panels / 2);
  }

  std::vector<Segment> segments;
  segments.reserve(static_cast<std::size_t>(initial) + 64);
  const Real h = (b - a) / initial;
  for (int i = 0; i < initial; ++i) {
    Segment s;
    s.a = a + i * h;
    s.b = (i + 1 == initial) ? b : a + (i + 1) * h;
    PanelResult pr = gk15_panel(f, s.a, s.b);
    s.value = pr.kronrod;
    s.error = pr.error;
    segments.push_back(s);
  }

  auto global = [&segments]() {
    Complex v{0.0, 0.0};
    Real e = 0.0;
    for (const auto& s : segments) {
      v += s.value;
      e += s.error;
    }
    return std::make_pair(v, e);
  };

  while (true) {
    auto [value, error] = global();
    const Real target = std::max(settings.abs_tol, settings.rel_tol * std::abs(value));
    if (error <= target) break;
    if (static_cast<int>(segments.size()) >= settings.max_panels) {
      throw numerical_error(
          "adaptive quadrature hit the subdivision cap (" +
          std::to_string(settings.max_panels) + " panels) before reaching tolerance");
    }
    // Split the worst segment; first index wins ties so the refinement path
    // is a deterministic function of the integrand.
    std::size_t worst = 0;
    for (std::size_t i = 1; i < segments.size(); ++i) {
      if (segments[i].error > segments[worst].error) worst = i;
    }
    Segment s = segments[worst];
    const Real mid = 0.5 * (s.a + s.b);
    if (!(mid > s.a && mid < s.b)) {
      throw numerical_error("adaptive quadrature cannot subdivide further at x = " +
                            std::to_string(s.a));
    }
    Segment left, right;
    left.a = s.a;
    left.b = mid;
    right.a = mid;
    right.b = s.b;
    PanelResult pl = gk15_panel(f, left.a, left.b);
    PanelResult pr = gk15_panel(f, right.a, right.b);
    left.value = pl.kronrod;
    left.error = pl.error;
    right.value = pr.kronrod;
    right.error = pr.error;
    segments[worst] = left;
    segments.push_back(right);
  }

  // Sum in ascending interval order so the result does not depend on the
  // history of subdivisions.
  std::sort(segments.begin(), segments.end(),
            [](const Segment& x, const Segment& y) { return x.a < y.a; });
  for (const auto& s : segments) {
    out.value += s.value;
    out.error_estimate += s.error;
  }
  out.panels = static_cast<int>(segments.size());
  return out;
}

}  // namespace dce
