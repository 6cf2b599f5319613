#include "qmd/search.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qmd {

namespace {

constexpr double kTieTol = 1e-12;

double wrap_azimuth(double a) {
  a = std::remainder(a, 2.0 * std::numbers::pi);
  return a <= -std::numbers::pi ? a + 2.0 * std::numbers::pi : a;
}

// Prefer b over a: strictly better, or tied with smaller polar / azimuth.
bool preferred(const SpherePoint& b, const SpherePoint& a) {
  if (b.value > a.value + kTieTol) return true;
  if (b.value < a.value - kTieTol) return false;
  if (std::abs(b.polar - a.polar) > 1e-9) return b.polar < a.polar;
  return std::abs(b.azimuth) < std::abs(a.azimuth) - 1e-9;
}

SpherePoint refine(const std::function<double(const Ket&)>& f, SpherePoint p, double step,
                   double final_step) {
  while (step > final_step) {
    bool improved = true;
    while (improved) {
      improved = false;
      const double moves[4][2] = {{step, 0}, {-step, 0}, {0, step}, {0, -step}};
      for (const auto& mv : moves) {
        SpherePoint q;
        q.polar = p.polar + mv[0];
        q.azimuth = p.azimuth + mv[1];
        if (q.polar < 0.0) {
          q.polar = -q.polar;
          q.azimuth += std::numbers::pi;
        }
        if (q.polar > std::numbers::pi) {
          q.polar = 2.0 * std::numbers::pi - q.polar;
          q.azimuth += std::numbers::pi;
        }
        q.azimuth = wrap_azimuth(q.azimuth);
        q.value = f(q.ket());
        if (q.value > p.value + 1e-15) {
          p = q;
          improved = true;
          break;
        }
      }
    }
    step *= 0.5;
  }
  return p;
}

}  // namespace

ScalarMin golden_section_min(const std::function<double(double)>& f, double a, double b, double tol) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  ScalarMin r;
  r.x = 0.5 * (a + b);
  r.value = f(r.x);
  for (double x : {a, b, c, d}) {
    const double v = f(x);
    if (v < r.value) {
      r.value = v;
      r.x = x;
    }
  }
  return r;
}

Ket bloch_ket(double polar, double azimuth) {
  return {std::cos(polar / 2.0), std::polar(std::sin(polar / 2.0), azimuth)};
}

void bloch_angles(const Ket& v, double& polar, double& azimuth) {
  const Ket u = canonical_phase(normalized(v));
  const double a = std::clamp(std::abs(u[0]), 0.0, 1.0);
  polar = 2.0 * std::acos(a);
  azimuth = std::abs(u[1]) < 1e-15 ? 0.0 : std::arg(u[1]);
}

SpherePoint sphere_maximize(const std::function<double(const Ket&)>& f, const SphereSearchOptions& opt) {
  const double step = opt.grid_step_deg * std::numbers::pi / 180.0;
  const int np = static_cast<int>(std::lround(180.0 / opt.grid_step_deg));
  const int na = static_cast<int>(std::lround(360.0 / opt.grid_step_deg));

  // Grid over polar in [0, pi] and azimuth in (-pi, pi]; the poles are one point.
  std::vector<std::vector<double>> grid(np + 1, std::vector<double>(na, 0.0));
  for (int i = 0; i <= np; ++i) {
    const double polar = i * step;
    for (int k = 0; k < na; ++k) {
      if ((i == 0 || i == np) && k > 0) {
        grid[i][k] = grid[i][0];
        continue;
      }
      grid[i][k] = f(bloch_ket(polar, wrap_azimuth(k * step)));
    }
  }

  struct Cand {
    int i, k;
    double v;
  };
  std::vector<Cand> local;
  for (int i = 0; i <= np; ++i) {
    for (int k = 0; k < na; ++k) {
      const double v = grid[i][k];
      bool is_max = true;
      for (int di = -1; di <= 1 && is_max; ++di)
        for (int dk = -1; dk <= 1 && is_max; ++dk) {
          if (di == 0 && dk == 0) continue;
          const int ii = i + di;
          if (ii < 0 || ii > np) continue;
          const int kk = (k + dk + na) % na;
          if (grid[ii][kk] > v + kTieTol) is_max = false;
        }
      if (is_max) local.push_back({i, k, v});
    }
  }
  std::stable_sort(local.begin(), local.end(), [](const Cand& a, const Cand& b) { return a.v > b.v + kTieTol; });
  if (local.size() > opt.candidates) local.resize(opt.candidates);

  SpherePoint best;
  bool have = false;
  for (const auto& c : local) {
    SpherePoint p;
    p.polar = c.i * step;
    p.azimuth = wrap_azimuth(c.k * step);
    p.value = c.v;
    p = refine(f, p, step / 2.0, opt.final_step);
    if (p.polar < 1e-12 || p.polar > std::numbers::pi - 1e-12) p.azimuth = 0.0;
    if (!have || preferred(p, best)) {
      best = p;
      have = true;
    }
  }
  return best;
}

SpherePoint sphere_minimize(const std::function<double(const Ket&)>& f, const SphereSearchOptions& opt) {
  SpherePoint p = sphere_maximize([&](const Ket& v) { return -f(v); }, opt);
  p.value = -p.value;
  return p;
}

CompassResult compass_maximize(const std::function<double(const std::vector<double>&)>& f,
                               std::vector<double> x0, double step, double shrink, std::size_t rounds,
                               std::size_t max_polls_per_round) {
  CompassResult r;
  r.x = std::move(x0);
  r.value = f(r.x);
  r.evaluations = 1;
  for (std::size_t round = 0; round < rounds; ++round) {
    std::size_t polls = 0;
    bool improved = true;
    while (improved && polls < max_polls_per_round) {
      improved = false;
      for (std::size_t i = 0; i < r.x.size(); ++i) {
        for (double sgn : {1.0, -1.0}) {
          std::vector<double> y = r.x;
          y[i] += sgn * step;
          const double v = f(y);
          ++r.evaluations;
          ++polls;
          if (v > r.value + 1e-15) {
            r.value = v;
            r.x = std::move(y);
            improved = true;
            break;
          }
        }
      }
    }
    step *= shrink;
  }
  return r;
}

}  // namespace qmd
