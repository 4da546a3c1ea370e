// Acceptance runs A1-A9. Prints one PASS/FAIL line per criterion; exits nonzero on any failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>

#include "ide/diagnostics.hpp"
#include "ide/errors.hpp"
#include "ide/properties.hpp"
#include "ide/spectral.hpp"

using namespace ide;

namespace {

struct Outcome {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << " [failed: " << what << "]";
    }
  }
};

int failures = 0;

void criterion(const char* id, const char* title, const std::function<void(Outcome&)>& body) {
  Outcome v;
  v.detail.precision(6);
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(v);
  } catch (const std::exception& e) {
    v.ok = false;
    v.detail << " [exception: " << e.what() << "]";
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!v.ok) ++failures;
  std::printf("%s %s %s (%.2f s)%s\n", v.ok ? "PASS" : "FAIL", id, title, secs, v.detail.str().c_str());
  std::fflush(stdout);
}

double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double final_gap(const GapSeries& s) { return s.gap.empty() ? INFINITY : s.gap.back(); }

const GapOptions kFinalOnly{1e-300, 1e-9};  // verdicts are taken from the last snapshot below

}  // namespace

int main() {
  const Kernel shifted = counterexample_kernel();
  const double e = std::numbers::e;

  criterion("A1", "leftward speed golden value", [&](Outcome& v) {
    const auto t0 = std::chrono::steady_clock::now();
    const SpeedResult r = spreading_speed(e, shifted, Side::minus);
    const double secs = elapsed(t0);
    v.detail << " c_minus=" << r.c << " mu=" << r.mu;
    v.require(std::abs(r.c + 1.0) < 1e-6, "|c_minus + 1| < 1e-6");
    v.require(std::abs(r.mu - 2.0) < 1e-4, "|mu - 2| < 1e-4");
    v.require(secs < 1.0, "runtime < 1 s");
  });

  criterion("A2", "speed closed forms", [&](Outcome& v) {
    const SpeedResult plus = spreading_speed(e, shifted, Side::plus);
    const SpeedReport sym = speed_report(e, Kernel::gaussian(0.0, 1.0));
    SpeedOptions quad;
    quad.path = MgfPath::quadrature;
    const SpeedReport qs = speed_report(e, shifted, quad);
    const SpeedReport as = speed_report(e, shifted);
    const SpeedReport qg = speed_report(e, Kernel::gaussian(0.0, 1.0), quad);
    v.detail << " c_plus=" << plus.c << " sym=(" << sym.c_minus << ", " << sym.c_plus << ")";
    v.require(std::abs(plus.c - 3.0) < 1e-6, "|c_plus - 3| < 1e-6");
    v.require(std::abs(sym.c_minus - std::sqrt(2.0)) < 1e-6 && std::abs(sym.c_plus - std::sqrt(2.0)) < 1e-6,
              "gaussian(0,1) speeds equal sqrt(2)");
    const double agree = std::max({std::abs(qs.c_minus - as.c_minus), std::abs(qs.c_plus - as.c_plus),
                                   std::abs(qg.c_minus - sym.c_minus), std::abs(qg.c_plus - sym.c_plus)});
    v.detail << " quadrature-analytic=" << agree;
    v.require(agree < 1e-6, "quadrature and analytic paths agree within 1e-6");
  });

  const double beta0 = find_beta0(shifted, counterexample_grid());
  const Habitat h = counterexample_h(beta0);
  const SpatialGrid wide(-300.0, 300.0, 6000);
  const EvolutionOp h_op(shifted, h, wide);

  criterion("A3", "upward convergence", [&](Outcome& v) {
    const auto t0 = std::chrono::steady_clock::now();
    const Trajectory t = iterate(h_op, fixtures::bump(wide, 0.0, 2.0, 1.0), 80);
    const SpeedReport s = speed_report(h.d_plus(), shifted);
    const UpwardConvergence uc =
        upward_convergence(t, limit_fixed_point(h), 0.5, s.c_plus, s.c_minus, kFinalOnly, kFinalOnly);
    const double secs = elapsed(t0);
    v.detail << " window_gap=" << final_gap(uc.window) << " left_sup=" << final_gap(uc.left);
    v.require(!uc.window.empty.back() && !uc.window.clipped.back(), "final window inside the grid");
    v.require(final_gap(uc.window) < 1e-2, "window gap < 1e-2");
    v.require(final_gap(uc.left) < 1e-3, "sup over x <= -0.5n < 1e-3");
    v.require(secs < 60.0, "runtime < 60 s");
  });

  criterion("A4", "annihilation ahead of the front", [&](Outcome& v) {
    const Field step = sample(wide, [](double x) { return x <= 0.0 ? 1.0 : 0.0; });
    const Trajectory t = iterate(h_op, step, 40);
    const SpeedReport s = speed_report(h.d_plus(), shifted);
    const Annihilation an = annihilation(t, 0.5, s.c_plus, kFinalOnly);
    v.detail << " support_edge=" << an.support_edge << " ahead_sup@40=" << final_gap(an.ahead);
    v.require(an.support_edge <= 0.0 && an.support_edge > -wide.spacing(), "support edge within one spacing left of 0");
    v.require(!an.ahead.empty.back(), "window x >= 3.5 n inside the grid");
    v.require(final_gap(an.ahead) < 1e-6, "max over x >= 3.5 n < 1e-6 at n = 40");
  });

  const Habitat bh = fixtures::beverton_holt_habitat();
  const Kernel standard = fixtures::standard_kernel();
  const SpatialGrid bh_grid = fixtures::beverton_holt_grid();
  const EvolutionOp bh_op(standard, bh, bh_grid);
  std::optional<FixedPointResult> bh_fp;

  criterion("A5", "fixed-point existence", [&](Outcome& v) {
    const SpeedReport s = speed_report(bh.d_plus(), standard);
    v.require(s.c_minus > 0.0 && s.c_plus > 0.0, "both speeds positive");
    bh_fp = solve_from_cap(bh_op, bh.caps().front(), {1e-10, 5000});
    const FixedPointResult& fp = *bh_fp;
    v.detail << " residual=" << fp.residual << " class=" << to_string(fp.classification)
             << " tails=(" << fp.tail_minus << ", " << fp.tail_plus << ") iterations=" << fp.iterations;
    v.require(fp.residual < 1e-8, "residual < 1e-8");
    v.require(fp.classification == Classification::front, "classification front");
    v.require(std::abs(fp.tail_plus - 1.0) < 1e-3, "tail_plus within 1e-3 of K");
    v.require(fp.tail_minus < 1e-3, "tail_minus < 1e-3");
  });

  criterion("A6", "nonexistence certificate", [&](Outcome& v) {
    const Habitat lc = counterexample_h(1.0);
    const SpatialGrid g = SpatialGrid::with_spacing(-30.0, 30.0, 0.05);
    const LinearEnvelope env = build_envelope(lc, 0.1, lc.caps().back());
    CertificateOptions opts;
    opts.solver = {1e-10, 500};
    const NonexistenceCertificate c = nonexistence_certificate(EvolutionOp(shifted, lc, g), env, shifted, 0.3, opts);
    v.detail << " c_star_minus_L=" << c.c_star_minus_L;
    v.require(c.granted, "certificate granted" + (c.refusal.empty() ? std::string() : ": " + c.refusal));
    v.require(lc.linear_controlled(), "habitat linearly controlled");
    v.require(c.c_star_minus_L < 0.0, "leftward speed of the upper operator < 0");
    if (c.corroboration) {
      v.detail << " sup=" << c.final_sup << " iterations=" << c.corroboration->iterations;
      v.require(c.final_sup < 1e-8 && c.corroboration->iterations <= 500, "sup < 1e-8 within 500 iterations");
    }
    if (c.tail && c.decay) {
      v.detail << " mu_eps=" << c.decay->mu_eps;
      v.require(c.tail->bounded, "tail ratio bounded at mu_eps");
    } else {
      v.require(false, "tail check ran");
    }
  });

  criterion("A7", "counterexample suite", [&](Outcome& v) {
    const CounterexampleReport r = counterexample_suite(counterexample_grid());
    v.detail << " beta0=" << r.beta0 << " rho=" << r.rho_beta0 << " lower(max=" << r.lower->W.max()
             << ", res=" << r.lower->residual << ") upper(res=" << r.upper->residual << ", tail_plus="
             << r.upper->tail_plus << ") gap=" << r.ordering_gap;
    v.require(r.rho_beta0 > 1.0, "rho(L_beta0) > 1");
    v.require(r.linearity_error < 1e-8, "beta-linearity error < 1e-8");
    v.require(r.lower->classification == Classification::pulse, "lower is a pulse");
    v.require(r.lower->residual < 1e-8, "lower residual < 1e-8");
    v.require(r.lower->W.max() > 1e-3, "max lower > 1e-3");
    v.require(r.lower->tail_minus < 1e-4 && r.lower->tail_plus < 1e-4, "lower tails < 1e-4");
    v.require(r.upper->classification == Classification::front, "upper is a front");
    v.require(r.upper->residual < 1e-8, "upper residual < 1e-8");
    v.require(std::abs(r.upper->tail_plus - 1.0) < 1e-3, "upper tail_plus within 1e-3 of 1");
    v.require(r.ordering_gap >= 0.0, "upper >= lower pointwise");
    v.require(std::abs(r.speeds_h.c_minus + 1.0) < 1e-6, "leftward speed of h is -1");
    v.require(r.contrast_holds, "contrast holds");
  });

  criterion("A8", "attractivity of the fixed point", [&](Outcome& v) {
    if (!bh_fp) bh_fp = solve_from_cap(bh_op, bh.caps().front(), {1e-10, 5000});
    const double eps = 0.3;
    const SpeedReport s = speed_report(bh.d_plus(), standard);
    const Trajectory a = iterate(bh_op, fixtures::bump(bh_grid, 0.0, 2.0, 0.5), 120);
    const Trajectory b = iterate(bh_op, fixtures::bump(bh_grid, 40.0, 5.0, 2.0), 120);
    const Attractivity at = attractivity(a, b, bh_fp->W, eps, s.c_plus, true, kFinalOnly);
    v.detail << " gaps=(" << final_gap(at.first) << ", " << final_gap(at.second) << ")";
    v.require(final_gap(at.first) < 1e-3, "first gap < 1e-3");
    v.require(final_gap(at.second) < 1e-3, "second gap < 1e-3");
  });

  criterion("A9", "property battery", [&](Outcome& v) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto results = run_property_battery();
    const double secs = elapsed(t0);
    std::set<std::string> names;
    int failed = 0;
    for (const auto& r : results) {
      names.insert(r.name);
      if (!r.passed) {
        ++failed;
        v.detail << " [" << r.module << "." << r.name << ": " << r.detail << "]";
      }
    }
    v.detail << " properties=" << results.size() << " failed=" << failed;
    v.require(failed == 0, "all properties pass");
    for (const char* n : {"monotone", "cap_invariance", "translation_limit", "subhomogeneity_transfer",
                          "strict_positivity", "envelope_domination"}) {
      v.require(names.count(n) == 1, std::string("property '") + n + "' present");
    }
    v.require(secs < 120.0, "battery under 2 minutes");
  });

  std::printf("%s: %d of 9 criteria failed\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
  return failures == 0 ? 0 : 1;
}
