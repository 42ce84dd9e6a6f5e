// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>

#include "support.hpp"
#include "tfalg/algebra.hpp"
#include "tfalg/cli.hpp"
#include "tfalg/gabor.hpp"
#include "tfalg/invert.hpp"
#include "tfalg/oracle.hpp"
#include "tfalg/window.hpp"

using namespace tfalg;
using tfalg::testing::Rng;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [violated: " << what << "]";
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

TFOperator geometric(double q) {
  TermAccumulator acc(1);
  acc.add(TFPoint(0.0, 0.0), 1.0);
  acc.add(TFPoint(1.0, 0.0), -q);
  return std::move(acc).build();
}

// Shared by criteria 1 and 2.
struct AlgebraFixtures {
  oracle::Grid grid{1, 128, 8.0};
  std::vector<std::pair<TFOperator, TFOperator>> pairs;
};

const AlgebraFixtures& algebra_fixtures() {
  static const AlgebraFixtures f = [] {
    AlgebraFixtures out;
    Rng rng(101);
    for (int i = 0; i < 200; ++i) {
      TFOperator a = testing::random_aligned(rng, out.grid, 6);
      TFOperator b = testing::random_aligned(rng, out.grid, 6);
      out.pairs.emplace_back(std::move(a), std::move(b));
    }
    return out;
  }();
  return f;
}

struct ChannelRun {
  TFOperator t;
  InversionReport contraction;
  oracle::FrameBounds bounds;
};

// Shared by criteria 3 and 4.
std::vector<ChannelRun>& channel_runs() {
  static std::vector<ChannelRun> runs;
  return runs;
}

void criterion_1(Outcome& o) {
  const auto start = Clock::now();
  const AlgebraFixtures& f = algebra_fixtures();
  double worst_compose = 0.0, worst_adjoint = 0.0;
  for (const auto& [a, b] : f.pairs) {
    const Eigen::MatrixXcd ma = oracle::assemble_matrix(a, f.grid, oracle::ShiftMode::aligned);
    const Eigen::MatrixXcd mb = oracle::assemble_matrix(b, f.grid, oracle::ShiftMode::aligned);
    const Eigen::MatrixXcd mab = oracle::assemble_matrix(compose(a, b), f.grid, oracle::ShiftMode::aligned);
    const Eigen::MatrixXcd mstar = oracle::assemble_matrix(adjoint(a), f.grid, oracle::ShiftMode::aligned);
    worst_compose = std::max(worst_compose, testing::frobenius_relative(mab, ma * mb));
    worst_adjoint = std::max(worst_adjoint, testing::frobenius_relative(mstar, ma.adjoint()));
  }
  const double elapsed = seconds_since(start);
  o.detail << "200 pairs, compose " << fmt(worst_compose) << ", adjoint " << fmt(worst_adjoint)
           << " (limit 1e-10), " << fmt(elapsed) << " s (limit 30)";
  o.require(worst_compose <= 1e-10, "compose");
  o.require(worst_adjoint <= 1e-10, "adjoint");
  o.require(elapsed <= 30.0, "runtime");
}

void criterion_2(Outcome& o) {
  const AlgebraFixtures& f = algebra_fixtures();
  const double tol = 1e-6;
  int violations = 0;
  double min_gap = std::numeric_limits<double>::infinity();
  for (const auto& [a, b] : f.pairs) {
    const CoeffNorms n = coeff_norms(a);
    const double op = oracle::opnorm_estimate(a, f.grid).value;
    const bool ok = n.linf <= n.l2 + tol && n.l2 <= op + tol && op <= n.l1 + tol;
    violations += ok ? 0 : 1;
    min_gap = std::min({min_gap, n.l2 - n.linf, op - n.l2, n.l1 - op});
  }
  o.detail << "linf <= l2 <= opnorm <= l1 on 200 operators, " << violations
           << " violations, smallest gap " << fmt(min_gap) << " (tolerance 1e-6)";
  o.require(violations == 0, "chain");
}

void criterion_3(Outcome& o) {
  const auto start = Clock::now();
  const oracle::Grid grid(1, 64, 8.0);
  Rng rng(303);
  std::uniform_int_distribution<int> taps(2, 5);
  const double tol = 2e-7;
  double worst_res = 0.0, worst_frob = 0.0, worst_agree = 0.0;
  for (int i = 0; i < 50; ++i) {
    ChannelRun run;
    run.t = testing::contraction_channel(rng, grid, taps(rng), 0.8, 4, 4);
    run.contraction = neumann_invert_contraction(run.t, Weight::constant(), tol, 100000);
    worst_res = std::max(worst_res, run.contraction.converged ? run.contraction.residual_av : HUGE_VAL);
    const Eigen::MatrixXcd mt = oracle::assemble_matrix(run.t, grid, oracle::ShiftMode::aligned);
    const Eigen::MatrixXcd mx = oracle::assemble_matrix(run.contraction.inverse, grid, oracle::ShiftMode::aligned);
    worst_frob = std::max(worst_frob, (mx * mt - Eigen::MatrixXcd::Identity(mt.rows(), mt.cols())).norm());
    run.bounds = oracle::frame_bounds_estimate(run.t, grid);
    const InversionReport sym =
        neumann_invert_symmetric(run.t, Weight::constant(), run.bounds.a_est, run.bounds.b_est, tol, 1000000);
    const double agree = sym.converged ? norm_av(axpy(-1.0, sym.inverse, run.contraction.inverse), {}) : HUGE_VAL;
    worst_agree = std::max(worst_agree, agree);
    channel_runs().push_back(std::move(run));
  }
  const double elapsed = seconds_since(start);
  o.detail << "50 channels, residual_av " << fmt(worst_res) << " (limit 1e-6), |XT - I|_F " << fmt(worst_frob)
           << " (limit 1e-5), symmetric vs contraction " << fmt(worst_agree) << " (limit 2e-6), " << fmt(elapsed)
           << " s (limit 120)";
  o.require(worst_res <= 1e-6, "residual");
  o.require(worst_frob <= 1e-5, "oracle identity");
  o.require(worst_agree <= 2e-6, "mode agreement");
  o.require(elapsed <= 120.0, "runtime");
}

void criterion_4(Outcome& o) {
  std::vector<ChannelRun> fixtures = channel_runs();
  {
    ChannelRun g;
    g.t = geometric(0.5);
    g.contraction = neumann_invert_contraction(g.t, Weight::constant(), 1e-12, 1000);
    g.bounds = oracle::frame_bounds_estimate(g.t, oracle::Grid(1, 64, 8.0));
    fixtures.push_back(std::move(g));
  }
  int violations = 0, checked = 0;
  double min_ratio = std::numeric_limits<double>::infinity();
  for (const auto& f : fixtures)
    for (int m = 0; m <= 2; ++m) {
      const double norm = norm_av(f.contraction.inverse, Weight::polynomial(m));
      const double bound = inverse_norm_bound(f.t, 1.0, m, f.bounds.a_est, f.bounds.b_est);
      ++checked;
      violations += bound >= norm ? 0 : 1;
      min_ratio = std::min(min_ratio, bound / norm);
    }
  o.detail << checked << " (fixture, m) pairs, " << violations << " violations, smallest bound/norm "
           << fmt(min_ratio);
  o.require(checked > 0 && violations == 0, "bound");
}

void criterion_5(Outcome& o) {
  const cplx c = std::polar(0.5, 0.7);
  const TFPoint lambda(1.0, 3.0);
  const TFOperator t = TFOperator::single(lambda, c);
  double worst = 0.0;
  for (const Weight& v : {Weight::constant(), Weight::polynomial(2.0), Weight::subexponential(1.0, 0.25)}) {
    const GelfandResult g = spectral_radius_gelfand(t, v, 64);
    const double err = std::abs(g.extrapolated - std::abs(c));
    worst = std::max(worst, err);
    o.require(err <= 1e-6, v.to_string());
  }
  const GelfandResult slow = spectral_radius_gelfand(t, Weight::subexponential(1.0, 0.5), 64);
  const GelfandResult exp = spectral_radius_gelfand(t, Weight::exponential(1.0), 64);
  double worst_exp = 0.0;
  for (std::size_t n = 1; n <= exp.estimates.size(); ++n) {
    const double closed = std::abs(c) * std::exp(lambda.norm());  // (|c|^n e^{n|lambda|})^{1/n}
    worst_exp = std::max(worst_exp, std::abs(exp.estimates[n - 1] - closed));
  }
  o.detail << "|c| = 0.5 at (1, 3): constant/poly:2/subexp:1,0.25 within " << fmt(worst)
           << " (limit 1e-6); subexp:1,0.5 reaches " << fmt(slow.extrapolated - 0.5) << " at n = "
           << fmt(slow.dyadic.empty() ? 0.0 : slow.dyadic.back().first) << " (informational); exp:1 estimates off "
           << fmt(worst_exp) << " from |c| e^{|lambda|} (limit 1e-9)";
  o.require(worst_exp <= 1e-9, "exponential closed form");
}

void criterion_6(Outcome& o) {
  const auto start = Clock::now();
  const oracle::Grid grid(1, 256, 8.0);
  const GaborSystem sys = build_gabor(grid, 0.5, 0.5);
  const double unit = std::abs(trace_estimate(TFOperator::identity(1), sys, 16, 16).value - 1.0);
  // (K / alpha, 2 pi J / beta) with K = J = 1
  const double on = std::abs(trace_estimate(TFOperator::single(TFPoint(2.0, 4.0 * kPi)), sys, 16, 16).value);
  const TFOperator off = TFOperator::single(TFPoint(0.37, 1.13));
  const double a8 = std::abs(trace_estimate(off, sys, 8, 8).value);
  const double a32 = std::abs(trace_estimate(off, sys, 32, 32).value);
  Rng rng(606);
  double worst_comm = 0.0, worst_norm = 0.0;
  for (int i = 0; i < 20; ++i) {
    const TFOperator a = testing::random_aligned(rng, grid, 3, 16, 4);
    const TFOperator b = testing::random_aligned(rng, grid, 3, 16, 4);
    const TraceProperties p = trace_properties_check(a, b, sys, 4096, 4096);
    worst_comm = std::max(worst_comm, p.commutator_gap);
    worst_norm = std::max(worst_norm, p.norm_gap);
  }
  TermAccumulator acc(1);
  acc.add(TFPoint(0.0, 0.0), 3.0);
  acc.add(TFPoint(1.0, 2.0), 1.0);
  const TFOperator pair = std::move(acc).build();
  const GaborSystem fine = build_gabor(grid, 0.25, 0.5);
  const double lattice_gap =
      std::abs(trace_estimate(pair, sys, 16, 16).value - trace_estimate(pair, fine, 16, 16).value);
  o.detail << "|a(U_0) - 1| " << fmt(unit) << " (1e-3), on-lattice " << fmt(on) << " (1e-6), off-lattice a_32/a_8 "
           << fmt(a32 / a8) << " (0.5), commutator " << fmt(worst_comm) << " (1e-3), a*a " << fmt(worst_norm)
           << " (1e-2) on 20 pairs, lattice change " << fmt(lattice_gap) << " (2e-2), " << fmt(seconds_since(start))
           << " s";
  o.require(unit <= 1e-3, "identity");
  o.require(on <= 1e-6, "on-lattice");
  o.require(a32 <= 0.5 * a8, "off-lattice decay");
  o.require(worst_comm <= 1e-3, "commutator");
  o.require(worst_norm <= 1e-2, "a*a");
  o.require(lattice_gap <= 2e-2, "lattice independence");
}

void criterion_7(Outcome& o) {
  // Supports on the grid lattice (t in h Z, omega in (pi/L) Z): every U_{mu - lambda}
  // then has zero trace on the torus, and M = N = 256 is a whole number of periods.
  const oracle::Grid grid(1, 256, 8.0);
  const GaborSystem sys = build_gabor(grid, 0.5, 0.5);
  Rng rng(707);
  std::uniform_real_distribution<double> mod(0.5, 1.5), ph(0.0, 2.0 * kPi);
  const int m = 256;
  double worst_rel = 0.0, worst_off = 0.0;
  for (int f = 0; f < 10; ++f) {
    std::vector<TFPoint> pts;
    TermAccumulator acc(1);
    auto fresh = [&] {
      for (;;) {
        const TFPoint p = testing::aligned_point(rng, grid, 32, 16);
        bool seen = false;
        for (const auto& q : pts) seen = seen || q == p;
        if (!seen) return p;
      }
    };
    while (pts.size() < 5) {
      pts.push_back(fresh());
      acc.add(pts.back(), std::polar(mod(rng), ph(rng)));
    }
    const TFOperator t = std::move(acc).build();
    for (const auto& p : pts) {
      const cplx stored = t.coefficient_at(p);
      worst_rel = std::max(worst_rel, std::abs(recover_coefficient(t, p, sys, m, m) - stored) / std::abs(stored));
    }
    for (int k = 0; k < 5; ++k) worst_off = std::max(worst_off, std::abs(recover_coefficient(t, fresh(), sys, m, m)));
  }
  o.detail << "10 five-term operators at M = N = " << m << ", relative error " << fmt(worst_rel)
           << " (limit 1e-2), off-support " << fmt(worst_off) << " (limit 1e-2)";
  o.require(worst_rel <= 1e-2, "coefficients");
  o.require(worst_off <= 1e-2, "off-support");
}

void criterion_8(Outcome& o) {
  // U_0 - 0.1 U_{(1,0)}: T*T = 1.01 - 0.1 (U_1 + U_{-1}), spectrum [0.81, 1.21], support radius 1
  const double a = 0.81, b = 1.21, r0 = 1.0;
  const InversionReport inv = neumann_invert_contraction(geometric(0.1), Weight::constant(), 1e-14, 1000);
  std::vector<double> radii;
  for (int r = 0; r <= 10; ++r) radii.push_back(r);
  const DecayCertificate c = certify_decay(inv.inverse, a, b, r0, radii);
  const double expect = std::log((b + a) / (2.0 * (b - a))) / r0;
  int bad_tails = 0;
  for (const auto& [r, s] : c.tails) bad_tails += s <= c.c_const * std::exp(-c.delta * r) * (1.0 + 1e-12) ? 0 : 1;
  o.detail << "delta " << fmt(c.delta) << " (closed form " << fmt(expect) << "), C " << fmt(c.c_const) << ", "
           << bad_tails << " tails above C e^{-delta R}, slope " << fmt(c.regression_slope) << " (limit "
           << fmt(-c.delta + 0.05) << ")";
  o.require(c.certified && c.delta > 0.0, "certificate");
  o.require(std::abs(c.delta - expect) <= 1e-12 * expect, "delta");
  o.require(bad_tails == 0, "tails");
  o.require(c.regression_slope <= -c.delta + 0.05, "slope");
}

void criterion_9(Outcome& o) {
  const auto start = Clock::now();
  std::vector<std::vector<TFPoint>> sets{{TFPoint(0.0, 0.0), TFPoint(0.0, kPi)}};
  // random 3-point set: t on quarters in [-2, 2], omega on multiples of pi / 4 in [-2 pi, 2 pi]
  Rng rng(909);
  std::uniform_int_distribution<int> qt(-8, 8), qw(-8, 8);
  std::vector<TFPoint> random_set;
  while (random_set.size() < 3) {
    const TFPoint p(0.25 * qt(rng), 0.25 * kPi * qw(rng));
    bool seen = false;
    for (const auto& q : random_set) seen = seen || q == p;
    if (!seen) random_set.push_back(p);
  }
  sets.push_back(random_set);
  double worst_gram = 0.0, worst_fz = 0.0;
  for (const auto& sigma : sets) {
    const WindowSetup setup = plan_on_grid(sigma, 1024);
    const oracle::GridFunction g = realize_window(setup.plan, setup.grid);
    worst_gram = std::max(worst_gram, verify_orthonormal(g, sigma, 1e-5).max_deviation);
    for (double z : fourier_zero_residuals(setup.plan, setup.grid)) worst_fz = std::max(worst_fz, z);
  }
  const double elapsed = seconds_since(start);
  o.detail << "{(0,0),(0,pi)} and {";
  for (std::size_t i = 0; i < random_set.size(); ++i)
    o.detail << (i ? "," : "") << "(" << random_set[i].t()[0] << "," << fmt(random_set[i].omega()[0]) << ")";
  o.detail << "} at n = 1024, Gram " << fmt(worst_gram) << " (limit 1e-5), Fourier zero " << fmt(worst_fz)
           << " (limit 1e-10), " << fmt(elapsed) << " s (limit 60)";
  o.require(worst_gram <= 1e-5, "Gram");
  o.require(worst_fz <= 1e-10, "Fourier zero");
  o.require(elapsed <= 60.0, "runtime");
}

void criterion_10(Outcome& o) {
  Rng rng(1010);
  const double rho = 1.5;
  std::uniform_real_distribution<double> uy(-rho, rho);
  int violations = 0;
  for (int i = 0; i < 100; ++i) {
    const TFOperator t = testing::random_operator(rng, 1, 4, 2.0);
    const double y = uy(rng);
    const double lhs = norm_av(damped_slice(t, {y}), {});
    const double rhs = std::exp(rho * frequency_radius(t)) * norm_av(t, {});
    violations += lhs <= rhs * (1.0 + 1e-12) ? 0 : 1;
  }
  double worst_probe = 0.0;
  for (int i = 0; i < 10; ++i) {
    const TFOperator t = testing::random_operator(rng, 1, 3, 2.0);
    const double omega = frequency_radius(t);
    const SliceProbe p = slice_support_probe(t, {1, 2, 4, 8, 16, 32, 64});
    worst_probe = std::max(worst_probe, std::abs(p.omega_hat - omega) / omega);
  }
  o.detail << "damped slice bound on 100 pairs, " << violations << " violations; support probe relative error "
           << fmt(worst_probe) << " on 10 three-term operators (limit 0.05)";
  o.require(violations == 0, "slice bound");
  o.require(worst_probe <= 0.05, "support probe");
}

std::string binary_output(const std::string& args) {
  const std::string cmd = std::string(TFALG_BINARY) + " " + args + " 2>/dev/null";
  std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(cmd.c_str(), "r"), pclose);
  std::string text;
  if (!pipe) return text;
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, pipe.get())) > 0) text.append(buf, got);
  return text;
}

void criterion_11(Outcome& o) {
  const std::string data = TFALG_TEST_DATA;
  const auto inverse = std::filesystem::temp_directory_path() / "tfalg_acceptance_inverse.json";
  const std::vector<std::vector<std::string>> commands{
      {"invert", data + "/geometric_tenth.json", "--tol", "1e-12", "--seed", "11", "--inverse-out", inverse.string()},
      {"trace", data + "/trace_pair.json", "--lambda", "1", "2", "--seed", "11"},
      {"equalize", "--random", "5", "--seed", "11"},
      {"spectrum", data + "/half_shift.json", "--weight", "poly:2", "--seed", "11"},
      {"decay", inverse.string(), "--a", "0.81", "--b", "1.21", "--r0", "1", "--seed", "11"},
      {"window", data + "/sigma_pi.json", "--seed", "11"},
  };
  int identical = 0;
  for (const auto& args : commands) {
    std::ostringstream first, second, err;
    const int code = cli::run(args, first, err);
    cli::run(args, second, err);
    std::string joined;
    for (const auto& a : args) joined += " '" + a + "'";
    const std::string third = binary_output(joined);
    const bool same = code == cli::kOk && !first.str().empty() && first.str() == second.str() && first.str() == third;
    identical += same ? 1 : 0;
    o.require(same, args.front());
  }
  std::filesystem::remove(inverse);
  o.detail << identical << "/" << commands.size() << " subcommands byte-identical over two in-process runs and one process run";
}

}  // namespace

int main(int argc, char** argv) {
  // optional: criterion numbers to run (criterion 4 reuses the fixtures of 3)
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"algebra-oracle homomorphism", criterion_1},
      {"norm chain", criterion_2},
      {"Wiener-lemma inversion", criterion_3},
      {"inverse norm bound", criterion_4},
      {"Gelfand spectral radius", criterion_5},
      {"trace", criterion_6},
      {"coefficient recovery", criterion_7},
      {"exponential decay certificate", criterion_8},
      {"orthonormal window", criterion_9},
      {"damped slices", criterion_10},
      {"CLI determinism", criterion_11},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (!only.empty() && std::find(only.begin(), only.end(), static_cast<int>(i + 1)) == only.end()) continue;
    Outcome o;
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    failed += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << i + 1 << " " << criteria[i].first << ": " << o.detail.str()
              << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
