#include "tfalg/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <random>

#include "tfalg/algebra.hpp"
#include "tfalg/errors.hpp"
#include "tfalg/gabor.hpp"
#include "tfalg/invert.hpp"
#include "tfalg/operator_io.hpp"
#include "tfalg/oracle.hpp"
#include "tfalg/window.hpp"

namespace tfalg::cli {

namespace {

using nlohmann::json;

struct Common {
  std::uint64_t seed = 0;
  std::string out_path;
  std::string config;
  bool quiet = false;
};

struct GridOpts {
  int n = 0;  // 0: command default
  double half_length = 8.0;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--seed", c.seed, "RNG seed, recorded in the output");
  sub->add_option("--out", c.out_path, "write the JSON result here instead of stdout");
  sub->add_option("--config", c.config, "JSON file with default flag values");
  sub->add_flag("--quiet", c.quiet, "no summary on stderr");
}

void add_grid(CLI::App* sub, GridOpts& g) {
  sub->add_option("--grid-n", g.n, "samples per axis (power of two >= 8)");
  sub->add_option("--grid-L", g.half_length, "grid half length L, domain [-L, L)^d");
}

oracle::Grid make_grid(int dim, const GridOpts& g, int default_1d) {
  int n = g.n;
  if (n == 0) n = dim == 1 ? default_1d : dim == 2 ? 32 : 8;
  return oracle::Grid(dim, n, g.half_length);
}

void emit(std::ostream& out, json j, const Common& c) {
  j["seed"] = c.seed;
  const std::string text = j.dump(1) + "\n";
  if (c.out_path.empty())
    out << text;
  else
    write_text_file(c.out_path, text);
}

std::string scalar_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

bool flag_present(const std::vector<std::string>& args, const std::string& flag) {
  return std::any_of(args.begin(), args.end(),
                     [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
}

// Appends config-file values for every flag the command line does not set.
std::vector<std::string> merge_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  json cfg;
  try {
    cfg = json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    throw ParseError("config '" + path + "': " + e.what());
  }
  if (!cfg.is_object()) throw ParseError("config '" + path + "' must be a JSON object");
  const std::vector<std::string> given = args;
  for (const auto& [key, value] : cfg.items()) {
    const std::string flag = "--" + key;
    if (flag_present(given, flag)) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back(flag);
    } else if (value.is_array()) {
      args.push_back(flag);
      for (const auto& x : value) args.push_back(scalar_text(x));
    } else if (value.is_null() || value.is_object()) {
      throw ParseError("config key '" + key + "' must be a scalar or an array");
    } else {
      args.push_back(flag);
      args.push_back(scalar_text(value));
    }
  }
  return args;
}

bool contraction_eligible(const TFOperator& t, const Weight& v) {
  const cplx c0 = t.coefficient_at(TFPoint::origin(t.dim()));
  if (c0 == 0.0) return false;
  return norm_av(axpy(-1.0 / c0, t, TFOperator::identity(t.dim())), v) < 1.0;
}

struct InvertOpts {
  std::string mode = "auto";
  std::string weight = "constant";
  double tol = 1e-6;
  int max_iter = 10000;
  double a = 0.0;
  double b = 0.0;
  GridOpts grid;
};

InversionReport invert_with(const TFOperator& t, const InvertOpts& o) {
  const Weight v = Weight::parse(o.weight);
  const bool contractive = contraction_eligible(t, v);
  if (o.mode == "contraction" || (o.mode == "auto" && contractive))
    return neumann_invert_contraction(t, v, o.tol, o.max_iter);
  double a = o.a, b = o.b;
  if (!(a > 0.0 && b > 0.0)) {
    const oracle::FrameBounds fb = oracle::frame_bounds_estimate(t, make_grid(t.dim(), o.grid, 128));
    a = fb.a_est;
    b = fb.b_est;
  }
  return neumann_invert_symmetric(t, v, a, b, o.tol, o.max_iter);
}

void add_invert_options(CLI::App* sub, InvertOpts& o) {
  sub->add_option("--mode", o.mode, "auto | contraction | symmetric")
      ->check(CLI::IsMember({"auto", "contraction", "symmetric"}));
  sub->add_option("--weight", o.weight, "constant | poly:s[,C] | subexp:alpha,beta | exp:alpha");
  sub->add_option("--tol", o.tol, "residual tolerance")->check(CLI::PositiveNumber);
  sub->add_option("--max-iter", o.max_iter, "maximum series length")->check(CLI::NonNegativeNumber);
  sub->add_option("--a", o.a, "lower bound A of T*T (symmetric mode)");
  sub->add_option("--b", o.b, "upper bound B of T*T (symmetric mode)");
  add_grid(sub, o.grid);
}

oracle::GridFunction test_signal(const std::string& text, const oracle::Grid& grid) {
  if (text == "gaussian") {
    return oracle::GridFunction::sample(grid, [](const std::vector<double>& x) {
      double r2 = 0.0;
      for (double v : x) r2 += v * v;
      return cplx(std::exp(-0.5 * r2));
    });
  }
  oracle::GridFunction f = oracle::read_grid_function(text);
  if (!(f.grid() == grid)) throw ParseError("signal '" + text + "' lives on a different grid");
  return f;
}

// U_0 plus k - 1 complex Gaussian terms scaled to total modulus 0.8, supports
// uniform in [-box_t, box_t] x [-box_omega, box_omega] (per axis).
TFOperator random_channel(int k, int dim, std::uint64_t seed, double box_t, double box_omega, bool snap,
                          const oracle::Grid& grid) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<TFPoint> pts{TFPoint::origin(dim)};
  std::vector<cplx> cs{1.0};
  double total = 0.0;
  for (int attempts = 0; static_cast<int>(pts.size()) < k; ++attempts) {
    if (attempts > 100000) throw PreconditionError("cannot place distinct channel taps in the box");
    std::vector<double> t(static_cast<std::size_t>(dim)), w(static_cast<std::size_t>(dim));
    for (int a = 0; a < dim; ++a) {
      t[static_cast<std::size_t>(a)] = box_t * unit(rng);
      w[static_cast<std::size_t>(a)] = box_omega * unit(rng);
      if (snap) {
        const double h = grid.spacing(), f = grid.fundamental_frequency();
        t[static_cast<std::size_t>(a)] = std::round(t[static_cast<std::size_t>(a)] / h) * h;
        w[static_cast<std::size_t>(a)] = std::round(w[static_cast<std::size_t>(a)] / f) * f;
      }
    }
    TFPoint p(t, w);
    if (std::any_of(pts.begin(), pts.end(), [&](const TFPoint& q) { return q == p; })) continue;
    const cplx c(gauss(rng), gauss(rng));
    if (std::abs(c) == 0.0) continue;
    pts.push_back(p);
    cs.push_back(c);
    total += std::abs(c);
  }
  TermAccumulator acc(dim);
  acc.add(pts[0], cs[0]);
  for (std::size_t i = 1; i < pts.size(); ++i) acc.add(pts[i], cs[i] * (0.8 / total));
  return std::move(acc).build();
}

std::vector<TFPoint> read_sigma(const std::string& path) {
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    throw ParseError("'" + path + "': " + e.what());
  }
  if (!j.is_object() || !j.contains("dim") || !j.at("dim").is_number_integer() || !j.contains("points") ||
      !j.at("points").is_array())
    throw ParseError("sigma file needs {\"dim\": d, \"points\": [...]}");
  const int dim = j.at("dim").get<int>();
  if (dim < 1) throw ParseError("'dim' must be >= 1");
  std::vector<TFPoint> pts;
  for (const auto& p : j.at("points")) pts.push_back(point_from_json(p, dim));
  return pts;
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Time-frequency shift operator algebra toolkit", "tfalg"};
  app.require_subcommand(1);
  Common common;
  std::function<int()> action;

  // invert
  auto* inv = app.add_subcommand("invert", "invert an operator inside the algebra");
  std::string inv_input, inv_inverse_out;
  InvertOpts inv_opts;
  inv->add_option("operator", inv_input, "operator JSON file")->required();
  inv->add_option("--inverse-out", inv_inverse_out, "write the inverse operator file here");
  add_invert_options(inv, inv_opts);
  add_common(inv, common);
  inv->callback([&] {
    action = [&] {
      const TFOperator t = read_operator(inv_input);
      const InversionReport r = invert_with(t, inv_opts);
      if (!inv_inverse_out.empty()) write_operator(inv_inverse_out, r.inverse);
      emit(out, to_json(r), common);
      if (!common.quiet)
        err << "invert: mode " << to_string(r.mode) << ", " << r.iterations << " iterations, residual "
            << r.residual_av << (r.converged ? "" : " (not converged)") << "\n";
      return r.converged && r.residual_av <= inv_opts.tol ? kOk : kFailed;
    };
  });

  // trace
  auto* tr = app.add_subcommand("trace", "trace estimate and coefficient recovery on a Gabor frame");
  std::string tr_input;
  double alpha = 0.5, beta = 0.5;
  int big_m = 16, big_n = -1;
  std::vector<double> lambda;
  bool tight = false;
  GridOpts tr_grid;
  tr->add_option("operator", tr_input, "operator JSON file")->required();
  tr->add_option("--alpha", alpha, "frequency lattice step (2 pi alpha)");
  tr->add_option("--beta", beta, "time lattice step");
  tr->add_option("--M", big_m, "frequency truncation")->check(CLI::NonNegativeNumber);
  tr->add_option("--N", big_n, "time truncation (default: M)");
  tr->add_option("--lambda", lambda, "recover the coefficient at (t..., omega...)");
  tr->add_flag("--tight", tight, "use the canonical tight window");
  add_grid(tr, tr_grid);
  add_common(tr, common);
  tr->callback([&] {
    action = [&] {
      const TFOperator t = read_operator(tr_input);
      const GaborSystem sys = build_gabor(make_grid(t.dim(), tr_grid, 256), alpha, beta, tight);
      const int n = big_n < 0 ? big_m : big_n;
      const TraceEstimate e = trace_estimate(t, sys, big_m, n);
      json j = to_json(e);
      j["alpha"] = alpha;
      j["beta"] = beta;
      if (!lambda.empty()) {
        const auto d = static_cast<std::size_t>(t.dim());
        if (lambda.size() != 2 * d)
          throw ParseError("--lambda needs " + std::to_string(2 * d) + " numbers (t then omega)");
        const TFPoint p(std::vector<double>(lambda.begin(), lambda.begin() + static_cast<long>(d)),
                        std::vector<double>(lambda.begin() + static_cast<long>(d), lambda.end()));
        const cplx c = recover_coefficient(t, p, sys, big_m, n);
        j["lambda"] = to_json(p);
        j["coefficient"] = {c.real(), c.imag()};
      }
      emit(out, j, common);
      if (!common.quiet) err << "trace: a_{M,N} = " << e.value << "\n";
      return kOk;
    };
  });

  // equalize
  auto* eq = app.add_subcommand("equalize", "apply a channel to a signal and undo it with the computed inverse");
  std::string channel_file, signal = "gaussian";
  int random_k = 0, levels = 4;
  double box_t = 2.0, box_omega = 3.0;
  bool no_snap = false;
  InvertOpts eq_opts;
  eq->add_option("--channel-file", channel_file, "channel operator JSON file");
  eq->add_option("--random", random_k, "random channel with this many taps (uses --seed)")->check(CLI::PositiveNumber);
  eq->add_option("--signal", signal, "gaussian, or a grid function file");
  eq->add_option("--levels", levels, "points on the tolerance/error curve")->check(CLI::PositiveNumber);
  eq->add_option("--box-t", box_t, "random taps: time range [-box_t, box_t]");
  eq->add_option("--box-omega", box_omega, "random taps: frequency range");
  eq->add_flag("--no-snap", no_snap, "random taps are not snapped to the grid");
  add_invert_options(eq, eq_opts);
  add_common(eq, common);
  eq->callback([&] {
    action = [&] {
      if (channel_file.empty() == (random_k == 0))
        throw ParseError("equalize needs exactly one of --channel-file and --random");
      TFOperator t;
      oracle::Grid grid = make_grid(1, eq_opts.grid, 128);
      if (!channel_file.empty()) {
        t = read_operator(channel_file);
        grid = make_grid(t.dim(), eq_opts.grid, 128);
      } else {
        t = random_channel(random_k, 1, common.seed, box_t, box_omega, !no_snap, grid);
      }
      const oracle::GridFunction s = test_signal(signal, grid);
      const oracle::GridFunction y = oracle::apply(t, s, oracle::natural_mode(t, grid));
      json curve = json::array();
      InversionReport last;
      double error = 0.0;
      for (int j = 0; j < levels; ++j) {
        InvertOpts o = eq_opts;
        o.tol = eq_opts.tol * std::pow(10.0, levels - 1 - j);
        last = invert_with(t, o);
        const oracle::GridFunction z = oracle::apply(last.inverse, y, oracle::natural_mode(last.inverse, grid));
        double e2 = 0.0;
        for (std::size_t k = 0; k < grid.size(); ++k) e2 += std::norm(z[k] - s[k]);
        error = std::sqrt(e2 * std::pow(grid.spacing(), grid.dim())) / s.norm();
        curve.push_back({{"tol", o.tol},
                         {"residual_av", last.residual_av},
                         {"iterations", last.iterations},
                         {"inverse_terms", last.inverse.size()},
                         {"error", error}});
      }
      json j{{"channel", to_json(t)},
             {"grid", {{"d", grid.dim()}, {"n_samples", grid.n_samples()}, {"L", grid.half_length()}}},
             {"mode", to_string(last.mode)},
             {"residual_av", last.residual_av},
             {"converged", last.converged},
             {"error", error},
             {"curve", std::move(curve)}};
      emit(out, j, common);
      if (!common.quiet) err << "equalize: relative L2 error " << error << ", residual " << last.residual_av << "\n";
      return last.converged ? kOk : kFailed;
    };
  });

  // spectrum
  auto* sp = app.add_subcommand("spectrum", "spectral radius upper bounds by Gelfand's formula");
  std::string sp_input, sp_weight = "constant";
  int n_max = 64;
  sp->add_option("operator", sp_input, "operator JSON file")->required();
  sp->add_option("--weight", sp_weight, "constant | poly:s[,C] | subexp:alpha,beta | exp:alpha");
  sp->add_option("--n-max", n_max, "largest power computed sequentially")->check(CLI::Range(2, 1 << 20));
  add_common(sp, common);
  sp->callback([&] {
    action = [&] {
      const TFOperator t = read_operator(sp_input);
      const GelfandResult g = spectral_radius_gelfand(t, Weight::parse(sp_weight), n_max);
      json j = to_json(g);
      j["weight"] = Weight::parse(sp_weight).to_string();
      emit(out, j, common);
      if (!common.quiet) err << "spectrum: extrapolated radius " << g.extrapolated << "\n";
      return kOk;
    };
  });

  // decay
  auto* dc = app.add_subcommand("decay", "exponential decay certificate for an inverse");
  std::string dc_input;
  double dc_a = 0.0, dc_b = 0.0, dc_r0 = 0.0;
  std::vector<double> radii;
  dc->add_option("inverse", dc_input, "inverse operator JSON file")->required();
  dc->add_option("--a", dc_a, "lower bound A of T*T")->required();
  dc->add_option("--b", dc_b, "upper bound B of T*T")->required();
  dc->add_option("--r0", dc_r0, "support radius of 1 - 2/(A+B) T*T")->required();
  dc->add_option("--radii", radii, "tail radii (default 0..10)");
  add_common(dc, common);
  dc->callback([&] {
    action = [&] {
      const TFOperator x = read_operator(dc_input);
      std::vector<double> rs = radii;
      if (rs.empty())
        for (int r = 0; r <= 10; ++r) rs.push_back(r);
      const DecayCertificate c = certify_decay(x, dc_a, dc_b, dc_r0, rs);
      bool holds = true;
      for (const auto& [r, s] : c.tails) holds = holds && s <= c.c_const * std::exp(-c.delta * r) * (1.0 + 1e-12);
      emit(out, to_json(c), common);
      if (!common.quiet)
        err << "decay: delta " << c.delta << (c.certified ? " (certified)" : " (empirical, no certificate)") << "\n";
      return c.certified && holds ? kOk : kPrecondition;
    };
  });

  // window
  auto* wn = app.add_subcommand("window", "window whose shifts by Sigma are orthonormal");
  std::string sigma_file, window_out;
  int wn_n = 1024;
  double wn_tol = 1e-5;
  wn->add_option("sigma", sigma_file, "Sigma JSON file {\"dim\", \"points\"}")->required();
  wn->add_option("--grid-n", wn_n, "samples per axis");
  wn->add_option("--tol", wn_tol, "Gram deviation tolerance")->check(CLI::PositiveNumber);
  wn->add_option("--window-out", window_out, "write the window as a grid function file");
  add_common(wn, common);
  wn->callback([&] {
    action = [&] {
      const std::vector<TFPoint> sigma = read_sigma(sigma_file);
      const WindowSetup setup = plan_on_grid(sigma, wn_n);
      const oracle::GridFunction g = realize_window(setup.plan, setup.grid);
      const GramReport gram = verify_orthonormal(g, sigma, wn_tol);
      const std::vector<double> fz = fourier_zero_residuals(setup.plan, setup.grid);
      const bool fz_ok = std::all_of(fz.begin(), fz.end(), [](double x) { return x <= 1e-10; });
      if (!window_out.empty()) oracle::write_grid_function(window_out, g);
      json j{{"plan", to_json(setup.plan)},
             {"grid", {{"d", setup.grid.dim()}, {"n_samples", setup.grid.n_samples()}, {"L", setup.grid.half_length()}}},
             {"gram", to_json(gram)},
             {"fourier_zero", fz},
             {"pass", gram.pass && fz_ok}};
      emit(out, j, common);
      if (!common.quiet) err << "window: M = " << setup.plan.m() << ", Gram deviation " << gram.max_deviation << "\n";
      return gram.pass && fz_ok ? kOk : kPrecondition;
    };
  });

  try {
    std::vector<std::string> args = merge_config(raw_args);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kParse;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kParse;
  }

  try {
    return action ? action() : kParse;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kParse;
  } catch (const ResourceLimit& e) {
    err << "error: " << e.what() << "\n";
    return kResource;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << "\n";
    return kPrecondition;
  } catch (const DimensionMismatch& e) {
    err << "error: " << e.what() << "\n";
    return kPrecondition;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailed;
  }
}

}  // namespace tfalg::cli
