#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "toboggan/contour_io.hpp"
#include "toboggan/errors.hpp"
#include "toboggan/liouville.hpp"
#include "toboggan/potential_config.hpp"
#include "toboggan/propagate.hpp"
#include "toboggan/riemann_path.hpp"
#include "toboggan/scattering.hpp"
#include "toboggan/specfun.hpp"
#include "toboggan/spectrum.hpp"
#include "toboggan/susy.hpp"

namespace toboggan::cli {

/// Exit codes: success, usage or input error, flagged or unconverged result.
inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 1;
inline constexpr int exit_flagged = 2;

namespace detail {

using nlohmann::json;

inline std::string fmt(double x) { return format_double(x); }
inline std::string fmt(cplx z) { return fmt(z.real()) + "," + fmt(z.imag()); }

inline json cjson(cplx z) { return {{"re", z.real()}, {"im", z.imag()}}; }

/// "re" or "re,im".
inline cplx parse_complex(const std::string& s) {
  const auto comma = s.find(',');
  try {
    std::size_t used = 0;
    const double re = std::stod(s.substr(0, comma), &used);
    if (used != s.substr(0, comma).size()) throw std::invalid_argument(s);
    double im = 0.0;
    if (comma != std::string::npos) {
      const std::string t = s.substr(comma + 1);
      im = std::stod(t, &used);
      if (used != t.size()) throw std::invalid_argument(s);
    }
    return {re, im};
  } catch (const std::logic_error&) {
    throw InvalidArgument("cannot parse complex number '" + s + "'");
  }
}

/// "a,b" with a <= b.
inline std::pair<double, double> parse_window(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw InvalidArgument("window must be 'lo,hi', got '" + s + "'");
  const cplx lo = parse_complex(s.substr(0, comma));
  const cplx hi = parse_complex(s.substr(comma + 1));
  if (!(lo.real() <= hi.real())) throw InvalidArgument("window lower end exceeds upper end");
  return {lo.real(), hi.real()};
}

inline PowerLawPotential spiked_oscillator(double alpha) {
  PowerLawPotential v;
  v.ell = alpha - 0.5;
  return v;
}

/// Options shared by the subcommands that solve along a contour.
struct SolveOptions {
  std::string potential_file;
  std::optional<double> alpha;
  std::string kind = "auto";
  int winding = 0;
  double eps = 0.5;
  double rmax = 8.0;
  double rmin = 1e-3;
  std::optional<double> rtol;
  std::optional<double> atol;

  void attach(CLI::App* app) {
    app->add_option("--potential", potential_file, "potential config file");
    app->add_option("--alpha", alpha, "spiked oscillator with ell = alpha - 1/2 (used without --potential)");
    app->add_option("--kind", kind, "contour kind")
        ->check(CLI::IsMember({"auto", "toboggan", "straight", "half-line"}));
    app->add_option("--contour-N,--N", winding, "winding number")->check(CLI::NonNegativeNumber);
    app->add_option("--eps", eps, "contour offset epsilon");
    app->add_option("--rmax", rmax, "truncation radius");
    app->add_option("--rmin", rmin, "inner radius of the half-line");
    app->add_option("--rtol", rtol, "relative step tolerance");
    app->add_option("--atol", atol, "absolute step tolerance");
  }

  PowerLawPotential potential() const {
    if (!potential_file.empty()) return load_potential(potential_file);
    return spiked_oscillator(alpha.value_or(0.5));
  }

  Contour contour() const {
    std::string k = kind;
    if (k == "auto") k = winding > 0 ? "toboggan" : "straight";
    if (k == "toboggan") return make_toboggan(winding, eps, rmax);
    if (winding != 0) throw InvalidArgument("--kind " + k + " has no winding; drop --contour-N");
    if (k == "straight") return make_straight(eps, rmax);
    return make_half_line(rmin, rmax);
  }

  StepControl step() const {
    StepControl s;
    if (rtol) s.relative_tolerance = *rtol;
    if (atol) s.absolute_tolerance = *atol;
    s.validate();
    return s;
  }
};

// --- contour ---------------------------------------------------------------

struct ContourCmd {
  std::string kind = "toboggan";
  int winding = 1;
  double eps = 1.0;
  double rmax = 8.0;
  double rmin = 1e-3;
  std::string branch = "lower";
  std::string format = "csv";

  void attach(CLI::App* app) {
    app->add_option("--kind", kind)->check(CLI::IsMember({"toboggan", "straight", "half-line", "anti-stokes"}));
    app->add_option("--N", winding, "winding number")->check(CLI::NonNegativeNumber);
    app->add_option("--eps", eps);
    app->add_option("--rmax", rmax);
    app->add_option("--rmin", rmin, "inner radius of the half-line");
    app->add_option("--branch", branch, "anti-Stokes edge")->check(CLI::IsMember({"lower", "upper"}));
    app->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
  }

  int run(std::ostream& out, std::ostream&) const {
    Contour c;
    if (kind == "toboggan") c = make_toboggan(winding, eps, rmax);
    else if (kind == "straight") c = make_straight(eps, rmax);
    else if (kind == "half-line") c = make_half_line(rmin, rmax);
    else c = make_anti_stokes(winding, branch == "lower" ? Edge::Lower : Edge::Upper, rmax).path;
    if (format == "csv") write_contour_csv(out, c);
    else out << contour_json(c).dump(2) << '\n';
    return exit_ok;
  }
};

// --- spectrum --------------------------------------------------------------

struct SpectrumCmd {
  SolveOptions solve;
  std::string window = "0,12";
  int grid = 200;
  double refine_tol = 1e-9;
  std::string format = "csv";

  void attach(CLI::App* app) {
    solve.attach(app);
    app->add_option("--window", window, "real energy window lo,hi (use --window=-3,11 for negative lo)");
    app->add_option("--grid", grid, "scan grid points")->check(CLI::PositiveNumber);
    app->add_option("--refine-tol", refine_tol, "root refinement tolerance");
    app->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
  }

  int run(std::ostream& out, std::ostream& err) const {
    EigenProblem prob;
    prob.potential = solve.potential();
    prob.contour = solve.contour();
    std::tie(prob.window_lo, prob.window_hi) = parse_window(window);
    prob.grid_points = grid;
    prob.refine_tolerance = refine_tol;
    prob.step = solve.step();
    const auto rs = find_eigenvalues(prob);
    bool all = true;
    for (const auto& r : rs) all = all && r.converged;
    if (format == "csv") {
      out << "re_E,im_E,residual,n,q,converged\n";
      for (const auto& r : rs) {
        out << fmt(r.energy) << ',' << fmt(r.residual) << ',';
        if (r.labels) out << r.labels->n << ',' << to_string(r.labels->q);
        else out << ',';
        out << ',' << (r.converged ? 1 : 0) << '\n';
      }
    } else {
      json j{{"schema", 1}, {"subcommand", "spectrum"}, {"contour", to_string(prob.contour.kind)},
             {"N", prob.contour.winding}, {"eps", prob.contour.offset},
             {"window", {prob.window_lo, prob.window_hi}}};
      auto& a = j["eigenvalues"] = json::array();
      for (const auto& r : rs) {
        json e{{"energy", cjson(r.energy)}, {"residual", r.residual}, {"converged", r.converged}};
        if (r.labels) e["labels"] = {{"n", r.labels->n}, {"q", to_string(r.labels->q)}};
        a.push_back(e);
      }
      out << j.dump(2) << '\n';
    }
    if (!all) err << "warning: unconverged eigenvalues in the table\n";
    return all ? exit_ok : exit_flagged;
  }
};

// --- wavefunction ----------------------------------------------------------

struct WavefunctionCmd {
  SolveOptions solve;
  std::string energy;

  void attach(CLI::App* app) {
    solve.attach(app);
    app->add_option("--energy", energy, "energy re or re,im")->required();
  }

  /// Decaying solutions from both ends, each scaled to 1 at the vertex.
  int run(std::ostream& out, std::ostream& err) const {
    const PowerLawPotential v = solve.potential();
    const Contour c = solve.contour();
    const cplx E = parse_complex(energy);
    const StepControl ctl = solve.step();
    if (c.size() < 2) throw InvalidArgument("contour has fewer than two samples");
    const std::size_t last = c.size() - 1;
    std::vector<PropagationState> left, right;
    const auto l = transport(v, E, c, 0, c.vertex, end_state(v, E, c, ContourEnd::In), ctl, &left);
    const auto r = transport(v, E, c, last, c.vertex, end_state(v, E, c, ContourEnd::Out), ctl, &right);
    err << "normalized mismatch at vertex: " << fmt(normalized_mismatch(l, r)) << '\n';
    const cplx lv = l.log_psi();
    const cplx rv = r.log_psi();
    out << "t,re_psi,im_psi\n";
    for (std::size_t i = 0; i < c.size(); ++i) {
      const cplx lp = i <= c.vertex ? left[i].log_psi() - lv : right[last - i].log_psi() - rv;
      const cplx psi = std::exp(lp);
      out << fmt(c.samples[i].t) << ',' << fmt(psi) << '\n';
    }
    return exit_ok;
  }
};

// --- transform -------------------------------------------------------------

struct TransformCmd {
  std::string tau;
  std::string potential_file;
  int winding = 0;
  double eps = 1.0;
  double rmax = 8.0;
  std::string format = "text";

  void attach(CLI::App* app) {
    app->add_option("--tau", tau, "exponent p/q")->required();
    app->add_option("--potential", potential_file, "source potential config")->required();
    app->add_option("--contour-N,--N", winding, "source toboggan winding")->check(CLI::NonNegativeNumber);
    app->add_option("--eps", eps);
    app->add_option("--rmax", rmax);
    app->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));
  }

  int run(std::ostream& out, std::ostream&) const {
    const RationalExponent t = RationalExponent::parse(tau);
    const PowerLawPotential v = load_potential(potential_file);
    const Contour c = winding > 0 ? make_toboggan(winding, eps, rmax) : make_straight(eps, rmax);
    const auto tp = transform_potential(v, t);
    const auto m = make_map(v, t, c);
    if (format == "text") {
      out << "# tau = " << m.tau.str() << '\n'
          << "# source_ell = " << fmt(m.source_ell) << '\n'
          << "# target_ell = " << fmt(m.target_ell) << '\n'
          << "# energy_exponent = " << m.energy_exponent.str() << '\n'
          << "# energy_coupling = " << fmt(m.energy_coupling) << '\n'
          << "# energy_jacobian = " << fmt(m.energy_jacobian) << '\n'
          << "# inverse_energy_exponent = " << m.inverse_energy_exponent.str() << '\n'
          << "# target_energy = " << fmt(m.target_energy) << '\n'
          << "# source_winding = " << m.source_winding << '\n'
          << "# target_winding = " << m.target_winding << '\n'
          << "# canonical = " << (m.canonical ? "true" : "false") << '\n'
          << format_potential(tp.potential);
    } else {
      json terms = json::array();
      for (const auto& term : tp.potential.terms) terms.push_back({{"beta", term.beta.str()}, {"g", cjson(term.g)}});
      json j{{"schema", 1},
             {"subcommand", "transform"},
             {"map",
              {{"tau", m.tau.str()},
               {"source_ell", m.source_ell},
               {"target_ell", m.target_ell},
               {"energy_exponent", m.energy_exponent.str()},
               {"energy_coupling", cjson(m.energy_coupling)},
               {"energy_jacobian", cjson(m.energy_jacobian)},
               {"inverse_energy_exponent", m.inverse_energy_exponent.str()},
               {"target_energy", cjson(m.target_energy)},
               {"source_winding", m.source_winding},
               {"target_winding", m.target_winding},
               {"canonical", m.canonical}}},
             {"potential", {{"ell", tp.potential.ell}, {"harmonic", tp.potential.harmonic}, {"terms", terms}}},
             {"config", format_potential(tp.potential)}};
      out << j.dump(2) << '\n';
    }
    return exit_ok;
  }
};

// --- scatter / resonances --------------------------------------------------

inline json scatter_json(const ScatterResult& r) {
  return {{"B", cjson(r.backward)},
          {"F", cjson(r.forward)},
          {"in", {{"plus", cjson(r.in.plus)}, {"minus", cjson(r.in.minus)}}},
          {"out", {{"plus", cjson(r.out.plus)}, {"minus", cjson(r.out.minus)}}},
          {"conditioning", r.conditioning},
          {"resonance_proximity", r.resonance_proximity},
          {"resonance", r.resonance},
          {"untrusted", r.untrusted}};
}

struct ScatterCmd {
  double alpha = 0.3;
  double energy = 2.2;
  int winding = 0;
  std::string branch = "lower";
  std::string method = "analytic";
  std::string potential_file;
  std::optional<double> radius;
  std::optional<double> rtol;
  std::optional<double> atol;

  void attach(CLI::App* app) {
    app->add_option("--alpha", alpha)->required();
    app->add_option("--energy", energy)->required();
    app->add_option("--N", winding, "winding number")->check(CLI::NonNegativeNumber);
    app->add_option("--branch", branch)->check(CLI::IsMember({"lower", "upper"}));
    app->add_option("--method", method)->check(CLI::IsMember({"analytic", "numerical", "both"}));
    app->add_option("--potential", potential_file, "potential for the numerical method (default: spiked oscillator)");
    app->add_option("--radius", radius, "extraction radius of the numerical fit");
    app->add_option("--rtol", rtol);
    app->add_option("--atol", atol);
  }

  int run(std::ostream& out, std::ostream& err) const {
    ScatterProblem prob;
    prob.alpha = alpha;
    prob.energy = energy;
    prob.winding = winding;
    prob.branch = branch == "lower" ? Edge::Lower : Edge::Upper;
    if (radius) prob.extraction_radius = *radius;
    json j{{"schema", 1}, {"subcommand", "scatter"}, {"alpha", alpha}, {"energy", energy},
           {"mu", prob.mu()}, {"N", winding}, {"branch", branch}, {"method", method}};
    bool flagged = false;
    if (method != "numerical") {
      const auto r = analytic_amplitudes(prob);
      flagged = flagged || r.resonance || r.untrusted;
      j["analytic"] = scatter_json(r);
    }
    if (method != "analytic") {
      StepControl ctl;
      if (rtol) ctl.relative_tolerance = *rtol;
      if (atol) ctl.absolute_tolerance = *atol;
      const PowerLawPotential v = potential_file.empty() ? spiked_oscillator(alpha) : load_potential(potential_file);
      const auto r = numerical_amplitudes(v, prob, ctl);
      flagged = flagged || r.resonance || r.untrusted;
      j["numerical"] = scatter_json(r);
      j["numerical"]["distortion_exponent"] = r.distortion_exponent;
      j["numerical"]["extraction_radius"] = prob.extraction_radius;
    }
    out << j.dump(2) << '\n';
    if (flagged) err << "warning: result flagged (resonance or untrusted fit)\n";
    return flagged ? exit_flagged : exit_ok;
  }
};

struct ResonancesCmd {
  double alpha = 0.3;
  int count = 10;
  std::string format = "csv";

  void attach(CLI::App* app) {
    app->add_option("--alpha", alpha)->required();
    app->add_option("--count", count)->check(CLI::NonNegativeNumber);
    app->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
  }

  int run(std::ostream& out, std::ostream&) const {
    const auto es = resonance_energies(alpha, count);
    if (format == "csv") {
      out << "E\n";
      for (double e : es) out << fmt(e) << '\n';
    } else {
      out << json{{"schema", 1}, {"subcommand", "resonances"}, {"alpha", alpha}, {"energies", es}}.dump(2) << '\n';
    }
    return exit_ok;
  }
};

// --- susy ------------------------------------------------------------------

struct SusyCmd {
  int n = 0;
  double alpha = 0.5;
  std::string q = "plus";
  std::string format = "text";

  void attach(CLI::App* app) {
    app->add_option("--n", n)->check(CLI::NonNegativeNumber);
    app->add_option("--alpha", alpha);
    app->add_option("--q", q)->check(CLI::IsMember({"plus", "minus"}));
    app->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));
  }

  int run(std::ostream& out, std::ostream&) const {
    const QuasiParity qp = q == "plus" ? QuasiParity::Plus : QuasiParity::Minus;
    const auto w = superpotential(n, alpha, qp);
    const auto pv = partners(w);
    struct Block {
      std::string name;
      const RationalExpression* v;
      std::optional<PowerLawForm> form;
      std::string error;
    };
    std::vector<Block> blocks{{"V+", &pv.plus, {}, {}}, {"V-", &pv.minus, {}, {}}};
    for (auto& b : blocks) {
      try {
        b.form = to_power_law(*b.v);
      } catch (const InvalidArgument& e) {
        b.error = e.what();
      }
    }
    if (format == "text") {
      out << "W = " << w.str() << '\n';
      for (const auto& b : blocks) out << b.name << " = " << b.v->str() << '\n';
      for (const auto& b : blocks) {
        out << "\n# " << b.name << " as a power-law potential; its spectrum is this one shifted by energy_offset\n";
        if (!b.form) {
          out << "# not representable: " << b.error << '\n';
          continue;
        }
        out << "# energy_offset = " << fmt(b.form->energy_offset) << '\n' << format_potential(b.form->potential);
      }
    } else {
      json j{{"schema", 1}, {"subcommand", "susy"}, {"n", n}, {"alpha", alpha}, {"q", q}, {"W", w.str()}};
      for (const auto& b : blocks) {
        json e{{"expression", b.v->str()}};
        if (b.form) {
          e["energy_offset"] = cjson(b.form->energy_offset);
          e["config"] = format_potential(b.form->potential);
        } else {
          e["error"] = b.error;
        }
        j[b.name] = e;
      }
      out << j.dump(2) << '\n';
    }
    return exit_ok;
  }
};

// --- oracle ----------------------------------------------------------------

struct OracleCmd {
  int n = 0;
  double alpha = 0.5;
  std::optional<int> ell;

  void attach(CLI::App* app) {
    app->add_option("--n", n)->check(CLI::NonNegativeNumber);
    app->add_option("--alpha", alpha);
    app->add_option("--ell", ell, "Hermitian half-line oscillator with integer ell")->check(CLI::NonNegativeNumber);
  }

  int run(std::ostream& out, std::ostream&) const {
    if (ell) {
      out << "n,ell,E\n" << n << ',' << *ell << ',' << fmt(oracle_tqm(n, *ell)) << '\n';
      return exit_ok;
    }
    out << "n,q,E\n";
    for (QuasiParity q : {QuasiParity::Minus, QuasiParity::Plus})
      out << n << ',' << to_string(q) << ',' << fmt(oracle_ptsqm(n, alpha, q)) << '\n';
    return exit_ok;
  }
};

// --- specfun-probe ---------------------------------------------------------

struct SpecfunCmd {
  std::string fn = "gamma";
  std::string a = "1";
  std::string b = "1";
  std::string z = "1";
  int n = 0;
  double laguerre_a = 0.0;

  void attach(CLI::App* app) {
    app->add_option("--fn", fn)->check(CLI::IsMember({"gamma", "rgamma", "kummer", "laguerre"}));
    app->add_option("--a", a, "Kummer a, or the real Laguerre index");
    app->add_option("--b", b, "Kummer b");
    app->add_option("--z", z, "argument re or re,im");
    app->add_option("--n", n, "Laguerre degree")->check(CLI::NonNegativeNumber);
  }

  int run(std::ostream& out, std::ostream&) const {
    const cplx zz = parse_complex(z);
    cplx r;
    if (fn == "gamma") r = gamma(zz);
    else if (fn == "rgamma") r = reciprocal_gamma(zz);
    else if (fn == "kummer") r = kummer_m(parse_complex(a), parse_complex(b), zz);
    else r = laguerre(n, parse_complex(a).real(), zz);
    out << "re,im\n" << fmt(r) << '\n';
    return exit_ok;
  }
};

}  // namespace detail

/// Parses argv (argv[0] is the program name) and runs one subcommand.
inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Bound states and scattering for spiked power-law potentials on tobogganic contours", "toboggan"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "toboggan 1.0");

  detail::ContourCmd contour;
  detail::SpectrumCmd spectrum;
  detail::WavefunctionCmd wavefunction;
  detail::TransformCmd transform_cmd;
  detail::ScatterCmd scatter;
  detail::ResonancesCmd resonances;
  detail::SusyCmd susy;
  detail::OracleCmd oracle;
  detail::SpecfunCmd specfun;

  std::vector<std::pair<CLI::App*, std::function<int()>>> cmds;
  auto add = [&](const char* name, const char* help, auto& cmd) {
    CLI::App* sub = app.add_subcommand(name, help);
    cmd.attach(sub);
    cmds.push_back({sub, [&cmd, &out, &err] { return cmd.run(out, err); }});
    return sub;
  };
  add("contour", "sample a contour as CSV or JSON", contour);
  add("spectrum", "eigenvalues in a real energy window", spectrum);
  add("wavefunction", "sampled psi at a given energy, psi(vertex) = 1", wavefunction);
  add("transform", "Liouville image of a potential", transform_cmd);
  add("scatter", "backward and forward amplitudes of the spiked oscillator", scatter);
  add("resonances", "energies where the amplitudes are singular", resonances);
  add("susy", "superpotential and partner potentials of an oscillator state", susy);
  add("oracle", "closed-form oscillator energies", oracle);
  add("specfun-probe", "evaluate a special function", specfun)->group("");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  if (argv.empty()) argv.push_back("toboggan");
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_usage;
  }
  try {
    for (auto& [sub, fn] : cmds)
      if (sub->parsed()) return fn();
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  }
  return exit_usage;
}

inline int run(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return run(std::vector<std::string>(argv, argv + argc), out, err);
}

}  // namespace toboggan::cli
