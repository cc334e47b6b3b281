#pragma once

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gkdv/background.hpp"
#include "gkdv/error.hpp"
#include "gkdv/grid.hpp"
#include "gkdv/io.hpp"
#include "gkdv/nonlinearity.hpp"
#include "gkdv/solver.hpp"

namespace gkdv {

enum class InitialKind { zero, gaussian, soliton, file };

struct InitialData {
  InitialKind kind = InitialKind::zero;
  double amplitude = 1.0;
  double width = 1.0;
  double center = 0.0;
  double c = 1.0;  // soliton speed
  std::string file;
  /// Amplitude of seeded smooth noise added on top of the profile.
  double noise = 0.0;
};

struct NonlinearitySpec {
  NonlinearityKind kind = NonlinearityKind::polynomial;
  std::vector<double> coefficients{0.0, 0.0, 1.0};
  std::size_t order = AnalyticNonlinearity::default_order;

  AnalyticNonlinearity build() const { return AnalyticNonlinearity::of_kind(kind, coefficients, order); }
};

struct StudySpec {
  std::string kind = "temporal";  // temporal | spatial | viscosity
  std::vector<double> ladder;
};

/// One reproducible run: everything needed to rebuild it lives here.
struct ScenarioConfig {
  std::string name = "scenario";
  double L = 50.0;
  std::size_t n = 1024;
  NonlinearitySpec nonlinearity;
  BackgroundSpec background = bg::Zero{};
  SolverConfig solver;
  InitialData initial;
  double s = 1.0;
  double envelope_epsilon = 0.05;
  std::string output = "out";
  std::uint64_t seed = 1;
  StudySpec study;

  Grid grid() const { return Grid(L, n); }
};

namespace detail {

inline std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + io::format_double(v[i]);
  return out;
}

inline std::vector<double> split_numbers(const std::string& s, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(io::parse_double(item, what));
  }
  return out;
}

inline std::string initial_name(InitialKind k) {
  switch (k) {
    case InitialKind::zero: return "zero";
    case InitialKind::gaussian: return "gaussian";
    case InitialKind::soliton: return "soliton";
    default: return "file";
  }
}

inline InitialKind initial_from_string(const std::string& s) {
  if (s == "zero") return InitialKind::zero;
  if (s == "gaussian") return InitialKind::gaussian;
  if (s == "soliton") return InitialKind::soliton;
  if (s == "file") return InitialKind::file;
  throw ConfigError("unknown initial data kind '" + s + "'");
}

class Reader {
 public:
  explicit Reader(const boost::property_tree::ptree& pt) : pt_(pt) {}

  double number(const std::string& key, double fallback) const {
    auto v = pt_.get_optional<std::string>(key);
    return v ? io::parse_double(*v, key) : fallback;
  }
  std::size_t count(const std::string& key, std::size_t fallback) const {
    const double v = number(key, static_cast<double>(fallback));
    if (!(v >= 0.0) || v != std::floor(v)) throw ConfigError(key + " must be a non-negative integer");
    return static_cast<std::size_t>(v);
  }
  std::string text(const std::string& key, const std::string& fallback) const {
    return pt_.get<std::string>(key, fallback);
  }
  bool has(const std::string& key) const { return static_cast<bool>(pt_.get_optional<std::string>(key)); }

 private:
  const boost::property_tree::ptree& pt_;
};

}  // namespace detail

/// Parses the INI form: sections [scenario] [grid] [nonlinearity]
/// [background] [solver] [initial] [diagnostics] [study].
inline ScenarioConfig parse_scenario(const std::string& text) {
  boost::property_tree::ptree pt;
  try {
    std::istringstream in(text);
    boost::property_tree::ini_parser::read_ini(in, pt);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("config syntax: ") + e.what());
  }
  const detail::Reader r(pt);
  ScenarioConfig c;
  c.name = r.text("scenario.name", c.name);
  c.output = r.text("scenario.output", c.output);
  c.seed = r.count("scenario.seed", c.seed);

  c.L = r.number("grid.L", c.L);
  c.n = r.count("grid.n", c.n);

  c.nonlinearity.kind = nonlinearity_kind_from_string(r.text("nonlinearity.kind", "polynomial"));
  if (r.has("nonlinearity.coefficients"))
    c.nonlinearity.coefficients = detail::split_numbers(r.text("nonlinearity.coefficients", ""), "coefficients");
  else if (c.nonlinearity.kind != NonlinearityKind::polynomial)
    c.nonlinearity.coefficients.clear();
  c.nonlinearity.order = r.count("nonlinearity.order", c.nonlinearity.order);

  const std::string bkind = r.text("background.kind", "zero");
  const double bc = r.number("background.c", 1.0);
  const int sign = static_cast<int>(r.number("background.sign", 1.0));
  if (bkind == "zero") c.background = bg::Zero{};
  else if (bkind == "mkdv-kink") c.background = bg::MKdVKink{bc, sign};
  else if (bkind == "gardner-kink") c.background = bg::GardnerKink{bc, r.number("background.beta", 1.0), sign};
  else if (bkind == "kdv-cnoidal") c.background = bg::KdVCnoidal{bc, r.number("background.kappa", 0.5)};
  else if (bkind == "mkdv-dnoidal") c.background = bg::MKdVDnoidal{bc, r.number("background.kappa", 0.5)};
  else if (bkind == "synthetic") c.background = bg::Synthetic{};
  else if (bkind == "tabulated") {
    bg::Tabulated t;
    t.path = r.text("background.file", "");
    if (t.path.empty()) throw ConfigError("tabulated background needs background.file");
    c.background = t;
  } else
    throw ConfigError("unknown background kind '" + bkind + "'");

  auto& s = c.solver;
  s.scheme = scheme_from_string(r.text("solver.scheme", "ETDRK4"));
  s.dt = r.number("solver.dt", s.dt);
  s.T = r.number("solver.T", s.T);
  s.mu = r.number("solver.mu", s.mu);
  s.dealias = r.text("solver.dealias", s.dealias);
  s.boundary_fraction = r.number("solver.boundary_fraction", s.boundary_fraction);
  s.contamination_threshold = r.number("solver.contamination_threshold", s.contamination_threshold);
  s.tail_threshold = r.number("solver.tail_threshold", s.tail_threshold);
  s.forcing_taper_fraction = r.number("solver.forcing_taper_fraction", s.forcing_taper_fraction);
  s.noise_floor = r.number("solver.noise_floor", s.noise_floor);
  s.check_every = r.count("solver.check_every", s.check_every);
  s.output_every = r.count("diagnostics.cadence", s.output_every);

  auto& i = c.initial;
  i.kind = detail::initial_from_string(r.text("initial.kind", "zero"));
  i.amplitude = r.number("initial.amplitude", i.amplitude);
  i.width = r.number("initial.width", i.width);
  i.center = r.number("initial.center", i.center);
  i.c = r.number("initial.c", i.c);
  i.file = r.text("initial.file", i.file);
  i.noise = r.number("initial.noise", i.noise);

  c.s = r.number("diagnostics.s", c.s);
  c.envelope_epsilon = r.number("diagnostics.epsilon", c.envelope_epsilon);

  c.study.kind = r.text("study.kind", c.study.kind);
  if (r.has("study.ladder")) c.study.ladder = detail::split_numbers(r.text("study.ladder", ""), "study.ladder");

  // Structural validation (files are checked when the scenario is built).
  (void)c.grid();
  s.validate();
  if (!std::holds_alternative<bg::Tabulated>(c.background)) validate(c.background);
  if (c.study.kind != "temporal" && c.study.kind != "spatial" && c.study.kind != "viscosity")
    throw ConfigError("study.kind must be temporal, spatial or viscosity");
  (void)c.nonlinearity.build();
  return c;
}

inline ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

/// INI text that parses back to the same scenario.
inline std::string serialize_scenario(const ScenarioConfig& c) {
  using io::format_double;
  std::ostringstream o;
  o << "[scenario]\nname = " << c.name << "\noutput = " << c.output << "\nseed = " << c.seed << "\n\n";
  o << "[grid]\nL = " << format_double(c.L) << "\nn = " << c.n << "\n\n";
  o << "[nonlinearity]\nkind = " << to_string(c.nonlinearity.kind) << "\n";
  if (!c.nonlinearity.coefficients.empty()) o << "coefficients = " << detail::join(c.nonlinearity.coefficients) << "\n";
  o << "order = " << c.nonlinearity.order << "\n\n";
  o << "[background]\nkind = " << background_name(c.background) << "\n";
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, bg::MKdVKink>)
          o << "c = " << format_double(v.c) << "\nsign = " << v.sign << "\n";
        else if constexpr (std::is_same_v<T, bg::GardnerKink>)
          o << "c = " << format_double(v.c) << "\nbeta = " << format_double(v.beta) << "\nsign = " << v.sign << "\n";
        else if constexpr (std::is_same_v<T, bg::KdVCnoidal> || std::is_same_v<T, bg::MKdVDnoidal>)
          o << "c = " << format_double(v.c) << "\nkappa = " << format_double(v.kappa) << "\n";
        else if constexpr (std::is_same_v<T, bg::Tabulated>)
          o << "file = " << v.path << "\n";
      },
      c.background);
  const auto& s = c.solver;
  o << "\n[solver]\nscheme = " << to_string(s.scheme) << "\ndt = " << format_double(s.dt)
    << "\nT = " << format_double(s.T) << "\nmu = " << format_double(s.mu) << "\ndealias = " << s.dealias
    << "\nboundary_fraction = " << format_double(s.boundary_fraction)
    << "\ncontamination_threshold = " << format_double(s.contamination_threshold)
    << "\ntail_threshold = " << format_double(s.tail_threshold)
    << "\nforcing_taper_fraction = " << format_double(s.forcing_taper_fraction)
    << "\nnoise_floor = " << format_double(s.noise_floor) << "\ncheck_every = " << s.check_every << "\n\n";
  const auto& i = c.initial;
  o << "[initial]\nkind = " << detail::initial_name(i.kind) << "\namplitude = " << format_double(i.amplitude)
    << "\nwidth = " << format_double(i.width) << "\ncenter = " << format_double(i.center)
    << "\nc = " << format_double(i.c) << "\nnoise = " << format_double(i.noise) << "\n";
  if (!i.file.empty()) o << "file = " << i.file << "\n";
  o << "\n[diagnostics]\ncadence = " << s.output_every << "\ns = " << format_double(c.s)
    << "\nepsilon = " << format_double(c.envelope_epsilon) << "\n\n";
  o << "[study]\nkind = " << c.study.kind << "\n";
  if (!c.study.ladder.empty()) o << "ladder = " << detail::join(c.study.ladder) << "\n";
  return o.str();
}

/// Background with tabulated data loaded relative to base_dir.
inline BackgroundField build_background(const ScenarioConfig& c, const std::filesystem::path& base_dir = {}) {
  if (auto* t = std::get_if<bg::Tabulated>(&c.background)) {
    std::filesystem::path p = t->path;
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    return BackgroundField(read_tabulated(p.string()));
  }
  return BackgroundField(c.background);
}

/// KdV soliton A sech^2(sqrt(c)/2 (x - x0)) for f = a x^2, A = 3c / (2a).
inline PhysicalField kdv_soliton(const Grid& g, const AnalyticNonlinearity& nl, double c, double x0) {
  if (!nl.is_polynomial() || nl.degree() != 2 || nl.coeffs()[1] != 0.0)
    throw ConfigError("soliton initial data needs f(x) = a x^2");
  if (!(c > 0.0)) throw ConfigError("soliton speed must be positive");
  const double A = 1.5 * c / nl.coeffs()[2];
  const double k = 0.5 * std::sqrt(c);
  return PhysicalField::sample(g, [&](double x) {
    const double s = 1.0 / std::cosh(k * (x - x0));
    return A * s * s;
  });
}

/// Initial perturbation u0 for the scenario.
inline PhysicalField build_initial(const ScenarioConfig& c, const AnalyticNonlinearity& nl,
                                   const std::filesystem::path& base_dir = {}) {
  const Grid g = c.grid();
  const auto& i = c.initial;
  PhysicalField u(g);
  switch (i.kind) {
    case InitialKind::zero: break;
    case InitialKind::gaussian:
      if (!(i.width > 0.0)) throw ConfigError("gaussian width must be positive");
      u = PhysicalField::sample(g, [&](double x) {
        const double z = (x - i.center) / i.width;
        return i.amplitude * std::exp(-z * z);
      });
      break;
    case InitialKind::soliton: u = kdv_soliton(g, nl, i.c, i.center); break;
    case InitialKind::file: {
      std::filesystem::path p = i.file;
      if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
      u = io::read_field(p);
      if (u.grid != g) throw ConfigError("initial data file grid does not match [grid]");
      break;
    }
  }
  if (i.noise != 0.0) {
    // Smooth seeded perturbation: random amplitudes on |xi| <= 2 under a
    // Gaussian envelope centred with the profile.
    std::mt19937_64 rng(c.seed);
    std::normal_distribution<double> normal;
    SpectralField N(g);
    for (std::size_t j = 1; j < g.n() / 2; ++j) {
      if (g.xi(j) > 2.0) break;
      const complex z(normal(rng), normal(rng));
      N.coeffs[j] = z;
      N.coeffs[g.n() - j] = std::conj(z);
    }
    auto noise = inverse_transform(N);
    const double peak = std::max(noise.max_abs(), 1e-300);
    for (std::size_t j = 0; j < g.n(); ++j) {
      const double z = (g.x(j) - i.center) / (4.0 * std::max(i.width, 1.0));
      u.values[j] += i.noise * noise.values[j] / peak * std::exp(-z * z);
    }
  }
  return u;
}

}  // namespace gkdv
