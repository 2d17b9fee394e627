// finsleroid — command-line front end.
//
// Subcommands:
//   eval       scalar record for one vector (norms, sector, determinants)
//   geodesic   sample a geodesic: connect two points, or shoot initial data
//   transform  quasi-pseudoeuclidean image, Jacobian and n-tensor checks
//   verify     run the randomized identity suite
//
// Exit codes: 0 success, 1 verification failure, 2 usage error,
// 3 domain/singularity error (the message names the violated identity).

#include <finsleroid/finsleroid.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitDomain = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parse "a,b,c,..." into a flat coordinate vector.
fsr::Vec parse_components(const std::string& text) {
  std::vector<double> vals;
  size_t pos = 0;
  while (pos <= text.size()) {
    const size_t comma = text.find(',', pos);
    const std::string tok =
        text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (tok.empty() || end != tok.c_str() + tok.size())
      throw UsageError("cannot parse component '" + tok + "' in '" + text + "'");
    vals.push_back(v);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  fsr::Vec out(vals.size());
  for (size_t i = 0; i < vals.size(); ++i) out[i] = vals[i];
  return out;
}

// Reconcile a parsed coordinate list with the configured dimension:
// an explicitly given --dim must match; otherwise the list length wins.
fsr::EventVector to_event(const fsr::Vec& flat, int& dim, bool dim_explicit) {
  if (flat.size() < 2) throw UsageError("need at least R0 and one spatial component");
  const int d = static_cast<int>(flat.size()) - 1;
  if (dim_explicit && d != dim)
    throw UsageError("vector has " + std::to_string(d) + " spatial components but --dim is " +
                     std::to_string(dim));
  dim = d;
  return fsr::EventVector::from_flat(flat);
}

// A flat record serialized as one CSV header+row pair or one JSON line.
// Empty string values become empty CSV cells and are omitted from JSON.
struct Record {
  std::vector<std::pair<std::string, std::string>> fields;

  void add(const std::string& key, const std::string& v) { fields.emplace_back(key, v); }
  void add(const std::string& key, double v) { add(key, fsr::fmt_double(v)); }
  void add_missing(const std::string& key) { add(key, std::string()); }

  std::string csv() const {
    std::string head, row;
    for (size_t i = 0; i < fields.size(); ++i) {
      if (i) {
        head += ',';
        row += ',';
      }
      head += fields[i].first;
      row += fields[i].second;
    }
    return head + '\n' + row + '\n';
  }

  std::string jsonl() const {
    fsr::JsonObject o;
    for (const auto& [k, v] : fields) {
      if (v.empty()) continue;
      // Numeric fields were preformatted; quote only non-numeric ones.
      char* end = nullptr;
      std::strtod(v.c_str(), &end);
      if (end == v.c_str() + v.size())
        o.raw(k, v);
      else
        o.field(k, v);
    }
    return o.str() + '\n';
  }
};

struct GlobalConfig {
  double g = 0.0;
  int dim = 3;
  bool dim_explicit = false;
  std::string format = "csv";
  std::string output;
};

void write_out(const GlobalConfig& cfg, const std::string& data) {
  if (cfg.output.empty()) {
    std::cout << data;
    return;
  }
  std::ofstream f(cfg.output, std::ios::binary);
  if (!f) throw UsageError("cannot open output file '" + cfg.output + "'");
  f << data;
}

std::string serialize(const GlobalConfig& cfg, const Record& rec) {
  return cfg.format == "csv" ? rec.csv() : rec.jsonl();
}

// --- eval ------------------------------------------------------------------

int cmd_eval(GlobalConfig& cfg, const std::string& vector_arg) {
  const fsr::EventVector R = to_event(parse_components(vector_arg), cfg.dim, cfg.dim_explicit);
  const fsr::CouplingParams p = fsr::derive_params(cfg.g);
  const fsr::SectorLabel sector = fsr::classify_sector(p, R);
  const bool isotropic = sector == fsr::SectorLabel::FutureIsotropic ||
                         sector == fsr::SectorLabel::PastIsotropic;
  const bool future_timelike = sector == fsr::SectorLabel::FutureTimelike;

  Record rec;
  rec.add("g", p.g);
  rec.add("sector", to_string(sector));
  rec.add("F", fsr::fmf_F(p, R));
  rec.add("B", fsr::quadratic_form_B(p, R));
  rec.add("A", fsr::func_A(p, R));
  rec.add("L", fsr::func_L(p, R));
  if (isotropic)
    rec.add_missing("j");
  else
    rec.add("j", fsr::weight_j(p, R));

  if (future_timelike) {
    const fsr::MetricTensor gt = fsr::metric_tensor(p, R);
    const double j = fsr::weight_j(p, R);
    rec.add("det_g", gt.components.determinant());
    rec.add("minus_j8", -std::pow(j, 8.0));
    const fsr::MomentumCovector P = fsr::covector_of(p, R);
    rec.add("P0", P.p0);
    for (int a = 0; a < cfg.dim; ++a) rec.add("P" + std::to_string(a + 1), P.p[a]);
    rec.add("H", fsr::fhf_H(p, P));
  } else {
    rec.add_missing("det_g");
    rec.add_missing("minus_j8");
    rec.add_missing("P0");
    for (int a = 0; a < cfg.dim; ++a) rec.add_missing("P" + std::to_string(a + 1));
    rec.add_missing("H");
  }
  write_out(cfg, serialize(cfg, rec));
  return kExitOk;
}

// --- geodesic --------------------------------------------------------------

std::string geodesic_stream(const GlobalConfig& cfg, const fsr::GeodesicCurve& c, int samples) {
  std::string out;
  if (cfg.format == "csv") {
    out += "# a=" + fsr::fmt_double(c.a) + " b=" + fsr::fmt_double(c.b) +
           " alpha=" + fsr::fmt_double(c.alpha) + " delta_s=" + fsr::fmt_double(c.delta_s) + '\n';
    out += "s";
    for (int i = 0; i <= cfg.dim; ++i) out += ",R" + std::to_string(i);
    for (int i = 0; i <= cfg.dim; ++i) out += ",U" + std::to_string(i);
    out += ",F,X\n";
  } else {
    out += fsr::JsonObject()
               .field("a", c.a)
               .field("b", c.b)
               .field("alpha", c.alpha)
               .field("delta_s", c.delta_s)
               .str() +
           '\n';
  }
  for (int k = 0; k < samples; ++k) {
    const double s = samples > 1 ? c.delta_s * double(k) / double(samples - 1) : 0.0;
    const fsr::EventVector R = fsr::eval_point(c, s);
    const fsr::EventVector U = fsr::eval_velocity(c, s);
    const double F = fsr::fmf_F(c.params, R);
    const double X = fsr::nonplanarity(c, s);
    if (cfg.format == "csv") {
      out += fsr::fmt_double(s) + ',' + fsr::fmt_components(R.flat()) + ',' +
             fsr::fmt_components(U.flat()) + ',' + fsr::fmt_double(F) + ',' +
             fsr::fmt_double(X) + '\n';
    } else {
      out += fsr::JsonObject()
                 .field("s", s)
                 .field("R", R.flat())
                 .field("U", U.flat())
                 .field("F", F)
                 .field("X", X)
                 .str() +
             '\n';
    }
  }
  return out;
}

int cmd_geodesic_connect(GlobalConfig& cfg, const std::string& from, const std::string& to,
                         int samples) {
  const fsr::EventVector R1 = to_event(parse_components(from), cfg.dim, cfg.dim_explicit);
  const fsr::EventVector R2 = to_event(parse_components(to), cfg.dim, true);
  const fsr::CouplingParams p = fsr::derive_params(cfg.g);
  const fsr::GeodesicCurve c = fsr::connect(p, R1, R2);
  write_out(cfg, geodesic_stream(cfg, c, samples));
  return kExitOk;
}

int cmd_geodesic_shoot(GlobalConfig& cfg, const std::string& from, const std::string& velocity,
                       double delta_s, int samples) {
  const fsr::EventVector R1 = to_event(parse_components(from), cfg.dim, cfg.dim_explicit);
  const fsr::EventVector U1 = to_event(parse_components(velocity), cfg.dim, true);
  const fsr::CouplingParams p = fsr::derive_params(cfg.g);
  const fsr::EventVector R2 = fsr::shoot(p, R1, U1, delta_s);
  const fsr::GeodesicCurve c = fsr::connect(p, R1, R2);
  write_out(cfg, geodesic_stream(cfg, c, samples));
  return kExitOk;
}

// --- transform -------------------------------------------------------------

int cmd_transform(GlobalConfig& cfg, const std::string& vector_arg) {
  const fsr::EventVector R = to_event(parse_components(vector_arg), cfg.dim, cfg.dim_explicit);
  const fsr::CouplingParams p = fsr::derive_params(cfg.g);
  const fsr::QPoint t = fsr::sigma(p, R);
  const fsr::EventVector back = fsr::mu(p, t);
  const double rscale = R.flat().cwiseAbs().maxCoeff();
  const double round_trip = (back.flat() - R.flat()).cwiseAbs().maxCoeff() / rscale;
  const fsr::JacobianPair J = fsr::sigma_jacobian(p, R);
  const double j = fsr::weight_j(p, R);
  const double det_identity = std::pow(j, double(cfg.dim + 1)) * std::pow(p.h, double(cfg.dim));
  const fsr::NTensorPair nt = fsr::n_tensor(p, t);
  const double h_identity = std::pow(p.h, 2.0 * cfg.dim);

  Record rec;
  rec.add("g", p.g);
  rec.add("t0", t.t0);
  for (int a = 0; a < cfg.dim; ++a) rec.add("t" + std::to_string(a + 1), t.t[a]);
  rec.add("s_norm", fsr::s_norm(t));
  rec.add("round_trip_residual", round_trip);
  rec.add("det_jacobian", J.forward.determinant());
  rec.add("det_jacobian_identity", det_identity);
  rec.add("det_n_upper", nt.upper.determinant());
  rec.add("det_n_identity", -h_identity);
  write_out(cfg, serialize(cfg, rec));
  return kExitOk;
}

// --- verify ----------------------------------------------------------------

int cmd_verify(GlobalConfig& cfg, int samples, long long seed,
               const std::vector<std::string>& tol_args) {
  fsr::FDConfig fd;
  for (const std::string& t : tol_args) {
    const size_t eq = t.find('=');
    if (eq == std::string::npos) throw UsageError("--tol expects name=value, got '" + t + "'");
    const std::string name = t.substr(0, eq);
    const std::string val = t.substr(eq + 1);
    char* end = nullptr;
    const double tol = std::strtod(val.c_str(), &end);
    if (val.empty() || end != val.c_str() + val.size())
      throw UsageError("cannot parse tolerance value '" + val + "'");
    if (!fsr::tolerance_prefix_known(name))
      throw UsageError("--tol prefix '" + name + "' matches no identity in the catalog");
    fd.tolerances[name] = tol;
  }
  const fsr::SuiteReport rep = fsr::run_suite({cfg.g}, samples,
                                              static_cast<std::uint64_t>(seed), fd, cfg.dim);
  write_out(cfg, cfg.format == "csv" ? fsr::suite_report_csv(rep) : fsr::suite_report_jsonl(rep));
  return rep.all_pass() ? kExitOk : kExitVerifyFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finsleroid-space toolkit: norms, transformations, geodesics, identity checks"};
  app.fallthrough();
  app.require_subcommand(1);

  GlobalConfig cfg;
  app.add_option("--g", cfg.g, "Finsleroid coupling parameter g");
  auto* dim_opt =
      app.add_option("--dim", cfg.dim, "spatial dimension (default 3)")->check(CLI::PositiveNumber);
  app.add_option("--format", cfg.format, "output format")
      ->check(CLI::IsMember({"csv", "json-lines"}))
      ->default_str("csv");
  app.add_option("--output", cfg.output, "write data to this file instead of stdout");

  std::string eval_vector;
  auto* eval = app.add_subcommand("eval", "evaluate scalar invariants at one vector");
  eval->add_option("--vector", eval_vector, "components R0,R1,...,Rd")->required();

  auto* geo = app.add_subcommand("geodesic", "sample a geodesic curve");
  geo->require_subcommand(1);
  geo->fallthrough();
  int samples = 11;
  geo->add_option("--samples", samples, "number of evenly spaced sample rows (default 11)")
      ->check(CLI::NonNegativeNumber);
  std::string from, to, velocity;
  double delta_s = 0.0;
  auto* geo_connect = geo->add_subcommand("connect", "geodesic through two points");
  geo_connect->add_option("--from", from, "start point R0,...,Rd")->required();
  geo_connect->add_option("--to", to, "end point R0,...,Rd")->required();
  auto* geo_shoot = geo->add_subcommand("shoot", "geodesic from a point and unit velocity");
  geo_shoot->add_option("--from", from, "start point R0,...,Rd")->required();
  geo_shoot->add_option("--velocity", velocity, "initial velocity U0,...,Ud (unit norm)")
      ->required();
  geo_shoot->add_option("--delta-s", delta_s, "arclength to advance")->required();

  std::string transform_vector;
  auto* transform = app.add_subcommand("transform", "quasi-pseudoeuclidean image of a vector");
  transform->add_option("--vector", transform_vector, "components R0,R1,...,Rd")->required();

  auto* verify = app.add_subcommand("verify", "run the randomized identity suite");
  int verify_samples = 100;
  long long verify_seed = 0;
  std::vector<std::string> tol_args;
  verify->add_option("--samples", verify_samples, "points per identity (default 100)")
      ->check(CLI::NonNegativeNumber);
  verify->add_option("--seed", verify_seed, "sampler seed (default 0)");
  verify->add_option("--tol", tol_args,
                     "tolerance override name=value (identity-name prefix, repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << std::endl;
    return kExitUsage;
  }
  cfg.dim_explicit = dim_opt->count() > 0;

  try {
    if (*eval) return cmd_eval(cfg, eval_vector);
    if (*geo_connect) return cmd_geodesic_connect(cfg, from, to, samples);
    if (*geo_shoot) return cmd_geodesic_shoot(cfg, from, velocity, delta_s, samples);
    if (*transform) return cmd_transform(cfg, transform_vector);
    if (*verify) return cmd_verify(cfg, verify_samples, verify_seed, tol_args);
    std::cerr << "usage error: no subcommand selected" << std::endl;
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << std::endl;
    return kExitUsage;
  } catch (const fsr::error& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << std::endl;
    return kExitVerifyFail;
  }
}
