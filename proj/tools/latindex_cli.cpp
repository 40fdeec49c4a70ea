#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "latindex/continuum.hpp"
#include "latindex/eig.hpp"
#include "latindex/gauge.hpp"
#include "latindex/interp.hpp"
#include "latindex/latops.hpp"
#include "latindex/overlap.hpp"
#include "latindex/spectral.hpp"

extern "C" void openblas_set_num_threads(int);

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace latindex;

namespace {

const std::set<std::string> kKnownKeys = {
    "pipeline", "kind",      "Q",        "n",          "N",
    "K",        "M",         "mass",     "mass_points", "out_dir",
    "seed",     "zero_tol",  "gap_tol",  "quad",       "lambda0",
    "perturbation", "table", "Q_list",   "m_samples",  "t_samples",
    "staple",   "trials"};

std::map<std::string, std::string> parse_config(const std::string& path,
                                                const std::vector<std::string>& overrides) {
  std::map<std::string, std::string> cfg;
  auto insert = [&cfg](const std::string& line, const std::string& where) {
    const auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') return;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw Error("malformed entry '" + t + "' in " + where);
    const std::string key = trim(t.substr(0, eq));
    if (!kKnownKeys.count(key)) throw Error("unknown config key '" + key + "'");
    cfg[key] = trim(t.substr(eq + 1));
  };
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read config " + path);
    std::string line;
    while (std::getline(in, line)) insert(line, path);
  }
  for (const auto& o : overrides) insert(o, "command line");
  return cfg;
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(std::stoi(item));
  return out;
}

std::vector<FourierMode> parse_perturbation(const std::string& s, int n) {
  // dir:k1:..:kn:amp:phase entries separated by ';'
  std::vector<FourierMode> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (item.empty()) continue;
    std::vector<std::string> parts;
    std::stringstream ps(item);
    std::string f;
    while (std::getline(ps, f, ':')) parts.push_back(f);
    if (static_cast<int>(parts.size()) != n + 3)
      throw Error("perturbation entry needs dir, " + std::to_string(n) +
                  " wave numbers, amplitude, phase");
    FourierMode m;
    m.direction = std::stoi(parts[0]);
    for (int i = 0; i < n; ++i) m.wave[i] = std::stoi(parts[1 + i]);
    m.amplitude = std::stod(parts[n + 1]);
    m.phase = std::stod(parts[n + 2]);
    out.push_back(m);
  }
  return out;
}

struct Resolved {
  std::map<std::string, std::string> raw;

  std::string str(const std::string& k, const std::string& dflt) {
    if (!raw.count(k)) raw[k] = dflt;
    return raw[k];
  }
  int num(const std::string& k, int dflt) {
    return std::stoi(str(k, std::to_string(dflt)));
  }
  double real(const std::string& k, double dflt) {
    std::ostringstream os;
    os << dflt;
    return std::stod(str(k, os.str()));
  }
};

ConnectionDescriptor make_descriptor(Resolved& cfg) {
  ConnectionDescriptor d;
  d.n = cfg.num("n", 2);
  const std::string kind = cfg.str("kind", "trivial");
  if (kind == "trivial") {
    d.kind = ConnectionKind::Trivial;
  } else if (kind == "u1_flux") {
    d.kind = ConnectionKind::U1Flux;
    d.flux = cfg.num("Q", 1);
  } else if (kind == "u1_flux_plus_smooth") {
    d.kind = ConnectionKind::U1FluxPlusSmooth;
    d.flux = cfg.num("Q", 1);
    d.perturbation = parse_perturbation(cfg.str("perturbation", ""), d.n);
  } else if (kind == "external") {
    d.kind = ConnectionKind::External;
    d.table_path = cfg.str("table", "");
  } else {
    throw Error("unknown connection kind '" + kind + "'");
  }
  return d;
}

OperatorFamily wilson_family(const LinkField& lf, const GammaRep& rep) {
  return [&lf, &rep](double m) { return wilson_dirac(lf, rep, m).to_dense(); };
}

int run_pipeline(Resolved& cfg, const fs::path& out_dir, json& summary) {
  const std::string pipeline = cfg.str("pipeline", "");
  ConnectionDescriptor desc = make_descriptor(cfg);
  GammaRep rep = build_gamma_rep(desc.n);
  const double M = cfg.real("M", 1.0);
  int failures = 0;

  if (pipeline == "spectrum") {
    const int N = parse_int_list(cfg.str("N", "8")).at(0);
    LinkField lf = discretize(make_generalized_link(desc), N);
    const double mass = cfg.real("mass", 0.0);
    VectorXd ev = eigvalsh(wilson_dirac(lf, rep, mass).to_dense());
    std::ofstream csv(out_dir / "spectrum.csv");
    csv.precision(17);
    csv << "index,lambda\n";
    for (long i = 0; i < ev.size(); ++i) csv << i << "," << ev(i) << "\n";
    summary["pipeline"] = "spectrum";
    summary["mass"] = mass;
    summary["dim"] = ev.size();
    summary["min_abs_eig"] = ev.cwiseAbs().minCoeff();
  } else if (pipeline == "flow") {
    const int N = parse_int_list(cfg.str("N", "8")).at(0);
    LinkField lf = discretize(make_generalized_link(desc), N);
    MassGrid grid = make_mass_grid(M, cfg.num("mass_points", 17));
    FlowResult fr =
        spectral_flow(wilson_family(lf, rep), grid, cfg.real("lambda0", 0.0));
    write_flow_csv(fr, (out_dir / "flow.csv").string());
    summary = json::parse(flow_summary_json(fr));
    summary["pipeline"] = "flow";
  } else if (pipeline == "index") {
    const int N = parse_int_list(cfg.str("N", "12")).at(0);
    LinkField lf = discretize(make_generalized_link(desc), N);
    EtaResult er = eta_invariant(wilson_dirac(lf, rep, -M).to_dense());
    summary["pipeline"] = "index";
    summary["index"] = -er.eta / 2;
    summary["eta_minus"] = er.eta;
    summary["method"] = "wilson";
  } else if (pipeline == "overlap") {
    const int N = parse_int_list(cfg.str("N", "12")).at(0);
    LinkField lf = discretize(make_generalized_link(desc), N);
    OverlapOperator ov = build_overlap(lf, rep, M);
    summary["pipeline"] = "overlap";
    summary["index"] = overlap_index(ov);
    summary["gw_residual"] = gw_residual(ov);
    summary["min_abs_eig_HW"] = ov.min_abs_eig_HW;
  } else if (pipeline == "verify") {
    const std::vector<int> Qs = parse_int_list(cfg.str("Q_list", "-2,-1,0,1,2"));
    const std::vector<int> Ns = parse_int_list(cfg.str("N", "12,16"));
    const int K = cfg.num("K", 6);
    summary["pipeline"] = "verify";
    summary["cases"] = json::array();
    for (int Q : Qs) {
      ConnectionDescriptor d = desc;
      if (Q == 0) {
        d.kind = ConnectionKind::Trivial;
        d.flux = 0;
      } else {
        d.kind = ConnectionKind::U1Flux;
        d.flux = Q;
      }
      const int ci = continuum_index(d, rep, K, cfg.real("zero_tol", 1e-6));
      for (int N : Ns) {
        LinkField lf = discretize(make_generalized_link(d), N);
        const int wi = wilson_index(lf, rep, M);
        const int oi = overlap_index(build_overlap(lf, rep, M));
        FlowResult fr = spectral_flow(wilson_family(lf, rep),
                                      make_mass_grid(M, cfg.num("mass_points", 9)));
        const bool ok = wi == Q && oi == Q && fr.sf == Q && ci == Q;
        if (!ok) ++failures;
        summary["cases"].push_back({{"Q", Q},
                                    {"N", N},
                                    {"wilson", wi},
                                    {"overlap", oi},
                                    {"sf", fr.sf},
                                    {"continuum", ci},
                                    {"pass", ok}});
      }
    }
    summary["failures"] = failures;
  } else if (pipeline == "interp") {
    const std::vector<int> Ns = parse_int_list(cfg.str("N", "4,8,16"));
    const int K = cfg.num("K", 2 * Ns.back());
    GeneralizedLink gl = make_generalized_link(desc);
    ContinuumSpace cs = make_continuum_space(desc, rep, K);
    summary["pipeline"] = "interp";
    summary["partition_residual"] =
        partition_residual(Ns.back(), desc.n, 1000, cfg.num("seed", 7));
    summary["vertex_identity"] = vertex_overlap_identity(Ns.back(), desc.n);
    FBoundsReport fb = check_f_bounds(gl, rep, cs, Ns, cfg.num("trials", 10),
                                      cfg.num("seed", 7));
    summary["op_norms"] = fb.op_norms;
    summary["residual_slope"] = fb.residual_slope;
    summary["recon_monotone"] = fb.recon_monotone;
    DiracConvergenceReport dc =
        check_dirac_convergence(gl, rep, cs, Ns, 5, cfg.num("seed", 7));
    summary["dirac_errors"] = dc.errors;
    summary["dirac_order"] = dc.fitted_order;
    if (fb.residual_slope < 0.8 || !fb.recon_monotone || dc.fitted_order < 0.8)
      ++failures;
    if (cfg.num("staple", 0)) {
      const int N = Ns.back();
      InterpMaps maps = build_maps(gl, rep, cs, N, cfg.num("quad", 0));
      LinkField lf = discretize(gl, N);
      GapReport gr =
          staple_gap_scan(maps, rep, lf, M, cfg.num("m_samples", 5),
                          cfg.num("t_samples", 3), cfg.real("gap_tol", 0.05));
      summary["staple_min_gap"] = gr.min_gap;
      std::ofstream csv(out_dir / "staple.csv");
      csv.precision(17);
      csv << "m,t,min_abs_eig\n";
      for (const auto& s : gr.samples)
        csv << s.m << "," << s.t << "," << s.gap << "\n";
    }
    summary["failures"] = failures;
  } else {
    throw Error("unknown pipeline '" + pipeline + "'");
  }
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wilson Dirac spectral-flow laboratory"};
  std::string config_path;
  std::vector<std::string> overrides;
  app.add_option("-c,--config", config_path, "flat key=value config file");
  app.add_option("set", overrides, "key=value overrides");
  CLI11_PARSE(app, argc, argv);

  if (const char* env = std::getenv("LATINDEX_THREADS"))
    openblas_set_num_threads(std::max(1, std::atoi(env)));

  const auto t0 = std::chrono::steady_clock::now();
  try {
    Resolved cfg{parse_config(config_path, overrides)};
    const std::string pipeline = cfg.str("pipeline", "");
    const std::set<std::string> pipelines = {"spectrum", "flow",   "index",
                                             "overlap",  "verify", "interp"};
    if (!pipelines.count(pipeline))
      throw Error("unknown pipeline '" + pipeline + "'");
    const fs::path out_dir = cfg.str("out_dir", "out");
    fs::create_directories(out_dir);

    json summary;
    int status = 0;
    try {
      status = run_pipeline(cfg, out_dir, summary);
    } catch (const Error& e) {
      summary["error"] = e.what();
      status = 1;
    }

    json manifest;
    manifest["schema_version"] = 1;
    manifest["config"] = json::object();
    for (const auto& [k, v] : cfg.raw) manifest["config"][k] = v;
    manifest["versions"] = {
        {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                      std::to_string(EIGEN_MAJOR_VERSION) + "." +
                      std::to_string(EIGEN_MINOR_VERSION)}};
    manifest["wall_time_s"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    std::ofstream(out_dir / "manifest.json") << manifest.dump(2) << "\n";
    std::ofstream(out_dir / "summary.json") << summary.dump(2) << "\n";
    if (status != 0)
      std::cerr << "check failed: " << summary.dump() << "\n";
    else
      std::cout << summary.dump(2) << "\n";
    return status;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
}
