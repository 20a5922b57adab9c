#include "halfspec/runners.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <memory>
#include <numbers>

#include "halfspec/diagnostics.hpp"
#include "halfspec/exact_s1.hpp"

namespace halfspec {

StageError::StageError(std::string stage, const std::string& message)
    : std::runtime_error("stage '" + stage + "' failed: " + message), stage_(std::move(stage)) {}

namespace {

template <class Fn>
auto stage(const std::string& name, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

void prepare(const Scenario& sc) {
  stage("config", [&] { sc.validate(); });
  stage("output", [&] {
    std::filesystem::create_directories(sc.output_dir);
    const auto probe = std::filesystem::path(sc.output_dir) / ".write-probe";
    std::ofstream os(probe);
    if (!os) throw std::runtime_error("output directory " + sc.output_dir + " is not writable");
    os.close();
    std::filesystem::remove(probe);
  });
}

void emit(RunReport& report, const Scenario& sc, const std::string& stem, const Table& table) {
  stage("write", [&] {
    const auto path = write_table(sc.output_dir, stem, table, sc.format);
    report.files.push_back(path.filename().string());
  });
}

// No timestamps or host data: reruns must produce identical bytes.
void write_manifest(RunReport& report, const Scenario& sc, const std::string& command) {
  const nlohmann::json config = sc.to_json();
  nlohmann::json m;
  m["command"] = command;
  m["version"] = HALFSPEC_VERSION;
  m["config"] = config;
  m["config_hash"] = fnv1a_hex(config.dump());
  m["seed"] = sc.seed;
  m["tolerances"] = {{"scheme", to_string(sc.scheme.scheme)},
                     {"dt", sc.scheme.dt},
                     {"krylov_tol", sc.scheme.tol},
                     {"krylov_dim", sc.scheme.krylov_dim},
                     {"particle_dt", sc.particle_dt}};
  m["outputs"] = report.files;
  m["summary"] = report.summary;
  stage("write", [&] {
    write_json_file(std::filesystem::path(sc.output_dir) / "manifest.json", m);
  });
  report.files.push_back("manifest.json");
}

void require_s1(const Scenario& sc) {
  if (sc.dim != 1 || sc.field.preset != "s1_benchmark" || sc.initial.preset != "uniform")
    throw StageError("config", "the circle benchmark needs dim 1, the s1_benchmark field and a "
                               "uniform initial density");
}

double max_abs_delta(const std::vector<double>& v) {
  double d = 0.0;
  for (double x : v) d = std::max(d, std::abs(x - v.front()));
  return d;
}

// L1 distance of rho_N from the exact circle density on a fine grid.
double s1_l1_error(const GridField& rho_fine, double t) {
  double sum = 0.0;
  for (std::size_t j = 0; j < rho_fine.node_count(); ++j) {
    const double x = rho_fine.node(j)[0];
    sum += std::abs(rho_fine.samples[static_cast<Eigen::Index>(j)].real() - exact_s1_density(x, t));
  }
  return sum * rho_fine.cell_volume();
}

struct ConvergenceRow {
  int k;
  double alg2, standard;
};

std::vector<ConvergenceRow> s1_convergence(const Scenario& sc) {
  const VectorFieldSpec vf = s1_benchmark_field();
  const std::vector<int> fine{sc.error_grid};
  std::vector<ConvergenceRow> rows;
  for (int k : sc.convergence_modes) {
    const TruncationSpec trunc = sc.truncation(k);
    const GridField rho0 = sc.initial_density(evaluation_grid(trunc));
    const SpectralField psi = stage("alg2", [&] {
      return solve_half_density(half_density_from_density(rho0, trunc), vf, sc.convergence_time,
                                sc.scheme);
    });
    GridField rho_fine = synthesize(psi, fine);
    for (auto& v : rho_fine.samples) v = v * v;
    const SpectralField r = stage("standard", [&] {
      const SpectralField r0 = analyze(rho0, trunc);
      const auto gen = assemble_density_generator(vf, trunc);
      return SpectralField(trunc, evolve_state(gen, r0.coeffs, sc.convergence_time, sc.scheme));
    });
    rows.push_back({k, s1_l1_error(rho_fine, sc.convergence_time),
                    s1_l1_error(synthesize(r, fine), sc.convergence_time)});
  }
  return rows;
}

void report_convergence(RunReport& report, const Scenario& sc,
                        const std::vector<ConvergenceRow>& rows) {
  Table table{{"K", "N", "l1_error_alg2", "l1_error_standard"}, {}};
  std::vector<std::pair<double, double>> a, s;
  for (const auto& r : rows) {
    const double n = 2.0 * r.k + 1.0;
    table.add_row({double(r.k), n, r.alg2, r.standard});
    a.emplace_back(n, r.alg2);
    s.emplace_back(n, r.standard);
  }
  emit(report, sc, "convergence", table);
  nlohmann::json c;
  c["time"] = sc.convergence_time;
  c["modes"] = sc.convergence_modes;
  c["error_alg2"] = nlohmann::json::array();
  c["error_standard"] = nlohmann::json::array();
  for (const auto& r : rows) {
    c["error_alg2"].push_back(r.alg2);
    c["error_standard"].push_back(r.standard);
  }
  if (rows.size() >= 3) {
    c["slope_alg2"] = fit_convergence(a);
    c["slope_standard"] = fit_convergence(s);
  }
  report.summary["convergence"] = c;
}

GridField squared(GridField g) {
  for (auto& v : g.samples) v = v * v;
  return g;
}

}  // namespace

double generator_mismatch(const VectorFieldSpec& vf, const TruncationSpec& trunc) {
  const auto x = assemble_half_density_generator(vf, trunc).to_sparse();
  const auto g = assemble_density_generator(vf, trunc).to_sparse();
  const SparseCMatrix sum = x + g;
  double worst = 0.0;
  for (int k = 0; k < sum.outerSize(); ++k)
    for (SparseCMatrix::InnerIterator it(sum, k); it; ++it)
      worst = std::max(worst, std::abs(it.value()));
  return worst;
}

std::vector<double> last_axis_marginal(const GridField& rho) {
  const int mz = rho.sizes.back();
  std::vector<double> m(static_cast<std::size_t>(mz), 0.0);
  for (std::size_t j = 0; j < rho.node_count(); ++j)
    m[j % static_cast<std::size_t>(mz)] += rho.samples[static_cast<Eigen::Index>(j)].real();
  const double hz = rho.periods.back() / mz;
  double total = 0.0;
  for (double v : m) total += v * hz;
  if (total != 0.0)
    for (double& v : m) v /= total;
  return m;
}

RunReport run_benchmark_s1(const Scenario& sc) {
  prepare(sc);
  require_s1(sc);
  RunReport report;
  const VectorFieldSpec vf = s1_benchmark_field();
  const TruncationSpec trunc = sc.truncation();
  const auto grid = evaluation_grid(trunc);
  const GridField rho0 = sc.initial_density(grid);
  const auto times = sc.snapshot_times();

  const auto xgen = stage("assemble", [&] { return assemble_half_density_generator(vf, trunc); });
  const auto ggen = stage("assemble", [&] { return assemble_density_generator(vf, trunc); });
  const auto tgen = stage("assemble", [&] { return assemble_transport_generator(vf, trunc); });
  const SpectralField psi0 = stage("alg2", [&] { return half_density_from_density(rho0, trunc); });
  const SpectralField r0 = analyze(rho0, trunc);
  const SpectralField f0 = project_function(
      [](std::span<const double> x) { return Complex(std::sin(x[0]), 0.0); }, trunc);
  const SpectralField g0 = project_function(
      [](std::span<const double> x) { return Complex(std::cos(x[0]), 0.0); }, trunc);
  const auto h0 = assemble_multiplication_operator(f0, trunc);
  const SpectralField f1 = retruncate(f0, TruncationSpec({1}, sc.periods));
  const SpectralField g1 = retruncate(g0, TruncationSpec({1}, sc.periods));

  StateEvolver alg2(xgen, sc.scheme);
  StateEvolver standard(ggen, sc.scheme);
  StateEvolver transport(tgen, sc.scheme);

  Table densities{{"t", "x", "exact", "alg2", "standard"}, {}};
  Table conservation{{"t", "nuclear_mass_alg2", "l1_alg2", "l1_standard", "l1_drift_standard",
                      "negativity_alg2", "negativity_standard"},
                     {}};
  Table observables{{"t", "discrepancy_alg3", "discrepancy_standard", "opnorm_alg3",
                     "supnorm_standard", "pairing_re", "pairing_im"},
                    {}};
  std::vector<double> mass, neg_alg2;
  double l1_std0 = 0.0, max_drift = 0.0, final_neg_std = 0.0;
  Complex pair0;
  double max_pair_drift = 0.0;
  SpectralField psi_final;

  for (double t : times) {
    const SpectralField psi =
        stage("alg2", [&] { return SpectralField(trunc, alg2.advance(psi0.coeffs, t)); });
    const GridField rho = squared(synthesize(psi, grid));
    const SpectralField r =
        stage("standard", [&] { return SpectralField(trunc, standard.advance(r0.coeffs, t)); });
    const GridField rho_std = synthesize(r, grid);
    for (std::size_t j = 0; j < rho.node_count(); ++j) {
      const double x = rho.node(j)[0];
      const auto e = static_cast<Eigen::Index>(j);
      densities.add_row({t, x, exact_s1_density(x, t), rho.samples[e].real(),
                         rho_std.samples[e].real()});
    }
    const double l1s = l1_norm_grid(rho_std);
    if (t == 0.0) l1_std0 = l1s;
    const double drift = l1s - l1_std0;
    max_drift = std::max(max_drift, std::abs(drift));
    mass.push_back(nuclear_mass(psi));
    neg_alg2.push_back(negativity(rho));
    final_neg_std = negativity(rho_std);
    conservation.add_row({t, mass.back(), l1_norm_grid(rho), l1s, drift, neg_alg2.back(),
                          final_neg_std});

    if (sc.uses("alg3")) {
      stage("alg3", [&] {
        const auto u = propagator_for(xgen, t, sc.scheme);
        const ObservableMatrix ht = conjugate_observable(u, h0);
        const double d3 = product_discrepancy(f1, g1, vf, t, trunc, sc.scheme,
                                              ProductMethod::HalfDensity);
        const double ds = product_discrepancy(f1, g1, vf, t, trunc, sc.scheme,
                                              ProductMethod::Standard);
        const GridField ft =
            synthesize(SpectralField(trunc, transport.advance(f0.coeffs, t)), grid);
        const Complex p = pairing(ht, psi);
        if (t == 0.0) pair0 = p;
        max_pair_drift = std::max(max_pair_drift, std::abs(p - pair0));
        observables.add_row({t, d3, ds, operator_norm(ht), ft.samples.cwiseAbs().maxCoeff(),
                             p.real(), p.imag()});
      });
    }
    psi_final = psi;
  }

  emit(report, sc, "densities", densities);
  emit(report, sc, "conservation", conservation);
  auto& s = report.summary;
  s["modes"] = sc.modes;
  s["t_final"] = sc.t_final;
  s["nuclear_mass_initial"] = mass.front();
  s["nuclear_mass_max_relative_change"] = max_abs_delta(mass) / mass.front();
  s["l1_standard_max_drift"] = max_drift;
  s["negativity_alg2_max"] = *std::max_element(neg_alg2.begin(), neg_alg2.end());
  s["negativity_standard_final"] = final_neg_std;
  for (double x : {0.0, 0.5 * std::numbers::pi}) {
    const double xs[1] = {x};
    const Complex v = evaluate(psi_final, xs);
    s[x == 0.0 ? "alg2_final_at_0" : "alg2_final_at_half_pi"] = (v * v).real();
  }
  if (sc.uses("alg3")) {
    emit(report, sc, "observables", observables);
    s["pairing_max_drift"] = max_pair_drift;
  }

  report_convergence(report, sc, s1_convergence(sc));
  write_manifest(report, sc, "bench-s1");
  return report;
}

RunReport run_convergence(const Scenario& sc) {
  prepare(sc);
  require_s1(sc);
  RunReport report;
  report_convergence(report, sc, s1_convergence(sc));
  write_manifest(report, sc, "convergence");
  return report;
}

RunReport run_abc(const Scenario& sc) {
  prepare(sc);
  if (sc.dim != 3 || sc.field.preset != "abc_modified")
    throw StageError("config", "abc runs need dim 3 and the abc_modified field");
  RunReport report;
  const VectorFieldSpec vf = stage("config", [&] { return sc.build_field(); });
  const TruncationSpec trunc = sc.truncation();
  auto& s = report.summary;
  s["modes"] = sc.modes;

  if (sc.field.abc.d == 0.0) {
    const double mismatch = stage("generator-check", [&] { return generator_mismatch(vf, trunc); });
    s["generator_mismatch"] = mismatch;
    if (!(mismatch <= 1e-12))
      throw StageError("generator-check",
                       "half-density and density generators differ by " + format_double(mismatch) +
                           " at D = 0");
  }

  const auto grid = evaluation_grid(trunc);
  const GridField rho0 = stage("initial", [&] { return sc.initial_density(grid); });
  const auto xgen = stage("assemble", [&] { return assemble_half_density_generator(vf, trunc); });
  const SpectralField psi0 = stage("alg2", [&] { return half_density_from_density(rho0, trunc); });
  StateEvolver alg2(xgen, sc.scheme);
  const auto times = sc.snapshot_times();

  const bool particles = sc.uses("particles");
  ParticleEnsemble ens;
  FieldEvaluator field = evaluator_for(vf);
  if (particles) {
    if (sc.initial.preset != "wrapped_gaussian")
      throw StageError("particles", "particle sampling needs a wrapped_gaussian initial condition");
    ens = sample_wrapped_gaussian(sc.initial.mean, sc.initial.sigma, sc.particle_count, sc.seed,
                                  sc.periods);
  }

  Table marginals{{"t", "z", "alg2", "particles"}, {}};
  Table series{{"t", "nuclear_mass", "l1", "negativity", "marginal_l1_distance"}, {}};
  std::vector<double> mass;
  double neg_max = 0.0, dist_final = 0.0;
  CVector z = psi0.coeffs;
  double t_prev = 0.0;
  const int mz = grid.back();
  const double hz = sc.periods.back() / mz;

  for (double t : times) {
    z = stage("alg2", [&] { return alg2.advance(z, t - t_prev); });
    const SpectralField psi(trunc, z);
    const GridField rho = squared(synthesize(psi, grid));
    const auto m_alg2 = last_axis_marginal(rho);
    std::vector<double> m_part(m_alg2.size(), 0.0);
    double dist = 0.0;
    if (particles) {
      ens = stage("particles",
                  [&] { return advect_particles(ens, field, t - t_prev, sc.particle_dt); });
      const GridField h = histogram_marginal(ens, {2}, mz);
      for (int j = 0; j < mz; ++j) {
        m_part[j] = h.samples[j].real();
        dist += std::abs(m_part[j] - m_alg2[j]) * hz;
      }
    }
    for (int j = 0; j < mz; ++j) marginals.add_row({t, j * hz, m_alg2[j], m_part[j]});
    mass.push_back(nuclear_mass(psi));
    const double neg = negativity(rho);
    neg_max = std::max(neg_max, neg);
    dist_final = dist;
    series.add_row({t, mass.back(), l1_norm_grid(rho), neg, dist});
    t_prev = t;
  }

  emit(report, sc, "marginals", marginals);
  emit(report, sc, "timeseries", series);
  s["nuclear_mass_initial"] = mass.front();
  s["nuclear_mass_max_relative_change"] = max_abs_delta(mass) / mass.front();
  s["negativity_max"] = neg_max;
  if (particles) s["marginal_l1_distance_final"] = dist_final;
  write_manifest(report, sc, "abc");
  return report;
}

RunReport run_solve(const Scenario& sc) {
  prepare(sc);
  RunReport report;
  const VectorFieldSpec vf = stage("config", [&] { return sc.build_field(); });
  const TruncationSpec trunc = sc.truncation();
  const auto grid = evaluation_grid(trunc);
  const GridField rho0 = stage("initial", [&] { return sc.initial_density(grid); });
  const auto times = sc.snapshot_times();
  const bool want_std = sc.uses("standard");

  const auto xgen = stage("assemble", [&] { return assemble_half_density_generator(vf, trunc); });
  const SpectralField psi0 = stage("alg2", [&] { return half_density_from_density(rho0, trunc); });
  StateEvolver alg2(xgen, sc.scheme);
  std::unique_ptr<SparseBandedOperator> ggen;
  std::unique_ptr<StateEvolver> standard;
  SpectralField r0;
  if (want_std) {
    ggen = std::make_unique<SparseBandedOperator>(
        stage("assemble", [&] { return assemble_density_generator(vf, trunc); }));
    standard = std::make_unique<StateEvolver>(*ggen, sc.scheme);
    r0 = analyze(rho0, trunc);
  }

  Table series{{"t", "nuclear_mass_alg2", "l1_alg2", "negativity_alg2", "l1_standard",
                "negativity_standard"},
               {}};
  GridField rho_final, std_final;
  std::vector<double> mass;
  for (double t : times) {
    const SpectralField psi =
        stage("alg2", [&] { return SpectralField(trunc, alg2.advance(psi0.coeffs, t)); });
    rho_final = squared(synthesize(psi, grid));
    double l1s = 0.0, negs = 0.0;
    if (want_std) {
      std_final = synthesize(
          stage("standard", [&] { return SpectralField(trunc, standard->advance(r0.coeffs, t)); }),
          grid);
      l1s = l1_norm_grid(std_final);
      negs = negativity(std_final);
    }
    mass.push_back(nuclear_mass(psi));
    series.add_row({t, mass.back(), l1_norm_grid(rho_final), negativity(rho_final), l1s, negs});
  }
  emit(report, sc, "timeseries", series);

  Table final{{}, {}};
  for (int i = 0; i < sc.dim; ++i) final.columns.push_back("x" + std::to_string(i + 1));
  final.columns.push_back("alg2");
  if (want_std) final.columns.push_back("standard");
  for (std::size_t j = 0; j < rho_final.node_count(); ++j) {
    std::vector<double> row = rho_final.node(j);
    row.push_back(rho_final.samples[static_cast<Eigen::Index>(j)].real());
    if (want_std) row.push_back(std_final.samples[static_cast<Eigen::Index>(j)].real());
    final.add_row(std::move(row));
  }
  emit(report, sc, "final_density", final);
  report.summary["nuclear_mass_initial"] = mass.front();
  report.summary["nuclear_mass_max_relative_change"] = max_abs_delta(mass) / mass.front();
  write_manifest(report, sc, "solve");
  return report;
}

}  // namespace halfspec
