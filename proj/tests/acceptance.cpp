// Integration gate: every quantitative guarantee the library makes, checked
// end to end at fixed tolerances.  One line per criterion; exit code is the
// number of failed criteria.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "cirw/bounds.hpp"
#include "cirw/curvature.hpp"
#include "cirw/cutoff.hpp"
#include "cirw/group.hpp"
#include "cirw/heat_kernel.hpp"
#include "cirw/kernels.hpp"
#include "cirw/numeric.hpp"
#include "cirw/pmf.hpp"
#include "cirw/rate_measure.hpp"
#include "cirw/trajectory.hpp"

using namespace cirw;

namespace {

std::vector<std::string> g_details;

void detail(const std::string& line) { g_details.push_back(line); }

bool require(bool ok, const std::string& message) {
  if (!ok) detail(message);
  return ok;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

RateMeasure transposition_walk(int n) {
  std::vector<std::pair<Element, double>> gens;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      Element perm(static_cast<std::size_t>(n));
      for (int k = 0; k < n; ++k) perm[static_cast<std::size_t>(k)] = k;
      std::swap(perm[static_cast<std::size_t>(i)],
                perm[static_cast<std::size_t>(j)]);
      gens.emplace_back(std::move(perm), 2.0 / (n * (n - 1)));
    }
  }
  return RateMeasure::from_generators(GroupSpec::symmetric(n), gens);
}

RateMeasure cube_walk(int d) {
  std::vector<std::pair<Element, double>> gens;
  for (int k = 0; k < d; ++k) {
    Element e(static_cast<std::size_t>(d), 0);
    e[static_cast<std::size_t>(k)] = 1;
    gens.emplace_back(std::move(e), 1.0 / d);
  }
  return RateMeasure::from_generators(GroupSpec::hypercube(d), gens);
}

RateMeasure cycle_walk(int m) {
  return RateMeasure::from_generators(GroupSpec::lattice({m}), {{{1}, 0.5}});
}

RateMeasure line_walk() {
  return RateMeasure::from_generators(GroupSpec::lattice({0}), {{{1}, 0.5}});
}

RateMeasure plane_walk() {
  return RateMeasure::from_generators(GroupSpec::lattice({0, 0}),
                                      {{{1, 0}, 0.25}, {{0, 1}, 0.25}});
}

/// Positive rates constant on a random non-empty set of non-identity
/// conjugacy classes.  Classes are closed under inversion in every group
/// handled here, so the result is a valid symmetric measure.
RateMeasure random_class_measure(const GroupSpec& g, std::mt19937_64& rng) {
  const auto classes = conjugacy_classes(g);
  const Element id = g.identity();
  std::uniform_real_distribution<double> rate(0.1, 1.0);
  std::bernoulli_distribution keep(0.6);
  std::vector<std::pair<Element, double>> entries;
  while (entries.empty()) {
    for (const auto& cls : classes) {
      if (cls.size() == 1 && cls[0] == id) continue;
      if (!keep(rng)) continue;
      const double r = rate(rng);
      for (const Element& z : cls) entries.emplace_back(z, r);
    }
  }
  return RateMeasure(g, std::move(entries));
}

TestFunction random_function(const GroupIndex& index, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> value(-1.0, 1.0);
  std::vector<std::pair<Element, double>> values;
  values.reserve(index.size());
  for (const Element& x : index.elements) values.emplace_back(x, value(rng));
  return TestFunction::from_values(std::move(values));
}

// --- criterion 1: the long-time varentropy of the simple walk on the
// integers approaches the Gaussian value 1/2 -------------------------------

bool gaussian_limit_varentropy() {
  const auto g = GroupSpec::lattice({0});
  const Pmf f = heat_kernel(g, line_walk(), 1000.0);
  const double varent = info_stats(f).varentropy;
  return require(varent >= 0.45 && varent <= 0.55,
                 "varentropy at t=1000 is " + num(varent) +
                     ", outside [0.45, 0.55]");
}

// --- criterion 2: the full varentropy bound chain holds on four walks over
// a 12-point log grid -------------------------------------------------------

bool varentropy_bound_chain() {
  struct Instance {
    const char* name;
    GroupSpec group;
    RateMeasure walk;
  };
  const std::vector<Instance> instances = {
      {"symmetric(4)", GroupSpec::symmetric(4), transposition_walk(4)},
      {"hypercube(6)", GroupSpec::hypercube(6), cube_walk(6)},
      {"lattice(12)", GroupSpec::lattice({12}), cycle_walk(12)},
      {"lattice(0,0)", GroupSpec::lattice({0, 0}), plane_walk()},
  };
  const std::vector<double> grid = log_spaced(0.05, 50.0, 12);
  const double slack = 1e-9;

  bool ok = true;
  for (const Instance& inst : instances) {
    const std::vector<BoundRow> rows =
        theorem_report(inst.group, inst.walk, grid, 1e-12, slack);
    for (const BoundRow& r : rows) {
      const std::string where =
          std::string(inst.name) + " t=" + num(r.t) + ": ";
      ok &= require(r.varentropy <= r.two_t_gamma_log + slack,
                    where + "varentropy " + num(r.varentropy) +
                        " > gradient term " + num(r.two_t_gamma_log));
      ok &= require(r.two_t_gamma_log <= r.sum_u + slack,
                    where + "gradient term " + num(r.two_t_gamma_log) +
                        " > envelope sum " + num(r.sum_u));
      ok &= require(r.varentropy <= r.c43_bound + slack,
                    where + "varentropy " + num(r.varentropy) +
                        " > 43-weighted envelope " + num(r.c43_bound));
      ok &= require(r.varentropy <= r.cd_bound + slack,
                    where + "varentropy " + num(r.varentropy) +
                        " > dimension bound " + num(r.cd_bound));
      ok &= require(r.chain_ok, where + "chain flag is false");
    }
  }
  return ok;
}

// --- criterion 3: curvature is never negative on class-constant measures,
// and matches 2 mu_min where equality is expected ---------------------------

bool curvature_sign_and_equality() {
  std::vector<GroupSpec> pool = {GroupSpec::symmetric(3),
                                 GroupSpec::symmetric(4),
                                 GroupSpec::dihedral(4),
                                 GroupSpec::dihedral(5),
                                 GroupSpec::dihedral(6)};
  for (int d = 3; d <= 8; ++d) pool.push_back(GroupSpec::hypercube(d));

  std::mt19937_64 rng(20240811);
  bool ok = true;
  for (int trial = 0; trial < 50; ++trial) {
    const GroupSpec& g = pool[static_cast<std::size_t>(trial) % pool.size()];
    const RateMeasure mu = random_class_measure(g, rng);
    const CurvatureReport rep = bakry_emery_curvature(g, mu);
    ok &= require(rep.kappa_best >= -1e-10,
                  "trial " + std::to_string(trial) + ": kappa_best " +
                      num(rep.kappa_best) + " < -1e-10");
  }

  for (int d : {2, 4, 6, 8}) {
    const auto g = GroupSpec::hypercube(d);
    const RateMeasure mu = cube_walk(d);
    const CurvatureReport rep = bakry_emery_curvature(g, mu);
    ok &= require(std::abs(rep.kappa_best - 2.0 * rep.mu_min) <= 1e-8,
                  "hypercube(" + std::to_string(d) + "): kappa_best " +
                      num(rep.kappa_best) + " != 2 mu_min " +
                      num(2.0 * rep.mu_min));
  }
  const CurvatureReport s4 =
      bakry_emery_curvature(GroupSpec::symmetric(4), transposition_walk(4));
  ok &= require(std::abs(s4.kappa_best - 1.0 / 3.0) <= 1e-8,
                "symmetric(4) transpositions: kappa_best " +
                    num(s4.kappa_best) + " != 1/3");
  return ok;
}

// --- criterion 4: the closed form of the iterated quadratic form agrees
// with the definition on random instances -----------------------------------

bool iterated_form_identity() {
  const std::vector<GroupSpec> pool = {
      GroupSpec::symmetric(3),  GroupSpec::symmetric(4),
      GroupSpec::dihedral(4),   GroupSpec::dihedral(5),
      GroupSpec::dihedral(6),   GroupSpec::hypercube(3),
      GroupSpec::hypercube(4),  GroupSpec::hypercube(5),
      GroupSpec::hypercube(6)};
  std::mt19937_64 rng(987654321);
  bool ok = true;
  for (int trial = 0; trial < 1000; ++trial) {
    const GroupSpec& g = pool[static_cast<std::size_t>(trial) % pool.size()];
    const RateMeasure mu = random_class_measure(g, rng);
    const GroupIndex index = enumerate_group(g);
    const TestFunction f = random_function(index, rng);
    const double definitional = gamma2_definitional(g, mu, f, g.identity());
    const double closed = gamma2_closed_form(g, mu, f);
    const double scale =
        std::max({std::abs(definitional), std::abs(closed), 1e-12});
    const double rel = std::abs(definitional - closed) / scale;
    ok &= require(rel <= 1e-9, "trial " + std::to_string(trial) +
                                   ": relative gap " + num(rel) +
                                   " (definitional " + num(definitional) +
                                   ", closed " + num(closed) + ")");
    if (!ok) break;
  }
  return ok;
}

// --- criterion 5: the trajectory lemmas hold exhaustively / to 1e-10 -------

bool trajectory_lemma_suite() {
  bool ok = true;

  // Insertion map, exhaustively over words: a two-class measure on
  // symmetric(3) up to length 3, and the simple lattice walk up to length 6.
  const auto s3 = GroupSpec::symmetric(3);
  const RateMeasure s3_mixed(
      s3, {{{0, 2, 1}, 0.2},   // transpositions
           {{1, 0, 2}, 0.2},
           {{2, 1, 0}, 0.2},
           {{1, 2, 0}, 0.2},   // 3-cycles
           {{2, 0, 1}, 0.2}});
  for (std::size_t n = 0; n <= 3; ++n) {
    for (const Element& z : s3_mixed.support()) {
      const InsertionReport rep = verify_insertion(s3, s3_mixed, n, z);
      ok &= require(rep.ok(), "insertion on symmetric(3), n=" +
                                  std::to_string(n) + ", z=" + s3.to_string(z) +
                                  ": " + rep.first_counterexample);
    }
  }
  const auto z_line = GroupSpec::lattice({0});
  const RateMeasure z_mu = line_walk();
  for (std::size_t n = 0; n <= 6; ++n) {
    for (const Element& z : z_mu.support()) {
      const InsertionReport rep = verify_insertion(z_line, z_mu, n, z);
      ok &= require(rep.ok(), "insertion on lattice(0), n=" +
                                  std::to_string(n) + ", z=" + z_line.to_string(z) +
                                  ": " + rep.first_counterexample);
    }
  }

  // Match-count law of the running walk vs the thinned Poisson law.
  struct CountInstance {
    const char* name;
    GroupSpec group;
    RateMeasure walk;
  };
  const std::vector<CountInstance> count_instances = {
      {"symmetric(3)", s3, transposition_walk(3)},
      {"symmetric(4)", GroupSpec::symmetric(4), transposition_walk(4)},
      {"lattice(6)", GroupSpec::lattice({6}), cycle_walk(6)},
      {"hypercube(4)", GroupSpec::hypercube(4), cube_walk(4)},
  };
  for (const CountInstance& inst : count_instances) {
    for (double t : {0.5, 2.0}) {
      for (const auto& gen : inst.walk.generators()) {
        const CountLawReport rep =
            verify_poisson_count_law(inst.group, inst.walk, t, gen.first);
        ok &= require(rep.pass && rep.max_deviation <= 1e-10,
                      std::string(inst.name) + " t=" + num(t) +
                          " z=" + inst.group.to_string(gen.first) +
                          ": count-law deviation " + num(rep.max_deviation));
      }
    }
  }

  // Size-bias identity at every point of two small groups.
  const std::vector<CountInstance> cm_instances = {
      {"symmetric(3)", s3, transposition_walk(3)},
      {"lattice(6)", GroupSpec::lattice({6}), cycle_walk(6)},
  };
  for (const CountInstance& inst : cm_instances) {
    const GroupIndex index = enumerate_group(inst.group);
    for (double t : {0.5, 1.5, 3.0}) {
      for (const Element& x : index.elements) {
        for (const Element& z : inst.walk.support()) {
          const ChangeOfMeasureReport rep =
              verify_change_of_measure(inst.group, inst.walk, t, x, z);
          ok &= require(rep.pass && rep.gap <= 1e-10,
                        std::string(inst.name) + " t=" + num(t) + " x=" +
                            inst.group.to_string(x) + " z=" +
                            inst.group.to_string(z) + ": gap " + num(rep.gap));
        }
      }
    }
  }
  return ok;
}

// --- criterion 6: the explicit envelope inequalities on a wide log grid ----

bool envelope_inequalities() {
  const std::vector<double> grid = log_spaced(1e-3, 1e3, 200);
  const EnvelopeBoundsReport rep = verify_envelope_bounds(grid);
  bool ok = require(rep.pass, "envelope report flag is false");
  ok &= require(rep.max_value <= 8.0 + 1e-9,
                "sup of gradient profile " + num(rep.max_value) + " > 8");
  ok &= require(rep.max_ratio_envelope <= 1.0 + 1e-9,
                "gradient / 21.5 varentropy envelope peaks at " +
                    num(rep.max_ratio_envelope));
  ok &= require(rep.max_ratio_cap <= 1.0 + 1e-9,
                "gradient / (2 + 2/t) peaks at " + num(rep.max_ratio_cap));
  ok &= require(rep.max_ratio_small_t <= 1.0 + 1e-9,
                "gradient / 2t log^2(1 + 1/t) peaks at " +
                    num(rep.max_ratio_small_t));
  return ok;
}

// --- criterion 7: sharpness of the envelope on the simple lattice walk -----

bool sharpness_diagnostics() {
  bool ok = true;

  const std::vector<double> probe{1e-4};
  const SharpnessReport small = sharpness_study(probe);
  const double ratio = small.rows.at(0).small_t_ratio;
  ok &= require(ratio >= 0.9 && ratio <= 1.1,
                "small-t ratio varentropy / (t log^2(1/t)) at t=1e-4 is " +
                    num(ratio) + ", outside [0.9, 1.1]");

  const std::vector<double> grid = log_spaced(0.01, 100.0, 25);
  const SharpnessReport wide = sharpness_study(grid);
  const double frozen = 0.55315511082103597;
  ok &= require(wide.min_ratio_envelope > 0.0,
                "envelope ratio minimum is not positive");
  ok &= require(std::abs(wide.min_ratio_envelope - frozen) <= 0.02 * frozen,
                "envelope ratio minimum " + num(wide.min_ratio_envelope) +
                    " drifted more than 2% from " + num(frozen));
  return ok;
}

// --- criterion 8: local Poincare and gradient sub-commutation on random
// functions ------------------------------------------------------------------

bool poincare_and_subcommutation() {
  struct Instance {
    GroupSpec group;
    RateMeasure walk;
  };
  const std::vector<Instance> instances = {
      {GroupSpec::symmetric(4), transposition_walk(4)},
      {GroupSpec::hypercube(6), cube_walk(6)},
  };
  std::mt19937_64 rng(55555);
  bool ok = true;
  int violations = 0;
  for (const Instance& inst : instances) {
    const GroupIndex index = enumerate_group(inst.group);
    const double kappa =
        bakry_emery_curvature(inst.group, inst.walk).kappa_best;
    for (int trial = 0; trial < 50; ++trial) {
      const TestFunction f = random_function(index, rng);
      for (double t : {0.1, 1.0, 5.0}) {
        const PoincareCheck chk =
            check_local_poincare(inst.group, inst.walk, f, t);
        if (!chk.holds) {
          ++violations;
          detail("local Poincare: trial " + std::to_string(trial) + " t=" +
                 num(t) + " lhs " + num(chk.lhs) + " rhs " + num(chk.rhs));
        }
      }
      for (double s : {0.5, 2.0}) {
        const SubcommutationCheck chk =
            check_subcommutation(inst.group, inst.walk, f, s, kappa);
        if (!chk.holds) {
          ++violations;
          detail("sub-commutation: trial " + std::to_string(trial) + " s=" +
                 num(s) + " max gap " + num(chk.max_gap));
        }
      }
    }
  }
  ok &= require(violations == 0,
                std::to_string(violations) + " violations at 1e-9 slack");
  return ok;
}

// --- criterion 9: spectral quantities match closed forms and the product
// oracle ----------------------------------------------------------------------

bool spectral_oracles() {
  bool ok = true;
  for (int d : {2, 4, 6, 8}) {
    const double tr = relaxation_time(GroupSpec::hypercube(d), cube_walk(d));
    const double expected = d / 2.0;
    ok &= require(std::abs(tr - expected) <= 1e-8 * expected,
                  "hypercube(" + std::to_string(d) + ") relaxation time " +
                      num(tr) + " != " + num(expected));
  }
  for (int m : {3, 5, 8, 12, 24}) {
    const double tr = relaxation_time(GroupSpec::lattice({m}), cycle_walk(m));
    const double expected =
        1.0 / (1.0 - std::cos(2.0 * std::acos(-1.0) / m));
    ok &= require(std::abs(tr - expected) <= 1e-8 * expected,
                  "cycle(" + std::to_string(m) + ") relaxation time " +
                      num(tr) + " != " + num(expected));
  }

  // Distance to uniform on the 8-cube vs the coordinate-product law.
  const int d = 8;
  const auto g = GroupSpec::hypercube(d);
  const RateMeasure mu = cube_walk(d);
  const double order = 256.0;
  for (double t : {0.5, 2.0, 5.0}) {
    const double measured = tv_to_uniform(heat_kernel(g, mu, t), 256);
    const double p1 = (1.0 - std::exp(-2.0 * t / d)) / 2.0;
    double oracle = 0.0;
    double binom = 1.0;  // C(d, k), updated along k
    for (int k = 0; k <= d; ++k) {
      const double prob =
          std::pow(p1, k) * std::pow(1.0 - p1, d - k);
      oracle += binom * std::abs(prob - 1.0 / order);
      binom = binom * (d - k) / (k + 1);
    }
    oracle /= 2.0;
    ok &= require(std::abs(measured - oracle) <= 1e-4,
                  "t=" + num(t) + ": TV to uniform " + num(measured) +
                      " vs product oracle " + num(oracle));
  }
  return ok;
}

struct Criterion {
  const char* name;
  double budget_seconds;
  std::function<bool()> check;
};

}  // namespace

int main() {
  kernels::set_num_threads(4);

  const std::vector<Criterion> criteria = {
      {"gaussian limit varentropy", 60.0, gaussian_limit_varentropy},
      {"varentropy bound chain", 300.0, varentropy_bound_chain},
      {"curvature sign and equality", 120.0, curvature_sign_and_equality},
      {"iterated form identity", 60.0, iterated_form_identity},
      {"trajectory lemma suite", 180.0, trajectory_lemma_suite},
      {"envelope inequalities", 10.0, envelope_inequalities},
      {"sharpness diagnostics", 120.0, sharpness_diagnostics},
      {"poincare and sub-commutation", 120.0, poincare_and_subcommutation},
      {"spectral oracles", 60.0, spectral_oracles},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    g_details.clear();
    const auto start = std::chrono::steady_clock::now();
    bool ok = false;
    try {
      ok = criteria[i].check();
    } catch (const std::exception& e) {
      detail(std::string("exception: ") + e.what());
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (elapsed > criteria[i].budget_seconds) {
      detail("runtime " + num(elapsed) + " s exceeds budget " +
             num(criteria[i].budget_seconds) + " s");
      ok = false;
    }
    std::printf("criterion %zu (%s): %s (%.2f s)\n", i + 1, criteria[i].name,
                ok ? "pass" : "FAIL", elapsed);
    for (const std::string& line : g_details) {
      std::printf("  - %s\n", line.c_str());
    }
    if (!ok) ++failures;
  }
  if (failures == 0) {
    std::printf("all %zu criteria pass\n", criteria.size());
  } else {
    std::printf("%d of %zu criteria FAILED\n", failures, criteria.size());
  }
  return failures;
}
