// ncfunc: evaluate free series at matrix tuples, extract block-matrix
// difference coefficients, simulate truncated Fock operators, and run the
// seeded property suites.  All I/O is JSON; exit code 0 means success or
// pass, 1 a failed property check, 2 an input error.

#include "ncfree/json_io.hpp"
#include "ncfree/mobius_maps.hpp"
#include "ncfree/suites.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

using namespace ncfree;

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw std::invalid_argument(std::string("malformed JSON in ") + path +
                                ": " + e.what());
  }
  return j;
}

void emit(const Json& j, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::ofstream out(out_path);
    if (!out) throw std::invalid_argument("cannot write " + out_path);
    out << j.dump(2) << "\n";
  }
}

int report_exit(const std::vector<CheckReport>& reports) {
  for (const auto& r : reports)
    if (!r.pass()) return 1;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"free function calculus at matrix tuples"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string series_path, point_path, dir_path, z_path, w_path, gamma_path,
      op_path, out_path;
  bool verbose = false;
  app.add_flag("--verbose", verbose, "human-readable summary on stderr");

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "evaluate a series at a point");
  int kmax = 10;
  eval_cmd->add_option("--series", series_path)->required();
  eval_cmd->add_option("--point", point_path)->required();
  eval_cmd->add_option("--kmax", kmax);
  eval_cmd->add_option("--out", out_path);

  // deriv
  auto* deriv_cmd =
      app.add_subcommand("deriv", "directional derivative of a series");
  deriv_cmd->add_option("--series", series_path)->required();
  deriv_cmd->add_option("--point", point_path)->required();
  deriv_cmd->add_option("--dir", dir_path)->required();
  deriv_cmd->add_option("--kmax", kmax);
  deriv_cmd->add_option("--out", out_path);

  // radius
  auto* radius_cmd = app.add_subcommand("radius", "radius of convergence");
  radius_cmd->add_option("--series", series_path)->required();
  radius_cmd->add_option("--kmax", kmax);
  radius_cmd->add_option("--out", out_path);

  // taylor coeffs | remainder | expand
  auto* taylor_cmd = app.add_subcommand("taylor", "difference calculus");
  taylor_cmd->require_subcommand(1);
  int degree = 1, rem_n = 4;
  auto* coeffs_cmd = taylor_cmd->add_subcommand("coeffs");
  coeffs_cmd->add_option("--series", series_path)->required();
  coeffs_cmd->add_option("--degree", degree)->required();
  coeffs_cmd->add_option("--out", out_path);
  auto* remainder_cmd = taylor_cmd->add_subcommand("remainder");
  remainder_cmd->add_option("--series", series_path)->required();
  remainder_cmd->add_option("--z", z_path)->required();
  remainder_cmd->add_option("--w", w_path)->required();
  remainder_cmd->add_option("--n", rem_n);
  remainder_cmd->add_option("--out", out_path);
  auto* expand_cmd = taylor_cmd->add_subcommand("expand");
  expand_cmd->add_option("--series", series_path)->required();
  expand_cmd->add_option("--kmax", kmax);
  expand_cmd->add_option("--out", out_path);

  // fock
  auto* fock_cmd = app.add_subcommand("fock", "truncated Fock operators");
  fock_cmd->require_subcommand(1);
  int fock_d = 1, fock_N = 4, letter = 1, four_j = 0, ces_k = 8;
  double gauge_t = 0.0, shift_r = 1.0;
  std::string mode = "mask";
  auto* creation_cmd = fock_cmd->add_subcommand("creation");
  creation_cmd->add_option("--d", fock_d)->required();
  creation_cmd->add_option("--N", fock_N)->required();
  creation_cmd->add_option("--letter", letter)->required();
  creation_cmd->add_option("--out", out_path);
  auto* toeplitz_cmd = fock_cmd->add_subcommand("toeplitz");
  toeplitz_cmd->add_option("--N", fock_N)->required();
  toeplitz_cmd->add_option("--series", series_path)->required();
  toeplitz_cmd->add_option("--out", out_path);
  auto* gauge_cmd = fock_cmd->add_subcommand("gauge");
  gauge_cmd->add_option("--d", fock_d)->required();
  gauge_cmd->add_option("--N", fock_N)->required();
  gauge_cmd->add_option("--t", gauge_t)->required();
  gauge_cmd->add_option("--out", out_path);
  auto* fourier_cmd = fock_cmd->add_subcommand("fourier");
  fourier_cmd->add_option("--op", op_path)->required();
  fourier_cmd->add_option("--j", four_j)->required();
  fourier_cmd->add_option("--mode", mode)
      ->check(CLI::IsMember({"mask", "quadrature"}));
  fourier_cmd->add_option("--out", out_path);
  auto* cesaro_cmd = fock_cmd->add_subcommand("cesaro");
  cesaro_cmd->add_option("--op", op_path)->required();
  cesaro_cmd->add_option("--k", ces_k)->required();
  cesaro_cmd->add_option("--out", out_path);
  auto* shift_cmd = fock_cmd->add_subcommand("shift");
  shift_cmd->add_option("--d", fock_d)->required();
  shift_cmd->add_option("--N", fock_N)->required();
  shift_cmd->add_option("--r", shift_r)->required();
  shift_cmd->add_option("--out", out_path);

  // check matricial
  auto* check_cmd = app.add_subcommand("check", "property harnesses");
  check_cmd->require_subcommand(1);
  unsigned seed = 0;
  double tol = 1e-9;
  std::vector<int> levels{1, 2, 3};
  auto* matricial_cmd = check_cmd->add_subcommand("matricial");
  matricial_cmd->add_option("--series", series_path)->required();
  matricial_cmd->add_option("--levels", levels)->delimiter(',');
  matricial_cmd->add_option("--seed", seed);
  matricial_cmd->add_option("--tol", tol);
  matricial_cmd->add_option("--out", out_path);

  // mobius
  auto* mobius_cmd = app.add_subcommand("mobius", "ball automorphisms");
  mobius_cmd->require_subcommand(1);
  int trials = 100;
  auto* meval_cmd = mobius_cmd->add_subcommand("eval");
  meval_cmd->add_option("--gamma", gamma_path)->required();
  meval_cmd->add_option("--z", z_path)->required();
  meval_cmd->add_option("--out", out_path);
  auto* mcheck_cmd = mobius_cmd->add_subcommand("check");
  mcheck_cmd->add_option("--gamma", gamma_path)->required();
  mcheck_cmd->add_option("--trials", trials);
  mcheck_cmd->add_option("--seed", seed);
  mcheck_cmd->add_option("--out", out_path);

  // luminet
  auto* luminet_cmd =
      app.add_subcommand("luminet", "signed permutation-identity series");
  luminet_cmd->add_option("--kmax", kmax)->required();
  luminet_cmd->add_option("--out", out_path);

  // suite
  auto* suite_cmd = app.add_subcommand("suite", "seeded property suites");
  std::string suite_name = "all";
  bool tamper = false;
  suite_cmd->add_option("name", suite_name)
      ->check(CLI::IsMember(
          {"all", "series", "taylor", "fock", "matricial", "mobius"}));
  suite_cmd->add_option("--seed", seed);
  suite_cmd->add_flag("--tamper", tamper,
                      "self-test hook: perturb the mobius first-order matrix "
                      "so its suite must fail");
  suite_cmd->add_option("--out", out_path);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*eval_cmd) {
      FreeSeries s = series_from_json(load_json(series_path));
      Point z = point_from_json(load_json(point_path));
      EvalResult r = eval(s, z, kmax);
      Json j{{"value", matrix_to_json(r.value)},
             {"tail_bound", r.tail_bound},
             {"divergence_warning", r.divergence_warning}};
      emit(j, out_path);
      if (verbose)
        std::cerr << "eval: degree cap " << kmax << ", tail bound "
                  << r.tail_bound << "\n";
      return 0;
    }
    if (*deriv_cmd) {
      FreeSeries s = series_from_json(load_json(series_path));
      Point z = point_from_json(load_json(point_path));
      Point zeta = point_from_json(load_json(dir_path));
      emit(matrix_to_json(directional_derivative(s, z, zeta, kmax)), out_path);
      return 0;
    }
    if (*radius_cmd) {
      FreeSeries s = series_from_json(load_json(series_path));
      RadiusEstimate r = radius(s, kmax);
      Json j{{"value", std::isfinite(r.value) ? Json(r.value) : Json("inf")},
             {"degrees_used", r.degrees_used},
             {"exact", r.exact}};
      emit(j, out_path);
      return 0;
    }
    if (*coeffs_cmd) {
      FreeSeries s = series_from_json(load_json(series_path));
      auto coeffs = taylor_coeffs(series_function(s), degree);
      Json terms = Json::array();
      for (const auto& [w, c] : coeffs) {
        Json word = Json::array();
        for (int l : w.letters) word.push_back(l);
        terms.push_back(Json{{"word", word}, {"re", c.real()}, {"im", c.imag()}});
      }
      emit(Json{{"degree", degree}, {"terms", terms}}, out_path);
      return 0;
    }
    if (*remainder_cmd) {
      FreeSeries s = series_from_json(load_json(series_path));
      Point z = point_from_json(load_json(z_path));
      Point w = point_from_json(load_json(w_path));
      CheckReport r = remainder_check(s, z, w, rem_n);
      emit(check_report_to_json(r), out_path);
      return r.pass() ? 0 : 1;
    }
    if (*expand_cmd) {
      FreeSeries s = series_from_json(load_json(series_path));
      emit(series_to_json(taylor_expand(series_function(s), kmax)), out_path);
      return 0;
    }
    if (*creation_cmd) {
      emit(fock_operator_to_json(creation(FockBasis(fock_d, fock_N), letter)),
           out_path);
      return 0;
    }
    if (*toeplitz_cmd) {
      FreeSeries s = series_from_json(load_json(series_path));
      emit(fock_operator_to_json(toeplitz(FockBasis(s.d(), fock_N), s)),
           out_path);
      return 0;
    }
    if (*gauge_cmd) {
      emit(fock_operator_to_json(gauge(FockBasis(fock_d, fock_N), gauge_t)),
           out_path);
      return 0;
    }
    if (*fourier_cmd) {
      FockOperator f = fock_operator_from_json(load_json(op_path));
      FourierMode m =
          mode == "mask" ? FourierMode::Mask : FourierMode::Quadrature;
      emit(fock_operator_to_json(fourier(f, four_j, m)), out_path);
      return 0;
    }
    if (*cesaro_cmd) {
      FockOperator f = fock_operator_from_json(load_json(op_path));
      emit(fock_operator_to_json(cesaro(f, ces_k)), out_path);
      return 0;
    }
    if (*shift_cmd) {
      emit(point_to_json(shift_point(FockBasis(fock_d, fock_N), shift_r)),
           out_path);
      return 0;
    }
    if (*matricial_cmd) {
      FreeSeries s = series_from_json(load_json(series_path));
      MatricialFunction f = series_function(s);
      Rng rng(seed);
      CheckReport report{"matricial", tol, {}};
      for (size_t a = 0; a < levels.size(); ++a)
        for (size_t b = 0; b < levels.size(); ++b) {
          Point z = random_point_with_norm(rng, s.d(), levels[a], 0.5);
          Point w = random_point_with_norm(rng, s.d(), levels[b], 0.5);
          IntertwinerCatalog cat =
              build_catalog(z, w, seed, f.domain_radius, tol);
          CheckReport inner = check_function_matricial(f, cat, tol);
          for (const auto& c : inner.cases)
            report.add("levels (" + std::to_string(levels[a]) + "," +
                           std::to_string(levels[b]) + ") " + c.description,
                       c.residual);
          report.add("levels (" + std::to_string(levels[a]) + "," +
                         std::to_string(levels[b]) + ") direct sum",
                     check_direct_sum(f, z, w, tol).max_residual());
        }
      emit(check_report_to_json(report), out_path);
      return report.pass() ? 0 : 1;
    }
    if (*meval_cmd) {
      CentralVector g(central_vector_from_json(load_json(gamma_path)));
      Point z = point_from_json(load_json(z_path));
      Point img = g_gamma(g, z);
      Json j{{"value", point_to_json(img)}, {"row_norm", row_norm(img)}};
      emit(j, out_path);
      return 0;
    }
    if (*mcheck_cmd) {
      CentralVector g(central_vector_from_json(load_json(gamma_path)));
      Rng rng(seed);
      CheckReport report{"mobius_check", 1e-8, {}};
      std::uniform_int_distribution<int> lvl(1, 3);
      for (int t = 0; t < trials; ++t) {
        const Index n = lvl(rng);
        Point z = random_point_with_norm(rng, g.d(), n,
                                         0.5 / std::max(g.norm(), 0.5));
        SeriesImage si = g_series_partial(g, z, 8);
        double gap = row_norm(g_gamma(g, z) - si.value);
        report.add("series agreement trial " + std::to_string(t),
                   gap <= si.tail_bound + 1e-12 ? 0.0 : gap);
      }
      report.add("second order",
                 second_order_check(g, std::max(1, trials / 10), 1e-8, seed)
                     .max_residual());
      emit(check_report_to_json(report), out_path);
      return report.pass() ? 0 : 1;
    }
    if (*luminet_cmd) {
      emit(series_to_json(FreeSeries::luminet(kmax)), out_path);
      return 0;
    }
    if (*suite_cmd) {
      Json bundle = Json::array();
      bool all_pass = true;
      for (const Suite& s : all_suites()) {
        if (suite_name != "all" && s.group != suite_name) continue;
        std::vector<CheckReport> reports =
            (s.id == "11_mobius") ? suite_mobius(seed, tamper) : s.run(seed);
        Json entry{{"suite", s.id}, {"reports", Json::array()}};
        bool pass = true;
        for (const auto& r : reports) {
          entry["reports"].push_back(check_report_to_json(r));
          pass = pass && r.pass();
        }
        entry["pass"] = pass;
        all_pass = all_pass && pass;
        bundle.push_back(entry);
        if (verbose)
          std::cerr << (pass ? "[PASS] " : "[FAIL] ") << s.id << "\n";
      }
      emit(Json{{"seed", seed}, {"suites", bundle}, {"pass", all_pass}},
           out_path);
      return all_pass ? 0 : 1;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::length_error& e) {
    std::cerr << "resource error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
