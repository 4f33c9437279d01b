// Command-line front end: decides joint measurability of measurement pairs,
// computes maximal CHSH violations with optional witness output, handles
// von Neumann observables, multi-measurement scenarios, and the classical
// gluing of no-signaling statistics.
//
// Exit codes: 0 = compatible / no violation impossible to certify
//             1 = input or solver error
//             3 = incompatible (check-pair, chsh, multi), commuting (vn),
//                 or signaling detected (nosignal)
//             4 = marginal: on the compatibility boundary within tolerance

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "incompat/chsh.hpp"
#include "incompat/jm.hpp"
#include "incompat/matrix_io.hpp"
#include "incompat/measurement.hpp"
#include "incompat/nosignal.hpp"

namespace {

using incompat::DimensionError;
using incompat::Error;
using incompat::InvalidInputError;
using incompat::SignalingError;
using incompat::linalg::ComplexMatrix;
using incompat::linalg::cplx;
using incompat::linalg::HermitianMatrix;
using incompat::measurement::Effect;
using incompat::measurement::NOutcomePOVM;
using ordered_json = nlohmann::ordered_json;

constexpr int kExitCompatible = 0;
constexpr int kExitError = 1;
constexpr int kExitIncompatible = 3;
constexpr int kExitMarginal = 4;

struct Settings {
  std::string format = "text";
  double tol_psd = 1e-9;
  double tol_gap = 1e-8;
  int grid = 2048;
  std::uint64_t seed = 20250815;
};

// The machine-readable report: a fixed key set regardless of subcommand,
// with null for fields the subcommand does not produce.
struct Report {
  std::optional<double> lambda0, lambda_star, mu, phi_star, value, gap;
  std::string verdict;
};

std::string num17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void print_report(const Report& r, const Settings& st) {
  if (st.format == "json") {
    ordered_json j;
    auto put = [&j](const char* key, const std::optional<double>& v) {
      if (v)
        j[key] = *v;
      else
        j[key] = nullptr;
    };
    put("lambda0", r.lambda0);
    put("lambda_star", r.lambda_star);
    put("mu", r.mu);
    j["verdict"] = r.verdict;
    put("phi_star", r.phi_star);
    put("value", r.value);
    put("gap", r.gap);
    std::cout << j.dump() << "\n";
    return;
  }
  auto line = [](const char* key, const std::optional<double>& v) {
    if (v) std::cout << key << " = " << num17(*v) << "\n";
  };
  line("lambda0", r.lambda0);
  line("lambda_star", r.lambda_star);
  line("mu", r.mu);
  line("phi_star", r.phi_star);
  line("value", r.value);
  line("gap", r.gap);
  std::cout << "verdict = " << r.verdict << "\n";
}

int verdict_exit(bool compatible, bool marginal) {
  if (marginal) return kExitMarginal;
  return compatible ? kExitCompatible : kExitIncompatible;
}

const ComplexMatrix& required_matrix(const incompat::io::MatrixFile& mf,
                                     const std::string& name) {
  const ComplexMatrix* m = mf.find(name);
  if (!m)
    throw InvalidInputError("the input document has no matrix named \"" +
                            name + "\"");
  return *m;
}

Effect effect_from(const incompat::io::MatrixFile& mf, const std::string& name,
                   double tol) {
  try {
    return Effect(HermitianMatrix(required_matrix(mf, name)), tol);
  } catch (const InvalidInputError& e) {
    throw InvalidInputError("matrix \"" + name + "\": " + e.what());
  }
}

std::string matrix_line(const HermitianMatrix& h) {
  std::string out = "[";
  for (int i = 0; i < h.dim(); ++i) {
    out += i ? ", [" : "[";
    for (int j = 0; j < h.dim(); ++j) {
      const cplx v = h.mat()(i, j);
      out += (j ? ", [" : "[") + num17(v.real()) + ", " + num17(v.imag()) + "]";
    }
    out += "]";
  }
  return out + "]";
}

int cmd_check_pair(const std::string& file, const Settings& st,
                   bool robustness_check) {
  const incompat::io::MatrixFile mf = incompat::io::load_matrix_file(file);
  const Effect q = effect_from(mf, "Q", st.tol_psd);
  const Effect p = effect_from(mf, "P", st.tol_psd);
  incompat::sdp::SdpOptions opts;
  opts.gap_tol = st.tol_gap;

  const incompat::jm::JmReport jr = incompat::jm::analyze_pair(q, p, opts);
  double mu = jr.mu_robustness;
  if (robustness_check) mu = incompat::jm::robustness_mu(q, p, st.seed, opts);

  Report r;
  r.lambda0 = jr.lambda0;
  r.lambda_star = jr.lambda_star;
  r.mu = mu;
  r.gap = jr.gap;
  r.verdict = jr.marginal ? "marginal"
                          : (jr.jointly_measurable ? "compatible" : "incompatible");
  print_report(r, st);
  if (robustness_check && st.format == "text")
    std::cout << "robustness spot-check = passed\n";
  return verdict_exit(jr.jointly_measurable, jr.marginal);
}

int cmd_chsh(const std::string& file, const Settings& st,
             const std::string& witness_path) {
  const incompat::io::MatrixFile mf = incompat::io::load_matrix_file(file);
  const Effect q = effect_from(mf, "Q", st.tol_psd);
  const Effect p = effect_from(mf, "P", st.tol_psd);
  incompat::chsh::ScanOptions opts;
  opts.grid = st.grid;

  const incompat::chsh::ScanResult scan =
      incompat::chsh::lambda_star_scan(q, p, opts);
  const double value = 1.0 + 2.0 * scan.lambda_star;

  Report r;
  r.lambda_star = scan.lambda_star;
  r.phi_star = scan.phi_star;
  r.value = value;
  const bool marginal = std::abs(value - 1.0) <= 1e-7;
  r.verdict = marginal ? "marginal" : (value > 1.0 ? "incompatible" : "compatible");
  print_report(r, st);

  if (!witness_path.empty()) {
    const incompat::chsh::ChshWitness w =
        incompat::chsh::extract_witness(q, p, opts);
    const int d = q.dim();

    // State as a density matrix, the partner reflections, and the assembled
    // correlation operator, all on the d x 2 product space.
    ComplexMatrix rho(2 * d, 2 * d);
    for (int i = 0; i < 2 * d; ++i)
      for (int j = 0; j < 2 * d; ++j) rho(i, j) = w.psi[i] * std::conj(w.psi[j]);
    const double c = std::cos(w.phi_star), s = std::sin(w.phi_star);
    const HermitianMatrix bob1 = HermitianMatrix::diag({-1.0, 1.0});
    const HermitianMatrix bob2(ComplexMatrix(
        2, 2,
        {1.0 - 2.0 * c * c, -2.0 * c * s, -2.0 * c * s, 1.0 - 2.0 * s * s}));
    const HermitianMatrix alice1 = incompat::measurement::effect_to_observable(
        p, incompat::measurement::SignConvention::minus_is_one);
    const HermitianMatrix alice2 = incompat::measurement::effect_to_observable(
        q, incompat::measurement::SignConvention::plus_is_one);
    const incompat::chsh::BellOperator bo =
        incompat::chsh::bell_operator(alice1, alice2, bob1, bob2);

    incompat::io::MatrixFile wf;
    wf.dimension = 2 * d;
    wf.matrices.emplace_back("rho", rho);
    wf.matrices.emplace_back("B1", w.b1.mat());
    wf.matrices.emplace_back("B2", w.b2.mat());
    wf.matrices.emplace_back("bell", bo.matrix.mat());
    wf.metadata["phi_star"] = num17(w.phi_star);
    wf.metadata["value"] = num17(w.value);
    const std::string text = incompat::io::write_matrix_file(wf);
    std::ofstream out(witness_path, std::ios::binary);
    if (!out) throw InvalidInputError(witness_path + ": cannot open for writing");
    out << text;
    out.close();

    // Re-parse what was written and recompute the expectation from the file
    // contents alone, proving the round trip preserves the witness.
    const incompat::io::MatrixFile back = incompat::io::parse_matrix_file(text);
    const ComplexMatrix& rho2 = required_matrix(back, "rho");
    const ComplexMatrix& bell2 = required_matrix(back, "bell");
    const double recheck = (rho2 * bell2).trace().real();
    if (st.format == "text") {
      std::cout << "witness file = " << witness_path << "\n";
      std::cout << "witness value (recheck) = " << num17(recheck) << "\n";
    }
    if (std::abs(recheck - w.value) > 1e-9)
      throw incompat::InconsistentSolutionError(
          "witness expectation changed across the file round trip");
  }
  return verdict_exit(value <= 1.0, marginal);
}

int cmd_vn(const std::string& file, const Settings& st) {
  const incompat::io::MatrixFile mf = incompat::io::load_matrix_file(file);
  const HermitianMatrix a1(required_matrix(mf, "A1"), st.tol_psd);
  const HermitianMatrix a2(required_matrix(mf, "A2"), st.tol_psd);

  Report r;
  try {
    const auto [s1, s2] = incompat::measurement::dichotomize_vn(a1, a2, 1e-12);
    const double cn = incompat::linalg::commutator_norm(s1.op(), s2.op());
    const double fixed = incompat::chsh::max_violation_fixed_b(s1, s2);
    const double best = incompat::chsh::max_violation_vn(s1, s2);
    r.value = best;
    r.verdict = "incompatible";
    print_report(r, st);
    if (st.format == "text") {
      std::cout << "A1_dichotomized = " << matrix_line(s1.op()) << "\n";
      std::cout << "A2_dichotomized = " << matrix_line(s2.op()) << "\n";
      std::cout << "commutator_norm = " << num17(cn) << "\n";
      std::cout << "value_fixed_partner = " << num17(fixed) << "\n";
    }
    return kExitCompatible;
  } catch (const incompat::ObservablesCompatibleError&) {
    r.value = 1.0;
    r.verdict = "compatible";
    print_report(r, st);
    if (st.format == "text")
      std::cout << "the observables commute; no violation is possible\n";
    return kExitIncompatible;
  }
}

// Collects contiguously numbered matrices name1, name2, ... from the file.
std::vector<Effect> numbered_effects(const incompat::io::MatrixFile& mf,
                                     const std::string& stem, double tol) {
  std::vector<Effect> out;
  for (int k = 1; mf.find(stem + std::to_string(k)); ++k)
    out.push_back(effect_from(mf, stem + std::to_string(k), tol));
  if (out.empty())
    throw InvalidInputError("the input document has no matrices named \"" +
                            stem + "1\", \"" + stem + "2\", ...");
  return out;
}

int cmd_multi(const std::string& file, const Settings& st,
              const std::string& mode) {
  const incompat::io::MatrixFile mf = incompat::io::load_matrix_file(file);
  incompat::sdp::SdpOptions opts;
  opts.gap_tol = st.tol_gap;

  incompat::jm::JmReport jr;
  if (mode == "nvalued") {
    const NOutcomePOVM qa(numbered_effects(mf, "Q", st.tol_psd), st.tol_psd);
    const NOutcomePOVM pb(numbered_effects(mf, "P", st.tol_psd), st.tol_psd);
    jr = incompat::jm::analyze_two_nvalued(qa, pb, opts);
  } else {
    jr = incompat::jm::analyze_multi_dichotomic(
        numbered_effects(mf, "T", st.tol_psd), opts);
  }

  Report r;
  r.lambda0 = jr.lambda0;
  r.lambda_star = jr.lambda_star;
  r.mu = jr.mu_robustness;
  r.gap = jr.gap;
  r.verdict = jr.marginal ? "marginal"
                          : (jr.jointly_measurable ? "compatible" : "incompatible");
  print_report(r, st);
  return verdict_exit(jr.jointly_measurable, jr.marginal);
}

incompat::nosignal::TripleDistribution triple_from(const ordered_json& doc,
                                                   const std::string& key) {
  if (!doc.contains(key) || !doc[key].is_object())
    throw InvalidInputError("\"" + key + "\" must be present and an object");
  const ordered_json& t = doc[key];
  if (!t.contains("shape") || !t["shape"].is_array() || t["shape"].size() != 3)
    throw InvalidInputError("\"" + key +
                            ".shape\" must be a three-element array");
  int shape[3];
  for (int i = 0; i < 3; ++i) {
    if (!t["shape"][i].is_number_integer())
      throw InvalidInputError("\"" + key + ".shape\" entries must be integers");
    shape[i] = t["shape"][i].get<int>();
  }
  if (!t.contains("p") || !t["p"].is_array())
    throw InvalidInputError("\"" + key + ".p\" must be an array of numbers");
  std::vector<double> p;
  for (const auto& v : t["p"]) {
    if (!v.is_number())
      throw InvalidInputError("\"" + key + ".p\" entries must be numbers");
    p.push_back(v.get<double>());
  }
  return incompat::nosignal::TripleDistribution(shape[0], shape[1], shape[2],
                                                std::move(p));
}

int cmd_nosignal(const std::string& file, const Settings& st) {
  std::string text;
  if (file == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    text = buf.str();
  } else {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw InvalidInputError(file + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    text = buf.str();
  }
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidInputError(std::string("cannot parse document: ") + e.what());
  }
  if (!doc.is_object())
    throw InvalidInputError("the top-level value must be an object");
  for (const auto& [key, value] : doc.items())
    if (key != "t1" && key != "t2" && key != "tol")
      throw InvalidInputError("unknown top-level key \"" + key + "\"");
  const auto t1 = triple_from(doc, "t1");
  const auto t2 = triple_from(doc, "t2");
  double tol = 1e-9;
  if (doc.contains("tol")) {
    if (!doc["tol"].is_number())
      throw InvalidInputError("\"tol\" must be a number");
    tol = doc["tol"].get<double>();
  }

  Report r;
  incompat::nosignal::QuadDistribution q(1, 1, 1, 1, {1.0});
  try {
    q = incompat::nosignal::join_distributions(t1, t2, tol);
  } catch (const SignalingError& e) {
    r.verdict = "signaling";
    r.gap = e.max_deviation();
    print_report(r, st);
    if (st.format == "text")
      std::cout << "max marginal deviation = " << num17(e.max_deviation())
                << "\n";
    return kExitIncompatible;
  }

  // Residual of the reconstruction: how far the three observed distributions
  // are from the marginals of the glued joint.
  double residual = 0.0;
  for (int a1 = 0; a1 < q.n_a1(); ++a1)
    for (int a2 = 0; a2 < q.n_a2(); ++a2) {
      for (int b1 = 0; b1 < q.n_b1(); ++b1) {
        double slice = 0.0;
        for (int b2 = 0; b2 < q.n_b2(); ++b2) slice += q.p(a1, a2, b1, b2);
        residual = std::max(residual, std::abs(slice - t1.p(a1, a2, b1)));
      }
      for (int b2 = 0; b2 < q.n_b2(); ++b2) {
        double slice = 0.0;
        for (int b1 = 0; b1 < q.n_b1(); ++b1) slice += q.p(a1, a2, b1, b2);
        residual = std::max(residual, std::abs(slice - t2.p(a1, a2, b2)));
      }
    }

  r.verdict = "no-signaling";
  r.gap = residual;
  const bool binary = q.n_a1() == 2 && q.n_a2() == 2 && q.n_b1() == 2 &&
                      q.n_b2() == 2;
  if (binary) r.value = incompat::nosignal::chsh_value_classical(q);
  print_report(r, st);
  if (st.format == "text") {
    std::cout << "p(a1,a2,b1,b2):\n";
    for (int a1 = 0; a1 < q.n_a1(); ++a1)
      for (int a2 = 0; a2 < q.n_a2(); ++a2)
        for (int b1 = 0; b1 < q.n_b1(); ++b1)
          for (int b2 = 0; b2 < q.n_b2(); ++b2)
            std::cout << "  " << a1 << " " << a2 << " " << b1 << " " << b2
                      << "  " << num17(q.p(a1, a2, b1, b2)) << "\n";
  }
  return kExitCompatible;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Joint measurability and CHSH analysis for quantum measurements"};
  app.require_subcommand(1);

  Settings st;
  app.add_option("--format", st.format, "Output format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  app.add_option("--tol-psd", st.tol_psd,
                 "Tolerance for validating effect operators")
      ->envname("INCOMPAT_TOL_PSD")
      ->capture_default_str();
  app.add_option("--tol-gap", st.tol_gap, "Solver duality-gap tolerance")
      ->envname("INCOMPAT_TOL_GAP")
      ->capture_default_str();
  app.add_option("--grid", st.grid, "Angle-scan grid size")
      ->envname("INCOMPAT_GRID")
      ->capture_default_str();
  app.add_option("--seed", st.seed, "Seed for diagnostic sampling")
      ->capture_default_str();

  std::string file;
  bool robustness_check = false;
  std::string witness_path;
  std::string mode;

  CLI::App* check = app.add_subcommand(
      "check-pair", "Decide joint measurability of effects Q and P");
  check->fallthrough();
  check->add_option("file", file, "Input document (\"-\" for stdin)")->required();
  check->add_flag("--robustness-check", robustness_check,
                  "Also run the seeded noise-robustness spot-check");

  CLI::App* chsh = app.add_subcommand(
      "chsh", "Maximal CHSH expectation enabled by effects Q and P");
  chsh->fallthrough();
  chsh->add_option("file", file, "Input document (\"-\" for stdin)")->required();
  chsh->add_option("--witness", witness_path,
                   "Write the violating state and partner observables here");

  CLI::App* vn = app.add_subcommand(
      "vn", "Violation bounds for Hermitian observables A1 and A2");
  vn->fallthrough();
  vn->add_option("file", file, "Input document (\"-\" for stdin)")->required();

  CLI::App* multi = app.add_subcommand(
      "multi", "Joint measurability of a measurement collection");
  multi->fallthrough();
  multi->add_option("file", file, "Input document (\"-\" for stdin)")->required();
  multi->add_option("--mode", mode, "Collection type")
      ->check(CLI::IsMember({"nvalued", "dichotomic"}))
      ->required();

  CLI::App* nosig = app.add_subcommand(
      "nosignal", "Glue two single-setting distributions into a joint one");
  nosig->fallthrough();
  nosig->add_option("file", file, "Input document (\"-\" for stdin)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Keep --help at 0 but fold CLI11's assorted usage-error codes into the
    // documented failure exit code.
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }

  try {
    if (check->parsed()) return cmd_check_pair(file, st, robustness_check);
    if (chsh->parsed()) return cmd_chsh(file, st, witness_path);
    if (vn->parsed()) return cmd_vn(file, st);
    if (multi->parsed()) return cmd_multi(file, st, mode);
    return cmd_nosignal(file, st);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
}
