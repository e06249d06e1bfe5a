// Copyright 2026 The ncbase Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// ncbase command-line driver. Every command prints a JSON report; the exit code
// is 0 when all checks pass, 1 on a failed check, 2 on usage or input errors
// and 3 when the solver could not decide.

#include <chrono>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <regex>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ncbase/classical.hpp"
#include "ncbase/io.hpp"
#include "ncbase/ncnorm.hpp"
#include "ncbase/paulsen.hpp"

namespace {

using namespace ncbase;

struct Config {
  std::string command;
  std::string system = "random";
  std::string element, base_file, v_spec = "random2x2", output, cone = "dual", field = "C";
  int d = 3, dim = 0, n = 3, v_dim = 2;
  int level_cap = 4, levels = 2, samples = 100, restarts = 100, cb_restarts = 20;
  double tol = 1e-6;
  std::uint64_t seed = 1;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Field field_of(const Config& c) { return parse_field(c.field); }

OperatorSystem load_system(const Config& c, Rng& rng, const std::string& spec) {
  std::smatch m;
  if (spec == "random") {
    const int dim = c.dim > 0 ? c.dim : std::min(2 * c.d, field_of(c) == Field::Real ? c.d * (c.d + 1) / 2 : c.d * c.d);
    return random_system(rng, c.d, dim, field_of(c));
  }
  if (std::regex_match(spec, m, std::regex("diag([0-9]+)"))) return diagonal_system(std::stoi(m[1]), field_of(c));
  if (std::regex_match(spec, m, std::regex("full([0-9]+)"))) return full_matrix_system(std::stoi(m[1]), field_of(c));
  return system_from_json(read_json_file(spec));
}

OperatorSpaceRep load_space(const Config& c, Rng& rng) {
  std::smatch m;
  if (std::regex_match(c.v_spec, m, std::regex("random([0-9]+)x([0-9]+)"))) {
    return random_operator_space(rng, std::stoi(m[1]), std::stoi(m[2]), c.v_dim, field_of(c));
  }
  return operator_space_from_json(read_json_file(c.v_spec));
}

ClassicalBaseSpace load_base_space(const Config& c) {
  std::smatch m;
  const std::string spec = c.base_file.empty() ? "simplex" + std::to_string(c.n) : c.base_file;
  if (std::regex_match(spec, m, std::regex("simplex([0-9]+)"))) return ClassicalBaseSpace::simplex(std::stoi(m[1]));
  return base_space_from_json(read_json_file(spec));
}

std::vector<int> level_list(const Config& c, int cap) {
  std::vector<int> out(std::min(c.levels, cap));
  std::iota(out.begin(), out.end(), 1);
  return out;
}

BaseSpec make_base(const Config& c, const OperatorSystem& sys, int cap) {
  if (c.cone == "dual") return BaseSpec::dual_cp(sys, cap);
  if (c.cone == "inherited") return BaseSpec::inherited_trace(sys, cap);
  throw UsageError("unknown cone \"" + c.cone + "\" (expected dual or inherited)");
}

struct Outcome {
  Report report;
  json result = json::object();
};

Outcome cmd_norm(const Config& c, Rng& rng) {
  if (c.element.empty()) throw UsageError("norm: --element is required");
  const OperatorSystem sys = load_system(c, rng, c.system);
  const BaseSpec b = make_base(c, sys, 2 * c.level_cap);
  const json ej = read_json_file(c.element);
  const Mat x = c.cone == "dual" ? functional_from_json(sys, ej).representer() : element_from_json(sys, ej).ambient();
  if (sys.level_of(x) > c.level_cap) throw UsageError("norm: element level exceeds --level-cap");
  const bool sa = is_hermitian(x);
  const NormResult r = sa ? nc_base_norm_sa(b, 0.5 * (x + x.adjoint())) : nc_base_norm(b, x);
  Outcome out;
  out.report.check_le("solver_gap", r.gap, 0.0, 1e-6);
  const Mat target = sa ? Mat(0.5 * (x + x.adjoint())) : tilde(x).mat();
  out.result = {{"norm", r.value},
                {"level", sys.level_of(x)},
                {"selfadjoint", sa},
                {"cone", c.cone},
                {"solver_status", conic::to_string(r.status)},
                {"gap", r.gap},
                {"iterations", r.iterations},
                {"witness",
                 {{"f1_y_norm", spectral_norm(b.f1(r.y))},
                  {"f1_z_norm", spectral_norm(b.f1(r.z))},
                  {"decomposition_residual", spectral_norm(target - (r.y - r.z))}}}};
  return out;
}

Outcome cmd_verify(const std::string& suite, const Config& c, Rng& rng) {
  Outcome out;
  if (suite == "duality") {
    const OperatorSystem sys = load_system(c, rng, c.system);
    DualityOptions o;
    o.levels = level_list(c, c.level_cap);
    o.samples = c.samples;
    o.tol = c.tol;
    o.cb_restarts = c.cb_restarts;
    out.report = verify_duality(sys, o, rng);
  } else if (suite == "mbos") {
    const OperatorSystem sys = load_system(c, rng, c.system);
    MbosOptions o;
    o.levels = level_list(c, c.level_cap);
    o.samples = c.samples;
    o.tol = std::min(c.tol, 1e-7);
    out.report = mbos_validate(make_base(c, sys, c.level_cap), o, rng);
  } else if (suite == "bipolar") {
    const OperatorSystem sys = load_system(c, rng, c.system);
    for (int n : level_list(c, c.level_cap)) {
      const BipolarReport br = bipolar_check(sys, n, c.samples, std::min(c.tol, 1e-7), rng);
      const std::string pre = "level" + std::to_string(n) + "/";
      out.report.check_le(pre + "disagreements", br.disagreements.size(), 0.0, 0.0);
      if (br.indeterminate > 0) {
        out.report.add({pre + "indeterminate", CheckStatus::Indeterminate, double(br.indeterminate), 0.0, 0.0});
      }
    }
  } else if (suite == "paulsen") {
    const PaulsenSystem ps = build_paulsen(load_space(c, rng), 2 * c.level_cap);
    EquivalenceOptions o;
    o.levels = level_list(c, std::min(2, c.level_cap));
    o.samples = c.samples;
    o.tol = std::max(c.tol, 1e-5);
    o.witness_restarts = c.restarts;
    out.report = verify_equivalence(ps, o, rng);
  } else if (suite == "complexify") {
    Config rc = c;
    rc.field = "R";
    const OperatorSystem sys = load_system(rc, rng, c.system == "random" ? "diag3" : c.system);
    ComplexifyOptions o;
    o.levels = level_list(c, std::min(2, c.level_cap));
    o.samples = c.samples;
    o.tol = std::max(c.tol, 1e-7);
    out.report = complexify_check(sys, o, rng);
  } else if (suite == "classical") {
    const ClassicalBaseSpace sp = load_base_space(c);
    out.report.merge(cone_closure_idempotence(sp, rng, c.samples), "closure/");
    TaylorOptions o;
    o.pairs = c.samples;
    o.sup_points = std::max(1, c.samples / 10);
    out.report.merge(verify_taylor_duality(sp, o, rng), "taylor/");
  } else {
    throw UsageError("unknown suite \"" + suite + "\"");
  }
  return out;
}

json cmd_gen(const std::string& what, const Config& c, Rng& rng) {
  if (what == "random-system") return system_to_json(load_system(c, rng, "random"));
  if (what == "diag") return system_to_json(diagonal_system(c.n, field_of(c)));
  if (what == "full-matrix") return system_to_json(full_matrix_system(c.d, field_of(c)));
  if (what == "paulsen") return system_to_json(build_paulsen(load_space(c, rng)).sys);
  if (what == "operator-space") return operator_space_to_json(load_space(c, rng));
  throw UsageError("unknown generator \"" + what + "\"");
}

Outcome cmd_paulsen_check(const Config& c, Rng& rng) {
  const PaulsenSystem ps = build_paulsen(load_space(c, rng), c.level_cap);
  Outcome out;
  int k1_disagree = 0, formula_disagree = 0, norm_bound = 0;
  for (int s = 0; s < c.samples; ++s) {
    const double lambda = uniform(rng, -0.1, 2.1);
    Mat x = Mat::Zero(ps.v.rows(), ps.v.cols());
    for (const Mat& b : ps.v.basis()) x += gaussian(rng) * b;
    const double xn = spectral_norm(x);
    if (xn > 0) x *= uniform(rng, 0.0, 1.5) * std::sqrt(std::max(0.0, lambda * (2.0 - lambda))) / xn;
    const bool formula = k1_membership(ps, lambda, x, 1e-7);
    const Mat cand = k1_candidate(ps, lambda, x);
    if (formula != ps.base.in_base(cand, 1e-7)) ++k1_disagree;
    const Mat l = Mat::Constant(1, 1, std::max(0.0, lambda)), m = Mat::Constant(1, 1, std::max(0.0, 2.0 - lambda));
    const PositivityCheck pc = positivity_formula_check(ps, l, m, x, rng);
    if (!pc.agree) ++formula_disagree;
    if (!pc.norm_bound_consistent) ++norm_bound;
  }
  out.report.check_le("k1_formula_disagreements", k1_disagree, 0.0, 0.0);
  out.report.check_le("positivity_formula_disagreements", formula_disagree, 0.0, 0.0);
  out.report.check_le("norm_bound_violations", norm_bound, 0.0, 0.0);
  try {
    out.report.check_ge("tau_strict_positivity", ps.base.strict_positivity_margin(), 1e-7, 0.0);
  } catch (const NumericalError&) {
    out.report.add({"tau_strict_positivity", CheckStatus::Indeterminate, 0.0, 1e-7, 0.0});
  }
  return out;
}

int exit_code(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return 0;
    case CheckStatus::Fail: return 1;
    case CheckStatus::Indeterminate: return 3;
  }
  return 3;
}

void emit(const json& j, const std::string& path) {
  if (path.empty()) {
    std::cout << std::setw(2) << j << "\n";
  } else {
    write_json_file(path, j);
  }
}

}  // namespace

int main(int argc, char** argv) {
  Config c;
  CLI::App app{"ncbase: noncommutative base norms on concrete operator systems"};
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* s) {
    s->add_option("--system", c.system, "System file, or random, diagN, fullN");
    s->add_option("--field", c.field, "R or C for generated systems")->check(CLI::IsMember({"R", "C"}));
    s->add_option("--d", c.d, "Ambient dimension")->check(CLI::Range(1, 8));
    s->add_option("--dim", c.dim, "Dimension of a random system")->check(CLI::Range(1, 64));
    s->add_option("--n", c.n, "Size for diag and simplex")->check(CLI::Range(1, 16));
    s->add_option("--level-cap", c.level_cap, "Largest matrix level")->check(CLI::Range(1, 6));
    s->add_option("--levels", c.levels, "Check levels 1..N")->check(CLI::Range(1, 6));
    s->add_option("--samples", c.samples, "Samples per level")->check(CLI::Range(1, 100000));
    s->add_option("--tol", c.tol, "Check tolerance")->check(CLI::Range(1e-10, 1e-3));
    s->add_option("--seed", c.seed, "Random seed");
    s->add_option("--output", c.output, "Write the report here instead of stdout");
    s->add_option("--cone", c.cone, "dual or inherited")->check(CLI::IsMember({"dual", "inherited"}));
    s->add_option("--V", c.v_spec, "Operator space file, or randomAxB");
    s->add_option("--V-dim", c.v_dim, "Dimension of a random operator space")->check(CLI::Range(0, 64));
    s->add_option("--restarts", c.restarts, "Witness search restarts")->check(CLI::Range(0, 10000));
    s->add_option("--cb-restarts", c.cb_restarts, "cb lower bound restarts")->check(CLI::Range(0, 10000));
    s->add_option("--base", c.base_file, "Classical base space file, or simplexN");
  };

  std::string suite, generator, paulsen_action;
  CLI::App* norm = app.add_subcommand("norm", "Compute an nc base norm");
  add_common(norm);
  norm->add_option("--element", c.element, "Element or functional file");
  norm->add_flag_callback("--dual", [&] { c.cone = "dual"; }, "DualCP cone (element is a functional)");
  norm->add_flag_callback("--inherited", [&] { c.cone = "inherited"; }, "Inherited cone with the trace base");

  CLI::App* verify = app.add_subcommand("verify", "Run a verification suite");
  add_common(verify);
  verify->add_option("suite", suite, "duality, mbos, bipolar, paulsen, complexify or classical")->required();

  CLI::App* gen = app.add_subcommand("gen", "Generate a system file");
  add_common(gen);
  gen->add_option("generator", generator, "random-system, paulsen, diag, full-matrix or operator-space")->required();

  CLI::App* paulsen = app.add_subcommand("paulsen", "Paulsen system tools");
  add_common(paulsen);
  paulsen->add_option("action", paulsen_action, "build, check or verify")
      ->required()
      ->check(CLI::IsMember({"build", "check", "verify"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  std::string echo;
  for (int i = 1; i < argc; ++i) echo += (i > 1 ? " " : "") + std::string(argv[i]);

  if (const char* env = std::getenv("NCBASE_SOLVER_TOL")) {
    try {
      conic::set_tolerance_override(std::stod(env));
    } catch (const std::exception& e) {
      std::cerr << "ncbase: NCBASE_SOLVER_TOL: " << e.what() << "\n";
      return 2;
    }
  }

  Rng rng(c.seed);
  const auto start = std::chrono::steady_clock::now();
  try {
    Outcome out;
    if (gen->parsed()) {
      emit(cmd_gen(generator, c, rng), c.output);
      return 0;
    }
    if (paulsen->parsed() && paulsen_action == "build") {
      emit(system_to_json(build_paulsen(load_space(c, rng)).sys), c.output);
      return 0;
    }
    if (norm->parsed()) {
      out = cmd_norm(c, rng);
    } else if (verify->parsed()) {
      out = cmd_verify(suite, c, rng);
    } else if (paulsen_action == "check") {
      out = cmd_paulsen_check(c, rng);
    } else {
      out = cmd_verify("paulsen", c, rng);
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const CheckStatus status = out.report.overall();
    json rep = {{"schema", 1},
                {"command", echo},
                {"records", out.report.to_json()},
                {"status", to_string(status)},
                {"timing", {{"seconds", secs}}},
                {"solver",
                 {{"tolerance_override", conic::tolerance_override()}, {"seed", c.seed}}}};
    if (!out.result.empty()) rep["result"] = out.result;
    emit(rep, c.output);
    return exit_code(status);
  } catch (const UsageError& e) {
    std::cerr << "ncbase: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "ncbase: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "ncbase: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "ncbase: solver failure: " << e.what() << "\n";
    return 3;
  }
}
