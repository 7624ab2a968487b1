#include "indeflll/analysis.hpp"
#include "indeflll/generators.hpp"
#include "indeflll/matrix_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <openssl/evp.h>

#include <chrono>
#include <cstdlib>
#include <future>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace indef;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kVerifyFailed = 1, kInputError = 2, kInternal = 3 };

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 digest failed");
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return out.str();
}

struct LoadedMatrix {
  IntMatrix m;
  std::string digest;
};

LoadedMatrix load(const std::string& path, bool symmetric = true) {
  std::string content = path == "-" ? std::string(std::istreambuf_iterator<char>(std::cin), {}) : read_file(path);
  return {parse_matrix(content, symmetric), sha256_hex(content)};
}

Rat parse_gamma(const std::string& s) {
  Rat g;
  try {
    g = parse_rational(s);
  } catch (const std::invalid_argument&) {
    throw InputError("--gamma0 expects an exact rational p/q, got '" + s + "'");
  }
  if (!(g > Rat(1, 4) && g < 1)) throw InputError("--gamma0 must lie strictly between 1/4 and 1");
  return g;
}

std::string json_number(const Rat& x) { return to_string(x); }

struct ReduceFlags {
  std::string gamma0 = "99/100";
  std::string gamma_h = "same";
  std::string sign = "on";
  std::size_t max_extra = ReducerParams{}.max_extra;

  ReducerParams params() const {
    ReducerParams p;
    p.gamma0 = parse_gamma(gamma0);
    p.gamma_h_one = gamma_h == "one";
    p.sign_strategy = sign == "on";
    p.max_extra = max_extra;
    return p;
  }

  void add_to(CLI::App* app) {
    app->add_option("--gamma0", gamma0, "Lovasz parameter as an exact rational p/q")->capture_default_str();
    app->add_option("--gamma-h", gamma_h, "Plane swap parameter")->check(CLI::IsMember({"same", "one"}))->capture_default_str();
    app->add_option("--sign", sign, "Sign alternation strategy")->check(CLI::IsMember({"on", "off"}))->capture_default_str();
    app->add_option("--max-extra", max_extra, "Extra cycle steps on reduced indefinite blocks")->capture_default_str();
  }
};

struct RunReport {
  std::string label;
  bool ok = true;
  std::string failure;
  ReductionResult result;
  BoundReport bound;
  LatticeInvariants sig;
  std::size_t unit_diagonal = 0;
  double seconds = 0;
};

std::size_t count_unit_diagonal(const ReductionResult& r) {
  std::size_t n = 0;
  for (Index i = 0; i < r.rank; ++i) n += abs(r.reduced_gram(i, i)) == 1;
  return n;
}

RunReport run_reducer(const std::string& label, const IntMatrix& G, const ReducerParams& params, bool baseline) {
  RunReport rep;
  rep.label = label;
  auto t0 = std::chrono::steady_clock::now();
  try {
    rep.result = baseline ? reduce_baseline_simon(G, params.gamma0) : reduce(G, params);
  } catch (const IsotropicError& e) {
    rep.ok = false;
    rep.failure = e.what();
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  rep.bound = verify_theorem_bound(rep.result, G, params.gamma0);
  rep.sig = signature_via_sturm(to_rational(G));
  rep.sig.nondeg_det = determinant(kernel_split(G).G_ell);
  rep.unit_diagonal = count_unit_diagonal(rep.result);
  return rep;
}

Rat sigma_reference(Index sigma) { return Rat(Int(Int(sigma) * Int(sigma - 1) / 2)); }

json report_json(const RunReport& r, const std::string& digest, const ReducerParams& p) {
  json j;
  j["label"] = r.label;
  j["input_sha256"] = digest;
  j["parameters"] = {{"gamma0", to_string(p.gamma0)},
                     {"gamma_h", p.gamma_h_one ? "one" : "same"},
                     {"sign", p.sign_strategy ? "on" : "off"},
                     {"max_extra", p.max_extra}};
  j["ok"] = r.ok;
  if (!r.ok) {
    j["failure"] = r.failure;
    return j;
  }
  const auto& s = r.result.stats;
  j["rank"] = r.result.rank;
  j["n_plus"] = r.sig.n_plus;
  j["n_minus"] = r.sig.n_minus;
  j["signature"] = r.sig.signature;
  j["nondeg_det"] = json_number(r.sig.nondeg_det);
  j["first_is_hyperbolic"] = r.result.first_is_hyperbolic();
  j["first"] = json_number(r.result.rank == 0 ? Rat(0)
                                              : Rat(r.result.first_is_hyperbolic() ? r.result.reduced_gram(0, 1)
                                                                                   : r.result.reduced_gram(0, 0)));
  j["sum_N"] = r.bound.sum_N;
  j["sigma_reference"] = json_number(sigma_reference(r.sig.signature));
  j["unit_diagonal_entries"] = r.unit_diagonal;
  j["theorem_bound"] = {{"pass", r.bound.theorem_ok},
                        {"lhs", json_number(r.bound.lhs)},
                        {"rhs", json_number(r.bound.rhs)},
                        {"slack", to_decimal(r.bound.slack, 6)}};
  j["heuristic"] = {{"within", r.bound.heuristic_ok}, {"rhs", json_number(r.bound.heuristic_rhs)}};
  j["stats"] = {{"iterations", s.iterations},
                {"swaps", s.swaps},
                {"adherent_integrations", s.adherent_integrations},
                {"gzero_reorders", s.gzero_reorders},
                {"plane_moves", s.plane_moves},
                {"line10_firings", s.line10_firings},
                {"potential_drops", s.potential_drops},
                {"documented_events", s.documented_events},
                {"potential_violations", s.potential_violations}};
  j["wall_seconds"] = r.seconds;
  return j;
}

void print_report_text(std::ostream& out, const RunReport& r, const std::string& digest, const ReducerParams& p) {
  out << "input sha256: " << digest << "\n";
  out << "parameters: gamma0=" << p.gamma0 << " gamma_h=" << (p.gamma_h_one ? "one" : "same")
      << " sign=" << (p.sign_strategy ? "on" : "off") << " max_extra=" << p.max_extra << "\n";
  if (!r.ok) {
    out << "failed: " << r.failure << "\n";
    return;
  }
  const auto& s = r.result.stats;
  out << "rank: " << r.result.rank << "\n";
  out << "signature: " << r.sig.signature << " (n+=" << r.sig.n_plus << ", n-=" << r.sig.n_minus << ")\n";
  out << "det_nonzero: " << r.sig.nondeg_det << "\n";
  if (r.result.rank > 0) {
    if (r.result.first_is_hyperbolic()) out << "first cross term b(v1,v2): " << r.result.reduced_gram(0, 1) << "\n";
    else out << "first squared-norm: " << r.result.reduced_gram(0, 0) << "\n";
  }
  out << "sum N_i: " << r.bound.sum_N << "\n";
  out << "sigma(sigma-1)/2: " << sigma_reference(r.sig.signature) << "\n";
  out << "diagonal entries of absolute value 1: " << r.unit_diagonal << "\n";
  out << "theorem bound: " << (r.bound.theorem_ok ? "pass" : "FAIL") << " (slack " << to_decimal(r.bound.slack, 6)
      << ")\n";
  out << "heuristic comparison: " << (r.bound.heuristic_ok ? "within" : "exceeds") << "\n";
  out << "stats: iterations=" << s.iterations << " swaps=" << s.swaps << " adherent=" << s.adherent_integrations
      << " gzero_reorders=" << s.gzero_reorders << " plane_moves=" << s.plane_moves << " line10=" << s.line10_firings
      << " potential_drops=" << s.potential_drops << " documented=" << s.documented_events
      << " potential_violations=" << s.potential_violations << "\n";
  out << "wall time: " << std::fixed << std::setprecision(3) << r.seconds << " s\n";
  out.unsetf(std::ios::fixed);
}

std::string default_report_format() {
  const char* env = std::getenv("INDEFLLL_REPORT");
  if (env && std::string(env) == "structured") return "structured";
  return "text";
}

MatrixFormat parse_format(const std::string& f) { return f == "json" ? MatrixFormat::Json : MatrixFormat::Text; }

void emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") std::cout << content;
  else write_file(path, content);
}

// qform reduce a b c
int cmd_qform(const std::vector<std::string>& coeffs, std::size_t max_extra) {
  if (coeffs.size() != 3) throw InputError("qform reduce expects three coefficients a b c");
  BQForm f;
  try {
    f = {parse_rational(coeffs[0]), parse_rational(coeffs[1]), parse_rational(coeffs[2])};
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("bad coefficient: ") + e.what());
  }
  Rat D = discriminant(f);
  std::cout << "form: " << f << "\ndiscriminant: " << D << "\n";
  if (D <= 0) {
    FormStep s = reduce_definite(f);
    std::cout << "reduced: " << s.form << "\ntransform: " << s.transform << "\n";
    return kOk;
  }
  auto traj = reduce_indefinite(f, max_extra);
  for (std::size_t i = 0; i < traj.size(); ++i)
    std::cout << (i == 0 ? "first reduced: " : "cycle step " + std::to_string(i) + ": ") << traj[i].form
              << "  transform " << traj[i].transform << (is_reduced(traj[i].form) ? "" : "  (not reduced)") << "\n";
  return kOk;
}

int cmd_reduce(const std::string& file, const ReduceFlags& flags, const std::string& out, const std::string& u_out,
               const std::string& report, const std::string& format) {
  LoadedMatrix in = load(file);
  ReducerParams p = flags.params();
  RunReport r = run_reducer(flags.sign == "on" ? "sign" : "no-sign", in.m, p, false);
  MatrixFormat fmt = parse_format(format);
  if (!out.empty()) write_file(out, print_matrix(r.result.reduced_gram, fmt));
  if (!u_out.empty()) write_file(u_out, print_matrix(r.result.U, fmt));
  if (report == "structured") {
    json j = report_json(r, in.digest, p);
    if (out.empty()) j["reduced_gram"] = json::parse(print_json_matrix(r.result.reduced_gram));
    std::cout << j.dump(2) << "\n";
  } else {
    if (out.empty()) std::cout << print_text_matrix(r.result.reduced_gram);
    print_report_text(std::cout, r, in.digest, p);
  }
  return kOk;
}

int cmd_analyze(const std::string& file, const std::string& report) {
  LoadedMatrix in = load(file);
  KernelSplit ks = kernel_split(in.m);
  LatticeInvariants sturm = signature_via_sturm(to_rational(in.m));
  LatticeInvariants gso = signature_via_gso(in.m);
  Rat absdet = abs(gso.nondeg_det);
  std::string root = "n/a";
  if (ks.rank > 0) {
    // Decimal l-th root by bisection on a fixed-point grid.
    const Int scale = 1000000;
    Int lo = 0, hi = 1;
    while (pow(Rat(hi), static_cast<unsigned long>(ks.rank)) <= absdet) hi *= 2;
    hi *= scale;
    while (hi - lo > 1) {
      Int mid = (lo + hi) / 2;
      if (pow(Rat(mid) / Rat(scale), static_cast<unsigned long>(ks.rank)) <= absdet) lo = mid;
      else hi = mid;
    }
    root = to_decimal(Rat(lo) / Rat(scale), 6);
  }
  const IntMatrix kernel = ks.U.rightCols(in.m.rows() - ks.rank);
  if (report == "structured") {
    json kv = json::array();
    for (Index c = 0; c < kernel.cols(); ++c) {
      json v = json::array();
      for (Index i = 0; i < kernel.rows(); ++i) v.push_back(kernel(i, c).get_str());
      kv.push_back(v);
    }
    json j{{"input_sha256", in.digest},
           {"dim", in.m.rows()},
           {"rank", ks.rank},
           {"n_plus", sturm.n_plus},
           {"n_minus", sturm.n_minus},
           {"signature", sturm.signature},
           {"gso_signature_agrees", sturm.n_plus == gso.n_plus && sturm.n_minus == gso.n_minus},
           {"nondeg_det", to_string(gso.nondeg_det)},
           {"abs_det_root", root},
           {"kernel_basis", kv}};
    std::cout << j.dump(2) << "\n";
    return kOk;
  }
  std::cout << "input sha256: " << in.digest << "\n";
  std::cout << "dim: " << in.m.rows() << "\nrank: " << ks.rank << "\n";
  std::cout << "n+: " << sturm.n_plus << "\nn-: " << sturm.n_minus << "\nsignature: " << sturm.signature << "\n";
  std::cout << "gso count agrees with sturm: "
            << (sturm.n_plus == gso.n_plus && sturm.n_minus == gso.n_minus ? "yes" : "no") << "\n";
  std::cout << "det_nonzero: " << gso.nondeg_det << "\n";
  std::cout << "|det_nonzero|^(1/" << ks.rank << "): " << root << "\n";
  std::cout << "kernel dimension: " << kernel.cols() << "\n";
  for (Index c = 0; c < kernel.cols(); ++c) {
    std::cout << "kernel vector:";
    for (Index i = 0; i < kernel.rows(); ++i) std::cout << " " << kernel(i, c);
    std::cout << "\n";
  }
  return kOk;
}

int cmd_compare(const std::string& file, const ReduceFlags& flags, const std::string& report) {
  LoadedMatrix in = load(file);
  ReducerParams p = flags.params();
  ReducerParams nosign = p, sign = p;
  nosign.sign_strategy = false;
  sign.sign_strategy = true;
  auto fb = std::async(std::launch::async, run_reducer, "baseline", std::cref(in.m), p, true);
  auto fn = std::async(std::launch::async, run_reducer, "no-sign", std::cref(in.m), nosign, false);
  auto fs = std::async(std::launch::async, run_reducer, "sign", std::cref(in.m), sign, false);
  std::vector<RunReport> runs{fb.get(), fn.get(), fs.get()};
  std::vector<ReducerParams> ps{p, nosign, sign};
  if (report == "structured") {
    json arr = json::array();
    for (std::size_t i = 0; i < runs.size(); ++i) arr.push_back(report_json(runs[i], in.digest, ps[i]));
    std::cout << json{{"input_sha256", in.digest}, {"runs", arr}}.dump(2) << "\n";
    return kOk;
  }
  std::cout << "input sha256: " << in.digest << "\n";
  std::cout << std::left << std::setw(10) << "run" << std::setw(14) << "first" << std::setw(8) << "|x|=1"
            << std::setw(8) << "sumN" << std::setw(12) << "s(s-1)/2" << std::setw(10) << "bound" << "time(s)\n";
  for (const RunReport& r : runs) {
    std::cout << std::setw(10) << r.label;
    if (!r.ok) {
      std::cout << r.failure << "\n";
      continue;
    }
    std::string first = r.result.rank == 0 ? "-"
                        : r.result.first_is_hyperbolic() ? "h:" + r.result.reduced_gram(0, 1).get_str()
                                                         : r.result.reduced_gram(0, 0).get_str();
    std::cout << std::setw(14) << first << std::setw(8) << r.unit_diagonal << std::setw(8) << r.bound.sum_N
              << std::setw(12) << to_string(sigma_reference(r.sig.signature)) << std::setw(10)
              << (r.bound.theorem_ok ? "pass" : "FAIL") << std::fixed << std::setprecision(3) << r.seconds << "\n";
    std::cout.unsetf(std::ios::fixed);
  }
  return kOk;
}

int cmd_verify(const std::string& gram_file, const std::string& u_file, const std::string& reduced_file,
               const std::string& gamma0) {
  IntMatrix G = load(gram_file).m;
  IntMatrix U = load(u_file, false).m;
  IntMatrix R = load(reduced_file).m;
  ReducerParams p;
  p.gamma0 = parse_gamma(gamma0);
  if (G.rows() != U.rows() || G.rows() != R.rows()) throw InputError("dimensions of the three matrices differ");

  std::vector<std::pair<std::string, bool>> checks;
  Int det = determinant(U);
  checks.emplace_back("unimodular", det == 1 || det == -1);
  checks.emplace_back("congruence", congruence(G, U) == R);
  Index rank = kernel_split(R).rank;
  bool tail = true;
  for (Index i = rank; i < R.rows(); ++i)
    for (Index j = 0; j < R.cols(); ++j) tail = tail && R(i, j) == 0 && R(j, i) == 0;
  checks.emplace_back("tail orthogonality", tail);
  bool blocks = false, bound = false;
  try {
    ReductionResult r = describe_reduced(U, R);
    blocks = true;
    for (const BlockCheck& c : check_blocks(r, p)) blocks = blocks && c.settled;
    if (checks[0].second && checks[1].second) bound = verify_theorem_bound(r, G, p.gamma0).theorem_ok;
  } catch (const std::invalid_argument&) {
  }
  checks.emplace_back("reduced blocks", blocks);
  checks.emplace_back("theorem bound", bound);
  bool all = true;
  for (auto& [name, ok] : checks) {
    std::cout << name << ": " << (ok ? "pass" : "FAIL") << "\n";
    all = all && ok;
  }
  return all ? kOk : kVerifyFailed;
}

int cmd_gen(const std::string& kind, const GenSpec& base, Index copies, const std::vector<std::string>& alphas,
            const std::string& out, const std::string& format) {
  GenSpec spec = base;
  spec.kind = parse_gen_kind(kind);
  for (const auto& a : alphas) spec.alphas.push_back(parse_int(a));
  if (spec.kind == GenKind::HyperbolicStack) {
    spec.blocks = copies > 0 ? copies : std::max<Index>(1, static_cast<Index>(spec.alphas.size()));
    if (spec.alphas.size() == 1) spec.alphas.assign(static_cast<std::size_t>(spec.blocks), spec.alphas.front());
  }
  emit(out, print_matrix(generate(spec), parse_format(format)));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact indefinite LLL reduction of integral Gram matrices"};
  app.require_subcommand(1);

  std::string report = default_report_format();
  std::string format = "text";

  auto* qform = app.add_subcommand("qform", "Binary quadratic form tools");
  auto* qreduce = qform->add_subcommand("reduce", "Reduce a*x^2 + b*x*y + c*y^2 and print the trajectory");
  qform->require_subcommand(1);
  std::vector<std::string> coeffs;
  std::size_t q_extra = 4;
  qreduce->add_option("coeffs", coeffs, "a b c (integers or p/q)")->expected(3)->required()->allow_extra_args(false);
  qreduce->add_option("--max-extra", q_extra, "Cycle steps after the first reduced form")->capture_default_str();

  auto* reduce_cmd = app.add_subcommand("reduce", "Reduce a Gram matrix");
  std::string file, out, u_out;
  ReduceFlags flags;
  reduce_cmd->add_option("file", file, "Matrix file ('-' for stdin)")->required();
  flags.add_to(reduce_cmd);
  reduce_cmd->add_option("--out", out, "Write the reduced Gram matrix here");
  reduce_cmd->add_option("--emit-unimodular", u_out, "Write the transform U here");
  reduce_cmd->add_option("--report", report, "Report style")->check(CLI::IsMember({"text", "structured"}));
  reduce_cmd->add_option("--format", format, "Output matrix format")->check(CLI::IsMember({"text", "json"}));

  auto* analyze_cmd = app.add_subcommand("analyze", "Rank, signature, determinant and kernel");
  analyze_cmd->add_option("file", file, "Matrix file")->required();
  analyze_cmd->add_option("--report", report, "Report style")->check(CLI::IsMember({"text", "structured"}));

  auto* compare_cmd = app.add_subcommand("compare", "Baseline, no-sign and sign runs side by side");
  compare_cmd->add_option("file", file, "Matrix file")->required();
  ReduceFlags cflags;
  cflags.add_to(compare_cmd);
  compare_cmd->add_option("--report", report, "Report style")->check(CLI::IsMember({"text", "structured"}));

  auto* gen_cmd = app.add_subcommand("gen", "Generate instances");
  std::string kind;
  GenSpec spec;
  std::string bound = "100";
  std::vector<std::string> alphas;
  gen_cmd->add_option("--kind", kind, "worstcase|random|hyperbolic-stack|large-signature|random-unimodular")->required();
  gen_cmd->add_option("--d", spec.blocks, "Half dimension of the worst case");
  Index copies = 0;
  gen_cmd->add_option("--n", copies, "Copies in a hyperbolic stack");
  gen_cmd->add_option("--dim", spec.dim, "Dimension");
  gen_cmd->add_option("--bound", bound, "Entry bound");
  gen_cmd->add_option("--seed", spec.seed, "PRNG seed");
  gen_cmd->add_option("--steps", spec.steps, "Random unimodular steps (default 3*dim)");
  gen_cmd->add_option("--alpha", alphas, "Plane parameters for hyperbolic stacks");
  gen_cmd->add_option("--out", out, "Output file (default stdout)");
  gen_cmd->add_option("--format", format, "Matrix format")->check(CLI::IsMember({"text", "json"}));

  auto* verify_cmd = app.add_subcommand("verify", "Check a reduction certificate");
  std::string gram_file, u_file, reduced_file, vgamma = "99/100";
  verify_cmd->add_option("gram", gram_file, "Input Gram matrix")->required();
  verify_cmd->add_option("unimodular", u_file, "Transform U")->required();
  verify_cmd->add_option("reduced", reduced_file, "Reduced Gram matrix")->required();
  verify_cmd->add_option("--gamma0", vgamma, "Parameter used for the reduction")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*qform) return cmd_qform(coeffs, q_extra);
    if (*reduce_cmd) return cmd_reduce(file, flags, out, u_out, report, format);
    if (*analyze_cmd) return cmd_analyze(file, report);
    if (*compare_cmd) return cmd_compare(file, cflags, report);
    if (*gen_cmd) {
      try {
        spec.bound = parse_int(bound);
      } catch (const std::invalid_argument&) {
        throw InputError("--bound expects an integer");
      }
      return cmd_gen(kind, spec, copies, alphas, out, format);
    }
    if (*verify_cmd) return cmd_verify(gram_file, u_file, reduced_file, vgamma);
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const ReducerError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kInternal;
}
