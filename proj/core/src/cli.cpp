#include "frameforge/cli.hpp"

#include <cctype>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "frameforge/analyzer.hpp"
#include "frameforge/constructors.hpp"
#include "frameforge/report.hpp"
#include "frameforge/truncation.hpp"

namespace frameforge {

namespace {

struct Common {
  double tol_rank = 1e-10;
  double tol_cert = 1e-8;
  std::uint64_t seed = kDefaultSeed;
  std::uint64_t budget = kDefaultSubsetBudget;
  std::string out_path;
  std::string format = "text";
  bool timings = false;
};

void attach_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--tol-rank", c.tol_rank, "relative rank cutoff");
  cmd->add_option("--tol-cert", c.tol_cert, "absolute certificate tolerance");
  cmd->add_option("--seed", c.seed,
                  "rng seed (default: FRAMEFORGE_SEED, then 1)");
  cmd->add_option("--budget", c.budget, "partition/subset work budget");
  cmd->add_option("--out", c.out_path, "write the result to this file");
  cmd->add_option("--format", c.format, "output format")
      ->check(CLI::IsMember({"text", "report"}));
  cmd->add_flag("--timings", c.timings, "append timings (text format only)");
}

Tolerance tolerance_of(const Common& c) {
  Tolerance tol;
  tol.rank_rel = c.tol_rank;
  tol.cert_abs = c.tol_cert;
  tol.validate();
  return tol;
}

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    return buf.str();
  }
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read input file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void emit(const std::string& text, const Common& c, std::ostream& out) {
  if (c.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(c.out_path);
  if (!f) throw UsageError("cannot open output file " + c.out_path);
  f << text;
}

std::string render(const Report& r, const Common& c) {
  return c.format == "report"
             ? render_report(r, ReportFormat::Canonical)
             : render_report(r, ReportFormat::Text, c.timings);
}

std::string partition_text(const PartitionWitness& w) {
  return "I=" + format_indices(w.subset_I) +
         " rank-I=" + std::to_string(w.rank_I) +
         " rank-Ic=" + std::to_string(w.rank_Ic);
}

std::string certificate_text(const PairCertificate& c) {
  return "kind=" + to_string(c.kind) + " x=" + format_vector(c.x) +
         " y=" + format_vector(c.y);
}

std::vector<int> zero_indices(const Frame& f) {
  std::vector<int> zs;
  for (int i = 1; i <= f.count(); ++i) {
    if (f.vectors[static_cast<std::size_t>(i - 1)].norm() == 0.0) zs.push_back(i);
  }
  return zs;
}

void add_shared_config(Report& rep, const Common& c) {
  rep.add_config("tol-rank", format_double(c.tol_rank));
  rep.add_config("tol-cert", format_double(c.tol_cert));
  rep.add_config("seed", std::to_string(c.seed));
  rep.add_config("budget", std::to_string(c.budget));
}

Vector parse_vector_literal(const std::string& text) {
  std::vector<double> vals;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      vals.push_back(std::stod(item, &used));
      while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("vector literals are comma-separated numbers, got '" +
                       item + "'");
    }
  }
  if (vals.empty()) throw UsageError("empty vector literal");
  Vector v(static_cast<Eigen::Index>(vals.size()));
  for (std::size_t i = 0; i < vals.size(); ++i) v(static_cast<Eigen::Index>(i)) = vals[i];
  return v;
}

std::vector<std::pair<int, int>> parse_levels(const std::string& text) {
  std::vector<std::pair<int, int>> out;
  std::istringstream in(text);
  std::string piece;
  while (std::getline(in, piece, ',')) {
    const auto colon = piece.find(':');
    try {
      if (colon == std::string::npos) throw std::invalid_argument(piece);
      out.emplace_back(std::stoi(piece.substr(0, colon)),
                       std::stoi(piece.substr(colon + 1)));
    } catch (const std::exception&) {
      throw UsageError("levels look like <N>:<K>[,<N>:<K>...], got '" + piece +
                       "'");
    }
  }
  if (out.empty()) throw UsageError("empty level list");
  return out;
}

class StageTimer {
 public:
  explicit StageTimer(Report& rep) : rep_(rep) {}

  template <typename Fn>
  auto run(const std::string& key, Fn&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    auto result = fn();
    const auto t1 = std::chrono::steady_clock::now();
    const double ms =
        std::chrono::duration<double, std::milli>(t1 - t0).count();
    rep_.add_timing(key, format_double(ms) + " ms");
    return result;
  }

 private:
  Report& rep_;
};

int cmd_analyze(const std::string& path, const Common& c, std::ostream& out) {
  const Tolerance tol = tolerance_of(c);
  Frame f = parse_frame(read_input(path));

  Report rep;
  rep.add_config("command", "analyze");
  rep.add_config("input", path);
  rep.add_config("n", std::to_string(f.dim));
  rep.add_config("m", std::to_string(f.count()));
  rep.add_config("zero-vectors", format_indices(zero_indices(f)));
  add_shared_config(rep, c);

  StageTimer timer(rep);
  const SparkResult sp =
      timer.run("spark", [&] { return spark(f, tol, c.budget); });
  const CpResult cp =
      timer.run("cp", [&] { return complement_property(f, tol, c.budget); });
  const PrResult pr =
      timer.run("pr", [&] { return phase_retrieval(f, tol, c.budget); });
  const NrResult nr =
      timer.run("nr", [&] { return norm_retrieval(f, tol, c.budget); });
  const OcpResult ocp =
      timer.run("ocp", [&] { return overcomplete_cp(f, tol, c.budget); });

  rep.add_verdict("spark", std::to_string(sp.spark));
  rep.add_verdict("cp", to_string(cp.verdict));
  rep.add_verdict("pr", to_string(pr.verdict));
  rep.add_verdict("nr", to_string(nr.verdict));
  rep.add_verdict("ocp", to_string(ocp.verdict));
  try {
    const LiftingNumber ln = timer.run(
        "lifting-number", [&] { return lifting_number(f, tol, c.budget); });
    rep.add_verdict("lifting-number", std::to_string(ln.value));
    rep.add_witness("lifting-subset", format_indices(ln.witness_subset));
  } catch (const NotSpanning&) {
    rep.add_verdict("lifting-number", "undefined (frame does not span)");
  }

  if (sp.witness) rep.add_witness("spark-witness", format_indices(*sp.witness));
  if (cp.witness) rep.add_witness("cp-witness", partition_text(*cp.witness));
  if (pr.witness) rep.add_witness("pr-witness", partition_text(*pr.witness));
  if (pr.certificate) {
    rep.add_witness("pr-certificate", certificate_text(*pr.certificate));
  }
  if (nr.witness) rep.add_witness("nr-witness", partition_text(*nr.witness));
  if (nr.certificate) {
    rep.add_witness("nr-certificate", certificate_text(*nr.certificate));
  }
  rep.add_witness("nr-worst-cross-gram", format_double(nr.worst_cross_gram));
  if (ocp.witness) rep.add_witness("ocp-witness", partition_text(*ocp.witness));

  emit(render(rep, c), c, out);
  return 0;
}

int cmd_certify(const std::string& path, const std::string& x_text,
                const std::string& y_text, const Common& c, std::ostream& out) {
  const Tolerance tol = tolerance_of(c);
  Frame f = parse_frame(read_input(path));
  PairCertificate cert;
  cert.kind = PairCertificate::Kind::PrCounterexample;
  cert.x = parse_vector_literal(x_text);
  cert.y = parse_vector_literal(y_text);
  const bool ok = certify_counterexample(f, cert, tol);

  Report rep;
  rep.add_config("command", "certify");
  rep.add_config("input", path);
  rep.add_config("x", format_vector(cert.x));
  rep.add_config("y", format_vector(cert.y));
  add_shared_config(rep, c);
  rep.add_verdict("certify", ok ? "ACCEPT" : "REJECT");
  emit(render(rep, c), c, out);
  return 0;
}

int cmd_delete_test(const std::string& path, int index, const Common& c,
                    std::ostream& out) {
  const Tolerance tol = tolerance_of(c);
  Frame f = parse_frame(read_input(path));
  const DeletionResult res = deletion_test(f, index, tol, c.budget);

  Report rep;
  rep.add_config("command", "delete-test");
  rep.add_config("input", path);
  rep.add_config("index", std::to_string(index));
  rep.add_config("label", f.label(index));
  add_shared_config(rep, c);
  rep.add_verdict("pr", to_string(res.pr.verdict));
  if (res.pr.witness) {
    rep.add_witness("pr-witness", partition_text(*res.pr.witness));
  }
  if (res.pr.certificate) {
    rep.add_witness("pr-certificate", certificate_text(*res.pr.certificate));
  }
  if (res.analytic_certificate) {
    rep.add_witness("analytic-certificate",
                    certificate_text(*res.analytic_certificate));
    rep.add_verdict("analytic-accepted",
                    *res.analytic_accepted ? "ACCEPT" : "REJECT");
  }
  emit(render(rep, c), c, out);
  return 0;
}

int cmd_lift(const std::string& path, int k, const Common& c,
             std::ostream& out) {
  const Tolerance tol = tolerance_of(c);
  Frame f = parse_frame(read_input(path));
  const LiftResult res = lift(f, k, c.seed, tol, c.budget);
  std::ostringstream text;
  text << "# lift k=" << k << " attempts=" << res.attempts << " convention="
       << LiftResult::kConvention << "\n"
       << serialize_frame(res.lifted);
  emit(text.str(), c, out);
  return 0;
}

int cmd_verify_seq(const std::string& header, const std::string& levels_text,
                   int max_level, const std::string& claim_text,
                   const Common& c, std::ostream& out) {
  const Tolerance tol = tolerance_of(c);
  const SequenceFamily s = sequence_from_header(header, tol);
  const std::vector<std::pair<int, int>> levels =
      levels_text == "default" ? default_levels(s, max_level)
                               : parse_levels(levels_text);
  const L2Claim claim = claim_from_string(claim_text);
  const std::vector<LevelReport> reports =
      verify_levels(s, levels, claim, tol, c.budget);

  Report rep;
  rep.add_config("command", "verify-seq");
  rep.add_config("header", s.header());
  rep.add_config("claim", to_string(claim));
  add_shared_config(rep, c);
  int divergences = 0;
  for (const LevelReport& r : reports) {
    const std::string key = "level " + std::to_string(r.level_n);
    std::ostringstream line;
    line << "K=" << r.count_k << " cp=" << to_string(r.cp)
         << " pr=" << to_string(r.pr) << " nr=" << to_string(r.nr)
         << " zero-vectors=" << format_indices(r.zero_vectors);
    rep.add_level(key, line.str());
    if (r.cp_witness) {
      rep.add_witness(key + " cp-witness", partition_text(*r.cp_witness));
    }
    if (r.pr_certificate) {
      rep.add_witness(key + " pr-certificate",
                      certificate_text(*r.pr_certificate));
    }
    if (r.nr_certificate) {
      rep.add_witness(key + " nr-certificate",
                      certificate_text(*r.nr_certificate));
    }
    if (!r.divergence_note.empty()) {
      rep.add_level(key + " note", r.divergence_note);
      ++divergences;
    }
  }
  rep.add_verdict("levels-run", std::to_string(reports.size()));
  rep.add_verdict("divergences", std::to_string(divergences));
  emit(render(rep, c), c, out);
  return 0;
}

struct ConstructArgs {
  std::string kind;
  int n = 0;
  int m = 0;
  int levels = 0;
  int j = 0;
  int k_max = 0;
  int window = 4;
  bool near_basis = false;
  std::string dims;
  std::string part;
};

int cmd_construct(const ConstructArgs& a, const Common& c, std::ostream& out) {
  const Tolerance tol = tolerance_of(c);
  auto need = [](bool ok, const std::string& what) {
    if (!ok) throw UsageError("construct: " + what);
  };
  if (a.kind == "full-spark") {
    need(a.n >= 1 && a.m >= 1, "full-spark needs --n and --m");
    emit(serialize_frame(full_spark_frame(a.n, a.m, c.seed, tol)), c, out);
    return 0;
  }
  if (a.kind == "an") {
    need(a.n >= 1, "an needs --n");
    emit(serialize_frame(an_family(a.n, tol, c.seed)), c, out);
    return 0;
  }
  if (a.kind == "pairs") {
    need(a.n >= 2, "pairs needs --n >= 2");
    emit(serialize_frame(pairs_family(a.n)), c, out);
    return 0;
  }
  if (a.kind == "ffs") {
    need(a.m >= 1 && a.k_max >= 1, "ffs needs --m and --k-max");
    emit(serialize_frame(finitely_full_spark(a.m, a.k_max, c.seed, tol,
                                             a.window, a.near_basis)),
         c, out);
    return 0;
  }
  if (a.kind == "three-riesz") {
    need(a.levels >= 1, "three-riesz needs --levels");
    need(a.j >= 1 && a.j <= 3, "three-riesz needs --j in 1..3");
    const auto fams = three_riesz_blocks(a.levels, c.seed, tol);
    emit(fams[static_cast<std::size_t>(a.j - 1)].header() + "\n", c, out);
    return 0;
  }
  if (a.kind == "trap") {
    need(a.levels >= 1, "trap needs --levels");
    need(a.part == "x" || a.part == "y", "trap needs --part x|y");
    const TrapFamilies trap = hyperplane_trap(a.levels, c.seed, tol);
    emit((a.part == "x" ? trap.x : trap.y).header() + "\n", c, out);
    return 0;
  }
  if (a.kind == "nested-union") {
    need(!a.dims.empty(), "nested-union needs --dims <n:m,...>");
    const SequenceFamily s = sequence_from_header(
        "seq kind=nested-union params=dims=" + a.dims +
            " seed=" + std::to_string(c.seed),
        tol);
    emit(s.header() + "\n", c, out);
    return 0;
  }
  throw UsageError("unknown construct kind '" + a.kind + "'");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"deciders and builders for finite-frame phase retrieval",
               "frameforge"};
  app.require_subcommand(1);

  Common c;
  if (const char* env = std::getenv("FRAMEFORGE_SEED")) {
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(env, &used);
      if (used != std::string(env).size()) throw std::invalid_argument(env);
      c.seed = v;
    } catch (const std::exception&) {
      err << "usage error: FRAMEFORGE_SEED is not a nonnegative integer\n";
      return 1;
    }
  }

  std::string analyze_path;
  auto* analyze_cmd = app.add_subcommand("analyze", "all six verdicts of a frame");
  analyze_cmd->add_option("frame", analyze_path, "FRAME v1 file, or - for stdin")
      ->required();
  attach_common(analyze_cmd, c);

  ConstructArgs ca;
  auto* construct_cmd = app.add_subcommand("construct", "build a named family");
  construct_cmd
      ->add_option("kind", ca.kind, "full-spark | an | pairs | three-riesz | "
                                    "nested-union | trap | ffs")
      ->required();
  construct_cmd->add_option("--n", ca.n, "dimension / top coordinate");
  construct_cmd->add_option("--m", ca.m, "vector count");
  construct_cmd->add_option("--levels", ca.levels, "levels to pool");
  construct_cmd->add_option("--j", ca.j, "which of the three Riesz families");
  construct_cmd->add_option("--k-max", ca.k_max, "largest projected subset");
  construct_cmd->add_option("--window", ca.window, "ambient coordinate window");
  construct_cmd->add_flag("--near-basis", ca.near_basis,
                          "perturb the canonical basis instead");
  construct_cmd->add_option("--dims", ca.dims, "nested-union levels <n:m,...>");
  construct_cmd->add_option("--part", ca.part, "trap output: x or y");
  attach_common(construct_cmd, c);

  std::string lift_path;
  int lift_k = 1;
  auto* lift_cmd = app.add_subcommand("lift", "append verified coordinates");
  lift_cmd->add_option("frame", lift_path, "FRAME v1 file, or - for stdin")
      ->required();
  lift_cmd->add_option("--k", lift_k, "how many coordinates to append")
      ->required();
  attach_common(lift_cmd, c);

  std::string seq_header;
  std::string seq_levels = "default";
  std::string seq_claim = "none";
  int seq_max_level = 16;
  auto* verify_cmd =
      app.add_subcommand("verify-seq", "exact verdicts at truncation levels");
  verify_cmd->add_option("header", seq_header, "seq kind=... params=... header")
      ->required();
  verify_cmd->add_option("--levels", seq_levels,
                         "default, or explicit <N>:<K>[,...]");
  verify_cmd->add_option("--max-level", seq_max_level,
                         "cap for the default schedule");
  verify_cmd->add_option("--claim", seq_claim, "declared l2 claim")
      ->check(CLI::IsMember({"pr-holds", "pr-fails", "none"}));
  attach_common(verify_cmd, c);

  std::string certify_path;
  std::string certify_x;
  std::string certify_y;
  auto* certify_cmd =
      app.add_subcommand("certify", "check a counterexample pair");
  certify_cmd->add_option("frame", certify_path, "FRAME v1 file, or - for stdin")
      ->required();
  certify_cmd->add_option("x", certify_x, "comma-separated coordinates")
      ->required();
  certify_cmd->add_option("y", certify_y, "comma-separated coordinates")
      ->required();
  attach_common(certify_cmd, c);

  std::string delete_path;
  int delete_index = 0;
  auto* delete_cmd =
      app.add_subcommand("delete-test", "phase retrieval after one deletion");
  delete_cmd->add_option("frame", delete_path, "FRAME v1 file, or - for stdin")
      ->required();
  delete_cmd->add_option("--index", delete_index, "1-based vector to remove")
      ->required();
  attach_common(delete_cmd, c);

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("frameforge");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "usage error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (*analyze_cmd) return cmd_analyze(analyze_path, c, out);
    if (*construct_cmd) return cmd_construct(ca, c, out);
    if (*lift_cmd) return cmd_lift(lift_path, lift_k, c, out);
    if (*verify_cmd) {
      return cmd_verify_seq(seq_header, seq_levels, seq_max_level, seq_claim, c,
                            out);
    }
    if (*certify_cmd) return cmd_certify(certify_path, certify_x, certify_y, c, out);
    if (*delete_cmd) return cmd_delete_test(delete_path, delete_index, c, out);
    err << "usage error: no subcommand selected\n";
    return 1;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace frameforge
