#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "sparsebound/asymptotics.hpp"
#include "sparsebound/exact_linalg.hpp"
#include "sparsebound/oracle.hpp"
#include "sparsebound/sparse_solver.hpp"

namespace sb = sparsebound;

namespace {

constexpr int kExitCertificate = 0;
constexpr int kExitInfeasible = 1;
constexpr int kExitUncovered = 2;
constexpr int kExitError = 3;

struct CommonOpts {
  std::string matrix_path;
  std::string mode = "i";
  std::string out;
  std::string format = "csv";
  std::string b_text;
  std::string t_schedule_text;
  std::string k_list_text;
  std::string epsilon_text = "1/100";
  std::uint64_t seed = 0;
  long long sample_size = 100'000;
  sb::Caps caps;
};

sb::Vec parse_int_list(const std::string& text) {
  sb::Vec out;
  std::string tok;
  std::istringstream ss(text);
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) out.emplace_back(tok);
  return out;
}

std::vector<long long> parse_ll_list(const std::string& text) {
  std::vector<long long> out;
  for (const sb::Int& v : parse_int_list(text)) out.push_back(v.get_si());
  return out;
}

// Exact rational epsilon: either "p/q" or a decimal string.
sb::Rat parse_epsilon(const std::string& text) {
  auto slash = text.find('/');
  if (slash != std::string::npos)
    return sb::make_rat(sb::Int(text.substr(0, slash)),
                        sb::Int(text.substr(slash + 1)));
  auto dot = text.find('.');
  if (dot == std::string::npos) return sb::Rat(sb::Int(text));
  std::string digits = text.substr(0, dot) + text.substr(dot + 1);
  sb::Int den = 1;
  for (std::size_t i = dot + 1; i < text.size(); ++i) den *= 10;
  return sb::make_rat(sb::Int(digits), den);
}

sb::BoundMode mode_of(const std::string& text) {
  if (text == "i") return sb::BoundMode::I;
  if (text == "ii") return sb::BoundMode::II;
  throw std::invalid_argument("mode must be 'i' or 'ii'");
}

// Plans are reused across right-hand sides; key them by a content hash of the
// matrix file plus the mode.
std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

const sb::Plan& cached_plan(const std::string& matrix_path, sb::BoundMode mode,
                            const sb::Caps& caps) {
  static std::map<std::uint64_t, sb::Plan> cache;
  std::ifstream in(matrix_path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open matrix file: " + matrix_path);
  std::stringstream buf;
  buf << in.rdbuf();
  std::uint64_t key = fnv1a(buf.str() + (mode == sb::BoundMode::I ? "#i" : "#ii"));
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  buf.clear();
  buf.seekg(0);
  sb::IntegerMatrix a = sb::parse_matrix(buf);
  return cache.emplace(key, sb::build_plan(a, mode, caps)).first->second;
}

// Output goes to a temporary file first so failures never leave partial data.
void write_atomic(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

std::string config_echo(const std::string& command, const CommonOpts& o) {
  std::ostringstream s;
  s << "# config command=" << command;
  if (!o.matrix_path.empty()) s << " matrix=" << o.matrix_path;
  s << " mode=" << o.mode;
  if (!o.b_text.empty()) s << " b=" << o.b_text;
  if (!o.t_schedule_text.empty()) s << " t_schedule=" << o.t_schedule_text;
  if (!o.k_list_text.empty()) s << " k_list=" << o.k_list_text;
  s << " epsilon=" << o.epsilon_text << " seed=" << o.seed
    << " cap_group=" << o.caps.group << " cap_minors=" << o.caps.minors
    << " cap_box=" << o.caps.box << " cap_oracle=" << o.caps.oracle_points
    << '\n';
  return s.str();
}

int cmd_analyze(const CommonOpts& o) {
  sb::IntegerMatrix a = sb::parse_matrix_file(o.matrix_path);
  sb::MinorStats stats = sb::minor_stats(a, o.caps);
  sb::SupportBoundsReport r = sb::support_bounds(stats, a.rows());

  std::ostringstream out;
  out << config_echo("analyze", o);
  out << "m " << a.rows() << "\n";
  out << "n " << a.cols() << "\n";
  out << "delta {";
  bool first = true;
  for (const sb::Int& d : stats.delta_set) {
    if (!first) out << ",";
    out << d.get_str();
    first = false;
  }
  out << "}\n";
  out << "phi {";
  first = true;
  for (unsigned p : stats.phi_set) {
    if (!first) out << ",";
    out << p;
    first = false;
  }
  out << "}\n";
  out << "delta_max " << stats.delta_max.get_str() << "\n";
  out << "delta_min " << stats.delta_min.get_str() << "\n";
  out << "phi_max " << stats.phi_max << "\n";
  out << "phi_min " << stats.phi_min << "\n";
  out << "minor_gcd " << stats.minor_gcd.get_str() << "\n";
  out << "gram_det " << stats.gram_det.get_str() << "\n";
  out << "minor_subsets " << stats.subsets_enumerated << " (cap "
      << o.caps.minors << ")\n";
  out << "bound_mode_i " << r.mode_i_bound << "\n";
  out << "bound_mode_ii " << r.mode_ii_bound << "\n";
  out << "bound_mode_i_log2 " << r.log2_delta_max_ceil << "\n";
  out << "bound_mode_ii_log2 " << r.log2_delta_min_ceil << "\n";
  out << "bound_det " << r.det_bound << "\n";
  out << "bound_g_adjusted_i " << r.g_adjusted_i << " (analysis omitted)\n";
  out << "bound_g_adjusted_ii " << r.g_adjusted_ii << " (analysis omitted)\n";
  out << "note the mode (ii) bound needs only phi_min, available from any "
         "single invertible m x m submatrix\n";
  write_atomic(o.out, out.str());
  return 0;
}

int cmd_solve(const CommonOpts& o) {
  const sb::Plan& plan = cached_plan(o.matrix_path, mode_of(o.mode), o.caps);
  sb::Vec b = parse_int_list(o.b_text);
  sb::SolveOutcome out = sb::solve_sparse(plan, b);
  std::ostringstream text;
  text << config_echo("solve", o);
  switch (out.status) {
    case sb::SolveStatus::Certificate:
      text << sb::format_certificate(b, *out.cert);
      write_atomic(o.out, text.str());
      return kExitCertificate;
    case sb::SolveStatus::Infeasible:
      text << "infeasible\n";
      write_atomic(o.out, text.str());
      return kExitInfeasible;
    default:
      text << "uncovered\n";
      write_atomic(o.out, text.str());
      return kExitUncovered;
  }
}

int cmd_sigma(const CommonOpts& o) {
  sb::IntegerMatrix a = sb::parse_matrix_file(o.matrix_path);
  sb::Vec b = parse_int_list(o.b_text);
  sb::SigmaResult r = sb::sigma_exact(a, b, o.caps);
  std::ostringstream out;
  out << config_echo("sigma", o);
  switch (r.kind) {
    case sb::SigmaResult::Kind::Finite:
      out << "sigma " << r.value << "\n";
      out << "witness " << sb::to_string(*r.witness) << "\n";
      break;
    case sb::SigmaResult::Kind::Infinite:
      out << "sigma infinite\n";
      break;
    default:
      out << "sigma unknown (work cap hit)\n";
      break;
  }
  write_atomic(o.out, out.str());
  return 0;
}

int cmd_sweep(const CommonOpts& o) {
  const sb::Plan& plan = cached_plan(o.matrix_path, mode_of(o.mode), o.caps);
  std::vector<long long> schedule = parse_ll_list(o.t_schedule_text);
  std::vector<unsigned> k_list;
  for (const sb::Int& k : parse_int_list(o.k_list_text))
    k_list.push_back(unsigned(k.get_ui()));
  std::vector<sb::SweepRow> rows =
      sb::density_sweep(plan, schedule, k_list, o.caps, o.seed, o.sample_size);
  sb::SigmaAsyEstimate est = sb::sigma_asy_estimate(rows, parse_epsilon(o.epsilon_text));

  std::ostringstream out;
  out << config_echo("sweep", o);
  out << "# sigma_asy_estimate k_hat="
      << (est.k_hat ? std::to_string(*est.k_hat) : std::string("none"))
      << " (estimate, not a proof)";
  if (!est.non_monotone_k.empty()) {
    out << " non_monotone_k=";
    for (std::size_t i = 0; i < est.non_monotone_k.size(); ++i)
      out << (i ? ";" : "") << est.non_monotone_k[i];
  }
  if (est.any_sampled) out << " sampled=yes";
  if (est.any_unknown) out << " unknown_tallies=yes";
  out << "\n";

  if (o.format == "csv") {
    std::ostringstream csv;
    sb::write_sweep_csv(csv, rows);
    out << csv.str();
  } else {
    for (const sb::SweepRow& row : rows) {
      out << "row t=" << row.t
          << " mode=" << (row.exhaustive ? "exhaustive" : "sampled")
          << " sample_size=" << row.sample_size << " seed=" << row.seed
          << " n_box=" << row.n_box.get_str() << " n_feasible=" << row.n_feasible
          << " n_covered=" << row.n_covered << " n_uncovered=" << row.n_uncovered
          << " n_unknown=" << row.n_unknown;
      for (const auto& [k, cnt] : row.sigma_le)
        out << " sigma_le_" << k << "=" << cnt;
      for (const auto& [k, cnt] : row.cert_le)
        out << " cert_le_" << k << "=" << cnt;
      out << "\n";
    }
  }
  write_atomic(o.out, out.str());
  return 0;
}

int cmd_gen(const CommonOpts& o, const std::string& kind_text, int m, int d,
            const std::string& primes_text) {
  sb::PrimorialKind kind;
  if (kind_text == "atilde")
    kind = sb::PrimorialKind::Atilde;
  else if (kind_text == "a")
    kind = sb::PrimorialKind::A;
  else if (kind_text == "b")
    kind = sb::PrimorialKind::B;
  else
    throw std::invalid_argument("gen kind must be atilde, a or b");
  sb::PrimorialInstance inst =
      sb::gen_primorial(kind, m, d, parse_int_list(primes_text));
  write_atomic(o.out, sb::format_matrix(inst.matrix));
  std::cout << "# kind=" << kind_text << " m=" << inst.m << " d=" << inst.d
            << " delta=" << inst.delta.get_str()
            << " frobenius=" << inst.frobenius.get_str() << "\n";
  return 0;
}

int cmd_verify(const CommonOpts& o, const std::string& cert_path) {
  sb::IntegerMatrix a = sb::parse_matrix_file(o.matrix_path);
  std::ifstream in(cert_path);
  if (!in) throw std::runtime_error("cannot open certificate file: " + cert_path);
  sb::ParsedCertificate pc = sb::parse_certificate(in);
  if (int(pc.cert.x.size()) < a.cols()) pc.cert.x.resize(a.cols(), sb::Int(0));
  bool ok = sb::verify_certificate(a, pc.b, pc.cert);
  std::cout << (ok ? "verify pass\n" : "verify fail\n");
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact sparsity analysis for integer programs in standard form"};
  app.require_subcommand(1);
  CommonOpts o;

  auto add_caps = [&](CLI::App* cmd) {
    cmd->add_option("--cap-group", o.caps.group, "residue group size cap");
    cmd->add_option("--cap-minors", o.caps.minors, "minor enumeration cap");
    cmd->add_option("--cap-box", o.caps.box, "exhaustive box cap");
    cmd->add_option("--cap-oracle", o.caps.oracle_points,
                    "oracle kernel point cap");
  };

  CLI::App* analyze = app.add_subcommand("analyze", "minor statistics and support bounds");
  analyze->add_option("--matrix", o.matrix_path)->required();
  analyze->add_option("--out", o.out);
  add_caps(analyze);

  CLI::App* solve = app.add_subcommand("solve", "certified sparse solution for one right-hand side");
  solve->add_option("--matrix", o.matrix_path)->required();
  solve->add_option("--b", o.b_text)->required();
  solve->add_option("--mode", o.mode)->check(CLI::IsMember({"i", "ii"}));
  solve->add_option("--out", o.out);
  add_caps(solve);

  CLI::App* sigma = app.add_subcommand("sigma", "exact minimum support by exhaustive search");
  sigma->add_option("--matrix", o.matrix_path)->required();
  sigma->add_option("--b", o.b_text)->required();
  sigma->add_option("--out", o.out);
  add_caps(sigma);

  CLI::App* sweep = app.add_subcommand("sweep", "density sweep over right-hand-side boxes");
  sweep->add_option("--matrix", o.matrix_path)->required();
  sweep->add_option("--t-schedule", o.t_schedule_text)->required();
  sweep->add_option("--k-list", o.k_list_text)->required();
  sweep->add_option("--mode", o.mode)->check(CLI::IsMember({"i", "ii"}));
  sweep->add_option("--epsilon", o.epsilon_text);
  sweep->add_option("--seed", o.seed);
  sweep->add_option("--sample-size", o.sample_size);
  sweep->add_option("--format", o.format)->check(CLI::IsMember({"csv", "records"}));
  sweep->add_option("--out", o.out);
  add_caps(sweep);

  std::string kind_text, primes_text, cert_path;
  int gen_m = 1, gen_d = 1;
  CLI::App* gen = app.add_subcommand("gen", "write a primorial instance matrix");
  gen->add_option("--kind", kind_text)->required()->check(CLI::IsMember({"atilde", "a", "b"}));
  gen->add_option("--m", gen_m);
  gen->add_option("--d", gen_d)->required();
  gen->add_option("--primes", primes_text)->required();
  gen->add_option("--out", o.out);

  CLI::App* verify = app.add_subcommand("verify", "re-check a certificate record");
  verify->add_option("--matrix", o.matrix_path)->required();
  verify->add_option("--certificate", cert_path)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(analyze)) return cmd_analyze(o);
    if (app.got_subcommand(solve)) return cmd_solve(o);
    if (app.got_subcommand(sigma)) return cmd_sigma(o);
    if (app.got_subcommand(sweep)) return cmd_sweep(o);
    if (app.got_subcommand(gen)) return cmd_gen(o, kind_text, gen_m, gen_d, primes_text);
    if (app.got_subcommand(verify)) return cmd_verify(o, cert_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
