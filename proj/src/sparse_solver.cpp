#include "sparsebound/sparse_solver.hpp"

#include <algorithm>
#include <istream>
#include <sstream>

namespace sparsebound {

namespace {

// Move `point` by lattice(basis) steps into target_cone + target_shift.
// The step direction is D * r with D = |det(basis)| and r the sum of the
// target cone's basis columns: D * v = basis * (±adj(basis) * v) keeps any
// integer step inside the coset, r is strictly interior to the target, and
// each step raises every target coordinate by exactly D, so the minimal step
// count is a ceiling. The containment is re-checked exactly.
Vec relocate_representative(const Vec& point, const IntegerMatrix& basis,
                            const SimplicialCone& target_cone,
                            const Vec& target_shift) {
  int m = int(point.size());
  Int d = abs(det(basis));
  Vec r(m, Int(0));
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) r[i] += target_cone.basis()(i, j);
  QVec c0 = target_cone.coordinates(vec_sub(point, target_shift));
  Int steps(0);
  for (int j = 0; j < m; ++j) {
    Rat need = -c0[j] / Rat(d);
    Int up;
    mpz_cdiv_q(up.get_mpz_t(), need.get_num().get_mpz_t(),
               need.get_den().get_mpz_t());
    if (up > steps) steps = up;
  }
  Vec out = point;
  Int stride = steps * d;
  for (int i = 0; i < m; ++i) out[i] += stride * r[i];
  if (!target_cone.contains(vec_sub(out, target_shift)))
    throw std::runtime_error("internal: relocation missed the translated cone");
  return out;
}

Vec integral_coords_or_throw(const SimplicialCone& cone, const Vec& x,
                             const char* what) {
  std::optional<Vec> c = cone.integral_coordinates(x);
  if (!c) throw std::runtime_error(std::string("internal: ") + what);
  return *c;
}

// Assemble the certificate coefficient vector for b inside subcone sp:
// expansion of the residue representative plus the leftover cone part.
SparseCertificate assemble(const Plan& plan, const SubconePlan& sp, int sp_index,
                           const Vec& b) {
  GroupElement g = sp.group.residue(b);
  auto it = sp.coset_table.find(g.vec);
  if (it == sp.coset_table.end())
    throw std::runtime_error("internal: residue of a lattice point missing from coset table");
  const CosetEntry& entry = it->second;

  Vec taubar = integral_coords_or_throw(sp.cone, vec_sub(b, g.vec),
                                        "non-integral cone coordinates");
  SparseCertificate cert;
  cert.x = entry.expansion;
  for (int j = 0; j < sp.cone.dim(); ++j) {
    Int coeff = taubar[j] - entry.tau[j];
    if (coeff < 0)
      throw std::runtime_error("internal: negative cone coefficient inside translated cone");
    cert.x[sp.a_cols[j]] += coeff;
  }
  for (int j = 0; j < int(cert.x.size()); ++j)
    if (cert.x[j] != 0) cert.support.push_back(j);
  cert.mode = plan.mode;
  cert.subcone_index = sp_index;
  cert.bound_claimed = plan.mode == BoundMode::I
                           ? unsigned(plan.a.rows()) + sp.phi
                           : 2 * unsigned(plan.a.rows()) + plan.phi_min;
  return cert;
}

}  // namespace

Plan build_plan(const IntegerMatrix& a, BoundMode mode, const Caps& caps) {
  std::vector<int> all(a.cols());
  for (int j = 0; j < a.cols(); ++j) all[j] = j;
  return build_plan(a, all, mode, caps);
}

Plan build_plan(const IntegerMatrix& a, const std::vector<int>& w_cols,
                BoundMode mode, const Caps& caps) {
  int m = a.rows();
  IntegerMatrix w = a.columns(w_cols);
  if (!cone_equal(a, w, caps))
    throw std::invalid_argument("cone(A) differs from cone(W)");

  ConeCover cover = caratheodory_cover(w, caps);

  Plan plan{a, w_cols, mode, Lattice(), 0, 0, {}};
  std::vector<Vec> a_columns;
  for (int j = 0; j < a.cols(); ++j) a_columns.push_back(a.col(j));

  // Stage every subcone with its group, generators and raw coset table.
  for (const SimplicialCone& cone : cover.subcones) {
    ResidueGroup group(cone.basis(), caps);
    if (group.order() > caps.group)
      throw cap_exceeded("plan: subcone group order " + group.order().get_str() +
                         " exceeds cap " + std::to_string(caps.group));
    unsigned phi = omega(group.order(), caps.factor_ceiling);
    SubconePlan sp{cone, group, {}, phi, {}, {}, Vec(m, Int(0))};
    for (int j : cone.source_cols()) sp.a_cols.push_back(w_cols[j]);
    sp.generator_cols = group.select_generators(a_columns);
    plan.subcones.push_back(std::move(sp));
  }

  plan.phi_max = plan.phi_min = plan.subcones[0].phi;
  for (const SubconePlan& sp : plan.subcones) {
    plan.phi_max = std::max(plan.phi_max, sp.phi);
    plan.phi_min = std::min(plan.phi_min, sp.phi);
  }
  if (mode == BoundMode::II)
    std::stable_sort(plan.subcones.begin(), plan.subcones.end(),
                     [](const SubconePlan& x, const SubconePlan& y) {
                       return x.phi < y.phi;
                     });

  // Fill coset tables, the shared lattice, and the shifts. The first pass
  // treats every subcone independently; a representative x_g is the plain
  // nonnegative generator combination reaching g.
  std::optional<Lattice> lambda;
  for (SubconePlan& sp : plan.subcones) {
    std::vector<Vec> gens;
    for (std::size_t gi : sp.generator_cols) gens.push_back(a_columns[gi]);
    auto reach = sp.group.nonneg_reach(gens);

    std::vector<Vec> lattice_gens;
    for (const auto& [lift, p] : reach) lattice_gens.push_back(lift);
    for (int j = 0; j < m; ++j) lattice_gens.push_back(sp.cone.basis().col(j));
    Lattice li = Lattice::from_columns(lattice_gens, m);
    if (!lambda)
      lambda = li;
    else if (!(li == *lambda))
      throw std::runtime_error("internal: subcone lattices disagree");

    for (const auto& [lift, p] : reach) {
      CosetEntry entry;
      entry.gen_coeffs = p;
      entry.x_g = Vec(m, Int(0));
      for (std::size_t l = 0; l < p.size(); ++l)
        for (int r = 0; r < m; ++r)
          entry.x_g[r] += p[l] * a_columns[sp.generator_cols[l]][r];
      entry.tau = integral_coords_or_throw(sp.cone, vec_sub(entry.x_g, lift),
                                           "representative not congruent to its coset");
      entry.expansion.assign(a.cols(), Int(0));
      for (std::size_t l = 0; l < p.size(); ++l)
        entry.expansion[sp.generator_cols[l]] += p[l];
      sp.coset_table.emplace(lift, std::move(entry));
    }
  }
  plan.lambda = *lambda;

  // Shift of the first subcone (and of every subcone in mode I).
  auto compute_shift = [](SubconePlan& sp) {
    std::vector<Vec> reps;
    for (const auto& [lift, entry] : sp.coset_table) reps.push_back(entry.x_g);
    sp.shift = overlap_translate(sp.cone, reps);
  };

  if (mode == BoundMode::I) {
    for (SubconePlan& sp : plan.subcones) compute_shift(sp);
    return plan;
  }

  // Mode II: plan the minimum-phi subcone as in mode I, then relocate every
  // other representative into its translated cone and expand it there, so
  // each later certificate costs at most the base certificate plus one cone.
  SubconePlan& base = plan.subcones[0];
  compute_shift(base);
  for (std::size_t i = 1; i < plan.subcones.size(); ++i) {
    SubconePlan& sp = plan.subcones[i];
    for (auto& [lift, entry] : sp.coset_table) {
      entry.x_g = relocate_representative(lift, sp.cone.basis(), base.cone,
                                          base.shift);
      entry.tau = integral_coords_or_throw(sp.cone, vec_sub(entry.x_g, lift),
                                           "relocated representative left its coset");
      SparseCertificate through_base = assemble(plan, base, 0, entry.x_g);
      entry.expansion = through_base.x;
      entry.gen_coeffs.clear();
    }
    compute_shift(sp);
  }
  return plan;
}

SolveOutcome solve_sparse(const Plan& plan, const Vec& b) {
  if (int(b.size()) != plan.a.rows())
    throw std::invalid_argument("solve: dimension mismatch");
  if (!plan.lambda.contains(b)) return {SolveStatus::Infeasible, std::nullopt};
  for (std::size_t i = 0; i < plan.subcones.size(); ++i) {
    const SubconePlan& sp = plan.subcones[i];
    if (!sp.cone.contains(vec_sub(b, sp.shift))) continue;
    return {SolveStatus::Certificate, assemble(plan, sp, int(i), b)};
  }
  return {SolveStatus::Uncovered, std::nullopt};
}

bool verify_certificate(const IntegerMatrix& a, const Vec& b,
                        const SparseCertificate& cert) {
  if (int(cert.x.size()) != a.cols() || int(b.size()) != a.rows()) return false;
  Vec ax(a.rows(), Int(0));
  std::vector<int> support;
  for (int j = 0; j < a.cols(); ++j) {
    if (cert.x[j] < 0) return false;
    if (cert.x[j] == 0) continue;
    support.push_back(j);
    for (int i = 0; i < a.rows(); ++i) ax[i] += a(i, j) * cert.x[j];
  }
  if (ax != b) return false;
  if (support != cert.support) return false;
  return support.size() <= cert.bound_claimed;
}

long ceil_log2(const Int& x) {
  if (x < 1) throw std::invalid_argument("ceil_log2: argument must be positive");
  std::size_t bits = mpz_sizeinbase(x.get_mpz_t(), 2);
  // 2^(bits-1) <= x < 2^bits; exact powers land on the lower end.
  Int pow2;
  mpz_ui_pow_ui(pow2.get_mpz_t(), 2, unsigned(bits - 1));
  return pow2 == x ? long(bits - 1) : long(bits);
}

namespace {

// Smallest k >= 0 with 4^k >= q, i.e. the ceiling of log2(sqrt(q)).
long ceil_half_log2(const Int& num) {
  long k = 0;
  Int pow(1);
  while (pow < num) {
    pow *= 4;
    ++k;
  }
  return k;
}

}  // namespace

SupportBoundsReport support_bounds(const MinorStats& stats, int m) {
  SupportBoundsReport r;
  r.m = m;
  r.phi_max = stats.phi_max;
  r.phi_min = stats.phi_min;
  r.delta_max = stats.delta_max;
  r.delta_min = stats.delta_min;
  r.minor_gcd = stats.minor_gcd;
  r.gram_det = stats.gram_det;
  r.mode_i_bound = unsigned(m) + stats.phi_max;
  r.mode_ii_bound = 2 * unsigned(m) + stats.phi_min;
  r.log2_delta_max_ceil = long(m) + ceil_log2(stats.delta_max);
  r.log2_delta_min_ceil = 2L * m + ceil_log2(stats.delta_min);
  // The gcd divides every minor, so these quotients are exact integers.
  Int g2 = stats.minor_gcd * stats.minor_gcd;
  Int gram_over_g2;
  mpz_divexact(gram_over_g2.get_mpz_t(), stats.gram_det.get_mpz_t(), g2.get_mpz_t());
  r.det_bound = long(m) + ceil_half_log2(gram_over_g2);
  Int dmax_over_g, dmin_over_g;
  mpz_divexact(dmax_over_g.get_mpz_t(), stats.delta_max.get_mpz_t(),
               stats.minor_gcd.get_mpz_t());
  mpz_divexact(dmin_over_g.get_mpz_t(), stats.delta_min.get_mpz_t(),
               stats.minor_gcd.get_mpz_t());
  r.g_adjusted_i = long(m) + ceil_log2(dmax_over_g);
  r.g_adjusted_ii = 2L * m + ceil_log2(dmin_over_g);
  return r;
}

std::string format_certificate(const Vec& b, const SparseCertificate& cert) {
  std::ostringstream out;
  out << "certificate\n";
  out << "b " << to_string(b) << '\n';
  out << "x";
  for (int j : cert.support) out << ' ' << j << ':' << cert.x[j].get_str();
  out << '\n';
  out << "support " << cert.support.size() << '\n';
  out << "bound " << cert.bound_claimed << '\n';
  out << "mode " << (cert.mode == BoundMode::I ? "i" : "ii") << '\n';
  out << "subcone " << cert.subcone_index << '\n';
  out << "end\n";
  return out.str();
}

ParsedCertificate parse_certificate(std::istream& in) {
  ParsedCertificate pc;
  std::string line;
  bool seen_header = false, seen_end = false;
  std::size_t n_cols = 0;
  std::vector<std::pair<long, Int>> entries;
  long support_count = -1;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::string key;
    if (!(ss >> key)) continue;
    if (key[0] == '#') continue;
    if (key == "certificate") {
      seen_header = true;
    } else if (key == "b") {
      std::string tok;
      while (ss >> tok) pc.b.emplace_back(tok);
    } else if (key == "x") {
      std::string tok;
      while (ss >> tok) {
        auto colon = tok.find(':');
        if (colon == std::string::npos)
          throw std::invalid_argument("certificate: malformed x entry '" + tok + "'");
        long idx = std::stol(tok.substr(0, colon));
        entries.emplace_back(idx, Int(tok.substr(colon + 1)));
        n_cols = std::max(n_cols, std::size_t(idx) + 1);
      }
    } else if (key == "support") {
      ss >> support_count;
    } else if (key == "bound") {
      long v;
      ss >> v;
      pc.cert.bound_claimed = unsigned(v);
    } else if (key == "mode") {
      std::string v;
      ss >> v;
      pc.cert.mode = v == "ii" ? BoundMode::II : BoundMode::I;
    } else if (key == "subcone") {
      ss >> pc.cert.subcone_index;
    } else if (key == "end") {
      seen_end = true;
      break;
    } else {
      throw std::invalid_argument("certificate: unknown record key '" + key + "'");
    }
  }
  if (!seen_header || !seen_end)
    throw std::invalid_argument("certificate: missing 'certificate' or 'end' line");
  pc.cert.x.assign(n_cols, Int(0));
  for (const auto& [idx, v] : entries) {
    pc.cert.x[idx] = v;
    pc.cert.support.push_back(int(idx));
  }
  std::sort(pc.cert.support.begin(), pc.cert.support.end());
  if (support_count >= 0 && support_count != long(pc.cert.support.size()))
    throw std::invalid_argument("certificate: support count disagrees with x entries");
  return pc;
}

}  // namespace sparsebound
