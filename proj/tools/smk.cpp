// smk: command-line front end for the Markoff / subgroup / Stepanov library.
//
// Exit codes: 0 success, 1 a mathematical anomaly or failed verification,
// 2 usage or input error.

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "report.hpp"
#include "smk/markoff.hpp"
#include "smk/numth.hpp"
#include "smk/orbit.hpp"
#include "smk/parallel.hpp"
#include "smk/stepanov.hpp"
#include "smk/subgrp.hpp"

using namespace smk;
using smk::cli::json;
using smk::cli::Report;

namespace {

constexpr int kOk = 0;
constexpr int kAnomaly = 1;
constexpr int kUsage = 2;

struct Common {
  std::string out = "csv";
  std::string output;
  unsigned threads = default_threads();
};

void add_common(CLI::App* app, Common& c, bool threads = true) {
  app->add_option("--out", c.out, "report format")->check(CLI::IsMember({"csv", "json"}));
  app->add_option("--output", c.output, "write the report to this file instead of stdout");
  if (threads) app->add_option("--threads", c.threads, "worker threads (default: SMK_THREADS or all cores)")->check(CLI::PositiveNumber);
}

void emit(const Report& r, const Common& c) {
  std::ofstream file;
  std::ostream* os = &std::cout;
  if (!c.output.empty()) {
    file.open(c.output, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open " + c.output);
    os = &file;
  }
  if (c.out == "json")
    r.write_json(*os);
  else
    r.write_csv(*os);
}

std::string u64s(u64 v) { return std::to_string(v); }

std::vector<u64> parse_list(const std::string& text) {
  std::vector<u64> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t pos = 0;
    const u64 v = std::stoull(item, &pos);
    if (pos != item.size()) throw ParseError("bad integer '" + item + "'");
    out.push_back(v);
  }
  return out;
}

// "l,m;l,m;..."
std::vector<std::pair<FieldElement, FieldElement>> parse_scalings(const std::string& text, u64 p) {
  std::vector<std::pair<FieldElement, FieldElement>> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (item.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    const auto v = parse_list(item);
    if (v.size() != 2) throw ParseError("scaling '" + item + "' must be lambda,mu");
    out.push_back({FieldElement(v[0] % p, p), FieldElement(v[1] % p, p)});
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  std::string s = ss.str();
  for (auto& ch : s)
    if (ch == '\n') ch = ';';
  return s;
}

// ---------------------------------------------------------------------------

const std::vector<std::string> kComponentColumns = {"p", "n_points", "n_components", "largest", "exceptional",
                                                    "zero_coord_flag"};

void add_component_row(Report& r, const markoff::ComponentReport& c) {
  std::vector<u64> top(c.sizes.begin(), c.sizes.begin() + static_cast<long>(std::min<std::size_t>(10, c.sizes.size())));
  r.add_row({c.p, c.n_points, c.n_components, c.largest, c.exceptional, c.zero_coord_points > 0 ? 1 : 0},
            {{"top_sizes", top}, {"cp_size", c.cp_size}, {"cp_is_largest", c.cp_is_largest},
             {"zero_coord_points", c.zero_coord_points}, {"warnings", c.warnings}});
}

void dump_exceptional(u64 p) {
  const auto idx = markoff::enumerate_surface(p);
  const auto pts = markoff::exceptional_points(idx, markoff::label_components(idx));
  std::cerr << "anomaly: p = " << p << " has " << pts.size() << " points outside the component of (1,1,1):\n";
  for (const auto& t : pts) std::cerr << "  " << t.to_string() << "\n";
}

int run_markoff_scan(u64 pmin, u64 pmax, const Common& c) {
  Report r(kComponentColumns);
  r.meta() = {{"subcommand", "markoff scan"}, {"params", {{"pmin", pmin}, {"pmax", pmax}, {"threads", c.threads}}}};
  const auto reps = markoff::exceptional_scan(pmin, pmax, c.threads);
  int code = kOk;
  for (const auto& rep : reps) {
    add_component_row(r, rep);
    for (const auto& w : rep.warnings) std::cerr << "warning: p = " << rep.p << ": " << w << "\n";
  }
  emit(r, c);
  for (const auto& rep : reps)
    if (rep.exceptional > 0) {
      dump_exceptional(rep.p);
      code = kAnomaly;
    }
  return code;
}

int run_markoff_components(u64 p, const Common& c) {
  Report r(kComponentColumns);
  r.meta() = {{"subcommand", "markoff components"}, {"params", {{"p", p}}}};
  const auto idx = markoff::enumerate_surface(p);
  const auto rep = markoff::components(idx);
  add_component_row(r, rep);
  r.meta()["summary"] = {{"sizes", rep.sizes}};
  emit(r, c);
  if (rep.exceptional > 0) {
    dump_exceptional(p);
    return kAnomaly;
  }
  return kOk;
}

int run_orbit(u64 p, u64 x, u64 y, u64 z, std::optional<u64> len, const Common& c) {
  if (!numth::is_prime(p) || p < 3) throw PreconditionFailure(u64s(p) + " is not an odd prime");
  const auto t = markoff::make_triple(x, y, z, p);
  if (!t.on_surface() || (t.x.is_zero() && t.y.is_zero() && t.z.is_zero()))
    throw PreconditionFailure(t.to_string() + " is not on the Markoff surface mod " + u64s(p));
  const u64 period = orbit::recurrence_period(t.x, t.y, t.z);
  const auto rd = orbit::rotation_data(t.x);
  const auto seq = orbit::recurrence(t.x, t.y, t.z, len.value_or(period));

  Report r({"n", "u_n"});
  for (std::size_t i = 0; i < seq.size(); ++i) r.add_row({i + 1, seq[i].value()});
  json summary = {{"period", period}, {"t", rd.t}, {"degenerate", rd.degenerate}, {"zero_x", rd.zero_x},
                  {"xi", rd.xi.to_string()}, {"xi_in_base_field", rd.in_base_field}};
  if (!rd.degenerate && !rd.zero_x) {
    const auto zs = orbit::z_set(t.x, t.y, t.z);
    summary["r"] = zs.r.value();
    summary["alpha"] = zs.alpha.to_string();
    summary["beta"] = zs.beta.to_string();
    summary["z_size"] = zs.elements.size();
    summary["max_multiplicity"] = zs.max_multiplicity;
    summary["period_equals_t"] = zs.period == zs.rot.t;
  }
  r.meta() = {{"subcommand", "orbit"},
              {"params", {{"p", p}, {"x", x}, {"y", y}, {"z", z}, {"len", len ? json(*len) : json()}}},
              {"summary", summary}};
  emit(r, c);
  return kOk;
}

int run_orbit_audit(u64 p, const orbit::AuditConfig& cfg, const Common& c) {
  const auto idx = markoff::enumerate_surface(p);
  const auto rep = orbit::intersection_audit(idx, cfg);
  Report r({"t", "g"});
  for (const auto& [t, g] : rep.g) r.add_row({t, g});
  r.meta() = {{"subcommand", "orbit audit"},
              {"params", {{"p", p}, {"A", cfg.A}, {"pairs", cfg.max_pairs}, {"seed", cfg.seed}, {"threads", c.threads}}},
              {"summary",
               {{"component_size", rep.component_size},
                {"M", rep.M},
                {"sum_g", rep.sum_g},
                {"max_t", rep.max_t},
                {"sum_ok", rep.sum_ok},
                {"tail_ok", rep.tail_ok},
                {"period_order_mismatches", rep.period_order_mismatches},
                {"l_size", rep.l_size},
                {"lstar_size", rep.lstar_size},
                {"pairs_available", rep.pairs_available},
                {"pairs_sampled", rep.pairs_sampled},
                {"max_intersection", rep.max_intersection},
                {"argmax_x", rep.argmax_x},
                {"argmax_xstar", rep.argmax_xstar},
                {"pairs_above_2A", rep.pairs_above_2a}}}};
  emit(r, c);
  if (!rep.sum_ok || !rep.tail_ok || rep.period_order_mismatches > 0) {
    std::cerr << "anomaly: g(t) identities fail at p = " << p << "\n";
    return kAnomaly;
  }
  return kOk;
}

int run_subgroup_count(u64 p, u64 t, const std::string& poly, const std::string& coset, bool ext, const Common& c) {
  Report r({"p", "t", "ambient", "poly", "coset_a", "coset_b", "count"});
  r.meta() = {{"subcommand", "subgroup count"},
              {"params", {{"p", p}, {"t", t}, {"poly", poly}, {"coset", coset}, {"ext", ext}}}};
  const FpPoly P = parse_poly(poly, p);
  if (ext) {
    if (!coset.empty()) throw PreconditionFailure("--coset is supported over F_p only");
    const auto G = subgrp::build_subgroup_ext(p, t);
    const u64 n = subgrp::count_poly_solutions(embed(P, G.generator.d()), G, G);
    r.add_row({p, t, "Fp2", format_poly(P), 1, 1, n});
  } else {
    const auto G = subgrp::build_subgroup(p, t);
    u64 a = 1, b = 1;
    if (!coset.empty()) {
      const auto v = parse_list(coset);
      if (v.size() != 2 || v[0] % p == 0 || v[1] % p == 0) throw ParseError("--coset needs two nonzero residues a,b");
      a = v[0] % p;
      b = v[1] % p;
    }
    const u64 n = subgrp::count_poly_solutions(P, G, G, std::pair{FieldElement(a, p), FieldElement(b, p)});
    r.add_row({p, t, "Fp", format_poly(P), a, b, n});
  }
  emit(r, c);
  return kOk;
}

int run_conjecture_scan(const subgrp::ScanConfig& cfg, std::optional<u64> threshold, const Common& c) {
  const auto rep = subgrp::conjecture_scan(cfg);
  Report r({"p", "t", "samples", "rejected", "max_count", "argmax"});
  for (const auto& row : rep.rows) {
    json hist = json::object();
    for (const auto& [k, v] : row.histogram) hist[std::to_string(k)] = v;
    r.add_row({row.p, row.t, row.samples, row.rejected, row.max_count, row.argmax.to_string()}, {{"histogram", hist}});
  }
  json summary = {{"global_max", rep.global_max}};
  if (!rep.rows.empty()) {
    summary["argmax_p"] = rep.rows[rep.argmax_row].p;
    summary["argmax_t"] = rep.rows[rep.argmax_row].t;
  }
  r.meta() = {{"subcommand", "conjecture scan"},
              {"params",
               {{"pmin", cfg.p_min},
                {"pmax", cfg.p_max},
                {"texp", cfg.t_exponent},
                {"trials", cfg.trials},
                {"seed", cfg.seed},
                {"threads", cfg.threads},
                {"A", threshold ? json(*threshold) : json()}}},
              {"summary", summary}};
  emit(r, c);
  if (threshold && rep.global_max > *threshold) {
    const auto& row = rep.rows[rep.argmax_row];
    std::cerr << "anomaly: " << rep.global_max << " solutions exceed A = " << *threshold << " at p = " << row.p
              << ", t = " << row.t << ", equation " << row.argmax.to_string() << "\n";
    return kAnomaly;
  }
  return kOk;
}

const std::vector<std::string> kTheoremColumns = {"p", "t", "poly", "h", "m", "n", "g", "N", "coefficient",
                                                  "bound_ceil", "window", "verdict"};

void add_theorem_row(Report& r, const std::string& poly, const std::string& status, const subgrp::TheoremReport& t) {
  r.add_row({t.p, t.t, poly, t.h, t.m, t.n, t.g, t.total, t.bound.coefficient, t.bound.ceil_value, t.window, status},
            {{"counts", t.counts}, {"irreducible", to_string(t.irreducible)}, {"warnings", t.warnings}});
}

int run_theorem_single(u64 p, u64 t, const std::string& poly, const std::string& scalings, const Common& c) {
  const FpPoly P = parse_poly(poly, p);
  auto sc = parse_scalings(scalings, p);
  if (sc.empty()) sc.push_back({FieldElement(1, p), FieldElement(1, p)});
  const auto G = subgrp::build_subgroup(p, t);
  const auto rep = subgrp::check_theorem(P, sc, G);
  Report r(kTheoremColumns);
  r.meta() = {{"subcommand", "theorem check"}, {"params", {{"p", p}, {"t", t}, {"poly", poly}, {"scalings", scalings}}}};
  add_theorem_row(r, format_poly(P), to_string(rep.verdict), rep);
  emit(r, c);
  if (rep.verdict == subgrp::Verdict::violation) {
    std::cerr << "anomaly: bound violated at p = " << p << ", t = " << t << ", N = " << rep.total
              << ", bound ceil = " << rep.bound.ceil_value << "\n";
    return kAnomaly;
  }
  return kOk;
}

int run_theorem_scan(const subgrp::TheoremScanConfig& cfg, const Common& c) {
  const auto rep = subgrp::theorem_scan(cfg);
  Report r(kTheoremColumns);
  r.meta() = {{"subcommand", "theorem check"},
              {"params", {{"pmin", cfg.p_min}, {"pmax", cfg.p_max}, {"family", cfg.family}, {"threads", cfg.threads}}},
              {"summary", {{"rows", rep.rows.size()}, {"in_window", rep.in_window}, {"violations", rep.violations},
                           {"skipped", rep.skipped}}}};
  for (const auto& row : rep.rows) {
    if (row.status == "skipped") {
      r.add_row({row.p, row.t, cfg.family[row.poly_index], 1, json(), json(), json(), json(), json(), json(), json(),
                 "skipped"});
      continue;
    }
    add_theorem_row(r, cfg.family[row.poly_index], row.status, row.report);
  }
  emit(r, c);
  if (rep.violations > 0) {
    for (const auto& row : rep.rows)
      if (row.status == "violation")
        std::cerr << "anomaly: violation at p = " << row.p << ", t = " << row.t << ", poly " << cfg.family[row.poly_index]
                  << ", N = " << row.report.total << ", bound ceil = " << row.report.bound.ceil_value << "\n";
    return kAnomaly;
  }
  return kOk;
}

int run_sec6(u64 m, const Common& c) {
  const auto rep = subgrp::sec6_construction(m);
  Report r({"label", "value", "in_g", "plus_one_in_g"});
  for (const auto& d : rep.d) r.add_row({d.label, d.value, d.in_g, d.plus_one_in_g});
  r.meta() = {{"subcommand", "sec6"},
              {"params", {{"m", m}}},
              {"summary",
               {{"n", rep.n},
                {"p", rep.p},
                {"primitive_divisors", rep.primitive_divisors},
                {"xi", rep.xi},
                {"xi_order", rep.xi_order},
                {"group_order", rep.group_order},
                {"zeta4", rep.zeta4},
                {"zeta6", rep.zeta6},
                {"zeta6_conj", rep.zeta6_conj},
                {"all_members_ok", rep.all_members_ok},
                {"eighth_roots_ok", rep.eighth_roots_ok},
                {"cube_roots_ok", rep.cube_roots_ok},
                {"literal_minus_zeta6_minus_1_in_g", rep.literal_minus_zeta6_minus_1_in_g},
                {"readings", rep.readings},
                {"mobius_count", rep.mobius_count},
                {"mobius_solutions", rep.mobius_solutions}}}};
  emit(r, c);
  if (!rep.all_members_ok || rep.mobius_count < 9) {
    std::cerr << "anomaly: the nine-point construction did not reproduce\n";
    return kAnomaly;
  }
  return kOk;
}

int run_pigeonhole(u64 p, u64 t, const std::string& eq_text, const Common& c) {
  const auto v = parse_list(eq_text);
  if (v.size() != 4) throw ParseError("--eq needs four residues a11,a12,a21,a22");
  const subgrp::MobiusEquation<FieldElement> eq{FieldElement(v[0] % p, p), FieldElement(v[1] % p, p),
                                                FieldElement(v[2] % p, p), FieldElement(v[3] % p, p)};
  const auto rep = subgrp::pigeonhole_coset_demo(p, t, eq);
  Report r({"p", "t", "cosets", "equation", "N", "best_count", "a", "b", "pigeonhole_floor", "rescaled",
            "rescaled_count", "ok"});
  r.add_row({rep.p, rep.t, rep.cosets, rep.equation.to_string(), rep.total, rep.best_count, rep.a, rep.b,
             rep.pigeonhole_floor, rep.rescaled.to_string(), rep.rescaled_count, rep.ok});
  r.meta() = {{"subcommand", "pigeonhole"}, {"params", {{"p", p}, {"t", t}, {"eq", eq_text}}}};
  emit(r, c);
  if (!rep.ok) {
    std::cerr << "anomaly: no coset pair reaches the pigeonhole floor\n";
    return kAnomaly;
  }
  return kOk;
}

int run_stepanov(u64 p, u64 t, const std::string& poly, u64 h, const std::string& scalings_file, const Common& c) {
  const FpPoly P = parse_poly(poly, p);
  std::vector<std::pair<FieldElement, FieldElement>> sc;
  if (!scalings_file.empty()) {
    sc = parse_scalings(read_file(scalings_file), p);
    if (h != 0 && sc.size() != h) throw ParseError("--h differs from the number of scalings in the file");
  } else {
    // lambda_i = g^i for a primitive root g, mu_i = 1
    const FieldElement g(numth::primitive_root(p), p);
    for (u64 i = 0; i < std::max<u64>(h, 1); ++i) sc.push_back({g.pow(i), FieldElement(1, p)});
  }
  const auto start = std::chrono::steady_clock::now();
  const auto rep = stepanov::certify(P, p, t, sc, false, c.threads);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const auto& q = rep.params;
  Report r({"p", "t", "h", "m", "n", "g", "A", "B", "C", "D", "L", "unknowns", "rows", "rank", "psi_nonzero",
            "coprime_with_P", "vanishing_verified", "solutions_checked", "m_sing", "bezout_bound", "brute_count",
            "verified", "failed_stage"});
  json checks = json::object();
  for (const auto& ck : q.checks) checks[ck.name] = ck.ok;
  r.add_row({q.p, q.t, q.h, q.m, q.n, q.g, q.A, q.B, q.C, q.D, q.L, q.unknowns, rep.system_rows, rep.system_rank,
             rep.psi_nonzero, rep.coprime_with_P, rep.vanishing_verified, rep.solutions_checked, rep.m_sing,
             rep.bezout_bound, rep.brute_count, rep.verified(), rep.failed_stage()},
            {{"phi_coeffs", rep.phi_coeffs},
             {"param_checks", checks},
             {"sufficient_lhs", q.sufficient_lhs},
             {"psi_degree", q.psi_degree},
             {"coprime_witness_x", rep.coprime_witness_x ? json(*rep.coprime_witness_x) : json()},
             {"warnings", rep.warnings}});
  json scal = json::array();
  for (const auto& [l, m] : sc) scal.push_back({l.value(), m.value()});
  r.meta() = {{"subcommand", "stepanov cert"},
              {"params", {{"p", p}, {"t", t}, {"poly", poly}, {"scalings", scal}, {"threads", c.threads}}},
              {"timing", {{"seconds", secs}}}};
  emit(r, c);
  if (!rep.verified()) {
    std::cerr << "anomaly: certificate failed at stage " << rep.failed_stage() << "\n";
    return kAnomaly;
  }
  return kOk;
}

int run_tau(const std::string& ns, const std::string& zs, const Common& c) {
  Report r({"n", "z", "tau"});
  r.meta() = {{"subcommand", "numth tau"}, {"params", {{"n", ns}, {"z", zs}}}};
  for (u64 n : parse_list(ns))
    for (u64 z : parse_list(zs)) r.add_row({n, z, numth::tau_z(n, static_cast<double>(z))});
  emit(r, c);
  return kOk;
}

int run_psi(const std::string& xs, const std::string& ys, const Common& c) {
  const auto xg = parse_list(xs), yg = parse_list(ys);
  const auto rows = numth::bound_audit_psi(xg, yg);
  Report r({"x", "y", "u", "psi", "ratio"});
  for (const auto& row : rows) r.add_row({row.x, row.y, row.u, row.psi, row.ratio});
  r.meta() = {{"subcommand", "numth psi"},
              {"params", {{"x", xs}, {"y", ys}}},
              {"summary", {{"empirical_c0", rows.empty() ? json() : json(numth::empirical_c0(rows))}}}};
  emit(r, c);
  return kOk;
}

int run_ppd(unsigned n, const Common& c) {
  const auto qs = numth::primitive_prime_divisors(n);
  Report r({"n", "q", "q_mod_n"});
  bool ok = true;
  for (u64 q : qs) {
    r.add_row({n, q, q % n});
    ok &= q % n == 1 % n;
  }
  r.meta() = {{"subcommand", "numth ppd"}, {"params", {{"n", n}}}};
  emit(r, c);
  if (!ok) {
    std::cerr << "anomaly: a primitive prime divisor is not 1 mod n\n";
    return kAnomaly;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Markoff triples mod p, subgroup equations and Stepanov certificates"};
  app.require_subcommand(1);
  std::function<int()> action;

  Common markoff_c;
  auto* markoff = app.add_subcommand("markoff", "Markoff surface mod p")->require_subcommand(1);
  u64 pmin = 5, pmax = 100, mp = 0;
  auto* mscan = markoff->add_subcommand("scan", "component reports for every prime in a range");
  mscan->add_option("--pmin", pmin)->capture_default_str();
  mscan->add_option("--pmax", pmax)->capture_default_str();
  add_common(mscan, markoff_c);
  mscan->callback([&] { action = [&] { return run_markoff_scan(pmin, pmax, markoff_c); }; });
  auto* mcomp = markoff->add_subcommand("components", "component report for one prime");
  mcomp->add_option("-p", mp)->required();
  add_common(mcomp, markoff_c, false);
  mcomp->callback([&] { action = [&] { return run_markoff_components(mp, markoff_c); }; });

  Common orbit_c;
  u64 op = 0, ox = 0, oy = 0, oz = 0;
  std::optional<u64> olen;
  orbit::AuditConfig acfg;
  auto* orb = app.add_subcommand("orbit", "rotation sequence u_{n+2} = 3x u_{n+1} - u_n")->require_subcommand(0, 1);
  orb->add_option("-p", op);
  orb->add_option("-x", ox);
  orb->add_option("-y", oy);
  orb->add_option("-z", oz);
  orb->add_option("--len", olen, "number of terms (default: one period)");
  add_common(orb, orbit_c, false);
  auto* audit = orb->add_subcommand("audit", "period distribution and Z-set intersections on C_p");
  u64 ap = 0;
  audit->add_option("-p", ap)->required();
  audit->add_option("--A", acfg.A)->capture_default_str();
  audit->add_option("--pairs", acfg.max_pairs)->capture_default_str();
  audit->add_option("--seed", acfg.seed)->capture_default_str();
  add_common(audit, orbit_c);
  audit->callback([&] {
    action = [&] {
      acfg.threads = orbit_c.threads;
      return run_orbit_audit(ap, acfg, orbit_c);
    };
  });
  orb->callback([&] {
    if (audit->parsed()) return;
    for (const char* flag : {"-p", "-x", "-y", "-z"})
      if (orb->count(flag) == 0) throw CLI::RequiredError(flag);
    action = [&] { return run_orbit(op, ox, oy, oz, olen, orbit_c); };
  });

  Common sub_c;
  u64 sp = 0, st = 0;
  std::string spoly, scoset;
  bool sext = false;
  auto* sub = app.add_subcommand("subgroup", "subgroup equations")->require_subcommand(1);
  auto* scount = sub->add_subcommand("count", "#{(u,v) in aG x bG : P(u,v) = 0}");
  scount->add_option("-p", sp)->required();
  scount->add_option("-t", st)->required();
  scount->add_option("--poly", spoly, "terms i,j,c separated by ';'")->required();
  scount->add_option("--coset", scoset, "a,b");
  scount->add_flag("--ext", sext, "use the order-t subgroup of F_{p^2}^*");
  add_common(scount, sub_c, false);
  scount->callback([&] { action = [&] { return run_subgroup_count(sp, st, spoly, scoset, sext, sub_c); }; });

  Common conj_c;
  subgrp::ScanConfig scfg;
  std::optional<u64> conj_a;
  auto* conj = app.add_subcommand("conjecture", "random Moebius equations on subgroups")->require_subcommand(1);
  auto* cscan = conj->add_subcommand("scan", "max solutions over random admissible equations");
  cscan->add_option("--pmin", scfg.p_min)->capture_default_str();
  cscan->add_option("--pmax", scfg.p_max)->capture_default_str();
  cscan->add_option("--texp", scfg.t_exponent, "t <= p^texp")->capture_default_str();
  cscan->add_option("--trials", scfg.trials)->capture_default_str();
  cscan->add_option("--seed", scfg.seed)->capture_default_str();
  cscan->add_option("--A", conj_a, "exit 1 when some count exceeds A");
  add_common(cscan, conj_c);
  cscan->callback([&] {
    action = [&] {
      scfg.threads = conj_c.threads;
      return run_conjecture_scan(scfg, conj_a, conj_c);
    };
  });

  Common thm_c;
  u64 tp = 0, tt = 0;
  std::string tpoly, tscal, tfamily;
  subgrp::TheoremScanConfig tcfg;
  auto* thm = app.add_subcommand("theorem", "empirical check of the subgroup bound")->require_subcommand(1);
  auto* tcheck = thm->add_subcommand("check", "one instance (-p -t --poly) or a scan (--pmax)");
  tcheck->add_option("-p", tp);
  tcheck->add_option("-t", tt);
  tcheck->add_option("--poly", tpoly);
  tcheck->add_option("--scalings", tscal, "lambda,mu;lambda,mu;...");
  auto* tpmin = tcheck->add_option("--pmin", tcfg.p_min);
  auto* tpmax = tcheck->add_option("--pmax", tcfg.p_max);
  tcheck->add_option("--family", tfamily, "file with one polynomial per line (default: built-in family)");
  add_common(tcheck, thm_c);
  tcheck->callback([&] {
    const bool scan = tpmax->count() > 0 || tpmin->count() > 0;
    if (scan) {
      if (tcheck->count("-p") || tcheck->count("-t") || tcheck->count("--poly"))
        throw CLI::ValidationError("theorem check", "scan mode (--pmin/--pmax) excludes -p, -t and --poly");
      action = [&] {
        if (!tfamily.empty()) {
          tcfg.family.clear();
          std::ifstream in(tfamily);
          if (!in) throw ParseError("cannot read " + tfamily);
          for (std::string line; std::getline(in, line);)
            if (line.find_first_not_of(" \t\r") != std::string::npos) tcfg.family.push_back(line);
        }
        tcfg.threads = thm_c.threads;
        return run_theorem_scan(tcfg, thm_c);
      };
    } else {
      for (const char* flag : {"-p", "-t", "--poly"})
        if (tcheck->count(flag) == 0) throw CLI::RequiredError(flag);
      action = [&] { return run_theorem_single(tp, tt, tpoly, tscal, thm_c); };
    }
  });

  Common sec6_c;
  u64 sm = 1;
  auto* sec6 = app.add_subcommand("sec6", "nine-point construction for n = 24m");
  sec6->add_option("--m", sm)->capture_default_str();
  add_common(sec6, sec6_c, false);
  sec6->callback([&] { action = [&] { return run_sec6(sm, sec6_c); }; });

  Common pig_c;
  u64 pp = 1009, pt = 63;
  std::string peq = "1,-1,0,-1";
  auto* pig = app.add_subcommand("pigeonhole", "best coset pair for a Moebius equation");
  pig->add_option("-p", pp)->capture_default_str();
  pig->add_option("-t", pt)->capture_default_str();
  pig->add_option("--eq", peq, "a11,a12,a21,a22 for (a11 u - a12)/(a21 u - a22) = v")->capture_default_str();
  add_common(pig, pig_c, false);
  pig->callback([&] {
    action = [&] {
      // allow a leading '-' per entry
      std::string fixed;
      std::stringstream ss(peq);
      std::string item;
      while (std::getline(ss, item, ',')) {
        if (!fixed.empty()) fixed += ",";
        fixed += item.starts_with("-") ? std::to_string(reduce_signed(std::stoll(item), pp)) : item;
      }
      return run_pigeonhole(pp, pt, fixed, pig_c);
    };
  });

  Common step_c;
  u64 kp = 0, kt = 0, kh = 0;
  std::string kpoly, kscal;
  auto* step = app.add_subcommand("stepanov", "explicit Stepanov certificates")->require_subcommand(1);
  auto* cert = step->add_subcommand("cert", "build and verify a certificate");
  cert->set_help_flag("--help", "print this help message and exit");
  cert->add_option("-p", kp)->required();
  cert->add_option("-t", kt)->required();
  cert->add_option("--poly", kpoly)->required();
  cert->add_option("--h", kh, "number of scaled copies");
  cert->add_option("--scalings", kscal, "file with one 'lambda,mu' per line");
  add_common(cert, step_c);
  cert->callback([&] { action = [&] { return run_stepanov(kp, kt, kpoly, kh, kscal, step_c); }; });

  Common nt_c;
  auto* nt = app.add_subcommand("numth", "number-theoretic helpers")->require_subcommand(1);
  std::string tau_n, tau_z = "1000000000";
  auto* tau = nt->add_subcommand("tau", "number of divisors d <= z");
  tau->add_option("-n", tau_n, "comma-separated list")->required();
  tau->add_option("-z", tau_z, "comma-separated list")->capture_default_str();
  add_common(tau, nt_c, false);
  tau->callback([&] { action = [&] { return run_tau(tau_n, tau_z, nt_c); }; });
  std::string psi_x, psi_y;
  auto* psi = nt->add_subcommand("psi", "y-smooth numbers up to x, with the audit ratio");
  psi->add_option("-x", psi_x, "comma-separated grid")->required();
  psi->add_option("-y", psi_y, "comma-separated grid")->required();
  add_common(psi, nt_c, false);
  psi->callback([&] { action = [&] { return run_psi(psi_x, psi_y, nt_c); }; });
  unsigned ppd_n = 0;
  auto* ppd = nt->add_subcommand("ppd", "primitive prime divisors of 2^n - 1");
  ppd->add_option("-n", ppd_n)->required();
  add_common(ppd, nt_c, false);
  ppd->callback([&] { action = [&] { return run_ppd(ppd_n, nt_c); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    return action ? action() : kUsage;
  } catch (const VerificationFailure& e) {
    std::cerr << "verification failure: " << e.what() << "\n";
    return kAnomaly;
  } catch (const FullRank& e) {
    std::cerr << "verification failure: " << e.what() << "\n";
    return kAnomaly;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
}
