#pragma once

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "diagram.hpp"
#include "expression.hpp"
#include "fock.hpp"
#include "io.hpp"
#include "jones_wenzl.hpp"
#include "pair.hpp"
#include "presentation.hpp"
#include "qpoly.hpp"
#include "representation.hpp"

namespace motzkin::cli {

enum ExitCode { kPass = 0, kCheckFailed = 1, kUsage = 2 };

struct Options {
  std::optional<std::string> lambda;
  int n = 4;
  int r = 1;
  std::string family;
  std::string pair_file;
  int k = 3;
  int levels = 5;
  int kmax = 5;
  std::optional<double> tol;
  std::string out;
  std::string format;
  std::string mode = "abstract";
  std::string expression;
  bool expect_zero = false;
  bool exported = false;
  bool matrix_units = false;
  std::vector<std::string> a_entries, b_entries;
};

/// What a subcommand produced: a JSON document, optional CSV text and the
/// verdict of the checks it ran.
struct Outcome {
  Json json;
  std::string csv;
  bool passed = true;
};

namespace detail {

inline Rational lambda_or(const Options& o, const Rational& fallback) {
  return o.lambda ? parse_rational(*o.lambda) : fallback;
}

inline Complex parse_complex(const std::string& s) {
  // "re" or "re:im"
  auto colon = s.find(':');
  try {
    std::size_t used = 0;
    double re = std::stod(s.substr(0, colon), &used);
    if (used != (colon == std::string::npos ? s.size() : colon)) throw std::invalid_argument(s);
    double im = 0;
    if (colon != std::string::npos) {
      im = std::stod(s.substr(colon + 1), &used);
      if (used != s.size() - colon - 1) throw std::invalid_argument(s);
    }
    return {re, im};
  } catch (const std::logic_error&) {
    throw ParameterError("malformed complex entry '" + s + "' (expected re or re:im)");
  }
}

/// The pair from --pair, from explicit --a/--b entries, or from an example
/// family. Without --lambda the family default is 1/n, which is feasible
/// for every family.
inline MotzkinPair resolve_pair(const Options& o) {
  if (!o.pair_file.empty()) return read_pair_file(o.pair_file);
  if (!o.a_entries.empty() || !o.b_entries.empty()) {
    MotzkinPair p;
    p.n = o.n;
    p.lambda = lambda_or(o, Rational(1) / o.n);
    for (const auto& s : o.a_entries) p.a.push_back(parse_complex(s));
    for (const auto& s : o.b_entries) p.b.push_back(parse_complex(s));
    if (static_cast<int>(p.a.size()) != p.n || static_cast<int>(p.b.size()) != p.n)
      throw ParameterError("--a and --b need exactly n entries each");
    return p;
  }
  PairFamily family = o.family.empty() ? (o.r == 0 ? PairFamily::I : PairFamily::III) : parse_family(o.family);
  return build_example_pair(family, o.n, o.r, lambda_or(o, Rational(1) / o.n));
}

inline Json pair_summary(const MotzkinPair& p) { return {{"n", p.n}, {"lambda", to_string(p.lambda)}}; }

inline Outcome from_report(const Report& r) { return {to_json(r), to_csv(r), r.passed()}; }

inline Outcome merge(const std::string& title, const std::vector<Report>& reports) {
  Report all;
  all.title = title;
  for (const auto& r : reports)
    for (const auto& c : r.checks) {
      auto copy = c;
      if (!r.title.empty()) copy.name = r.title + ": " + c.name;
      all.add(std::move(copy));
    }
  return from_report(all);
}

}  // namespace detail

inline Outcome cmd_dims(const Options& o) {
  if (o.kmax < 0) throw DomainError("--kmax must be >= 0");
  Json dims = Json::array(), basis = Json::array();
  std::string row;
  for (int k = 0; k <= o.kmax; ++k) {
    auto d = dim_subproduct(o.n, k);
    dims.push_back(d);
    basis.push_back(motzkin_number(2 * k));
    row += (k ? "," : "") + std::to_string(d);
  }
  return {{{"n", o.n}, {"subproduct", dims}, {"motzkin_basis", basis}}, row + "\n", true};
}

inline Outcome cmd_basis(const Options& o) {
  auto basis = enumerate_basis(o.k);
  Json list = Json::array();
  std::string csv = "index,pairing\n";
  for (std::size_t i = 0; i < basis.size(); ++i) {
    list.push_back(to_json(basis[i]));
    std::string p;
    for (int x : basis[i].pairing()) p += (p.empty() ? "" : " ") + std::to_string(x);
    csv += std::to_string(i) + "," + p + "\n";
  }
  bool ok = basis.size() == motzkin_number(2 * o.k);
  return {{{"width", o.k}, {"count", basis.size()}, {"diagrams", list}}, csv, ok};
}

inline Outcome cmd_presentation(const Options& o) {
  return detail::from_report(check_presentation(o.k, detail::lambda_or(o, Rational(1, 3))));
}

inline Outcome cmd_jw(const Options& o) {
  JWCache cache(detail::lambda_or(o, Rational(1, 4)));
  auto out = detail::from_report(jw_report(cache, o.k));
  out.json["expectation_coefficient"] = to_string(expectation_coefficient(o.k, cache.lambda()));
  if (o.exported) out.json["element"] = to_json(cache.g(o.k));
  return out;
}

inline Outcome cmd_pair(const std::string& action, const Options& o) {
  auto p = detail::resolve_pair(o);
  if (action == "make") return {to_json(p), {}, true};
  auto report = validate_pair(p, o.tol.value_or(1e-12));
  auto out = detail::from_report(report);
  out.json["pair"] = to_json(p);
  return out;
}

inline Outcome cmd_rep(const std::string& action, const Options& o) {
  auto p = detail::resolve_pair(o);
  if (action == "check") {
    auto out = detail::from_report(relation_residuals(p, o.k, o.tol.value_or(1e-10)));
    out.json["pair"] = detail::pair_summary(p);
    return out;
  }
  auto span = span_dimension(p, o.k);
  const auto expected = motzkin_number(2 * o.k);
  bool ok = span.converged && static_cast<std::uint64_t>(span.dimension) == expected;
  Json j{{"pair", detail::pair_summary(p)},
         {"k", o.k},
         {"span_dimension", span.dimension},
         {"algebra_dimension", expected},
         {"rounds", span.rounds},
         {"converged", span.converged},
         {"passed", ok}};
  std::string csv = "k,span_dimension,algebra_dimension,rounds,converged\n" + std::to_string(o.k) + "," +
                    std::to_string(span.dimension) + "," + std::to_string(expected) + "," +
                    std::to_string(span.rounds) + "," + (span.converged ? "true" : "false") + "\n";
  return {j, csv, ok};
}

inline Outcome fock_build(const Options& o, const MotzkinPair& p) {
  auto sd = build_subproduct(p, o.levels);
  std::optional<ToeplitzOps> ops;
  if (o.matrix_units) ops = creation_operators(p, o.levels);
  Json rows = Json::array();
  std::string csv = "k,dim_H,rank_G,dim_H_squared,matrix_unit_dim\n";
  bool ok = true;
  for (int k = 0; k <= o.levels; ++k) {
    Json row{{"k", k}, {"dim", sd.dims[k]}, {"expected", dim_subproduct(p.n, k)}, {"gap", sd.gap[k]}};
    ok = ok && sd.dims[k] == dim_subproduct(p.n, k) && sd.gap[k] >= 1e3;
    std::string rank_s, mu_s;
    if (tensor_dim(p.n, k) <= limits().max_dense_dim) {
      auto G = subproduct_projection(p, k).G;
      Eigen::SelfAdjointEigenSolver<DenseMatrix> es(G, Eigen::EigenvaluesOnly);
      int rank = 0;
      for (double e : es.eigenvalues()) rank += e > o.tol.value_or(1e-8);
      row["rank"] = rank;
      rank_s = std::to_string(rank);
      ok = ok && rank == sd.dims[k];
    }
    if (ops && k <= o.levels) {
      std::uint64_t multi = 1;
      for (int i = 0; i < k; ++i) multi *= static_cast<std::uint64_t>(ops->gens.size());
      if (multi <= limits().max_multi_indices) {
        int mu = matrix_unit_dimension(*ops, k);
        row["matrix_unit_dim"] = mu;
        mu_s = std::to_string(mu);
        ok = ok && mu == sd.dims[k] * sd.dims[k];
      }
    }
    rows.push_back(row);
    csv += std::to_string(k) + "," + std::to_string(sd.dims[k]) + "," + rank_s + "," +
           std::to_string(sd.dims[k] * sd.dims[k]) + "," + mu_s + "\n";
  }
  return {{{"pair", detail::pair_summary(p)}, {"levels", rows}, {"passed", ok}}, csv, ok};
}

inline Outcome cmd_fock(const std::string& action, const Options& o) {
  auto p = detail::resolve_pair(o);
  if (action == "build") return fock_build(o, p);
  if (action == "toeplitz") {
    auto ops = creation_operators(p, o.levels);
    auto out = detail::from_report(toeplitz_residuals(ops, o.tol.value_or(1e-9)));
    out.json["pair"] = detail::pair_summary(p);
    return out;
  }
  if (action == "matrix-units") {
    auto ops = creation_operators(p, o.k);
    Json rows = Json::array();
    std::string csv = "k,dim_H_squared,matrix_unit_dim\n";
    bool ok = true;
    for (int k = 0; k <= o.k; ++k) {
      int mu = matrix_unit_dimension(ops, k, o.tol.value_or(1e-8));
      int d2 = ops.dim(k) * ops.dim(k);
      ok = ok && mu == d2;
      rows.push_back({{"k", k}, {"dim_squared", d2}, {"matrix_unit_dim", mu}});
      csv += std::to_string(k) + "," + std::to_string(d2) + "," + std::to_string(mu) + "\n";
    }
    return {{{"pair", detail::pair_summary(p)}, {"levels", rows}, {"passed", ok}}, csv, ok};
  }
  if (action == "reverse") {
    auto ops = creation_operators(p, o.levels);
    const double tol = o.tol.value_or(1e-10);
    Json rows = Json::array();
    std::string csv = "k,coefficient,residual,closed_form_difference\n";
    bool ok = true;
    for (int k = 2; k <= o.levels; ++k) {
      auto res = reverse_identity(ops, k);
      ok = ok && res.residual < tol && res.closed_form_difference < tol;
      rows.push_back({{"k", k},
                      {"coefficient", to_string(res.coefficient)},
                      {"residual", res.residual},
                      {"closed_form", res.closed_form},
                      {"closed_form_difference", res.closed_form_difference}});
      csv += std::to_string(k) + "," + to_string(res.coefficient) + "," + format_double(res.residual) + "," +
             format_double(res.closed_form_difference) + "\n";
    }
    return {{{"pair", detail::pair_summary(p)}, {"rows", rows}, {"passed", ok}}, csv, ok};
  }
  if (action == "ideal") {
    auto ops = creation_operators(p, std::max(o.levels, 2));
    auto g = ideal_generator(ops);
    const double tol = o.tol.value_or(1e-10);
    Report r;
    r.title = "ideal generator";
    r.add_numeric("equals (I-P)(x)(I-P) v_A", g.projection_residual, tol);
    r.add_numeric("orthogonal to H_2", g.orthogonality, tol);
    r.add_numeric("H_2 is its complement in H_1 (x) H_1", g.complement_residual, tol);
    r.add_exact("dim H_2 = (n-1)^2 - 1", g.complement_dim == (p.n - 1) * (p.n - 1) - 1);
    auto out = detail::from_report(r);
    out.json["pair"] = detail::pair_summary(p);
    return out;
  }
  if (action == "cp-asymptotics") {
    auto ops = creation_operators(p, o.levels);
    auto rows = cuntz_pimsner_residuals(ops, o.levels - 1);
    Json list = Json::array();
    std::string csv = "m,residual,defect,factor\n";
    bool ok = true;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& row = rows[i];
      if (i > 0) ok = ok && row.residual < rows[i - 1].residual;
      list.push_back({{"m", row.m}, {"residual", row.residual}, {"defect", row.defect}, {"factor", row.factor}});
      csv += std::to_string(row.m) + "," + format_double(row.residual) + "," + format_double(row.defect) + "," +
             format_double(row.factor) + "\n";
    }
    return {{{"pair", detail::pair_summary(p)},
             {"phi_infinity", phi_infinity(p.lambda)},
             {"rows", list},
             {"strictly_decreasing", ok},
             {"passed", ok}},
            csv,
            ok};
  }
  throw ParameterError("unknown fock action '" + action + "'");
}

inline Outcome cmd_eval(const Options& o) {
  auto e = parse_expression(o.expression, o.k);
  Json j{{"expression", to_string(e)}, {"k", o.k}, {"mode", o.mode}};
  bool zero = false;
  if (o.mode == "abstract") {
    auto x = evaluate_abstract(e, o.k, detail::lambda_or(o, Rational(1, 3)));
    zero = x.is_zero();
    j["result"] = to_json(x);
  } else if (o.mode == "rep") {
    auto p = detail::resolve_pair(o);
    auto x = evaluate_representation(e, o.k, p);
    const double norm = x.matrix.norm();
    zero = norm < o.tol.value_or(1e-10);
    j["pair"] = detail::pair_summary(p);
    j["result"] = {{"level", x.domain_level}, {"frobenius_norm", norm}};
  } else {
    throw ParameterError("--mode must be abstract or rep");
  }
  j["is_zero"] = zero;
  std::string csv = "expression,is_zero\n" + csv_field(to_string(e)) + "," + (zero ? "true" : "false") + "\n";
  return {j, csv, !o.expect_zero || zero};
}

/// The whole verification pipeline at the reference parameters.
inline Outcome cmd_check_all() {
  std::vector<Report> reports;
  auto timed = [&](const std::string& title, auto&& body) {
    Report r;
    auto start = std::chrono::steady_clock::now();
    body(r);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.title = title;
    r.add({"elapsed", true, 0.0, 0.0, format_double(secs) + " s"});
    reports.push_back(std::move(r));
  };
  const Rational third(1, 3), quarter(1, 4);
  const auto odd = build_example_pair(PairFamily::I, 3, 0, third);
  const auto even = build_example_pair(PairFamily::III, 4, 1, quarter);

  timed("basis", [](Report& r) {
    for (int k = 1; k <= 5; ++k)
      r.add_exact("k=" + std::to_string(k), enumerate_basis(k).size() == motzkin_number(2 * k));
  });
  timed("presentation", [&](Report& r) {
    for (const auto& lam : {third, quarter})
      for (int k = 2; k <= 4; ++k)
        r.add_exact("k=" + std::to_string(k) + " lambda=" + to_string(lam), check_presentation(k, lam).passed());
  });
  timed("jones-wenzl", [&](Report& r) {
    JWCache cache(quarter);
    for (int k = 1; k <= 5; ++k) r.add_exact("k=" + std::to_string(k), jw_report(cache, k).passed());
  });
  timed("phi", [&](Report& r) {
    bool ok = true;
    for (int m = 1; m <= 30; ++m) ok = ok && phi(m, third) == Rational(3 * m) / (m + 1);
    r.add_exact("phi(m) = 3m/(m+1) at 1/3", ok);
    r.add_numeric("|phi(30) - phi_inf| at 1/4", std::abs(phi(30, quarter).get_d() - phi_infinity(quarter)), 1e-3);
    ok = true;
    for (int m = 1; m <= 20; ++m) ok = ok && phi_p_ratio(m, quarter) == phi_q_ratio(m, quarter);
    r.add_exact("P and Q ratios agree", ok);
  });
  timed("representation", [&](Report& r) {
    for (const auto* p : {&odd, &even}) {
      const std::string tag = "n=" + std::to_string(p->n);
      r.add_exact(tag + " relations k=3", relation_residuals(*p, 3).passed());
      for (int k = 2; k <= 3; ++k) {
        auto s = span_dimension(*p, k);
        r.add_exact(tag + " span k=" + std::to_string(k),
                    s.converged && static_cast<std::uint64_t>(s.dimension) == motzkin_number(2 * k));
      }
    }
  });
  timed("fock", [&](Report& r) {
    for (const auto* p : {&odd, &even}) {
      const std::string tag = "n=" + std::to_string(p->n);
      auto ops = creation_operators(*p, 5);
      r.add_exact(tag + " toeplitz N=5", toeplitz_residuals(ops).passed());
      for (int k = 2; k <= 4; ++k) {
        auto rev = reverse_identity(ops, k);
        r.add_numeric(tag + " reverse k=" + std::to_string(k), std::max(rev.residual, rev.closed_form_difference),
                      1e-10);
      }
      r.add_numeric(tag + " ideal generator", ideal_generator(ops).orthogonality, 1e-10);
    }
    auto ops = creation_operators(even, 3);
    for (int k = 0; k <= 3; ++k)
      r.add_exact("matrix units k=" + std::to_string(k), matrix_unit_dimension(ops, k) == ops.dim(k) * ops.dim(k));
    auto cp = cuntz_pimsner_residuals(creation_operators(even, 6), 4);
    bool decreasing = true;
    for (std::size_t i = 1; i < cp.size(); ++i) decreasing = decreasing && cp[i].residual < cp[i - 1].residual;
    r.add_exact("Cuntz-Pimsner residuals decrease", decreasing);
  });
  return detail::merge("check-all", reports);
}

namespace detail {

inline void add_common(CLI::App* app, Options& o) {
  app->add_option("--lambda", o.lambda, "loop parameter lambda as p/q");
  app->add_option("--n", o.n, "dimension of H");
  app->add_option("--r", o.r, "support parameter r of the example pair (0 selects family i)");
  app->add_option("--family", o.family, "example pair family: i, ii or iii");
  app->add_option("--pair", o.pair_file, "pair JSON file");
  app->add_option("--a", o.a_entries, "explicit a entries (re or re:im)");
  app->add_option("--b", o.b_entries, "explicit b entries (re or re:im)");
  app->add_option("--k", o.k, "width / level");
  app->add_option("--levels", o.levels, "Fock truncation level N");
  app->add_option("--tol", o.tol, "tolerance");
  app->add_option("--out", o.out, "write the report to this path");
  app->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
}

inline void emit(const Outcome& res, const Options& o, const std::string& default_format, std::ostream& out) {
  const std::string fmt = o.format.empty() ? default_format : o.format;
  std::string text = fmt == "csv" && !res.csv.empty() ? res.csv : dump_json(res.json) + "\n";
  if (o.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw ParameterError("cannot write '" + o.out + "'");
  f << text;
}

}  // namespace detail

/// Runs one command line (without the program name). Exit codes: 0 all
/// requested checks passed, 1 a check failed, 2 usage or input error.
inline int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Motzkin algebra, Jones-Wenzl idempotents and subproduct systems", "motzkin-cli"};
  app.require_subcommand(1);
  Options o;

  auto dims = app.add_subcommand("dims", "subproduct dimension table");
  detail::add_common(dims, o);
  dims->add_option("--kmax", o.kmax, "largest level");
  auto basis = app.add_subcommand("basis", "enumerate the diagram basis of M_k");
  detail::add_common(basis, o);
  auto pres = app.add_subcommand("presentation", "check the defining relations exactly");
  detail::add_common(pres, o);
  auto jw = app.add_subcommand("jw", "compute and verify g_k");
  detail::add_common(jw, o);
  jw->add_flag("--export", o.exported, "include g_k as an algebra element");

  std::string action;
  auto pair = app.add_subcommand("pair", "validate or build a Motzkin pair");
  detail::add_common(pair, o);
  pair->add_option("action", action, "validate | make")->required()->check(CLI::IsMember({"validate", "make"}));
  auto rep = app.add_subcommand("rep", "representation checks");
  detail::add_common(rep, o);
  rep->add_option("action", action, "check | faithful")->required()->check(CLI::IsMember({"check", "faithful"}));
  auto fock = app.add_subcommand("fock", "subproduct system and Toeplitz checks");
  detail::add_common(fock, o);
  fock->add_option("action", action, "build | toeplitz | matrix-units | reverse | ideal | cp-asymptotics")
      ->required()
      ->check(CLI::IsMember({"build", "toeplitz", "matrix-units", "reverse", "ideal", "cp-asymptotics"}));
  fock->add_flag("--matrix-units", o.matrix_units, "build: also measure matrix-unit dimensions");
  auto eval = app.add_subcommand("eval", "evaluate an expression");
  detail::add_common(eval, o);
  eval->add_option("expression", o.expression, "expression")->required();
  eval->add_option("--mode", o.mode, "abstract or rep")->check(CLI::IsMember({"abstract", "rep"}));
  eval->add_flag("--expect-zero", o.expect_zero, "fail unless the value is zero");
  auto all = app.add_subcommand("check-all", "run the full verification pipeline");
  detail::add_common(all, o);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kPass;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return kUsage;
  }

  try {
    Outcome res;
    std::string format = "json";
    if (*dims) {
      res = cmd_dims(o);
      format = "csv";
    } else if (*basis) {
      res = cmd_basis(o);
    } else if (*pres) {
      res = cmd_presentation(o);
    } else if (*jw) {
      res = cmd_jw(o);
    } else if (*pair) {
      res = cmd_pair(action, o);
    } else if (*rep) {
      res = cmd_rep(action, o);
    } else if (*fock) {
      res = cmd_fock(action, o);
    } else if (*eval) {
      res = cmd_eval(o);
    } else {
      res = cmd_check_all();
    }
    detail::emit(res, o, format, out);
    if (!res.passed) err << "checks failed\n";
    return res.passed ? kPass : kCheckFailed;
  } catch (const ConsistencyError& e) {
    err << "check failed: " << e.what() << "\n";
    return kCheckFailed;
  } catch (const StructuralError& e) {
    err << "check failed: " << e.what() << "\n";
    return kCheckFailed;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace motzkin::cli
