#include "twistlab/cli_run.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <limits>

#include "CLI11.hpp"
#include "twistlab/analytic.hpp"
#include "twistlab/derived_spaces.hpp"
#include "twistlab/io.hpp"
#include "twistlab/metrics.hpp"
#include "twistlab/probes.hpp"

namespace twistlab {

namespace {

std::vector<long long> parse_ll_list(const std::string& csv, const char* what) {
  std::vector<long long> out;
  std::size_t start = 0;
  while (start <= csv.size()) {
    const std::size_t pos = csv.find(',', start);
    const std::string item =
        csv.substr(start, pos == std::string::npos ? std::string::npos : pos - start);
    if (item.empty()) {
      throw std::invalid_argument(std::string(what) + ": empty entry in list");
    }
    try {
      std::size_t used = 0;
      out.push_back(std::stoll(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw std::invalid_argument(std::string(what) + ": bad integer '" + item + "'");
    }
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  if (out.empty()) throw std::invalid_argument(std::string(what) + ": empty list");
  return out;
}

JValue diagnostics_json(const ConstantReport& rep) {
  JValue obj = JValue::object();
  for (const auto& [key, value] : rep.diagnostics) obj.set(key, JValue::number(value));
  return obj;
}

struct CsvTable {
  std::string header;
  std::vector<std::vector<std::string>> rows;

  std::string dump() const {
    std::string out = header + "\n";
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out.push_back(',');
        out += row[i];
      }
      out.push_back('\n');
    }
    return out;
  }
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Finite-dimensional laboratory for interpolation-derived twisted spaces"};
  app.name("twistlab");
  app.require_subcommand(1);

  struct {
    std::uint64_t seed = kDefaultSeed;
    std::string format = "json";
    bool timing = false;

    int omega_k = 1, omega_n = 1, omega_dim = 0;
    std::string omega_input;

    int qn_arity = 1;
    std::string qn_input;

    int ex_dim = 64, ex_samples = 100;

    int tc_order = 4, tc_nodes = 256, tc_dim = 8, tc_samples = 20;
    double tc_radius = kQuadratureRadius;
    double tc_tol = kQuadratureTol;

    int exa_n = 1, exa_k = 1, exa_probes = 100, exa_dim = 8;

    std::string scan_nlist = "4,16,64,256,1024,4096,16384,65536";

    std::string ct_mode = "exact";
    std::uint64_t ct_samples = 100000;
    int ct_vectors = 8, ct_arity = 3;

    int ql_pairs = 10000, ql_dim = 64;

    int ce_probes = 10000, ce_dim = 64;

    std::string df_family = "dyadic";
    std::string df_sizes = "4,64";
    long df_max_iter = 10000;
    double df_tol = 1e-6;

    int po_dim = 4;
  } opt;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", opt.seed, "RNG seed (echoed in the record)");
    sub->add_option("--format", opt.format, "json|csv (csv only for tabular scans)");
    sub->add_flag("--timing", opt.timing,
                  "include elapsed_ms in the record (breaks byte determinism)");
  };

  CLI::App* omega_cmd =
      app.add_subcommand("omega", "evaluate a derivation map Omega_{k,n}");
  omega_cmd->add_option("--k", opt.omega_k, "arity of the input block");
  omega_cmd->add_option("--n", opt.omega_n, "number of output blocks");
  omega_cmd->add_option("--input", opt.omega_input, "vector/element spec")->required();
  omega_cmd->add_option("--dim", opt.omega_dim, "fallback dimension for bare tokens");
  add_common(omega_cmd);

  CLI::App* qn_cmd = app.add_subcommand("quasinorm", "Z^(n) quasinorm of an element");
  qn_cmd->add_option("--arity", opt.qn_arity, "arity of the element")->required();
  qn_cmd->add_option("--input", opt.qn_input, "element spec")->required();
  add_common(qn_cmd);

  CLI::App* ex_cmd = app.add_subcommand(
      "extremal-check", "boundary flatness of the extremal functions");
  ex_cmd->add_option("--dim", opt.ex_dim, "vector dimension");
  ex_cmd->add_option("--samples", opt.ex_samples, "number of random vectors");
  add_common(ex_cmd);

  CLI::App* tc_cmd = app.add_subcommand(
      "taylor-check", "Cauchy quadrature vs the closed Taylor coefficients");
  tc_cmd->add_option("--order", opt.tc_order, "highest Taylor order");
  tc_cmd->add_option("--radius", opt.tc_radius, "quadrature circle radius");
  tc_cmd->add_option("--nodes", opt.tc_nodes, "quadrature node count");
  tc_cmd->add_option("--dim", opt.tc_dim, "vector dimension");
  tc_cmd->add_option("--samples", opt.tc_samples, "number of random vectors");
  tc_cmd->add_option("--tol", opt.tc_tol, "node-doubling convergence tolerance");
  add_common(tc_cmd);

  CLI::App* exa_cmd = app.add_subcommand(
      "exactness", "algebraic exactness and embedding norm ratios");
  exa_cmd->add_option("--n", opt.exa_n, "subspace arity");
  exa_cmd->add_option("--k", opt.exa_k, "quotient arity");
  exa_cmd->add_option("--probes", opt.exa_probes, "number of random probes");
  exa_cmd->add_option("--dim", opt.exa_dim, "section dimension");
  add_common(exa_cmd);

  CLI::App* scan_cmd =
      app.add_subcommand("cotype-scan", "Z^(3) cotype growth scan with fits");
  scan_cmd->add_option("--n-list", opt.scan_nlist, "comma-separated n values");
  add_common(scan_cmd);

  CLI::App* ct_cmd = app.add_subcommand("cotype", "cotype-2 ratio for the standard family");
  ct_cmd->add_option("--mode", opt.ct_mode, "exact|mc");
  ct_cmd->add_option("--samples", opt.ct_samples, "Monte Carlo samples");
  ct_cmd->add_option("--vectors", opt.ct_vectors, "number of family vectors");
  ct_cmd->add_option("--arity", opt.ct_arity, "ambient arity");
  add_common(ct_cmd);

  CLI::App* ql_cmd =
      app.add_subcommand("quasilinearity", "sampled quasilinearity constant");
  ql_cmd->add_option("--pairs", opt.ql_pairs, "number of Gaussian pairs");
  ql_cmd->add_option("--dim", opt.ql_dim, "vector dimension");
  add_common(ql_cmd);

  CLI::App* ce_cmd =
      app.add_subcommand("centralizer", "sampled centralizer constant");
  ce_cmd->add_option("--probes", opt.ce_probes, "number of random (a, x) pairs");
  ce_cmd->add_option("--dim", opt.ce_dim, "vector dimension");
  add_common(ce_cmd);

  CLI::App* df_cmd =
      app.add_subcommand("defect", "splitting defect over probe families");
  df_cmd->add_option("--family", opt.df_family, "triple|dyadic");
  df_cmd->add_option("--sizes", opt.df_sizes, "comma-separated dyadic dimensions");
  df_cmd->add_option("--max-iter", opt.df_max_iter, "solver iteration cap");
  df_cmd->add_option("--tol", opt.df_tol, "solver relative tolerance");
  add_common(df_cmd);

  CLI::App* po_cmd =
      app.add_subcommand("pushout-check", "diagonal push-out exactness");
  po_cmd->add_option("--dim", opt.po_dim, "section dimension");
  add_common(po_cmd);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    // app.exit prints contextual help for help requests; collapse CLI11's
    // assorted error codes onto the documented validation exit code.
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  RunRecord record;
  record.seed = opt.seed;
  std::string csv;  // when nonempty, replaces the JSON record on stdout

  const auto started = std::chrono::steady_clock::now();
  try {
    if (opt.format != "json" && opt.format != "csv") {
      throw std::invalid_argument("--format must be json or csv");
    }
    const bool want_csv = opt.format == "csv";

    if (app.got_subcommand(omega_cmd)) {
      record.command = "omega";
      if (want_csv) throw std::invalid_argument("--format csv is only available for tabular scans");
      if (opt.omega_n < 1) throw std::invalid_argument("--n must be >= 1");
      std::vector<FiniteVector> blocks =
          parse_vector_spec(opt.omega_input, opt.omega_dim);
      if (static_cast<int>(blocks.size()) != opt.omega_k) {
        throw std::invalid_argument("--k must match the arity of --input");
      }
      record.params.set("k", JValue::integer(opt.omega_k));
      record.params.set("n", JValue::integer(opt.omega_n));
      record.params.set("input", JValue::string(opt.omega_input));

      DerivedElement element(std::move(blocks));
      const bool closed = opt.omega_k == 1;
      const DerivedElement result =
          closed ? omega_1n(element.block(0), opt.omega_n)
                 : omega_kn(element, opt.omega_n);
      record.results.set("dim", JValue::integer(element.dim()));
      record.results.set("route",
                         JValue::string(closed ? "closed-form" : "quadrature"));
      record.results.set("blocks", element_to_json(result));
    } else if (app.got_subcommand(qn_cmd)) {
      record.command = "quasinorm";
      if (want_csv) throw std::invalid_argument("--format csv is only available for tabular scans");
      std::vector<FiniteVector> blocks = parse_vector_spec(opt.qn_input);
      if (static_cast<int>(blocks.size()) != opt.qn_arity) {
        throw std::invalid_argument("--arity must match the arity of --input");
      }
      record.params.set("arity", JValue::integer(opt.qn_arity));
      record.params.set("input", JValue::string(opt.qn_input));

      DerivedElement element(std::move(blocks));
      const QuasinormValue q = zn_quasinorm(element);
      record.results.set("dim", JValue::integer(element.dim()));
      record.results.set("value", JValue::number(q.value));
      JValue dec = JValue::array();
      for (double v : q.decomposition) dec.push(JValue::number(v));
      record.results.set("decomposition", std::move(dec));
    } else if (app.got_subcommand(ex_cmd)) {
      record.command = "extremal-check";
      if (want_csv) throw std::invalid_argument("--format csv is only available for tabular scans");
      if (opt.ex_dim < 1 || opt.ex_samples < 1) {
        throw std::invalid_argument("--dim and --samples must be >= 1");
      }
      record.params.set("dim", JValue::integer(opt.ex_dim));
      record.params.set("samples", JValue::integer(opt.ex_samples));

      const CounterRng rng(opt.seed, 0x657874ull);
      double dev_sup = 0.0, dev_l1 = 0.0;
      const int boundary_points = 21;
      for (int i = 0; i < opt.ex_samples; ++i) {
        const FiniteVector x =
            gaussian_vector(opt.ex_dim, rng, static_cast<std::uint64_t>(i));
        const double norm = l2_norm(x);
        if (norm == 0.0) continue;
        for (int j = 0; j < boundary_points; ++j) {
          const double t = -10.0 + j * 1.0;
          dev_sup = std::max(
              dev_sup,
              std::fabs(lp_norm(extremal_eval(x, Complex(0.0, t)),
                                std::numeric_limits<double>::infinity()) -
                        norm) /
                  norm);
          dev_l1 = std::max(
              dev_l1,
              std::fabs(lp_norm(extremal_eval(x, Complex(1.0, t)), 1.0) - norm) /
                  norm);
        }
      }
      record.results.set("boundary_points", JValue::integer(boundary_points));
      record.results.set("max_rel_dev_sup", JValue::number(dev_sup));
      record.results.set("max_rel_dev_l1", JValue::number(dev_l1));
    } else if (app.got_subcommand(tc_cmd)) {
      record.command = "taylor-check";
      if (want_csv) throw std::invalid_argument("--format csv is only available for tabular scans");
      if (opt.tc_order < 0 || opt.tc_dim < 1 || opt.tc_samples < 1) {
        throw std::invalid_argument("bad taylor-check parameters");
      }
      record.params.set("order", JValue::integer(opt.tc_order));
      record.params.set("radius", JValue::number(opt.tc_radius));
      record.params.set("nodes", JValue::integer(opt.tc_nodes));
      record.params.set("dim", JValue::integer(opt.tc_dim));
      record.params.set("samples", JValue::integer(opt.tc_samples));
      record.params.set("tol", JValue::number(opt.tc_tol));

      const CounterRng rng(opt.seed, 0x746179ull);
      double max_rel = 0.0;
      for (int i = 0; i < opt.tc_samples; ++i) {
        const FiniteVector x =
            gaussian_vector(opt.tc_dim, rng, static_cast<std::uint64_t>(i));
        const TaylorList list = cauchy_taylor(
            [&x](Complex z) { return extremal_eval(x, z); }, opt.tc_dim,
            opt.tc_order, opt.tc_radius, opt.tc_nodes, opt.tc_tol);
        double scale = 0.0;
        std::vector<FiniteVector> expected;
        for (int k = 0; k <= opt.tc_order; ++k) {
          expected.push_back(taylor_weight(x, k));
          scale = std::max(scale, max_abs(expected.back()));
        }
        for (int k = 0; k <= opt.tc_order; ++k) {
          max_rel = std::max(
              max_rel,
              max_abs(list.coeffs[static_cast<std::size_t>(k)] -
                      expected[static_cast<std::size_t>(k)]) /
                  scale);
        }
      }
      record.results.set("max_rel_err", JValue::number(max_rel));
    } else if (app.got_subcommand(exa_cmd)) {
      record.command = "exactness";
      if (want_csv) throw std::invalid_argument("--format csv is only available for tabular scans");
      record.params.set("n", JValue::integer(opt.exa_n));
      record.params.set("k", JValue::integer(opt.exa_k));
      record.params.set("probes", JValue::integer(opt.exa_probes));
      record.params.set("dim", JValue::integer(opt.exa_dim));

      const std::vector<DerivedElement> probes =
          random_elements(opt.exa_n, opt.exa_dim, opt.exa_probes, opt.seed);
      const ExactnessReport rep = exactness_report(opt.exa_n, opt.exa_k, probes);
      record.results.set("composition_zero", JValue::boolean(rep.composition_zero));
      record.results.set("rank_embedding", JValue::integer(rep.rank_embedding));
      record.results.set("kernel_dim", JValue::integer(rep.kernel_dim));
      record.results.set("rank_union", JValue::integer(rep.rank_union));
      record.results.set("kernel_image_match", JValue::boolean(rep.kernel_image_match));
      record.results.set("ratio_min", JValue::number(rep.ratio_min));
      record.results.set("ratio_max", JValue::number(rep.ratio_max));
    } else if (app.got_subcommand(scan_cmd)) {
      record.command = "cotype-scan";
      record.params.set("n_list", JValue::string(opt.scan_nlist));
      const std::vector<long long> ns = parse_ll_list(opt.scan_nlist, "--n-list");
      const GrowthScan scan = cotype_growth_scan(ns);

      if (want_csv) {
        CsvTable table;
        table.header = "n,c_n,closed_form,rel_err,remainder";
        for (const GrowthRow& row : scan.rows) {
          const double rel =
              std::fabs(row.c - row.closed_form) / std::max(row.closed_form, 1e-300);
          table.rows.push_back({std::to_string(row.n), format_double(row.c),
                                format_double(row.closed_form), format_double(rel),
                                format_double(row.remainder)});
        }
        csv = table.dump();
      } else {
        JValue rows = JValue::array();
        for (const GrowthRow& row : scan.rows) {
          JValue r = JValue::object();
          r.set("n", JValue::integer(row.n));
          r.set("c_n", JValue::number(row.c));
          r.set("closed_form", JValue::number(row.closed_form));
          r.set("remainder", JValue::number(row.remainder));
          rows.push(std::move(r));
        }
        record.results.set("rows", std::move(rows));
        record.results.set("fit_const", JValue::number(scan.fit_const));
        record.results.set("fit_log", JValue::number(scan.fit_log));
        record.results.set("fit_log2", JValue::number(scan.fit_log2));
        record.results.set("exponent_leading", JValue::number(scan.exponent_leading));
        record.results.set("exponent_raw", JValue::number(scan.exponent_raw));
      }
    } else if (app.got_subcommand(ct_cmd)) {
      record.command = "cotype";
      if (want_csv) throw std::invalid_argument("--format csv is only available for tabular scans");
      record.params.set("mode", JValue::string(opt.ct_mode));
      record.params.set("samples", JValue::unsigned_integer(opt.ct_samples));
      record.params.set("vectors", JValue::integer(opt.ct_vectors));
      record.params.set("arity", JValue::integer(opt.ct_arity));

      CotypeOptions copts;
      if (opt.ct_mode == "exact") {
        copts.exact = true;
      } else if (opt.ct_mode == "mc") {
        copts.exact = false;
        copts.samples = opt.ct_samples;
        copts.seed = opt.seed;
      } else {
        throw std::invalid_argument("--mode must be exact or mc");
      }
      const std::vector<DerivedElement> family =
          standard_cotype_family(opt.ct_arity, opt.ct_vectors);
      const CotypeResult res = cotype2_constant(
          [](const DerivedElement& e) { return zn_quasinorm(e).value; }, family,
          copts);
      record.results.set("ratio", JValue::number(res.ratio));
      record.results.set("std_error", JValue::number(res.std_error));
      record.results.set("patterns", JValue::unsigned_integer(res.patterns));
    } else if (app.got_subcommand(ql_cmd)) {
      record.command = "quasilinearity";
      if (want_csv) throw std::invalid_argument("--format csv is only available for tabular scans");
      record.params.set("pairs", JValue::integer(opt.ql_pairs));
      record.params.set("dim", JValue::integer(opt.ql_dim));

      const ConstantReport rep =
          quasilinearity_scan(opt.ql_pairs, opt.ql_dim, opt.seed);
      const ConstantReport canonical = quasilinearity_constant(
          {{FiniteVector::unit(2, 0), FiniteVector::unit(2, 1)}});
      record.results.set("constant", JValue::number(rep.value));
      record.results.set("diagnostics", diagnostics_json(rep));
      JValue witness = JValue::array();
      for (const FiniteVector& w : rep.witnesses) witness.push(vector_to_json(w));
      record.results.set("witness_pair", std::move(witness));
      record.results.set("canonical_witness_value", JValue::number(canonical.value));
    } else if (app.got_subcommand(ce_cmd)) {
      record.command = "centralizer";
      if (want_csv) throw std::invalid_argument("--format csv is only available for tabular scans");
      record.params.set("probes", JValue::integer(opt.ce_probes));
      record.params.set("dim", JValue::integer(opt.ce_dim));

      const ConstantReport rep = centralizer_scan(opt.ce_probes, opt.ce_dim, opt.seed);
      std::vector<Complex> indicator(2);
      indicator[0] = Complex(1.0, 0.0);
      const double inv = 1.0 / std::sqrt(2.0);
      const FiniteVector canonical_x(
          std::vector<Complex>{Complex(inv, 0.0), Complex(inv, 0.0)});
      const double canonical =
          centralizer_defect(canonical_x, make_multiplier(std::move(indicator)));
      record.results.set("constant", JValue::number(rep.value));
      record.results.set("diagnostics", diagnostics_json(rep));
      JValue witness = JValue::array();
      for (const FiniteVector& w : rep.witnesses) witness.push(vector_to_json(w));
      record.results.set("witness_pair", std::move(witness));
      record.results.set("canonical_witness_value", JValue::number(canonical));
    } else if (app.got_subcommand(df_cmd)) {
      record.command = "defect";
      record.params.set("family", JValue::string(opt.df_family));
      record.params.set("sizes", JValue::string(opt.df_sizes));
      record.params.set("max_iter", JValue::integer(opt.df_max_iter));
      record.params.set("tol", JValue::number(opt.df_tol));

      DefectOptions dopts;
      dopts.max_iterations = opt.df_max_iter;
      dopts.tolerance = opt.df_tol;

      std::vector<ProbeSet> families;
      if (opt.df_family == "triple") {
        ProbeSet triple;
        triple.label = "triple";
        triple.vectors = {FiniteVector::unit(2, 0), FiniteVector::unit(2, 1),
                          FiniteVector::ones(2)};
        families.push_back(std::move(triple));
      } else if (opt.df_family == "dyadic") {
        for (long long size : parse_ll_list(opt.df_sizes, "--sizes")) {
          families.push_back(dyadic_indicator_family(static_cast<int>(size)));
        }
      } else {
        throw std::invalid_argument("--family must be triple or dyadic");
      }

      CsvTable table;
      table.header =
          "label,dim,probe_count,defect,lower_bound,certificate_gap,iterations,converged";
      JValue rows = JValue::array();
      double prev = -1.0;
      bool monotone = true;
      for (const ProbeSet& family : families) {
        const DefectSolution sol = splitting_defect(family, dopts);
        if (prev >= 0.0 && sol.defect < prev) monotone = false;
        prev = sol.defect;
        JValue r = JValue::object();
        r.set("label", JValue::string(family.label));
        r.set("dim", JValue::integer(family.vectors.front().dim()));
        r.set("probe_count", JValue::integer(static_cast<long long>(family.vectors.size())));
        r.set("defect", JValue::number(sol.defect));
        r.set("lower_bound", JValue::number(sol.lower_bound));
        r.set("certificate_gap", JValue::number(sol.certificate_gap));
        r.set("iterations", JValue::integer(sol.iterations));
        r.set("converged", JValue::boolean(sol.converged));
        rows.push(std::move(r));
        table.rows.push_back(
            {family.label, std::to_string(family.vectors.front().dim()),
             std::to_string(family.vectors.size()), format_double(sol.defect),
             format_double(sol.lower_bound), format_double(sol.certificate_gap),
             std::to_string(sol.iterations), sol.converged ? "true" : "false"});
      }
      if (want_csv) {
        csv = table.dump();
      } else {
        record.results.set("rows", std::move(rows));
        record.results.set("monotone_nondecreasing", JValue::boolean(monotone));
      }
    } else if (app.got_subcommand(po_cmd)) {
      record.command = "pushout-check";
      if (want_csv) throw std::invalid_argument("--format csv is only available for tabular scans");
      record.params.set("dim", JValue::integer(opt.po_dim));

      const PushoutReport rep = pushout_check(opt.po_dim);
      double sample_comp = 0.0;
      const std::vector<DerivedElement> samples =
          random_elements(2, opt.po_dim, 8, opt.seed);
      for (const DerivedElement& a : samples) {
        const PushoutImage img = pushout_forward(a);
        const DerivedElement z = pushout_comap(img.padded, img.bottom);
        sample_comp = std::max(sample_comp,
                               std::max(max_abs(z.block(0)), max_abs(z.block(1))));
      }
      record.results.set("composition_zero", JValue::boolean(rep.composition_zero));
      record.results.set("forward_rank", JValue::integer(rep.forward_rank));
      record.results.set("comap_kernel_dim", JValue::integer(rep.comap_kernel_dim));
      record.results.set("rank_union", JValue::integer(rep.rank_union));
      record.results.set("middle_exact", JValue::boolean(rep.middle_exact));
      record.results.set("sample_composition_max", JValue::number(sample_comp));
    }
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 2;
  }

  if (!csv.empty()) {
    out << csv;
    return 0;
  }
  if (opt.timing) {
    record.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::steady_clock::now() - started)
                            .count();
  }
  out << record.to_json().dump() << "\n";
  return 0;
}

}  // namespace twistlab
