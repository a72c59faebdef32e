#include "qffcr/validation.hpp"

#include <algorithm>
#include <functional>
#include <ostream>
#include <random>
#include <sstream>

#include "qffcr/closed_form.hpp"
#include "qffcr/dense_oracle.hpp"
#include "qffcr/optimizer.hpp"
#include "qffcr/report.hpp"
#include "qffcr/structured.hpp"

namespace qffcr {

bool ValidationReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

namespace {

using report::format_double;

std::string describe(const ProtocolParams& p, Convention conv) {
  std::ostringstream os;
  os << "N=" << p.n_qubits << " gamma=" << format_double(p.gamma) << " phi0=" << format_double(p.phi0)
     << " theta=" << format_double(p.theta) << " eta=" << format_double(p.eta)
     << " r=" << format_double(p.r) << " convention=" << to_string(conv);
  return os.str();
}

// Tracks the worst error seen and where.
class Tracker {
 public:
  Tracker(std::string name, double tol) : name_(std::move(name)), tol_(tol) {}

  void see(double err, const std::string& where) {
    if (std::isnan(err)) err = std::numeric_limits<double>::infinity();
    if (err > worst_) {
      worst_ = err;
      where_ = where;
    }
  }
  void fail(const std::string& why) {
    failed_ = true;
    where_ = why;
  }
  CheckResult result() const {
    CheckResult c;
    c.name = name_;
    c.max_error = worst_;
    c.tolerance = tol_;
    c.pass = !failed_ && worst_ <= tol_;
    if (!c.pass) c.detail = where_;
    return c;
  }

 private:
  std::string name_;
  double tol_;
  double worst_ = 0.0;
  std::string where_;
  bool failed_ = false;
};

class Suite {
 public:
  Suite(std::uint64_t seed, Fault fault) : rng_(seed), fault_(fault) {}

  ProtocolParams random_params(int n) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    ProtocolParams p;
    p.n_qubits = n;
    p.gamma = 0.1 + (kPi - 0.2) * u(rng_);
    p.phi0 = 2 * kPi * u(rng_);
    p.theta = (kPi / 2) * u(rng_);
    p.eta = 2 * kPi * u(rng_);
    p.r = u(rng_);
    return p;
  }

  void add(Tracker t) { checks_.push_back(t.result()); }

  template <class F>
  void guarded(const std::string& name, double tol, F&& body) {
    Tracker t(name, tol);
    try {
      body(t);
    } catch (const std::exception& e) {
      t.fail(std::string("exception: ") + e.what());
    }
    add(t);
  }

  DenseState exported(const ProtocolParams& p, int k, Convention conv) {
    DenseState s = state_export(branch_elements(p, k, conv), kDenseMaxQubits);
    if (fault_ == Fault::a0_sign && k == 0) s.rho(0, 0) = -s.rho(0, 0);
    return s;
  }

  std::vector<CheckResult> take() { return std::move(checks_); }

 private:
  std::mt19937_64 rng_;
  Fault fault_;
  std::vector<CheckResult> checks_;
};

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

// Probability and QFI only: fidelity to the input state moves with the rotation phase.
double invariant_diff(const MetricsRow& a, const MetricsRow& b) {
  return std::max(std::abs(a.probability - b.probability), rel(a.qfi, b.qfi));
}

double row_diff(const MetricsRow& a, const MetricsRow& b) {
  return std::max({std::abs(a.probability - b.probability), std::abs(a.fidelity - b.fidelity),
                   rel(a.qfi, b.qfi)});
}

// Sends the structured layout (outcome-0 qubits first) onto pattern's layout.
std::vector<int> layout_of(const BranchPattern& pat) {
  std::vector<int> zeros, ones;
  for (int q = 0; q < pat.n(); ++q) (pat.outcome(q) == Outcome::zero ? zeros : ones).push_back(q);
  zeros.insert(zeros.end(), ones.begin(), ones.end());
  return zeros;
}

ProtocolParams ghz(int n) {
  ProtocolParams p;
  p.n_qubits = n;
  return p;
}

}  // namespace

ValidationReport run_validation(std::uint64_t seed, Fault fault) {
  Suite s(seed, fault);
  const Convention both[] = {Convention::physical, Convention::paper};

  s.guarded("identity.structured", 1e-9, [&](Tracker& t) {
    const ProtocolParams p = ghz(10);
    for (Convention c : both) {
      const MetricsRow m = aggregate_metrics(p, c);
      t.see(std::max({std::abs(m.probability - 1), std::abs(m.fidelity - 1), std::abs(m.qfi - 100)}),
            describe(p, c));
    }
  });

  s.guarded("identity.closedform_appendix", 1e-9, [&](Tracker& t) {
    const ProtocolParams p = ghz(10);
    const MetricsRow m = closed_form_metrics(p, FormulaVariant::appendix_aggregated);
    t.see(std::max({std::abs(m.probability - 1), std::abs(m.fidelity - 1), std::abs(m.qfi - 100)}),
          describe(p, Convention::paper));
  });

  s.guarded("identity.dense", 1e-9, [&](Tracker& t) {
    for (int n = 1; n <= 4; ++n) {
      const ProtocolParams p = ghz(n);
      for (Convention c : both) {
        const MetricsRow m = run_protocol_average(p, c).metrics;
        t.see(std::max({std::abs(m.probability - 1), std::abs(m.fidelity - 1),
                        std::abs(m.qfi - n * n) / (n * n)}),
              describe(p, c));
      }
    }
  });

  for (int n = 1; n <= 4; ++n) {
    std::vector<ProtocolParams> tuples;
    for (int i = 0; i < 5; ++i) tuples.push_back(s.random_params(n));

    s.guarded("cross.branch_states.N" + std::to_string(n), 1e-10, [&](Tracker& t) {
      for (const auto& p : tuples) {
        for (Convention c : both) {
          for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
            const BranchPattern pat(n, bits);
            const BranchRun run = run_protocol_branch(p, pat, c);
            const DenseState st = permute_qubits(s.exported(p, pat.zeros(), c), layout_of(pat));
            t.see((run.unnormalized_state.rho - st.rho).cwiseAbs().maxCoeff(),
                  "dense/structured mismatch, pattern " + pat.str() + ", " + describe(p, c));
          }
        }
      }
    });

    s.guarded("cross.aggregates.N" + std::to_string(n), 1e-9, [&](Tracker& t) {
      for (const auto& p : tuples) {
        for (Convention c : both) {
          MetricsRow d;
          MetricsRow st;
          try {
            d = run_protocol_average(p, c).metrics;
            st = aggregate_metrics(p, c);
          } catch (const NumericDegeneracy&) {
            continue;
          }
          t.see(row_diff(d, st), describe(p, c));
        }
      }
    });
  }

  s.guarded("closedform.prob_vs_trace", 1e-9, [&](Tracker& t) {
    for (int n : {1, 2, 5, 8, 12}) {
      for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 5; ++j) {
          for (double r : {0.0, 0.4, 0.9}) {
            ProtocolParams p = ghz(n);
            p.theta = (kPi / 2) * i / 4;
            p.eta = 2 * kPi * j / 5;
            p.r = r;
            const cplx v = prob_total(p, FormulaVariant::verbatim);
            const cplx a = aggregate_totals(p, Convention::paper).probability;
            t.see(std::abs(v - a), describe(p, Convention::paper));
          }
        }
      }
    }
  });

  s.guarded("closedform.paper_aggregates_vs_structured", 1e-9, [&](Tracker& t) {
    for (int n = 1; n <= 12; ++n) {
      ProtocolParams p = s.random_params(n);
      const AggregateTotals a = aggregate_totals(p, Convention::paper);
      t.see(std::abs(prob_total(p, FormulaVariant::appendix_aggregated) - a.probability), describe(p, Convention::paper));
      t.see(std::abs(fid_total(p, FormulaVariant::appendix_aggregated) - a.fidelity), describe(p, Convention::paper));
      t.see(std::abs(qfi_total(p, FormulaVariant::appendix_aggregated) - a.qfi) / std::max(1.0, std::abs(a.qfi)),
            describe(p, Convention::paper));
    }
  });

  s.guarded("closedform.verbatim_qfi_gap", 1e-9, [&](Tracker& t) {
    const ProtocolParams p = ghz(10);
    t.see(std::abs(qfi_total(p, FormulaVariant::verbatim).real() - 100.1953125), "verbatim value");
    t.see(std::abs(qfi_total(p, FormulaVariant::appendix_aggregated).real() - 100.0), "aggregated value");
    t.see(std::abs(verbatim_qfi_gap(10) - 0.1953125), "gap diagnostic");
  });

  s.guarded("closedform.verbatim_vs_appendix_eta0", 1e-12, [&](Tracker& t) {
    for (int n : {2, 5, 10}) {
      for (int i = 0; i <= 8; ++i) {
        ProtocolParams p = ghz(n);
        p.theta = (kPi / 2) * i / 8;
        for (FormulaVariant v : {FormulaVariant::verbatim, FormulaVariant::appendix_aggregated}) {
          t.see(std::abs(prob_total(p, v) - 1.0), describe(p, Convention::paper));
        }
        t.see(std::abs(fid_total(p, FormulaVariant::verbatim) - fid_total(p, FormulaVariant::appendix_aggregated)),
              describe(p, Convention::paper));
      }
    }
  });

  s.guarded("closedform.class_probabilities_sum", 1e-12, [&](Tracker& t) {
    for (int n : {1, 3, 7, 12}) {
      const ProtocolParams p = s.random_params(n);
      cplx sum{0.0, 0.0};
      for (const auto& cls : branch_classes(n)) {
        sum += cls.multiplicity.convert_to<double>() * class_probability(p, cls.k);
      }
      t.see(std::abs(sum - prob_total(p, FormulaVariant::verbatim)), describe(p, Convention::paper));
    }
  });

  s.guarded("qfi.corner_formula_vs_sld", 1e-4, [&](Tracker& t) {
    for (int i = 0; i < 10; ++i) {
      const int n = 1 + i % 3;
      ProtocolParams p = s.random_params(n);
      for (int k = 0; k <= n; ++k) {
        const BranchElements e = branch_elements(p, k, Convention::physical);
        if (e.P.abs() < 1e-8 || (e.A + e.B).abs() < 1e-8) continue;
        const double corner = branch_qfi(e, n).real();
        const auto family = branch_phase_family(p, BranchPattern::leading_zeros(n, k), Convention::physical);
        const double sld = qfi_general(family, p.phi0 / n);
        t.see(std::abs(corner - sld) / std::max(1e-3, std::abs(sld)),
              "k=" + std::to_string(k) + " " + describe(p, Convention::physical));
      }
    }
  });

  s.guarded("qfi.sld_reference_states", 1e-6, [&](Tracker& t) {
    const auto qubit = [](double phi) {
      Eigen::VectorXcd v(2);
      v << 1.0 / std::sqrt(2.0), std::polar(1.0 / std::sqrt(2.0), phi);
      return DenseState{1, v * v.adjoint()};
    };
    t.see(std::abs(qfi_general(qubit, 0.3) - 1.0), "pure qubit");
    for (int n = 1; n <= 4; ++n) {
      const auto g = [n](double x) { return ghz_state(n, kPi / 2, n * x); };
      t.see(std::abs(qfi_general(g, 0.0) - n * n) / (n * n), "GHZ N=" + std::to_string(n));
    }
    const auto mixed = [](double) { return DenseState{1, Eigen::MatrixXcd::Identity(2, 2) / 2.0}; };
    t.see(std::abs(qfi_general(mixed, 0.0)), "maximally mixed");
  });

  s.guarded("branch_qfi.pure_ghz", 1e-12, [&](Tracker& t) {
    BranchElements e;
    e.A = 0.5;
    e.B = 0.5;
    e.C = 0.5;
    e.D = 0.5;
    e.P = 1.0;
    t.see(std::abs(branch_qfi(e, 10) - 100.0), "A=B=C=1/2");
  });

  s.guarded("eta_opt.identically_zero", 1e-12, [&](Tracker& t) {
    for (int i = 0; i < 100; ++i) {
      for (int j = 0; j < 100; ++j) {
        const double r = i / 99.0;
        const double th = std::min(kPi, kPi * j / 99.0);
        t.see(std::abs(eta_opt_probability(r, th)), "r=" + format_double(r) + " theta=" + format_double(th));
      }
    }
  });

  s.guarded("structured.unit_probability_at_eta0", 1e-12, [&](Tracker& t) {
    for (int i = 0; i < 20; ++i) {
      for (int j = 0; j < 20; ++j) {
        ProtocolParams p = ghz(10);
        p.r = i / 19.0;
        p.theta = (kPi / 2) * j / 19.0;
        for (Convention c : both) {
          t.see(std::abs(aggregate_totals(p, c).probability - 1.0), describe(p, c));
        }
      }
    }
  });

  s.guarded("dense.trace_preservation", 1e-10, [&](Tracker& t) {
    for (int n = 1; n <= 4; ++n) {
      const ProtocolParams p = s.random_params(n);
      const DenseAverage avg = run_protocol_average(p, Convention::physical);
      t.see(std::abs(avg.probability_total - 1.0), describe(p, Convention::physical));
    }
  });

  s.guarded("dense.branch_states_psd_hermitian", 1e-10, [&](Tracker& t) {
    for (int n = 1; n <= 3; ++n) {
      const ProtocolParams p = s.random_params(n);
      for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
        const BranchRun run = run_protocol_branch(p, BranchPattern(n, bits), Convention::physical);
        const Eigen::MatrixXcd& m = run.unnormalized_state.rho;
        t.see((m - m.adjoint()).cwiseAbs().maxCoeff(), describe(p, Convention::physical));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
        t.see(std::max(0.0, -es.eigenvalues().minCoeff()), describe(p, Convention::physical));
      }
    }
  });

  s.guarded("dense.permutation_symmetry", 1e-12, [&](Tracker& t) {
    const ProtocolParams p = s.random_params(4);
    for (Convention c : both) {
      // "0110" equals "0011" with qubits 1 and 3 swapped.
      const DenseState a = run_protocol_branch(p, BranchPattern::parse("0110"), c).unnormalized_state;
      const DenseState b = run_protocol_branch(p, BranchPattern::parse("0011"), c).unnormalized_state;
      const DenseState pb = permute_qubits(b, {0, 3, 2, 1});
      t.see((a.rho - pb.rho).cwiseAbs().maxCoeff(), describe(p, c));
    }
  });

  s.guarded("physical.eta_independence", 1e-10, [&](Tracker& t) {
    for (int n : {2, 3, 10}) {
      ProtocolParams p = s.random_params(n);
      ProtocolParams q = p;
      q.eta = 0.0;
      t.see(invariant_diff(aggregate_metrics(p, Convention::physical), aggregate_metrics(q, Convention::physical)),
            describe(p, Convention::physical));
    }
    ProtocolParams p = s.random_params(3);
    ProtocolParams q = p;
    q.eta = 0.0;
    t.see(invariant_diff(run_protocol_average(p, Convention::physical).metrics,
                   run_protocol_average(q, Convention::physical).metrics),
          "dense " + describe(p, Convention::physical));
  });

  s.guarded("structured.coherence_magnitude", 1e-12, [&](Tracker& t) {
    for (int n : {3, 9, 20}) {
      const ProtocolParams p = s.random_params(n);
      const double expect = std::abs(std::conj(p.alpha()) * p.beta()) * std::pow(1 - p.r, n / 2.0) *
                            std::pow(std::sin(p.theta) / 2, n);
      for (int k = 0; k <= n; ++k) {
        for (Convention c : both) {
          t.see(std::abs(branch_elements(p, k, c).C.abs() - expect) / std::max(1e-300, expect),
                describe(p, c));
        }
      }
    }
  });

  s.guarded("structured.trace_matches_diagonals", 1e-12, [&](Tracker& t) {
    const ProtocolParams p = s.random_params(6);
    for (int k = 0; k <= 6; ++k) {
      const BranchElements e = branch_elements(p, k, Convention::physical);
      const ScaledComplex tr = e.diag_alpha.trace() + e.diag_beta.trace();
      t.see(std::abs((tr - e.P).value()), describe(p, Convention::physical));
      t.see(std::abs(e.A.value().imag()) + std::abs(e.B.value().imag()) + std::abs(e.P.value().imag()),
            describe(p, Convention::physical));
      t.see(std::abs(e.D.value() - std::conj(e.C.value())), describe(p, Convention::physical));
    }
  });

  s.guarded("do_nothing.dense_vs_structured", 1e-8, [&](Tracker& t) {
    for (int n = 1; n <= 4; ++n) {
      const ProtocolParams p = s.random_params(n);
      t.see(row_diff(do_nothing_baseline(p), do_nothing_structured(p)), describe(p, Convention::physical));
    }
  });

  s.guarded("structured.large_register", 0.0, [&](Tracker& t) {
    ProtocolParams p = s.random_params(1000);
    for (Convention c : both) {
      try {
        const MetricsRow m = aggregate_metrics(p, c);
        if (!std::isfinite(m.probability) || !std::isfinite(m.fidelity) || !std::isfinite(m.qfi)) {
          t.fail("non-finite result at " + describe(p, c));
        }
      } catch (const NumericDegeneracy&) {
      }
    }
  });

  s.guarded("optimizer.monotone_refinement", 0.0, [&](Tracker& t) {
    GridSpec g;
    g.theta.steps = 15;
    g.eta.steps = 15;
    const OptResult o = maximize_metric(Objective::qfi, 0.3, ghz(6), g, EvalConfig{});
    for (std::size_t i = 1; i < o.incumbent_history.size(); ++i) {
      if (o.incumbent_history[i] < o.incumbent_history[i - 1]) t.fail("incumbent decreased");
    }
    t.see(std::abs(o.value - metric_of(o.companion, Objective::qfi)), "value vs companion");
  });

  s.guarded("optimizer.thread_independence", 0.0, [&](Tracker& t) {
    GridSpec g;
    g.theta.steps = 21;
    g.eta.steps = 21;
    g.refine_iters = 1;
    OptOptions one;
    OptOptions four;
    four.threads = 4;
    const OptResult a = maximize_metric(Objective::fidelity, 0.4, ghz(5), g, EvalConfig{}, one);
    const OptResult b = maximize_metric(Objective::fidelity, 0.4, ghz(5), g, EvalConfig{}, four);
    if (a.value != b.value || a.theta_star != b.theta_star || a.eta_star != b.eta_star) {
      t.fail("results differ between 1 and 4 threads");
    }
  });

  s.guarded("optimizer.dense_reevaluation", 1e-8, [&](Tracker& t) {
    GridSpec g;
    g.theta.steps = 11;
    g.eta.steps = 11;
    g.refine_iters = 1;
    for (Convention c : both) {
      EvalConfig cfg;
      cfg.convention = c;
      const OptResult o = maximize_metric(Objective::qfi, 0.35, ghz(3), g, cfg);
      ProtocolParams p = ghz(3);
      p.r = 0.35;
      p.theta = o.theta_star;
      p.eta = o.eta_star;
      t.see(rel(run_protocol_average(p, c).metrics.qfi, o.value), describe(p, c));
    }
  });

  ValidationReport rep;
  rep.seed = seed;
  rep.checks = s.take();
  return rep;
}

void print_report(std::ostream& os, const ValidationReport& rep) {
  int passed = 0;
  os << "validate seed=" << rep.seed << '\n';
  for (const auto& c : rep.checks) {
    passed += c.pass;
    os << (c.pass ? "PASS " : "FAIL ") << c.name << " max_error=" << format_double(c.max_error)
       << " tol=" << format_double(c.tolerance);
    if (!c.pass) os << " at " << c.detail;
    os << '\n';
  }
  os << passed << "/" << rep.checks.size() << " checks passed\n";
}

}  // namespace qffcr
