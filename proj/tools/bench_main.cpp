// Timing harness for the OpenMP kernels against their serial references:
// the cocycle identity sweep, the Yang-Baxter defect tensor, and the
// box-center solve.  Each kernel is run both ways and cross-checked, so the
// bench doubles as a consistency test on larger inputs than the unit suite.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "twist/analysis.hpp"
#include "twist/builtins.hpp"
#include "twist/cocycle.hpp"
#include "twist/document.hpp"
#include "twist/lie.hpp"
#include "twist/twisted.hpp"

using namespace twist;

namespace {

double time_once(const std::function<void()>& fn) {
  auto t0 = std::chrono::steady_clock::now();
  fn();
  auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count();
}

void row(const std::string& label, double serial, double parallel) {
  std::printf("%-46s %9.3f s %9.3f s %7.2fx\n", label.c_str(), serial,
              parallel, parallel > 0 ? serial / parallel : 0.0);
}

// Direct sum of m Heisenberg triples [e_i, f_i] = z_i, with a bivector
// supported on the e_i ^ z_i planes plus rational cross terms.
std::pair<lie::LieAlgebra, lie::Bivector> heisenberg_sum(int m) {
  std::vector<std::string> names;
  for (int i = 0; i < m; ++i) {
    names.push_back("e" + std::to_string(i));
    names.push_back("f" + std::to_string(i));
    names.push_back("z" + std::to_string(i));
  }
  lie::LieAlgebra l = lie::LieAlgebra::abelian(names);
  for (int i = 0; i < m; ++i) l.set_bracket(3 * i, 3 * i + 1, 3 * i + 2, scalars::Scalar(1));
  lie::Bivector r = lie::Bivector::zero(3 * m);
  for (int i = 0; i < m; ++i) {
    r.add_wedge(3 * i, 3 * i + 2, scalars::Scalar(1));
    for (int j = 0; j < m; ++j)
      if (i != j)
        r.add_wedge(3 * i, 3 * j + 2, scalars::Scalar(scalars::Rat(i - j, i + j + 2)));
  }
  return {std::move(l), std::move(r)};
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("threads: %d\n\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (compiled without OpenMP)\n\n");
#endif
  std::printf("%-46s %11s %11s %8s\n", "kernel", "serial", "parallel",
              "speedup");

  // 1. Cocycle identity sweep over all monomial triples in a box.
  {
    cli::Document doc =
        cli::parse_document(cli::builtin_document("quantum-torus"));
    cocycle::Cocycle j = cli::build_cocycle(doc);
    cocycle::CheckOptions opts;
    opts.degree = 4;
    opts.box_lo = -3;
    opts.box_hi = 3;

    cocycle::AxiomReport serial_rep, parallel_rep;
    opts.parallel = false;
    double ts = time_once(
        [&] { serial_rep = cocycle_axiom_check(doc.group, j, opts); });
    opts.parallel = true;
    double tp = time_once(
        [&] { parallel_rep = cocycle_axiom_check(doc.group, j, opts); });
    if (!serial_rep.ok() || !parallel_rep.ok() ||
        serial_rep.triples_checked != parallel_rep.triples_checked) {
      std::fprintf(stderr, "cocycle kernel mismatch\n");
      return 1;
    }
    row("cocycle identity (" +
            std::to_string(serial_rep.triples_checked) + " triples)",
        ts, tp);
  }

  // 2. Yang-Baxter defect tensor on a 45-dimensional algebra.
  {
    auto [l, r] = heisenberg_sum(15);
    lie::CybeReport serial_rep, parallel_rep;
    double ts = time_once([&] { serial_rep = lie::cybe_check_serial(l, r); });
    double tp = time_once([&] { parallel_rep = lie::cybe_check(l, r); });
    if (serial_rep.ok != parallel_rep.ok ||
        serial_rep.violations.size() != parallel_rep.violations.size()) {
      std::fprintf(stderr, "yang-baxter kernel mismatch\n");
      return 1;
    }
    row("yang-baxter defect (dim " + std::to_string(l.dim()) + ")", ts, tp);
  }

  // 3. Box-center solve, one exact linear system per torus block.
  {
    cli::Document doc =
        cli::parse_document(cli::builtin_document("mixed-nilpotent"));
    cocycle::CocycleContext ctx(doc.group, cli::build_cocycle(doc));
    twistalg::Presentation p = twistalg::derive_presentation(ctx);
    const long degree = 6, box = 8;

    analysis::CenterBasis serial_cb, parallel_cb;
    double ts = time_once(
        [&] { serial_cb = analysis::center_upto(p, degree, box, false); });
    double tp = time_once(
        [&] { parallel_cb = analysis::center_upto(p, degree, box, true); });
    if (serial_cb.elements.size() != parallel_cb.elements.size()) {
      std::fprintf(stderr, "center kernel mismatch\n");
      return 1;
    }
    row("box center (degree " + std::to_string(degree) + ", box " +
            std::to_string(box) + ", " +
            std::to_string(serial_cb.elements.size()) + " central)",
        ts, tp);
  }

  return 0;
}
