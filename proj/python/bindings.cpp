#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dbc/harness.hpp"
#include "dbc/twist.hpp"

namespace py = pybind11;

namespace {

dbc::SuiteConfig make_config(std::optional<int> rank, const std::vector<std::string>& words,
                             std::optional<int> samples, std::optional<double> tol, std::uint64_t seed,
                             const std::vector<std::string>& suites, unsigned workers) {
  dbc::SuiteConfig c;
  c.rank = rank;
  for (const auto& w : words) c.words.push_back(dbc::parse_word_tuple(w));
  c.samples = samples;
  c.tol = tol;
  c.seed = seed;
  c.suites = suites;
  c.workers = workers;
  return c;
}

}  // namespace

PYBIND11_MODULE(_dbc, m) {
  m.doc() = "Double Bruhat cell groupoid verification kernels";

  auto base = py::register_exception<dbc::Error>(m, "Error");
  py::register_exception<dbc::NotInOpenCell>(m, "NotInOpenCell", base.ptr());
  py::register_exception<dbc::DomainEscape>(m, "DomainEscape", base.ptr());
  py::register_exception<dbc::NotInDressingDomain>(m, "NotInDressingDomain", base.ptr());
  py::register_exception<dbc::NotComposable>(m, "NotComposable", base.ptr());
  py::register_exception<dbc::NotInCell>(m, "NotInCell", base.ptr());
  py::register_exception<dbc::InvariantViolation>(m, "InvariantViolation", base.ptr());
  py::register_exception<dbc::IndexMismatch>(m, "IndexMismatch", base.ptr());
  py::register_exception<dbc::RankDeficient>(m, "RankDeficient", base.ptr());
  py::register_exception<dbc::ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<dbc::IoError>(m, "IoError", base.ptr());

  m.def(
      "gauss_decompose",
      [](const dbc::Mat& g) {
        const dbc::GaussFactors f = dbc::gauss_decompose(g);
        return py::make_tuple(f.m, f.h, f.n);
      },
      py::arg("g"), "Factor g = m h n (unit lower, diagonal, unit upper).");
  m.def("torus_sqrt", &dbc::torus_sqrt, py::arg("t"), py::arg("hint") = std::nullopt);
  m.def("weyl_representative", &dbc::weyl_representative, py::arg("word"), py::arg("n"));
  m.def("pi_st_at", &dbc::pi_st_at, py::arg("g"));
  m.def(
      "dress",
      [](const dbc::Mat& b, const dbc::Mat& u) {
        const dbc::Dressed d = dbc::dress(b, u);
        return py::make_tuple(d.u_prime, d.b_prime);
      },
      py::arg("b"), py::arg("u"), "Solve b u = u' b' in the double; returns (u', b').");

  m.def(
      "tstar_mult",
      [](const dbc::Vec& v1, const dbc::Vec& v2) {
        const dbc::TstarTwist tw = dbc::make_tstar_twist();
        return dbc::Vec(dbc::tstar_coords(tw.mult(dbc::tstar_from_coords(v1), dbc::tstar_from_coords(v2))));
      },
      py::arg("v1"), py::arg("v2"), "Twisted product of two points (p1, p2, q1, q2).");
  m.def(
      "tstar_source",
      [](const dbc::Vec& v) {
        const auto s = dbc::make_tstar_twist().source(dbc::tstar_from_coords(v));
        return py::make_tuple(s.first, s.second);
      },
      py::arg("v"));
  m.def(
      "tstar_target",
      [](const dbc::Vec& v) {
        const auto t = dbc::make_tstar_twist().target(dbc::tstar_from_coords(v));
        return py::make_tuple(t.first, t.second);
      },
      py::arg("v"));

  m.def("suite_names", &dbc::suite_names);
  m.def(
      "run_json",
      [](std::optional<int> rank, const std::vector<std::string>& words, std::optional<int> samples,
         std::optional<double> tol, std::uint64_t seed, const std::vector<std::string>& suites, unsigned workers) {
        const dbc::SuiteConfig c = make_config(rank, words, samples, tol, seed, suites, workers);
        std::vector<dbc::SuiteReport> reports;
        {
          py::gil_scoped_release release;
          reports = dbc::run(c);
        }
        return dbc::report_json(reports);
      },
      py::arg("rank") = std::nullopt, py::arg("words") = std::vector<std::string>{},
      py::arg("samples") = std::nullopt, py::arg("tol") = std::nullopt, py::arg("seed") = 20240917ULL,
      py::arg("suites") = std::vector<std::string>{}, py::arg("workers") = 0u,
      "Run verification suites and return the JSON report.");
}
