#include "dbc/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "dbc/twist.hpp"
#include "json.hpp"

namespace dbc {

namespace {

using Clock = std::chrono::steady_clock;

constexpr int kAttempts = 8;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Anchor strings of the acceptance table.
namespace anchor {
const char* const kTstar = "T*C example: symplectic groupoid over (C^2, -q1 q2 dq1^dq2)";
const char* const kAxioms = "Prop lem-theta-submersion: groupoid axioms of G^{w,w}";
const char* const kMainThm = "Theorem thm-main-Guu";
const char* const kActions = "Theorem thm-lhd-BB_-";
const char* const kDirac1 = "Theorem thm-lhd-BB_- / eq-dirac1";
const char* const kDirac2 = "Theorem thm-lhd-BB_- / eq-dirac2";
const char* const kDoubleGroupoid = "Double groupoid suite: Gamma multiplications";
const char* const kIotaMorphism = "eq-iota-morphism";
const char* const kGamMult = "eq-gam-mult";
const char* const kPPush = "Double groupoid suite: p(pi_Gamma) = pi^+_D";
const char* const kNondegenerate = "Double groupoid suite: pi_Gamma nondegenerate";
const char* const kTwistMult = "lem-twist-mult";
const char* const kCompPi = "eq-comp-pi+";
const char* const kJpm = "Prop lem-J^pm";
const char* const kIu = "Lemma lem-isom-I_u";
const char* const kKappaHom = "Prop pro-kappa_uv / eq-mult-y_iz_i";
const char* const kKappaT = "Lemma lem-kappa_uv: T-orbit invariance";
const char* const kKappaOpen = "Lemma lem-kappa_uv: open condition";
const char* const kLem1 = "Lemma lem1-kappa_uv";
const char* const kKernel = "Kernel sanity";
const char* const kTwistGroupoid = "Theorem main-thm-gpoid";
const char* const kThetaTau = "Prop theta-tau";
const char* const kRL = "R_L local Poisson isomorphism";
}  // namespace anchor

struct Instance {
  int n;
  WordTuple w;
};

struct TwistInstance {
  int n;
  WordTuple u;
  WordTuple v;
};

struct CheckDef {
  std::string id;
  const char* anchor;
  double tol;
  int criterion;
  // Counting and determinant checks keep their tolerance under --tol.
  bool fixed_tol = false;
};

using SampleFn = std::function<std::vector<double>(Rng&)>;

std::uint64_t stream_key(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string instance_tag(int n, const WordTuple& w) { return "[n=" + std::to_string(n) + ";w=" + format_word_tuple(w) + "]"; }

std::string twist_tag(const TwistInstance& t) {
  return "[n=" + std::to_string(t.n) + ";u=" + format_word_tuple(t.u) + ";v=" + format_word_tuple(t.v) + "]";
}

class SuiteRunner {
 public:
  SuiteRunner(const std::string& suite, const SuiteConfig& config) : suite_(suite), config_(config) {
    report_.suite = suite;
    workers_ = config.workers ? config.workers : std::max(1u, std::thread::hardware_concurrency());
  }

  // Evaluate f at `default_samples` keyed sample points and reduce each
  // component by max. A sample that leaves a domain is redrawn from the next
  // key; a sample that fails every attempt contributes an infinite residual.
  void group(const std::vector<CheckDef>& defs, int default_samples, const SampleFn& f) {
    const auto t0 = Clock::now();
    const int count = config_.samples ? *config_.samples : default_samples;
    const std::uint64_t key = stream_key(suite_ + "/" + defs.front().id);
    const size_t k = defs.size();
    std::vector<std::vector<double>> results(count, std::vector<double>(k, kInf));
    std::atomic<int> next{0};
    auto worker = [&] {
      for (int i = next++; i < count; i = next++) {
        for (int a = 0; a < kAttempts; ++a) {
          Rng rng = keyed_rng(config_.seed, key, static_cast<std::uint64_t>(i) * kAttempts + a);
          try {
            std::vector<double> r = f(rng);
            r.resize(k, kInf);
            results[i] = r;
            break;
          } catch (const Error&) {
          }
        }
      }
    };
    const unsigned nthreads = std::min<unsigned>(workers_, std::max(1, count));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < nthreads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    const double ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    for (size_t j = 0; j < k; ++j) {
      CheckRecord rec;
      rec.id = defs[j].id;
      rec.anchor = defs[j].anchor;
      rec.samples = count;
      rec.max_residual = 0.0;
      for (int i = 0; i < count; ++i) {
        const double r = std::isnan(results[i][j]) ? kInf : results[i][j];
        rec.max_residual = std::max(rec.max_residual, r);
      }
      rec.tol = (config_.tol && !defs[j].fixed_tol) ? *config_.tol : defs[j].tol;
      rec.pass = rec.max_residual <= rec.tol;
      rec.criterion = defs[j].criterion;
      rec.wall_ms = ms / static_cast<double>(k);
      report_.checks.push_back(rec);
    }
  }

  SuiteReport finish(double wall_ms) {
    report_.wall_ms = wall_ms;
    return report_;
  }

 private:
  std::string suite_;
  const SuiteConfig& config_;
  SuiteReport report_;
  unsigned workers_;
};

WordTuple letters(std::initializer_list<int> ls) {
  WordTuple out;
  for (int l : ls) out.push_back({l});
  return out;
}

// Instances used by a suite: the configured (rank, words) when given,
// otherwise the suite defaults filtered by the configured rank.
std::vector<Instance> instances(const SuiteConfig& c, const std::vector<Instance>& defaults) {
  if (!c.words.empty()) {
    const int n = *c.rank;
    std::vector<Instance> out;
    for (const auto& w : c.words) out.push_back({n, w});
    return out;
  }
  if (!c.rank) return defaults;
  std::vector<Instance> out;
  for (const auto& d : defaults) {
    if (d.n == *c.rank) out.push_back(d);
  }
  if (out.empty()) {
    WordTuple w;
    for (int i = 1; i < *c.rank; ++i) w.push_back({i});
    out.push_back({*c.rank, w});
  }
  return out;
}

std::vector<int> ranks(const SuiteConfig& c) {
  if (c.rank) return {*c.rank};
  return {2, 3};
}

std::vector<TwistInstance> twist_instances(const SuiteConfig& c) {
  const std::vector<TwistInstance> defaults = {{2, letters({1}), letters({1})},
                                               {3, letters({1}), letters({2})},
                                               {3, letters({1, 2}), letters({1})}};
  if (!c.words.empty()) {
    std::vector<TwistInstance> out;
    for (const auto& w : c.words) {
      if (w.size() == 1) {
        out.push_back({*c.rank, w, w});
      } else {
        out.push_back({*c.rank, WordTuple(w.begin(), w.begin() + 1), WordTuple(w.begin() + 1, w.end())});
      }
    }
    return out;
  }
  if (!c.rank) return defaults;
  std::vector<TwistInstance> out;
  for (const auto& d : defaults) {
    if (d.n == *c.rank) out.push_back(d);
  }
  if (out.empty()) out.push_back({*c.rank, letters({1}), letters({*c.rank - 1})});
  return out;
}

double rel_diff(const Mat& a, const Mat& b) { return max_abs(Mat(a - b)) / (1.0 + max_abs(b)); }

Mat random_sl(Rng& rng, int n, double scale) { return random_borel(rng, n, false, scale) * random_borel(rng, n, true, scale); }

Mat random_torus(Rng& rng, int n, double scale) {
  const Vec d = random_cvec(rng, n - 1, scale);
  Mat t = Mat::Identity(n, n);
  cplx prod = 1.0;
  for (int i = 0; i + 1 < n; ++i) {
    t(i, i) = std::exp(d(i));
    prod *= t(i, i);
  }
  t(n - 1, n - 1) = 1.0 / prod;
  return t;
}

// ---------------------------------------------------------------------------
// kernel

void kernel_suite(SuiteRunner& s, const SuiteConfig& c) {
  for (int n : ranks(c)) {
    const std::string tag = "[n=" + std::to_string(n) + "]";
    if (n == 3 || c.rank) {
      s.group({{"jacobi_pi_st" + tag, anchor::kKernel, 1e-5, 8}}, 50, [n](Rng& rng) {
        const Mat g = random_sl(rng, n, 0.3);
        BivectorField field = [n](const Vec& x) { return pi_st_at(unvec(x, n)); };
        return std::vector<double>{jacobi_residual(field, vec(g))};
      });
    }
    s.group({{"gauss_roundtrip" + tag, anchor::kKernel, 1e-11, 8},
             {"gauss_ul_roundtrip" + tag, anchor::kKernel, 1e-11, 8},
             {"dress_roundtrip" + tag, anchor::kKernel, 1e-11, 8},
             {"cell_factor_roundtrip" + tag, anchor::kKernel, 1e-11, 8},
             {"cell_chart_roundtrip" + tag, anchor::kKernel, 1e-11, 8}},
            200, [n](Rng& rng) {
              const Mat g = random_sl(rng, n, 0.3);
              const GaussFactors f = gauss_decompose(g);
              const GaussFactors fu = gauss_decompose_ul(g);
              const Mat b = random_borel(rng, n, false, 0.2);
              const Mat u = random_borel(rng, n, true, 0.2);
              const Dressed d = dress(b, u);
              const Undressed ud = undress(d.u_prime, d.b_prime);
              const double rd = std::max(rel_diff(ud.b, b), rel_diff(ud.u, u));
              WordTuple w;
              for (int i = 1; i < n; ++i) w.push_back({i});
              const TupleChart chart(n, w);
              const Vec t = random_cvec(rng, chart.dim(), 0.5);
              const CellTuple cells = chart.param(t);
              const CellChart& first = chart.charts().front();
              const Mat bb = random_borel(rng, n, false, 0.3);
              auto [cc, rest] = first.factor_BuB(cells.front() * bb);
              const double rf = std::max(rel_diff(cc, cells.front()), rel_diff(rest, bb));
              const double rc = max_abs(Vec(chart.coords(cells) - t)) / (1.0 + max_abs(t));
              return std::vector<double>{rel_diff(f.m * f.h * f.n, g), rel_diff(fu.n * fu.h * fu.m, g), rd, rf, rc};
            });
    s.group({{"torus_sqrt" + tag, anchor::kKernel, 1e-12, 8}}, 200, [n](Rng& rng) {
      const Mat t = random_torus(rng, n, 1.0);
      const Mat r = torus_sqrt(t);
      const Mat h = torus_sqrt(t, Mat(-r));
      return std::vector<double>{std::max({rel_diff(r * r, t), rel_diff(h * h, t),
                                           std::abs(r.diagonal().prod() - 1.0), std::abs(h.diagonal().prod() - 1.0)})};
    });
  }
}

// ---------------------------------------------------------------------------
// gamma

void gamma_suite(SuiteRunner& s, const SuiteConfig& c) {
  constexpr double kScale = 0.2;
  for (int n : ranks(c)) {
    const std::string tag = "[n=" + std::to_string(n) + "]";
    s.group({{"assoc_over_Gstar" + tag, anchor::kDoubleGroupoid, 1e-9, 5},
             {"assoc_over_G" + tag, anchor::kDoubleGroupoid, 1e-9, 5},
             {"identity_laws" + tag, anchor::kDoubleGroupoid, 1e-9, 5},
             {"inverse_laws" + tag, anchor::kDoubleGroupoid, 1e-9, 5}},
            100, [n](Rng& rng) {
              auto B = [&] { return random_borel(rng, n, false, kScale); };
              auto Bm = [&] { return random_borel(rng, n, true, kScale); };
              const GammaElement a1 = gamma_lower(B(), Bm());
              const GammaElement a2 = gamma_lower(B(), a1.u_prime);
              const GammaElement a3 = gamma_lower(B(), a2.u_prime);
              const double r1 = distance(gamma_mult_over_Gstar(gamma_mult_over_Gstar(a1, a2), a3),
                                         gamma_mult_over_Gstar(a1, gamma_mult_over_Gstar(a2, a3)));
              const GammaElement b1 = gamma_lower(B(), Bm());
              const GammaElement b2 = gamma_lower(b1.b_prime, Bm());
              const GammaElement b3 = gamma_lower(b2.b_prime, Bm());
              const double r2 = distance(gamma_mult_over_G(gamma_mult_over_G(b1, b2), b3),
                                         gamma_mult_over_G(b1, gamma_mult_over_G(b2, b3)));
              const double r3 = std::max({distance(gamma_mult_over_Gstar(a1, eps_Gstar(tau_Gstar(a1))), a1),
                                          distance(gamma_mult_over_Gstar(eps_Gstar(theta_Gstar(a1)), a1), a1),
                                          distance(gamma_mult_over_G(b1, eps_G(tau_G(b1))), b1),
                                          distance(gamma_mult_over_G(eps_G(theta_G(b1)), b1), b1)});
              const double r4 = std::max({distance(gamma_mult_over_Gstar(a1, iota_Gstar(a1)), eps_Gstar(theta_Gstar(a1))),
                                          distance(gamma_mult_over_Gstar(iota_Gstar(a1), a1), eps_Gstar(tau_Gstar(a1))),
                                          distance(gamma_mult_over_G(b1, iota_G(b1)), eps_G(theta_G(b1))),
                                          distance(gamma_mult_over_G(iota_G(b1), b1), eps_G(tau_G(b1)))});
              return std::vector<double>{r1, r2, r3, r4};
            });
    s.group({{"iota_morphism_G" + tag, anchor::kIotaMorphism, 1e-10, 5},
             {"iota_morphism_Gstar" + tag, anchor::kIotaMorphism, 1e-10, 5},
             {"cocycle_over_Gstar" + tag, anchor::kGamMult, 1e-9, 5},
             {"cocycle_over_G" + tag, anchor::kGamMult, 1e-9, 5}},
            100, [n](Rng& rng) {
              auto B = [&] { return random_borel(rng, n, false, kScale); };
              auto Bm = [&] { return random_borel(rng, n, true, kScale); };
              const GammaElement a1 = gamma_lower(B(), Bm());
              const GammaElement a2 = gamma_lower(B(), a1.u_prime);
              const double r1 = distance(iota_G(gamma_mult_over_Gstar(a1, a2)),
                                         gamma_mult_over_Gstar(iota_G(a1), iota_G(a2)));
              const GammaElement b1 = gamma_lower(B(), Bm());
              const GammaElement b2 = gamma_lower(b1.b_prime, Bm());
              const double r2 = distance(iota_Gstar(gamma_mult_over_G(b1, b2)),
                                         gamma_mult_over_G(iota_Gstar(b1), iota_Gstar(b2)));
              const Mat u = Bm();
              const Mat g1 = B();
              const Mat g2 = B();
              const GammaElement first = gamma_upper(u, g1);
              const double r3 = distance(gamma_upper(u, g1 * g2),
                                         gamma_mult_over_Gstar(gamma_upper(first.u, g2), first));
              const Mat u1 = Bm();
              const Mat u2 = Bm();
              const Mat g = B();
              const GammaElement second = gamma_upper(u2, g);
              const double r4 = distance(gamma_upper(u1 * u2, g), gamma_mult_over_G(gamma_upper(u1, second.b), second));
              return std::vector<double>{r1, r2, r3, r4};
            });
    s.group({{"p_push_pi_plus_D" + tag, anchor::kPPush, 1e-8, 5},
             {"pi_gamma_nondegenerate_inverse_det" + tag, anchor::kNondegenerate, 1e10, 5, true},
             {"twist_mult_identity" + tag, anchor::kTwistMult, 1e-10, 5},
             {"dress_graph_roundtrip" + tag, anchor::kDoubleGroupoid, 1e-9, 5}},
            100, [n](Rng& rng) {
              const GammaElement g = gamma_lower(random_borel(rng, n, false, kScale), random_borel(rng, n, true, kScale));
              const Mat p = pi_gamma_at(g).coeffs;
              auto pmap = [n](const Vec& v) {
                const DoubleElement d = gamma_to_double(gamma_from_left_coords(v, n));
                return concat({vec(d.g), Vec(d.t.diagonal())});
              };
              const Mat pd = pi_plus_double_at(gamma_to_double(g));
              const double r1 = rel_diff(pushforward(pmap, gamma_left_coords(g), p), pd);
              const double r2 = 1.0 / std::abs(p.determinant());
              const Mat g1 = random_borel(rng, n, false, kScale);
              const Mat u1 = random_borel(rng, n, true, kScale);
              const Mat g2 = random_borel(rng, n, false, kScale);
              const Mat u2 = random_borel(rng, n, true, kScale);
              const Undressed ud = undress(u1, g2);
              const DoubleElement lhs = embed_B(g1) * embed_Bminus(u1) * embed_B(g2) * embed_Bminus(u2);
              const DoubleElement rhs = embed_B(g1 * ud.b) * embed_Bminus(ud.u * u2);
              const double r3 = distance(lhs, rhs);
              const auto pair = lagrangian_bisection_pair(g);
              const double r4 = std::max(distance(gamma_upper(g.u_prime, g.b_prime), g), distance(pair.first, g));
              return std::vector<double>{r1, r2, r3, r4};
            });
  }
}

// ---------------------------------------------------------------------------
// poisson

void poisson_suite(SuiteRunner& s, const SuiteConfig& c) {
  for (int n : ranks(c)) {
    const std::string tag = "[n=" + std::to_string(n) + "]";
    s.group({{"comp_pi_plus_reconstruction" + tag, anchor::kCompPi, 1e-9, 6},
             {"pi_gamma_right_chart_transport" + tag, anchor::kCompPi, 1e-8, 6},
             {"pi_st_inversion_antipode" + tag, anchor::kKernel, 1e-6, 0}},
            50, [n](Rng& rng) {
              const GammaElement g = gamma_lower(random_borel(rng, n, false, 0.2), random_borel(rng, n, true, 0.2));
              const DualBorelBases db = dual_borel_bases(n);
              std::vector<Vec> rho;
              std::vector<Vec> lam;
              for (size_t k = 0; k < db.x.size(); ++k) {
                auto fb = [&](const Vec& s) { return borel_coords(g.b * expm(s(0) * db.x[k]), false); };
                auto fu = [&](const Vec& s) { return borel_coords(expm(s(0) * db.xi[k]) * g.u, true); };
                rho.push_back(kMixedScale * numeric_jacobian(fb, Vec::Zero(1)).col(0));
                lam.push_back(numeric_jacobian(fu, Vec::Zero(1)).col(0));
              }
              const Mat p = pi_gamma_at(g).coeffs;
              const Mat mp = mixed_product(pi_st_borel(g.b, false), Mat(-pi_st_borel(g.u, true)), rho, lam);
              auto l2r = [n](const Vec& v) { return gamma_right_coords(gamma_from_left_coords(v, n)); };
              const double r2 = rel_diff(pushforward(l2r, gamma_left_coords(g), p), pi_gamma_right_chart(g).coeffs);
              const Mat x = random_sl(rng, n, 0.3);
              auto inversion = [n](const Vec& v) { return vec(unvec(v, n).inverse()); };
              const double r3 = poisson_map_residual(inversion, vec(x), pi_st_at(x), pi_st_at(x.inverse()), -1.0);
              return std::vector<double>{rel_diff(mp, p), r2, r3};
            });
  }
  s.group({{"tstar_moment_pushforward", anchor::kTstar, 1e-12, 0}}, 50, [](Rng& rng) {
    const Vec x = random_cvec(rng, 2, 0.5);
    auto mu = [](const Vec& v) {
      Vec out(1);
      out(0) = std::exp(v(0) * v(1));
      return out;
    };
    const Mat p = wedge(Vec::Unit(2, 0), Vec::Unit(2, 1));
    return std::vector<double>{poisson_map_residual(mu, x, p, Mat::Zero(1, 1), 1.0)};
  });
}

// ---------------------------------------------------------------------------
// cells

void cells_suite(SuiteRunner& s, const SuiteConfig& c) {
  const std::vector<Instance> defaults = {{2, letters({1})}, {3, letters({1, 2})}, {2, letters({1, 1})}};
  for (const Instance& inst : instances(c, defaults)) {
    const std::string tag = instance_tag(inst.n, inst.w);
    const TupleChart chart(inst.n, inst.w);
    const int n = inst.n;
    s.group({{"j_plus" + tag, anchor::kJpm, 1e-6, 6},
             {"j_minus" + tag, anchor::kJpm, 1e-6, 6},
             {"cocycle_law_b" + tag, anchor::kJpm, 1e-9, 6},
             {"cocycle_law_bminus" + tag, anchor::kJpm, 1e-9, 6}},
            50, [chart, n](Rng& rng) {
              const CellTuple cells = chart.param(random_cvec(rng, chart.dim(), 0.5));
              const double r1 = j_plus_residual(chart, cells, random_borel(rng, n, false, 0.3));
              const double r2 = j_minus_residual(chart, cells, random_borel(rng, n, true, 0.3));
              const Mat b1 = random_borel(rng, n, false, 0.3);
              const Mat b2 = random_borel(rng, n, false, 0.3);
              const BorelActionResult inner = chart.act_b(b2, cells);
              const BorelActionResult outer = chart.act_b(b1, inner.cells);
              const BorelActionResult direct = chart.act_b(b1 * b2, cells);
              const double r3 = std::max(distance(outer.cells, direct.cells),
                                         rel_diff(outer.cocycle * inner.cocycle, direct.cocycle));
              const Mat m1 = random_borel(rng, n, true, 0.3);
              const Mat m2 = random_borel(rng, n, true, 0.3);
              const BorelActionResult in2 = chart.act_bminus(cells, m1);
              const BorelActionResult out2 = chart.act_bminus(in2.cells, m2);
              const BorelActionResult dir2 = chart.act_bminus(cells, m1 * m2);
              const double r4 = std::max(distance(out2.cells, dir2.cells),
                                         rel_diff(in2.cocycle * out2.cocycle, dir2.cocycle));
              return std::vector<double>{r1, r2, r3, r4};
            });
    s.group({{"I_u_anti_poisson" + tag, anchor::kIu, 1e-8, 6}}, 100, [chart](Rng& rng) {
      const CellTuple cells = chart.param(random_cvec(rng, chart.dim(), 0.5));
      auto iu = [&chart](const Vec& t) { return chart.coords(I_u(chart.param(t))); };
      return std::vector<double>{poisson_map_residual(iu, chart.coords(cells), chart.pi_n_prime_at(cells).coeffs,
                                                      chart.pi_n_at(I_u(cells)).coeffs, -1.0)};
    });
  }
}

// ---------------------------------------------------------------------------
// gdbc

GdbcElement sample_after(const Gdbc& g, Rng& rng, const CellTuple& source) { return g.sample(rng, source); }

void gdbc_axioms(SuiteRunner& s, const Instance& inst) {
  const std::string tag = instance_tag(inst.n, inst.w);
  const Gdbc g(inst.n, inst.w);
  s.group({{"invariant" + tag, anchor::kAxioms, 1e-9, 2},
           {"identity_laws" + tag, anchor::kAxioms, 1e-9, 2},
           {"inverse_laws" + tag, anchor::kAxioms, 1e-9, 2},
           {"associativity" + tag, anchor::kAxioms, 1e-9, 2}},
          200, [g](Rng& rng) {
            const GdbcElement x1 = g.sample(rng);
            const GdbcElement x2 = sample_after(g, rng, x1.cm);
            const GdbcElement x3 = sample_after(g, rng, x2.cm);
            const double r0 = std::max({g.invariant_residual(x1), g.invariant_residual(x2), g.invariant_residual(x3)});
            const double r1 = std::max(distance(g.mult(g.identity(g.source(x1)), x1), x1),
                                       distance(g.mult(x1, g.identity(g.target(x1))), x1));
            const double r2 = std::max(distance(g.mult(x1, g.inverse(x1)), g.identity(g.source(x1))),
                                       distance(g.mult(g.inverse(x1), x1), g.identity(g.target(x1))));
            const double r3 = distance(g.mult(g.mult(x1, x2), x3), g.mult(x1, g.mult(x2, x3)));
            return std::vector<double>{r0, r1, r2, r3};
          });
}

void gdbc_poisson(SuiteRunner& s, const Instance& inst) {
  const std::string tag = instance_tag(inst.n, inst.w);
  const Gdbc g(inst.n, inst.w);
  s.group({{"multiplication_coisotropy" + tag, anchor::kMainThm, 1e-6, 3}}, 100, [g](Rng& rng) {
    const GdbcElement x1 = g.sample(rng);
    const Vec p1 = g.intrinsic(x1);
    const GdbcElement x2 = g.sample(rng, x1.cm);
    const Vec p2 = g.intrinsic(x2);
    const int lu = g.u_chart().dim();
    const int lv = g.v_chart().dim();
    const Vec q = concat({p1, Vec(p2.segment(lu, lv)), Vec(p2.tail(g.n() - 1))});
    return std::vector<double>{g.multiplication_coisotropy(q)};
  });
  s.group({{"theta_push_pi_n" + tag, anchor::kMainThm, 1e-6, 3},
           {"tau_push_minus_pi_n" + tag, anchor::kMainThm, 1e-6, 3},
           {"tangency" + tag, anchor::kMainThm, 1e-6, 0},
           {"product_map_pi_st" + tag, anchor::kMainThm, 1e-6, 0}},
          100, [g](Rng& rng) {
            const GdbcElement x = g.sample(rng);
            const auto [r1, r2] = g.base_pushforward_residuals(x);
            return std::vector<double>{r1, r2, g.tangency_residual(x), g.product_map_residual(x)};
          });
}

void gdbc_dirac(SuiteRunner& s, const Instance& inst) {
  const std::string tag = instance_tag(inst.n, inst.w);
  const Gdbc g(inst.n, inst.w);
  s.group({{"dirac1_B" + tag, anchor::kDirac1, 1e-5, 4},
           {"dirac2_B" + tag, anchor::kDirac2, 1e-5, 4},
           {"dirac1_Bminus" + tag, anchor::kDirac1, 1e-5, 4},
           {"dirac2_Bminus" + tag, anchor::kDirac2, 1e-5, 4}},
          50, [g](Rng& rng) {
            const GdbcElement x = g.sample(rng);
            const DiracResiduals b = g.dirac_residuals(x, ActionSide::B, rng);
            const DiracResiduals bm = g.dirac_residuals(x, ActionSide::Bminus, rng);
            return std::vector<double>{b.r1, b.r2, bm.r1, bm.r2};
          });
}

void gdbc_suite(SuiteRunner& s, const SuiteConfig& c) {
  if (!c.words.empty() || c.rank) {
    for (const Instance& inst : instances(c, {{2, letters({1, 1})}, {3, letters({1, 2})}})) {
      gdbc_axioms(s, inst);
      gdbc_poisson(s, inst);
      gdbc_dirac(s, inst);
    }
    return;
  }
  for (const Instance& inst : std::vector<Instance>{
           {2, letters({1})}, {2, letters({1, 1})}, {3, letters({1, 2})}, {3, letters({2, 1, 2})}}) {
    gdbc_axioms(s, inst);
  }
  for (const Instance& inst : std::vector<Instance>{{2, letters({1, 1})}, {3, letters({1, 2})}}) gdbc_poisson(s, inst);
  for (const Instance& inst : std::vector<Instance>{{2, letters({1})}, {3, letters({1, 2})}}) gdbc_dirac(s, inst);
}

// ---------------------------------------------------------------------------
// twist

template <class Twist, class Pair, class Dist>
std::vector<double> twist_axioms(const Twist& tw, const Pair& p1, const Pair& p2, const Pair& p3, Dist dist) {
  const Pair e_src = tw.identity(tw.source(p1));
  const Pair e_tgt = tw.identity(tw.target(p1));
  const double r1 = std::max(dist(tw.mult(e_src, p1), p1), dist(tw.mult(p1, e_tgt), p1));
  const Pair inv = tw.inverse(p1);
  const double r2 = std::max(dist(tw.mult(p1, inv), e_src), dist(tw.mult(inv, p1), e_tgt));
  const double r3 = dist(tw.mult(tw.mult(p1, p2), p3), tw.mult(p1, tw.mult(p2, p3)));
  return {r1, r2, r3};
}

void twist_suite(SuiteRunner& s, const SuiteConfig& c) {
  for (const TwistInstance& ti : twist_instances(c)) {
    const std::string tag = twist_tag(ti);
    const Gdbc u(ti.n, ti.u);
    const Gdbc v(ti.n, ti.v);
    WordTuple ww = ti.u;
    ww.insert(ww.end(), ti.v.begin(), ti.v.end());
    const Gdbc w(ti.n, ww);
    s.group({{"twist_identity_laws" + tag, anchor::kTwistGroupoid, 1e-9, 0},
             {"twist_inverse_laws" + tag, anchor::kTwistGroupoid, 1e-9, 0},
             {"twist_associativity" + tag, anchor::kTwistGroupoid, 1e-9, 0}},
            50, [u, v](Rng& rng) {
              const GdbcTwist tw = make_gdbc_twist(u, v);
              const auto [p1, p2] = sample_twist_composable(u, v, rng);
              const GdbcElement y3 = u.sample_near_identity(rng, tw.target(p2).first, kTwistSpread, kTwistScale);
              const GdbcElement z3 = v.sample_near_identity(
                  rng, v.u_chart().act_b(y3.b.inverse(), tw.target(p2).second).cells, kTwistSpread, kTwistScale);
              auto dist = [](const GdbcTwist::Pair& a, const GdbcTwist::Pair& b) {
                return std::max(distance(a.first, b.first), distance(a.second, b.second));
              };
              return twist_axioms(tw, p1, p2, GdbcTwist::Pair{y3, z3}, dist);
            });
    s.group({{"theta_push_mixed" + tag, anchor::kThetaTau, 1e-6, 0},
             {"tau_push_minus_mixed" + tag, anchor::kThetaTau, 1e-6, 0},
             {"R_L_poisson" + tag, anchor::kRL, 1e-6, 0},
             {"R_L_roundtrip" + tag, anchor::kRL, 1e-9, 0}},
            50, [u, v](Rng& rng) {
              const GdbcTwist tw = make_gdbc_twist(u, v);
              const GdbcElement y = u.sample(rng);
              const GdbcElement z = v.sample(rng);
              const auto [r1, r2] = gdbc_theta_tau_residuals(u, v, y, z);
              const double r3 = gdbc_R_L_poisson_residual(u, v, y, z);
              const auto fwd = tw.R_L(z, y);
              const auto back = tw.R_L_inverse(fwd.first, fwd.second);
              const double r4 = std::max(distance(back.first, z), distance(back.second, y));
              return std::vector<double>{r1, r2, r3, r4};
            });
    s.group({{"twist_graph_coisotropy" + tag, anchor::kTwistGroupoid, 1e-6, 0}}, 50,
            [u, v](Rng& rng) { return std::vector<double>{twist_graph_coisotropy(u, v, rng)}; });
    s.group({{"kappa_homomorphism" + tag, anchor::kKappaHom, 1e-8, 7},
             {"kappa_T_invariance" + tag, anchor::kKappaT, 1e-9, 7},
             {"lem1_cocycle_B" + tag, anchor::kLem1, 1e-10, 7},
             {"lem1_cocycle_Bminus" + tag, anchor::kLem1, 1e-10, 7},
             {"kappa_open_condition_failures" + tag, anchor::kKappaOpen, 0.0, 7, true},
             {"kappa_image_invariant" + tag, anchor::kKappaHom, 1e-9, 7}},
            50, [u, v, w](Rng& rng) {
              const GdbcTwist tw = make_gdbc_twist(u, v);
              const int n = u.n();
              const auto [p1, p2] = sample_twist_composable(u, v, rng);
              const auto p12 = tw.mult(p1, p2);
              const GdbcElement k1 = concat_kappa(u, v, p1.first, p1.second);
              const GdbcElement k2 = concat_kappa(u, v, p2.first, p2.second);
              const GdbcElement k12 = concat_kappa(u, v, p12.first, p12.second);
              const double r1 = distance(k12, w.mult(k1, k2, 1e-7));
              const auto [yt, zt] = t_equivalence(u, v, p1.first, p1.second, random_torus(rng, n, 0.3));
              const double r2 = distance(concat_kappa(u, v, yt, zt), k1);
              const GdbcElement& y1 = p1.first;
              const GdbcElement& z1 = p1.second;
              const GdbcElement& y2 = p2.first;
              const GdbcElement& z2 = p2.second;
              const double r3 = max_abs(Mat(v.u_chart().act_b(y2.b.inverse(), z1.cm).cocycle.inverse() -
                                            v.u_chart().act_b(y2.b, z2.c).cocycle));
              const BorelActionResult rb = u.v_chart().act_bminus(y1.cm, z1.bm);
              const double r4 = max_abs(Mat(rb.cocycle.inverse() - u.v_chart().act_bminus(rb.cells, z1.bm.inverse()).cocycle));
              const int k = u.u_chart().length();
              double fails = 0.0;
              for (const GdbcElement* x : {&k1, &k2, &k12}) {
                if (kappa_open_condition_pivot(w, k, *x) <= 0.0) fails += 1.0;
              }
              const double r6 = std::max({w.invariant_residual(k1), w.invariant_residual(k2), w.invariant_residual(k12)});
              return std::vector<double>{r1, r2, r3, r4, fails, r6};
            });
  }
}

// ---------------------------------------------------------------------------
// tstar_c

double tstar_dist(const TstarTwist::Pair& a, const TstarTwist::Pair& b) {
  return max_abs(Vec(tstar_coords(a) - tstar_coords(b)));
}

constexpr double kTstarRadius = 4.0;

// Random twisted pair composable after p.
Vec tstar_after(Rng& rng, const Vec& p) {
  const Vec t = tstar_closed_target(p);
  Vec v = random_cvec(rng, 4, 0.5);
  v(2) = t(0);
  v(3) = t(1) / std::exp(v(0) * v(2));
  if (max_abs(v) > kTstarRadius) throw DomainEscape("composable T*C sample left the sampling box");
  return v;
}

void tstar_suite(SuiteRunner& s, const SuiteConfig&) {
  s.group({{"source_closed_form", anchor::kTstar, 1e-12, 1},
           {"target_closed_form", anchor::kTstar, 1e-12, 1},
           {"mult_closed_form", anchor::kTstar, 1e-12, 1},
           {"identity_closed_form", anchor::kTstar, 1e-12, 1},
           {"inverse_closed_form", anchor::kTstar, 1e-12, 1},
           {"twist_axioms", anchor::kTstar, 1e-12, 1}},
          1000, [](Rng& rng) {
            const TstarTwist tw = make_tstar_twist();
            const Vec v1 = random_cvec(rng, 4, 0.5);
            const Vec v2 = tstar_after(rng, v1);
            const Vec v3 = tstar_after(rng, v2);
            const auto p1 = tstar_from_coords(v1);
            const auto p2 = tstar_from_coords(v2);
            const auto p3 = tstar_from_coords(v3);
            auto base = [](const std::pair<cplx, cplx>& b) {
              Vec out(2);
              out << b.first, b.second;
              return out;
            };
            const double r1 = max_abs(Vec(base(tw.source(p1)) - tstar_closed_source(v1)));
            const double r2 = max_abs(Vec(base(tw.target(p1)) - tstar_closed_target(v1)));
            const double r3 = max_abs(Vec(tstar_coords(tw.mult(p1, p2)) - tstar_closed_mult(v1, v2)));
            const Vec b = base(tw.source(p1));
            const double r4 = max_abs(Vec(tstar_coords(tw.identity({b(0), b(1)})) - tstar_closed_identity(b)));
            const double r5 = max_abs(Vec(tstar_coords(tw.inverse(p1)) - tstar_closed_inverse(v1)));
            const std::vector<double> ax = twist_axioms(tw, p1, p2, p3, tstar_dist);
            return std::vector<double>{r1, r2, r3, r4, r5, *std::max_element(ax.begin(), ax.end())};
          });
  s.group({{"theta_push_canonical", anchor::kTstar, 1e-8, 1},
           {"tau_push_canonical", anchor::kTstar, 1e-8, 1}},
          100, [](Rng& rng) {
            const Vec v = random_cvec(rng, 4, 0.5);
            const Mat p = wedge(Vec::Unit(4, 0), Vec::Unit(4, 2)) + wedge(Vec::Unit(4, 1), Vec::Unit(4, 3));
            const Mat e = wedge(Vec::Unit(2, 0), Vec::Unit(2, 1));
            const Vec s = tstar_closed_source(v);
            const Vec t = tstar_closed_target(v);
            const Mat base_s = -s(0) * s(1) * e;
            const Mat base_t = -t(0) * t(1) * e;
            return std::vector<double>{poisson_map_residual(tstar_closed_source, v, p, base_s, 1.0),
                                       poisson_map_residual(tstar_closed_target, v, p, base_t, -1.0)};
          });
}

}  // namespace

bool SuiteReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckRecord& r) { return r.pass; });
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"kernel", "gamma", "cells", "gdbc", "twist", "tstar_c", "poisson"};
  return names;
}

WordTuple parse_word_tuple(const std::string& text) {
  WordTuple out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) throw ConfigError("empty letter in word '" + text + "'");
    size_t pos = 0;
    int letter = 0;
    try {
      letter = std::stoi(item, &pos);
    } catch (const std::exception&) {
      throw ConfigError("letter '" + item + "' is not an integer");
    }
    if (pos != item.size()) throw ConfigError("letter '" + item + "' is not an integer");
    out.push_back({letter});
  }
  if (out.empty()) throw ConfigError("empty word");
  return out;
}

std::string format_word_tuple(const WordTuple& w) {
  std::string out;
  for (size_t k = 0; k < w.size(); ++k) {
    if (k) out += ",";
    for (size_t j = 0; j < w[k].size(); ++j) {
      if (j) out += ".";
      out += std::to_string(w[k][j]);
    }
  }
  return out;
}

void validate_config(const SuiteConfig& c) {
  if (c.rank && *c.rank < 2) throw ConfigError("rank must be at least 2");
  if (c.rank && *c.rank > 6) throw ConfigError("rank above 6 is not supported");
  if (!c.words.empty() && !c.rank) throw ConfigError("--word requires --rank");
  for (const auto& w : c.words) {
    for (const auto& letter : w) validate_word(letter, *c.rank);
  }
  if (c.samples && (*c.samples < 1 || *c.samples > 1000000)) throw ConfigError("samples must lie in [1, 1e6]");
  if (c.tol && !(*c.tol >= 1e-14 && *c.tol <= 1e-2)) throw ConfigError("tol must lie in [1e-14, 1e-2]");
  std::set<std::string> seen;
  for (const auto& s : c.suites) {
    if (std::find(suite_names().begin(), suite_names().end(), s) == suite_names().end()) {
      throw ConfigError("unknown suite '" + s + "'");
    }
    if (!seen.insert(s).second) throw ConfigError("suite '" + s + "' requested twice");
  }
}

SuiteReport run_suite(const std::string& suite, const SuiteConfig& config) {
  const auto t0 = Clock::now();
  SuiteRunner runner(suite, config);
  if (suite == "kernel") {
    kernel_suite(runner, config);
  } else if (suite == "gamma") {
    gamma_suite(runner, config);
  } else if (suite == "cells") {
    cells_suite(runner, config);
  } else if (suite == "gdbc") {
    gdbc_suite(runner, config);
  } else if (suite == "twist") {
    twist_suite(runner, config);
  } else if (suite == "tstar_c") {
    tstar_suite(runner, config);
  } else if (suite == "poisson") {
    poisson_suite(runner, config);
  } else {
    throw ConfigError("unknown suite '" + suite + "'");
  }
  return runner.finish(std::chrono::duration<double, std::milli>(Clock::now() - t0).count());
}

std::vector<SuiteReport> run(const SuiteConfig& config) {
  validate_config(config);
  const std::vector<std::string>& names = config.suites.empty() ? suite_names() : config.suites;
  std::vector<SuiteReport> out;
  for (const auto& s : names) out.push_back(run_suite(s, config));
  return out;
}

std::string format_residual(double r) {
  if (std::isnan(r)) return "nan";
  if (std::isinf(r)) return r > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", r);
  return buf;
}

std::string report_json(const std::vector<SuiteReport>& reports) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const auto& rep : reports) {
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    for (const auto& c : rep.checks) {
      nlohmann::ordered_json j;
      j["id"] = c.id;
      j["anchor"] = c.anchor;
      j["samples"] = c.samples;
      j["max_residual"] = format_residual(c.max_residual);
      j["tol"] = c.tol;
      j["pass"] = c.pass;
      checks.push_back(j);
    }
    nlohmann::ordered_json r;
    r["suite"] = rep.suite;
    r["checks"] = checks;
    r["wall_ms"] = std::round(rep.wall_ms * 1000.0) / 1000.0;
    doc.push_back(r);
  }
  return doc.dump(2);
}

void emit_report(const std::vector<SuiteReport>& reports, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << report_json(reports) << "\n";
  if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace dbc
