// Release gate: one check per shipping criterion, each printing a single
// summary line. The numeric tolerances here are contractual; loosening one
// is a release decision, not a test fix.
#include <gtest/gtest.h>

#include <bit>
#include <chrono>
#include <cmath>
#include <cstring>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "pagerank/pagerank.hpp"

namespace pr = pagerank;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void criterion_line(int k, const std::string& detail) {
  const bool ok = !::testing::Test::HasFailure();
  std::cout << "[CRITERION " << k << "] " << (ok ? "PASS" : "FAIL") << " ("
            << detail << ")" << std::endl;
  EXPECT_TRUE(ok);
}

pr::StochasticMatrix teleport_sparse(std::size_t n, std::size_t s,
                                     std::uint64_t seed) {
  const pr::AdjacencyGraph g =
      pr::generate(pr::GraphModel::uniform_sparse, n, s, seed);
  return pr::apply_damping(pr::StochasticMatrix::from_edge_list(g),
                           {0.85, pr::DampingKind::teleport});
}

bool bit_equal(const pr::RankVector& a, const pr::RankVector& b) {
  return a.size() == b.size() &&
         std::memcmp(a.v.data(), b.v.data(), a.size() * sizeof(double)) == 0;
}

// Shared fixture for criteria 2, 3 and 9: one n = 50 instance, one hundred
// independent solver runs.
struct GkBatch {
  pr::StochasticMatrix p;
  std::vector<pr::GkResult> runs;  // seed = index + 1
  double wall_s = 0.0;
};

const GkBatch& gk_batch() {
  static const GkBatch batch = [] {
    GkBatch out;
    out.p = teleport_sparse(50, 4, 1);
    pr::GkConfig cfg;  // eps 0.05, sigma 0.1
    const auto t0 = Clock::now();
    out.runs.reserve(100);
    for (std::uint64_t seed = 1; seed <= 100; ++seed)
      out.runs.push_back(pr::gk_run(out.p, cfg, seed));
    out.wall_s = seconds_since(t0);
    return out;
  }();
  return batch;
}

// Shared fixture for criteria 6 and 9: the 3-cycle and a larger sparse
// instance, fifty parallel-mode runs each against the deterministic solver.
struct McmcCase {
  pr::StochasticMatrix p;
  pr::RankVector truth;
  std::vector<pr::McmcResult> runs;  // seed = index + 1
  int successes = 0;
};

struct McmcBatch {
  McmcCase cycle;
  McmcCase sparse;
  double wall_s = 0.0;
};

McmcCase make_mcmc_case(pr::StochasticMatrix p) {
  McmcCase out;
  out.p = std::move(p);
  const pr::PowerResult truth = pr::power_iteration(out.p, 1e-12, 100000);
  EXPECT_TRUE(truth.converged);
  out.truth = truth.p;
  pr::McmcConfig cfg;
  cfg.mode = pr::McmcMode::parallel;
  cfg.eps = 0.1;
  cfg.sigma = 0.1;
  cfg.alpha = 0.15;
  out.runs.reserve(50);
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    out.runs.push_back(pr::run_parallel(out.p, cfg, seed));
    const double d =
        pr::distance(out.runs.back().estimate, out.truth, pr::Norm::l2);
    if (d <= 0.1) ++out.successes;
  }
  return out;
}

const McmcBatch& mcmc_batch() {
  static const McmcBatch batch = [] {
    McmcBatch out;
    const auto t0 = Clock::now();
    const pr::AdjacencyGraph cyc = pr::generate(pr::GraphModel::cycle, 3, 1, 0);
    out.cycle = make_mcmc_case(
        pr::apply_damping(pr::StochasticMatrix::from_edge_list(cyc),
                          {0.85, pr::DampingKind::teleport}));
    out.sparse = make_mcmc_case(teleport_sparse(1000, 4, 1));
    out.wall_s = seconds_since(t0);
    return out;
  }();
  return batch;
}

std::vector<std::vector<double>> dense_game(const pr::GameOperator& op) {
  const std::size_t d = op.dim();
  std::vector<std::vector<double>> m(d, std::vector<double>(d, 0.0));
  for (std::size_t k = 0; k < d; ++k)
    for (const auto& e : op.column(k)) m[e.row][k] = e.val;
  return m;
}

}  // namespace

TEST(Acceptance, Criterion01DenseAndPowerBaselinesAgree) {
  std::ostringstream detail;
  try {
    const auto t0 = Clock::now();
    const std::size_t sizes[3] = {10, 50, 200};
    double worst_gap = 0.0;
    double worst_residual = 0.0;
    for (int i = 0; i < 20; ++i) {
      const std::size_t n = sizes[i % 3];
      const pr::StochasticMatrix p =
          teleport_sparse(n, 4, static_cast<std::uint64_t>(i + 1));
      const pr::RankVector direct = pr::dense_solve(p);
      const pr::PowerResult iterated = pr::power_iteration(p, 1e-12, 100000);
      EXPECT_TRUE(iterated.converged) << "graph " << i;
      const double gap = pr::distance(direct, iterated.p, pr::Norm::linf);
      const double residual = pr::residuals(p, direct).linf;
      EXPECT_LE(gap, 1e-9) << "graph " << i << " n " << n;
      EXPECT_LE(residual, 1e-10) << "graph " << i << " n " << n;
      worst_gap = std::max(worst_gap, gap);
      worst_residual = std::max(worst_residual, residual);
    }
    const double wall = seconds_since(t0);
    EXPECT_LT(wall, 10.0);
    detail << "20 graphs, max linf gap " << worst_gap << ", max residual "
           << worst_residual << ", " << wall << " s";
  } catch (const std::exception& e) {
    ADD_FAILURE() << "exception: " << e.what();
    detail << "exception: " << e.what();
  }
  criterion_line(1, detail.str());
}

TEST(Acceptance, Criterion02GameSolverHitsTheAccuracyContract) {
  std::ostringstream detail;
  try {
    const GkBatch& batch = gk_batch();
    int successes = 0;
    for (const pr::GkResult& res : batch.runs) {
      EXPECT_EQ(res.iterations, 33205u);  // ceil(12 (ln 101 + ln 10) / 0.05^2)
      if (res.objective <= 0.05) ++successes;
    }
    EXPECT_GE(successes, 90);
    EXPECT_LT(batch.wall_s, 120.0);
    detail << successes << "/100 runs with f(p_hat) <= 0.05, 33205 iterations"
           << " each, " << batch.wall_s << " s";
  } catch (const std::exception& e) {
    ADD_FAILURE() << "exception: " << e.what();
    detail << "exception: " << e.what();
  }
  criterion_line(2, detail.str());
}

TEST(Acceptance, Criterion03RecoveredMassStaysAboveTheFloor) {
  std::ostringstream detail;
  try {
    const GkBatch& batch = gk_batch();
    int successful = 0;
    double min_mass = 1.0;
    for (const pr::GkResult& res : batch.runs) {
      if (res.objective > 0.05) continue;  // criterion covers successful runs
      ++successful;
      min_mass = std::min(min_mass, res.mass);
      EXPECT_GE(res.mass, 0.45);
    }
    EXPECT_GT(successful, 0);
    detail << "min middle-block mass " << min_mass << " over " << successful
           << " successful runs (floor 0.45)";
  } catch (const std::exception& e) {
    ADD_FAILURE() << "exception: " << e.what();
    detail << "exception: " << e.what();
  }
  criterion_line(3, detail.str());
}

TEST(Acceptance, Criterion04PotentialGrowthIsControlled) {
  std::ostringstream detail;
  try {
    const auto t0 = Clock::now();
    const double eps = 0.3;
    const pr::StochasticMatrix p = teleport_sparse(10, 3, 1);
    const pr::GameOperator op(p);
    const std::uint64_t t_total = pr::iteration_count(10, eps, 0.1);
    EXPECT_EQ(t_total, 713u);
    const double ratio_cap = 1.0 + eps * eps / 6.0 + 1e-12;
    const double ln_dim = std::log(21.0);
    double worst_ratio = 0.0;
    int envelope_ok = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      pr::GkState st(10, eps);
      pr::RngStream rng(seed, 0);
      for (int sample = 1; sample <= 10; ++sample) {
        for (int step = 0; step < 71; ++step) pr::gk_step(st, op, rng);
        const double ratio = pr::conditional_growth_ratio(st, op);
        EXPECT_LE(ratio, ratio_cap)
            << "seed " << seed << " t " << st.t;  // tolerance 1e-12 only
        worst_ratio = std::max(worst_ratio, ratio);
        const double envelope =
            ln_dim + static_cast<double>(st.t) * eps * eps / 6.0 + 3.0;
        if (pr::log_potential(st) <= envelope) ++envelope_ok;
      }
    }
    EXPECT_GE(envelope_ok, 95);  // ln Phi envelope holds for 95% of states
    const double wall = seconds_since(t0);
    EXPECT_LT(wall, 30.0);
    detail << "max one-step ratio " << worst_ratio << " (cap "
           << 1.0 + eps * eps / 6.0 << "), envelope " << envelope_ok
           << "/100, " << wall << " s";
  } catch (const std::exception& e) {
    ADD_FAILURE() << "exception: " << e.what();
    detail << "exception: " << e.what();
  }
  criterion_line(4, detail.str());
}

TEST(Acceptance, Criterion05OperatorIsExactlySkewSymmetric) {
  std::ostringstream detail;
  try {
    const auto t0 = Clock::now();
    std::vector<pr::StochasticMatrix> mats;
    const auto raw = [](pr::GraphModel m, std::size_t n, std::size_t s,
                        std::uint64_t seed) {
      return pr::StochasticMatrix::from_edge_list(pr::generate(m, n, s, seed));
    };
    mats.push_back(raw(pr::GraphModel::cycle, 3, 1, 0));
    mats.push_back(pr::apply_damping(raw(pr::GraphModel::cycle, 50, 1, 0),
                                     {0.85, pr::DampingKind::teleport}));
    mats.push_back(pr::apply_damping(raw(pr::GraphModel::star, 10, 1, 0),
                                     {0.9, pr::DampingKind::lazy}));
    mats.push_back(raw(pr::GraphModel::star, 33, 1, 0));
    mats.push_back(raw(pr::GraphModel::uniform_sparse, 20, 3, 5));
    mats.push_back(
        pr::apply_damping(raw(pr::GraphModel::uniform_sparse, 50, 4, 6),
                          {0.85, pr::DampingKind::teleport}));
    mats.push_back(
        pr::apply_damping(raw(pr::GraphModel::uniform_sparse, 37, 2, 7),
                          {0.7, pr::DampingKind::lazy}));
    mats.push_back(
        pr::apply_damping(raw(pr::GraphModel::preferential, 25, 2, 8),
                          {0.6, pr::DampingKind::teleport}));
    mats.push_back(raw(pr::GraphModel::preferential, 44, 3, 9));
    const pr::AdjacencyGraph dangling(4, {{0, 1, 1.0}, {1, 0, 0.5}, {1, 2, 0.5}});
    mats.push_back(pr::apply_damping(
        pr::StochasticMatrix::from_edge_list(dangling,
                                             pr::DanglingPolicy::self_loop),
        {0.85, pr::DampingKind::teleport}));

    pr::RngStream rng(55, 0);
    double worst_form = 0.0;
    for (std::size_t m = 0; m < mats.size(); ++m) {
      const auto dense = dense_game(pr::GameOperator(mats[m]));
      const std::size_t d = dense.size();
      std::size_t mismatched = 0;
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
          if (dense[i][j] != -dense[j][i]) ++mismatched;
      EXPECT_EQ(mismatched, 0u) << "matrix " << m;
      for (int probe = 0; probe < 100; ++probe) {
        std::vector<double> q(d);
        for (double& v : q) v = rng.next_double();
        double form = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
          double row = 0.0;
          for (std::size_t j = 0; j < d; ++j) row += dense[i][j] * q[j];
          form += q[i] * row;
        }
        EXPECT_LE(std::fabs(form), 1e-10) << "matrix " << m;
        worst_form = std::max(worst_form, std::fabs(form));
      }
    }
    const double wall = seconds_since(t0);
    EXPECT_LT(wall, 5.0);
    detail << "10 matrices exactly skew, max |q' S q| " << worst_form << ", "
           << wall << " s";
  } catch (const std::exception& e) {
    ADD_FAILURE() << "exception: " << e.what();
    detail << "exception: " << e.what();
  }
  criterion_line(5, detail.str());
}

TEST(Acceptance, Criterion06ParallelWalkerLandsNearTheStationaryLaw) {
  std::ostringstream detail;
  try {
    const McmcBatch& batch = mcmc_batch();
    for (const McmcCase* c : {&batch.cycle, &batch.sparse}) {
      EXPECT_EQ(pr::trajectory_count(0.1, 0.1), 1782u);
      for (const pr::McmcResult& res : c->runs)
        EXPECT_EQ(res.trajectories, 1782u);
      EXPECT_GE(c->successes, 45);  // 90% of 50 runs
    }
    EXPECT_LT(batch.wall_s, 120.0);
    detail << "cycle " << batch.cycle.successes << "/50, sparse "
           << batch.sparse.successes << "/50 within l2 0.1, 1782 walkers, "
           << batch.wall_s << " s";
  } catch (const std::exception& e) {
    ADD_FAILURE() << "exception: " << e.what();
    detail << "exception: " << e.what();
  }
  criterion_line(6, detail.str());
}

TEST(Acceptance, Criterion07SamplerTreeStaysConsistentUnderUpdates) {
  std::ostringstream detail;
  try {
    std::vector<double> weights = {1.0, 2.0, 3.0, 4.0};
    pr::WeightTree tree(weights);
    pr::RngStream rng(7, 0);
    std::vector<std::uint64_t> counts(4, 0);
    const int draws = 1000000;
    for (int i = 0; i < draws; ++i) ++counts[tree.sample(rng)];
    double worst_freq_err = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
      const double freq = static_cast<double>(counts[i]) / draws;
      const double expect = weights[i] / 10.0;
      EXPECT_NEAR(freq, expect, 0.005) << "leaf " << i;
      worst_freq_err = std::max(worst_freq_err, std::fabs(freq - expect));
    }

    for (int u = 0; u < 1000; ++u) {
      const auto idx = static_cast<std::size_t>(rng.next_below(4));
      const double w = 10.0 * rng.next_double();
      weights[idx] = w;
      tree.update(idx, w);
    }
    const pr::WeightTree fresh(weights);
    EXPECT_EQ(tree.root(), fresh.root());  // bitwise: same pairwise sums
    for (std::size_t i = 0; i < 4; ++i)
      EXPECT_EQ(tree.leaf(i), fresh.leaf(i));
    for (int probe = 0; probe < 64; ++probe) {
      const double u = (2.0 * probe + 1.0) / 128.0;
      EXPECT_EQ(tree.sample_at(u), fresh.sample_at(u));
    }
    detail << "1e6 draws, max frequency error " << worst_freq_err
           << " (cap 0.005); updated tree bitwise equal to a fresh build";
  } catch (const std::exception& e) {
    ADD_FAILURE() << "exception: " << e.what();
    detail << "exception: " << e.what();
  }
  criterion_line(7, detail.str());
}

TEST(Acceptance, Criterion08PerIterationCostScalesLogarithmically) {
  std::ostringstream detail;
  try {
    const std::size_t sizes[3] = {100, 1000, 10000};
    double means[3] = {0, 0, 0};
    double bits[3] = {0, 0, 0};
    for (int i = 0; i < 3; ++i) {
      const std::size_t n = sizes[i];
      const pr::AdjacencyGraph g =
          pr::generate(pr::GraphModel::uniform_sparse, n, 5, 1);
      const auto p = pr::StochasticMatrix::from_edge_list(g);
      pr::GkConfig cfg;
      cfg.eps = 0.1;
      cfg.max_iter = 10000;
      const pr::GkResult res = pr::gk_run(p, cfg, 1);
      EXPECT_EQ(res.iters_sparse + res.iters_dense, 10000u);
      EXPECT_GT(res.iters_sparse, 0u);
      // ceil(log2(2n+1)) + 1 node writes per touched entry
      bits[i] =
          static_cast<double>(std::bit_width(2 * n)) + 1.0;
      means[i] = res.mean_writes_sparse();
      const double cap = (2.0 * 5.0 + 3.0) * bits[i];
      EXPECT_LE(means[i], cap) << "n " << n;
      EXPECT_GT(means[i], 0.0);
    }
    for (int a = 0; a < 3; ++a)
      for (int b = a + 1; b < 3; ++b) {
        const double growth = means[b] / means[a];
        const double log_growth = bits[b] / bits[a];
        EXPECT_LE(growth, 1.5 * log_growth)
            << sizes[a] << " -> " << sizes[b];
        EXPECT_GE(growth, log_growth / 1.5)
            << sizes[a] << " -> " << sizes[b];
      }
    detail << "mean writes " << means[0] << " / " << means[1] << " / "
           << means[2] << " for n 100 / 1000 / 10000, caps "
           << 13.0 * bits[0] << " / " << 13.0 * bits[1] << " / "
           << 13.0 * bits[2];
  } catch (const std::exception& e) {
    ADD_FAILURE() << "exception: " << e.what();
    detail << "exception: " << e.what();
  }
  criterion_line(8, detail.str());
}

TEST(Acceptance, Criterion09RerunsAreBitIdentical) {
  std::ostringstream detail;
  try {
    const GkBatch& gk = gk_batch();
    pr::GkConfig cfg;  // the criterion-2 configuration
    int gk_equal = 0;
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      const pr::GkResult again = pr::gk_run(gk.p, cfg, seed);
      const pr::GkResult& first = gk.runs[seed - 1];
      if (bit_equal(again.x_bar, first.x_bar) &&
          bit_equal(again.p_hat, first.p_hat) &&
          again.iterations == first.iterations &&
          again.writes_sparse == first.writes_sparse &&
          again.iters_dense == first.iters_dense)
        ++gk_equal;
    }
    EXPECT_EQ(gk_equal, 3);

    const McmcBatch& mc = mcmc_batch();
    pr::McmcConfig mcfg;
    mcfg.mode = pr::McmcMode::parallel;
    mcfg.eps = 0.1;
    mcfg.sigma = 0.1;
    mcfg.alpha = 0.15;
    int mc_equal = 0;
    for (const McmcCase* c : {&mc.cycle, &mc.sparse}) {
      for (std::uint64_t seed = 1; seed <= 2; ++seed) {
        const pr::McmcResult again = pr::run_parallel(c->p, mcfg, seed);
        const pr::McmcResult& first = c->runs[seed - 1];
        if (bit_equal(again.estimate, first.estimate) &&
            again.visits == first.visits &&
            again.steps_total == first.steps_total)
          ++mc_equal;
      }
    }
    EXPECT_EQ(mc_equal, 4);
    detail << "3/3 game-solver reruns and 4/4 walker reruns bit-identical";
  } catch (const std::exception& e) {
    ADD_FAILURE() << "exception: " << e.what();
    detail << "exception: " << e.what();
  }
  criterion_line(9, detail.str());
}
