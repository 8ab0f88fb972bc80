/* Copyright 2026 The RNP Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

        https://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "rnp/errors.hpp"
#include "rnp/taskgen/dataset.hpp"
#include "rnp/taskgen/hare_lynx.hpp"
#include "support.hpp"

using namespace rnp;

TEST_CASE("kernel examples") {
  KernelSpec rbf{KernelFamily::RBF, 0.7, 0.3};
  CHECK(kernel_eval(rbf, 0.4, 0.4) == doctest::Approx(0.49).epsilon(1e-15));
  KernelSpec unit{KernelFamily::RBF, 1.0, 1.0};
  CHECK(kernel_eval(unit, 0.0, 1.0) == doctest::Approx(0.6065306597126334).epsilon(1e-15));
  KernelSpec per{KernelFamily::Periodic, 0.8, 0.7, 0.4};
  CHECK(kernel_eval(per, 0.1, 0.5) == doctest::Approx(0.64).epsilon(1e-12));
  // 1 + √5 + 5/3 at r = ℓ, times e^{−√5}.
  KernelSpec m52{KernelFamily::Matern52, 1.0, 1.0};
  const double s5 = std::sqrt(5.0);
  CHECK(kernel_eval(m52, 0.0, 1.0) ==
        doctest::Approx((1 + s5 + 5.0 / 3.0) * std::exp(-s5)).epsilon(1e-15));
}

TEST_CASE("kernel spec validation") {
  CHECK_THROWS_AS(kernel_eval({KernelFamily::RBF, 0.0, 1.0}, 0, 1), DomainError);
  CHECK_THROWS_AS(kernel_eval({KernelFamily::RBF, 1.0, -1.0}, 0, 1), DomainError);
  CHECK_THROWS_AS(kernel_eval({KernelFamily::Periodic, 1.0, 1.0, 0.0}, 0, 1), DomainError);
  CHECK_THROWS_AS((KernelSpec{KernelFamily::RBF, 1.0, 1.0, 1.0, -1e-3}.validate()), DomainError);
  CHECK(parse_kernel_family("matern52") == KernelFamily::Matern52);
}

TEST_CASE("periodic kernel is invariant to whole periods") {
  KernelSpec per{KernelFamily::Periodic, 0.9, 0.8, 0.37};
  for (int k = -5; k <= 5; ++k) {
    CHECK(std::fabs(kernel_eval(per, 0.3, 0.3 + k * 0.37) - kernel_eval(per, 0.3, 0.3)) < 1e-12);
  }
}

TEST_CASE("gram matrices are symmetric and factor after jitter") {
  const GpHyperprior prior;
  for (KernelFamily family : {KernelFamily::RBF, KernelFamily::Matern52, KernelFamily::Periodic}) {
    for (std::uint64_t t = 0; t < 30; ++t) {
      RngStream rng(4, "gram", t, static_cast<std::uint64_t>(family));
      const KernelSpec spec = prior.draw(family, rng);
      std::vector<double> xs(50);
      for (double& x : xs) x = rng.uniform(-2.0, 2.0);
      const Tensor g = gram_matrix(spec, xs);
      double asym = 0.0;
      for (std::size_t i = 0; i < 50; ++i)
        for (std::size_t j = 0; j < 50; ++j) asym = std::max(asym, std::fabs(g(i, j) - g(j, i)));
      CHECK(asym < 1e-12);
      const Tensor l = jittered_cholesky(g, spec.jitter);
      // L Lᵀ reproduces the jittered Gram matrix up to the escalated jitter.
      double err = 0.0;
      for (std::size_t i = 0; i < 50; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
          double s = 0.0;
          for (std::size_t k = 0; k <= j; ++k) s += l(i, k) * l(j, k);
          err = std::max(err, std::fabs(s - g(i, j)));
        }
      CHECK(err < 1e-4);
    }
  }
}

TEST_CASE("cholesky failure after escalation is a generation error") {
  Tensor g = Tensor::from_rows({{1.0, 2.0}, {2.0, 1.0}});
  CHECK_THROWS_AS(jittered_cholesky(g, 1e-8), GenerationError);
}

TEST_CASE("hyperprior draws stay in their ranges") {
  const GpHyperprior prior;
  RngStream rng(1, "hyper");
  for (int i = 0; i < 500; ++i) {
    const KernelSpec r = prior.draw(KernelFamily::RBF, rng);
    CHECK(r.output_scale >= 0.1);
    CHECK(r.output_scale <= 1.0);
    CHECK(r.lengthscale >= 0.1);
    CHECK(r.lengthscale <= 0.6);
    const KernelSpec p = prior.draw(KernelFamily::Periodic, rng);
    CHECK(p.period >= 0.3);
    CHECK(p.period <= 0.5);
    CHECK(p.lengthscale >= 0.6);
    CHECK(p.lengthscale <= 1.0);
  }
}

TEST_CASE("sample_gp_task shapes and determinism") {
  const KernelSpec spec{KernelFamily::Matern52, 0.5, 0.3};
  const GpSplit fixed{3, 3, 3, 6, -2.0, 2.0};
  RngStream a(0, "gp", 0);
  const Task t = sample_gp_task(spec, a, fixed);
  CHECK(t.x_ctx.shape() == std::array<std::size_t, 2>{3, 1});
  CHECK(t.y_ctx.shape() == std::array<std::size_t, 2>{3, 1});
  CHECK(t.x_tgt.shape() == std::array<std::size_t, 2>{3, 1});
  CHECK(t.y_tgt.shape() == std::array<std::size_t, 2>{3, 1});
  RngStream b(0, "gp", 0);
  CHECK(sample_gp_task(spec, b, fixed) == t);
}

TEST_CASE("sample_gp_task respects the split rule") {
  const GpSplit split;
  const KernelSpec spec{KernelFamily::RBF, 1.0, 0.4};
  std::set<std::size_t> seen_m;
  for (std::uint64_t i = 0; i < 400; ++i) {
    RngStream rng(2, "split", i);
    const Task t = sample_gp_task(spec, rng, split);
    t.validate();
    seen_m.insert(t.num_context());
    CHECK(t.num_context() >= 3);
    CHECK(t.num_context() <= 47);
    CHECK(t.num_target() >= 3);
    CHECK(t.num_context() + t.num_target() <= 50);
    const Tensor xs = t.x_all();
    for (double x : xs.values()) {
      CHECK(x >= -2.0);
      CHECK(x <= 2.0);
    }
  }
  CHECK(*seen_m.begin() == 3);
  CHECK(*seen_m.rbegin() == 47);
}

TEST_CASE("GP draws reproduce the kernel covariance") {
  const KernelSpec spec{KernelFamily::RBF, 0.8, 0.5};
  const std::vector<double> xs{-0.3, 0.2};
  constexpr int n = 20000;
  std::vector<double> p11(n), p12(n), p22(n);
  RngStream rng(6, "gp/cov");
  for (int i = 0; i < n; ++i) {
    const auto y = sample_gp_values(spec, xs, rng);
    p11[i] = y[0] * y[0];
    p12[i] = y[0] * y[1];
    p22[i] = y[1] * y[1];
  }
  auto check = [&](const std::vector<double>& p, double expected) {
    double m = 0, ss = 0;
    for (double v : p) m += v / n;
    for (double v : p) ss += (v - m) * (v - m);
    const double se = std::sqrt(ss / (n - 1) / n);
    CHECK(std::fabs(m - expected) < 3 * se);
  };
  check(p11, kernel_eval(spec, xs[0], xs[0]));
  check(p12, kernel_eval(spec, xs[0], xs[1]));
  check(p22, kernel_eval(spec, xs[1], xs[1]));
}

TEST_CASE("generated datasets are pure functions of their key") {
  for (DatasetKind kind : {DatasetKind::GpRbf, DatasetKind::GpMatern52, DatasetKind::GpPeriodic,
                           DatasetKind::LotkaVolterra}) {
    DatasetSpec spec;
    spec.kind = kind;
    const Task a = generate_task(spec, 3, "train", 17);
    const auto batch = generate_tasks(spec, 3, "train", 20);
    CHECK(batch[17] == a);
    CHECK_FALSE(generate_task(spec, 3, "test", 17) == a);
    CHECK_FALSE(generate_task(spec, 4, "train", 17) == a);
  }
  CHECK(parse_dataset_kind("lv") == DatasetKind::LotkaVolterra);
  CHECK_THROWS_AS(parse_dataset_kind("mnist"), ConfigError);
}

TEST_CASE("dataset cache round trip") {
  const auto dir = testing::scratch_dir("dataset_cache");
  DatasetSpec spec;
  const auto tasks = generate_tasks(spec, 1, "test", 5);
  write_dataset_cache(dir, spec, 1, "test", tasks);
  CHECK(read_tasks_jsonl(dir / "test.jsonl") == tasks);
  const std::string manifest = testing::read_bytes(dir / "test.manifest.json");
  CHECK(manifest.find("\"count\"") != std::string::npos);
  CHECK(manifest.find("\"seed\"") != std::string::npos);
}

TEST_CASE("task validation") {
  Task t = testing::make_task({0.0}, {1.0}, {0.5}, {2.0});
  CHECK_NOTHROW(t.validate());
  t.y_tgt[0] = std::nan("");
  CHECK_THROWS_AS(t.validate(), DomainError);
  Task empty = testing::make_task({0.0}, {1.0}, {}, {});
  CHECK_THROWS_AS(empty.validate(), DomainError);
}

TEST_CASE("Lotka-Volterra fixed point is stationary") {
  LVConfig cfg;
  const LVState d = lv_derivative(cfg, {50.0, 100.0});
  CHECK(d.prey == 0.0);
  CHECK(d.predator == 0.0);
  const Tensor traj = simulate_lv(cfg);
  REQUIRE(traj.rows() == 256);
  REQUIRE(traj.cols() == 3);
  for (std::size_t i = 0; i < traj.rows(); ++i) {
    CHECK(traj(i, 1) == 50.0);
    CHECK(traj(i, 2) == 100.0);
  }
  CHECK(traj(255, 0) == doctest::Approx(25.0).epsilon(1e-15));
}

namespace {

// θ4 x − θ3 ln x + θ2 y − θ1 ln y, written independently of the library.
double invariant(double x, double y) {
  return 0.01 * x - 0.5 * std::log(x) + 0.01 * y - 1.0 * std::log(y);
}

}  // namespace

TEST_CASE("Lotka-Volterra invariant is conserved over one period") {
  LVConfig cfg;
  cfg.x0 = 80.0;
  cfg.y0 = 60.0;
  cfg.horizon = 2.0 * std::numbers::pi / std::sqrt(cfg.theta1 * cfg.theta3);
  cfg.grid_size = 512;
  const Tensor traj = simulate_lv(cfg);
  const double v0 = invariant(80.0, 60.0);
  CHECK(lv_invariant(cfg, {80.0, 60.0}) == doctest::Approx(v0).epsilon(1e-15));
  double drift = 0.0;
  for (std::size_t i = 0; i < traj.rows(); ++i) {
    drift = std::max(drift, std::fabs(invariant(traj(i, 1), traj(i, 2)) - v0) / std::fabs(v0));
  }
  CHECK(drift < 1e-4);
}

TEST_CASE("RK4 step halving changes the endpoint by less than 1e-6") {
  LVConfig coarse;
  coarse.x0 = 120.0;
  coarse.y0 = 70.0;
  LVConfig fine = coarse;
  fine.dt = coarse.dt / 2.0;
  const Tensor a = simulate_lv(coarse);
  const Tensor b = simulate_lv(fine);
  const std::size_t e = a.rows() - 1;
  CHECK(std::fabs(a(e, 1) - b(e, 1)) / std::fabs(b(e, 1)) < 1e-6);
  CHECK(std::fabs(a(e, 2) - b(e, 2)) / std::fabs(b(e, 2)) < 1e-6);
}

TEST_CASE("Lotka-Volterra configuration errors") {
  LVConfig bad;
  bad.theta2 = 0.0;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  LVConfig coarse;
  coarse.dt = 1.0;  // larger than horizon / grid
  CHECK_THROWS_AS(coarse.validate(), DomainError);
  // A huge predation rate drives the prey population negative within a step.
  LVConfig crash;
  crash.theta2 = 50.0;
  crash.dt = 0.1;
  crash.grid_size = 200;
  CHECK_THROWS_AS(simulate_lv(crash), SimulationError);
}

TEST_CASE("make_lv_task shapes, determinism and disjointness") {
  const Tensor traj = simulate_lv(LVConfig{.x0 = 90.0, .y0 = 110.0});
  const LVSplit lower{15, 15, 15, 30};
  RngStream a(0, "lv", 1);
  const Task t = make_lv_task(traj, a, lower);
  CHECK(t.x_ctx.shape() == std::array<std::size_t, 2>{15, 1});
  CHECK(t.y_tgt.shape() == std::array<std::size_t, 2>{15, 1});
  RngStream b(0, "lv", 1);
  CHECK(make_lv_task(traj, b, lower) == t);

  const LVSplit split;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    RngStream rng(8, "lv/indices", i);
    const SplitIndices idx = draw_split_indices(256, rng, split);
    std::set<std::size_t> all(idx.context.begin(), idx.context.end());
    all.insert(idx.target.begin(), idx.target.end());
    REQUIRE(all.size() == idx.context.size() + idx.target.size());
    CHECK(idx.context.size() >= 15);
    CHECK(idx.context.size() <= 85);
    CHECK(idx.target.size() >= 15);
    CHECK(idx.context.size() + idx.target.size() <= 100);
    CHECK(*all.rbegin() < 256);
  }
  RngStream c(0, "lv", 2);
  CHECK_THROWS_AS(draw_split_indices(20, c, lower), GenerationError);
}

TEST_CASE("LV task values are z-scored over the full grid") {
  const Tensor traj = simulate_lv(LVConfig{.x0 = 60.0, .y0 = 140.0});
  std::vector<double> pred(traj.rows());
  for (std::size_t i = 0; i < traj.rows(); ++i) pred[i] = traj(i, 2);
  const auto z = zscore(pred);
  double m = 0, ss = 0;
  for (double v : z) m += v / z.size();
  for (double v : z) ss += (v - m) * (v - m) / z.size();
  CHECK(std::fabs(m) < 1e-12);
  CHECK(std::fabs(std::sqrt(ss) - 1.0) < 1e-12);
  CHECK_THROWS_AS(zscore(std::vector<double>{2.0, 2.0, 2.0}), DomainError);
}

TEST_CASE("corrupt_context identity and independence") {
  const Task task = generate_task(DatasetSpec{}, 0, "train", 3);
  RngStream r0(1, "corrupt");
  CHECK(corrupt_context(task, {0.0}, r0) == task);

  Task other = task;
  for (double& y : other.y_ctx.values()) y += 5.0;
  RngStream r1(1, "corrupt");
  RngStream r2(1, "corrupt");
  const Task a = corrupt_context(task, {1.0}, r1);
  const Task b = corrupt_context(other, {1.0}, r2);
  CHECK(a.y_ctx == b.y_ctx);

  RngStream r3(1, "corrupt");
  const Task c = corrupt_context(task, {0.3}, r3);
  CHECK(c.x_ctx == task.x_ctx);
  CHECK(c.x_tgt == task.x_tgt);
  CHECK(c.y_tgt == task.y_tgt);
  CHECK_FALSE(c.y_ctx == task.y_ctx);

  RngStream r4(1, "corrupt");
  CHECK_THROWS_AS(corrupt_context(task, {-0.1}, r4), DomainError);
  CHECK_THROWS_AS(corrupt_context(task, {1.5}, r4), DomainError);
}

TEST_CASE("corrupt_context noise moments at beta 0.3") {
  const Task base = testing::make_task(std::vector<double>(100, 0.0), std::vector<double>(100, 2.0),
                                       {0.0}, {0.0});
  std::vector<double> resid;
  for (std::uint64_t i = 0; i < 100; ++i) {
    RngStream rng(5, "moments", i);
    const Task t = corrupt_context(base, {0.3}, rng);
    for (double y : t.y_ctx.values()) resid.push_back(y - 0.7 * 2.0);
  }
  REQUIRE(resid.size() == 10000);
  double m = 0, ss = 0;
  for (double v : resid) m += v / resid.size();
  for (double v : resid) ss += (v - m) * (v - m) / (resid.size() - 1);
  const double n = static_cast<double>(resid.size());
  CHECK(std::fabs(m) < 3 * 0.3 / std::sqrt(n));
  CHECK(std::fabs(std::sqrt(ss) - 0.3) < 3 * 0.3 / std::sqrt(2 * n));
}

namespace {

std::string series_csv(std::size_t rows, bool with_hare) {
  std::ostringstream s;
  s << (with_hare ? "year,hare,lynx\n" : "year,lynx\n");
  for (std::size_t i = 0; i < rows; ++i) {
    s << 1845 + i << ",";
    if (with_hare) s << 20 + (i * 37) % 50 << ",";
    s << 5 + (i * 13) % 41 << "\n";
  }
  return s.str();
}

}  // namespace

TEST_CASE("Hare-Lynx ingestion") {
  const auto dir = testing::scratch_dir("hare_lynx");
  testing::write_text(dir / "ok.csv", series_csv(90, true));
  const Task t = load_hare_lynx(dir / "ok.csv");
  CHECK(t.num_context() + t.num_target() == 90);
  const Tensor xs = t.x_all();
  const Tensor ys = t.y_all();
  for (const Tensor* col : {&xs, &ys}) {
    double m = 0, ss = 0;
    for (double v : col->values()) m += v / 90.0;
    for (double v : col->values()) ss += (v - m) * (v - m) / 90.0;
    CHECK(std::fabs(m) < 1e-9);
    CHECK(std::fabs(std::sqrt(ss) - 1.0) < 1e-9);
  }

  testing::write_text(dir / "nohare.csv", series_csv(40, false));
  CHECK(read_hare_lynx(dir / "nohare.csv").size() == 40);

  testing::write_text(dir / "const.csv", "year,hare,lynx\n1,2,3\n2,2,3\n3,2,3\n");
  CHECK_THROWS_AS(load_hare_lynx(dir / "const.csv"), IngestionError);
  testing::write_text(dir / "missing.csv", "year,hare\n1,2\n2,3\n");
  CHECK_THROWS_AS(read_hare_lynx(dir / "missing.csv"), IngestionError);
  testing::write_text(dir / "short.csv", "year,hare,lynx\n1,2,3\n");
  CHECK_THROWS_AS(read_hare_lynx(dir / "short.csv"), IngestionError);
  testing::write_text(dir / "text.csv", "year,hare,lynx\n1,2,3\n2,x,4\n3,1,2\n");
  try {
    read_hare_lynx(dir / "text.csv");
    FAIL("expected an ingestion error");
  } catch (const IngestionError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  CHECK_THROWS_AS(read_hare_lynx(dir / "absent.csv"), IngestionError);
}

TEST_CASE("bundled lynx series loads") {
  const auto series = read_hare_lynx(std::filesystem::path(RNP_SOURCE_DIR) / "data/lynx.csv");
  CHECK(series.size() == 114);
  CHECK(series.year.front() == 1821.0);
  CHECK(series.year.back() == 1934.0);
  const auto splits = hare_lynx_tasks(series, 10, 15, 45, 0);
  REQUIRE(splits.size() == 10);
  for (const Task& t : splits) {
    CHECK(t.num_context() >= 15);
    CHECK(t.num_context() <= 45);
    CHECK(t.num_context() + t.num_target() == 114);
  }
}
