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

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "rnp/errors.hpp"
#include "rnp/numkit/gradcheck.hpp"
#include "rnp/numkit/logspace.hpp"
#include "rnp/numkit/ops.hpp"
#include "rnp/numkit/rng.hpp"
#include "support.hpp"

using namespace rnp;

TEST_CASE("log_sum_exp examples") {
  const std::vector<double> two_zeros{0.0, 0.0};
  CHECK(log_sum_exp(two_zeros) == doctest::Approx(0.6931471805599453).epsilon(1e-15));
  const std::vector<double> big{1000.0, 1000.0};
  CHECK(log_sum_exp(big) == doctest::Approx(1000.0 + std::numbers::ln2).epsilon(1e-15));
  const std::vector<double> single{0.0};
  CHECK(log_sum_exp(single) == 0.0);
  CHECK_THROWS_AS(log_sum_exp(std::vector<double>{}), DomainError);
}

TEST_CASE("log_sum_exp infinities") {
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(log_sum_exp(std::vector<double>{-inf, -inf}) == -inf);
  CHECK(log_sum_exp(std::vector<double>{-inf, 0.0}) == 0.0);
  CHECK(log_sum_exp(std::vector<double>{inf, 0.0}) == inf);
}

TEST_CASE("log_sum_exp shift invariance and Jensen sandwich") {
  RngStream rng(11, "lse");
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform_int(0, 40));
    std::vector<double> v(n);
    for (double& e : v) e = rng.uniform(-50.0, 50.0);
    const double c = rng.uniform(-500.0, 500.0);
    std::vector<double> shifted = v;
    for (double& e : shifted) e += c;
    const double base = log_sum_exp(v);
    CHECK(std::fabs(log_sum_exp(shifted) - (base + c)) <= 1e-12 * std::max(1.0, std::fabs(base + c)));

    double mean = 0.0;
    double mx = -std::numeric_limits<double>::infinity();
    for (double e : v) {
      mean += e / static_cast<double>(n);
      mx = std::max(mx, e);
    }
    const double lme = base - std::log(static_cast<double>(n));
    CHECK(mean <= lme + 1e-12);
    CHECK(lme <= mx + 1e-12);
    CHECK(log_mean_exp(v) == doctest::Approx(lme).epsilon(1e-14));
  }
}

TEST_CASE("gaussian_log_pdf examples") {
  CHECK(gaussian_log_pdf(0.0, 0.0, 1.0) == doctest::Approx(-0.918938533204673).epsilon(1e-14));
  CHECK(gaussian_log_pdf(1.0, 0.0, 1.0) == doctest::Approx(-1.418938533204673).epsilon(1e-14));
  CHECK(gaussian_log_pdf(0.25, 0.25, 0.1) == doctest::Approx(1.3836465597893728).epsilon(1e-14));
  CHECK_THROWS_AS(gaussian_log_pdf(0.0, 0.0, 0.0), DomainError);
  CHECK_THROWS_AS(gaussian_log_pdf(0.0, 0.0, -1.0), DomainError);
}

TEST_CASE("gaussian_log_pdf agrees with the density written out") {
  RngStream rng(3, "pdf");
  for (int i = 0; i < 100; ++i) {
    const double y = rng.uniform(-3, 3), mu = rng.uniform(-3, 3), s = rng.uniform(0.2, 3);
    CHECK(gaussian_log_pdf(y, mu, s) ==
          doctest::Approx(std::log(testing::normal_pdf(y, mu, s))).epsilon(1e-13));
  }
}

TEST_CASE("pairwise_sum is order independent to rounding") {
  RngStream rng(5, "pairwise");
  std::vector<double> v(1000);
  for (double& e : v) e = rng.uniform(-1.0, 1.0);
  const double a = pairwise_sum(v);
  std::vector<double> r(v.rbegin(), v.rend());
  CHECK(std::fabs(pairwise_sum(r) - a) < 1e-12);
}

TEST_CASE("backward examples") {
  {
    Tape tape;
    Var a = tape.leaf(Tensor::scalar(3.0));
    const auto g = tape.gradient(ad::square(a), std::vector<Var>{a});
    CHECK(g[0].item() == 6.0);
  }
  {
    Tape tape;
    Var a = tape.leaf(Tensor::scalar(2.0));
    Var b = tape.leaf(Tensor::scalar(5.0));
    const auto g = tape.gradient(ad::mul(a, b), std::vector<Var>{a, b});
    CHECK(g[0].item() == 5.0);
    CHECK(g[1].item() == 2.0);
  }
  {
    Tape tape;
    Var a = tape.leaf(Tensor::scalar(0.0));
    Var v = ad::concat_cols(a, tape.constant(Tensor::scalar(0.0)));
    const auto g = tape.gradient(ad::log_sum_exp(v), std::vector<Var>{a});
    CHECK(g[0].item() == doctest::Approx(0.5).epsilon(1e-15));
  }
}

TEST_CASE("backward gives exact zeros for unreachable leaves") {
  Tape tape;
  Var a = tape.leaf(Tensor::row({1.0, 2.0}));
  Var unused = tape.leaf(Tensor(2, 3, 7.0));
  const auto g = tape.gradient(ad::sum(ad::exp(a)), std::vector<Var>{a, unused});
  REQUIRE(g[1].rows() == 2);
  REQUIRE(g[1].cols() == 3);
  for (double v : g[1].values()) CHECK(v == 0.0);
}

TEST_CASE("backward rejects a non-scalar output") {
  Tape tape;
  Var a = tape.leaf(Tensor::row({1.0, 2.0}));
  CHECK_THROWS_AS(tape.gradient(ad::exp(a), std::vector<Var>{a}), ContractError);
}

TEST_CASE("an operand used twice accumulates both adjoints") {
  Tape tape;
  Var x = tape.leaf(Tensor::row({1.5, -2.0, 0.25}));
  Var f = ad::add(ad::sum(ad::mul(x, x)), ad::sum(ad::add(x, x)));
  const auto g = tape.gradient(f, std::vector<Var>{x});
  CHECK(g[0][0] == 2 * 1.5 + 2);
  CHECK(g[0][1] == 2 * -2.0 + 2);
  CHECK(g[0][2] == 2 * 0.25 + 2);
}

TEST_CASE("finite_diff_check examples") {
  const TapeFunction sq = [](Tape&, std::span<const Var> p) { return ad::sum(ad::square(p[0])); };
  std::vector<Tensor> a{Tensor::scalar(3.0)};
  CHECK(finite_diff_check(sq, a, 1e-5).max_rel_error < 1e-8);

  const TapeFunction pdf = [](Tape& tape, std::span<const Var> p) {
    Var mu = ad::slice_rows(ad::reshape(p[0], 2, 1), 0, 1);
    Var sigma = ad::slice_rows(ad::reshape(p[0], 2, 1), 1, 1);
    return ad::sum(ad::gaussian_log_pdf(tape.constant(Tensor::scalar(1.0)), mu, sigma));
  };
  std::vector<Tensor> ms{Tensor::row({0.0, 1.0})};
  const GradCheckReport r = finite_diff_check(pdf, ms, 1e-5);
  CHECK(r.max_rel_error < 1e-6);
  const auto g = tape_gradient(pdf, ms);
  CHECK(g[0][0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::fabs(g[0][1]) < 1e-14);
}

TEST_CASE("finite_diff_check reports non-finite perturbations") {
  const TapeFunction f = [](Tape&, std::span<const Var> p) { return ad::sum(ad::log(p[0])); };
  std::vector<Tensor> a{Tensor::row({1.0, 1e-9})};
  const GradCheckReport r = finite_diff_check(f, a, 1e-5);
  REQUIRE(r.nonfinite_coordinate.has_value());
  CHECK(*r.nonfinite_coordinate == 1);
  CHECK_FALSE(r.ok(1.0));
}

namespace {

// Random expression over two 3×3 leaves. Every primitive can appear; inputs to
// log/div are pushed away from zero and exp sees bounded arguments.
Var random_expression(Var a, Var b, RngStream& rng, int depth) {
  if (depth <= 0) return rng.uniform() < 0.5 ? a : b;
  Var u = random_expression(a, b, rng, depth - 1);
  Var v = random_expression(a, b, rng, depth - 1 - static_cast<int>(rng.uniform_int(0, 1)));
  auto positive = [](Var x) { return ad::shift(ad::softplus(x), 0.5); };
  switch (rng.uniform_int(0, 21)) {
    case 0: return ad::add(u, v);
    case 1: return ad::sub(u, v);
    case 2: return ad::mul(u, v);
    case 3: return ad::div(u, positive(v));
    case 4: return ad::scale(u, -1.7);
    case 5: return ad::neg(ad::shift(u, 0.3));
    case 6: return ad::relu(ad::shift(u, 0.123));
    case 7: return ad::softplus(u);
    case 8: return ad::exp(ad::tanh(u));
    case 9: return ad::log(positive(u));
    case 10: return ad::square(ad::tanh(u));
    case 11: return ad::scale(ad::matmul(ad::tanh(u), ad::tanh(v)), 0.5);
    case 12: return ad::affine(ad::tanh(u), ad::tanh(v), ad::sum_rows(ad::tanh(u)));
    case 13: return ad::add(u, ad::sum_rows(v));
    case 14: return ad::mul(u, ad::sum_cols(ad::tanh(v)));
    case 15: return ad::sub(u, ad::mean_rows(v));
    case 16: return ad::add(u, ad::log_sum_exp_rows(v));
    case 17: return ad::sub(u, ad::log_sum_exp_cols(v));
    case 18:
      return ad::concat_rows(ad::slice_rows(u, 1, 2), ad::slice_rows(v, 0, 1));
    case 19:
      return ad::slice_rows(
          ad::reshape(ad::concat_cols(ad::reshape(u, 9, 1), ad::reshape(v, 9, 1)), 6, 3), 2, 3);
    case 20:
      return ad::slice_rows(ad::outer_add_rows(u, ad::slice_rows(v, 0, 1)), 0, 3);
    default:
      return ad::gaussian_log_pdf(u, ad::tanh(v), positive(ad::mul(u, v)));
  }
}

}  // namespace

TEST_CASE("backward matches finite differences on random compositions") {
  double worst = 0.0;
  for (std::uint64_t c = 0; c < 100; ++c) {
    RngStream init(17, "compose/init", c);
    std::vector<Tensor> params{init.normal_tensor(3, 3), init.normal_tensor(3, 3)};
    const std::uint64_t expr_seed = c;
    const int depth = 1 + static_cast<int>(c % 6);
    const TapeFunction f = [&](Tape&, std::span<const Var> p) {
      RngStream shape(17, "compose/shape", expr_seed);
      Var e = random_expression(p[0], p[1], shape, depth);
      return shape.uniform() < 0.5 ? ad::sum(e) : ad::log_sum_exp(e);
    };
    const GradCheckReport r = finite_diff_check(f, params, 1e-6);
    CHECK_MESSAGE(r.ok(1e-6), "case " << c << " error " << r.max_rel_error);
    worst = std::max(worst, r.max_rel_error);
  }
  MESSAGE("worst relative error " << worst);
}

TEST_CASE("broadcast gradients reduce back onto the broadcast dimension") {
  const TapeFunction f = [](Tape&, std::span<const Var> p) {
    return ad::sum(ad::square(ad::mul(ad::add(p[0], p[1]), p[2])));
  };
  RngStream rng(2, "broadcast");
  std::vector<Tensor> params{rng.normal_tensor(4, 3), rng.normal_tensor(1, 3),
                             rng.normal_tensor(4, 1)};
  CHECK(finite_diff_check(f, params, 1e-6).ok(1e-7));
}

TEST_CASE("tensor shape contract") {
  CHECK_THROWS_AS(Tensor(2, 2, std::vector<double>{1.0, 2.0, 3.0}), ContractError);
  CHECK_THROWS_AS(Tensor(2, 2).item(), ContractError);
  const Tensor t = Tensor::from_rows({{1, 2}, {3, 4}});
  CHECK(t.reshaped(1, 4).row_values(0) == std::vector<double>{1, 2, 3, 4});
  CHECK(concat_rows(t.slice_rows(0, 1), t.slice_rows(1, 1)) == t);
  CHECK(Tensor::uninitialized(3, 5).size() == 15);
}

TEST_CASE("binary ops reject incompatible shapes") {
  Tape tape;
  Var a = tape.leaf(Tensor(2, 3));
  Var b = tape.leaf(Tensor(3, 2));
  CHECK_THROWS_AS(ad::add(a, b), ContractError);
  CHECK_THROWS_AS(ad::matmul(a, a), ContractError);
}

TEST_CASE("RngStream determinism") {
  RngStream a(42, "purpose", 3, 1);
  RngStream b(42, "purpose", 3, 1);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());

  RngStream c(42, "purpose", 3, 1);
  RngStream d(42, "purpose", 3, 2);
  RngStream e(42, "other", 3, 1);
  RngStream f(43, "purpose", 3, 1);
  const auto first = c.next_u64();
  CHECK(first != d.next_u64());
  CHECK(first != e.next_u64());
  CHECK(first != f.next_u64());

  // Interleaving draws from other streams does not perturb a stream.
  RngStream g(9, "x");
  RngStream h(9, "x");
  RngStream other(9, "y");
  std::vector<double> lone, mixed;
  for (int i = 0; i < 100; ++i) lone.push_back(g.normal());
  for (int i = 0; i < 100; ++i) {
    other.normal();
    mixed.push_back(h.normal());
  }
  CHECK(lone == mixed);

  RngStream parent(1, "p");
  CHECK(parent.child("c", 2).next_u64() == RngStream(1, "p").child("c", 2).next_u64());
  RngStream copy = parent;
  CHECK(copy.next_u64() == parent.next_u64());
}

TEST_CASE("RngStream first draws are frozen") {
  RngStream rng(0, "frozen");
  const std::uint64_t a = rng.next_u64();
  RngStream again(0, "frozen");
  CHECK(a == again.next_u64());
  RngStream u(0, "frozen");
  const double x = u.uniform();
  CHECK(x >= 0.0);
  CHECK(x < 1.0);
}

TEST_CASE("RngStream distributions") {
  RngStream rng(7, "moments");
  constexpr int n = 200000;
  double s = 0, ss = 0, us = 0;
  std::int64_t lo = 100, hi = -100;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    s += z;
    ss += z * z;
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    us += u;
    const auto k = rng.uniform_int(-3, 4);
    lo = std::min(lo, k);
    hi = std::max(hi, k);
  }
  CHECK(std::fabs(s / n) < 3.0 / std::sqrt(n));
  CHECK(std::fabs(ss / n - 1.0) < 3.0 * std::sqrt(2.0 / n));
  CHECK(std::fabs(us / n - 0.5) < 3.0 * std::sqrt(1.0 / 12.0 / n));
  CHECK(lo == -3);
  CHECK(hi == 4);
}
