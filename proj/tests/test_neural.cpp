#include <doctest.h>

#include <cmath>
#include <functional>

#include "graphgen/neural.hpp"
#include "test_util.hpp"

using namespace graphgen;
using testutil::TempDir;

namespace {

Mat random_mat(int rows, int cols, Rng& rng, double scale = 1.0) {
  Mat m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = rng.uniform_real(-scale, scale);
  return m;
}

/// Central finite differences against the accumulated analytic gradients.
/// loss(true) must accumulate gradients; loss(false) must be side-effect
/// free. Checks every entry of every parameter.
void gradcheck(const std::vector<Param*>& params,
               const std::function<double(bool)>& loss, double eps = 1e-5,
               double tol = 1e-4) {
  for (Param* p : params) p->zero_grad();
  loss(true);
  for (Param* p : params) {
    for (int j = 0; j < p->value.cols(); ++j)
      for (int i = 0; i < p->value.rows(); ++i) {
        const double saved = p->value(i, j);
        p->value(i, j) = saved + eps;
        const double up = loss(false);
        p->value(i, j) = saved - eps;
        const double down = loss(false);
        p->value(i, j) = saved;
        const double fd = (up - down) / (2.0 * eps);
        const double an = p->grad(i, j);
        const double rel = std::abs(fd - an) / std::max({std::abs(fd), std::abs(an), 1e-4});
        INFO(p->name, "(", i, ",", j, "): fd=", fd, " analytic=", an);
        CHECK(rel < tol);
      }
  }
}

}  // namespace

TEST_CASE("gru with zero weights halves the hidden state") {
  Rng rng(1);
  GruLayer layer("g", 3, 2, rng);
  for (Param* p : {&layer.wz, &layer.wr, &layer.wh, &layer.uz, &layer.ur,
                   &layer.uh, &layer.bz, &layer.br, &layer.bh})
    p->value.setZero();
  Mat x = random_mat(2, 4, rng);
  Mat h = random_mat(3, 4, rng);
  const Mat out = layer.forward(x, h, nullptr);
  CHECK((out - 0.5 * h).norm() == doctest::Approx(0.0));
}

TEST_CASE("scalar gru step matches a hand evaluation") {
  Rng rng(2);
  GruLayer layer("g", 1, 1, rng);
  layer.wz.value(0, 0) = 0.5;
  layer.uz.value(0, 0) = -0.3;
  layer.bz.value(0, 0) = 0.1;
  layer.wr.value(0, 0) = 0.2;
  layer.ur.value(0, 0) = 0.4;
  layer.br.value(0, 0) = -0.2;
  layer.wh.value(0, 0) = 1.0;
  layer.uh.value(0, 0) = 0.7;
  layer.bh.value(0, 0) = 0.0;

  Mat x(1, 1), h(1, 1);
  x(0, 0) = 0.8;
  h(0, 0) = -0.5;

  const auto sig = [](double a) { return 1.0 / (1.0 + std::exp(-a)); };
  const double z = sig(0.5 * 0.8 + (-0.3) * (-0.5) + 0.1);
  const double r = sig(0.2 * 0.8 + 0.4 * (-0.5) + (-0.2));
  const double htilde = std::tanh(1.0 * 0.8 + 0.7 * (r * -0.5));
  const double expected = (1.0 - z) * -0.5 + z * htilde;

  CHECK(layer.forward(x, h, nullptr)(0, 0) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("gru gradients match finite differences through a short scan") {
  Rng rng(3);
  for (int trial = 0; trial < 3; ++trial) {
    const int input = rng.uniform_int(1, 3), hidden = rng.uniform_int(1, 4);
    const int layers = rng.uniform_int(1, 3), batch = rng.uniform_int(1, 3);
    const int steps = rng.uniform_int(1, 3);
    Gru gru("g", input, hidden, layers, rng);
    std::vector<Mat> xs;
    for (int t = 0; t < steps; ++t) xs.push_back(random_mat(input, batch, rng));
    const Mat readout = random_mat(hidden, batch, rng);

    std::vector<Param*> params;
    gru.collect(params);

    auto loss = [&](bool backward) {
      std::vector<Mat> h = gru.zero_state(batch);
      std::vector<Gru::StepCache> caches(steps);
      double value = 0.0;
      for (int t = 0; t < steps; ++t) {
        const Mat top = gru.step(xs[t], h, &caches[t]);
        value += top.cwiseProduct(readout).sum();
      }
      if (backward) {
        std::vector<Mat> dh(layers, Mat::Zero(hidden, batch));
        for (int t = steps - 1; t >= 0; --t) gru.step_backward(caches[t], readout, dh);
      }
      return value;
    };
    gradcheck(params, loss);
  }
}

TEST_CASE("mlp forward activations") {
  Rng rng(5);
  Mlp mlp("m", {3, 4, 2}, OutputActivation::Sigmoid, rng);
  for (auto& layer : mlp.layers) {
    layer.w.value.setZero();
    layer.b.value.setZero();
  }
  const Mat out = mlp.forward(random_mat(3, 5, rng));
  for (int j = 0; j < 5; ++j)
    for (int i = 0; i < 2; ++i) CHECK(out(i, j) == doctest::Approx(0.5));

  Mlp soft("s", {3, 8}, OutputActivation::SoftmaxPerEntry, rng);
  const Mat probs = soft.forward(random_mat(3, 6, rng));
  for (int j = 0; j < 6; ++j) {
    CHECK(probs.block(0, j, 4, 1).sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(probs.block(4, j, 4, 1).sum() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("sigmoid outputs stay strictly inside (0,1)") {
  Mat x(1, 3);
  x << -40.0, 0.0, 40.0;
  const Mat s = sigmoid(x);
  for (int j = 0; j < 3; ++j) {
    CHECK(s(0, j) > 0.0);
    CHECK(s(0, j) < 1.0);
  }
}

TEST_CASE("mlp + bce gradients match finite differences") {
  Rng rng(7);
  for (int trial = 0; trial < 3; ++trial) {
    const int in = rng.uniform_int(2, 4), hidden = rng.uniform_int(2, 5);
    const int out = rng.uniform_int(1, 3), batch = rng.uniform_int(1, 4);
    Mlp mlp("m", {in, hidden, out}, OutputActivation::Sigmoid, rng);
    const Mat x = random_mat(in, batch, rng);
    Mat target(out, batch), mask(out, batch);
    for (int j = 0; j < batch; ++j)
      for (int i = 0; i < out; ++i) {
        target(i, j) = rng.bernoulli(0.5) ? 1.0 : 0.0;
        mask(i, j) = rng.bernoulli(0.8) ? 1.0 : 0.0;
      }
    if (mask.sum() == 0.0) mask(0, 0) = 1.0;

    std::vector<Param*> params;
    mlp.collect(params);
    auto loss = [&](bool backward) {
      Mlp::Cache cache;
      const Mat logits = mlp.forward_logits(x, backward ? &cache : nullptr);
      const Mat theta = sigmoid(logits);
      const double value = bce_loss(theta, target, mask);
      if (backward) {
        const Mat dlogits = bce_grad_logits(theta, target, mask, mask.sum());
        mlp.backward(cache, dlogits);
      }
      return value;
    };
    gradcheck(params, loss);
  }
}

TEST_CASE("ce loss gradients match finite differences") {
  Rng rng(9);
  for (int trial = 0; trial < 3; ++trial) {
    const int in = rng.uniform_int(2, 4), entries = rng.uniform_int(1, 5);
    Linear lin("l", 4, in, rng);
    const Mat x = random_mat(in, entries, rng);
    Mat onehot = Mat::Zero(4, entries);
    Mat mask(1, entries);
    for (int j = 0; j < entries; ++j) {
      onehot(rng.uniform_int(0, 3), j) = 1.0;
      mask(0, j) = rng.bernoulli(0.8) ? 1.0 : 0.0;
    }
    if (mask.sum() == 0.0) mask(0, 0) = 1.0;

    std::vector<Param*> params;
    lin.collect(params);
    auto loss = [&](bool backward) {
      const Mat logits = lin.forward(x);
      const double value = ce_loss(logits, onehot, mask);
      if (backward) lin.backward(x, ce_grad_logits(logits, onehot, mask, mask.sum()));
      return value;
    };
    gradcheck(params, loss);
  }
}

TEST_CASE("loss values on known cases") {
  Mat ones = Mat::Ones(3, 1), mask = Mat::Ones(3, 1);
  Mat perfect = Mat::Ones(3, 1);
  CHECK(bce_loss(perfect, ones, mask) <= 1.1e-7);

  Mat half = Mat::Constant(4, 1, 0.5);
  Mat targets(4, 1);
  targets << 1, 0, 1, 0;
  CHECK(bce_loss(half, targets, Mat::Ones(4, 1)) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));

  Mat theta(3, 1);
  theta << 0.9, 0.2, 0.7;
  Mat t3(3, 1);
  t3 << 1, 0, 1;
  const double expected = -(std::log(0.9) + std::log(0.8) + std::log(0.7)) / 3.0;
  CHECK(bce_loss(theta, t3, Mat::Ones(3, 1)) == doctest::Approx(expected).epsilon(1e-12));

  // Uniform logits over four classes cost ln 4 per entry.
  Mat logits = Mat::Zero(4, 5);
  Mat onehot = Mat::Zero(4, 5);
  for (int j = 0; j < 5; ++j) onehot(j % 4, j) = 1.0;
  CHECK(ce_loss(logits, onehot, Mat::Ones(1, 5)) ==
        doctest::Approx(std::log(4.0)).epsilon(1e-12));

  // Masked entries contribute nothing.
  Mat mask2 = Mat::Ones(3, 1);
  mask2(1, 0) = 0.0;
  Mat wild = theta;
  wild(1, 0) = 0.999;
  CHECK(bce_loss(theta, t3, mask2) == bce_loss(wild, t3, mask2));
}

TEST_CASE("lr schedule decays at the milestones") {
  AdamConfig cfg;
  CHECK(lr_schedule(cfg, 0) == doctest::Approx(0.003));
  CHECK(lr_schedule(cfg, 5999) == doctest::Approx(0.003));
  CHECK(lr_schedule(cfg, 6000) == doctest::Approx(0.003 * 0.3));
  CHECK(lr_schedule(cfg, 18000) == doctest::Approx(0.003 * 0.09));
  CHECK(lr_schedule(cfg, 50000) == doctest::Approx(0.003 * 0.09));
}

TEST_CASE("adam: zero gradients leave parameters unchanged") {
  Rng rng(11);
  Linear lin("l", 3, 2, rng);
  std::vector<Param*> params;
  lin.collect(params);
  AdamState state;
  state.init(params);
  const Mat before = lin.w.value;
  for (Param* p : params) p->zero_grad();
  AdamConfig cfg;
  adam_step(state, cfg, params);
  CHECK((lin.w.value - before).norm() == 0.0);
}

TEST_CASE("adam: first step moves by about -lr * sign(g)") {
  Rng rng(13);
  Linear lin("l", 2, 2, rng);
  std::vector<Param*> params;
  lin.collect(params);
  AdamState state;
  state.init(params);
  AdamConfig cfg;
  cfg.clip_norm = 0.0;  // disable clipping for the closed-form check
  const Mat before = lin.w.value;
  lin.w.grad.setConstant(0.37);
  lin.b.grad.setConstant(-0.11);
  adam_step(state, cfg, params);
  for (int j = 0; j < 2; ++j)
    for (int i = 0; i < 2; ++i)
      CHECK(before(i, j) - lin.w.value(i, j) == doctest::Approx(cfg.base_lr).epsilon(1e-6));
  CHECK(lin.b.value(0, 0) - 0.0 >= 0.0);  // moved up against a negative grad
}

TEST_CASE("adam runs are bitwise deterministic") {
  auto run = [] {
    Rng rng(17);
    Linear lin("l", 4, 3, rng);
    std::vector<Param*> params;
    lin.collect(params);
    AdamState state;
    state.init(params);
    AdamConfig cfg;
    Rng data(23);
    for (int step = 0; step < 50; ++step) {
      for (Param* p : params) p->zero_grad();
      lin.w.grad = random_mat(4, 3, data);
      lin.b.grad = random_mat(4, 1, data);
      clip_global_norm(params, cfg.clip_norm);
      adam_step(state, cfg, params);
    }
    return lin.w.value;
  };
  const Mat a = run(), b = run();
  CHECK((a.array() == b.array()).all());
}

TEST_CASE("global norm clipping") {
  Rng rng(19);
  Linear lin("l", 2, 2, rng);
  std::vector<Param*> params;
  lin.collect(params);
  lin.w.grad.setConstant(3.0);
  lin.b.grad.setConstant(4.0);
  const double norm = clip_global_norm(params, 1.0);
  CHECK(norm > 1.0);
  double after = 0.0;
  for (Param* p : params) after += p->grad.squaredNorm();
  CHECK(std::sqrt(after) == doctest::Approx(1.0));
}

TEST_CASE("checkpoints round-trip bitwise") {
  TempDir dir;
  Rng rng(29);
  Checkpoint ckpt;
  ckpt.config_json = "{\"model\":{}}";
  ckpt.step = 1234;
  ckpt.tensors.emplace_back("a", random_mat(3, 4, rng));
  ckpt.tensors.emplace_back("b", random_mat(1, 7, rng));
  ckpt.adam_step = 55;
  ckpt.adam_m = {random_mat(3, 4, rng), random_mat(1, 7, rng)};
  ckpt.adam_v = {random_mat(3, 4, rng), random_mat(1, 7, rng)};
  ckpt.rng_states["order"] = Rng(1).save_state();
  ckpt.trainer_state_json = "{\"cursor\":3}";

  const std::string path = dir.file("test.bin");
  save_checkpoint(path, ckpt);
  const Checkpoint back = load_checkpoint(path);

  CHECK(back.step == ckpt.step);
  CHECK(back.config_json == ckpt.config_json);
  CHECK(back.adam_step == ckpt.adam_step);
  REQUIRE(back.tensors.size() == 2);
  CHECK(back.tensors[0].first == "a");
  CHECK((back.tensors[0].second.array() == ckpt.tensors[0].second.array()).all());
  CHECK((back.adam_m[1].array() == ckpt.adam_m[1].array()).all());
  CHECK((back.adam_v[0].array() == ckpt.adam_v[0].array()).all());
  CHECK(back.rng_states.at("order") == ckpt.rng_states.at("order"));
  CHECK(back.trainer_state_json == ckpt.trainer_state_json);

  CHECK_THROWS_AS(load_checkpoint(dir.file("missing.bin")), std::runtime_error);
}
